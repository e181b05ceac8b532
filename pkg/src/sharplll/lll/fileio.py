"""Canonical JSON instance files.

Layout (keys sorted, two-space indent, trailing newline)::

    {
      "events": [{"id": 0, "occurring": [[1, 0]], "vbl": [0, 1]}, ...],
      "meta": {"d": 1, "family": "...", "p": "1/4", "seed": 7},
      "variables": [{"domain": [0, 1], "id": 0, "probs": ["1/2", "1/2"]}, ...]
    }

Probabilities are reduced ``"num/den"`` strings.  Symbols are ints or
strings.  ``meta.p`` and ``meta.d`` are recomputed on load and must match.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from ..errors import InstanceError
from .instance import Event, LLLInstance, Variable, require_criterion


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text) -> Fraction:
    if not isinstance(text, str):
        raise InstanceError(f"probabilities must be 'num/den' strings, got {text!r}")
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(f"cannot parse probability {text!r}") from None
    if q < 0 or q > 1:
        raise InstanceError(f"probability {text!r} is outside [0, 1]")
    return q


def _check_symbol(s, where: str):
    if isinstance(s, bool) or not isinstance(s, (int, str)):
        raise InstanceError(f"{where}: symbol {s!r} must be an int or a string")
    return s


def _check_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f"{where} must be an integer, got {value!r}")
    return value


def instance_from_dict(doc: Mapping, *, force: bool = False) -> LLLInstance:
    if not isinstance(doc, Mapping):
        raise InstanceError("instance document must be a JSON object")
    unknown = set(doc) - {"variables", "events", "meta"}
    if unknown:
        raise InstanceError(f"unknown top-level fields {sorted(unknown)}")
    try:
        raw_vars = list(doc["variables"])
        raw_events = list(doc["events"])
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"instance needs 'variables' and 'events' lists ({exc})") from None
    meta = doc.get("meta") or {}
    if not isinstance(meta, Mapping):
        raise InstanceError("meta must be an object")

    variables = []
    dropped: dict[int, set] = {}
    for rv in raw_vars:
        try:
            vid = _check_int(rv["id"], "variable id")
            domain = [_check_symbol(s, f"variable {vid}") for s in rv["domain"]]
            probs = [parse_fraction(q) for q in rv["probs"]]
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"malformed variable entry {rv!r} ({exc})") from None
        if len(domain) != len(probs):
            raise InstanceError(f"variable {vid}: domain and probs differ in length")
        # zero-probability symbols cannot be conditioned on
        keep = [(s, q) for s, q in zip(domain, probs) if q > 0]
        dropped[vid] = {s for s, q in zip(domain, probs) if q == 0}
        variables.append(Variable(vid, tuple(s for s, _ in keep), tuple(q for _, q in keep)))

    events = []
    for re_ in raw_events:
        try:
            eid = _check_int(re_["id"], "event id")
            vbl = tuple(_check_int(x, f"event {eid} vbl entry") for x in re_["vbl"])
            occ = [tuple(_check_symbol(s, f"event {eid}") for s in row) for row in re_["occurring"]]
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"malformed event entry {re_!r} ({exc})") from None
        occ = [row for row in occ
               if not any(x in dropped and s in dropped[x] for x, s in zip(vbl, row))]
        events.append(Event(eid, vbl, tuple(occ)))

    inst = LLLInstance(variables, events, meta)
    if "p" in meta and parse_fraction(meta["p"]) != inst.p:
        raise InstanceError(f"meta declares p = {meta['p']} but the events give {format_fraction(inst.p)}")
    if "d" in meta and _check_int(meta["d"], "meta.d") != inst.d:
        raise InstanceError(f"meta declares d = {meta['d']} but the dependency graph has d = {inst.d}")
    if "ids" in meta:
        node_ids(inst)
    if not force:
        require_criterion(inst)
    return inst


def node_ids(inst: LLLInstance) -> dict:
    """LOCAL identifiers per event: ``meta.ids`` (aligned with sorted event ids) or the event ids."""
    raw = inst.meta.get("ids")
    events = list(inst.events)
    if raw is None:
        return {e: e for e in events}
    if not isinstance(raw, list) or len(raw) != len(events):
        raise InstanceError("meta.ids must list one identifier per event")
    ids = [_check_int(i, "meta.ids entry") for i in raw]
    if len(set(ids)) != len(ids):
        raise InstanceError("meta.ids must be distinct")
    return dict(zip(events, ids))


def instance_to_dict(inst: LLLInstance) -> dict:
    meta = dict(inst.meta)
    meta["p"] = format_fraction(inst.p)
    meta["d"] = inst.d
    return {
        "events": [
            {"id": e.id, "occurring": [list(row) for row in e.occurring], "vbl": list(e.vbl)}
            for e in inst.events.values()
        ],
        "meta": meta,
        "variables": [
            {"domain": list(v.domain), "id": v.id, "probs": [format_fraction(q) for q in v.probs]}
            for v in inst.variables.values()
        ],
    }


def dumps(inst: LLLInstance) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=True, indent=2) + "\n"


def loads(text: str, *, force: bool = False) -> LLLInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from None
    return instance_from_dict(doc, force=force)


def load(path, *, force: bool = False) -> LLLInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None
    return loads(text, force=force)


def dump(inst: LLLInstance, path) -> None:
    Path(path).write_text(dumps(inst))


def dumps_assignment(assignment: Mapping) -> str:
    return json.dumps({str(k): v for k, v in sorted(assignment.items())}, sort_keys=True, indent=2) + "\n"


def loads_assignment(text: str) -> dict:
    try:
        raw = json.loads(text)
        return {int(k): v for k, v in raw.items()}
    except (json.JSONDecodeError, AttributeError, ValueError) as exc:
        raise InstanceError(f"malformed assignment: {exc}") from None
