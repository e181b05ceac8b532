"""Round counts of the LOCAL simulation on the ring family as n grows.

Fixing costs three rounds per palette color and the palette depends on d only,
so only the coloring phase sees n, through its log* part.

    python3 notebooks/03_local_rounds.py
"""
import time

from sharplll.lll import GenSpec, generate_instance, verify_assignment
from sharplll.localsim import run_local

print(f"{'n':>6} {'colors':>6} {'fixing':>6} {'linial':>6} {'reduce':>6} {'occurring':>9} {'secs':>6}")
for n in (10, 100, 1000, 10_000):
    inst = generate_instance(GenSpec("ring", n))
    start = time.perf_counter()
    a, log = run_local(inst)
    secs = time.perf_counter() - start
    print(f"{n:>6} {log.colors_used:>6} {log.fixing_rounds:>6} {log.linial_rounds:>6} "
          f"{log.reduction_rounds:>6} {len(verify_assignment(inst, a)):>9} {secs:>6.1f}")
