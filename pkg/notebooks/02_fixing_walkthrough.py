"""Fix the variables of a small generated instance one by one and watch the invariant.

    python3 notebooks/02_fixing_walkthrough.py
"""
from sharplll.lll import GenSpec, check_criterion, check_pstar, generate_instance, run_sequential, verify_assignment

inst = generate_instance(GenSpec("star-hyperedge", 8, max_rank=3, max_domain=3, d=3, seed=1))
crit = check_criterion(inst)
print(f"{len(inst.events)} events, {len(inst.variables)} variables, p={crit.p} d={crit.d} p*2^d={crit.value}")


def show(state, step):
    slack = check_pstar(state, step.endpoints).worst_slack
    req = [round(float(x), 4) for x in step.tuples[step.symbol]]
    print(f"X{step.variable:<3} -> {step.symbol!r:<3} endpoints={list(step.endpoints)} "
          f"requirement={req} tier={step.tier} slack={slack:.3e}")


assignment = run_sequential(inst, on_step=show)
print("occurring events:", verify_assignment(inst, assignment))
