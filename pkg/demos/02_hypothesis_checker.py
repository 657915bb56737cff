"""Checking the hypotheses of the self-adjointness criterion on the bundled examples.

    python3 demos/02_hypothesis_checker.py
"""

from magbilap import EXAMPLE_INSTANCES, load_instance

print(f"{'instance':<18} {'verdict':<14} {'C1':>8} {'N1':>4} {'K':>8} {'N':>4}")
for name, doc in EXAMPLE_INSTANCES.items():
    rep = load_instance(doc).check()
    d = rep.derived
    c1 = "-" if d["C1"] is None else f"{d['C1']:.4f}"
    k = "-" if d["K"] is None else f"{d['K']:.4f}"
    print(f"{name:<18} {rep.verdict:<14} {c1:>8} {str(d['N1'] or '-'):>4} {k:>8} "
          f"{str(d['N'] or '-'):>4}")
    notes = rep.checks["growth"]["notes"]
    if rep.verdict != "satisfied" and notes:
        print(f"{'':<18} growth: {notes[0]}")
