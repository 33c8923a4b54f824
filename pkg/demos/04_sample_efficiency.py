"""
How many examples until 90%?
============================

Reads the bundled accuracy-vs-n curves and reports, per task and model,
the smallest training-set size whose accuracy reaches a threshold.
"""

from gridtasks.evalkit import load_curves_csv, samples_to_threshold

curves = load_curves_csv(table="langton")
for delta in (0.5, 0.9, 0.99):
    print(f"delta = {delta}")
    for c in curves:
        n = samples_to_threshold(c, delta)
        print(f"  {c.task:11s} {c.model:24s} {'-' if n is None else n}")
    print()

# A curve that never gets there has no threshold at all
games = {(c.task, c.model): c for c in load_curves_csv(table="games")}
print("chess:", [samples_to_threshold(c) for (t, _), c in games.items() if t == "chess"])
