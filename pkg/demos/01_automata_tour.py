"""
A tour of the three automata
============================

Elementary rule 110, a Life-like step, and a few moves of Langton's ant,
printed as text so nothing beyond numpy is needed.
"""

import numpy as np

from gridtasks import automata

def show(grid, chars=".#@"):
    for row in np.asarray(grid):
        print("".join(chars[v] for v in row))
    print()

# %% Rule 110 from a single live cell on a 32-cell ring
row = np.zeros(32, np.uint8)
row[-1] = 1
history = automata.eca_evolve(row, 110, 15)
show(history)

# The task view stores the seed row, then the evolution, with 0/1 mapped to 1/2
inp, out = automata.eca_task(row[:16], 7, rule=110, rows=8)
print("task input rows with content:", int((inp > 0).any(axis=1).sum()))
print("task output rows with content:", int((out > 0).any(axis=1).sum()))
print()

# %% Game of Life: a glider drifts one cell diagonally every four steps
glider = np.zeros((8, 8), np.uint8)
glider[0, 1] = glider[1, 2] = glider[2, 0:3] = 1
g = glider
for _ in range(4):
    g = automata.life_step(g, "B3/S23")
show(g)
assert np.array_equal(g[1:, 1:], glider[:-1, :-1])

# Other named rules use the same machinery
for name in sorted(automata.LIFE_RULES):
    print(f"{name:14s} {automata.life_rule(name)}")
print()

# %% Langton's ant, heading north on a blank field
state = automata.AntState(np.zeros((9, 9), np.uint8), (4, 4), "N")
for n in automata.ANT_HORIZONS:
    _, out = automata.ant_task_grids(state, n)
    print(f"after {n} steps:")
    show(out)
