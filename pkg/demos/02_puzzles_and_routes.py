"""
Puzzles with unique answers, and route scoring
==============================================
"""

import numpy as np

from gridtasks import route
from gridtasks.puzzles import count_sudoku_solutions, find_connect4_wins, gen_connect4, gen_hitori, gen_sudoku
from gridtasks.puzzles.hitori import solve_hitori

# %% A 9x9 sudoku; the generator only keeps puzzles with one completion
s = gen_sudoku(9, 40, seed=1)
print(s.givens)
print("givens:", int((s.givens > 0).sum()), "solutions:", count_sudoku_solutions(s.givens))
print()

# %% Hitori: 1 marks a shaded cell
h = gen_hitori(seed=1)
print(h.numbers)
print(h.shade_mask)
print("solutions:", len(solve_hitori(h.numbers)))
print()

# %% Connect Four: exactly one column wins on the spot
c = gen_connect4(seed=1)
print(c.board)
print("mover", c.mover, "wins with column", find_connect4_wins(c.board, c.mover))
print()

# %% Mazes: 0 wall, 1 open, 2 goal, 3 start, 4 path
m = route.gen_maze_preset("maze", seed=3)
for r in m.solution:
    print("".join("#.GS*"[v] for v in r))
print()

# %% Shortest path scoring: PSR is the share of valid paths, RPL their length over the optimum
p = route.gen_shortest_path(seed=5)
s, t = route.find_endpoints(p.grid)
best = route.bfs_shortest(p.grid, s, t)
print("optimal length:", len(best))

wrong = p.grid.copy()  # nothing marked: not a path
m = route.compute_metrics([(p.grid, p.solution, p.solution), (p.grid, p.solution, wrong)])
print(f"psr={m.psr:.2f} rpl={m.rpl_mean:.2f} valid={m.n_valid}/{m.n_total}")
