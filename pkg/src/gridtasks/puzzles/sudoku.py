"""Sudoku (4x4 and 9x9): solution counting and unique-solution generation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidGivens, Unsatisfiable
from ..grid import Grid, as_grid

# below these counts no uniquely-solvable puzzle exists
MIN_CLUES = {4: 4, 9: 17}


@dataclass
class SudokuInstance:
    size: int
    box: int
    givens: Grid
    solution: Grid


def _box_of(size: int) -> int:
    box = int(round(size ** 0.5))
    if box * box != size:
        raise InvalidGivens(f"unsupported sudoku size {size}")
    return box


class _Board:
    """Bitmask bookkeeping for rows, columns and boxes."""

    def __init__(self, givens: np.ndarray):
        self.n = n = givens.shape[0]
        self.b = _box_of(n)
        self.full = (1 << n) - 1
        self.cells = [int(v) for v in givens.ravel()]
        self.rows = [0] * n
        self.cols = [0] * n
        self.boxes = [0] * n
        self.box_idx = [(i // n) // self.b * self.b + (i % n) // self.b for i in range(n * n)]
        for i, v in enumerate(self.cells):
            if v:
                r, c, bx = i // n, i % n, self.box_idx[i]
                bit = 1 << (v - 1)
                if (self.rows[r] | self.cols[c] | self.boxes[bx]) & bit:
                    raise InvalidGivens(f"value {v} repeated around cell ({r}, {c})")
                self.rows[r] |= bit
                self.cols[c] |= bit
                self.boxes[bx] |= bit

    def candidates(self, i: int) -> int:
        n = self.n
        return self.full & ~(self.rows[i // n] | self.cols[i % n] | self.boxes[self.box_idx[i]])

    def place(self, i: int, v: int):
        bit = 1 << (v - 1)
        n = self.n
        self.cells[i] = v
        self.rows[i // n] |= bit
        self.cols[i % n] |= bit
        self.boxes[self.box_idx[i]] |= bit

    def clear(self, i: int, v: int):
        bit = ~(1 << (v - 1))
        n = self.n
        self.cells[i] = 0
        self.rows[i // n] &= bit
        self.cols[i % n] &= bit
        self.boxes[self.box_idx[i]] &= bit

    def search(self, cap: int, order_rng: np.random.Generator | None = None,
               collect: list | None = None) -> int:
        """Depth-first count of completions (minimum-remaining-values branching)."""
        empties = [i for i, v in enumerate(self.cells) if v == 0]
        count = 0

        def rec(empties: list[int]) -> bool:
            nonlocal count
            if not empties:
                count += 1
                if collect is not None:
                    collect.append(list(self.cells))
                return count >= cap
            best, best_mask, best_n = -1, 0, 99
            for k, i in enumerate(empties):
                m = self.candidates(i)
                c = m.bit_count()
                if c < best_n:
                    best, best_mask, best_n = k, m, c
                    if c <= 1:
                        break
            if best_n == 0:
                return False
            i = empties[best]
            rest = empties[:best] + empties[best + 1:]
            values = [v + 1 for v in range(self.n) if best_mask >> v & 1]
            if order_rng is not None:
                order_rng.shuffle(values)
            for v in values:
                self.place(i, v)
                stop = rec(rest)
                self.clear(i, v)
                if stop:
                    return True
            return False

        rec(empties)
        return count


def check_givens(givens) -> np.ndarray:
    g = as_grid(givens)
    n = g.shape[0]
    if g.shape != (n, n) or n not in (4, 9) or g.max() > n:
        raise InvalidGivens(f"expected a 4x4 or 9x9 grid with values 0..n, got shape {g.shape}")
    return g


def count_sudoku_solutions(givens, cap: int = 2) -> int:
    """Number of completions of ``givens`` (0 = empty), stopping once ``cap`` is reached."""
    g = check_givens(givens)
    return _Board(g).search(cap)


def solve_sudoku(givens) -> Grid | None:
    """One completion, or None."""
    g = check_givens(givens)
    found: list = []
    _Board(g).search(1, collect=found)
    if not found:
        return None
    return np.array(found[0], dtype=np.uint8).reshape(g.shape)


def sudoku_solutions(givens, cap: int = 100) -> list[Grid]:
    """Up to ``cap`` completions, in search order."""
    g = check_givens(givens)
    found: list = []
    _Board(g).search(cap, collect=found)
    return [np.array(f, dtype=np.uint8).reshape(g.shape) for f in found]


def is_valid_solution(grid) -> bool:
    g = np.asarray(grid)
    n = g.shape[0]
    b = _box_of(n)
    want = set(range(1, n + 1))
    for k in range(n):
        if set(g[k].tolist()) != want or set(g[:, k].tolist()) != want:
            return False
    for br in range(0, n, b):
        for bc in range(0, n, b):
            if set(g[br:br + b, bc:bc + b].ravel().tolist()) != want:
                return False
    return True


def _random_full(size: int, rng: np.random.Generator) -> np.ndarray:
    board = _Board(np.zeros((size, size), dtype=np.uint8))
    found: list = []
    board.search(1, order_rng=rng, collect=found)
    return np.array(found[0], dtype=np.uint8).reshape(size, size)


def gen_sudoku(size: int, clue_target: int, seed, max_fills: int = 20) -> SudokuInstance:
    """Fill a random grid, then dig cells in shuffled order while uniqueness holds.

    Stops when ``clue_target`` givens remain. If digging stalls above the
    target, a fresh fill is tried, up to ``max_fills`` times.
    """
    box = _box_of(size)
    if size not in MIN_CLUES:
        raise InvalidGivens(f"unsupported sudoku size {size}")
    if not MIN_CLUES[size] <= clue_target <= size * size:
        raise Unsatisfiable(clue_target)
    rng = np.random.default_rng(seed)
    for _ in range(max_fills):
        solution = _random_full(size, rng)
        givens = solution.copy()
        clues = size * size
        for idx in rng.permutation(size * size):
            if clues == clue_target:
                break
            r, c = divmod(int(idx), size)
            keep = givens[r, c]
            givens[r, c] = 0
            if _Board(givens).search(2) == 1:
                clues -= 1
            else:
                givens[r, c] = keep
        if clues == clue_target:
            return SudokuInstance(size, box, givens, solution)
    raise Unsatisfiable(clue_target)
