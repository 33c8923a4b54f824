"""Hitori on 5x5 boards: exhaustive solver and backwards generator."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..errors import GenerationExhausted, InvalidGivens
from ..grid import Grid, as_grid

SIZE = 5


@dataclass
class HitoriInstance:
    numbers: Grid
    shade_mask: Grid


def _row_patterns(n: int) -> list[int]:
    """Shade patterns for one row with no two horizontally adjacent cells."""
    return [p for p in range(1 << n) if not p & (p >> 1)]


def unshaded_connected(mask: np.ndarray) -> bool:
    open_cells = list(zip(*np.nonzero(mask == 0)))
    if not open_cells:
        return False
    seen = {open_cells[0]}
    stack = [open_cells[0]]
    h, w = mask.shape
    while stack:
        r, c = stack.pop()
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and mask[nr, nc] == 0 and (nr, nc) not in seen:
                seen.add((nr, nc))
                stack.append((nr, nc))
    return len(seen) == len(open_cells)


def is_valid_mask(numbers, mask) -> bool:
    """Check the three rules directly; used by tests and by the generator."""
    numbers = np.asarray(numbers)
    mask = np.asarray(mask)
    if mask.shape != numbers.shape or not set(np.unique(mask).tolist()) <= {0, 1}:
        return False
    for k in range(numbers.shape[0]):
        row = numbers[k][mask[k] == 0]
        if len(set(row.tolist())) != len(row):
            return False
    for k in range(numbers.shape[1]):
        col = numbers[:, k][mask[:, k] == 0]
        if len(set(col.tolist())) != len(col):
            return False
    shaded = mask == 1
    if (shaded[1:] & shaded[:-1]).any() or (shaded[:, 1:] & shaded[:, :-1]).any():
        return False
    return unshaded_connected(mask)


def solve_hitori(numbers, limit: int | None = None) -> list[Grid]:
    """All shade masks satisfying the rules, found row by row.

    Rows are built from non-adjacent shade patterns; a row is pruned as soon
    as it clashes vertically with the row above or repeats an unshaded number
    in its row or in any column so far. Connectivity is checked on complete
    masks. ``limit`` stops the search once that many masks are found.
    """
    g = as_grid(numbers)
    h, w = g.shape
    if g.shape != (SIZE, SIZE) or g.min() < 1 or g.max() > SIZE:
        raise InvalidGivens(f"hitori needs a {SIZE}x{SIZE} grid of values 1..{SIZE}")
    vals = g.tolist()
    patterns = _row_patterns(w)
    # per row: patterns whose unshaded numbers are distinct
    row_ok = []
    for r in range(h):
        ok = []
        for p in patterns:
            kept = [vals[r][c] for c in range(w) if not p >> c & 1]
            if len(set(kept)) == len(kept):
                ok.append(p)
        row_ok.append(ok)

    solutions = []
    chosen = [0] * h
    col_used = [0] * w

    def rec(r: int, prev: int):
        if r == h:
            mask = np.array([[p >> c & 1 for c in range(w)] for p in chosen], dtype=np.uint8)
            if unshaded_connected(mask):
                solutions.append(mask)
            return
        for p in row_ok[r]:
            if limit is not None and len(solutions) >= limit:
                return
            if p & prev:
                continue
            clash = False
            for c in range(w):
                if not p >> c & 1 and col_used[c] >> vals[r][c] & 1:
                    clash = True
                    break
            if clash:
                continue
            for c in range(w):
                if not p >> c & 1:
                    col_used[c] |= 1 << vals[r][c]
            chosen[r] = p
            rec(r + 1, p)
            for c in range(w):
                if not p >> c & 1:
                    col_used[c] &= ~(1 << vals[r][c])

    rec(0, 0)
    return solutions


def _random_mask(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    mask = np.zeros((n, n), dtype=np.uint8)
    placed = 0
    for idx in rng.permutation(n * n):
        if placed == k:
            break
        r, c = divmod(int(idx), n)
        if any(0 <= r + dr < n and 0 <= c + dc < n and mask[r + dr, c + dc]
               for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1))):
            continue
        mask[r, c] = 1
        if unshaded_connected(mask):
            placed += 1
        else:
            mask[r, c] = 0
    return mask


def _random_latin(rng: np.random.Generator, n: int) -> np.ndarray:
    base = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    base = base[rng.permutation(n)][:, rng.permutation(n)]
    return rng.permutation(n)[base] + 1


def gen_hitori(seed, max_tries: int = 2000) -> HitoriInstance:
    """Work backwards from a random valid mask.

    Unshaded cells keep the values of a random Latin square, so they are
    already duplicate-free; each shaded cell copies a value seen among the
    unshaded cells of its row or column. Candidates are kept only when the
    exhaustive solver finds that mask and no other.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        k = int(rng.integers(3, 8))
        mask = _random_mask(rng, SIZE, k)
        numbers = _random_latin(rng, SIZE)
        for r, c in zip(*np.nonzero(mask)):
            pool = set(numbers[r][mask[r] == 0].tolist()) | set(numbers[:, c][mask[:, c] == 0].tolist())
            numbers[r, c] = rng.choice(sorted(pool))
        sols = solve_hitori(numbers, limit=2)
        if len(sols) == 1 and np.array_equal(sols[0], mask):
            return HitoriInstance(numbers.astype(np.uint8), mask)
    raise GenerationExhausted(max_tries)


def brute_force_masks(numbers) -> list[Grid]:
    """Reference enumeration over every row-wise non-adjacent mask (13**5 for 5x5).

    Rules are checked on the whole batch with array operations; only masks
    passing the duplicate and adjacency rules get a connectivity check.
    """
    numbers = np.asarray(numbers)
    n = numbers.shape[0]
    rows = np.array([[p >> c & 1 for c in range(n)] for p in _row_patterns(n)], dtype=bool)
    idx = np.array(list(product(range(len(rows)), repeat=n)))
    masks = rows[idx]  # (m, n, n)
    ok = ~(masks[:, 1:] & masks[:, :-1]).any(axis=(1, 2))
    for a in range(n):
        for b in range(a + 1, n):
            # equal numbers in a row (or column) need at least one of the pair shaded
            same_r = numbers[:, a] == numbers[:, b]
            ok &= ~(same_r & ~masks[:, :, a] & ~masks[:, :, b]).any(axis=1)
            same_c = numbers[a, :] == numbers[b, :]
            ok &= ~(same_c & ~masks[:, a, :] & ~masks[:, b, :]).any(axis=1)
    return [m.astype(np.uint8) for m in masks[ok] if unshaded_connected(m.astype(np.uint8))]
