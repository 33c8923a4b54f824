"""Maze and shortest-path tasks, the BFS oracle, and path metrics.

Both tasks share one cell encoding: 0 wall, 1 open, 2 goal/target,
3 start/source, 4 path. Solutions keep the endpoint values and mark the
cells between them with 4.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadDimensions, CellNotOpen, EncodingError, GenerationExhausted
from .grid import Grid, as_grid

WALL, OPEN, GOAL, START, PATH = 0, 1, 2, 3, 4
# expansion order for BFS: up, down, left, right
STEPS = ((-1, 0), (1, 0), (0, -1), (0, 1))

# rooms_w, rooms_h, pad: both presets land on a 21x21 canvas
MAZE_PRESETS = {"maze": (10, 10, 0), "maze_small": (6, 6, 4)}

Cell = tuple[int, int]


@dataclass
class MazeInstance:
    grid: Grid
    solution: Grid
    start: Cell
    goal: Cell


@dataclass
class PathInstance:
    grid: Grid
    solution: Grid
    source: Cell
    target: Cell


@dataclass
class PathCheck:
    valid: bool
    length: int | None = None
    reason: str = ""


@dataclass
class PathMetrics:
    psr: float
    rpl_mean: float | None
    n_valid: int
    n_total: int

    def row(self, task: str, n: int | None = None) -> dict:
        return {"task": task, "n": "" if n is None else n, "psr": self.psr,
                "rpl_mean": "" if self.rpl_mean is None else self.rpl_mean,
                "n_valid": self.n_valid, "n_total": self.n_total}


METRIC_COLUMNS = ["task", "n", "psr", "rpl_mean", "n_valid", "n_total"]


def metrics_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=METRIC_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


# -- search ---------------------------------------------------------------------


def bfs_shortest(grid, src: Cell, dst: Cell) -> list[Cell] | None:
    """Shortest 4-connected path over non-wall cells, or None if unreachable."""
    g = np.asarray(grid)
    h, w = g.shape
    for name, (r, c) in (("source", src), ("target", dst)):
        if not (0 <= r < h and 0 <= c < w) or g[r, c] == WALL:
            raise CellNotOpen(f"{name} {(r, c)} is not an open cell")
    src, dst = tuple(src), tuple(dst)
    parent = {src: None}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        if cur == dst:
            break
        r, c = cur
        for dr, dc in STEPS:
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and g[nr, nc] != WALL and (nr, nc) not in parent:
                parent[(nr, nc)] = cur
                queue.append((nr, nc))
    if dst not in parent:
        return None
    path = [dst]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def find_endpoints(grid) -> tuple[Cell, Cell]:
    """(start/source, goal/target) of an encoded input grid."""
    g = np.asarray(grid)
    starts = np.argwhere(g == START)
    goals = np.argwhere(g == GOAL)
    if len(starts) != 1 or len(goals) != 1:
        raise EncodingError(f"expected one start (3) and one goal (2), found {len(starts)} and {len(goals)}")
    return tuple(int(v) for v in starts[0]), tuple(int(v) for v in goals[0])


def mark_path(grid, path: Sequence[Cell]) -> Grid:
    out = np.array(grid, dtype=np.uint8)
    for r, c in path[1:-1]:
        out[r, c] = PATH
    return out


def solve_route(grid) -> Grid:
    """Gold output for a maze or shortest-path input grid."""
    g = as_grid(grid)
    s, t = find_endpoints(g)
    path = bfs_shortest(g, s, t)
    if path is None:
        raise EncodingError("goal is unreachable from start")
    return mark_path(g, path)


# -- generation ---------------------------------------------------------------------


def gen_maze(cells_w: int, cells_h: int, pad: int, seed, pad_value: int = OPEN) -> MazeInstance:
    """Perfect maze by iterative recursive backtracking on a room lattice.

    ``cells_w x cells_h`` rooms expand to a ``(2h+1) x (2w+1)`` lattice (rooms
    on odd coordinates), which is then surrounded by ``pad`` cells of
    ``pad_value`` on every side. Start is the top-left room, goal the
    bottom-right one; a 1x1 maze has start == goal and only the start mark.
    """
    if cells_w < 1 or cells_h < 1 or pad < 0:
        raise BadDimensions(f"need at least one room and pad >= 0, got {cells_w}x{cells_h}, pad {pad}")
    lh, lw = 2 * cells_h + 1, 2 * cells_w + 1
    if max(lh, lw) + 2 * pad > 64:
        raise BadDimensions("maze canvas exceeds 64 cells per side")
    rng = np.random.default_rng(seed)
    lat = np.full((lh, lw), WALL, dtype=np.uint8)
    visited = np.zeros((cells_h, cells_w), dtype=bool)
    stack = [(0, 0)]
    visited[0, 0] = True
    lat[1, 1] = OPEN
    while stack:
        r, c = stack[-1]
        nbrs = [(r + dr, c + dc) for dr, dc in STEPS
                if 0 <= r + dr < cells_h and 0 <= c + dc < cells_w and not visited[r + dr, c + dc]]
        if not nbrs:
            stack.pop()
            continue
        nr, nc = nbrs[int(rng.integers(len(nbrs)))]
        visited[nr, nc] = True
        lat[r + nr + 1, c + nc + 1] = OPEN  # knock down the wall between the rooms
        lat[2 * nr + 1, 2 * nc + 1] = OPEN
        stack.append((nr, nc))
    grid = np.full((lh + 2 * pad, lw + 2 * pad), pad_value, dtype=np.uint8)
    grid[pad:pad + lh, pad:pad + lw] = lat
    start = (pad + 1, pad + 1)
    goal = (pad + lh - 2, pad + lw - 2)
    grid[goal] = GOAL
    grid[start] = START
    if start == goal:
        return MazeInstance(grid, grid.copy(), start, goal)
    path = bfs_shortest(grid, start, goal)
    return MazeInstance(grid, mark_path(grid, path), start, goal)


def gen_maze_preset(name: str, seed) -> MazeInstance:
    w, h, pad = MAZE_PRESETS[name]
    return gen_maze(w, h, pad, seed)


def gen_shortest_path(w: int = 15, h: int = 15, obstacle_density: float = 0.25, seed=None,
                      max_tries: int = 1000) -> PathInstance:
    """Open field with a wall border and uniformly scattered obstacles.

    Source and target are drawn uniformly from distinct open cells; the
    layout is redrawn until they are connected.
    """
    if not 0 <= obstacle_density <= 0.45:
        raise BadDimensions(f"obstacle density {obstacle_density} outside [0, 0.45]")
    if w < 3 or h < 3 or w > 64 or h > 64:
        raise BadDimensions(f"field {w}x{h} must be between 3x3 and 64x64")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        grid = np.full((h, w), WALL, dtype=np.uint8)
        inner = np.where(rng.random((h - 2, w - 2)) < obstacle_density, WALL, OPEN)
        grid[1:-1, 1:-1] = inner
        open_cells = np.argwhere(grid == OPEN)
        if len(open_cells) < 2:
            continue
        i, j = rng.choice(len(open_cells), size=2, replace=False)
        src = tuple(int(v) for v in open_cells[i])
        dst = tuple(int(v) for v in open_cells[j])
        path = bfs_shortest(grid, src, dst)
        if path is None:
            continue
        grid[src] = START
        grid[dst] = GOAL
        return PathInstance(grid, mark_path(grid, path), src, dst)
    raise GenerationExhausted(max_tries)


def open_graph_stats(grid, region: tuple[slice, slice] | None = None) -> tuple[int, int, int]:
    """(open cells, 4-adjacent open pairs, connected components) inside ``region``."""
    g = np.asarray(grid) if region is None else np.asarray(grid)[region]
    open_ = g != WALL
    vertices = int(open_.sum())
    edges = int((open_[1:] & open_[:-1]).sum() + (open_[:, 1:] & open_[:, :-1]).sum())
    seen = np.zeros_like(open_)
    comps = 0
    for r, c in np.argwhere(open_):
        if seen[r, c]:
            continue
        comps += 1
        stack = [(r, c)]
        seen[r, c] = True
        while stack:
            y, x = stack.pop()
            for dy, dx in STEPS:
                ny, nx = y + dy, x + dx
                if 0 <= ny < g.shape[0] and 0 <= nx < g.shape[1] and open_[ny, nx] and not seen[ny, nx]:
                    seen[ny, nx] = True
                    stack.append((ny, nx))
    return vertices, edges, comps


# -- scoring -----------------------------------------------------------------------


def validate_path(input_grid, predicted_grid) -> PathCheck:
    """Is the set of 4-marked cells, plus both endpoints, one simple chain?

    Marks on walls, gaps, branches and stray marks all make the prediction
    invalid. Length counts every cell of the chain, endpoints included.
    """
    inp = np.asarray(input_grid)
    pred = np.asarray(predicted_grid)
    if inp.shape != pred.shape:
        raise EncodingError(f"input {inp.shape} and prediction {pred.shape} differ in shape")
    s, t = find_endpoints(inp)
    marks = {tuple(int(v) for v in rc) for rc in np.argwhere(pred == PATH)}
    for r, c in marks:
        if inp[r, c] == WALL:
            return PathCheck(False, reason=f"path crosses wall at {(r, c)}")
    nodes = marks | {s, t}

    def degree(cell):
        r, c = cell
        return sum((r + dr, c + dc) in nodes for dr, dc in STEPS)

    for cell in marks:
        if cell in (s, t):
            continue
        if degree(cell) != 2:
            return PathCheck(False, reason=f"cell {cell} has {degree(cell)} path neighbours")
    if degree(s) != 1 or degree(t) != 1:
        return PathCheck(False, reason="endpoints must each touch the path exactly once")
    # walk from the source; a simple chain reaches the target using every node
    prev, cur, count = None, s, 1
    while cur != t:
        r, c = cur
        nxt = [(r + dr, c + dc) for dr, dc in STEPS if (r + dr, c + dc) in nodes and (r + dr, c + dc) != prev]
        if len(nxt) != 1:
            return PathCheck(False, reason=f"chain breaks at {cur}")
        prev, cur = cur, nxt[0]
        count += 1
    if count != len(nodes):
        return PathCheck(False, reason="disconnected marks besides the chain")
    return PathCheck(True, count)


def compute_metrics(pairs: Iterable[tuple]) -> PathMetrics:
    """PSR over all pairs; RPL averaged over valid predictions only.

    ``pairs`` holds ``(input, gold, predicted)``; a ``None`` prediction
    (missing or undecodable) counts as invalid.
    """
    ratios = []
    total = 0
    for inp, _gold, pred in pairs:
        total += 1
        if pred is None:
            continue
        check = validate_path(inp, pred)
        if not check.valid:
            continue
        s, t = find_endpoints(inp)
        best = len(bfs_shortest(inp, s, t))
        ratios.append(check.length / best)
    psr = len(ratios) / total if total else 0.0
    rpl = float(np.mean(ratios)) if ratios else None
    return PathMetrics(psr, rpl, len(ratios), total)
