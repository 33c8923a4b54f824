"""Uniform instance generation across every task family.

Each instance draws from its own stream seeded by ``(seed, index)``, so
instance ``k`` is the same whether generated alone, in a batch, or in
parallel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from . import automata, route
from .errors import GenerationExhausted, ParseError
from .grid import Grid
from .puzzles import encode_game_grids, gen_connect4, gen_hitori, gen_sudoku, load_mate_fens

# task name -> registry family used for palette and render defaults
TASK_FAMILY = {
    "sudoku": "sudoku", "sudoku_mini": "sudoku_mini", "hitori": "hitori", "connect4": "connect4",
    "chess": "chess", "maze": "maze", "maze_small": "maze_small", "shortest_path": "shortest_path",
    "eca": "eca", "life": "life", "ant": "ant",
}
ROUTE_TASKS = ("maze", "maze_small", "shortest_path")


@dataclass
class TaskInstance:
    id: str
    task: str
    seed: int
    index: int
    input: Grid
    output: Grid
    meta: dict = field(default_factory=dict)


def instance_rng_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & (2**64 - 1), int(index)])


def _sudoku(ss, size=9, clues=None, **_):
    clues = clues if clues is not None else (40 if size == 9 else 8)
    inst = gen_sudoku(size, clues, ss)
    return (*encode_game_grids(inst), {"size": size, "clues": clues})


def _sudoku_mini(ss, clues=8, **_):
    return _sudoku(ss, size=4, clues=clues)


def _hitori(ss, **_):
    return (*encode_game_grids(gen_hitori(ss)), {})


def _connect4(ss, **_):
    inst = gen_connect4(ss)
    return (*encode_game_grids(inst), {"mover": inst.mover, "winning_column": inst.winning_column})


def _maze(preset):
    def make(ss, rooms_w=None, rooms_h=None, pad=None, **_):
        w, h, p = route.MAZE_PRESETS[preset]
        inst = route.gen_maze(rooms_w or w, rooms_h or h, p if pad is None else pad, ss)
        return inst.grid, inst.solution, {"start": list(inst.start), "goal": list(inst.goal)}
    return make


def _shortest_path(ss, width=15, height=15, density=0.25, **_):
    inst = route.gen_shortest_path(width, height, density, ss)
    return inst.grid, inst.solution, {"source": list(inst.source), "target": list(inst.target)}


def _eca(ss, rule=110, width=16, steps=7, rows=8, boundary="toroidal", **_):
    i, o = automata.gen_eca(rule, ss, width=width, steps=steps, rows=rows, boundary=boundary)
    return i, o, {"rule": int(rule), "steps": steps, "boundary": boundary}


def _life(ss, rule="game_of_life", size=8, steps=1, boundary="fixed-dead", **_):
    i, o = automata.gen_life(rule, ss, size=size, steps=steps, boundary=boundary)
    return i, o, {"rule": str(automata.life_rule(rule)), "steps": steps, "boundary": boundary}


def _ant(ss, horizon=2, size=8, **_):
    i, o = automata.gen_ant(ss, horizon, size=size)
    return i, o, {"horizon": horizon, "heading": "N"}


GENERATORS: dict[str, Callable] = {
    "sudoku": _sudoku, "sudoku_mini": _sudoku_mini, "hitori": _hitori, "connect4": _connect4,
    "maze": _maze("maze"), "maze_small": _maze("maze_small"), "shortest_path": _shortest_path,
    "eca": _eca, "life": _life, "ant": _ant,
}
TASKS = tuple(sorted([*GENERATORS, "chess"]))


def bundled_mate_fens() -> str:
    return str(resources.files("gridtasks") / "data" / "mate_in_1.txt")


def _chess_instances(n: int, seed: int, fen_file=None) -> list[TaskInstance]:
    """Chess positions come from a verified FEN list, shuffled by ``seed``."""
    pool = load_mate_fens(fen_file or bundled_mate_fens())
    if n > len(pool):
        raise GenerationExhausted(len(pool))
    order = np.random.default_rng(instance_rng_seed(seed, 0)).permutation(len(pool))[:n]
    out = []
    for k, j in enumerate(order):
        inst = pool[int(j)]
        out.append(TaskInstance(f"chess-{k:05d}", "chess", seed, k, *encode_game_grids(inst),
                                {"mate": inst.mate_move.uci()}))
    return out


def make_instances(task: str, n: int, seed: int, **knobs) -> list[TaskInstance]:
    if n < 0:
        raise ValueError("instance count must be >= 0")
    if task == "chess":
        return _chess_instances(n, seed, knobs.get("fen_file"))
    try:
        gen = GENERATORS[task]
    except KeyError:
        raise ParseError(f"unknown task {task!r}; choose from {', '.join(TASKS)}") from None
    out = []
    for k in range(n):
        inp, outp, meta = gen(instance_rng_seed(seed, k), **knobs)
        out.append(TaskInstance(f"{task}-{k:05d}", task, seed, k, inp, outp, meta))
    return out


def reference_pairs() -> dict[str, tuple[Grid, Grid]]:
    """The bundled worked examples, one (input, output) pair per task family."""
    raw = json.loads((resources.files("gridtasks") / "data" / "reference_pairs.json").read_text())
    return {k: (np.array(v["input"], dtype=np.uint8), np.array(v["output"], dtype=np.uint8))
            for k, v in raw.items()}
