"""Elementary, Life-like and Langton's-ant automata with their task encodings.

Boundary modes are ``"toroidal"`` (wrap) and ``"fixed-dead"`` (phantom
cells outside the field are 0). ECA tasks default to toroidal, Life-like
and ant tasks to fixed-dead; those are the settings that reproduce the
reference pairs shipped in ``data/reference_pairs.json``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import AntOutOfBounds, DimensionMismatch, GenerationExhausted, NonBinaryCell, ParseError
from .grid import Grid

BOUNDARIES = ("toroidal", "fixed-dead")

# ECA task cells: 0 = not yet computed, 1 = dead, 2 = alive
ECA_ENCODING = {0: 1, 1: 2}
ANT_VALUE = 2
ANT_HORIZONS = (2, 3, 5, 10)
HEADINGS = "NESW"
_MOVES = {"N": (-1, 0), "E": (0, 1), "S": (1, 0), "W": (0, -1)}


def _check_boundary(boundary: str) -> None:
    if boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary mode {boundary!r}; expected one of {BOUNDARIES}")


# -- elementary -------------------------------------------------------------------


@dataclass(frozen=True)
class EcaRule:
    number: int

    def __post_init__(self):
        if not 0 <= int(self.number) <= 255:
            raise ParseError(f"ECA rule {self.number} outside 0..255")

    @property
    def table(self) -> np.ndarray:
        """Next state indexed by 4*left + 2*center + right."""
        return np.array([(self.number >> k) & 1 for k in range(8)], dtype=np.uint8)

    def mirror(self) -> "EcaRule":
        """Left-right reflected rule."""
        out = 0
        for k in range(8):
            l, c, r = k >> 2 & 1, k >> 1 & 1, k & 1
            if self.number >> k & 1:
                out |= 1 << (4 * r + 2 * c + l)
        return EcaRule(out)


def _as_rule(rule) -> EcaRule:
    return rule if isinstance(rule, EcaRule) else EcaRule(int(rule))


def eca_step(row, rule, boundary: str = "toroidal") -> np.ndarray:
    _check_boundary(boundary)
    row = np.asarray(row, dtype=np.uint8)
    if row.ndim != 1 or row.size == 0:
        raise DimensionMismatch("ECA row must be a nonempty 1-D vector")
    if boundary == "toroidal":
        left, right = np.roll(row, 1), np.roll(row, -1)
    else:
        left = np.concatenate(([0], row[:-1])).astype(np.uint8)
        right = np.concatenate((row[1:], [0])).astype(np.uint8)
    return _as_rule(rule).table[4 * left + 2 * row + right]


def eca_evolve(row, rule, steps: int, boundary: str = "toroidal") -> np.ndarray:
    """(steps+1, width) history starting with ``row``."""
    rows = [np.asarray(row, dtype=np.uint8)]
    for _ in range(steps):
        rows.append(eca_step(rows[-1], rule, boundary))
    return np.stack(rows)


def eca_task(initial_row, steps: int, rule=110, rows: int = 8, boundary: str = "toroidal",
             encoding: dict[int, int] | None = None) -> tuple[Grid, Grid]:
    """Seed row atop blank rows, and the grid holding rows 0..steps of the evolution."""
    enc = ECA_ENCODING if encoding is None else encoding
    if steps < 0 or steps + 1 > rows:
        raise DimensionMismatch(f"{steps} steps need {steps + 1} rows, grid has {rows}")
    history = eca_evolve(initial_row, rule, steps, boundary)
    lut = np.array([enc[0], enc[1]], dtype=np.uint8)
    width = history.shape[1]
    inp = np.zeros((rows, width), dtype=np.uint8)
    inp[0] = lut[history[0]]
    out = np.zeros((rows, width), dtype=np.uint8)
    out[: steps + 1] = lut[history]
    return inp, out


def decode_eca_row(row, encoding: dict[int, int] | None = None) -> np.ndarray:
    enc = ECA_ENCODING if encoding is None else encoding
    inv = {v: k for k, v in enc.items()}
    try:
        return np.array([inv[int(v)] for v in row], dtype=np.uint8)
    except KeyError as exc:
        raise NonBinaryCell(f"value {exc.args[0]} is not an encoded ECA state") from None


def wolfram_class_rules() -> dict[int, tuple[int, ...]]:
    return {1: (8, 32, 128, 160), 2: (4, 108, 170, 250), 3: (30, 45, 90, 150), 4: (110, 54, 62, 106)}


def gen_eca(rule, seed, width: int = 16, steps: int = 7, rows: int = 8, density: float = 0.5,
            boundary: str = "toroidal") -> tuple[Grid, Grid]:
    rng = np.random.default_rng(seed)
    seed_row = (rng.random(width) < density).astype(np.uint8)
    return eca_task(seed_row, steps, rule, rows, boundary)


# -- life-like ----------------------------------------------------------------------


@dataclass(frozen=True)
class LifeRule:
    birth: frozenset = field(default_factory=frozenset)
    survive: frozenset = field(default_factory=frozenset)

    def __str__(self) -> str:
        return "B" + "".join(map(str, sorted(self.birth))) + "/S" + "".join(map(str, sorted(self.survive)))


_BS = re.compile(r"^B(\d*)/S(\d*|∅)$", re.IGNORECASE)


def parse_bs(text: str) -> LifeRule:
    m = _BS.match(text.strip())
    if not m:
        raise ParseError(f"not a B/S rule string: {text!r}")
    b, s = m.group(1), m.group(2).replace("∅", "")
    for ch in b + s:
        if ch == "9":
            raise ParseError(f"neighbour count 9 out of range in {text!r}")
    return LifeRule(frozenset(map(int, b)), frozenset(map(int, s)))


LIFE_RULES = {
    "game_of_life": "B3/S23",
    "life_b3s2": "B3/S2",
    "day_and_night": "B3678/S34678",
    "life_maze": "B3/S12345",
    "seeds": "B2/S",
}


def life_rule(name_or_text: str) -> LifeRule:
    return parse_bs(LIFE_RULES.get(name_or_text, name_or_text))


def neighbour_counts(grid: np.ndarray, boundary: str) -> np.ndarray:
    g = grid.astype(np.uint8)
    if boundary == "toroidal":
        return sum(np.roll(np.roll(g, dr, 0), dc, 1)
                   for dr in (-1, 0, 1) for dc in (-1, 0, 1) if dr or dc)
    p = np.pad(g, 1)
    h, w = g.shape
    return sum(p[1 + dr:1 + dr + h, 1 + dc:1 + dc + w]
               for dr in (-1, 0, 1) for dc in (-1, 0, 1) if dr or dc)


def life_step(grid, rule, boundary: str = "fixed-dead") -> Grid:
    _check_boundary(boundary)
    g = np.asarray(grid)
    if g.size and g.max() > 1:
        raise NonBinaryCell("life grids hold only 0 and 1")
    rule = rule if isinstance(rule, LifeRule) else life_rule(rule)
    n = neighbour_counts(g, boundary)
    born = np.isin(n, list(rule.birth)) & (g == 0)
    kept = np.isin(n, list(rule.survive)) & (g == 1)
    return (born | kept).astype(np.uint8)


def gen_life(rule, seed, size: int = 8, steps: int = 1, density: float = 0.4,
             boundary: str = "fixed-dead") -> tuple[Grid, Grid]:
    rng = np.random.default_rng(seed)
    g = (rng.random((size, size)) < density).astype(np.uint8)
    out = g
    for _ in range(steps):
        out = life_step(out, rule, boundary)
    return g, out


# -- langton's ant ------------------------------------------------------------------


@dataclass(frozen=True)
class AntState:
    grid: np.ndarray
    ant_pos: tuple[int, int]
    heading: str = "N"

    def __post_init__(self):
        h, w = np.shape(self.grid)
        r, c = self.ant_pos
        if not (0 <= r < h and 0 <= c < w):
            raise AntOutOfBounds(0)
        if self.heading not in HEADINGS:
            raise ParseError(f"heading must be one of {HEADINGS}")

    def key(self) -> tuple:
        return (self.grid.tobytes(), self.ant_pos, self.heading)


def ant_steps(start: AntState, n: int, boundary: str = "fixed-dead") -> AntState:
    """Turn right on 0 / left on 1, flip the cell, step forward; ``n`` times."""
    _check_boundary(boundary)
    g = np.array(start.grid, dtype=np.uint8)
    h, w = g.shape
    (r, c), d = start.ant_pos, HEADINGS.index(start.heading)
    for step in range(1, n + 1):
        d = (d + (1 if g[r, c] == 0 else -1)) % 4
        g[r, c] ^= 1
        dr, dc = _MOVES[HEADINGS[d]]
        r, c = r + dr, c + dc
        if boundary == "toroidal":
            r, c = r % h, c % w
        elif not (0 <= r < h and 0 <= c < w):
            raise AntOutOfBounds(step)
    return AntState(g, (r, c), HEADINGS[d])


def ant_task_grids(state: AntState, n: int, boundary: str = "fixed-dead") -> tuple[Grid, Grid]:
    end = ant_steps(state, n, boundary)
    inp = np.array(state.grid, dtype=np.uint8)
    inp[state.ant_pos] = ANT_VALUE
    out = np.array(end.grid, dtype=np.uint8)
    out[end.ant_pos] = ANT_VALUE
    return inp, out


def ant_state_from_grid(grid, heading: str = "N", under: int = 0) -> AntState:
    """Recover the state from an encoded input grid (the ant sits on ``under``)."""
    g = np.array(grid, dtype=np.uint8)
    pos = np.argwhere(g == ANT_VALUE)
    if len(pos) != 1:
        raise ParseError(f"expected one ant cell, found {len(pos)}")
    r, c = (int(v) for v in pos[0])
    g[r, c] = under
    if g.max() > 1:
        raise NonBinaryCell("ant field holds only 0 and 1 besides the ant")
    return AntState(g, (r, c), heading)


def gen_ant(seed, n: int, size: int = 8, density: float = 0.4, max_tries: int = 1000) -> tuple[Grid, Grid]:
    """Random field with the ant on a 0 cell heading North, resampled until it stays inside."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        g = (rng.random((size, size)) < density).astype(np.uint8)
        r, c = (int(v) for v in rng.integers(size, size=2))
        g[r, c] = 0
        try:
            return ant_task_grids(AntState(g, (r, c), "N"), n)
        except AntOutOfBounds:
            continue
    raise GenerationExhausted(max_tries)
