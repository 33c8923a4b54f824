"""Connect 4 single-move-win positions on the standard 6x7 board.

Row 0 is the top of the board; tokens fall towards row 5.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GenerationExhausted, IllegalBoard
from ..grid import Grid, as_grid

ROWS, COLS = 6, 7
EMPTY, P1, P2 = 0, 1, 2
_DIRS = ((0, 1), (1, 0), (1, 1), (1, -1))


@dataclass
class Connect4Instance:
    board: Grid
    mover: int
    winning_column: int


def has_four(board: np.ndarray, player: int) -> bool:
    b = board == player
    if (b[:, :-3] & b[:, 1:-2] & b[:, 2:-1] & b[:, 3:]).any():
        return True
    if (b[:-3] & b[1:-2] & b[2:-1] & b[3:]).any():
        return True
    if (b[:-3, :-3] & b[1:-2, 1:-2] & b[2:-1, 2:-1] & b[3:, 3:]).any():
        return True
    return bool((b[:-3, 3:] & b[1:-2, 2:-1] & b[2:-1, 1:-2] & b[3:, :-3]).any())


def _line_through(board: np.ndarray, r: int, c: int, player: int) -> bool:
    for dr, dc in _DIRS:
        run = 1
        for sign in (1, -1):
            rr, cc = r + sign * dr, c + sign * dc
            while 0 <= rr < ROWS and 0 <= cc < COLS and board[rr, cc] == player:
                run += 1
                rr += sign * dr
                cc += sign * dc
        if run >= 4:
            return True
    return False


def landing_row(board: np.ndarray, col: int) -> int | None:
    empty = np.nonzero(board[:, col] == EMPTY)[0]
    return int(empty.max()) if empty.size else None


def infer_mover(board) -> int:
    b = np.asarray(board)
    n1, n2 = int((b == P1).sum()), int((b == P2).sum())
    if n1 == n2:
        return P1
    if n1 == n2 + 1:
        return P2
    raise IllegalBoard(f"token counts {n1}/{n2} cannot arise from alternating play")


def check_board(board, mover: int | None = None) -> np.ndarray:
    b = as_grid(board)
    if b.shape != (ROWS, COLS) or b.max() > P2:
        raise IllegalBoard(f"expected a {ROWS}x{COLS} board over {{0,1,2}}")
    for c in range(COLS):
        col = b[:, c]
        filled = np.nonzero(col)[0]
        if filled.size and filled.min() + filled.size != ROWS:
            raise IllegalBoard(f"floating token in column {c}")
    expected = infer_mover(b)
    if mover is not None and mover != expected:
        raise IllegalBoard(f"player {mover} is not on move (token parity says {expected})")
    if has_four(b, P1) or has_four(b, P2):
        raise IllegalBoard("board already contains a line of four")
    return b


def drop(board, col: int, player: int) -> Grid:
    b = np.array(board, dtype=np.uint8)
    r = landing_row(b, col)
    if r is None:
        raise IllegalBoard(f"column {col} is full")
    b[r, col] = player
    return b


def find_connect4_wins(board, mover: int | None = None) -> list[int]:
    """Columns where ``mover``'s drop completes a line of four."""
    b = check_board(board, mover)
    if mover is None:
        mover = infer_mover(b)
    wins = []
    for c in range(COLS):
        r = landing_row(b, c)
        if r is None:
            continue
        b[r, c] = mover
        if _line_through(b, r, c, mover):
            wins.append(c)
        b[r, c] = EMPTY
    return wins


def gen_connect4(seed, max_tries: int = 10_000) -> Connect4Instance:
    """Random legal playout, stopped at a random ply before anyone wins,
    kept only if the player on move has exactly one winning column."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        board = np.zeros((ROWS, COLS), dtype=np.uint8)
        target = int(rng.integers(6, ROWS * COLS - 1))
        player = P1
        ok = True
        for _ply in range(target):
            cols = [c for c in range(COLS) if board[0, c] == EMPTY]
            c = int(rng.choice(cols))
            r = landing_row(board, c)
            board[r, c] = player
            if _line_through(board, r, c, player):
                ok = False
                break
            player = P2 if player == P1 else P1
        if not ok:
            continue
        wins = find_connect4_wins(board, player)
        if len(wins) == 1:
            return Connect4Instance(board, player, wins[0])
    raise GenerationExhausted(max_tries)
