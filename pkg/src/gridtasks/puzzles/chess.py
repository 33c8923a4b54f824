"""Chess positions on the 13-value grid encoding, legal move generation,
perft and mate-in-one checks.

Grid encoding: 0 empty, 1..6 white pawn, knight, bishop, rook, queen, king,
7..12 the black pieces in the same order. Row 0 is rank 8, column 0 is
file a, so the grid reads like a diagram with White at the bottom.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ..errors import IllegalMove, IllegalPosition, ParseError
from ..grid import Grid, as_grid

EMPTY = 0
PAWN, KNIGHT, BISHOP, ROOK, QUEEN, KING = range(1, 7)
_FEN_PIECES = "PNBRQK"

_KNIGHT_STEPS = ((-2, -1), (-2, 1), (-1, -2), (-1, 2), (1, -2), (1, 2), (2, -1), (2, 1))
_KING_STEPS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_ROOK_DIRS = ((-1, 0), (1, 0), (0, -1), (0, 1))
_BISHOP_DIRS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


def piece(kind: int, white: bool) -> int:
    return kind if white else kind + 6


def kind_of(v: int) -> int:
    return 0 if v == 0 else (v - 1) % 6 + 1


def is_white(v: int) -> bool:
    return 1 <= v <= 6


def square_name(sq: int) -> str:
    r, c = divmod(sq, 8)
    return "abcdefgh"[c] + str(8 - r)


def parse_square(name: str) -> int:
    if len(name) != 2 or name[0] not in "abcdefgh" or name[1] not in "12345678":
        raise ParseError(f"bad square {name!r}")
    return (8 - int(name[1])) * 8 + "abcdefgh".index(name[0])


class Move(NamedTuple):
    frm: int
    to: int
    promotion: int | None = None  # piece kind: KNIGHT..QUEEN

    def uci(self) -> str:
        promo = "" if self.promotion is None else "nbrq"[self.promotion - KNIGHT]
        return square_name(self.frm) + square_name(self.to) + promo

    @classmethod
    def from_uci(cls, text: str) -> "Move":
        text = text.strip()
        if len(text) not in (4, 5):
            raise ParseError(f"bad move {text!r}")
        promo = None
        if len(text) == 5:
            if text[4] not in "nbrq":
                raise ParseError(f"bad promotion in {text!r}")
            promo = KNIGHT + "nbrq".index(text[4])
        return cls(parse_square(text[:2]), parse_square(text[2:4]), promo)


@dataclass(frozen=True)
class Position:
    board: tuple[int, ...]  # 64 squares, index = row * 8 + col
    white_to_move: bool = True
    castling: str = ""  # subset of "KQkq"
    ep_square: int | None = None
    halfmove: int = 0
    fullmove: int = 1

    def grid(self) -> Grid:
        return np.array(self.board, dtype=np.uint8).reshape(8, 8)


# -- FEN / grid conversion --------------------------------------------------


def position_from_fen(fen: str) -> Position:
    parts = fen.split()
    if len(parts) < 2:
        raise ParseError(f"FEN needs at least placement and side: {fen!r}")
    ranks = parts[0].split("/")
    if len(ranks) != 8:
        raise ParseError(f"FEN placement needs 8 ranks: {fen!r}")
    board = []
    for rank in ranks:
        row = []
        for ch in rank:
            if ch.isdigit():
                row.extend([EMPTY] * int(ch))
            elif ch.upper() in _FEN_PIECES:
                row.append(piece(_FEN_PIECES.index(ch.upper()) + 1, ch.isupper()))
            else:
                raise ParseError(f"bad FEN piece {ch!r}")
        if len(row) != 8:
            raise ParseError(f"FEN rank {rank!r} does not have 8 files")
        board.extend(row)
    if parts[1] not in ("w", "b"):
        raise ParseError(f"bad side to move {parts[1]!r}")
    castling = parts[2] if len(parts) > 2 and parts[2] != "-" else ""
    if any(ch not in "KQkq" for ch in castling):
        raise ParseError(f"bad castling field {castling!r}")
    ep = parse_square(parts[3]) if len(parts) > 3 and parts[3] != "-" else None
    half = int(parts[4]) if len(parts) > 4 else 0
    full = int(parts[5]) if len(parts) > 5 else 1
    return Position(tuple(board), parts[1] == "w", castling, ep, half, full)


def position_to_fen(pos: Position) -> str:
    ranks = []
    for r in range(8):
        out, gap = "", 0
        for c in range(8):
            v = pos.board[r * 8 + c]
            if v == EMPTY:
                gap += 1
                continue
            if gap:
                out += str(gap)
                gap = 0
            ch = _FEN_PIECES[kind_of(v) - 1]
            out += ch if is_white(v) else ch.lower()
        ranks.append(out + (str(gap) if gap else ""))
    ep = "-" if pos.ep_square is None else square_name(pos.ep_square)
    return (f"{'/'.join(ranks)} {'w' if pos.white_to_move else 'b'} "
            f"{pos.castling or '-'} {ep} {pos.halfmove} {pos.fullmove}")


def _infer_castling(board: tuple[int, ...]) -> str:
    rights = ""
    if board[60] == piece(KING, True):
        if board[63] == piece(ROOK, True):
            rights += "K"
        if board[56] == piece(ROOK, True):
            rights += "Q"
    if board[4] == piece(KING, False):
        if board[7] == piece(ROOK, False):
            rights += "k"
        if board[0] == piece(ROOK, False):
            rights += "q"
    return rights


def position_from_grid(grid, white_to_move: bool = True, castling: str | None = None) -> Position:
    """Grid -> position. Castling rights default to whatever the piece
    placement still allows, since a bare grid cannot say more."""
    g = as_grid(grid, max_value=12)
    if g.shape != (8, 8):
        raise IllegalPosition(f"chess grid must be 8x8, got {g.shape}")
    board = tuple(int(v) for v in g.ravel())
    if castling is None:
        castling = _infer_castling(board)
    return Position(board, white_to_move, castling)


# -- attack and move generation ---------------------------------------------


def _on(r: int, c: int) -> bool:
    return 0 <= r < 8 and 0 <= c < 8


def is_attacked(board, sq: int, by_white: bool) -> bool:
    r, c = divmod(sq, 8)
    # pawns: a white pawn attacks from the row below (higher row index)
    pr = r + 1 if by_white else r - 1
    pawn = piece(PAWN, by_white)
    for dc in (-1, 1):
        if _on(pr, c + dc) and board[pr * 8 + c + dc] == pawn:
            return True
    knight = piece(KNIGHT, by_white)
    for dr, dc in _KNIGHT_STEPS:
        if _on(r + dr, c + dc) and board[(r + dr) * 8 + c + dc] == knight:
            return True
    king = piece(KING, by_white)
    for dr, dc in _KING_STEPS:
        if _on(r + dr, c + dc) and board[(r + dr) * 8 + c + dc] == king:
            return True
    queen = piece(QUEEN, by_white)
    for dirs, slider in ((_ROOK_DIRS, piece(ROOK, by_white)), (_BISHOP_DIRS, piece(BISHOP, by_white))):
        for dr, dc in dirs:
            rr, cc = r + dr, c + dc
            while _on(rr, cc):
                v = board[rr * 8 + cc]
                if v != EMPTY:
                    if v == slider or v == queen:
                        return True
                    break
                rr += dr
                cc += dc
    return False


def king_square(board, white: bool) -> int | None:
    try:
        return board.index(piece(KING, white))
    except ValueError:
        return None


def in_check(pos: Position, white: bool | None = None) -> bool:
    side = pos.white_to_move if white is None else white
    k = king_square(pos.board, side)
    return k is not None and is_attacked(pos.board, k, not side)


def _pseudo_moves(pos: Position):
    b = pos.board
    white = pos.white_to_move
    own = is_white if white else (lambda v: v > 6)
    enemy = (lambda v: v > 6) if white else is_white
    for sq, v in enumerate(b):
        if v == EMPTY or not own(v):
            continue
        r, c = divmod(sq, 8)
        k = kind_of(v)
        if k == PAWN:
            step = -1 if white else 1
            start_row = 6 if white else 1
            last_row = 0 if white else 7
            r1 = r + step
            if _on(r1, c) and b[r1 * 8 + c] == EMPTY:
                yield from _pawn_push(sq, r1 * 8 + c, r1 == last_row)
                r2 = r + 2 * step
                if r == start_row and b[r2 * 8 + c] == EMPTY:
                    yield Move(sq, r2 * 8 + c)
            for dc in (-1, 1):
                if not _on(r1, c + dc):
                    continue
                t = r1 * 8 + c + dc
                if (b[t] != EMPTY and enemy(b[t])) or t == pos.ep_square:
                    yield from _pawn_push(sq, t, r1 == last_row)
        elif k == KNIGHT or k == KING:
            for dr, dc in (_KNIGHT_STEPS if k == KNIGHT else _KING_STEPS):
                if _on(r + dr, c + dc):
                    t = (r + dr) * 8 + c + dc
                    if b[t] == EMPTY or enemy(b[t]):
                        yield Move(sq, t)
        else:
            dirs = {BISHOP: _BISHOP_DIRS, ROOK: _ROOK_DIRS, QUEEN: _ROOK_DIRS + _BISHOP_DIRS}[k]
            for dr, dc in dirs:
                rr, cc = r + dr, c + dc
                while _on(rr, cc):
                    t = rr * 8 + cc
                    if b[t] == EMPTY:
                        yield Move(sq, t)
                    else:
                        if enemy(b[t]):
                            yield Move(sq, t)
                        break
                    rr += dr
                    cc += dc
    yield from _castles(pos)


def _pawn_push(frm: int, to: int, promotes: bool):
    if promotes:
        for kind in (QUEEN, ROOK, BISHOP, KNIGHT):
            yield Move(frm, to, kind)
    else:
        yield Move(frm, to)


def _castles(pos: Position):
    b = pos.board
    white = pos.white_to_move
    home = 7 if white else 0
    king_sq = home * 8 + 4
    if b[king_sq] != piece(KING, white):
        return
    rights = pos.castling
    rook = piece(ROOK, white)
    enemy_white = not white
    if (("K" if white else "k") in rights and b[home * 8 + 7] == rook
            and b[home * 8 + 5] == EMPTY and b[home * 8 + 6] == EMPTY
            and not any(is_attacked(b, home * 8 + f, enemy_white) for f in (4, 5, 6))):
        yield Move(king_sq, home * 8 + 6)
    if (("Q" if white else "q") in rights and b[home * 8] == rook
            and all(b[home * 8 + f] == EMPTY for f in (1, 2, 3))
            and not any(is_attacked(b, home * 8 + f, enemy_white) for f in (2, 3, 4))):
        yield Move(king_sq, home * 8 + 2)


def apply_move(pos: Position, move: Move) -> Position:
    """Play ``move`` without legality checks (see :func:`legal_moves`)."""
    b = list(pos.board)
    frm, to = move.frm, move.to
    v = b[frm]
    white = pos.white_to_move
    k = kind_of(v)
    captured = b[to]
    b[frm] = EMPTY
    if k == PAWN and to == pos.ep_square and captured == EMPTY:
        b[to + (8 if white else -8)] = EMPTY
    b[to] = piece(move.promotion, white) if move.promotion else v
    if k == KING and abs(to - frm) == 2:
        if to > frm:
            b[to - 1], b[to + 1] = b[to + 1], EMPTY
        else:
            b[to + 1], b[to - 2] = b[to - 2], EMPTY
    rights = pos.castling
    for sq, lost in ((60, "KQ"), (63, "K"), (56, "Q"), (4, "kq"), (7, "k"), (0, "q")):
        if frm == sq or to == sq:
            rights = "".join(ch for ch in rights if ch not in lost)
    ep = None
    if k == PAWN and abs(to - frm) == 16:
        ep = (frm + to) // 2
    half = 0 if k == PAWN or captured != EMPTY else pos.halfmove + 1
    full = pos.fullmove + (0 if white else 1)
    return Position(tuple(b), not white, rights, ep, half, full)


def check_position(pos: Position) -> None:
    b = pos.board
    for white in (True, False):
        if b.count(piece(KING, white)) != 1:
            raise IllegalPosition(f"{'white' if white else 'black'} must have exactly one king")
    for c in range(8):
        if kind_of(b[c]) == PAWN or kind_of(b[56 + c]) == PAWN:
            raise IllegalPosition("pawn on the first or last rank")
    if in_check(pos, not pos.white_to_move):
        raise IllegalPosition("the side not on move is in check")


def legal_moves(pos: Position) -> list[Move]:
    check_position(pos)
    return _legal(pos)


def _legal(pos: Position) -> list[Move]:
    out = []
    for m in _pseudo_moves(pos):
        nxt = apply_move(pos, m)
        if not in_check(nxt, pos.white_to_move):
            out.append(m)
    return out


def perft(pos: Position, depth: int) -> int:
    check_position(pos)
    return _perft(pos, depth)


def _perft(pos: Position, depth: int) -> int:
    if depth == 0:
        return 1
    moves = _legal(pos)
    if depth == 1:
        return len(moves)
    return sum(_perft(apply_move(pos, m), depth - 1) for m in moves)


def is_checkmate(pos: Position) -> bool:
    return in_check(pos) and not _legal(pos)


def is_stalemate(pos: Position) -> bool:
    return not in_check(pos) and not _legal(pos)


STARTING_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


# -- mate in one --------------------------------------------------------------


@dataclass
class ChessInstance:
    position: Position
    mate_move: Move

    @property
    def board(self) -> Grid:
        return self.position.grid()

    def output_board(self) -> Grid:
        return apply_move(self.position, self.mate_move).grid()


def _require_white(pos: Position):
    if not pos.white_to_move:
        raise IllegalPosition("mate-in-one positions must have white to move")


def verify_mate_in_1(pos: Position, move: Move) -> bool:
    _require_white(pos)
    if move not in legal_moves(pos):
        raise IllegalMove(f"{move.uci()} is not legal here")
    return is_checkmate(apply_move(pos, move))


def find_mates_in_1(pos: Position) -> list[Move]:
    _require_white(pos)
    return [m for m in legal_moves(pos) if is_checkmate(apply_move(pos, m))]


def move_between(before, after) -> Move | None:
    """Recover the white move turning grid ``before`` into grid ``after``, if any."""
    pos = position_from_grid(before)
    target = as_grid(after, max_value=12)
    for m in _legal(pos):
        if np.array_equal(apply_move(pos, m).grid(), target):
            return m
    return None


def is_mating_prediction(before, predicted) -> bool:
    """True when ``predicted`` is the board after some mating move from ``before``."""
    try:
        m = move_between(before, predicted)
    except Exception:
        return False
    return m is not None and is_checkmate(apply_move(position_from_grid(before), m))


def load_mate_fens(path) -> list[ChessInstance]:
    """Read ``FEN;uci_move`` lines (``#`` comments allowed) and verify each.

    A line without a move is accepted when the position has exactly one
    mating move, which then becomes the instance's answer.
    """
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fen, _, mv = line.partition(";")
        pos = position_from_fen(fen.strip())
        check_position(pos)
        if mv.strip():
            move = Move.from_uci(mv)
            if not verify_mate_in_1(pos, move):
                raise IllegalMove(f"line {lineno}: {mv.strip()} does not mate")
        else:
            mates = find_mates_in_1(pos)
            if len(mates) != 1:
                raise IllegalMove(f"line {lineno}: expected one mating move, found {len(mates)}")
            move = mates[0]
        out.append(ChessInstance(pos, move))
    return out


def with_side(pos: Position, white: bool) -> Position:
    return replace(pos, white_to_move=white)
