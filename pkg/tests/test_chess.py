import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridtasks.errors import IllegalMove, IllegalPosition, ParseError
from gridtasks.puzzles import encode_game_grids, legal_moves, load_mate_fens, perft, position_from_fen, verify_mate_in_1
from gridtasks.puzzles.chess import (
    STARTING_FEN,
    Move,
    apply_move,
    check_position,
    find_mates_in_1,
    is_checkmate,
    is_mating_prediction,
    is_stalemate,
    move_between,
    position_from_grid,
    position_to_fen,
    with_side,
)
from gridtasks.tasks import bundled_mate_fens

# -- independent minimal move generator -------------------------------------------
# 10x12 mailbox, pieces as FEN letters; no castling or en passant, which
# never arise within three plies of the start or in the sampled positions.

N, S, E, W = -10, 10, 1, -1
OFFSETS = {
    "N": (N + N + E, N + N + W, S + S + E, S + S + W, E + E + N, E + E + S, W + W + N, W + W + S),
    "B": (N + E, N + W, S + E, S + W),
    "R": (N, S, E, W),
    "Q": (N, S, E, W, N + E, N + W, S + E, S + W),
    "K": (N, S, E, W, N + E, N + W, S + E, S + W),
}
SLIDERS = set("BRQ")


def to_mailbox(fen_board):
    box = [" "] * 120
    for r, rank in enumerate(fen_board.split("/")):
        c = 0
        for ch in rank:
            if ch.isdigit():
                for _ in range(int(ch)):
                    box[21 + r * 10 + c] = "."
                    c += 1
            else:
                box[21 + r * 10 + c] = ch
                c += 1
    return box


def name(i):
    r, c = divmod(i - 21, 10)
    return "abcdefgh"[c] + str(8 - r)


def pseudo(box, white):
    own = str.isupper if white else str.islower
    foe = str.islower if white else str.isupper
    out = []
    for i, p in enumerate(box):
        if p in " ." or not own(p):
            continue
        k = p.upper()
        if k == "P":
            fwd = N if white else S
            last = 1 if white else 8
            start_row = 6 if white else 1
            promos = ["q", "r", "b", "n"]

            def add(j):
                if (j - 21) // 10 == (0 if white else 7):
                    out.extend((i, j, q) for q in promos)
                else:
                    out.append((i, j, ""))

            if box[i + fwd] == ".":
                add(i + fwd)
                if (i - 21) // 10 == start_row and box[i + 2 * fwd] == ".":
                    out.append((i, i + 2 * fwd, ""))
            for d in (fwd + E, fwd + W):
                if box[i + d] not in " ." and foe(box[i + d]):
                    add(i + d)
            del last
            continue
        for d in OFFSETS[k]:
            j = i + d
            while box[j] != " ":
                if box[j] != "." and own(box[j]):
                    break
                out.append((i, j, ""))
                if box[j] != "." or k not in SLIDERS:
                    break
                j += d
    return out


def make(box, mv, white):
    i, j, q = mv
    b = box[:]
    b[j] = (q.upper() if white else q) if q else b[i]
    b[i] = "."
    return b


def king_capturable(box, white_king):
    king = "K" if white_king else "k"
    target = box.index(king)
    return any(j == target for _, j, _ in pseudo(box, not white_king))


def oracle_legal(box, white):
    return [m for m in pseudo(box, white) if not king_capturable(make(box, m, white), white)]


def oracle_perft(box, white, depth):
    if depth == 0:
        return 1
    return sum(oracle_perft(make(box, m, white), not white, depth - 1) for m in oracle_legal(box, white))


def uci(mv):
    return name(mv[0]) + name(mv[1]) + mv[2]


# -- tests ------------------------------------------------------------------


def test_perft_start():
    pos = position_from_fen(STARTING_FEN)
    box = to_mailbox(STARTING_FEN.split()[0])
    for depth, want in ((1, 20), (2, 400), (3, 8902)):
        assert perft(pos, depth) == want
        assert oracle_perft(box, True, depth) == want
    assert len(legal_moves(pos)) == 20


@pytest.mark.parametrize("fen,counts", [
    ("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1", (48, 2039)),
    ("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1", (14, 191, 2812)),
    ("r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1", (6, 264)),
    ("rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8", (44, 1486)),
])
def test_perft_published_positions(fen, counts):
    pos = position_from_fen(fen)
    for depth, want in enumerate(counts, 1):
        assert perft(pos, depth) == want


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_legal_moves_match_oracle_in_random_play(seed):
    rng = np.random.default_rng(seed)
    pos = position_from_fen(STARTING_FEN)
    for _ in range(int(rng.integers(0, 40))):
        moves = legal_moves(pos)
        if not moves:
            break
        pos = apply_move(pos, moves[int(rng.integers(len(moves)))])
    # strip castling and en passant, which the oracle does not model
    fen = position_to_fen(pos).split()
    pos = position_from_fen(" ".join([fen[0], fen[1], "-", "-", "0", "1"]))
    box = to_mailbox(fen[0])
    ours = sorted(m.uci() for m in legal_moves(pos))
    theirs = sorted(uci(m) for m in oracle_legal(box, pos.white_to_move))
    assert ours == theirs


def test_fen_roundtrip():
    for fen in (STARTING_FEN, "r2qkb1r/p5pp/2p2p2/4N3/Pn1p4/1Q1P1n2/1P3P2/2B2KN1 w kq - 0 1"):
        assert position_to_fen(position_from_fen(fen)) == fen
    with pytest.raises(ParseError):
        position_from_fen("8/8/8 w - - 0 1")


def test_reference_mate(pairs):
    before, after = pairs["chess"]
    pos = position_from_grid(before)
    move = move_between(before, after)
    assert move == Move.from_uci("b3f7")
    assert before[5, 1] == 5 and after[1, 5] == 5  # the white queen relocates
    assert verify_mate_in_1(pos, move)
    assert find_mates_in_1(pos) == [move]
    assert is_mating_prediction(before, after)
    assert not is_mating_prediction(before, before)


def test_stalemate_is_not_mate():
    pos = position_from_fen("7k/5K2/8/6Q1/8/8/8/8 w - - 0 1")
    stale = Move.from_uci("g5g6")
    assert not verify_mate_in_1(pos, stale)
    assert is_stalemate(apply_move(pos, stale))
    assert verify_mate_in_1(pos, Move.from_uci("g5g7"))


def test_opening_moves_never_mate():
    pos = position_from_fen(STARTING_FEN)
    assert not any(verify_mate_in_1(pos, m) for m in legal_moves(pos))


def test_contract_errors():
    black = position_from_fen("k7/8/8/8/8/8/8/K7 b - - 0 1")
    with pytest.raises(IllegalPosition):
        verify_mate_in_1(black, Move.from_uci("a8b8"))
    with pytest.raises(IllegalMove):
        verify_mate_in_1(position_from_fen(STARTING_FEN), Move.from_uci("e2e5"))
    with pytest.raises(IllegalPosition):
        check_position(position_from_fen("8/8/8/8/8/8/8/K7 w - - 0 1"))
    with pytest.raises(IllegalPosition):
        check_position(position_from_fen("k6P/8/8/8/8/8/8/K7 w - - 0 1"))
    with pytest.raises(IllegalPosition):
        check_position(position_from_fen("k6R/8/8/8/8/8/8/K7 w - - 0 1"))  # black in check, white to move


def test_special_moves():
    ep = position_from_fen("k7/8/8/3pP3/8/8/8/K7 w - d6 0 1")
    assert "e5d6" in {m.uci() for m in legal_moves(ep)}
    after = apply_move(ep, Move.from_uci("e5d6"))
    assert after.board[3 * 8 + 3] == 0  # captured pawn removed
    castle = position_from_fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1")
    moves = {m.uci() for m in legal_moves(castle)}
    assert {"e1g1", "e1c1"} <= moves
    promo = position_from_fen("k7/2P5/1K6/8/8/8/8/8 w - - 0 1")
    assert {"c7c8q", "c7c8n", "c7c8r", "c7c8b"} <= {m.uci() for m in legal_moves(promo)}


def test_bundled_fixture():
    insts = load_mate_fens(bundled_mate_fens())
    assert len(insts) == 6
    for inst in insts:
        x, y = encode_game_grids(inst)
        assert is_checkmate(position_from_grid(y, white_to_move=False, castling=""))
        assert x.max() <= 12


def test_fixture_rejects_non_mates(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text(STARTING_FEN + ";e2e4\n")
    with pytest.raises(IllegalMove):
        load_mate_fens(p)
    p.write_text("# comment only\n\n6k1/5ppp/8/8/8/8/8/R5K1 w - - 0 1\n")
    assert [i.mate_move.uci() for i in load_mate_fens(p)] == ["a1a8"]
    p.write_text("7k/5K2/8/6Q1/8/8/8/8 w - - 0 1\n")  # several mates, so no implied answer
    with pytest.raises(IllegalMove):
        load_mate_fens(p)


def test_with_side():
    pos = position_from_fen(STARTING_FEN)
    assert not with_side(pos, False).white_to_move
