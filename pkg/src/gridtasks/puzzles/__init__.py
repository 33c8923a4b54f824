"""Generators, solvers and verifiers for the grid games."""

from functools import singledispatch

from ..grid import Grid
from .chess import (
    ChessInstance,
    Move,
    Position,
    legal_moves,
    load_mate_fens,
    perft,
    position_from_fen,
    position_from_grid,
    verify_mate_in_1,
)
from .connect4 import Connect4Instance, drop, find_connect4_wins, gen_connect4
from .hitori import HitoriInstance, gen_hitori, solve_hitori
from .sudoku import SudokuInstance, count_sudoku_solutions, gen_sudoku


@singledispatch
def encode_game_grids(instance) -> tuple[Grid, Grid]:
    """(input grid, output grid) for a game instance."""
    raise TypeError(f"no grid encoding for {type(instance).__name__}")


@encode_game_grids.register
def _(instance: SudokuInstance):
    return instance.givens.copy(), instance.solution.copy()


@encode_game_grids.register
def _(instance: HitoriInstance):
    return instance.numbers.copy(), instance.shade_mask.copy()


@encode_game_grids.register
def _(instance: Connect4Instance):
    return instance.board.copy(), drop(instance.board, instance.winning_column, instance.mover)


@encode_game_grids.register
def _(instance: ChessInstance):
    return instance.board, instance.output_board()


__all__ = [
    "ChessInstance", "Connect4Instance", "HitoriInstance", "Move", "Position", "SudokuInstance",
    "count_sudoku_solutions", "encode_game_grids", "find_connect4_wins", "gen_connect4",
    "gen_hitori", "gen_sudoku", "legal_moves", "load_mate_fens", "perft", "position_from_fen",
    "position_from_grid", "solve_hitori", "verify_mate_in_1",
]
