"""Exception hierarchy.

Everything raised on bad data derives from :class:`GridTaskError`, which the
command line maps to exit code 2.
"""


class GridTaskError(Exception):
    """Base class for data errors raised by this package."""


class UnmappedCellValue(GridTaskError):
    def __init__(self, value: int):
        super().__init__(f"cell value {value} has no palette entry")
        self.value = value


class DimensionMismatch(GridTaskError):
    pass


class AmbiguousCell(GridTaskError):
    def __init__(self, row: int, col: int, detail: str = ""):
        msg = f"ambiguous cell at ({row}, {col})"
        super().__init__(f"{msg}: {detail}" if detail else msg)
        self.row = row
        self.col = col


class ParseError(GridTaskError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class RaggedRows(GridTaskError):
    def __init__(self, row_index: int):
        super().__init__(f"row {row_index} has a different length than row 0")
        self.row_index = row_index


class ValueOutOfRange(GridTaskError):
    pass


class GridOutOfBounds(GridTaskError):
    pass


class PaletteError(GridTaskError):
    pass


# arc
class MissingAttempts(GridTaskError):
    def __init__(self, test_index: int):
        super().__init__(f"no attempts supplied for test input {test_index}")
        self.test_index = test_index


class BudgetExceeded(GridTaskError):
    pass


# puzzles
class InvalidGivens(GridTaskError):
    pass


class Unsatisfiable(GridTaskError):
    def __init__(self, clue_target: int):
        super().__init__(f"clue target {clue_target} cannot be reached")
        self.clue_target = clue_target


class GenerationExhausted(GridTaskError):
    def __init__(self, max_tries: int):
        super().__init__(f"no valid instance after {max_tries} tries")
        self.max_tries = max_tries


class IllegalBoard(GridTaskError):
    pass


class IllegalPosition(GridTaskError):
    pass


class IllegalMove(GridTaskError):
    pass


# route
class BadDimensions(GridTaskError):
    pass


class CellNotOpen(GridTaskError):
    pass


class EncodingError(GridTaskError):
    pass


# automata
class NonBinaryCell(GridTaskError):
    pass


class AntOutOfBounds(GridTaskError):
    def __init__(self, step: int):
        super().__init__(f"ant left the grid at step {step}")
        self.step = step


# transition / evalkit
class BadFrameCount(GridTaskError):
    pass


class EmptyVideo(GridTaskError):
    pass


class DuplicateInstanceId(GridTaskError):
    pass


class DuplicatePoint(GridTaskError):
    def __init__(self, task: str, model: str, n: int):
        super().__init__(f"duplicate curve point for ({task}, {model}, n={n})")
        self.key = (task, model, n)


class MissingPrediction(GridTaskError):
    def __init__(self, instance_id: str):
        super().__init__(f"no prediction for instance {instance_id!r}")
        self.instance_id = instance_id
