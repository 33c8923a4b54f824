"""ARC-AGI / ConceptARC task files and attempt-based scoring."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, MissingAttempts, ParseError
from .grid import Grid, grid_from_nested, grids_equal

ARC_MAX_SIDE = 30
ARC_MAX_VALUE = 9


@dataclass
class ArcTask:
    task_id: str
    train_pairs: list[tuple[Grid, Grid]]
    test_pairs: list[tuple[Grid, Grid]]

    def __post_init__(self):
        if not self.train_pairs or not self.test_pairs:
            raise ParseError(f"task {self.task_id!r} needs at least one train and one test pair")

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.train_pairs), len(self.test_pairs)

    def to_json(self) -> str:
        def pairs(ps):
            return [{"input": x.tolist(), "output": y.tolist()} for x, y in ps]
        return json.dumps({"train": pairs(self.train_pairs), "test": pairs(self.test_pairs)},
                          separators=(",", ":"))


def _arc_grid(data) -> Grid:
    return grid_from_nested(data, max_value=ARC_MAX_VALUE, max_side=ARC_MAX_SIDE)


def parse_arc_task(text: str, task_id: str = "") -> ArcTask:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    if not isinstance(data, dict) or "train" not in data or "test" not in data:
        raise ParseError("ARC task must be an object with 'train' and 'test' arrays")

    def pairs(key):
        items = data[key]
        if not isinstance(items, list):
            raise ParseError(f"'{key}' must be an array")
        out = []
        for i, item in enumerate(items):
            if not isinstance(item, dict) or "input" not in item or "output" not in item:
                raise ParseError(f"{key}[{i}] needs 'input' and 'output'")
            out.append((_arc_grid(item["input"]), _arc_grid(item["output"])))
        return out

    return ArcTask(task_id, pairs("train"), pairs("test"))


def load_arc_dir(root) -> list[ArcTask]:
    """Every ``*.json`` under ``root`` (recursively), id = file stem, sorted by path."""
    root = Path(root)
    return [parse_arc_task(p.read_text(), p.stem) for p in sorted(root.rglob("*.json"))]


def _check_attempts(task: ArcTask, attempts: Sequence[Sequence[Grid]], budget: int):
    for i in range(len(task.test_pairs)):
        if i >= len(attempts) or len(attempts[i]) == 0:
            raise MissingAttempts(i)
        if len(attempts[i]) > budget:
            raise BudgetExceeded(
                f"test input {i} has {len(attempts[i])} attempts, budget is {budget}")


def score_arc_two_attempt(task: ArcTask, attempts: Sequence[Sequence[Grid]]) -> bool:
    """Solved iff every test input has at least one exactly-matching attempt (of at most two)."""
    _check_attempts(task, attempts, 2)
    return all(
        any(grids_equal(a, gold) for a in attempts[i])
        for i, (_, gold) in enumerate(task.test_pairs)
    )


def score_conceptarc(task: ArcTask, attempts: Sequence[Sequence[Grid]], budget: int = 3) -> list[bool]:
    _check_attempts(task, attempts, budget)
    return [any(grids_equal(a, gold) for a in attempts[i])
            for i, (_, gold) in enumerate(task.test_pairs)]


def flags_accuracy(flags: Sequence[bool]) -> float:
    return float(np.mean(flags)) if len(flags) else 0.0


def parse_attempts(data) -> list[list[Grid]]:
    """Accept ``[[grid, ...], ...]`` or the submission layout ``[{"attempt_1": grid, ...}, ...]``."""
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, dict) and "attempts" in data:
        data = data["attempts"]
    out = []
    for entry in data:
        if isinstance(entry, dict):
            keys = sorted(entry, key=lambda k: int(k.rsplit("_", 1)[-1]))
            grids = [entry[k] for k in keys if entry[k] is not None]
        else:
            grids = entry
        out.append([_arc_grid(g) for g in grids])
    return out


# -- concept report -------------------------------------------------------------


@dataclass
class ConceptReport:
    rows: list[tuple[str, int | None, int | None, float]] = field(default_factory=list)

    @classmethod
    def from_accuracies(cls, pairs: Sequence[tuple[str, float]]) -> "ConceptReport":
        """Build from already-aggregated per-concept accuracies (counts unknown)."""
        return cls([(name, None, None, float(acc)) for name, acc in pairs])

    @property
    def average(self) -> float:
        """Macro average over concepts."""
        if not self.rows:
            return 0.0
        return float(np.mean([acc for *_, acc in self.rows]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["concept", "solved", "total", "accuracy"])
        for name, solved, total, acc in self.rows:
            w.writerow([name, solved, total, f"{acc:.4f}"])
        w.writerow(["average", "", "", f"{self.average:.4f}"])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "concepts": [{"concept": n, "solved": s, "total": t, "accuracy": a}
                         for n, s, t, a in self.rows],
            "average": self.average,
        }, indent=2, sort_keys=True)


def concept_report(groups: Sequence[tuple[str, Sequence[bool]]]) -> ConceptReport:
    rows = []
    for name, flags in groups:
        flags = list(flags)
        rows.append((name, sum(bool(f) for f in flags), len(flags), flags_accuracy(flags)))
    return ConceptReport(rows)
