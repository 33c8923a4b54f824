"""Exact-match scoring, accuracy-vs-n curves and samples-to-threshold analysis."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DuplicatePoint, GridTaskError, MissingPrediction, ParseError
from .grid import Grid, decode_image, from_json, grids_equal, read_png

DEFAULT_DELTA = 0.9
CURVE_COLUMNS = ["task", "model", "n", "accuracy"]
THRESHOLD_COLUMNS = ["task", "model", "delta", "n"]


@dataclass
class PredictionRecord:
    instance_id: str
    predicted: Grid | None  # None marks a missing or undecodable prediction
    gold: Grid


def exact_match(records: Sequence[PredictionRecord]) -> float:
    if not records:
        return 0.0
    return sum(grids_equal(r.predicted, r.gold) for r in records) / len(records)


@dataclass
class Curve:
    task: str
    model: str
    points: list[tuple[int, float | None]] = field(default_factory=list)

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ParseError(f"curve {self.task}/{self.model}: n values must be strictly increasing")
        for n, acc in self.points:
            if acc is not None and not 0.0 <= acc <= 1.0:
                raise ParseError(f"curve {self.task}/{self.model}: accuracy {acc} at n={n} outside [0, 1]")

    def present(self) -> list[tuple[int, float]]:
        return [(n, a) for n, a in self.points if a is not None]


def samples_to_threshold(curve: Curve, delta: float = DEFAULT_DELTA) -> int | None:
    """Smallest n whose accuracy reaches ``delta`` (inclusive), or None."""
    for n, acc in curve.present():
        # table values carry two decimals; compare on that grid so 0.90 >= 0.9 holds exactly
        if round(acc, 9) >= round(delta, 9):
            return n
    return None


def curves_from_points(rows: Iterable[tuple[str, str, int, float | None]]) -> list[Curve]:
    """Group (task, model, n, accuracy) points into curves sorted by n."""
    groups: dict[tuple[str, str], dict[int, float | None]] = defaultdict(dict)
    for task, model, n, acc in rows:
        g = groups[(task, model)]
        if n in g:
            raise DuplicatePoint(task, model, n)
        g[n] = acc
    return [Curve(t, m, sorted(pts.items())) for (t, m), pts in sorted(groups.items())]


def build_curves(run_records: Iterable[tuple[str, str, int, Sequence[PredictionRecord]]]) -> list[Curve]:
    return curves_from_points((t, m, int(n), exact_match(recs)) for t, m, n, recs in run_records)


def threshold_table(curves: Sequence[Curve], delta: float = DEFAULT_DELTA) -> list[tuple[str, str, float, int | None]]:
    return [(c.task, c.model, delta, samples_to_threshold(c, delta)) for c in curves]


# -- CSV fixtures ----------------------------------------------------------------------


def reference_curves_path() -> str:
    return str(resources.files("gridtasks") / "data" / "reference_curves.csv")


def read_points_csv(source, table: str | None = None) -> list[tuple[str, str, int, float | None]]:
    """Rows of (task, model, n, accuracy) from a CSV path or text; blank accuracy = absent."""
    if isinstance(source, Path) or (isinstance(source, str) and source.strip() and "\n" not in source):
        text = Path(source).read_text()
    else:
        text = str(source)
    reader = csv.DictReader(io.StringIO(text))
    if not text.strip():
        return []
    missing = set(CURVE_COLUMNS) - set(reader.fieldnames or [])
    if missing:
        raise ParseError(f"results CSV lacks columns: {', '.join(sorted(missing))}")
    out = []
    for lineno, row in enumerate(reader, 2):
        if table is not None and row.get("table") != table:
            continue
        try:
            n = int(row["n"])
            acc_text = (row["accuracy"] or "").strip()
            acc = None if acc_text in ("", "-", "–") else float(acc_text)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        out.append((row["task"], row["model"], n, acc))
    return out


def load_curves_csv(source=None, table: str | None = None) -> list[Curve]:
    return curves_from_points(read_points_csv(source or reference_curves_path(), table))


# -- reports ------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def curves_csv(curves: Sequence[Curve]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_COLUMNS)
    for c in curves:
        for n, acc in c.points:
            w.writerow([c.task, c.model, n, _fmt(acc)])
    return buf.getvalue()


def thresholds_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(THRESHOLD_COLUMNS)
    for task, model, delta, n in rows:
        w.writerow([task, model, _fmt(float(delta)), _fmt(n)])
    return buf.getvalue()


def report_dict(curves: Sequence[Curve], thresholds) -> dict:
    return {
        "curves": [{"task": c.task, "model": c.model, "points": [[n, a] for n, a in c.points]} for c in curves],
        "thresholds": [{"task": t, "model": m, "delta": d, "n": n} for t, m, d, n in thresholds],
    }


def emit_report(curves: Sequence[Curve], thresholds, fmt: str, out_dir) -> list[Path]:
    """Write ``curves.csv`` + ``thresholds.csv`` or a single ``report.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        paths = [out / "curves.csv", out / "thresholds.csv"]
        paths[0].write_text(curves_csv(curves))
        paths[1].write_text(thresholds_csv(thresholds))
        return paths
    if fmt == "json":
        p = out / "report.json"
        p.write_text(json.dumps(report_dict(curves, thresholds), indent=1, sort_keys=True) + "\n")
        return [p]
    raise ValueError(f"unknown report format {fmt!r}")


def read_report_json(path) -> tuple[list[Curve], list[tuple[str, str, float, int | None]]]:
    data = json.loads(Path(path).read_text())
    curves = [Curve(c["task"], c["model"], [(int(n), a) for n, a in c["points"]]) for c in data["curves"]]
    thresholds = [(t["task"], t["model"], t["delta"], t["n"]) for t in data["thresholds"]]
    return curves, thresholds


# -- prediction directories ----------------------------------------------------------


def load_prediction(pred_dir, record: dict, palette, spec) -> Grid | None:
    """Prediction for one record: ``<id>.json``, ``<id>.png``, or from ``<id>/`` (last frame, then
    ``output.png``, then ``gold.json``).

    Raises MissingPrediction if none exists; returns None if it cannot be decoded.
    """
    root = Path(pred_dir)
    iid = record["id"]
    js, png, d = root / f"{iid}.json", root / f"{iid}.png", root / iid
    try:
        if js.is_file():
            return from_json(js.read_text())
        if png.is_file():
            img = read_png(png)
        elif d.is_dir() and sorted(d.glob("frame_*.png")):
            img = read_png(sorted(d.glob("frame_*.png"))[-1])
        elif (d / "output.png").is_file():
            img = read_png(d / "output.png")
        elif (d / "gold.json").is_file():
            return from_json((d / "gold.json").read_text())
        else:
            raise MissingPrediction(iid)
        return decode_image(img, palette, spec, record["rows"], record["cols"])
    except MissingPrediction:
        raise
    except GridTaskError:
        return None

