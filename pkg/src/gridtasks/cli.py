"""Command-line entry point: ``gridtasks {gen,eval,decode,curve}``.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 I/O error. Data goes to
stdout, diagnostics to stderr. Settings may also come from a TOML or JSON
file given with ``--config``; explicit flags win over it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import arc, automata, evalkit, route
from .errors import GridTaskError, MissingPrediction, ParseError
from .grid import RenderSpec, decode_image, from_json, grids_equal, read_png, to_json
from .registry import family_defaults, get_palette, load_registry
from .tasks import ROUTE_TASKS, TASK_FAMILY, TASKS, make_instances
from .transition import DEFAULT_FRAMES, INTERPOLATIONS, NEUTRAL_TEXT, export_dataset, load_gold, load_manifest

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

OUT_ENV = "GRIDTASKS_OUT"
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument types ---------------------------------------------------------------


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _rule(text: str) -> str:
    """ECA rule number (0..255) or a B/S string / named Life-like rule."""
    if text.isdigit():
        if not 0 <= int(text) <= 255:
            raise argparse.ArgumentTypeError(f"ECA rule {text} outside 0..255")
        return text
    try:
        automata.life_rule(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _density(text: str) -> float:
    v = float(text)
    if not 0 <= v <= 0.45:
        raise argparse.ArgumentTypeError("obstacle density must be in [0, 0.45]")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gridtasks", description="Grid reasoning tasks: generation, rendering, export and scoring.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a dataset (PNG + JSON pairs, transition frames)")
    g.add_argument("--config", help="TOML or JSON file with default values for these flags")
    g.add_argument("--task", choices=TASKS)
    g.add_argument("--n", type=_positive, default=10)
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--out", help=f"output directory (default: ${OUT_ENV}/<task> or ./gridtasks-out/<task>)")
    g.add_argument("--overwrite", action="store_true", help="replace a previous export in --out")
    g.add_argument("--registry", help="palette/family override file (TOML or JSON)")
    g.add_argument("--palette")
    g.add_argument("--cell-px", type=_positive)
    g.add_argument("--gridline-px", type=int)
    g.add_argument("--interpolation", choices=INTERPOLATIONS, default="discrete")
    g.add_argument("--frames", type=int, default=DEFAULT_FRAMES, help="frames per transition video (F)")
    g.add_argument("--no-frames", action="store_true", help="skip transition frames")
    g.add_argument("--text", default=NEUTRAL_TEXT, help="text conditioning placeholder stored in the manifest")
    g.add_argument("--boundary", choices=automata.BOUNDARIES)
    knobs = g.add_argument_group("task knobs")
    knobs.add_argument("--size", type=int, help="sudoku side (4 or 9) or CA field side")
    knobs.add_argument("--clues", type=int)
    knobs.add_argument("--rooms-w", type=_positive)
    knobs.add_argument("--rooms-h", type=_positive)
    knobs.add_argument("--pad", type=int)
    knobs.add_argument("--width", type=_positive)
    knobs.add_argument("--height", type=_positive)
    knobs.add_argument("--density", type=_density)
    knobs.add_argument("--rule", type=_rule)
    knobs.add_argument("--steps", type=int)
    knobs.add_argument("--horizon", type=_positive)
    knobs.add_argument("--fen-file")

    e = sub.add_parser("eval", help="score predictions against an exported dataset or ARC tasks")
    e.add_argument("--config")
    e.add_argument("--pred", required=False, help="prediction directory")
    e.add_argument("--gold", required=False, help="exported dataset (or ARC task directory)")
    e.add_argument("--task", help="override the manifest's task; 'arc' or 'conceptarc' for ARC scoring")
    e.add_argument("--registry")
    e.add_argument("--out", help="also write metrics.json here")

    d = sub.add_parser("decode", help="decode a rendered PNG into a JSON grid")
    d.add_argument("image")
    d.add_argument("--palette", default="arc")
    d.add_argument("--rows", type=_positive, required=True)
    d.add_argument("--cols", type=_positive, required=True)
    d.add_argument("--cell-px", type=_positive, default=16)
    d.add_argument("--gridline-px", type=int, default=1)
    d.add_argument("--gridline-rgb", type=int, nargs=3, default=(64, 64, 64))
    d.add_argument("--tolerance", type=float)
    d.add_argument("--registry")

    c = sub.add_parser("curve", help="accuracy curves and samples-to-threshold tables")
    c.add_argument("results", help="CSV with task,model,n,accuracy columns, or 'reference'")
    c.add_argument("--delta", type=float, default=evalkit.DEFAULT_DELTA)
    c.add_argument("--table", help="keep only rows whose 'table' column matches")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--out", help="write report files here instead of printing thresholds")
    return p


# -- config ---------------------------------------------------------------------


def _read_config(path) -> dict:
    p = Path(path)
    raw = p.read_bytes()
    data = tomllib.loads(raw.decode()) if p.suffix.lower() == ".toml" else json.loads(raw)
    if not isinstance(data, dict):
        raise UsageError("config file must hold a table of settings")
    return {k.replace("-", "_"): v for k, v in data.items()}


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = _read_config(args.config)
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(cfg) - known - {"config"})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        # config entries are replayed as flags ahead of the real ones, so the
        # command line wins and config values get the same type checks
        extra = []
        for k, v in cfg.items():
            if k == "config":
                continue
            action = next(a for a in subparser._actions if a.dest == k)
            flag = action.option_strings[0] if action.option_strings else None
            if flag is None:
                continue
            if isinstance(action, argparse._StoreTrueAction):
                if v:
                    extra.append(flag)
            elif isinstance(v, list):
                extra += [flag, *map(str, v)]
            else:
                extra += [flag, str(v)]
        args = parser.parse_args([args.command, *extra, *argv[1:]])
    return args


# -- subcommands ------------------------------------------------------------------


def _knobs(args) -> dict:
    task = args.task
    k: dict = {}
    if task in ("sudoku", "sudoku_mini"):
        if task == "sudoku" and args.size is not None:
            if args.size not in (4, 9):
                raise UsageError("--size must be 4 or 9 for sudoku")
            k["size"] = args.size
        if args.clues is not None:
            k["clues"] = args.clues
    elif task in ("maze", "maze_small"):
        for name in ("rooms_w", "rooms_h", "pad"):
            if getattr(args, name) is not None:
                k[name] = getattr(args, name)
    elif task == "shortest_path":
        for src, dst in (("width", "width"), ("height", "height"), ("density", "density")):
            if getattr(args, src) is not None:
                k[dst] = getattr(args, src)
    elif task == "eca":
        if args.rule is not None:
            if not args.rule.isdigit():
                raise UsageError("--rule for eca must be a number 0..255")
            k["rule"] = int(args.rule)
        for name in ("width", "steps"):
            if getattr(args, name) is not None:
                k[name] = getattr(args, name)
        if args.steps is not None:
            k["rows"] = max(8, args.steps + 1)
        if args.boundary:
            k["boundary"] = args.boundary
    elif task == "life":
        if args.rule is not None:
            if args.rule.isdigit():
                raise UsageError("--rule for life must be a B/S string or a named rule")
            k["rule"] = args.rule
        for name in ("size", "steps"):
            if getattr(args, name) is not None:
                k[name] = getattr(args, name)
        if args.boundary:
            k["boundary"] = args.boundary
    elif task == "ant":
        if args.horizon is not None:
            k["horizon"] = args.horizon
        if args.size is not None:
            k["size"] = args.size
    elif task == "chess" and args.fen_file:
        k["fen_file"] = args.fen_file
    return k


def _render_settings(args, family: str, registry: dict):
    fam = family_defaults(family, registry)
    palette = get_palette(args.palette or fam.palette, registry)
    spec = fam.render
    if getattr(args, "cell_px", None) is not None or getattr(args, "gridline_px", None) is not None:
        spec = RenderSpec(args.cell_px or spec.cell_px,
                          spec.gridline_px if args.gridline_px is None else args.gridline_px,
                          spec.gridline_rgb)
    return palette, spec


def default_out_root() -> Path:
    return Path(os.environ.get(OUT_ENV, "gridtasks-out"))


def cmd_gen(args) -> int:
    if not args.task:
        raise UsageError("gen: --task is required")
    if args.frames < 2:
        raise UsageError("gen: --frames must be >= 2")
    registry = load_registry(args.registry)
    palette, spec = _render_settings(args, TASK_FAMILY[args.task], registry)
    instances = make_instances(args.task, args.n, args.seed, **_knobs(args))
    out = Path(args.out) if args.out else default_out_root() / args.task
    export_dataset(instances, palette, spec, out, interpolation=args.interpolation, F=args.frames,
                   text_conditioning=args.text, task=args.task, overwrite=args.overwrite,
                   frames=not args.no_frames)
    print(json.dumps({"out": str(out), "task": args.task, "n": len(instances)}))
    return EXIT_OK


def _eval_arc(args) -> dict:
    budget = 2 if args.task == "arc" else 3
    tasks = arc.load_arc_dir(args.gold)
    pred = Path(args.pred)
    missing, flags, solved = [], [], []
    for t in tasks:
        p = pred / f"{t.task_id}.json"
        if not p.is_file():
            missing.append(t.task_id)
            if args.task == "arc":
                solved.append(False)
            else:
                flags += [False] * len(t.test_pairs)
            continue
        attempts = arc.parse_attempts(p.read_text())
        if args.task == "arc":
            solved.append(arc.score_arc_two_attempt(t, attempts))
        else:
            flags += arc.score_conceptarc(t, attempts, budget)
    scored = solved if args.task == "arc" else flags
    return {"task": args.task, "accuracy": arc.flags_accuracy(scored), "n_total": len(scored),
            "n_correct": int(sum(scored)), "missing": missing}


def cmd_eval(args) -> int:
    if not args.pred or not args.gold:
        raise UsageError("eval: --pred and --gold are required")
    for d in (args.pred, args.gold):
        if not Path(d).is_dir():
            raise FileNotFoundError(f"no such directory: {d}")
    if args.task in ("arc", "conceptarc"):
        result = _eval_arc(args)
    else:
        manifest = load_manifest(args.gold)
        task = args.task or manifest["task"]
        registry = load_registry(args.registry)
        palette = get_palette(manifest["palette"], registry)
        spec = RenderSpec(**manifest["render"])
        records, triples, missing = [], [], []
        for rec in manifest["instances"]:
            gold = load_gold(args.gold, rec)
            try:
                pred = evalkit.load_prediction(args.pred, rec, palette, spec)
            except MissingPrediction:
                missing.append(rec["id"])
                pred = None
            records.append(evalkit.PredictionRecord(rec["id"], pred, gold))
            if task in ROUTE_TASKS:
                inp = from_json((Path(args.gold) / rec["input_json"]).read_text())
                triples.append((inp, gold, pred if pred is None or pred.shape == gold.shape else None))
        result = {"task": task, "accuracy": evalkit.exact_match(records), "n_total": len(records),
                  "n_correct": sum(grids_equal(r.predicted, r.gold) for r in records),
                  "missing": missing}
        if task in ROUTE_TASKS:
            m = route.compute_metrics(triples)
            result.update(psr=m.psr, rpl_mean=m.rpl_mean, n_valid=m.n_valid)
    for iid in result["missing"]:
        print(f"missing prediction: {iid}", file=sys.stderr)
    text = json.dumps(result, sort_keys=True)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "metrics.json").write_text(json.dumps(result, indent=1, sort_keys=True) + "\n")
    print(text)
    # the report is complete, but missing predictions still count as a data error
    return EXIT_DATA if result["missing"] else EXIT_OK


def cmd_decode(args) -> int:
    registry = load_registry(args.registry)
    palette = get_palette(args.palette, registry)
    spec = RenderSpec(args.cell_px, args.gridline_px, tuple(args.gridline_rgb))
    grid = decode_image(read_png(args.image), palette, spec, args.rows, args.cols, args.tolerance)
    print(to_json(grid))
    return EXIT_OK


def cmd_curve(args) -> int:
    source = evalkit.reference_curves_path() if args.results == "reference" else args.results
    if source != args.results or Path(source).exists():
        text = Path(source).read_text()
    else:
        raise FileNotFoundError(f"no such file: {source}")
    points = evalkit.read_points_csv(text, args.table) if text.strip() else []
    curves = evalkit.curves_from_points(points)
    thresholds = evalkit.threshold_table(curves, args.delta)
    if args.out:
        for p in evalkit.emit_report(curves, thresholds, args.format, args.out):
            print(p)
    elif args.format == "json":
        print(json.dumps(evalkit.report_dict(curves, thresholds), indent=1, sort_keys=True))
    else:
        sys.stdout.write(evalkit.thresholds_csv(thresholds))
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "eval": cmd_eval, "decode": cmd_decode, "curve": cmd_curve}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GridTaskError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
