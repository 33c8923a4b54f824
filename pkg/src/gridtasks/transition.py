"""Transition videos between rendered input and output grids, and dataset export.

A video has ``F >= 2`` frames: the first renders the input, the last renders
the output. Discrete videos hold the input for frames ``f <= F/2`` (1-based)
and switch afterwards; convex videos blend per channel with
``alpha = (f-1)/(F-1)`` and round half up.
"""

from __future__ import annotations

import json
import os
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BadFrameCount, DimensionMismatch, DuplicateInstanceId, EmptyVideo
from .grid import Image, Palette, RenderSpec, decode_image, from_json, read_png, render_grid, to_json, write_png
from .registry import registry_version

INTERPOLATIONS = ("discrete", "convex")
DEFAULT_FRAMES = 8
NEUTRAL_TEXT = "A transition from the input grid to the output grid."
MANIFEST = "manifest.json"


@dataclass
class TransitionVideo:
    frames: list[Image]
    interpolation: str
    source_ids: tuple[str, str] = ("", "")

    @property
    def F(self) -> int:
        return len(self.frames)


def _check(ix: Image, iy: Image, F: int) -> tuple[np.ndarray, np.ndarray]:
    ix, iy = np.asarray(ix, dtype=np.uint8), np.asarray(iy, dtype=np.uint8)
    if ix.shape != iy.shape:
        raise DimensionMismatch(f"frame shapes differ: {ix.shape} vs {iy.shape}")
    if F < 2:
        raise BadFrameCount(f"need at least 2 frames, got {F}")
    return ix, iy


def build_discrete(ix: Image, iy: Image, F: int = DEFAULT_FRAMES, source_ids=("", "")) -> TransitionVideo:
    ix, iy = _check(ix, iy, F)
    # f <= F/2 compared without division
    frames = [ix.copy() if 2 * f <= F else iy.copy() for f in range(1, F + 1)]
    return TransitionVideo(frames, "discrete", tuple(source_ids))


def build_convex(ix: Image, iy: Image, F: int = DEFAULT_FRAMES, source_ids=("", "")) -> TransitionVideo:
    ix, iy = _check(ix, iy, F)
    a, b = ix.astype(np.int64), iy.astype(np.int64)
    den = F - 1
    frames = [ix.copy()]
    for f in range(2, F):
        num = (F - f) * a + (f - 1) * b  # equals den * ((1-alpha)*ix + alpha*iy)
        frames.append(((2 * num + den) // (2 * den)).astype(np.uint8))
    frames.append(iy.copy())
    return TransitionVideo(frames, "convex", tuple(source_ids))


def build_video(ix: Image, iy: Image, F: int = DEFAULT_FRAMES, interpolation: str = "discrete",
                source_ids=("", "")) -> TransitionVideo:
    if interpolation == "discrete":
        return build_discrete(ix, iy, F, source_ids)
    if interpolation == "convex":
        return build_convex(ix, iy, F, source_ids)
    raise ValueError(f"unknown interpolation {interpolation!r}")


def extract_prediction(frames: Sequence[Image]) -> Image:
    """The model's answer is the last frame."""
    if isinstance(frames, TransitionVideo):
        frames = frames.frames
    if len(frames) == 0:
        raise EmptyVideo("video has no frames")
    return frames[-1]


def frame_name(k: int) -> str:
    return f"frame_{k:03d}.png"


def export_dataset(instances, palette: Palette, spec: RenderSpec, out_dir, *,
                   interpolation: str = "discrete", F: int = DEFAULT_FRAMES,
                   text_conditioning: str = NEUTRAL_TEXT, task: str | None = None,
                   overwrite: bool = False, frames: bool = True) -> dict:
    """Write every instance in both modalities plus its transition frames.

    Per instance directory: ``input.png``/``output.png``, ``input.json`` and
    ``gold.json``, and ``frame_000.png ...`` when ``frames`` is set. Writing
    goes to a sibling temporary directory that is renamed into place only
    once complete, so a failed export leaves nothing behind. An existing
    ``out_dir`` is replaced only with ``overwrite`` and only if it holds a
    previous export.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("nothing to export")
    if interpolation not in INTERPOLATIONS:
        raise ValueError(f"unknown interpolation {interpolation!r}")
    if F < 2:
        raise BadFrameCount(f"need at least 2 frames, got {F}")
    seen: set[str] = set()
    for inst in instances:
        if inst.id in seen:
            raise DuplicateInstanceId(f"instance id {inst.id!r} appears twice")
        seen.add(inst.id)

    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        if not (overwrite and (out / MANIFEST).is_file()):
            raise FileExistsError(f"{out} exists and is not empty")
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{out.name}.", dir=out.parent))
    try:
        records = [_write_instance(tmp, inst, palette, spec, interpolation, F, frames) for inst in instances]
        manifest = {
            "task": task if task is not None else instances[0].task,
            "palette": palette.name,
            "registry_version": registry_version(),
            "render": spec.to_dict(),
            "interpolation": interpolation,
            "F": F,
            "text_conditioning": text_conditioning,
            "instances": records,
        }
        (tmp / MANIFEST).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
        if out.exists():
            shutil.rmtree(out)
        os.replace(tmp, out)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return manifest


def _write_instance(root: Path, inst, palette, spec, interpolation, F, frames) -> dict:
    d = root / inst.id
    d.mkdir()
    ix = render_grid(inst.input, palette, spec)
    iy = render_grid(inst.output, palette, spec)
    write_png(d / "input.png", ix)
    write_png(d / "output.png", iy)
    (d / "input.json").write_text(to_json(inst.input) + "\n")
    (d / "gold.json").write_text(to_json(inst.output) + "\n")
    rec = {
        "id": inst.id,
        "seed": inst.seed,
        "index": inst.index,
        "rows": int(inst.output.shape[0]),
        "cols": int(inst.output.shape[1]),
        "input_frame": f"{inst.id}/input.png",
        "input_json": f"{inst.id}/input.json",
        "output_frame": f"{inst.id}/output.png",
        "gold": f"{inst.id}/gold.json",
        "frame_dir": inst.id,
        "frames": [],
        "meta": inst.meta,
    }
    if frames:
        video = build_video(ix, iy, F, interpolation, (inst.task, inst.id))
        for k, fr in enumerate(video.frames):
            write_png(d / frame_name(k), fr)
            rec["frames"].append(f"{inst.id}/{frame_name(k)}")
    return rec


def load_manifest(out_dir) -> dict:
    return json.loads((Path(out_dir) / MANIFEST).read_text())


def load_frames(out_dir, record: dict) -> list[Image]:
    return [read_png(Path(out_dir) / p) for p in record["frames"]]


def load_gold(out_dir, record: dict):
    return from_json((Path(out_dir) / record["gold"]).read_text())


def decode_record_prediction(out_dir, record: dict, palette: Palette, spec: RenderSpec):
    """Decode the last stored frame of a record back into a grid."""
    frames = record["frames"] or [record["output_frame"]]
    img = read_png(Path(out_dir) / frames[-1])
    return decode_image(img, palette, spec, record["rows"], record["cols"])
