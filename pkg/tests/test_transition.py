from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gridtasks.errors import BadFrameCount, DimensionMismatch, DuplicateInstanceId, EmptyVideo
from gridtasks.grid import RenderSpec
from gridtasks.registry import family_defaults, get_palette
from gridtasks.tasks import TASK_FAMILY, TASKS, TaskInstance, make_instances
from gridtasks.transition import (
    NEUTRAL_TEXT,
    build_convex,
    build_discrete,
    build_video,
    decode_record_prediction,
    export_dataset,
    extract_prediction,
    load_frames,
    load_gold,
    load_manifest,
)

images = st.integers(1, 6).flatmap(lambda h: st.integers(1, 6).flatmap(lambda w: st.tuples(
    arrays(np.uint8, (h, w, 3)), arrays(np.uint8, (h, w, 3)))))


def _pair(seed=0, shape=(4, 5, 3)):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, shape, dtype=np.uint8), rng.integers(0, 256, shape, dtype=np.uint8)


@pytest.mark.parametrize("F,n_input", [(2, 1), (4, 2), (5, 2)])
def test_discrete_split(F, n_input):
    ix, iy = _pair()
    v = build_discrete(ix, iy, F)
    assert v.F == F
    pattern = [np.array_equal(fr, ix) for fr in v.frames]
    assert pattern == [True] * n_input + [False] * (F - n_input)
    assert all(np.array_equal(fr, iy) for fr in v.frames[n_input:])


@pytest.mark.parametrize("F", range(2, 13))
def test_discrete_case_split_all_F(F):
    ix, iy = _pair(F)
    v = build_discrete(ix, iy, F)
    for f, fr in enumerate(v.frames, 1):
        want = ix if f <= F / 2 else iy
        assert np.array_equal(fr, want)


def test_convex_midpoint_rounds_half_up():
    ix = np.zeros((1, 1, 3), np.uint8)
    iy = np.full((1, 1, 3), 255, np.uint8)
    v = build_convex(ix, iy, 3)
    assert v.frames[1].tolist() == [[[128, 128, 128]]]
    # 255 * 1/4 = 63.75 -> 64, 255 * 3/4 = 191.25 -> 191
    v = build_convex(ix, iy, 5)
    assert [int(f[0, 0, 0]) for f in v.frames] == [0, 64, 128, 191, 255]


@settings(max_examples=100)
@given(images, st.integers(2, 12))
def test_convex_endpoints_and_monotone(pair, F):
    ix, iy = pair
    v = build_convex(ix, iy, F)
    assert np.array_equal(v.frames[0], ix) and np.array_equal(v.frames[-1], iy)
    stack = np.stack(v.frames).astype(np.int16)
    d = np.diff(stack, axis=0)
    up = iy >= ix
    assert (d[:, up] >= 0).all() and (d[:, ~up] <= 0).all()
    # float reference within half a level
    for f, fr in enumerate(v.frames, 1):
        a = (f - 1) / (F - 1)
        ref = (1 - a) * ix.astype(float) + a * iy.astype(float)
        assert np.abs(fr - ref).max() <= 0.5 + 1e-9


@given(images, st.integers(2, 12), st.sampled_from(["discrete", "convex"]))
def test_last_frame_is_output(pair, F, mode):
    ix, iy = pair
    assert np.array_equal(extract_prediction(build_video(ix, iy, F, mode)), iy)


def test_errors():
    ix, iy = _pair()
    with pytest.raises(DimensionMismatch):
        build_discrete(ix, iy[:-1], 4)
    with pytest.raises(BadFrameCount):
        build_convex(ix, iy, 1)
    with pytest.raises(EmptyVideo):
        extract_prediction([])
    with pytest.raises(ValueError):
        build_video(ix, iy, 4, "cubic")


def _export(task, out, n=3, seed=0, **kw):
    fam = family_defaults(TASK_FAMILY[task])
    inst = make_instances(task, n, seed)
    return export_dataset(inst, get_palette(fam.palette), fam.render, out, task=task, **kw), fam


def test_export_layout(tmp_path):
    out = tmp_path / "ds"
    manifest, fam = _export("life", out, F=4)
    assert manifest["text_conditioning"] == NEUTRAL_TEXT and manifest["F"] == 4
    rec = manifest["instances"][0]
    assert rec["id"] == "life-00000"
    names = sorted(p.name for p in (out / rec["id"]).iterdir())
    assert names == ["frame_000.png", "frame_001.png", "frame_002.png", "frame_003.png",
                     "gold.json", "input.json", "input.png", "output.png"]
    assert load_manifest(out) == manifest
    assert len(load_frames(out, rec)) == 4
    # no temporary siblings left behind
    assert [p.name for p in tmp_path.iterdir()] == ["ds"]


def test_export_text_and_no_frames(tmp_path):
    manifest, _ = _export("eca", tmp_path / "d", text_conditioning="go", frames=False)
    assert manifest["text_conditioning"] == "go"
    assert manifest["instances"][0]["frames"] == []


def _tree(root: Path) -> dict:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_reexport_byte_identical(tmp_path):
    _export("maze_small", tmp_path / "a", interpolation="convex")
    _export("maze_small", tmp_path / "b", interpolation="convex")
    assert _tree(tmp_path / "a") == _tree(tmp_path / "b")


def test_overwrite_policy(tmp_path):
    out = tmp_path / "d"
    _export("ant", out)
    with pytest.raises(FileExistsError):
        _export("ant", out)
    _export("ant", out, n=1, overwrite=True)
    assert len(load_manifest(out)["instances"]) == 1
    stray = tmp_path / "stray"
    stray.mkdir()
    (stray / "keep.txt").write_text("x")
    with pytest.raises(FileExistsError):
        _export("ant", stray, overwrite=True)
    assert (stray / "keep.txt").read_text() == "x"


def test_duplicate_ids(tmp_path):
    g = np.zeros((2, 2), np.uint8)
    inst = [TaskInstance("x", "life", 0, 0, g, g), TaskInstance("x", "life", 0, 1, g, g)]
    with pytest.raises(DuplicateInstanceId):
        export_dataset(inst, get_palette("binary"), RenderSpec(), tmp_path / "d")
    assert not (tmp_path / "d").exists()


def test_failed_export_cleans_up(tmp_path):
    g = np.zeros((2, 2), np.uint8)
    bad = np.full((2, 2), 9, np.uint8)  # not in the binary palette
    inst = [TaskInstance("a", "life", 0, 0, g, g), TaskInstance("b", "life", 0, 1, g, bad)]
    with pytest.raises(Exception):
        export_dataset(inst, get_palette("binary"), RenderSpec(), tmp_path / "d")
    assert list(tmp_path.iterdir()) == []


@pytest.mark.parametrize("task", TASKS)
@pytest.mark.parametrize("interpolation", ["discrete", "convex"])
def test_export_reload_decode(tmp_path, task, interpolation):
    out = tmp_path / task
    manifest, fam = _export(task, out, n=2, interpolation=interpolation, F=5)
    palette = get_palette(manifest["palette"])
    spec = RenderSpec(**manifest["render"])
    for rec in manifest["instances"]:
        gold = load_gold(out, rec)
        assert np.array_equal(decode_record_prediction(out, rec, palette, spec), gold)
