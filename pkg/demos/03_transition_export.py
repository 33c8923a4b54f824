"""
From grids to transition videos and back
========================================

Export a handful of Life instances as frame sequences, then score the
last frame of each video against the stored gold grid.
"""

import tempfile
from pathlib import Path

import numpy as np

from gridtasks.evalkit import PredictionRecord, exact_match
from gridtasks.registry import family_defaults, get_palette
from gridtasks.tasks import make_instances
from gridtasks.transition import build_convex, decode_record_prediction, export_dataset, load_gold

fam = family_defaults("life")
palette = get_palette(fam.palette)
instances = make_instances("life", 4, seed=0)

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "life"
    manifest = export_dataset(instances, palette, fam.render, out, interpolation="convex", F=6)
    print("files in first instance:", sorted(p.name for p in (out / "life-00000").iterdir()))

    records = []
    for rec in manifest["instances"]:
        pred = decode_record_prediction(out, rec, palette, fam.render)
        records.append(PredictionRecord(rec["id"], pred, load_gold(out, rec)))
    print("exact match of the stored videos:", exact_match(records))

# %% The convex blend of black into white over five frames
ix = np.zeros((1, 1, 3), np.uint8)
iy = np.full((1, 1, 3), 255, np.uint8)
print([int(f[0, 0, 0]) for f in build_convex(ix, iy, 5).frames])
