"""Grid reasoning tasks in image and JSON form.

Generators and exact solvers for puzzles, games, route planning and cellular
automata; a palette renderer with a strict decoder; transition-video export
for video models; and exact-match, path and threshold metrics.
"""

from .errors import GridTaskError
from .grid import (
    Palette,
    RenderSpec,
    as_grid,
    decode_image,
    from_json,
    grids_equal,
    read_png,
    render_grid,
    to_json,
    write_png,
)
from .registry import family_defaults, get_palette, load_registry
from .tasks import TASKS, TaskInstance, make_instances
from .transition import build_convex, build_discrete, export_dataset, extract_prediction

__version__ = "0.1.0"

__all__ = [
    "GridTaskError", "Palette", "RenderSpec", "TASKS", "TaskInstance", "as_grid", "build_convex",
    "build_discrete", "decode_image", "export_dataset", "extract_prediction", "family_defaults",
    "from_json", "get_palette", "grids_equal", "load_registry", "make_instances", "read_png",
    "render_grid", "to_json", "write_png",
]
