"""Built-in palette and per-family rendering defaults, with file overrides.

The built-in registry lives in ``data/registry.json``. An override file
(TOML or JSON) maps palette names to ``{value: [r, g, b]}`` tables, either at
top level or under a ``palettes`` key; a ``families`` table may also override
per-family defaults.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import PaletteError
from .grid import Palette, RenderSpec

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib


@dataclass(frozen=True)
class FamilyDefaults:
    palette: str
    render: RenderSpec
    boundary: str | None = None


@lru_cache(maxsize=1)
def _builtin() -> dict:
    text = resources.files("gridtasks").joinpath("data/registry.json").read_text()
    return json.loads(text)


def registry_version() -> int:
    return _builtin()["version"]


def _load_override(path) -> dict:
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix.lower() == ".toml":
        data = tomllib.loads(raw.decode())
    else:
        data = json.loads(raw)
    if "palettes" not in data and "families" not in data:
        data = {"palettes": data}
    return data


def load_registry(override=None) -> dict:
    """Return the merged registry dict (built-in updated by ``override``)."""
    reg = copy.deepcopy(_builtin())
    if override is not None:
        extra = _load_override(override) if not isinstance(override, dict) else override
        for name, table in extra.get("palettes", {}).items():
            reg["palettes"][name] = {str(k): list(v) for k, v in table.items()}
        for name, fam in extra.get("families", {}).items():
            reg["families"].setdefault(name, {}).update(fam)
    return reg


def get_palette(name: str, registry: dict | None = None) -> Palette:
    reg = registry or _builtin()
    try:
        table = reg["palettes"][name]
    except KeyError:
        raise PaletteError(f"unknown palette {name!r}") from None
    return Palette(name, {int(k): tuple(v) for k, v in table.items()})


def palette_names(registry: dict | None = None) -> list[str]:
    return sorted((registry or _builtin())["palettes"])


def family_defaults(family: str, registry: dict | None = None) -> FamilyDefaults:
    reg = registry or _builtin()
    try:
        fam = reg["families"][family]
    except KeyError:
        raise PaletteError(f"unknown task family {family!r}") from None
    spec = RenderSpec(fam.get("cell_px", 16), fam.get("gridline_px", 1),
                      tuple(fam.get("gridline_rgb", (64, 64, 64))))
    return FamilyDefaults(fam["palette"], spec, fam.get("boundary"))
