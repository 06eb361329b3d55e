"""Project configuration: one JSON document, every key overridable from the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .exceptions import ValidationError
from .imagery import DEFAULT_THRESHOLD, GREEN_MONTHS
from .raster import DEFAULT_SCALE

_PATH_KEYS = ("zones", "network", "sites", "gvi", "manifest", "image_root", "output_dir")


@dataclass(frozen=True)
class ProjectConfig:
    zones: Path | None = None
    network: Path | None = None
    sites: Path | None = None
    gvi: Path | None = None
    manifest: Path | None = None
    image_root: Path | None = None
    rasters: tuple = ()
    output_dir: Path = Path(".")
    planar: bool = False
    green_months: frozenset = GREEN_MONTHS
    preferred_year: int | None = None
    spacing: float = 100.0
    green_threshold: int = DEFAULT_THRESHOLD
    raster_scale: float = DEFAULT_SCALE
    oracle_step: float = 0.01

    def __post_init__(self):
        if not self.green_months or not set(self.green_months) <= set(range(1, 13)):
            raise ValidationError("green_months must be a non-empty subset of 1..12")
        if not self.spacing > 0:
            raise ValidationError("spacing must be positive")
        if not self.raster_scale > 0:
            raise ValidationError("raster_scale must be positive")
        if not self.oracle_step > 0:
            raise ValidationError("oracle_step must be positive")

    @property
    def sites_path(self) -> Path:
        return self.sites or self.output_dir / "sites.csv"

    @property
    def gvi_path(self) -> Path:
        return self.gvi or self.output_dir / "gvi.csv"

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if not getattr(self, k)]
        if missing:
            raise ValidationError(f"missing configuration: {', '.join(missing)}")

    def updated(self, **overrides) -> "ProjectConfig":
        return from_dict({k: v for k, v in overrides.items() if v is not None}, base=self)


def parse_months(value) -> frozenset:
    """Accept ``[4, 5]``, ``"4-10"`` or ``"4,5,6"``."""
    if isinstance(value, str):
        out = set()
        for part in value.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.update(range(int(lo), int(hi) + 1))
            elif part:
                out.add(int(part))
        return frozenset(out)
    return frozenset(int(m) for m in value)


def from_dict(doc: dict, base: ProjectConfig | None = None, root: Path | None = None) -> ProjectConfig:
    known = {f.name for f in fields(ProjectConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ValidationError(f"unknown configuration key(s): {', '.join(sorted(unknown))}")
    root = root or Path(".")
    vals = {}
    try:
        for k, v in doc.items():
            if k in _PATH_KEYS and v is not None:
                p = Path(v)
                vals[k] = p if p.is_absolute() else root / p
            elif k == "rasters":
                vals[k] = tuple({"nir": _resolve(d["nir"], root), "red": _resolve(d["red"], root)} for d in v)
            elif k == "green_months":
                vals[k] = parse_months(v)
            elif k in ("spacing", "raster_scale", "oracle_step"):
                vals[k] = float(v)
            elif k == "green_threshold":
                vals[k] = int(v)
            elif k == "preferred_year":
                vals[k] = None if v is None else int(v)
            elif k == "planar":
                vals[k] = bool(v)
            else:
                vals[k] = v
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad configuration value: {exc}") from None
    return replace(base or ProjectConfig(), **vals)


def _resolve(v, root: Path) -> Path:
    p = Path(v)
    return p if p.is_absolute() else root / p


def load_config(path) -> ProjectConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror or exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: configuration must be a JSON object")
    return from_dict(doc, root=path.parent)
