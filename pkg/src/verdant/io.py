"""File formats: GeoJSON zones and links, CSV tables, images and manifests."""

from __future__ import annotations

import csv
import json
import math
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .exceptions import ValidationError
from .geometry import Polygon, Polyline, Zone
from .imagery import CaptureMeta, ImageRaster
from .network import RoadNetwork
from .raster import fmt

EARTH_RADIUS = 6371008.8


@dataclass(frozen=True)
class Equirectangular:
    """Equirectangular projection about ``(lon0, lat0)`` in degrees."""

    lon0: float
    lat0: float

    @property
    def _kx(self) -> float:
        return EARTH_RADIUS * math.radians(1.0) * math.cos(math.radians(self.lat0))

    def forward(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.float64).reshape(-1, 2)
        return np.column_stack([(c[:, 0] - self.lon0) * self._kx,
                                (c[:, 1] - self.lat0) * EARTH_RADIUS * math.radians(1.0)])

    def inverse(self, xy) -> np.ndarray:
        c = np.asarray(xy, dtype=np.float64).reshape(-1, 2)
        return np.column_stack([c[:, 0] / self._kx + self.lon0,
                                c[:, 1] / (EARTH_RADIUS * math.radians(1.0)) + self.lat0])


def _load_json(path) -> object:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror or exc}") from None


def _features(path) -> list[dict]:
    doc = _load_json(path)
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ValidationError(f"{path}: expected a GeoJSON FeatureCollection")
    feats = doc.get("features")
    if not isinstance(feats, list):
        raise ValidationError(f"{path}: 'features' must be a list")
    for k, f in enumerate(feats):
        if not isinstance(f, dict) or not isinstance(f.get("geometry"), dict):
            raise ValidationError(f"{path}: feature {k}: missing geometry")
    return feats


def _prop(path, k, feat, key):
    props = feat.get("properties") or {}
    if key not in props or props[key] is None:
        raise ValidationError(f"{path}: feature {k}: missing '{key}' property")
    return props[key]


def _polygon_rings(path, k, geom) -> list[list]:
    kind = geom.get("type")
    coords = geom.get("coordinates")
    if kind == "Polygon":
        return [coords]
    if kind == "MultiPolygon":
        return list(coords)
    raise ValidationError(f"{path}: feature {k}: zone geometry must be Polygon or MultiPolygon, got {kind}")


def zone_centroid(path) -> tuple[float, float]:
    """Mean of all exterior-ring vertices (closing vertex excluded)."""
    pts = []
    for k, f in enumerate(_features(path)):
        for rings in _polygon_rings(path, k, f["geometry"]):
            pts.extend(rings[0][:-1] if rings[0][0] == rings[0][-1] else rings[0])
    if not pts:
        raise ValidationError(f"{path}: no zone vertices")
    arr = np.asarray(pts, dtype=np.float64)[:, :2]
    return float(arr[:, 0].mean()), float(arr[:, 1].mean())


def projection_for(zones_path, planar: bool) -> Equirectangular | None:
    """Projection shared by every vector input, or None for planar data."""
    if planar:
        return None
    if not zones_path:
        raise ValidationError("geographic inputs need a zones file to fix the projection center")
    return Equirectangular(*zone_centroid(zones_path))


def _xy(coords, proj: Equirectangular | None) -> np.ndarray:
    arr = np.asarray(coords, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise ValueError("bad coordinate array")
    arr = arr[:, :2]
    return proj.forward(arr) if proj is not None else arr


def read_zones(path, proj: Equirectangular | None = None) -> list[Zone]:
    zones = []
    seen = set()
    for k, f in enumerate(_features(path)):
        zid = _prop(path, k, f, "zone_id")
        if zid in seen:
            raise ValidationError(f"{path}: feature {k}: duplicate zone_id {zid!r}")
        seen.add(zid)
        try:
            polys = [Polygon(_xy(r[0], proj), tuple(_xy(h, proj) for h in r[1:]))
                     for r in _polygon_rings(path, k, f["geometry"])]
            zones.append(Zone(zid, tuple(polys)))
        except (ValueError, TypeError, IndexError) as exc:
            raise ValidationError(f"{path}: feature {k}: {exc}") from None
    return zones


def _dedupe(v: np.ndarray) -> np.ndarray:
    keep = np.concatenate([[True], np.any(np.diff(v, axis=0) != 0.0, axis=1)])
    return v[keep]


def read_network(path, proj: Equirectangular | None = None) -> RoadNetwork:
    lines = []
    seen = set()
    for k, f in enumerate(_features(path)):
        lid = _prop(path, k, f, "link_id")
        if lid in seen:
            raise ValidationError(f"{path}: feature {k}: duplicate link_id {lid!r}")
        seen.add(lid)
        geom = f["geometry"]
        if geom.get("type") != "LineString":
            raise ValidationError(f"{path}: feature {k}: link geometry must be LineString, got {geom.get('type')}")
        try:
            lines.append(Polyline(_dedupe(_xy(geom.get("coordinates"), proj)), lid))
        except (ValueError, TypeError) as exc:
            raise ValidationError(f"{path}: feature {k}: {exc}") from None
    return RoadNetwork.from_polylines(lines)


def _num(v):
    return float(fmt(v))


def _ring_coords(ring) -> list:
    return [[_num(x), _num(y)] for x, y in ring]


def write_zones_geojson(path, zones: Sequence[Zone], properties: dict | None = None,
                        proj: Equirectangular | None = None) -> None:
    """Zones as a FeatureCollection; ``properties`` maps zone id to extra properties."""
    feats = []
    for z in zones:
        polys = []
        for p in z.polygons:
            rings = [proj.inverse(r) if proj is not None else r for r in p.rings]
            polys.append([_ring_coords(r) for r in rings])
        geom = ({"type": "Polygon", "coordinates": polys[0]} if len(polys) == 1
                else {"type": "MultiPolygon", "coordinates": polys})
        props = {"zone_id": z.zone_id}
        if properties:
            props.update(properties.get(z.zone_id, {}))
        feats.append({"type": "Feature", "properties": props, "geometry": geom})
    _dump_json(path, {"type": "FeatureCollection", "features": feats})


def write_network_geojson(path, net: RoadNetwork) -> None:
    feats = []
    for lid in sorted(net.links):
        g = net.links[lid].geometry
        feats.append({"type": "Feature", "properties": {"link_id": lid},
                      "geometry": {"type": "LineString", "coordinates": _ring_coords(g.vertices)}})
    _dump_json(path, {"type": "FeatureCollection", "features": feats})


def _dump_json(path, doc) -> None:
    with open(path, "w", newline="\n") as f:
        json.dump(doc, f, indent=1, sort_keys=False)
        f.write("\n")


def write_json(path, doc) -> None:
    _dump_json(path, doc)


# CSV tables

def cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else fmt(v)
    return str(v)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([cell(v) for v in r])


def read_csv(path, required: Sequence[str]) -> list[dict]:
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            missing = [c for c in required if c not in (reader.fieldnames or [])]
            if missing:
                raise ValidationError(f"{path}: missing column(s) {', '.join(missing)}")
            return list(reader)
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror or exc}") from None


def parse_float(path, line: int, key: str, value: str) -> float | None:
    if value is None or value == "":
        return None
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"{path}: line {line}: bad {key} value {value!r}") from None


def parse_bool(value: str) -> bool:
    return str(value).strip().lower() in ("true", "1", "yes")


SITES_HEADER = ("site_id", "link_id", "offset_m", "x", "y", "is_node")
GVI_HEADER = ("site_id", "gvi", "images_used", "year_mode", "month_mode")
ZONES_HEADER = ("zone_id", "sgvi", "gvi_mean", "gvi_median", "site_count", "road_length_m", "excluded")
NDVI_HEADER = ("zone_id", "ndvi_mean", "pixels_used")


def read_sites(path) -> list[tuple]:
    """``(site_id, (x, y))`` from a sites table."""
    out = []
    for i, row in enumerate(read_csv(path, ("site_id", "x", "y")), start=2):
        x = parse_float(path, i, "x", row["x"])
        y = parse_float(path, i, "y", row["y"])
        if x is None or y is None:
            raise ValidationError(f"{path}: line {i}: missing coordinate")
        out.append((row["site_id"], (x, y)))
    return out


def read_gvi(path) -> dict:
    out = {}
    for i, row in enumerate(read_csv(path, ("site_id", "gvi")), start=2):
        out[row["site_id"]] = parse_float(path, i, "gvi", row["gvi"])
    return out


# images

def decode_image(data: bytes | str | os.PathLike) -> ImageRaster:
    """Decode PPM (P6) or PNG into an 8-bit RGB image."""
    try:
        if isinstance(data, (bytes, bytearray)):
            import io as _io
            img = Image.open(_io.BytesIO(data))
        else:
            img = Image.open(data)
        with img:
            if img.format not in ("PPM", "PNG"):
                raise ValidationError(f"unsupported image format {img.format}")
            return ImageRaster(np.asarray(img.convert("RGB")))
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ValidationError(f"cannot decode image: {exc}") from None


def write_ppm(path, image: ImageRaster) -> None:
    Image.fromarray(np.asarray(image.pixels)).save(path, format="PPM")


class ImageProvider(ABC):
    """Source of street-level captures for a site."""

    @abstractmethod
    def captures(self, site_id: Hashable) -> list[CaptureMeta]:
        """Metadata of every capture available for ``site_id``."""

    @abstractmethod
    def fetch(self, meta: CaptureMeta) -> bytes | None:
        """Encoded image for a capture, or None if it cannot be read."""

    def get(self, site_id: Hashable, heading: float) -> tuple[bytes, CaptureMeta] | None:
        for m in self.captures(site_id):
            if m.heading == heading:
                data = self.fetch(m)
                if data is not None:
                    return data, m
        return None


class LocalDirectoryProvider(ImageProvider):
    """Captures listed in a JSON manifest, images stored on disk.

    The manifest maps site id to a list of ``{path, heading, pitch, year,
    month}`` entries; paths are relative to ``root`` (default: the
    manifest's directory).
    """

    def __init__(self, manifest: str | os.PathLike, root: str | os.PathLike | None = None):
        self.manifest = Path(manifest)
        self.root = Path(root) if root else self.manifest.parent
        doc = _load_json(self.manifest)
        if not isinstance(doc, dict):
            raise ValidationError(f"{manifest}: manifest must map site ids to capture lists")
        self._entries: dict = {}
        self._paths: dict = {}
        for sid, items in doc.items():
            if not isinstance(items, list):
                raise ValidationError(f"{manifest}: site {sid!r}: expected a list of captures")
            metas = []
            for k, it in enumerate(items):
                try:
                    m = CaptureMeta(sid, float(it["heading"]), int(it["year"]), int(it["month"]),
                                    float(it.get("pitch", 0.0)))
                    path = str(it["path"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise ValidationError(f"{manifest}: site {sid!r} capture {k}: {exc}") from None
                metas.append(m)
                self._paths[(sid, k)] = path
            self._entries[sid] = metas

    def captures(self, site_id):
        return list(self._entries.get(site_id, ()))

    def fetch(self, meta):
        for k, m in enumerate(self._entries.get(meta.site_id, ())):
            if m == meta:
                try:
                    return (self.root / self._paths[(meta.site_id, k)]).read_bytes()
                except OSError:
                    return None
        return None
