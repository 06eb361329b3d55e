"""Synthetic scenes with a known ground truth.

A scene is a set of zones, a road network, a vegetation field giving the
greenness fraction at every point, and sites whose GVI is read straight
off the field. The truth a zonal GVI should recover is the
length-weighted mean of the field along the zone's roads.

Random fields use lattice value noise with a 32-bit integer hash and
polynomial interpolation, so a seed gives the same field on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import Point2, Polygon, Polyline, Zone
from .network import PlacedSite, RoadNetwork, clip_network, place_sites
from .raster import RasterGrid

SCENARIOS = ("fig4", "uniform", "random")

_M32 = np.uint64(0xFFFFFFFF)


def _hash2(ix: np.ndarray, iy: np.ndarray, seed: int) -> np.ndarray:
    """Integer lattice hash to [0, 1)."""
    with np.errstate(over="ignore"):
        x = ix.astype(np.int64).astype(np.uint64) & _M32
        y = iy.astype(np.int64).astype(np.uint64) & _M32
        h = (x * np.uint64(374761393) + y * np.uint64(668265263)
             + np.uint64((seed * 2246822519) & 0xFFFFFFFF)) & _M32
        h = ((h ^ (h >> np.uint64(13))) * np.uint64(1274126177)) & _M32
        h = h ^ (h >> np.uint64(16))
    return h.astype(np.float64) / 4294967296.0


def value_noise(pts, seed: int, scale: float, octaves: int = 4, persistence: float = 0.5) -> np.ndarray:
    """Fractal value noise in [0, 1) at ``(n, 2)`` points.

    ``scale`` is the lattice spacing of the first octave in meters.
    """
    pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
    total = np.zeros(len(pts))
    amp, norm, freq = 1.0, 0.0, 1.0 / scale
    for o in range(octaves):
        x, y = pts[:, 0] * freq, pts[:, 1] * freq
        x0, y0 = np.floor(x), np.floor(y)
        fx, fy = x - x0, y - y0
        sx, sy = fx * fx * (3 - 2 * fx), fy * fy * (3 - 2 * fy)
        s = seed + 1013 * o
        v00 = _hash2(x0, y0, s)
        v10 = _hash2(x0 + 1, y0, s)
        v01 = _hash2(x0, y0 + 1, s)
        v11 = _hash2(x0 + 1, y0 + 1, s)
        top = v00 + sx * (v10 - v00)
        bot = v01 + sx * (v11 - v01)
        total += amp * (top + sy * (bot - top))
        norm += amp
        amp *= persistence
        freq *= 2.0
    return total / norm


@dataclass(frozen=True)
class VegetationField:
    """Greenness fraction in [0, 1] as a function of position.

    Build with :meth:`constant`, :meth:`split`, :meth:`blob` or :meth:`noise`.
    """

    kind: str
    params: dict
    _fn: Callable = field(repr=False, compare=False)

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
        return np.clip(self._fn(pts), 0.0, 1.0)

    def at(self, p) -> float:
        return float(self(np.asarray(p, dtype=np.float64).reshape(1, 2))[0])

    @classmethod
    def constant(cls, value: float) -> "VegetationField":
        return cls("constant", {"value": value}, lambda p: np.full(len(p), float(value)))

    @classmethod
    def split(cls, boundary_y: float, above: float, below: float) -> "VegetationField":
        """``above`` where ``y >= boundary_y``, ``below`` elsewhere."""
        return cls("split", {"boundary_y": boundary_y, "above": above, "below": below},
                   lambda p: np.where(p[:, 1] >= boundary_y, above, below))

    @classmethod
    def blob(cls, center, radius: float, inside: float, outside: float) -> "VegetationField":
        cx, cy = center

        def fn(p):
            q = ((p[:, 0] - cx) ** 2 + (p[:, 1] - cy) ** 2) / radius ** 2
            w = np.clip(1.0 - q, 0.0, 1.0) ** 2
            return outside + (inside - outside) * w

        return cls("blob", {"center": (cx, cy), "radius": radius, "inside": inside, "outside": outside}, fn)

    @classmethod
    def noise(cls, seed: int, scale: float = 200.0, low: float = 0.0, high: float = 1.0) -> "VegetationField":
        return cls("noise", {"seed": seed, "scale": scale, "low": low, "high": high},
                   lambda p: low + (high - low) * value_noise(p, seed, scale))


@dataclass(frozen=True)
class SyntheticScene:
    name: str
    seed: int
    zones: tuple
    network: RoadNetwork
    field: VegetationField
    sites: tuple = ()
    gvi: dict = field(default_factory=dict, repr=False)

    @property
    def zone(self) -> Zone:
        return self.zones[0]

    def site_records(self) -> list[tuple]:
        """``(site_id, position, gvi)`` triples for aggregation."""
        return [(s.site_id, s.position, self.gvi.get(s.site_id)) for s in self.sites]


def network_mean(fld: VegetationField, roads: Sequence[Polyline], step: float) -> float | None:
    """Length-weighted mean of ``100 * fld`` along ``roads``.

    Midpoint rule: each segment is cut into ``ceil(length / step)`` equal
    parts sampled at their centers.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    acc = 0.0
    total = 0.0
    for line in roads:
        v = line.vertices
        for i, seg in enumerate(line.segment_lengths):
            n = max(1, math.ceil(seg / step))
            for lo in range(0, n, 1 << 20):
                hi = min(n, lo + (1 << 20))
                f = (np.arange(lo, hi, dtype=np.float64) + 0.5) / n
                pts = v[i] + f[:, None] * (v[i + 1] - v[i])
                acc += float(fld(pts).sum()) * (seg / n)
            total += seg
    return 100.0 * acc / total if total > 0 else None


def truth_network_mean(scene: SyntheticScene, step: float = 0.01, zone: Zone | None = None) -> float | None:
    """Expected GVI at a uniformly random point of the zone's roads."""
    zone = scene.zone if zone is None else zone
    return network_mean(scene.field, clip_network(scene.network, zone), step)


def _rect(x0, y0, x1, y1) -> Polygon:
    return Polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def _split_lines(xs: Sequence[float], ys: Sequence[float], xlim, ylim, prefix=("v", "h")) -> list[Polyline]:
    """Axis-parallel street grid split into links at every crossing."""
    lines = []
    for i, x in enumerate(xs):
        cuts = [ylim[0], *sorted(y for y in ys if ylim[0] < y < ylim[1]), ylim[1]]
        for k in range(len(cuts) - 1):
            lines.append(Polyline([(x, cuts[k]), (x, cuts[k + 1])], f"{prefix[0]}{i}_{k}"))
    for j, y in enumerate(ys):
        cuts = [xlim[0], *sorted(x for x in xs if xlim[0] < x < xlim[1]), xlim[1]]
        for k in range(len(cuts) - 1):
            lines.append(Polyline([(cuts[k], y), (cuts[k + 1], y)], f"{prefix[1]}{j}_{k}"))
    return lines


def _locate(net: RoadNetwork, p) -> tuple:
    """Link id and stored-direction offset of a point lying on the network."""
    best = (math.inf, None, 0.0)
    p = np.asarray(p, dtype=np.float64)
    for lid in sorted(net.links):
        g = net.links[lid].geometry
        v = g.vertices
        for i in range(len(v) - 1):
            d = v[i + 1] - v[i]
            t = float(np.clip(np.dot(p - v[i], d) / np.dot(d, d), 0.0, 1.0))
            dist = float(np.hypot(*(v[i] + t * d - p)))
            if dist < best[0] - 1e-12:
                best = (dist, lid, float(g.cumulative[i] + t * g.segment_lengths[i]))
    return best[1], best[2]


def _even(lo: float, hi: float, spacing: float) -> np.ndarray:
    """Positions at most ``spacing`` apart, half a gap in from each end."""
    n = max(1, math.ceil((hi - lo) / spacing))
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def make_fig4_scene(seed: int = 0, dense: float = 10.0, sparse: float = 100.0,
                    low: float = 0.05, high: float = 0.25) -> SyntheticScene:
    """A zone whose upper half has low greenness and dense sites.

    The lower half is greener and sampled every ``sparse`` meters, the
    upper half every ``dense`` meters. On vertical streets the sites
    nearest the dividing line sit 5 m either side of it, so their bisector
    is the dividing line itself and sGVI matches the truth.
    """
    rng = np.random.default_rng(seed)
    width = float(rng.uniform(300.0, 500.0))
    h_low = float(rng.uniform(200.0, 300.0))
    h_up = float(rng.uniform(200.0, 300.0))
    height = h_low + h_up
    b = h_low
    nv = int(rng.integers(2, 4))
    xs = [width * (k + 0.5) / nv + float(rng.uniform(-10.0, 10.0)) for k in range(nv)]
    y_low = float(rng.uniform(40.0, b - 70.0))
    y_up = float(rng.uniform(b + 70.0, height - 40.0))
    lines = _split_lines(xs, [y_low, y_up], (-20.0, width + 20.0), (-20.0, height + 20.0))
    net = RoadNetwork.from_polylines(lines)
    zone = Zone("Z0", (_rect(0.0, 0.0, width, height),))
    fld = VegetationField.split(b, above=low, below=high)

    pts = []
    for x in xs:
        pts += [(x, y) for y in np.arange(b + dense / 2, height, dense)]
        pts += [(x, y) for y in np.arange(b - dense / 2, 0.0, -sparse)]
    pts += [(x, y_up) for x in _even(0.0, width, dense)]
    pts += [(x, y_low) for x in _even(0.0, width, sparse)]
    return _scene_from_points("fig4", seed, (zone,), net, fld, pts)


def _scene_from_points(name, seed, zones, net, fld, pts) -> SyntheticScene:
    sites = []
    for i, p in enumerate(pts):
        lid, off = _locate(net, p)
        sites.append(PlacedSite(f"s{i:06d}", Point2(float(p[0]), float(p[1])), lid, off, False))
    gvi = {s.site_id: 100.0 * fld.at(s.position) for s in sites}
    return SyntheticScene(name, seed, tuple(zones), net, fld, tuple(sites), gvi)


def _block_zones(nx: int, ny: int, size: float) -> tuple:
    zones = []
    for j in range(ny):
        for i in range(nx):
            zones.append(Zone(f"Z{j:02d}{i:02d}",
                              (_rect(i * size, j * size, (i + 1) * size, (j + 1) * size),)))
    return tuple(zones)


def make_uniform_scene(seed: int = 0, value: float = 0.2, blocks: int = 3, block: float = 200.0,
                       spacing: float = 50.0) -> SyntheticScene:
    """Constant greenness on a regular street grid."""
    extent = blocks * block
    ticks = list(np.arange(50.0, extent, 100.0))
    lines = _split_lines(ticks, ticks, (0.0, extent), (0.0, extent))
    net = RoadNetwork.from_polylines(lines)
    fld = VegetationField.constant(value)
    sites = place_sites(net, spacing)
    gvi = {s.site_id: 100.0 * fld.at(s.position) for s in sites}
    return SyntheticScene("uniform", seed, _block_zones(blocks, blocks, block), net, fld, tuple(sites), gvi)


def make_random_scene(seed: int = 0, blocks: int = 4, block: float = 150.0, street: float = 50.0,
                      spacing: float = 50.0, dense: float = 10.0, dense_share: float = 0.3) -> SyntheticScene:
    """Jittered street grid, noise greenness and uneven site density.

    Sites go every ``spacing`` meters on all links and every ``dense``
    meters on a random ``dense_share`` of links.
    """
    rng = np.random.default_rng(seed)
    extent = blocks * block
    n = int(round(extent / street)) + 1
    g = np.stack(np.meshgrid(np.arange(n) * street, np.arange(n) * street, indexing="ij"), -1)
    g = g + rng.uniform(-0.2 * street, 0.2 * street, g.shape)
    lines = []
    for i in range(n):
        for j in range(n):
            if i + 1 < n:
                lines.append(Polyline([g[i, j], g[i + 1, j]], f"x{i:02d}_{j:02d}"))
            if j + 1 < n:
                lines.append(Polyline([g[i, j], g[i, j + 1]], f"y{i:02d}_{j:02d}"))
    net = RoadNetwork.from_polylines(lines)
    fld = VegetationField.noise(seed, scale=block, low=0.02, high=0.45)
    sites = list(place_sites(net, spacing))
    taken = len(sites)
    for lid in sorted(net.links):
        if rng.random() >= dense_share:
            continue
        geom = net.links[lid].geometry
        for off in np.arange(dense, geom.length - dense / 2, dense):
            if np.min(np.abs(off - np.arange(0.0, geom.length + spacing, spacing))) < 1.0:
                continue
            p = geom.point_at(float(off))
            sites.append(PlacedSite(f"s{taken:06d}", p, lid, float(off), False))
            taken += 1
    gvi = {s.site_id: 100.0 * fld.at(s.position) for s in sites}
    return SyntheticScene("random", seed, _block_zones(blocks, blocks, block), net, fld, tuple(sites), gvi)


def make_scene(name: str, seed: int = 0) -> SyntheticScene:
    if name == "fig4":
        return make_fig4_scene(seed)
    if name == "uniform":
        return make_uniform_scene(seed)
    if name == "random":
        return make_random_scene(seed)
    raise ValueError(f"unknown scenario {name!r}; expected one of {', '.join(SCENARIOS)}")


def ndvi_target(scene: SyntheticScene, pts: np.ndarray) -> np.ndarray:
    """NDVI the scene's rasters are built to reproduce at ``pts``."""
    base = scene.field(pts)
    if scene.name == "random":
        base = 0.9 * base - 0.05 + 0.2 * (value_noise(pts, scene.seed + 7, 80.0) - 0.5)
    return np.clip(base, -0.95, 0.95)


def scene_bands(scene: SyntheticScene, cell: float = 10.0, dates: int = 2,
                spread: float = 0.03) -> list[tuple[RasterGrid, RasterGrid]]:
    """Per-date (NIR, Red) reflectance grids covering all zones.

    Date ``k`` is offset from the target NDVI by a symmetric amount, so the
    date-mean of NDVI is the target except where clipping bites.
    """
    b = np.array([z.bounds for z in scene.zones])
    x0, y0 = math.floor(b[:, 0].min() / cell) * cell, math.floor(b[:, 1].min() / cell) * cell
    x1, y1 = math.ceil(b[:, 2].max() / cell) * cell, math.ceil(b[:, 3].max() / cell) * cell
    cols, rows = int(round((x1 - x0) / cell)), int(round((y1 - y0) / cell))
    xc = x0 + (np.arange(cols) + 0.5) * cell
    yc = y1 - (np.arange(rows) + 0.5) * cell
    X, Y = np.meshgrid(xc, yc)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    target = ndvi_target(scene, pts).reshape(rows, cols)
    red = 0.05 + 0.05 * value_noise(pts, scene.seed + 11, 60.0).reshape(rows, cols)
    offsets = np.linspace(-spread, spread, dates) if dates > 1 else np.zeros(1)
    out = []
    for off in offsets:
        v = np.clip(target + off, -0.95, 0.95)
        nir = red * (1.0 + v) / (1.0 - v)
        origin = Point2(x0, y1)
        out.append((RasterGrid(origin, cell, nir), RasterGrid(origin, cell, red)))
    return out


def make_benchmark_scene(n_sites: int = 10_000, n_segments: int = 5_000, seed: int = 0,
                         street: float = 40.0) -> tuple[list[Polyline], list[tuple]]:
    """Two-vertex road segments on a jittered grid, with sites scattered along them."""
    rng = np.random.default_rng(seed)
    n = int(math.ceil(math.sqrt(n_segments / 2.0))) + 1
    g = np.stack(np.meshgrid(np.arange(n) * street, np.arange(n) * street, indexing="ij"), -1)
    g = g + rng.uniform(-0.2 * street, 0.2 * street, g.shape)
    segs = []
    for i in range(n):
        for j in range(n):
            if i + 1 < n:
                segs.append((g[i, j], g[i + 1, j]))
            if j + 1 < n:
                segs.append((g[i, j], g[i, j + 1]))
    roads = [Polyline([a, b], f"e{k:05d}") for k, (a, b) in enumerate(segs[:n_segments])]
    pick = rng.integers(0, len(roads), n_sites)
    frac = rng.random(n_sites)
    a = np.array([roads[k].vertices[0] for k in pick])
    b = np.array([roads[k].vertices[-1] for k in pick])
    pts = a + frac[:, None] * (b - a) + rng.normal(0.0, 2.0, (n_sites, 2))
    return roads, [(f"s{i:05d}", p) for i, p in enumerate(pts)]
