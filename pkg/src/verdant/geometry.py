"""Planar geometry and the nearest-site partition of road polylines.

All coordinates are planar meters. Shapes are immutable once built and
hold their vertices as read-only ``float64`` arrays.

The partition works one segment at a time. Along a segment ``a + t*d``
(``d`` a unit vector) the squared distance to a site ``s`` is::

    t**2 - 2*t*u_s + c_s,   u_s = d.(s - a),   c_s = |s - a|**2

The ``t**2`` term is shared by every site, so the nearest site at ``t`` is
the one minimising the line ``c_s - 2*t*u_s``. The assignment along the
segment is therefore the lower envelope of a set of lines, whose
breakpoints are exactly where the segment crosses perpendicular
bisectors. Candidate sites are pruned with a k-d tree before the envelope
is walked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .exceptions import NoSitesError, ValidationError

# distance under which a point counts as lying on a polygon boundary
BOUNDARY_TOL = 1e-9
# shorter clipped pieces and fragments are dropped
MIN_PIECE_LENGTH = 1e-9

_CHUNK = 1 << 20


class Point2(NamedTuple):
    x: float
    y: float


def _as_points(coords, what: str) -> np.ndarray:
    arr = np.array(coords, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"{what}: expected a sequence of (x, y) pairs")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what}: coordinates must be finite")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Polyline:
    """An ordered chain of at least two distinct consecutive vertices."""

    vertices: np.ndarray
    link_id: Hashable | None = None

    def __post_init__(self):
        v = _as_points(self.vertices, "polyline")
        if len(v) < 2:
            raise ValidationError("polyline needs at least 2 vertices")
        seg = np.hypot(*np.diff(v, axis=0).T)
        if np.any(seg == 0.0):
            raise ValidationError("polyline has repeated consecutive vertices")
        object.__setattr__(self, "vertices", _frozen(v))

    @cached_property
    def segment_lengths(self) -> np.ndarray:
        return _frozen(np.hypot(*np.diff(self.vertices, axis=0).T))

    @cached_property
    def cumulative(self) -> np.ndarray:
        """Arc length at each vertex, starting at 0."""
        return _frozen(np.concatenate([[0.0], np.cumsum(self.segment_lengths)]))

    @property
    def length(self) -> float:
        return float(self.cumulative[-1])

    def point_at(self, s: float) -> Point2:
        """Point at arc length ``s`` (clamped to the polyline)."""
        s = min(max(s, 0.0), self.length)
        i = int(np.searchsorted(self.cumulative, s, side="right")) - 1
        i = min(max(i, 0), len(self.segment_lengths) - 1)
        f = (s - self.cumulative[i]) / self.segment_lengths[i]
        p = self.vertices[i] + f * (self.vertices[i + 1] - self.vertices[i])
        return Point2(float(p[0]), float(p[1]))

    def sub(self, s0: float, s1: float) -> "Polyline":
        """The piece between arc lengths ``s0 < s1``."""
        cum = self.cumulative
        inner = np.flatnonzero((cum > s0) & (cum < s1))
        pts = [self.point_at(s0)]
        pts.extend(self.vertices[inner])
        pts.append(self.point_at(s1))
        pts = np.asarray(pts, dtype=np.float64)
        keep = np.concatenate([[True], np.any(np.diff(pts, axis=0) != 0.0, axis=1)])
        return Polyline(pts[keep], self.link_id)

    def __eq__(self, other):
        if not isinstance(other, Polyline):
            return NotImplemented
        return (self.link_id == other.link_id
                and self.vertices.shape == other.vertices.shape
                and bool(np.array_equal(self.vertices, other.vertices)))

    __hash__ = None  # type: ignore[assignment]


def _signed_area(ring: np.ndarray) -> float:
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1]))


def _segments_cross(p1, p2, q1, q2) -> np.ndarray:
    """Pairwise proper-or-touching intersection test, broadcasting."""
    def orient(a, b, c):
        return np.sign((b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
                       - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0]))

    def on_seg(a, b, c):
        return ((np.minimum(a[..., 0], b[..., 0]) <= c[..., 0])
                & (c[..., 0] <= np.maximum(a[..., 0], b[..., 0]))
                & (np.minimum(a[..., 1], b[..., 1]) <= c[..., 1])
                & (c[..., 1] <= np.maximum(a[..., 1], b[..., 1])))

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    hit |= (o1 == 0) & on_seg(p1, p2, q1)
    hit |= (o2 == 0) & on_seg(p1, p2, q2)
    hit |= (o3 == 0) & on_seg(q1, q2, p1)
    hit |= (o4 == 0) & on_seg(q1, q2, p2)
    return hit


def _check_simple(ring: np.ndarray, what: str) -> None:
    n = len(ring) - 1
    a, b = ring[:-1], ring[1:]
    hit = _segments_cross(a[:, None], b[:, None], a[None, :], b[None, :])
    idx = np.arange(n)
    d = np.abs(idx[:, None] - idx[None, :])
    adjacent = (d <= 1) | (d == n - 1)
    if np.any(hit & ~adjacent):
        raise ValidationError(f"{what} is self-intersecting")


def _close_ring(coords, what: str) -> np.ndarray:
    ring = _as_points(coords, what)
    if len(ring) and not np.array_equal(ring[0], ring[-1]):
        ring = np.vstack([ring, ring[:1]])
    keep = np.concatenate([[True], np.any(np.diff(ring, axis=0) != 0.0, axis=1)])
    ring = ring[keep]
    if len(ring) < 4:
        raise ValidationError(f"{what} needs at least 3 distinct vertices")
    return ring


@dataclass(frozen=True, eq=False)
class Polygon:
    """A simple polygon with optional holes.

    Rings are closed on construction if needed and reoriented so the
    exterior runs counter-clockwise and holes clockwise.
    """

    exterior: np.ndarray
    holes: tuple = ()

    def __post_init__(self):
        ext = _close_ring(self.exterior, "exterior ring")
        _check_simple(ext, "exterior ring")
        if _signed_area(ext) < 0:
            ext = ext[::-1].copy()
        holes = []
        for k, h in enumerate(self.holes):
            ring = _close_ring(h, f"hole {k}")
            _check_simple(ring, f"hole {k}")
            if _signed_area(ring) > 0:
                ring = ring[::-1].copy()
            holes.append(_frozen(ring))
        object.__setattr__(self, "exterior", _frozen(ext))
        object.__setattr__(self, "holes", tuple(holes))
        if self.area <= 0:
            raise ValidationError("polygon has non-positive area")

    @property
    def rings(self) -> tuple:
        return (self.exterior, *self.holes)

    @cached_property
    def area(self) -> float:
        return sum(_signed_area(r) for r in self.rings)

    @cached_property
    def bounds(self) -> tuple[float, float, float, float]:
        lo = self.exterior.min(axis=0)
        hi = self.exterior.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    @cached_property
    def _edges(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.vstack([r[:-1] for r in self.rings])
        b = np.vstack([r[1:] for r in self.rings])
        return a, b

    @property
    def parts(self) -> tuple["Polygon", ...]:
        return (self,)

    def contains_points(self, pts) -> np.ndarray:
        """Boundary-inclusive containment for an ``(n, 2)`` array."""
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
        out = np.zeros(len(pts), dtype=bool)
        xmin, ymin, xmax, ymax = self.bounds
        cand = np.flatnonzero((pts[:, 0] >= xmin - BOUNDARY_TOL) & (pts[:, 0] <= xmax + BOUNDARY_TOL)
                              & (pts[:, 1] >= ymin - BOUNDARY_TOL) & (pts[:, 1] <= ymax + BOUNDARY_TOL))
        if len(cand) == 0:
            return out
        a, b = self._edges
        step = max(1, _CHUNK // len(a))
        for lo in range(0, len(cand), step):
            sel = cand[lo:lo + step]
            out[sel] = _contains(a, b, pts[sel])
        return out


def _contains(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> np.ndarray:
    px, py = p[:, 0:1], p[:, 1:2]
    ax, ay, bx, by = a[:, 0], a[:, 1], b[:, 0], b[:, 1]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = ax + (py - ay) * (bx - ax) / (by - ay)
    inside = (np.count_nonzero(straddle & (px < xcross), axis=1) % 2) == 1
    # distance to each edge for the boundary rule
    ex, ey = bx - ax, by - ay
    len2 = ex * ex + ey * ey
    t = np.clip(((px - ax) * ex + (py - ay) * ey) / len2, 0.0, 1.0)
    dx = px - (ax + t * ex)
    dy = py - (ay + t * ey)
    on_edge = np.any(dx * dx + dy * dy <= BOUNDARY_TOL * BOUNDARY_TOL, axis=1)
    return inside | on_edge


@dataclass(frozen=True, eq=False)
class Zone:
    """An aggregation unit: one or more disjoint polygons under one id."""

    zone_id: Hashable
    polygons: tuple

    def __post_init__(self):
        polys = tuple(self.polygons)
        if not polys:
            raise ValidationError(f"zone {self.zone_id!r} has no polygons")
        object.__setattr__(self, "polygons", polys)

    @property
    def parts(self) -> tuple[Polygon, ...]:
        return self.polygons

    @cached_property
    def area(self) -> float:
        return sum(p.area for p in self.polygons)

    @cached_property
    def bounds(self) -> tuple[float, float, float, float]:
        b = np.array([p.bounds for p in self.polygons])
        return (float(b[:, 0].min()), float(b[:, 1].min()),
                float(b[:, 2].max()), float(b[:, 3].max()))

    def contains_points(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
        out = np.zeros(len(pts), dtype=bool)
        for poly in self.polygons:
            out |= poly.contains_points(pts)
        return out


def polygon_contains(poly: Polygon | Zone, p) -> bool:
    """True if ``p`` is inside ``poly`` or on its boundary."""
    pt = _as_points([p], "point")
    return bool(poly.contains_points(pt)[0])


def _crossing_params(p: np.ndarray, q: np.ndarray, a: np.ndarray, b: np.ndarray) -> list[np.ndarray]:
    """For each segment p[i]->q[i], parameters in (0, 1) where it meets an edge."""
    d = q - p
    e = b - a
    out = []
    for i in range(len(p)):
        di = d[i]
        w = a - p[i]
        den = di[0] * e[:, 1] - di[1] * e[:, 0]
        num_t = w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]
        num_s = w[:, 0] * di[1] - w[:, 1] * di[0]
        scale = np.hypot(*di) * np.hypot(e[:, 0], e[:, 1])
        par = np.abs(den) <= 1e-12 * scale
        ts = []
        ok = ~par
        if np.any(ok):
            t = num_t[ok] / den[ok]
            s = num_s[ok] / den[ok]
            hit = (s >= -1e-12) & (s <= 1 + 1e-12)
            ts.append(t[hit])
        col = par & (np.abs(num_s) <= 1e-12 * scale + 1e-300)
        if np.any(col):
            dd = float(di @ di)
            ts.append((w[col] @ di) / dd)
            ts.append(((b[col] - p[i]) @ di) / dd)
        if ts:
            t = np.concatenate(ts)
            t = t[(t > 0.0) & (t < 1.0)]
        else:
            t = np.empty(0)
        out.append(np.unique(t))
    return out


def _clip_one(poly: Polygon, line: Polyline) -> list[Polyline]:
    xmin, ymin, xmax, ymax = poly.bounds
    v = line.vertices
    lo, hi = v.min(axis=0), v.max(axis=0)
    if hi[0] < xmin - BOUNDARY_TOL or lo[0] > xmax + BOUNDARY_TOL or hi[1] < ymin - BOUNDARY_TOL or lo[1] > ymax + BOUNDARY_TOL:
        return []
    a, b = poly._edges
    params = _crossing_params(v[:-1], v[1:], a, b)
    cum = line.cumulative
    seglen = line.segment_lengths
    # arc-length intervals between consecutive crossings
    starts, ends = [], []
    for i, ts in enumerate(params):
        knots = np.concatenate([[0.0], ts, [1.0]])
        starts.append(cum[i] + knots[:-1] * seglen[i])
        ends.append(cum[i] + knots[1:] * seglen[i])
    s0 = np.concatenate(starts)
    s1 = np.concatenate(ends)
    good = s1 > s0
    s0, s1 = s0[good], s1[good]
    mids = np.array([line.point_at(0.5 * (x + y)) for x, y in zip(s0, s1)])
    inside = poly.contains_points(mids)
    pieces = []
    run_start = None
    prev_end = None
    for x, y, ins in zip(s0, s1, inside):
        if ins:
            if run_start is None:
                run_start = x
            prev_end = y
        elif run_start is not None:
            pieces.append((run_start, prev_end))
            run_start = None
    if run_start is not None:
        pieces.append((run_start, prev_end))
    out = []
    for x, y in pieces:
        if y - x < MIN_PIECE_LENGTH:
            continue
        if x == 0.0 and y == line.length:
            out.append(line)
        else:
            out.append(line.sub(x, y))
    return out


def clip_polyline(poly: Polygon | Zone, line: Polyline) -> list[Polyline]:
    """Maximal connected pieces of ``line`` inside ``poly``, in line order.

    Pieces along the boundary count as inside. A line that lies entirely
    inside comes back as the same object.
    """
    out = []
    for part in poly.parts:
        out.extend(_clip_one(part, line))
    return out


@dataclass(frozen=True)
class RoadFragment:
    """A piece of a road assigned to its nearest site.

    ``start`` and ``end`` are arc-length offsets along the road polyline
    passed to :func:`partition_by_nearest_site`.
    """

    link_id: Hashable
    road_index: int
    start: float
    end: float
    site_id: Hashable
    road: Polyline = field(repr=False, compare=False)

    @property
    def length(self) -> float:
        return self.end - self.start

    @cached_property
    def geometry(self) -> Polyline:
        if self.start == 0.0 and self.end == self.road.length:
            return self.road
        return self.road.sub(self.start, self.end)


def _site_arrays(sites) -> tuple[list, np.ndarray]:
    sites = list(sites)
    if not sites:
        raise NoSitesError("no sites in zone")
    ids = [s[0] for s in sites]
    order = sorted(range(len(sites)), key=lambda i: ids[i])
    ids = [ids[i] for i in order]
    xy = _as_points([sites[i][1] for i in order], "sites")
    return ids, xy


def _typical_spacing(tree: cKDTree, xy: np.ndarray) -> float:
    d, _ = tree.query(xy, k=2)
    nn = d[:, 1]
    nn = nn[nn > 0]
    if len(nn):
        return float(np.median(nn))
    span = np.ptp(xy, axis=0)
    return float(max(span.max(), 1.0))


def _flatten(roads: Sequence[Polyline], piece_max: float):
    """Segments of all roads, split into pieces no longer than ``piece_max``."""
    a, b, road, s0 = [], [], [], []
    for r, line in enumerate(roads):
        v = line.vertices
        a.append(v[:-1])
        b.append(v[1:])
        road.append(np.full(len(v) - 1, r))
        s0.append(line.cumulative[:-1])
    a = np.concatenate(a)
    b = np.concatenate(b)
    road = np.concatenate(road)
    s0 = np.concatenate(s0)
    seglen = np.hypot(*(b - a).T)
    nsub = np.maximum(1, np.ceil(seglen / piece_max)).astype(np.int64)
    if np.all(nsub == 1):
        return a, b, road, s0, seglen
    rep = np.repeat(np.arange(len(a)), nsub)
    first = np.repeat(np.cumsum(nsub) - nsub, nsub)
    k = np.arange(len(rep)) - first
    n = nsub[rep].astype(np.float64)
    f0, f1 = k / n, (k + 1) / n
    d = b[rep] - a[rep]
    pa = a[rep] + f0[:, None] * d
    pb = np.where((k + 1 == nsub[rep])[:, None], b[rep], a[rep] + f1[:, None] * d)
    ps0 = s0[rep] + f0 * seglen[rep]
    plen = np.where(k + 1 == nsub[rep], seglen[rep] - f0 * seglen[rep], (f1 - f0) * seglen[rep])
    return pa, pb, road[rep], ps0, plen


def _envelope_walk(piece: np.ndarray, u: np.ndarray, c: np.ndarray, plen: np.ndarray):
    """Lower envelope of the lines ``c - 2*u*t`` on ``[0, plen]`` for many pieces.

    ``piece`` groups the candidate rows (sorted, every piece non-empty).
    All pieces advance one breakpoint per round. Every switch moves to a
    strictly larger ``u``, so a piece needs at most as many rounds as it
    has candidates. Returns flat ``(piece, t0, t1, row)`` arrays.
    """
    npieces = len(plen)
    # start: smallest c, then largest u (lowest just after 0), then first row
    order = np.lexsort((np.arange(len(piece)), -u, c, piece))
    first = np.ones(len(order), dtype=bool)
    first[1:] = piece[order[1:]] != piece[order[:-1]]
    cur = np.empty(npieces, dtype=np.int64)
    cur[piece[order[first]]] = order[first]
    t = np.zeros(npieces)

    rec_p, rec_t0, rec_t1, rec_row = [], [], [], []
    active = np.arange(npieces)
    rows = np.arange(len(piece))
    while len(active):
        rp = piece[rows]
        cr = cur[rp]
        du = u[rows] - u[cr]
        ok = du > 0.0
        tj = np.full(len(rows), np.inf)
        with np.errstate(over="ignore"):  # near-parallel lines never cross: inf
            tj[ok] = (c[rows[ok]] - c[cr[ok]]) / (2.0 * du[ok])
        tj = np.maximum(tj, t[rp])
        # per-piece minimum and the first row attaining it
        bounds = np.flatnonzero(np.concatenate([[True], rp[1:] != rp[:-1]]))
        tmin = np.minimum.reduceat(tj, bounds)
        hit = tj == np.repeat(tmin, np.diff(np.append(bounds, len(rows))))
        hit_idx = np.flatnonzero(hit)
        firsthit = hit_idx[np.concatenate([[True], rp[hit_idx[1:]] != rp[hit_idx[:-1]]])]
        nxt = rows[firsthit]

        pid = rp[bounds]
        done = tmin >= plen[pid]
        moving = ~done & (tmin > t[pid])
        for mask, t1 in ((done, plen[pid]), (moving, tmin)):
            sel = pid[mask]
            rec_p.append(sel)
            rec_t0.append(t[sel])
            rec_t1.append(t1[mask])
            rec_row.append(cur[sel])
        live = pid[~done]
        t[live] = tmin[~done]
        cur[live] = nxt[~done]
        keep = ~done[np.searchsorted(pid, rp)]
        rows = rows[keep]
        active = live
    p = np.concatenate(rec_p)
    t0 = np.concatenate(rec_t0)
    t1 = np.concatenate(rec_t1)
    r = np.concatenate(rec_row)
    o = np.lexsort((t0, p))
    return p[o], t0[o], t1[o], r[o]


def partition_intervals(roads: Sequence[Polyline], sites) -> list[tuple[int, float, float, int]]:
    """Core of :func:`partition_by_nearest_site` without fragment objects.

    Returns ``(road_index, start, end, site_index)`` tuples, where
    ``site_index`` points into the id-sorted site list. Consecutive pieces
    with the same site are merged.
    """
    ids, xy = _site_arrays(sites)
    roads = list(roads)
    if not roads:
        return []
    if len(ids) == 1:
        return [(r, 0.0, line.length, 0) for r, line in enumerate(roads)]

    tree = cKDTree(xy)
    # road length per site keeps the piece count bounded when sites cluster
    per_site = total_length(roads) / len(ids)
    piece_max = 4.0 * max(_typical_spacing(tree, xy), per_site)
    pa, pb, road, ps0, plen = _flatten(roads, piece_max)
    ra, _ = tree.query(pa)
    rb, _ = tree.query(pb)
    mid = 0.5 * (pa + pb)
    # any site nearest to a point of the piece lies within this radius of its midpoint
    radius = plen + 0.5 * (ra + rb) + 1e-9 * (1.0 + np.abs(mid).max())
    cands = tree.query_ball_point(mid, radius, return_sorted=True)
    counts = np.fromiter((len(cl) for cl in cands), dtype=np.int64, count=len(cands))
    site = np.fromiter((j for cl in cands for j in cl), dtype=np.int64, count=int(counts.sum()))
    piece = np.repeat(np.arange(len(pa)), counts)

    d = (pb - pa) / plen[:, None]
    rel = xy[site] - pa[piece]
    u = np.einsum("ij,ij->i", rel, d[piece])
    c = np.einsum("ij,ij->i", rel, rel)
    p, t0, t1, row = _envelope_walk(piece, u, c, plen)

    r = road[p]
    s = site[row]
    lo = ps0[p] + t0
    hi = ps0[p] + t1
    newgrp = np.ones(len(p), dtype=bool)
    newgrp[1:] = (r[1:] != r[:-1]) | (s[1:] != s[:-1])
    starts = np.flatnonzero(newgrp)
    ends = np.append(starts[1:], len(p)) - 1
    lengths = np.array([line.length for line in roads])
    r, s = r[starts], s[starts]
    lo = lo[starts]
    hi = np.minimum(hi[ends], lengths[r])
    keep = hi - lo >= MIN_PIECE_LENGTH
    return list(zip(r[keep].tolist(), lo[keep].tolist(), hi[keep].tolist(), s[keep].tolist()))


def partition_by_nearest_site(roads: Sequence[Polyline], sites: Iterable[tuple[Hashable, object]]) -> list[RoadFragment]:
    """Split ``roads`` into fragments, each owned by its nearest site.

    Parameters
    ----------
    roads : sequence of Polyline
        Road geometry, normally already clipped to a zone.
    sites : iterable of (id, point)
        Participating sites. Exactly equidistant points go to the smaller id.

    Returns
    -------
    list of RoadFragment
        Ordered by road, then by position along the road.
    """
    roads = list(roads)
    ids, _ = _site_arrays(sites)
    frags = []
    for r, s0, s1, j in partition_intervals(roads, sites):
        line = roads[r]
        link = line.link_id if line.link_id is not None else r
        frags.append(RoadFragment(link, r, s0, s1, ids[j], line))
    return frags


def assigned_lengths(fragments: Iterable[RoadFragment]) -> dict:
    """Total fragment length per site id."""
    out: dict = {}
    for f in fragments:
        out[f.site_id] = out.get(f.site_id, 0.0) + f.length
    return out


def partition_oracle(roads: Sequence[Polyline], sites, step: float) -> dict:
    """Per-site road length by dense sampling.

    Each segment is cut into ``ceil(length / step)`` equal sub-intervals and
    every sub-interval goes wholly to the site nearest its midpoint. Used
    to cross-check :func:`partition_by_nearest_site`; sites that win no
    sample are absent from the result.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    ids, xy = _site_arrays(sites)
    tree = cKDTree(xy)
    totals = np.zeros(len(ids))
    for line in roads:
        v = line.vertices
        for i, seg in enumerate(line.segment_lengths):
            n = max(1, math.ceil(seg / step))
            w = seg / n
            for lo in range(0, n, _CHUNK):
                hi = min(n, lo + _CHUNK)
                f = (np.arange(lo, hi, dtype=np.float64) + 0.5) / n
                pts = v[i] + f[:, None] * (v[i + 1] - v[i])
                _, nearest = tree.query(pts)
                totals += np.bincount(nearest, minlength=len(ids)) * w
    return {sid: float(t) for sid, t in zip(ids, totals) if t > 0}


def total_length(lines: Iterable[Polyline]) -> float:
    return float(sum(line.length for line in lines))
