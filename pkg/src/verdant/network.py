"""Road network model and placement of measurement sites along links."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

import numpy as np
from scipy.spatial import cKDTree

from .exceptions import ValidationError
from .geometry import Point2, Polygon, Polyline, Zone, clip_polyline

ENDPOINT_TOL = 1e-6
DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class Link:
    a: Hashable
    b: Hashable
    geometry: Polyline


@dataclass(frozen=True)
class PlacedSite:
    site_id: str
    position: Point2
    link_id: Hashable
    offset: float
    is_node: bool


class RoadNetwork:
    """Nodes and polyline links.

    Each link's geometry must start at node ``a`` and end at node ``b``
    (within 1e-6 m). Link geometries are re-tagged with their link id.
    """

    def __init__(self, nodes: Mapping[Hashable, tuple], links: Mapping[Hashable, tuple | Link]):
        self.nodes = {k: Point2(float(v[0]), float(v[1])) for k, v in nodes.items()}
        self.links: dict[Hashable, Link] = {}
        for lid, spec in links.items():
            a, b, geom = (spec.a, spec.b, spec.geometry) if isinstance(spec, Link) else spec
            if a not in self.nodes or b not in self.nodes:
                raise ValidationError(f"link {lid!r} references an unknown node")
            if not isinstance(geom, Polyline):
                geom = Polyline(geom, lid)
            elif geom.link_id != lid:
                geom = Polyline(geom.vertices, lid)
            for end, node in ((geom.vertices[0], a), (geom.vertices[-1], b)):
                if np.hypot(*(end - np.asarray(self.nodes[node]))) > ENDPOINT_TOL:
                    raise ValidationError(f"link {lid!r} does not end at node {node!r}")
            self.links[lid] = Link(a, b, geom)
        self._order = _sorted_ids(self.links)
        if self._order:
            self._bounds = np.array([np.concatenate([self.links[k].geometry.vertices.min(axis=0),
                                                     self.links[k].geometry.vertices.max(axis=0)])
                                     for k in self._order])
        else:
            self._bounds = np.empty((0, 4))

    def __repr__(self):
        return f"RoadNetwork({len(self.nodes)} nodes, {len(self.links)} links)"

    @classmethod
    def from_polylines(cls, lines: Iterable[Polyline]) -> "RoadNetwork":
        """Build nodes by merging link endpoints closer than 1e-6 m.

        Node ids are ``n0, n1, ...`` in lexicographic coordinate order.
        Each polyline must carry a ``link_id``.
        """
        lines = list(lines)
        if not lines:
            return cls({}, {})
        ends = np.array([[ln.vertices[0], ln.vertices[-1]] for ln in lines]).reshape(-1, 2)
        order = np.lexsort((ends[:, 1], ends[:, 0]))
        near = cKDTree(ends).query_ball_point(ends, ENDPOINT_TOL)
        label = np.full(len(ends), -1, dtype=np.int64)
        reps: list[np.ndarray] = []
        for i in order:
            if label[i] >= 0:
                continue
            for j in near[i]:
                if label[j] < 0:
                    label[j] = len(reps)
            reps.append(ends[i])
        width = len(str(max(len(reps) - 1, 0)))
        names = [f"n{k:0{width}d}" for k in range(len(reps))]
        nodes = {names[k]: tuple(reps[k]) for k in range(len(reps))}
        links = {}
        for j, ln in enumerate(lines):
            if ln.link_id is None:
                raise ValidationError(f"polyline {j} has no link_id")
            if ln.link_id in links:
                raise ValidationError(f"duplicate link_id {ln.link_id!r}")
            a, b = names[label[2 * j]], names[label[2 * j + 1]]
            v = ln.vertices.copy()
            v[0], v[-1] = reps[label[2 * j]], reps[label[2 * j + 1]]
            links[ln.link_id] = Link(a, b, Polyline(v, ln.link_id))
        return cls(nodes, links)

    @property
    def total_length(self) -> float:
        return float(sum(lk.geometry.length for lk in self.links.values()))

    def links_near(self, bounds) -> list:
        """Ids of links whose bounding box meets ``bounds``, in id order."""
        xmin, ymin, xmax, ymax = bounds
        b = self._bounds
        hit = (b[:, 2] >= xmin) & (b[:, 0] <= xmax) & (b[:, 3] >= ymin) & (b[:, 1] <= ymax)
        return [self._order[i] for i in np.flatnonzero(hit)]

    def degree(self) -> dict:
        deg = {k: 0 for k in self.nodes}
        for lk in self.links.values():
            deg[lk.a] += 1
            deg[lk.b] += 1
        return deg


def _sorted_ids(ids):
    try:
        return sorted(ids)
    except TypeError:
        return sorted(ids, key=str)


def place_sites(net: RoadNetwork, spacing: float = 100.0) -> list[PlacedSite]:
    """Sites every ``spacing`` meters along each link, plus both ends.

    Offsets run from the end whose node id sorts first (as strings), so
    flipping a link's digitised direction does not move its sites. The
    far end always gets a site, and a node shared by several links gets
    exactly one. Reported offsets are along the stored link geometry.
    """
    if not spacing > 0:
        raise ValidationError("spacing must be positive")
    placed: list[tuple] = []
    node_seen: dict = {}
    taken: dict[tuple[int, int], list[np.ndarray]] = {}

    def near_existing(p):
        kx, ky = int(np.floor(p[0] / DEDUP_TOL)), int(np.floor(p[1] / DEDUP_TOL))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for q in taken.get((kx + dx, ky + dy), ()):
                    if np.hypot(*(q - p)) <= DEDUP_TOL:
                        return True
        return False

    def take(p):
        key = (int(np.floor(p[0] / DEDUP_TOL)), int(np.floor(p[1] / DEDUP_TOL)))
        taken.setdefault(key, []).append(p)

    for lid in _sorted_ids(net.links):
        link = net.links[lid]
        geom = link.geometry
        L = geom.length
        forward = str(link.a) <= str(link.b)
        start_node, end_node = (link.a, link.b) if forward else (link.b, link.a)
        offsets = list(np.arange(0.0, L, spacing))
        if L - offsets[-1] <= DEDUP_TOL:
            offsets.pop()
        offsets.append(L)
        for k, off in enumerate(offsets):
            stored = off if forward else L - off
            node = start_node if k == 0 else end_node if k == len(offsets) - 1 else None
            if node is not None:
                if node in node_seen:
                    continue
                node_seen[node] = True
                pos = np.asarray(net.nodes[node], dtype=np.float64)
                stored = 0.0 if node == link.a else L
            else:
                pos = np.asarray(geom.point_at(stored))
            if near_existing(pos):
                continue
            take(pos)
            placed.append((pos, lid, float(stored), node is not None))
    width = max(6, len(str(len(placed))))
    return [PlacedSite(f"s{i:0{width}d}", Point2(float(p[0]), float(p[1])), lid, off, is_node)
            for i, (p, lid, off, is_node) in enumerate(placed)]


def clip_network(net: RoadNetwork, zone: Polygon | Zone) -> list[Polyline]:
    """Link geometries clipped to ``zone``, in link id order."""
    out = []
    for lid in net.links_near(zone.bounds):
        out.extend(clip_polyline(zone, net.links[lid].geometry))
    return out
