"""Zonal aggregation of site GVI: road-length weighted sGVI, mean and median.

sGVI is the GVI one would expect at a point drawn uniformly along the
zone's roads. Every stretch of road inside the zone is credited to its
nearest in-zone site, and each site is weighted by the road length it
owns. Densely packed sites split a stretch between them instead of each
counting in full, which is what removes the density bias of a plain mean.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Hashable, Iterable, Sequence, TypeVar

import numpy as np

from .geometry import Polygon, Zone, partition_intervals, total_length
from .network import RoadNetwork, clip_network

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class ZoneMetrics:
    """Per-zone greenery metrics.

    ``excluded`` marks zones where sGVI is undefined (no scored site or no
    road inside); their ``sgvi`` is reported as 0.
    """

    zone_id: Hashable
    sgvi: float
    gvi_mean: float | None
    gvi_median: float | None
    site_count: int
    road_length: float
    excluded: bool
    ndvi_mean: float | None = None
    weights: dict = field(default_factory=dict, repr=False, compare=False)


def aggregate_mean(values: Iterable[float]) -> float | None:
    v = np.asarray(list(values), dtype=np.float64)
    return float(v.mean()) if len(v) else None


def aggregate_median(values: Iterable[float]) -> float | None:
    v = np.asarray(list(values), dtype=np.float64)
    return float(np.median(v)) if len(v) else None


def _site_table(sites) -> tuple[list, np.ndarray, np.ndarray]:
    ids, xy, gvi = [], [], []
    for sid, p, g in sites:
        if g is None or (isinstance(g, float) and np.isnan(g)):
            continue
        ids.append(sid)
        xy.append((float(p[0]), float(p[1])))
        gvi.append(float(g))
    return ids, np.asarray(xy, dtype=np.float64).reshape(-1, 2), np.asarray(gvi, dtype=np.float64)


def compute_sgvi(zone: Polygon | Zone, sites: Iterable[tuple], net: RoadNetwork,
                 zone_id: Hashable | None = None) -> ZoneMetrics:
    """Aggregate site scores over one zone.

    Parameters
    ----------
    zone : Polygon or Zone
    sites : iterable of (site_id, point, gvi)
        Sites with ``gvi`` of None are dropped before partitioning, so the
        road they would have owned goes to their neighbours. Sites outside
        the zone are ignored.
    net : RoadNetwork

    Returns
    -------
    ZoneMetrics
        ``ndvi_mean`` is left unset.
    """
    if zone_id is None:
        zone_id = getattr(zone, "zone_id", None)
    ids, xy, gvi = _site_table(sites)
    inside = zone.contains_points(xy) if len(ids) else np.zeros(0, dtype=bool)
    sel = np.flatnonzero(inside)
    zids = [ids[i] for i in sel]
    zxy, zg = xy[sel], gvi[sel]

    roads = clip_network(net, zone)
    length = total_length(roads)
    mean = aggregate_mean(zg)
    median = aggregate_median(zg)
    if not zids or length <= 0:
        return ZoneMetrics(zone_id, 0.0, mean, median, len(zids), length, True)

    owned = np.zeros(len(zids))
    order = sorted(range(len(zids)), key=lambda i: zids[i])
    for _, s0, s1, j in partition_intervals(roads, [(zids[i], zxy[i]) for i in order]):
        owned[order[j]] += s1 - s0
    w = owned / length
    sgvi = float(np.dot(zg, w))
    weights = {zids[i]: float(w[i]) for i in order}
    return ZoneMetrics(zone_id, sgvi, mean, median, len(zids), length, False, weights=weights)


def thread_count() -> int:
    """Worker cap from ``VERDANT_THREADS`` (default: all cores)."""
    env = os.environ.get("VERDANT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def map_ordered(fn: Callable[[T], R], items: Sequence[T], threads: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, possibly on a thread pool; order is kept."""
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def aggregate_zones(zones: Sequence[Zone], sites: Sequence[tuple], net: RoadNetwork,
                    threads: int | None = None) -> list[ZoneMetrics]:
    """:func:`compute_sgvi` for every zone, returned in zone id order."""
    sites = list(sites)
    zones = sorted(zones, key=lambda z: z.zone_id)
    return map_ordered(lambda z: compute_sgvi(z, sites, net, z.zone_id), zones, threads)


def with_ndvi(metrics: ZoneMetrics, ndvi_mean: float | None) -> ZoneMetrics:
    return replace(metrics, ndvi_mean=ndvi_mean)
