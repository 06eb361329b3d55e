"""Street-level greenery metrics.

GVI per measurement site, road-length weighted zonal aggregation (sGVI),
NDVI from satellite bands, and their comparison across zones.
"""

from .aggregation import ZoneMetrics, aggregate_mean, aggregate_median, aggregate_zones, compute_sgvi
from .exceptions import (AlignmentError, InsufficientDataError, NoSitesError, ValidationError,
                         VerdantError)
from .geometry import (Point2, Polygon, Polyline, RoadFragment, Zone, assigned_lengths, clip_polyline,
                       partition_by_nearest_site, partition_oracle, polygon_contains)
from .imagery import CaptureMeta, GviScore, ImageRaster, classify_green, filter_captures, green_view
from .network import PlacedSite, RoadNetwork, clip_network, place_sites
from .raster import RasterGrid, composite_mean, ndvi, read_asc, write_asc, zonal_mean
from .stats import DescriptiveStats, RegressionFit, correlation_matrix, describe, ols_fit, spearman

__version__ = "0.1.0"

__all__ = [
    "AlignmentError", "CaptureMeta", "DescriptiveStats", "GviScore", "ImageRaster", "InsufficientDataError",
    "NoSitesError", "PlacedSite", "Point2", "Polygon", "Polyline", "RasterGrid", "RegressionFit",
    "RoadFragment", "RoadNetwork", "ValidationError", "VerdantError", "Zone", "ZoneMetrics",
    "aggregate_mean", "aggregate_median", "aggregate_zones", "assigned_lengths", "classify_green",
    "clip_network", "clip_polyline", "composite_mean", "compute_sgvi", "correlation_matrix", "describe",
    "filter_captures", "green_view", "ndvi", "ols_fit", "partition_by_nearest_site", "partition_oracle",
    "place_sites", "polygon_contains", "read_asc", "spearman", "write_asc", "zonal_mean",
]
