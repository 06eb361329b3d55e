"""Green pixel classification and per-site Green View Index.

A site's GVI is the share of green pixels over all of its directional
images, in percent. Pixels from every image are pooled before dividing,
so a larger image weighs more than a smaller one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Collection, Hashable, Iterable, Sequence

import numpy as np

from .exceptions import ValidationError

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 20
DEFAULT_HEADINGS = tuple(range(0, 360, 60))
GREEN_MONTHS = frozenset(range(4, 11))


@dataclass(frozen=True, eq=False)
class ImageRaster:
    """An 8-bit RGB image stored as a ``(height, width, 3)`` array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValidationError("image must have shape (height, width, 3)")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValidationError("image must have at least one pixel")
        if px.dtype != np.uint8:
            if np.any((px < 0) | (px > 255)) or not np.all(px == np.round(px)):
                raise ValidationError("pixel channels must be integers in [0, 255]")
            px = px.astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def size(self) -> int:
        return self.height * self.width

    @classmethod
    def filled(cls, width: int, height: int, rgb) -> "ImageRaster":
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[...] = rgb
        return cls(px)


@dataclass(frozen=True)
class CaptureMeta:
    site_id: Hashable
    heading: float
    year: int
    month: int
    pitch: float = 0.0

    def __post_init__(self):
        if not 1 <= int(self.month) <= 12:
            raise ValidationError(f"month {self.month} outside 1..12")
        if not 0.0 <= float(self.heading) < 360.0:
            raise ValidationError(f"heading {self.heading} outside [0, 360)")


@dataclass(frozen=True)
class GviScore:
    site_id: Hashable
    value: float
    images_used: int


def green_mask(pixels: np.ndarray, threshold: int = DEFAULT_THRESHOLD) -> np.ndarray:
    """Boolean mask of green pixels for an ``(..., 3)`` array of RGB values.

    A pixel is green when its green channel is the strict maximum and the
    excess green index ``2G - R - B`` reaches ``threshold``.
    """
    px = np.asarray(pixels, dtype=np.int32)
    r, g, b = px[..., 0], px[..., 1], px[..., 2]
    return (g > r) & (g > b) & (2 * g - r - b >= threshold)


def classify_green(r: int, g: int, b: int, threshold: int = DEFAULT_THRESHOLD) -> bool:
    for ch in (r, g, b):
        if not 0 <= ch <= 255:
            raise ValidationError(f"channel value {ch} outside [0, 255]")
    return bool(green_mask(np.array([r, g, b]), threshold))


def green_view(images: Sequence[ImageRaster], threshold: int = DEFAULT_THRESHOLD,
               expected: int = len(DEFAULT_HEADINGS)) -> float:
    """GVI of one site in percent.

    Fewer than ``expected`` images is allowed but logged.
    """
    images = list(images)
    if not images:
        raise ValidationError("no images for site")
    if len(images) < expected:
        log.warning("site has %d of %d expected images", len(images), expected)
    green = sum(int(np.count_nonzero(green_mask(im.pixels, threshold))) for im in images)
    total = sum(im.size for im in images)
    return 100.0 * green / total


def filter_captures(metas: Iterable[CaptureMeta], green_months: Collection[int] = GREEN_MONTHS,
                    preferred_year: int | None = None) -> list[CaptureMeta]:
    """Keep captures taken in a green month, preferring ``preferred_year``.

    If any retained capture is from ``preferred_year`` only those are kept;
    otherwise every green-month capture is kept. The result is sorted by
    ``(site_id, heading)``.
    """
    if not green_months:
        raise ValidationError("green months must not be empty")
    months = set(green_months)
    kept = [m for m in metas if m.month in months]
    if preferred_year is not None and any(m.year == preferred_year for m in kept):
        kept = [m for m in kept if m.year == preferred_year]
    return sorted(kept, key=lambda m: (m.site_id, m.heading))
