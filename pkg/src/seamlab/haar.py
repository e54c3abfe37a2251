"""Orthonormal 2D Haar multiresolution with exact reconstruction.

Filters are scaled by 1/sqrt(2) so the transform is orthonormal: energy is
preserved across the pyramid and the inverse is exact up to float rounding.
Works on H x W or H x W x C arrays; both dimensions must be divisible by
2**levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class HaarPyramid:
    """``details[k] = (lh, hl, hh)`` at level k, finest first; ``approx`` is the
    coarsest low-pass band."""

    approx: np.ndarray
    details: tuple


def _analyze(band: np.ndarray):
    lo = (band[:, 0::2] + band[:, 1::2]) / _SQRT2
    hi = (band[:, 0::2] - band[:, 1::2]) / _SQRT2
    ll = (lo[0::2] + lo[1::2]) / _SQRT2
    lh = (lo[0::2] - lo[1::2]) / _SQRT2
    hl = (hi[0::2] + hi[1::2]) / _SQRT2
    hh = (hi[0::2] - hi[1::2]) / _SQRT2
    return ll, lh, hl, hh


def _merge_rows(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    out = np.empty((lo.shape[0] * 2,) + lo.shape[1:], dtype=float)
    out[0::2] = (lo + hi) / _SQRT2
    out[1::2] = (lo - hi) / _SQRT2
    return out


def _merge_cols(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    out = np.empty((lo.shape[0], lo.shape[1] * 2) + lo.shape[2:], dtype=float)
    out[:, 0::2] = (lo + hi) / _SQRT2
    out[:, 1::2] = (lo - hi) / _SQRT2
    return out


def haar_forward(img: np.ndarray, levels: int) -> HaarPyramid:
    """Decompose into ``levels`` scales of (lh, hl, hh) details plus one approximation."""
    if levels < 1:
        raise ConfigError(f"levels must be >= 1, got {levels}")
    if img.ndim not in (2, 3):
        raise ShapeError(f"expected a 2-d or 3-d array, got shape {img.shape}")
    h, w = img.shape[:2]
    if h % (1 << levels) or w % (1 << levels):
        raise ShapeError(
            f"dimensions {h} x {w} not divisible by 2**{levels}"
        )
    band = np.asarray(img, dtype=float)
    details = []
    for _ in range(levels):
        band, lh, hl, hh = _analyze(band)
        details.append((lh, hl, hh))
    return HaarPyramid(approx=band, details=tuple(details))


def haar_inverse(pyramid: HaarPyramid) -> np.ndarray:
    """Exact inverse of :func:`haar_forward`."""
    band = pyramid.approx
    for lh, hl, hh in reversed(pyramid.details):
        lo = _merge_rows(band, lh)
        hi = _merge_rows(hl, hh)
        band = _merge_cols(lo, hi)
    return band


def haar_weighted_l1(
    x_pred: np.ndarray,
    x_gt: np.ndarray,
    low_weight: float,
    high_weight: float,
    levels: int,
) -> float:
    """Band-reweighted coefficient L1 between the two pyramids.

    Approximation coefficients are weighted by ``low_weight``, every detail
    coefficient by ``high_weight``; the sum is normalized by the total
    coefficient count, so equal weights reduce to the plain coefficient-domain
    mean absolute difference.
    """
    if not (low_weight >= high_weight >= 0):
        raise ConfigError(
            f"need low_weight >= high_weight >= 0, got {low_weight}, {high_weight}"
        )
    if x_pred.shape != x_gt.shape:
        raise ShapeError(f"shapes differ: {x_pred.shape} vs {x_gt.shape}")
    pa = haar_forward(x_pred, levels)
    pb = haar_forward(x_gt, levels)
    total = low_weight * float(np.sum(np.abs(pa.approx - pb.approx)))
    count = pa.approx.size
    for bands_a, bands_b in zip(pa.details, pb.details):
        for da, db in zip(bands_a, bands_b):
            total += high_weight * float(np.sum(np.abs(da - db)))
            count += da.size
    return total / count
