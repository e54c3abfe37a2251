"""Reference-based quality metrics and the serializable report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .imops import check_image, check_mask
from .errors import ShapeError
from .tonemap import AmplifyParams, disc_l1


def l1(a: np.ndarray, b: np.ndarray, region: np.ndarray | None = None) -> float:
    """Mean absolute difference, restricted to the region support when given."""
    check_image(a)
    check_image(b)
    if a.shape != b.shape:
        raise ShapeError(f"image shapes differ: {a.shape} vs {b.shape}")
    diff = np.abs(a - b)
    if region is None:
        return float(diff.mean())
    check_mask(region, like=a)
    support = region > 0
    if not support.any():
        raise ValueError("region support is empty")
    return float(diff[support].mean())


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB with unit peak; inf for identical inputs."""
    check_image(a)
    check_image(b)
    if a.shape != b.shape:
        raise ShapeError(f"image shapes differ: {a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return -10.0 * math.log10(mse)


@dataclass
class MetricsReport:
    l1_full: float
    l1_masked: float
    psnr: float
    disc_l1: float
    metadata: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        """JSON-safe form; infinite PSNR becomes null plus an ``identical`` flag."""
        identical = math.isinf(self.psnr)
        return {
            "schema": 1,
            "l1_full": self.l1_full,
            "l1_masked": self.l1_masked,
            "psnr": None if identical else self.psnr,
            "identical": identical,
            "disc_l1": self.disc_l1,
            "metadata": dict(self.metadata),
        }


def evaluate(
    pred: np.ndarray,
    gt: np.ndarray,
    mask: np.ndarray,
    amplify: AmplifyParams,
    rng: np.random.Generator,
    metadata: dict | None = None,
) -> MetricsReport:
    """Full-image L1, masked L1, PSNR and the tone-mapped L1 for one pair."""
    return MetricsReport(
        l1_full=l1(pred, gt),
        l1_masked=l1(pred, gt, region=mask),
        psnr=psnr(pred, gt),
        disc_l1=disc_l1(pred, gt, mask, amplify, rng),
        metadata=dict(metadata or {}),
    )
