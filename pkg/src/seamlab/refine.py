"""Classical ring-based refiner and inference-time pooled refinement.

The reference refiner corrects the edited region with per-channel polynomials
fitted through matched quantiles of the pixel distributions just inside and
just outside the mask boundary, feathered at the seam. Pooling evaluates a
refiner on several in-mask jitter variants of the input and keeps the output
whose input the refiner changed least.
"""

from __future__ import annotations

import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConfigError, NumericError, ShapeError
from .imops import (
    JitterParams,
    check_binary,
    check_image,
    check_mask,
    clamp01,
    color_jitter,
    dilate,
    erode,
    gaussian_noise,
    paste_back,
    soften_mask,
)
from .io import load_image, save_image, save_mask
from .tonemap import fit_polynomial

Refiner = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _default_pool_jitter() -> JitterParams:
    # Gain/contrast only: the self-change score cannot see jitter directions
    # the refiner is unable to correct (hue, saturation mix channels), and
    # exploring those directions makes pooling pick worse variants.
    return JitterParams(
        brightness=(0.95, 1.05),
        contrast=(0.95, 1.05),
        saturation=(1.0, 1.0),
        hue_degrees=(0.0, 0.0),
    )


@dataclass(frozen=True)
class PoolParams:
    """Pooled-refinement settings: variant count, jitter ranges, and whether
    variant 0 stays unjittered."""

    n: int = 8
    jitter: JitterParams = field(default_factory=_default_pool_jitter)
    include_original: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"variant count must be >= 1, got {self.n}")


def classical_refine(
    x_gen: np.ndarray,
    mask: np.ndarray,
    degree: int = 3,
    ring_width: float = 8,
    feather_sigma: float = 2.0,
    quantiles: int = 64,
) -> np.ndarray:
    """Match the edited region's intensity distribution to its surroundings.

    Per channel: take ``quantiles`` matched quantiles of the ring just inside
    the mask against the ring just outside, fit a degree-``degree`` polynomial
    through the quantile pairs (minimal-norm pseudoinverse solve), apply it to
    every in-mask pixel, feather the correction near the boundary, and paste
    the untouched background back.
    """
    check_image(x_gen)
    check_mask(mask, like=x_gen)
    check_binary(mask)
    if quantiles < degree + 1:
        raise ConfigError(f"need at least degree + 1 quantiles, got {quantiles}")
    support = mask > 0.5
    inner = support & ~(erode(mask, ring_width) > 0.5)
    outer = (dilate(mask, ring_width) > 0.5) & ~support
    if not inner.any() or not outer.any():
        raise ValueError("mask leaves an empty inner or outer ring")

    qs = np.linspace(0.0, 1.0, quantiles)
    corrected = np.empty_like(x_gen, dtype=float)
    for c in range(3):
        plane = x_gen[..., c]
        inner_q = np.quantile(plane[inner], qs)
        outer_q = np.quantile(plane[outer], qs)
        coeffs = fit_polynomial(inner_q, outer_q, degree)
        corrected[..., c] = npoly.polyval(plane - 0.5, coeffs)
    corrected = np.where(mask[..., None] > 0.5, clamp01(corrected), x_gen)

    soft = soften_mask(mask, feather_sigma)[..., None]
    blended = soft * corrected + (1.0 - soft) * x_gen
    return paste_back(blended, x_gen, mask)


def pool_refine(
    refiner: Refiner,
    x_gen: np.ndarray,
    mask: np.ndarray,
    params: PoolParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Refine N in-mask jitter variants, keep the output whose input moved least.

    Variant i is scored by the mean L1 between the variant and its refinement
    over the mask support; the winner is the smallest score, ties broken by
    the lowest index. Variant 0 is the unjittered input when
    ``params.include_original`` is set. Each variant draws its jitter from its
    own child stream, so evaluation order cannot change the result.
    """
    check_image(x_gen)
    check_mask(mask, like=x_gen)
    support = mask > 0.5
    if not support.any():
        raise ValueError("mask support is empty")
    streams = rng.spawn(params.n)
    best_score = None
    best_output = None
    for i in range(params.n):
        if i == 0 and params.include_original:
            variant = x_gen
        else:
            variant = color_jitter(x_gen, mask, params.jitter, streams[i])
        try:
            refined = refiner(variant, mask)
        except Exception as exc:
            raise NumericError(f"refiner failed on variant {i}: {exc}") from exc
        if refined.shape != x_gen.shape:
            raise ShapeError(
                f"refiner returned shape {refined.shape} for variant {i}, expected {x_gen.shape}"
            )
        score = float(np.mean(np.abs(variant - refined)[support]))
        if best_score is None or score < best_score:
            best_score = score
            best_output = refined
    return paste_back(best_output, x_gen, (mask > 0.5).astype(float))


def add_input_noise(img: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Full-frame clamped Gaussian noise, shared by training-side consumers."""
    check_image(img)
    return gaussian_noise(img, sigma, np.ones(img.shape[:2]), rng)


class SubprocessRefiner:
    """Adapter that runs an external refiner executable per call.

    ``command`` is a list of argument templates; the placeholders ``{input}``,
    ``{mask}`` and ``{output}`` are substituted with temporary PNG paths. The
    process must write the refined image to ``{output}`` and exit 0. The
    background is pasted back from the in-memory input afterwards, so the
    contract that mask-0 pixels stay untouched holds regardless of what the
    external tool writes.
    """

    def __init__(self, command: list[str]):
        if not command:
            raise ConfigError("refiner command must not be empty")
        self.command = list(command)

    def __call__(self, img: np.ndarray, mask: np.ndarray) -> np.ndarray:
        with tempfile.TemporaryDirectory(prefix="seamlab-refiner-") as tmp:
            in_path = Path(tmp) / "input.png"
            mask_path = Path(tmp) / "mask.png"
            out_path = Path(tmp) / "output.png"
            save_image(in_path, img)
            save_mask(mask_path, mask)
            argv = [
                arg.format(input=in_path, mask=mask_path, output=out_path)
                for arg in self.command
            ]
            subprocess.run(argv, check=True)
            out = load_image(out_path)
        if out.shape != img.shape:
            raise ShapeError(
                f"external refiner wrote shape {out.shape}, expected {img.shape}"
            )
        return paste_back(out, img, (mask > 0.5).astype(float))
