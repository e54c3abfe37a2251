"""Pixel-level primitives: blending, compositing, jitter, blur, noise, morphology.

Images are H x W x 3 float arrays in [0, 1]; masks are H x W floats in [0, 1]
(binary where an operation requires it). Operations never mutate their inputs,
and every region-restricted operation leaves pixels with zero region weight
bit-exactly unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError, ShapeError

__all__ = [
    "JitterParams",
    "alpha_blend",
    "clamp01",
    "color_jitter",
    "dilate",
    "erode",
    "gaussian_blur",
    "gaussian_noise",
    "paste_back",
    "soften_mask",
]

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def clamp01(arr: np.ndarray) -> np.ndarray:
    return np.clip(arr, 0.0, 1.0)


def check_image(img: np.ndarray) -> None:
    if not isinstance(img, np.ndarray) or img.ndim != 3 or img.shape[2] != 3:
        raise ShapeError(f"expected an H x W x 3 image, got shape {getattr(img, 'shape', None)}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ShapeError(f"degenerate image shape {img.shape}")


def check_mask(mask: np.ndarray, like: np.ndarray | None = None) -> None:
    if not isinstance(mask, np.ndarray) or mask.ndim != 2:
        raise ShapeError(f"expected an H x W mask, got shape {getattr(mask, 'shape', None)}")
    if like is not None and mask.shape != like.shape[:2]:
        raise ShapeError(f"mask shape {mask.shape} does not match image {like.shape[:2]}")


def check_binary(mask: np.ndarray) -> None:
    if not np.all((mask == 0.0) | (mask == 1.0)):
        raise ValueError("mask must be binary (values 0 and 1 only)")


def alpha_blend(a: np.ndarray, b: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Per-pixel convex blend ``alpha * a + (1 - alpha) * b``."""
    check_image(a)
    check_image(b)
    if a.shape != b.shape:
        raise ShapeError(f"image shapes differ: {a.shape} vs {b.shape}")
    check_mask(alpha, like=a)
    w = alpha[..., None]
    return w * a + (1.0 - w) * b


def paste_back(gen: np.ndarray, ori: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Composite ``gen`` inside the binary mask onto ``ori``.

    Background pixels (mask 0) come from ``ori`` bit-exactly, foreground
    pixels from ``gen``.
    """
    check_image(gen)
    check_image(ori)
    if gen.shape != ori.shape:
        raise ShapeError(f"image shapes differ: {gen.shape} vs {ori.shape}")
    check_mask(mask, like=gen)
    check_binary(mask)
    return np.where(mask[..., None] > 0.5, gen, ori)


@dataclass(frozen=True)
class JitterParams:
    """Uniform sampling ranges (low, high) for the four color-jitter factors.

    Brightness, contrast and saturation are multiplicative factors (1 is the
    identity); hue is a rotation angle in degrees about the gray axis.
    """

    brightness: tuple[float, float] = (0.85, 1.15)
    contrast: tuple[float, float] = (0.85, 1.15)
    saturation: tuple[float, float] = (0.85, 1.15)
    hue_degrees: tuple[float, float] = (-12.0, 12.0)

    def __post_init__(self):
        for name in ("brightness", "contrast", "saturation", "hue_degrees"):
            lo, hi = getattr(self, name)
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
                raise ConfigError(f"empty {name} range: [{lo}, {hi}]")


def _hue_rotation_matrix(theta: float) -> np.ndarray:
    # Rotation about the gray axis (1,1,1)/sqrt(3); theta = 0 is the identity.
    c = np.cos(theta)
    s = np.sin(theta)
    k = (1.0 - c) / 3.0
    t = s / np.sqrt(3.0)
    return np.array(
        [
            [c + k, k - t, k + t],
            [k + t, c + k, k - t],
            [k - t, k + t, c + k],
        ]
    )


def color_jitter(
    img: np.ndarray,
    region: np.ndarray,
    params: JitterParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Random brightness/contrast/saturation/hue change blended in by region weight.

    Factors are drawn in that fixed order; a stage whose drawn factor is the
    exact identity is skipped, so pinned ranges like ``brightness=(1, 1)``
    leave the image untouched. Pixels with region weight 0 are returned
    bit-exactly; the jittered side is clamped to [0, 1] before blending.
    """
    check_image(img)
    check_mask(region, like=img)
    gain = float(rng.uniform(*params.brightness))
    contrast = float(rng.uniform(*params.contrast))
    saturation = float(rng.uniform(*params.saturation))
    hue = float(np.deg2rad(rng.uniform(*params.hue_degrees)))

    out = img
    if gain != 1.0:
        out = out * gain
    if contrast != 1.0:
        mean = float(np.mean(out @ LUMA_WEIGHTS))
        out = (out - mean) * contrast + mean
    if saturation != 1.0:
        luma = (out @ LUMA_WEIGHTS)[..., None]
        out = luma + (out - luma) * saturation
    if hue != 0.0:
        out = out @ _hue_rotation_matrix(hue).T
    if out is img:
        return img.copy()
    out = clamp01(out)
    w = region[..., None]
    return np.where(w > 0.0, w * out + (1.0 - w) * img, img)


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = int(np.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=float)
    kernel = np.exp(-0.5 * (x / sigma) ** 2)
    return kernel / kernel.sum()


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel truncated at radius ceil(3*sigma).

    Reflect padding at the borders; the renormalized kernel preserves the
    mean of constant regions. Accepts H x W or H x W x C arrays; sigma = 0 is
    the identity.
    """
    if img.ndim not in (2, 3):
        raise ShapeError(f"expected a 2-d or 3-d array, got shape {img.shape}")
    if sigma < 0:
        raise ConfigError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return img.copy()
    kernel = _gaussian_kernel(sigma)
    out = ndimage.correlate1d(img.astype(float), kernel, axis=0, mode="reflect")
    return ndimage.correlate1d(out, kernel, axis=1, mode="reflect")


def gaussian_noise(
    img: np.ndarray,
    sigma: float,
    region: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Additive i.i.d. Gaussian noise scaled by the region weight, then clamped.

    The noise field is drawn for the full image regardless of the region, so
    the generator state never depends on the mask contents.
    """
    check_image(img)
    check_mask(region, like=img)
    if sigma < 0:
        raise ConfigError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return img.copy()
    noise = rng.normal(0.0, sigma, size=img.shape)
    w = region[..., None]
    return np.where(w > 0.0, clamp01(img + w * noise), img)


def _disk(radius: float) -> np.ndarray:
    r = int(np.ceil(radius))
    y, x = np.ogrid[-r : r + 1, -r : r + 1]
    return (x * x + y * y) <= radius * radius + 1e-9


def dilate(mask: np.ndarray, radius: float) -> np.ndarray:
    """Binary dilation with a Euclidean-disk structuring element."""
    check_mask(mask)
    check_binary(mask)
    if radius < 0:
        raise ConfigError(f"radius must be >= 0, got {radius}")
    if radius == 0:
        return mask.copy()
    out = ndimage.binary_dilation(mask > 0.5, structure=_disk(radius), border_value=0)
    return out.astype(float)


def erode(mask: np.ndarray, radius: float) -> np.ndarray:
    """Binary erosion with a Euclidean-disk structuring element.

    The border is treated as foreground, which keeps the duality
    ``erode(m, r) == 1 - dilate(1 - m, r)`` exact.
    """
    check_mask(mask)
    check_binary(mask)
    if radius < 0:
        raise ConfigError(f"radius must be >= 0, got {radius}")
    if radius == 0:
        return mask.copy()
    out = ndimage.binary_erosion(mask > 0.5, structure=_disk(radius), border_value=1)
    return out.astype(float)


def soften_mask(mask: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian blur of a mask; values stay inside [0, 1]."""
    check_mask(mask)
    if sigma == 0:
        return mask.copy()
    return clamp01(gaussian_blur(mask, sigma))
