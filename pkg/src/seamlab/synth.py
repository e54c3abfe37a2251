"""Deterministic synthetic test content, so no image assets need shipping."""

from __future__ import annotations

import numpy as np

from .imops import clamp01, gaussian_blur


def synthetic_photo(height: int, width: int, rng: np.random.Generator) -> np.ndarray:
    """Smooth, colorful, mildly textured image: oriented waves plus blurred noise."""
    ys = np.linspace(0.0, 1.0, height)[:, None]
    xs = np.linspace(0.0, 1.0, width)[None, :]
    img = np.empty((height, width, 3))
    base = rng.uniform(0.25, 0.75, size=3)
    for c in range(3):
        angle = float(rng.uniform(0.0, np.pi))
        freq = float(rng.uniform(1.5, 4.0))
        phase = float(rng.uniform(0.0, 2.0 * np.pi))
        wave = np.sin(2.0 * np.pi * freq * (xs * np.cos(angle) + ys * np.sin(angle)) + phase)
        img[..., c] = 0.55 * base[c] + 0.3 * (0.5 + 0.5 * wave)
    texture = gaussian_blur(rng.normal(0.0, 1.0, size=(height, width, 3)), 1.5)
    return clamp01(img + 0.06 * texture)


def stationary_photo(height: int, width: int, rng: np.random.Generator) -> np.ndarray:
    """Textured image whose pixel statistics are translation-invariant.

    High-frequency waves plus fine blurred noise: any two nearby windows
    sample the same intensity distribution, which is the regime where
    ring-based distribution matching is meaningful.
    """
    ys = np.linspace(0.0, 1.0, height)[:, None]
    xs = np.linspace(0.0, 1.0, width)[None, :]
    img = np.empty((height, width, 3))
    base = rng.uniform(0.3, 0.7, size=3)
    for c in range(3):
        angle = float(rng.uniform(0.0, np.pi))
        freq = float(rng.uniform(8.0, 14.0))
        phase = float(rng.uniform(0.0, 2.0 * np.pi))
        wave = np.sin(2.0 * np.pi * freq * (xs * np.cos(angle) + ys * np.sin(angle)) + phase)
        img[..., c] = base[c] + 0.15 * wave
    img += 0.04 * gaussian_blur(rng.normal(0.0, 1.0, size=(height, width, 3)), 1.0)
    return clamp01(img)


def flat_field(
    height: int,
    width: int,
    rng: np.random.Generator,
    texture: float = 0.005,
) -> np.ndarray:
    """Near-constant image with faint stationary texture; the pixel statistics
    are the same on either side of any mask boundary."""
    base = rng.uniform(0.25, 0.75, size=3)
    img = np.broadcast_to(base, (height, width, 3)).copy()
    img += texture * gaussian_blur(rng.normal(0.0, 1.0, size=(height, width, 3)), 1.5)
    return clamp01(img)
