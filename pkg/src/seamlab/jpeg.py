"""Baseline JPEG round-trip simulation: 8x8 block DCT with standard quantization.

Only the lossy transform path is modeled (no entropy coding, no chroma
subsampling): RGB converts to full-range luma/chroma, each 8x8 block goes
through an orthonormal type-II DCT, coefficients are quantized with the
standard luminance/chrominance tables scaled by the conventional quality
factor, then everything is inverted. Edge blocks are padded by replication.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import dctn, idctn

from .errors import ConfigError
from .imops import check_image, clamp01

LUMA_TABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=float,
)

CHROMA_TABLE = np.array(
    [
        [17, 18, 24, 47, 99, 99, 99, 99],
        [18, 21, 26, 66, 99, 99, 99, 99],
        [24, 26, 56, 99, 99, 99, 99, 99],
        [47, 66, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
    ],
    dtype=float,
)


def scaled_table(table: np.ndarray, quality: int) -> np.ndarray:
    """Quality-scaled quantization steps: 5000/q below 50, else 200 - 2q percent,
    floored at 1."""
    if quality < 50:
        scale = 5000.0 / quality
    else:
        scale = 200.0 - 2.0 * quality
    scaled = np.floor((table * scale + 50.0) / 100.0)
    scaled[scaled < 1.0] = 1.0
    return scaled


def _codec_plane(plane: np.ndarray, qtable: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    pad_h = (-h) % 8
    pad_w = (-w) % 8
    padded = np.pad(plane, ((0, pad_h), (0, pad_w)), mode="edge")
    ph, pw = padded.shape
    blocks = padded.reshape(ph // 8, 8, pw // 8, 8).transpose(0, 2, 1, 3)
    coeffs = dctn(blocks - 128.0, type=2, norm="ortho", axes=(-2, -1))
    quantized = np.floor(coeffs / qtable + 0.5) * qtable
    recon = idctn(quantized, type=2, norm="ortho", axes=(-2, -1)) + 128.0
    out = recon.transpose(0, 2, 1, 3).reshape(ph, pw)
    return out[:h, :w]


def jpeg_simulate(img: np.ndarray, quality: int) -> np.ndarray:
    """Round-trip the image through JPEG-style quantization at ``quality`` (1..100)."""
    check_image(img)
    if not 1 <= quality <= 100:
        raise ConfigError(f"quality must be in [1, 100], got {quality}")
    x = img * 255.0
    r, g, b = x[..., 0], x[..., 1], x[..., 2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0
    cr = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0

    qy = scaled_table(LUMA_TABLE, quality)
    qc = scaled_table(CHROMA_TABLE, quality)
    y = _codec_plane(y, qy)
    cb = _codec_plane(cb, qc)
    cr = _codec_plane(cr, qc)

    out = np.empty_like(img, dtype=float)
    out[..., 0] = y + 1.402 * (cr - 128.0)
    out[..., 1] = y - 0.344136 * (cb - 128.0) - 0.714136 * (cr - 128.0)
    out[..., 2] = y + 1.772 * (cb - 128.0)
    return clamp01(out / 255.0)
