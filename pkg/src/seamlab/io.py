"""PNG reading and writing for images and masks.

Images load as H x W x 3 float64 in [0, 1] (8-bit values divided by 255;
alpha channels are dropped). Masks load from 8-bit grayscale with values
>= 128 mapping to 1. Saving clamps, scales by 255 and rounds.
"""

from __future__ import annotations

import numpy as np
from PIL import Image as PILImage

from .errors import ShapeError


def load_image(path) -> np.ndarray:
    with PILImage.open(path) as im:
        rgb = im.convert("RGB")
        return np.asarray(rgb, dtype=np.float64) / 255.0


def save_image(path, img: np.ndarray) -> None:
    if img.ndim != 3 or img.shape[2] != 3:
        raise ShapeError(f"expected an H x W x 3 image, got shape {img.shape}")
    data = np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
    PILImage.fromarray(data, mode="RGB").save(path, format="PNG")


def load_mask(path) -> np.ndarray:
    with PILImage.open(path) as im:
        gray = np.asarray(im.convert("L"), dtype=np.float64)
    return (gray >= 128).astype(np.float64)


def save_mask(path, mask: np.ndarray) -> None:
    if mask.ndim != 2:
        raise ShapeError(f"expected an H x W mask, got shape {mask.shape}")
    data = np.round(np.clip(mask, 0.0, 1.0) * 255.0).astype(np.uint8)
    PILImage.fromarray(data, mode="L").save(path, format="PNG")
