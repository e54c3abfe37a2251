"""Random free-form mask synthesis: brush strokes plus rectangles.

Masks are rasterized from random-walk polyline strokes (round joints, random
per-stroke width) merged with axis-aligned rectangles, then accepted only if
the foreground coverage lands in the configured range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from .errors import ConfigError, MaskGenError


@dataclass(frozen=True)
class MaskGenParams:
    """Stroke/rectangle counts and sizes (fractions of min(height, width))."""

    stroke_count: tuple[int, int] = (1, 4)
    vertex_count: tuple[int, int] = (4, 12)
    stroke_width_frac: tuple[float, float] = (0.03, 0.12)
    segment_length_frac: tuple[float, float] = (0.05, 0.25)
    rect_count: tuple[int, int] = (0, 2)
    rect_size_frac: tuple[float, float] = (0.1, 0.4)
    coverage: tuple[float, float] = (0.05, 0.5)
    max_retries: int = 64

    def __post_init__(self):
        ranges = (
            "stroke_count",
            "vertex_count",
            "stroke_width_frac",
            "segment_length_frac",
            "rect_count",
            "rect_size_frac",
            "coverage",
        )
        for name in ranges:
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ConfigError(f"bad {name} range: [{lo}, {hi}]")
        if self.max_retries < 1:
            raise ConfigError("max_retries must be >= 1")


def _draw_candidate(height: int, width: int, params: MaskGenParams, rng: np.random.Generator) -> np.ndarray:
    canvas = Image.new("L", (width, height), 0)
    draw = ImageDraw.Draw(canvas)
    scale = min(height, width)

    n_strokes = int(rng.integers(params.stroke_count[0], params.stroke_count[1] + 1))
    for _ in range(n_strokes):
        stroke_width = max(1, int(round(rng.uniform(*params.stroke_width_frac) * scale)))
        x = float(rng.uniform(0, width - 1))
        y = float(rng.uniform(0, height - 1))
        points = [(x, y)]
        n_vertices = int(rng.integers(params.vertex_count[0], params.vertex_count[1] + 1))
        for _ in range(n_vertices):
            angle = float(rng.uniform(0.0, 2.0 * np.pi))
            step = float(rng.uniform(*params.segment_length_frac)) * scale
            x = float(np.clip(x + step * np.cos(angle), 0, width - 1))
            y = float(np.clip(y + step * np.sin(angle), 0, height - 1))
            points.append((x, y))
        draw.line(points, fill=255, width=stroke_width, joint="curve")
        r = stroke_width / 2.0
        for px, py in (points[0], points[-1]):
            draw.ellipse([px - r, py - r, px + r, py + r], fill=255)

    n_rects = int(rng.integers(params.rect_count[0], params.rect_count[1] + 1))
    for _ in range(n_rects):
        rw = float(rng.uniform(*params.rect_size_frac)) * width
        rh = float(rng.uniform(*params.rect_size_frac)) * height
        x0 = float(rng.uniform(0, max(width - rw, 1)))
        y0 = float(rng.uniform(0, max(height - rh, 1)))
        draw.rectangle([x0, y0, x0 + rw, y0 + rh], fill=255)

    return (np.asarray(canvas, dtype=np.float64) > 127).astype(np.float64)


def generate_mask(
    height: int,
    width: int,
    params: MaskGenParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Sample a binary mask whose coverage falls inside ``params.coverage``.

    Draws are repeated up to ``params.max_retries`` times; raises
    :class:`MaskGenError` if the coverage range is never hit.
    """
    if height < 1 or width < 1:
        raise ConfigError(f"mask size must be positive, got {height} x {width}")
    lo, hi = params.coverage
    for _ in range(params.max_retries):
        mask = _draw_candidate(height, width, params, rng)
        coverage = float(mask.mean())
        if lo <= coverage <= hi:
            return mask
    raise MaskGenError(
        f"coverage in [{lo}, {hi}] not reached after {params.max_retries} draws"
    )
