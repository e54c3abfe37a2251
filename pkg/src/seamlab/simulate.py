"""Local-editing artifact synthesis: paired degraded/target images.

Each artifact family fires independently with its configured probability.
Context-level degradations (background color shift, JPEG requantization) also
hit the target so it stays self-consistent; edit-level degradations
(foreground color shift, blur, noise, codec stand-in, band discontinuity)
hit only the degraded image. A final recomposite through the (possibly
dilated/eroded and blurred) mask guarantees that degraded and target agree
bit-exactly outside a guard dilation of the original mask.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .blending import SolverParams, harmonic_fill
from .errors import ConfigError, ShapeError
from .imops import (
    JitterParams,
    alpha_blend,
    check_binary,
    check_image,
    check_mask,
    clamp01,
    color_jitter,
    dilate,
    erode,
    gaussian_blur,
    gaussian_noise,
    soften_mask,
)
from .jpeg import jpeg_simulate

COLOR_SCHEMES = ("gradient", "blobs", "uniform")


@dataclass(frozen=True)
class SimConfig:
    """Artifact-family probabilities and parameter ranges.

    The six family probabilities default to the production pipeline values;
    when the noise/JPEG/blur family fires, each of its three sub-ops runs with
    ``sub_op_probability``, redrawn until at least one sub-op is active so the
    family tag never describes a dead stage. All parameter ranges are
    (low, high) and sampled uniformly.
    """

    content_discontinuity: float = 0.5
    background_color_aug: float = 0.8
    foreground_color_aug: float = 0.8
    boundary_mixing: float = 1.0
    noise_jpeg_blur: float = 0.5
    codec_artifacts: float = 0.5
    sub_op_probability: float = 0.5
    jitter: JitterParams = field(default_factory=JitterParams)
    uniform_alpha: float = 0.75
    blob_count: tuple[int, int] = (1, 4)
    blob_axis_frac: tuple[float, float] = (0.1, 0.35)
    jpeg_quality: tuple[int, int] = (30, 90)
    blur_sigma: tuple[float, float] = (0.5, 2.0)
    noise_sigma: tuple[float, float] = (0.005, 0.03)
    band_width: tuple[int, int] = (2, 6)
    morph_radius: tuple[int, int] = (1, 8)
    mask_blur_sigma: tuple[float, float] = (0.0, 4.0)

    def __post_init__(self):
        probs = (
            "content_discontinuity",
            "background_color_aug",
            "foreground_color_aug",
            "boundary_mixing",
            "noise_jpeg_blur",
            "codec_artifacts",
            "sub_op_probability",
        )
        for name in probs:
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must be a probability, got {p}")
        if not 0.0 <= self.uniform_alpha <= 1.0:
            raise ConfigError(f"uniform_alpha must be in [0, 1], got {self.uniform_alpha}")
        ranges = (
            "blob_count",
            "blob_axis_frac",
            "jpeg_quality",
            "blur_sigma",
            "noise_sigma",
            "band_width",
            "morph_radius",
            "mask_blur_sigma",
        )
        for name in ranges:
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ConfigError(f"bad {name} range: [{lo}, {hi}]")
        if self.jpeg_quality[0] < 1 or self.jpeg_quality[1] > 100:
            raise ConfigError(f"jpeg_quality must sit in [1, 100], got {self.jpeg_quality}")
        if self.band_width[0] < 1:
            raise ConfigError(f"band_width must be >= 1, got {self.band_width}")

    @property
    def guard_radius(self) -> int:
        """Dilation of the mask support outside which degraded == target.

        The mask can grow by morphological dilation and then by the blur
        kernel, whose separable square support reaches corners at Euclidean
        distance sqrt(2) * ceil(3 * sigma).
        """
        blur_reach = math.ceil(3.0 * self.mask_blur_sigma[1])
        return math.ceil(self.morph_radius[1] + math.sqrt(2.0) * blur_reach)

    def to_json(self) -> str:
        data = {"schema": 1}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, JitterParams):
                value = {
                    "brightness": list(value.brightness),
                    "contrast": list(value.contrast),
                    "saturation": list(value.saturation),
                    "hue_degrees": list(value.hue_degrees),
                }
            elif isinstance(value, tuple):
                value = list(value)
            data[f.name] = value
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        data.pop("schema", None)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        kwargs = {}
        for name, value in data.items():
            if name == "jitter":
                kwargs[name] = JitterParams(
                    brightness=tuple(value["brightness"]),
                    contrast=tuple(value["contrast"]),
                    saturation=tuple(value["saturation"]),
                    hue_degrees=tuple(value["hue_degrees"]),
                )
            elif isinstance(value, list):
                kwargs[name] = tuple(value)
            else:
                kwargs[name] = value
        return cls(**kwargs)


@dataclass
class SimPair:
    """One synthesized training pair plus the mask actually used to composite."""

    degraded: np.ndarray
    target: np.ndarray
    mask: np.ndarray
    applied: list[str]
    params: dict = field(default_factory=dict)


def _full_region(mask: np.ndarray) -> np.ndarray:
    return np.ones_like(mask)


def color_shift_linear_gradient(
    img: np.ndarray,
    mask: np.ndarray,
    jitter: JitterParams,
    rng: np.random.Generator,
    direction: tuple[float, float] | None = None,
) -> np.ndarray:
    """Blend a jittered copy in along a linear ramp, restricted to the mask.

    The ramp projects normalized pixel coordinates onto a random unit
    direction and is min-max normalized to [0, 1]; ``direction`` can be pinned
    for diagnostics.
    """
    check_image(img)
    check_mask(mask, like=img)
    if direction is None:
        theta = float(rng.uniform(0.0, 2.0 * np.pi))
        direction = (np.cos(theta), np.sin(theta))
    jittered = color_jitter(img, _full_region(mask), jitter, rng)
    h, w = mask.shape
    ys = np.linspace(0.0, 1.0, h)[:, None]
    xs = np.linspace(0.0, 1.0, w)[None, :]
    proj = direction[0] * xs + direction[1] * ys
    span = float(proj.max() - proj.min())
    ramp = (proj - proj.min()) / span if span > 0 else np.zeros_like(proj)
    return alpha_blend(jittered, img, ramp * mask)


def color_shift_blobs(
    img: np.ndarray,
    mask: np.ndarray,
    jitter: JitterParams,
    rng: np.random.Generator,
    count_range: tuple[int, int] = (1, 4),
    axis_frac: tuple[float, float] = (0.1, 0.35),
    blobs: list[tuple[float, float, float, float, float]] | None = None,
) -> np.ndarray:
    """Blend a jittered copy in under max-merged soft elliptical blobs.

    Each blob is (cy, cx, semi_y, semi_x, angle); its weight decays from 1 at
    the center to 0 at the ellipse boundary with a raised-cosine profile.
    ``blobs`` can be pinned for diagnostics, otherwise they are sampled from
    the given count and axis-fraction ranges.
    """
    check_image(img)
    check_mask(mask, like=img)
    h, w = mask.shape
    if blobs is None:
        count = int(rng.integers(count_range[0], count_range[1] + 1))
        if count < 1:
            raise ConfigError(f"blob count must be >= 1, got {count}")
        blobs = []
        for _ in range(count):
            cy = float(rng.uniform(0, h - 1))
            cx = float(rng.uniform(0, w - 1))
            semi_y = float(rng.uniform(*axis_frac)) * h
            semi_x = float(rng.uniform(*axis_frac)) * w
            angle = float(rng.uniform(0.0, np.pi))
            blobs.append((cy, cx, semi_y, semi_x, angle))
    jittered = color_jitter(img, _full_region(mask), jitter, rng)
    yy, xx = np.mgrid[0:h, 0:w]
    alpha = np.zeros((h, w))
    for cy, cx, semi_y, semi_x, angle in blobs:
        if semi_y <= 0 or semi_x <= 0:
            continue
        dy = yy - cy
        dx = xx - cx
        cos_a, sin_a = np.cos(angle), np.sin(angle)
        u = (dx * cos_a + dy * sin_a) / semi_x
        v = (-dx * sin_a + dy * cos_a) / semi_y
        rho = np.minimum(np.sqrt(u * u + v * v), 1.0)
        alpha = np.maximum(alpha, 0.5 * (1.0 + np.cos(np.pi * rho)))
    return alpha_blend(jittered, img, alpha * mask)


def color_shift_uniform(
    img: np.ndarray,
    mask: np.ndarray,
    jitter: JitterParams,
    rng: np.random.Generator,
    alpha: float = 0.75,
) -> np.ndarray:
    """Constant-ratio blend of a uniformly jittered copy, inside the mask."""
    check_image(img)
    check_mask(mask, like=img)
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"blend ratio must be in [0, 1], got {alpha}")
    jittered = color_jitter(img, _full_region(mask), jitter, rng)
    return alpha_blend(jittered, img, alpha * mask)


def codec_stand_in(
    img: np.ndarray,
    strength: float,
    external: np.ndarray | None = None,
) -> np.ndarray:
    """Latent-codec reconstruction stand-in: requantization plus smoothing.

    Strength 0 maps to JPEG quality 90 with no blur, strength 1 to quality 30
    with sigma 1.5. When a precomputed reconstruction is supplied it is
    returned verbatim after shape validation.
    """
    check_image(img)
    if external is not None:
        if external.shape != img.shape:
            raise ShapeError(
                f"external reconstruction shape {external.shape} != image {img.shape}"
            )
        return external.copy()
    if not 0.0 <= strength <= 1.0:
        raise ConfigError(f"strength must be in [0, 1], got {strength}")
    quality = int(round(90.0 + (30.0 - 90.0) * strength))
    sigma = 1.5 * strength
    out = jpeg_simulate(img, quality)
    if sigma > 0:
        out = clamp01(gaussian_blur(out, sigma))
    return out


def content_discontinuity(
    img: np.ndarray,
    mask: np.ndarray,
    band_width: int,
    solver: SolverParams | None = None,
) -> np.ndarray:
    """Re-synthesize a band straddling the mask edge by harmonic fill.

    The original pixels are composited back wherever the mask is 0, so the
    perturbation survives only inside the mask and shows up as a seam along
    the boundary. An empty band (mask all 0 or all 1) returns the input.
    """
    check_image(img)
    check_mask(mask, like=img)
    check_binary(mask)
    if band_width < 1:
        raise ConfigError(f"band_width must be >= 1, got {band_width}")
    band = (dilate(mask, band_width) > 0.5) & ~(erode(mask, band_width) > 0.5)
    if not band.any():
        return img.copy()
    filled = harmonic_fill(img, band.astype(float), solver)
    return np.where(mask[..., None] > 0.5, filled, img)


def boundary_mix(
    mask: np.ndarray,
    rng: np.random.Generator,
    radius_range: tuple[int, int] = (1, 8),
    blur_range: tuple[float, float] = (0.0, 4.0),
) -> np.ndarray:
    """Randomly dilate or erode the mask, then blur by a random sigma.

    Sigma may land on 0, leaving a hard (but offset) boundary. If erosion
    would swallow a non-empty mask entirely, dilation is used instead so the
    emitted mask keeps a foreground.
    """
    check_mask(mask)
    check_binary(mask)
    grow = bool(rng.integers(0, 2))
    radius = int(rng.integers(radius_range[0], radius_range[1] + 1))
    sigma = float(rng.uniform(*blur_range))
    morphed = dilate(mask, radius) if grow else erode(mask, radius)
    if not grow and mask.any() and not morphed.any():
        morphed = dilate(mask, radius)
    return soften_mask(morphed, sigma)


def _apply_color_scheme(
    scheme: str,
    img: np.ndarray,
    region: np.ndarray,
    cfg: SimConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    if scheme == "gradient":
        return color_shift_linear_gradient(img, region, cfg.jitter, rng)
    if scheme == "blobs":
        return color_shift_blobs(
            img, region, cfg.jitter, rng, cfg.blob_count, cfg.blob_axis_frac
        )
    return color_shift_uniform(img, region, cfg.jitter, rng, cfg.uniform_alpha)


def simulate(
    clean: np.ndarray,
    mask: np.ndarray,
    cfg: SimConfig | None = None,
    rng: np.random.Generator | None = None,
    solver: SolverParams | None = None,
) -> SimPair:
    """Synthesize one (degraded, target) pair from a clean image and binary mask.

    Stage order: shared background color shift, foreground color shift,
    noise/JPEG/blur, codec stand-in, band discontinuity, boundary mixing,
    final recomposite of the degraded foreground onto the target through the
    mixed mask. All gate decisions come from one child stream and every stage
    draws from its own, so whether one family fires never perturbs the
    randomness of another.
    """
    cfg = cfg or SimConfig()
    if rng is None:
        rng = np.random.default_rng(0)
    check_image(clean)
    check_mask(mask, like=clean)
    check_binary(mask)
    support = mask > 0.5
    if not support.any() or support.all():
        raise ValueError("mask must have pixels both inside and outside")

    streams = rng.spawn(7)
    gates = streams[0]
    fire_bg = gates.random() < cfg.background_color_aug
    fire_fg = gates.random() < cfg.foreground_color_aug
    fire_njb = (gates.random() < cfg.noise_jpeg_blur) and cfg.sub_op_probability > 0.0
    sub_noise = sub_jpeg = sub_blur = False
    if fire_njb:
        while not (sub_noise or sub_jpeg or sub_blur):
            sub_noise = gates.random() < cfg.sub_op_probability
            sub_jpeg = gates.random() < cfg.sub_op_probability
            sub_blur = gates.random() < cfg.sub_op_probability
    fire_codec = gates.random() < cfg.codec_artifacts
    fire_disc = gates.random() < cfg.content_discontinuity
    fire_mix = gates.random() < cfg.boundary_mixing

    applied: list[str] = []
    params: dict = {}
    base = np.array(clean, dtype=float)

    if fire_bg:
        applied.append("background_color_aug")
        scheme = COLOR_SCHEMES[int(streams[1].integers(0, len(COLOR_SCHEMES)))]
        params["background_scheme"] = scheme
        base = _apply_color_scheme(scheme, base, 1.0 - mask, cfg, streams[1])

    target = base
    degraded = base

    if fire_fg:
        applied.append("foreground_color_aug")
        scheme = COLOR_SCHEMES[int(streams[2].integers(0, len(COLOR_SCHEMES)))]
        params["foreground_scheme"] = scheme
        degraded = _apply_color_scheme(scheme, degraded, mask, cfg, streams[2])

    if fire_njb:
        applied.append("noise_jpeg_blur")
        params["sub_ops"] = {"noise": sub_noise, "jpeg": sub_jpeg, "blur": sub_blur}
        stage = streams[3]
        if sub_jpeg:
            quality = int(stage.integers(cfg.jpeg_quality[0], cfg.jpeg_quality[1] + 1))
            params["jpeg_quality"] = quality
            target = jpeg_simulate(target, quality)
            degraded = np.where(
                mask[..., None] > 0.5, degraded, jpeg_simulate(degraded, quality)
            )
        if sub_blur:
            sigma = float(stage.uniform(*cfg.blur_sigma))
            params["blur_sigma"] = sigma
            degraded = np.where(
                mask[..., None] > 0.5, clamp01(gaussian_blur(degraded, sigma)), degraded
            )
        if sub_noise:
            sigma = float(stage.uniform(*cfg.noise_sigma))
            params["noise_sigma"] = sigma
            degraded = gaussian_noise(degraded, sigma, mask, stage)

    if fire_codec:
        applied.append("codec_artifacts")
        strength = float(streams[4].uniform(0.0, 1.0))
        params["codec_strength"] = strength
        degraded = np.where(
            mask[..., None] > 0.5, codec_stand_in(degraded, strength), degraded
        )

    if fire_disc:
        applied.append("content_discontinuity")
        band = int(streams[5].integers(cfg.band_width[0], cfg.band_width[1] + 1))
        params["band_width"] = band
        degraded = content_discontinuity(degraded, mask, band, solver)

    if fire_mix:
        applied.append("boundary_mixing")
        mixed = boundary_mix(mask, streams[6], cfg.morph_radius, cfg.mask_blur_sigma)
    else:
        mixed = mask.astype(float).copy()

    w = mixed[..., None]
    final = w * degraded + (1.0 - w) * target
    return SimPair(degraded=final, target=target, mask=mixed, applied=applied, params=params)
