import numpy as np
import pytest

from seamlab import (
    JitterParams,
    SimConfig,
    boundary_mix,
    codec_stand_in,
    color_shift_blobs,
    color_shift_linear_gradient,
    color_shift_uniform,
    content_discontinuity,
    dilate,
    jpeg_simulate,
    make_rng,
    simulate,
)
from seamlab.errors import ConfigError, ShapeError
from seamlab.synth import synthetic_photo

IDENTITY_JITTER = JitterParams(
    brightness=(1, 1), contrast=(1, 1), saturation=(1, 1), hue_degrees=(0, 0)
)
BRIGHT_12 = JitterParams(
    brightness=(1.2, 1.2), contrast=(1, 1), saturation=(1, 1), hue_degrees=(0, 0)
)


def gray(h=32, w=32, value=0.5):
    return np.full((h, w, 3), value)


class TestLinearGradient:
    def test_identity_jitter_noop(self, photo, block_mask, rng):
        out = color_shift_linear_gradient(photo, block_mask, IDENTITY_JITTER, rng)
        assert np.allclose(out, photo, atol=1e-12)

    def test_x_direction_ramp(self, rng):
        img = gray(16, 16)
        mask = np.ones((16, 16))
        out = color_shift_linear_gradient(img, mask, BRIGHT_12, rng, direction=(1.0, 0.0))
        assert np.allclose(out[:, 0], 0.5)
        assert np.allclose(out[:, -1], 0.6)
        expected = 0.5 + 0.1 * np.linspace(0, 1, 16)
        assert np.allclose(out[5, :, 0], expected, atol=1e-12)

    def test_zero_mask_noop(self, photo, rng):
        out = color_shift_linear_gradient(photo, np.zeros((96, 96)), JitterParams(), rng)
        assert np.array_equal(out, photo)


class TestBlobs:
    def test_zero_radius_blobs_noop(self, rng):
        img = gray()
        out = color_shift_blobs(
            img, np.ones((32, 32)), BRIGHT_12, rng, blobs=[(16, 16, 0.0, 0.0, 0.0)]
        )
        assert np.allclose(out, img, atol=1e-12)

    def test_centered_ellipse_profile(self, rng):
        img = gray()
        blob = (16.0, 16.0, 8.0, 12.0, 0.0)
        out = color_shift_blobs(img, np.ones((32, 32)), BRIGHT_12, rng, blobs=[blob])
        # Radial falloff oracle: alpha = 1 at the center, 0 outside the ellipse.
        assert np.allclose(out[16, 16], 0.6, atol=1e-12)
        assert np.allclose(out[16, 29], 0.5, atol=1e-12)  # outside along x: |29-16| > 12
        assert np.allclose(out[2, 16], 0.5, atol=1e-12)  # outside along y
        mid = out[16, 22, 0]  # halfway along x: rho = 0.5, alpha = 0.5
        assert mid == pytest.approx(0.5 + 0.1 * 0.5, abs=1e-12)

    def test_overlap_is_pointwise_max(self, rng):
        img = gray()
        b1 = (16.0, 12.0, 6.0, 6.0, 0.0)
        b2 = (16.0, 20.0, 6.0, 6.0, 0.0)
        merged = color_shift_blobs(img, np.ones((32, 32)), BRIGHT_12, rng, blobs=[b1, b2])
        alpha_merged = (merged[..., 0] - 0.5) / 0.1
        single = [
            color_shift_blobs(img, np.ones((32, 32)), BRIGHT_12, make_rng(0), blobs=[b])
            for b in (b1, b2)
        ]
        alphas = [(s[..., 0] - 0.5) / 0.1 for s in single]
        assert np.allclose(alpha_merged, np.maximum(*alphas), atol=1e-9)


class TestUniform:
    def test_alpha_zero_noop(self, photo, block_mask, rng):
        out = color_shift_uniform(photo, block_mask, JitterParams(), rng, alpha=0.0)
        assert np.array_equal(out, photo)

    def test_alpha_one_full_jitter(self, rng):
        img = gray()
        mask = np.ones((32, 32))
        out = color_shift_uniform(img, mask, BRIGHT_12, rng, alpha=1.0)
        assert np.allclose(out, 0.6, atol=1e-12)

    def test_half_blend_arithmetic(self, rng):
        img = gray()
        mask = np.ones((32, 32))
        out = color_shift_uniform(img, mask, BRIGHT_12, rng, alpha=0.5)
        assert np.allclose(out, 0.55, atol=1e-12)


class TestCodecStandIn:
    def test_strength_zero_matches_q90_bound(self):
        img = synthetic_photo(64, 64, make_rng(2))
        out = codec_stand_in(img, 0.0)
        assert np.array_equal(out, jpeg_simulate(img, 90))

    def test_external_passthrough(self, photo):
        external = np.clip(photo * 0.9, 0, 1)
        out = codec_stand_in(photo, 0.5, external=external)
        assert np.array_equal(out, external)
        with pytest.raises(ShapeError):
            codec_stand_in(photo, 0.5, external=external[:10])

    def test_strength_monotone(self):
        img = synthetic_photo(64, 64, make_rng(3))
        errs = [float(np.abs(codec_stand_in(img, s) - img).mean()) for s in (0.0, 0.5, 1.0)]
        assert errs[0] <= errs[1] <= errs[2]

    def test_strength_range(self, photo):
        with pytest.raises(ConfigError):
            codec_stand_in(photo, 1.2)


class TestContentDiscontinuity:
    def test_trivial_masks_unchanged(self, photo):
        assert np.array_equal(content_discontinuity(photo, np.zeros((96, 96)), 3), photo)
        assert np.array_equal(content_discontinuity(photo, np.ones((96, 96)), 3), photo)

    def test_constant_image_unchanged(self):
        img = gray(48, 48, 0.3)
        mask = np.zeros((48, 48))
        mask[12:36, 12:36] = 1.0
        out = content_discontinuity(img, mask, 3)
        assert np.abs(out - img).max() <= 1e-4

    def test_linear_ramp_unchanged(self):
        ramp = np.tile(np.linspace(0.2, 0.8, 48)[None, :, None], (48, 1, 3))
        mask = np.zeros((48, 48))
        mask[12:36, 12:36] = 1.0
        out = content_discontinuity(ramp, mask, 3)
        assert np.abs(out - ramp).max() <= 1e-3

    def test_perturbs_only_inside_mask(self):
        img = synthetic_photo(48, 48, make_rng(4))
        mask = np.zeros((48, 48))
        mask[12:36, 12:36] = 1.0
        out = content_discontinuity(img, mask, 3)
        outside = mask < 0.5
        assert np.array_equal(out[outside], img[outside])
        assert np.abs(out - img).max() > 1e-4  # textured content is not harmonic


class TestBoundaryMix:
    def test_identity_when_ranges_pinned_to_zero(self, block_mask, rng):
        out = boundary_mix(block_mask, rng, radius_range=(0, 0), blur_range=(0.0, 0.0))
        assert np.array_equal(out, block_mask)

    def test_dilation_grows_support(self, block_mask):
        # Seed chosen so the morphology draw is a dilation.
        for seed in range(10):
            rng = make_rng(seed)
            out = boundary_mix(block_mask, rng, radius_range=(2, 2), blur_range=(0.0, 0.0))
            if out.sum() > block_mask.sum():
                assert np.all(out >= block_mask)
                return
        pytest.fail("no dilation draw in 10 seeds")

    def test_blur_makes_soft_values(self, block_mask, rng):
        out = boundary_mix(block_mask, rng, radius_range=(1, 1), blur_range=(2.0, 2.0))
        assert ((out > 0) & (out < 1)).any()
        assert out.min() >= 0 and out.max() <= 1

    def test_erosion_never_empties_mask(self):
        tiny = np.zeros((32, 32))
        tiny[15:17, 15:17] = 1.0
        for seed in range(12):
            out = boundary_mix(tiny, make_rng(seed), radius_range=(5, 5), blur_range=(0.0, 0.0))
            assert out.any()


class TestSimulate:
    def make_inputs(self, seed=0, size=64):
        img = synthetic_photo(size, size, make_rng(100, seed))
        mask = np.zeros((size, size))
        mask[size // 4 : 3 * size // 4, size // 4 : 3 * size // 4] = 1.0
        return img, mask

    def test_empty_pipeline(self):
        img, mask = self.make_inputs()
        cfg = SimConfig(
            content_discontinuity=0,
            background_color_aug=0,
            foreground_color_aug=0,
            boundary_mixing=0,
            noise_jpeg_blur=0,
            codec_artifacts=0,
        )
        pair = simulate(img, mask, cfg, make_rng(1))
        assert pair.applied == []
        assert np.array_equal(pair.degraded, pair.target)
        assert np.array_equal(pair.target, img)
        assert np.array_equal(pair.mask, mask)

    def test_deterministic(self):
        img, mask = self.make_inputs()
        a = simulate(img, mask, SimConfig(), make_rng(7, 3))
        b = simulate(img, mask, SimConfig(), make_rng(7, 3))
        assert np.array_equal(a.degraded, b.degraded)
        assert np.array_equal(a.target, b.target)
        assert np.array_equal(a.mask, b.mask)
        assert a.applied == b.applied and a.params == b.params

    def test_background_guard(self):
        cfg = SimConfig()
        for seed in range(8):
            img, mask = self.make_inputs(seed)
            pair = simulate(img, mask, cfg, make_rng(200, seed))
            outside = dilate(mask, cfg.guard_radius) == 0
            assert np.array_equal(pair.degraded[outside], pair.target[outside])

    def test_tag_iff_family_fired(self):
        # A family at probability 0 must behave exactly as a false gate draw:
        # same tags for the others and identical outputs whenever the family
        # did not fire in the full config either.
        img, mask = self.make_inputs(3)
        full = SimConfig()
        zeroed = SimConfig(codec_artifacts=0.0)
        for seed in range(12):
            a = simulate(img, mask, full, make_rng(300, seed))
            b = simulate(img, mask, zeroed, make_rng(300, seed))
            assert "codec_artifacts" not in b.applied
            if "codec_artifacts" not in a.applied:
                assert a.applied == b.applied
                assert np.array_equal(a.degraded, b.degraded)

    def test_probability_one_always_tags(self):
        img, mask = self.make_inputs(4)
        cfg = SimConfig(
            content_discontinuity=1.0,
            background_color_aug=1.0,
            foreground_color_aug=1.0,
            boundary_mixing=1.0,
            noise_jpeg_blur=1.0,
            codec_artifacts=1.0,
        )
        pair = simulate(img, mask, cfg, make_rng(5))
        assert set(pair.applied) == {
            "content_discontinuity",
            "background_color_aug",
            "foreground_color_aug",
            "boundary_mixing",
            "noise_jpeg_blur",
            "codec_artifacts",
        }
        assert any(pair.params["sub_ops"].values())

    def test_radius_zero_dilation_equivalent_mask(self):
        img, mask = self.make_inputs(5)
        a = simulate(img, mask, SimConfig(), make_rng(9, 1))
        b = simulate(img, dilate(mask, 0), SimConfig(), make_rng(9, 1))
        assert np.array_equal(a.degraded, b.degraded)

    def test_trivial_mask_rejected(self):
        img, _ = self.make_inputs()
        with pytest.raises(ValueError):
            simulate(img, np.zeros((64, 64)), SimConfig(), make_rng(0))
        with pytest.raises(ValueError):
            simulate(img, np.ones((64, 64)), SimConfig(), make_rng(0))

    def test_emitted_mask_composites_pair(self):
        img, mask = self.make_inputs(6)
        pair = simulate(img, mask, SimConfig(), make_rng(11))
        zero = pair.mask == 0
        assert np.array_equal(pair.degraded[zero], pair.target[zero])
        assert pair.mask.min() >= 0 and pair.mask.max() <= 1


class TestSimConfig:
    def test_default_probabilities(self):
        cfg = SimConfig()
        assert cfg.content_discontinuity == 0.5
        assert cfg.background_color_aug == 0.8
        assert cfg.foreground_color_aug == 0.8
        assert cfg.boundary_mixing == 1.0
        assert cfg.noise_jpeg_blur == 0.5
        assert cfg.codec_artifacts == 0.5

    def test_json_roundtrip(self):
        cfg = SimConfig(noise_jpeg_blur=0.25, jitter=JitterParams(brightness=(0.9, 1.1)))
        back = SimConfig.from_json(cfg.to_json())
        assert back == cfg

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError):
            SimConfig.from_json('{"bogus": 1}')

    def test_probability_validation(self):
        with pytest.raises(ConfigError):
            SimConfig(boundary_mixing=1.5)
        with pytest.raises(ConfigError):
            SimConfig(jpeg_quality=(0, 90))
