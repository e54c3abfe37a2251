import numpy as np
import pytest

from seamlab import SolverParams, harmonic_fill, make_rng, poisson_blend
from seamlab.blending import _assemble, laplacian
from seamlab.errors import ConfigError, ConvergenceError
from seamlab.synth import synthetic_photo

TIGHT = SolverParams(tolerance=1e-10)


def dense_oracle(guidance, dirichlet, inside):
    """Dense direct solve assembled from the stencil definition by loops."""
    h, w = inside.shape
    idx = {(y, x): i for i, (y, x) in enumerate(zip(*np.nonzero(inside)))}
    n = len(idx)
    mat = np.zeros((n, n))
    rhs = np.zeros(n)
    lap = laplacian(guidance) if guidance is not None else np.zeros((h, w))
    for (y, x), i in idx.items():
        rhs[i] += lap[y, x]
        for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            ny, nx = y + dy, x + dx
            if not (0 <= ny < h and 0 <= nx < w):
                continue  # mirrored border: the neighbor term vanishes
            mat[i, i] += 1.0
            if inside[ny, nx]:
                mat[i, idx[(ny, nx)]] -= 1.0
            else:
                rhs[i] += dirichlet[ny, nx]
    return np.linalg.solve(mat, rhs)


def random_region(h, w, rng, p=0.3):
    region = (rng.uniform(0, 1, (h, w)) < p).astype(float)
    region[0, :] = region[-1, :] = region[:, 0] = region[:, -1] = 0
    return region


class TestHarmonicFill:
    def test_constant_unchanged(self):
        img = np.full((24, 24, 3), 0.42)
        region = np.zeros((24, 24))
        region[6:18, 8:16] = 1.0
        assert np.abs(harmonic_fill(img, region, TIGHT) - img).max() <= 1e-4

    def test_linear_ramp_unchanged(self):
        ramp = np.tile(np.linspace(0.1, 0.9, 32)[None, :, None], (32, 1, 3))
        ramp = ramp + 0.2 * np.tile(np.linspace(0, 0.5, 32)[:, None, None], (1, 32, 3))
        ramp = ramp / ramp.max()
        region = np.zeros((32, 32))
        region[8:24, 10:20] = 1.0  # interior region: full stencils everywhere
        assert np.abs(harmonic_fill(ramp, region, TIGHT) - ramp).max() <= 1e-3

    def test_checkerboard_matches_dense_oracle(self):
        rng = make_rng(3)
        img = np.indices((16, 16)).sum(axis=0) % 2 * 0.8 + 0.1
        img = np.repeat(img[..., None], 3, axis=2)
        region = np.zeros((16, 16))
        region[4:12, 4:12] = 1.0
        out = harmonic_fill(img, region, TIGHT)
        inside = region > 0.5
        for c in range(3):
            oracle = dense_oracle(None, img[..., c], inside)
            assert np.abs(out[..., c][inside] - oracle).max() <= 1e-6

    def test_maximum_principle(self):
        for seed in range(5):
            rng = make_rng(20, seed)
            img = synthetic_photo(24, 24, rng)
            region = random_region(24, 24, rng)
            if not region.any():
                continue
            out = harmonic_fill(img, region, TIGHT)
            inside = region > 0.5
            boundary = np.zeros_like(inside)
            for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                shifted = np.roll(inside, (dy, dx), axis=(0, 1))
                boundary |= shifted
            boundary &= ~inside
            for c in range(3):
                values = out[..., c][inside]
                bvals = img[..., c][boundary]
                assert values.min() >= bvals.min() - 1e-8
                assert values.max() <= bvals.max() + 1e-8

    def test_locality(self, photo, block_mask):
        out = harmonic_fill(photo, block_mask, TIGHT)
        outside = block_mask < 0.5
        assert np.array_equal(out[outside], photo[outside])

    def test_empty_region_returns_copy(self, photo):
        out = harmonic_fill(photo, np.zeros((96, 96)))
        assert np.array_equal(out, photo)


class TestPoissonBlend:
    def test_src_equals_dst(self):
        dst = synthetic_photo(32, 32, make_rng(7))
        mask = np.zeros((32, 32))
        mask[8:24, 8:24] = 1.0
        out = poisson_blend(dst, dst, mask, TIGHT)
        assert np.abs(out - dst).max() <= 1e-4

    def test_constant_shift_removed(self):
        dst = 0.2 + 0.5 * synthetic_photo(32, 32, make_rng(8))
        src = dst + 0.07
        mask = np.zeros((32, 32))
        mask[6:26, 6:26] = 1.0
        out = poisson_blend(src, dst, mask, TIGHT)
        assert np.abs(out - dst).max() <= 1e-4

    def test_interior_ramp_matches_dense_oracle(self):
        dst = synthetic_photo(16, 16, make_rng(9))
        bump = np.zeros((16, 16, 3))
        bump[5:11, 5:11, :] = np.linspace(0, 0.2, 6)[None, :, None]
        src = dst + bump
        mask = np.zeros((16, 16))
        mask[4:12, 4:12] = 1.0
        out = poisson_blend(src, dst, mask, TIGHT)
        inside = mask > 0.5
        for c in range(3):
            oracle = dense_oracle(src[..., c], dst[..., c], inside)
            assert np.abs(out[..., c][inside] - np.clip(oracle, 0, 1)).max() <= 1e-6

    def test_residual_contract(self):
        dst = synthetic_photo(24, 24, make_rng(10))
        src = np.clip(dst + 0.1 * synthetic_photo(24, 24, make_rng(11)), 0, 1)
        mask = np.zeros((24, 24))
        mask[5:19, 7:17] = 1.0
        params = SolverParams(tolerance=1e-8)
        out = poisson_blend(src, dst, mask, params)
        inside = mask > 0.5
        mat, ids, boundary = _assemble(inside)
        for c in range(3):
            b = laplacian(src[..., c])[inside]
            for interior_ids, ny, nx in boundary:
                np.add.at(b, interior_ids, dst[ny, nx, c])
            u = out[..., c][inside]
            assert np.linalg.norm(b - mat @ u) <= 1e-8 * np.linalg.norm(b) + 1e-12

    def test_outside_bit_exact(self):
        dst = synthetic_photo(24, 24, make_rng(12))
        src = np.clip(dst + 0.05, 0, 1)
        mask = np.zeros((24, 24))
        mask[6:18, 6:18] = 1.0
        out = poisson_blend(src, dst, mask)
        assert np.array_equal(out[mask < 0.5], dst[mask < 0.5])

    def test_empty_mask_returns_dst(self):
        dst = synthetic_photo(16, 16, make_rng(13))
        out = poisson_blend(np.zeros_like(dst), dst, np.zeros((16, 16)))
        assert np.array_equal(out, dst)

    def test_full_mask_rejected(self):
        img = np.zeros((8, 8, 3))
        with pytest.raises(ValueError):
            poisson_blend(img, img, np.ones((8, 8)))

    def test_nonconvergence_raises_with_residual(self):
        dst = synthetic_photo(24, 24, make_rng(14))
        src = np.clip(dst + 0.3 * synthetic_photo(24, 24, make_rng(15)), 0, 1)
        mask = np.zeros((24, 24))
        mask[2:22, 2:22] = 1.0
        with pytest.raises(ConvergenceError) as err:
            poisson_blend(src, dst, mask, SolverParams(tolerance=1e-12, max_iterations=2))
        assert np.isfinite(err.value.residual)


class TestGaussSeidel:
    def test_matches_cg_on_tiny_system(self):
        img = synthetic_photo(12, 12, make_rng(16))
        region = np.zeros((12, 12))
        region[4:8, 4:8] = 1.0
        a = harmonic_fill(img, region, SolverParams(tolerance=1e-10, method="cg"))
        b = harmonic_fill(
            img, region, SolverParams(tolerance=1e-10, max_iterations=100_000, method="gauss-seidel")
        )
        assert np.abs(a - b).max() <= 1e-7

    def test_unknown_method_rejected(self):
        with pytest.raises(ConfigError):
            SolverParams(method="jacobi")
