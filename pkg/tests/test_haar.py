import numpy as np
import pytest

from seamlab import haar_forward, haar_inverse, haar_weighted_l1, make_rng
from seamlab.errors import ConfigError, ShapeError
from seamlab.synth import synthetic_photo


def brute_pyramid_l1(a, b, low_w, high_w, levels):
    """Direct pyramid differencing oracle with the same normalization."""
    pa = haar_forward(a, levels)
    pb = haar_forward(b, levels)
    total = low_w * np.abs(pa.approx - pb.approx).sum()
    count = pa.approx.size
    for da, db in zip(pa.details, pb.details):
        for ba, bb in zip(da, db):
            total += high_w * np.abs(ba - bb).sum()
            count += ba.size
    return total / count


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_perfect_reconstruction(levels):
    img = synthetic_photo(64, 64, make_rng(levels))
    back = haar_inverse(haar_forward(img, levels))
    assert np.abs(back - img).max() <= 1e-6


def test_constant_image_has_zero_details():
    img = np.full((32, 32, 3), 0.37)
    pyr = haar_forward(img, 3)
    for bands in pyr.details:
        for band in bands:
            assert np.abs(band).max() <= 1e-6
    assert np.allclose(pyr.approx, 0.37 * 2**3)


def test_energy_preserved():
    img = make_rng(5).uniform(0, 1, (32, 32, 3))
    pyr = haar_forward(img, 2)
    energy = float(np.sum(pyr.approx**2))
    for bands in pyr.details:
        for band in bands:
            energy += float(np.sum(band**2))
    assert energy == pytest.approx(float(np.sum(img**2)), abs=1e-4)


def test_divisibility_enforced():
    with pytest.raises(ShapeError):
        haar_forward(np.zeros((30, 32, 3)), 2)


def test_weighted_l1_zero_for_identical():
    img = synthetic_photo(32, 32, make_rng(9))
    assert haar_weighted_l1(img, img, 4.0, 1.0, 2) == 0.0


def test_equal_weights_match_coefficient_l1():
    a = make_rng(10).uniform(0, 1, (16, 16, 3))
    b = make_rng(11).uniform(0, 1, (16, 16, 3))
    pa = haar_forward(a, 2)
    pb = haar_forward(b, 2)
    flat_a = [pa.approx.ravel()] + [band.ravel() for bands in pa.details for band in bands]
    flat_b = [pb.approx.ravel()] + [band.ravel() for bands in pb.details for band in bands]
    coeff_l1 = float(np.abs(np.concatenate(flat_a) - np.concatenate(flat_b)).mean())
    assert haar_weighted_l1(a, b, 1.0, 1.0, 2) == pytest.approx(coeff_l1, rel=1e-12)


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_constant_offset_hits_low_band_only(levels):
    # A constant offset c scales to 2**levels * c per approximation coefficient.
    img = synthetic_photo(32, 32, make_rng(12))
    offset = img + 0.01  # unclamped so the offset stays exactly constant
    pa = haar_forward(img, levels)
    pb = haar_forward(offset, levels)
    assert np.allclose(pb.approx - pa.approx, 0.01 * 2**levels, atol=1e-9)
    value = haar_weighted_l1(img, offset, 3.0, 1.0, levels)
    oracle = brute_pyramid_l1(img, offset, 3.0, 1.0, levels)
    assert value == pytest.approx(oracle, rel=1e-12)
    n_total = img.size
    n_ll = pa.approx.size
    assert value == pytest.approx(3.0 * (0.01 * 2**levels) * n_ll / n_total, rel=1e-9)


def test_weight_ordering_enforced():
    img = np.zeros((16, 16, 3))
    with pytest.raises(ConfigError):
        haar_weighted_l1(img, img, 1.0, 2.0, 1)
