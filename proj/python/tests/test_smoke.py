import math

import numpy as np
import pytest

import anisoframe as af


@pytest.fixture(scope="module")
def small():
    return af.ShearletSystem(64, 2, 3)


def test_system_shape(small):
    big = af.ShearletSystem()
    assert big.coefficient_count == 17477
    assert big.band_count == 61
    assert small.parseval_defect() < 1e-12


def test_round_trip(small):
    f = af.random_band_limited(64, small.resolvable_radius, 5)
    coeffs = small.analyze(f)
    assert len(coeffs) == small.coefficient_count
    g = small.synthesize(coeffs)
    assert np.linalg.norm(f - g) <= 1e-12 * np.linalg.norm(f)
    energy = sum(abs(v) ** 2 for v in coeffs.values())
    assert energy == pytest.approx(np.mean(np.abs(f) ** 2), rel=1e-12)


def test_norms_by_hand():
    c = {"C 0 0": 3 + 4j, "S 1 0 0 0 0": 1.0, "S 1 0 0 1 0": -1j, "S 1 1 1 0 0": 2.0}
    assert af.besov_norm(c, 0, 2, 1) == pytest.approx(5 + math.sqrt(2) + 2)
    assert af.tl_norm(c, 0, 2, 2) == pytest.approx(af.besov_norm(c, 0, 2, 2))
    with pytest.raises(ValueError):
        af.besov_norm(c, 0, 0, 1)
    with pytest.raises(ValueError):
        af.besov_norm({"S 1 0 5 0 0": 1.0}, 0, 1, 1)


def test_sigma_curve():
    c = {"S 1 0 0 0 0": 1.0, "S 1 1 0 0 0": 0.5, "S 2 2 1 3 1": 0.25}
    t, sigma = af.sigma_curve(c, 0, 1, 1.0)
    assert t[0] == 0 and sigma[-1] == 0
    assert all(a > b for a, b in zip(sigma, sigma[1:]))
    for ti, si in zip(t, sigma):
        assert af.sigma_exact(c, 0, 1, 1.0, ti) == si
    _, greedy = af.sigma_curve(c, 0, 1, 1.0, "greedy")
    assert greedy[0] == sigma[0]
    assert af.approx_space_norm(c, 0, 1, 1.0, 0.5, 1) > 0


def test_democracy_and_interpolation():
    r = af.democracy_ratio(["S 2 0 0 1 1"], (0, 1, 2), (0.5, 2, 2))
    assert r["lower_ratio"] == pytest.approx(1)
    assert af.lemma31_constant(2, 0.6) == pytest.approx(6 / (1 - 2 ** -0.8))
    assert af.identical_space_constant(0.5, 1) == pytest.approx(4)
    c = {"S 1 1 0 0 0": 0.7, "S 1 2 -1 1 0": 0.2}
    lo, hi = af.interp_norm_besov(c, 0.5, 1, (0, 1), (0, 1))
    exact = 4 * af.besov_norm(c, 0, 1, 1)
    assert lo <= exact * (1 + 1e-12) and exact <= hi * (1 + 1e-12)


def test_decay():
    d = af.decay_curves(64, 2, [0, 16, 256, 4096])
    assert d["shearlet"][0] == pytest.approx(d["energy"])
    assert all(a >= b for a, b in zip(d["shearlet"], d["shearlet"][1:]))
    assert all(a >= b for a, b in zip(d["haar"], d["haar"][1:]))
    assert af.cartoon_image(32).shape == (32, 32)
