import math

import numpy as np
import pytest

from permchar import equidist as eq
from permchar.equidist import (DimensionUnsupportedError, PointSequence,
                               ResonantFrequencyError, SingularPointHitError)

SQRT2 = math.sqrt(2.0) % 1.0
SQRT3 = math.sqrt(3.0) % 1.0


def test_nearest_integer_distance():
    assert eq.nearest_integer_distance(0.3) == pytest.approx(0.3)
    assert eq.nearest_integer_distance(0.7) == pytest.approx(0.3)
    assert eq.nearest_integer_distance(-1.25) == pytest.approx(0.25)
    assert eq.nearest_integer_distance(2.0) == 0.0


def test_kronecker_sequence_points():
    seq = eq.kronecker(SQRT2, 3)
    want = np.mod(np.arange(1, 4) * SQRT2, 1.0)
    assert np.allclose(seq.points[:, 0], want)
    assert seq.d == 1 and seq.n == 3


def test_star_discrepancy_1d_closed_form():
    # single point at 0.5: D* = max(1 - 0.5, 0.5 - 0) = 0.5
    seq = PointSequence(1, np.array([[0.5]]))
    assert eq.star_discrepancy_exact(seq) == pytest.approx(0.5)
    # equally spaced (i - 0.5)/n has the minimal value 1/(2n)
    n = 10
    pts = ((np.arange(1, n + 1) - 0.5) / n)[:, None]
    assert eq.star_discrepancy_exact(PointSequence(1, pts)) == pytest.approx(1 / (2 * n))


def test_star_discrepancy_2d_single_point():
    seq = PointSequence(2, np.array([[0.5, 0.5]]))
    assert eq.star_discrepancy_exact(seq) == pytest.approx(0.75)


def test_star_discrepancy_2d_matches_grid_oracle():
    rng = np.random.default_rng(0)
    for _ in range(5):
        pts = rng.random((40, 2))
        seq = PointSequence(2, pts)
        exact = eq.star_discrepancy_exact(seq)
        oracle = eq.star_discrepancy_grid_oracle(seq, 60)
        assert oracle <= exact + 1e-12
        assert exact - oracle < 2 / 60 + 1e-9


def test_discrepancy_dimension_guard():
    with pytest.raises(DimensionUnsupportedError):
        eq.star_discrepancy_exact(PointSequence(3, np.zeros((2, 3))))


def test_etk_bound_dominates_exact():
    seq = eq.kronecker(SQRT2, 500)
    exact = eq.star_discrepancy_exact(seq)
    bound = eq.etk_bound(SQRT2, 500, 40)
    assert bound >= exact


def test_etk_bound_rational_resonance():
    with pytest.raises(ResonantFrequencyError):
        eq.etk_bound(0.5, 100, 10)


def test_preset_certificates_hold():
    for key, cert in eq.PRESETS.items():
        phis = key[0] if len(key) == 1 else key
        assert eq.certificate_holds(cert, phis, min(cert.H_searched, 2000))


def test_finite_type_estimate_uses_presets():
    cert = eq.finite_type_estimate(SQRT2, 100)
    assert cert.preset and cert.gamma == 1.0


def test_finite_type_estimate_detects_rational():
    cert = eq.finite_type_estimate(0.25, 100)
    assert cert.K == 0.0


def test_finite_type_estimate_generic_irrational():
    cert = eq.finite_type_estimate(math.pi % 1.0, 200)
    assert cert.K > 0.0
    assert eq.certificate_holds(cert, math.pi % 1.0, 200)


def test_golden_ratio_discrepancy_log_decay():
    # n * D_n for the golden-ratio sequence grows at most logarithmically
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    for n in (100, 400, 1600, 6400):
        d = eq.star_discrepancy_exact(eq.kronecker(phi, n))
        assert n * d <= 3.0 * math.log(n + 2)


def test_weighted_sum_and_singular_guard():
    seq = eq.kronecker(SQRT2, 100)
    val = eq.weighted_sum(lambda t: np.ones_like(t), seq)
    assert val == pytest.approx(1.0)
    bad = PointSequence(1, np.array([[0.25], [0.5]]))
    with pytest.raises(SingularPointHitError):
        eq.weighted_sum(lambda t: 1.0 / (t - 0.5), bad, singular_angles=(0.5,))


def test_total_variation_monotone_and_vshape():
    assert eq.total_variation(lambda t: 3.0 * t, (0.0, 1.0)) == pytest.approx(3.0, abs=1e-5)
    assert eq.total_variation(lambda t: np.abs(t - 0.5), (0.0, 1.0)) == pytest.approx(1.0, abs=1e-5)


def test_kh_error_bound_controls_quadrature_error():
    # smooth integrand, no singularity: delta = 0 reduces to plain KH
    h = lambda t: np.sin(2 * np.pi * t)
    seq = eq.kronecker(SQRT2, 1000)
    mean = eq.weighted_sum(h, seq)
    bound = eq.kh_error_bound(h, seq, delta=0.0)
    assert abs(mean - 0.0) <= bound


def test_kh_error_bound_point_outside_box():
    seq = eq.kronecker(SQRT2, 50)
    with pytest.raises(eq.PointOutsideBoxError):
        eq.kh_error_bound(lambda t: t, seq, delta=0.4)
