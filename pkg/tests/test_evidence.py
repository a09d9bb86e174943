from math import pi

import numpy as np
import pytest
from pytest import approx, raises

from circle.actions import default_thetas, isometric_companion, rotation_action, sine_action
from circle.sampling import grid_points
from errors import InputError
from measures.grid import lebesgue
from services.evidence_service import arc_points, evidence_theorem2, near_isometry_check

N = 1024


@pytest.fixture(scope="module")
def sine_small(f2):
    return sine_action(f2, default_thetas(2), 0.1, N)


def test_invariant_action_gives_constant_series(f2):
    action = rotation_action(f2, default_thetas(2), N)
    report = evidence_theorem2(action, lebesgue(N), 3)
    assert report.radii == [0, 1, 2, 3]
    assert report.sup_integrals == approx([1.0] * 4)
    assert report.inf_integrals == approx([1.0] * 4)
    assert report.sup_bounded_hint and report.inf_positive_hint
    assert report.to_dict()["flags"] == {"sup_bounded_hint": True, "inf_positive_hint": True}


def test_radius_zero(sine_small):
    report = evidence_theorem2(sine_small, lebesgue(N), 0)
    assert report.radii == [0]
    assert report.sup_integrals == [1.0]
    assert report.inf_integrals == [1.0]


def test_negative_radius(sine_small):
    with raises(InputError):
        evidence_theorem2(sine_small, lebesgue(N), -1)


def test_series_are_monotone(sine_small):
    report = evidence_theorem2(sine_small, lebesgue(N), 4)
    sups, infs = report.sup_integrals, report.inf_integrals
    assert all(b >= a for a, b in zip(sups, sups[1:]))
    assert all(b <= a for a, b in zip(infs, infs[1:]))
    assert sups[1] > 1.0 > infs[1] > 0.0
    assert [r for r, _, _ in report.rows()] == list(range(5))


def test_near_isometry_of_rotations(f2):
    action = rotation_action(f2, default_thetas(2), N)
    report = near_isometry_check(action, action, (0.0, 1.0), 3)
    assert report.c_r == approx(0.0, abs=1e-12)
    assert report.criterion_met
    assert report.implied_inf_derivative == approx(1.0)
    assert report.points == N


def test_near_isometry_small_amplitude(f2):
    a = 0.05
    action = sine_action(f2, default_thetas(2), a, N)
    report = near_isometry_check(action, isometric_companion(action), (0.0, 1.0), 3)
    lip = 1.0 / (1.0 - a)
    assert report.c_r <= a / (2 * 3.141592653589793) * (1 + lip + lip**2) + lip**3 - 1
    assert report.criterion_met
    assert report.measured_inf_derivative >= report.implied_inf_derivative - 1e-12
    assert report.inf_integral_on_arc >= report.inf_integral_bound_on_arc - 1e-12
    assert report.to_dict()["conclusion"].startswith("inf")


def test_near_isometry_partial_arc(f2):
    action = sine_action(f2, default_thetas(2), 0.05, N)
    report = near_isometry_check(action, isometric_companion(action), (0.9, 0.25), 2)
    assert report.points == 256
    assert report.inf_integral_bound_on_arc <= 0.25


def test_near_isometry_large_amplitude(f2):
    action = sine_action(f2, default_thetas(2), 0.9, N)
    report = near_isometry_check(action, isometric_companion(action), (0.0, 1.0), 3)
    assert not report.criterion_met
    assert report.implied_inf_derivative is None
    assert report.inf_integral_bound_on_arc is None
    assert report.to_dict()["conclusion"].startswith("criterio no")


def test_near_isometry_rejects_bad_input(f2, sine_small):
    with raises(InputError):
        near_isometry_check(sine_small, isometric_companion(sine_small), (0.0, 0.0), 1)
    with raises(InputError):
        near_isometry_check(sine_small, isometric_companion(sine_small), (0.0, 1.5), 1)
    with raises(InputError, match="rotación"):
        near_isometry_check(sine_small, sine_small, (0.0, 1.0), 1)


def test_arc_points_wraps_around():
    idx = arc_points(0.75, 0.5, 8)
    assert sorted(idx.tolist()) == [0, 1, 6, 7]


def _radius_one_envelopes(thetas, a, n):
    """ρ de los generadores en S¹: Dφ(x) = 1 + a cos 2πx y 1/Dφ(φ⁻¹x), φ⁻¹ por Newton."""
    x = grid_points(n)
    rows = [np.ones(n), 1.0 + a * np.cos(2 * pi * x)]
    for theta in thetas:
        u = x - theta
        for _ in range(50):
            u = u - (u + theta + a / (2 * pi) * np.sin(2 * pi * u) - x) / (1.0 + a * np.cos(2 * pi * u))
        rows.append(1.0 / (1.0 + a * np.cos(2 * pi * u)))
    rows = np.array(rows)
    return float(rows.max(axis=0).mean()), float(rows.min(axis=0).mean())


def test_evidence_sequence_at_a_tenth(sine_f2, leb):
    report = evidence_theorem2(sine_f2, leb, 5)
    sups, infs = report.sup_integrals, report.inf_integrals
    assert report.radii == list(range(6))
    assert sups[0] == infs[0] == 1.0
    sup_1, inf_1 = _radius_one_envelopes(default_thetas(2), 0.1, sine_f2.grid_size)
    assert sups[1] == approx(sup_1, abs=1e-5)
    assert infs[1] == approx(inf_1, abs=1e-5)
    assert all(b >= a for a, b in zip(sups, sups[1:]))
    assert all(b <= a for a, b in zip(infs, infs[1:]))
    # cada ρ_g de largo R está entre 0.9^R y (1/0.9)^R
    for r in range(6):
        assert 0.9 ** r - 1e-6 <= infs[r] <= 1.0 <= sups[r] <= 0.9 ** -r + 1e-6
