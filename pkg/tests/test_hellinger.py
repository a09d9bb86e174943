import logging
from math import sqrt

import numpy as np
from hypothesis import given, settings, strategies as st
from pytest import approx, raises

from circle.actions import default_thetas, sine_action
from errors import UnsupportedMeasureError
from groups.words import FREE, GroupSpec
from measures.grid import GridMeasure, lebesgue, von_mises
from measures.hellinger import (
    affinity,
    avg_hellinger_sq,
    avg_hellinger_sq_routes,
    beta,
    hellinger,
    hellinger_sq,
    l1_distance,
    total_variation,
)

N = 4096


def _half(n: int, first: bool = True) -> GridMeasure:
    d = np.zeros(n)
    if first:
        d[: n // 2] = 2.0
    else:
        d[n // 2:] = 2.0
    return GridMeasure(d)


def _random_measure(rng, n: int) -> GridMeasure:
    return GridMeasure.from_values(rng.random(n) + 0.01)


def test_self_distance(leb):
    nu = von_mises(N, 0.3, 2.0)
    assert hellinger(nu, nu, leb) == 0.0
    assert affinity(nu, nu, leb) == approx(1.0)


def test_half_interval(leb):
    mu = _half(N)
    assert affinity(leb, mu, leb) == approx(sqrt(2) / 2)
    assert hellinger(leb, mu, leb) == approx(sqrt(1 - sqrt(2) / 2), abs=1e-12)
    assert hellinger(leb, mu, leb) == approx(0.54120, abs=1e-5)
    assert total_variation(leb, mu, leb) == approx(0.5)


def test_disjoint_supports(leb):
    mu1, mu2 = _half(N), _half(N, first=False)
    assert hellinger(mu1, mu2, leb) == approx(1.0)
    assert affinity(mu1, mu2, leb) == 0.0
    assert l1_distance(mu1, mu2, leb) == approx(2.0)


def test_dominating_measure_must_be_positive(leb):
    with raises(UnsupportedMeasureError):
        hellinger(leb, leb, _half(N))


def test_metric_axioms(rng):
    n = 128
    leb = lebesgue(n)
    measures = [_random_measure(rng, n) for _ in range(6)]
    for m1 in measures:
        for m2 in measures:
            d = hellinger(m1, m2, leb)
            assert 0.0 <= d <= 1.0
            assert d == approx(hellinger(m2, m1, leb))
            for m3 in measures:
                assert hellinger(m1, m3, leb) <= d + hellinger(m2, m3, leb) + 1e-12


def test_affinity_identity(rng):
    n = 128
    leb = lebesgue(n)
    for _ in range(100):
        m1, m2 = _random_measure(rng, n), _random_measure(rng, n)
        assert hellinger_sq(m1, m2, leb) == approx(1.0 - affinity(m1, m2, leb), abs=1e-12)


def test_total_variation_sandwich(rng):
    n = 64
    leb = lebesgue(n)
    for _ in range(1000):
        m1, m2 = _random_measure(rng, n), _random_measure(rng, n)
        h = hellinger(m1, m2, leb)
        tv = total_variation(m1, m2, leb)
        assert h**2 <= tv + 1e-12
        assert tv <= h * sqrt(2 - h**2) + 1e-12


def test_independent_of_dominating_measure(rng):
    n = 128
    leb = lebesgue(n)
    nu = von_mises(n, 0.7, 1.5)
    for _ in range(20):
        m1, m2 = _random_measure(rng, n), _random_measure(rng, n)
        assert hellinger(m1, m2, nu) == approx(hellinger(m1, m2, leb), abs=1e-12)


def test_rotations_have_zero_average(rot_f2, leb):
    assert avg_hellinger_sq(rot_f2, leb) == approx(0.0, abs=1e-12)
    assert beta(rot_f2, leb) == approx(1.0)


def test_sine_average_small_amplitude(sine_f2, leb):
    value = avg_hellinger_sq(sine_f2, leb)
    assert value == approx(0.1**2 / 16, rel=0.1)


def test_routes_agree(sine_f2, leb):
    via_rho, via_push = avg_hellinger_sq_routes(sine_f2, leb)
    assert via_push is not None
    assert abs(via_rho - via_push) <= 1e-8


def test_routes_agree_for_smooth_measure(sine_f2):
    nu = von_mises(N, 0.25, 1.0)
    via_rho, via_push = avg_hellinger_sq_routes(sine_f2, nu)
    assert 0.0 <= via_rho <= 1.0
    assert via_push == approx(via_rho, abs=1e-6)


def test_cross_check_warning(sine_f2, leb, caplog, monkeypatch):
    monkeypatch.setattr("measures.hellinger.ROUTE_AGREEMENT", -1.0)
    with caplog.at_level(logging.WARNING):
        avg_hellinger_sq(sine_f2, leb)
    assert "difieren" in caplog.text


@given(st.floats(0.0, 0.5))
@settings(max_examples=25, deadline=None)
def test_average_matches_small_amplitude_expansion(a):
    f1 = GroupSpec(FREE, 1)
    value = avg_hellinger_sq(sine_action(f1, default_thetas(1), a, 1024), lebesgue(1024), cross_check=False)
    assert a**2 / 16 - 1e-12 <= value <= a**2 / 16 * (1 + a**2) + 1e-12
