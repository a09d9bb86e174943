from math import pi

import numpy as np
from pytest import approx, mark, raises

from circle.actions import act, default_thetas, sine_action
from circle.diffeos import make_rotation, make_sine_perturbed
from circle.sampling import grid_points
from errors import InputError, NumericError, UnsupportedMeasureError
from groups.balls import ball
from measures.grid import GridMeasure, integrate, lebesgue, pushforward, von_mises
from measures.radon_nikodym import (
    TEST_BATTERY,
    cocycle_check,
    defining_identity_defect,
    radon_nikodym,
    translate_function,
)

N = 4096


def test_integrate_examples(leb):
    x = grid_points(N)
    assert integrate(np.ones(N), leb) == approx(1.0)
    assert integrate(np.cos(2 * pi * x), leb) == approx(0.0, abs=1e-12)
    assert integrate(x, leb) == approx(0.5)
    assert integrate(np.sin(2 * pi * x) ** 2, leb) == approx(0.5)


def test_integrate_grid_mismatch(leb):
    with raises(InputError, match="mallas distintas"):
        integrate(np.ones(N // 2), leb)


def test_measure_validation():
    with raises(InputError, match="masa"):
        GridMeasure(np.full(8, 2.0))
    with raises(InputError):
        GridMeasure(np.array([2.0, -1.0, 1.0, 2.0]))
    with raises(InputError):
        GridMeasure.from_values(np.zeros(8))
    nu = GridMeasure.from_values(np.arange(1, 9))
    assert integrate(np.ones(8), nu) == approx(1.0)


def test_von_mises_is_positive_probability():
    nu = von_mises(N, center=0.3, kappa=2.0)
    assert nu.is_positive
    assert integrate(np.ones(N), nu) == approx(1.0)


def test_pushforward_identity_and_rotation(leb):
    assert pushforward(leb, make_rotation(0.0, N)).density == approx(np.ones(N))
    assert pushforward(leb, make_rotation(0.3, N)).density == approx(np.ones(N))
    nu = von_mises(N, center=0.2, kappa=1.0)
    moved = pushforward(nu, make_rotation(0.25, N))
    assert moved.density == approx(von_mises(N, center=0.45, kappa=1.0).density, abs=1e-5)


def test_pushforward_of_sine(leb):
    f = make_sine_perturbed(0.0, 0.1, N)
    moved = pushforward(leb, f)
    # densidad de φ_*λ en φ(x) es 1/Dφ(x)
    values = np.interp(np.mod(f.lift, 1.0), np.mod(grid_points(N), 1.0), moved.density, period=1.0)
    assert values == approx(1.0 / f.deriv, rel=1e-5)
    assert integrate(np.ones(N), moved) == approx(1.0, abs=1e-6)


def test_pushforward_detects_mass_loss():
    # densidad con picos que la interpolación lineal no conserva
    spiky = np.ones(64)
    spiky[::2] = 1.9
    spiky[1::2] = 0.1
    nu = GridMeasure(spiky)
    with raises(NumericError):
        pushforward(nu, make_sine_perturbed(0.013, 0.5, 64))


def test_rho_identity_and_rotations(rot_f2, sine_f2, leb):
    f2 = sine_f2.group
    assert np.all(radon_nikodym(sine_f2, leb, f2.identity()) == 1.0)
    for g in ball(f2, 2).elements:
        assert radon_nikodym(rot_f2, leb, g) == approx(np.ones(N))


def test_rho_has_unit_integral(sine_f2, leb):
    for g in ball(sine_f2.group, 2).elements:
        assert integrate(radon_nikodym(sine_f2, leb, g), leb) == approx(1.0, abs=1e-6)


def test_rho_requires_positive_density(sine_f2):
    half = np.zeros(N)
    half[: N // 2] = 2.0
    with raises(UnsupportedMeasureError):
        radon_nikodym(sine_f2, GridMeasure(half), sine_f2.group.word("a"))


@mark.parametrize("measure", ["lebesgue", "von_mises"])
def test_defining_identity(sine_f2, measure):
    nu = lebesgue(N) if measure == "lebesgue" else von_mises(N, center=0.4, kappa=1.0)
    assert len(TEST_BATTERY) == 8
    worst = max(max(defining_identity_defect(sine_f2, nu, g).values()) for g in ball(sine_f2.group, 4).elements)
    assert worst <= 1e-5


def test_cocycle_identity(sine_f2, leb):
    f2 = sine_f2.group
    for g, h in [("a", "b"), ("ab", "A"), ("aab", "bAb"), ("BaB", "abb")]:
        g, h = f2.word(g), f2.word(h)
        assert cocycle_check(sine_f2, leb, g, h) <= 1e-4 * (g.length + h.length)


def test_cocycle_defect_decays_with_grid(f2):
    defects = []
    for n in (1024, 2048, 4096):
        action = sine_action(f2, default_thetas(2), 0.1, n)
        defects.append(cocycle_check(action, lebesgue(n), f2.word("aab"), f2.word("bAb")))
    assert defects[0] > defects[1] > defects[2]
    assert 2.5 <= defects[1] / defects[2] <= 6.0


def test_translate_function(sine_f2):
    x = grid_points(N)
    a = sine_f2.group.word("a")
    moved = translate_function(sine_f2, a, np.cos(2 * pi * x))
    expected = np.cos(2 * pi * act(sine_f2, sine_f2.group.word("A")).lift)
    assert moved == approx(expected, abs=1e-5)


def test_small_mass_drift_is_renormalized():
    nu = GridMeasure(np.full(8, 1.0 + 5e-7))
    assert abs(nu.density.mean() - 1.0) <= 1e-9
    assert integrate(np.ones(8), nu) == approx(1.0, abs=1e-12)
    moved = pushforward(von_mises(N, center=0.2, kappa=1.0), make_sine_perturbed(0.1, 0.2, N))
    assert abs(moved.density.mean() - 1.0) <= 1e-9
