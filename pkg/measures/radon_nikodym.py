# measures/radon_nikodym.py
"""
ρ_g = d(g*ν)/dν por cambio de variables, fijado por la identidad
∫ f(Φ_{g⁻¹}x) ρ_g(x) dν(x) = ∫ f dν.
"""
import logging
from typing import Callable, Sequence

import numpy as np

from circle.actions import ActionSpec, act
from circle.sampling import grid_points, periodic_interp
from errors import InputError
from groups.words import Word, inv, mul
from measures.grid import GridFunction, GridMeasure, integrate

logger = logging.getLogger(__name__)

TestFunction = Callable[[np.ndarray], np.ndarray]


def _trig(k: int, fn) -> TestFunction:
    return lambda x: fn(2 * np.pi * k * x)


def _bump(x: np.ndarray) -> np.ndarray:
    return np.exp(2.0 * np.cos(2 * np.pi * (x - 0.3)))


# constante, trigonométricas de baja frecuencia y un bump
TEST_BATTERY: tuple[tuple[str, TestFunction], ...] = (
    ("one", lambda x: np.ones_like(x)),
    ("cos1", _trig(1, np.cos)),
    ("sin1", _trig(1, np.sin)),
    ("cos2", _trig(2, np.cos)),
    ("sin2", _trig(2, np.sin)),
    ("cos3", _trig(3, np.cos)),
    ("sin3", _trig(3, np.sin)),
    ("bump", _bump),
)


def _check_action_measure(action: ActionSpec, nu: GridMeasure) -> None:
    if action.grid_size != nu.n:
        raise InputError(f"la acción usa N={action.grid_size} y la medida N={nu.n}", "/grid")


def radon_nikodym(action: ActionSpec, nu: GridMeasure, g: Word) -> GridFunction:
    """ρ_g = (p∘Φ_{g⁻¹})·DΦ_{g⁻¹} / p"""
    _check_action_measure(action, nu)
    nu.require_positive()
    if g.is_identity:
        return np.ones(nu.n)
    phi = act(action, inv(g))
    p = nu.density
    return periodic_interp(p, phi.lift) * phi.deriv / p


def translate_function(action: ActionSpec, g: Word, values: GridFunction) -> GridFunction:
    """g*f(x) = f(Φ_{g⁻¹}x) para f dada por muestras."""
    if g.is_identity:
        return np.asarray(values, dtype=float)
    return periodic_interp(values, act(action, inv(g)).lift)


def defining_identity_defect(action: ActionSpec, nu: GridMeasure, g: Word,
                             battery: Sequence[tuple[str, TestFunction]] = TEST_BATTERY) -> dict[str, float]:
    """|∫ g*f ρ_g dν − ∫ f dν| por función de prueba."""
    rho = radon_nikodym(action, nu, g)
    x = grid_points(nu.n)
    moved = act(action, inv(g)).lift
    out = {}
    for name, f in battery:
        out[name] = abs(integrate(f(moved) * rho, nu) - integrate(f(x), nu))
    return out


def cocycle_check(action: ActionSpec, nu: GridMeasure, g: Word, h: Word) -> float:
    """max_x |ρ_{gh}(x) − ρ_g(x)·ρ_h(Φ_{g⁻¹}x)|"""
    rho_gh = radon_nikodym(action, nu, mul(g, h))
    rho_g = radon_nikodym(action, nu, g)
    rho_h = radon_nikodym(action, nu, h)
    defect = float(np.max(np.abs(rho_gh - rho_g * translate_function(action, g, rho_h))))
    logger.debug("cociclo g=%s h=%s: defecto %.3e", g, h, defect)
    return defect
