# hilbert/rho_bounds.py
"""ρ̄_R = max_{g∈B_R} ρ_g y ρ̲_R = min_{g∈B_R} ρ_g, siempre etiquetados con R."""
import logging
from typing import Iterator

import numpy as np

from circle.actions import ActionSpec, act
from circle.sampling import periodic_interp
from errors import InputError
from groups.balls import ball
from groups.words import Word, mul
from measures.grid import GridFunction, GridMeasure
from measures.radon_nikodym import radon_nikodym, translate_function

logger = logging.getLogger(__name__)


def rho_envelopes(action: ActionSpec, nu: GridMeasure, r_max: int) -> Iterator[tuple[int, GridFunction, GridFunction]]:
    """(R, ρ̄_R, ρ̲_R) para R = 0..r_max, acumulando por esferas."""
    b = ball(action.group, r_max)
    upper = np.ones(nu.n)
    lower = np.ones(nu.n)
    yield 0, upper.copy(), lower.copy()
    for r in range(1, r_max + 1):
        for g in b.sphere(r):
            rho = radon_nikodym(action, nu, g)
            np.maximum(upper, rho, out=upper)
            np.minimum(lower, rho, out=lower)
        logger.debug("envolventes de ρ en R=%d: max %.6g min %.6g", r, upper.max(), lower.min())
        yield r, upper.copy(), lower.copy()


def truncated_rho_bounds(action: ActionSpec, nu: GridMeasure, radius: int) -> tuple[GridFunction, GridFunction]:
    if radius < 0:
        raise InputError(f"radio negativo: {radius}")
    *_, (_, upper, lower) = rho_envelopes(action, nu, radius)
    return upper, lower


def _envelopes_over(action: ActionSpec, nu: GridMeasure, words) -> tuple[GridFunction, GridFunction]:
    rows = np.array([radon_nikodym(action, nu, k) for k in words])
    return rows.max(axis=0), rows.min(axis=0)


def lemma_rho_identity_check(action: ActionSpec, nu: GridMeasure, g: Word, radius: int) -> dict[str, float]:
    """
    ρ_g(x)·ρ̄_R(Φ_{g⁻¹}x) frente a max_{k∈gB_R} ρ_k(x), y lo mismo con mínimos.
    Ambos lados coinciden en aritmética exacta por la ley de cociclo.
    """
    b = ball(action.group, radius)
    upper, lower = _envelopes_over(action, nu, b.elements)
    shifted_upper, shifted_lower = _envelopes_over(action, nu, [mul(g, h) for h in b.elements])
    rho_g = radon_nikodym(action, nu, g)
    sup_defect = np.max(np.abs(rho_g * translate_function(action, g, upper) - shifted_upper))
    inf_defect = np.max(np.abs(rho_g * translate_function(action, g, lower) - shifted_lower))
    return {"sup": float(sup_defect), "inf": float(inf_defect)}


def inverse_translate_sup(action: ActionSpec, nu: GridMeasure, radius: int) -> GridFunction:
    """sup_{g∈B_R} ρ_g(Φ_g x); su producto con ρ̲_R es 1."""
    out = np.ones(nu.n)
    for g in ball(action.group, radius).elements[1:]:
        np.maximum(out, periodic_interp(radon_nikodym(action, nu, g), act(action, g).lift), out=out)
    return out
