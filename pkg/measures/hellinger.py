# measures/hellinger.py
"""Distancia y afinidad de Hellinger respecto de una medida dominante ν de densidad positiva."""
import logging

import numpy as np

from circle.actions import ActionSpec, act
from errors import NumericError
from measures.grid import GridMeasure, check_same_grid, integrate, pushforward
from measures.radon_nikodym import radon_nikodym

logger = logging.getLogger(__name__)

ROUTE_AGREEMENT = 1e-8


def _ratios(mu1: GridMeasure, mu2: GridMeasure, nu: GridMeasure) -> tuple[np.ndarray, np.ndarray]:
    check_same_grid(mu1, mu2, nu)
    nu.require_positive()
    return mu1.density / nu.density, mu2.density / nu.density


def hellinger_sq(mu1: GridMeasure, mu2: GridMeasure, nu: GridMeasure) -> float:
    r1, r2 = _ratios(mu1, mu2, nu)
    value = 0.5 * integrate((np.sqrt(r1) - np.sqrt(r2)) ** 2, nu)
    return min(max(value, 0.0), 1.0)


def hellinger(mu1: GridMeasure, mu2: GridMeasure, nu: GridMeasure) -> float:
    """H = ((1/2)∫(√(dμ₁/dν) − √(dμ₂/dν))² dν)^(1/2)"""
    return float(np.sqrt(hellinger_sq(mu1, mu2, nu)))


def affinity(mu1: GridMeasure, mu2: GridMeasure, nu: GridMeasure) -> float:
    r1, r2 = _ratios(mu1, mu2, nu)
    return integrate(np.sqrt(r1 * r2), nu)


def l1_distance(mu1: GridMeasure, mu2: GridMeasure, nu: GridMeasure) -> float:
    r1, r2 = _ratios(mu1, mu2, nu)
    return integrate(np.abs(r1 - r2), nu)


def total_variation(mu1: GridMeasure, mu2: GridMeasure, nu: GridMeasure) -> float:
    return 0.5 * l1_distance(mu1, mu2, nu)


def beta(action: ActionSpec, nu: GridMeasure) -> float:
    """β = (1/#S) Σ_s ∫ √ρ_s dν"""
    gens = action.group.generator_words()
    return float(np.mean([integrate(np.sqrt(radon_nikodym(action, nu, s)), nu) for s in gens]))


def avg_hellinger_sq_routes(action: ActionSpec, nu: GridMeasure) -> tuple[float, float | None]:
    """(1 − β, media de H(ν, s*ν)²); la segunda es None si alguna imagen pierde masa."""
    gens = action.group.generator_words()
    try:
        via_push = float(np.mean([hellinger_sq(nu, pushforward(nu, act(action, s)), nu) for s in gens]))
    except NumericError as exc:
        logger.warning("ruta por imágenes de ν descartada: %s", exc)
        via_push = None
    return max(1.0 - beta(action, nu), 0.0), via_push


def avg_hellinger_sq(action: ActionSpec, nu: GridMeasure, cross_check: bool = True) -> float:
    if not cross_check:
        return max(1.0 - beta(action, nu), 0.0)
    via_rho, via_push = avg_hellinger_sq_routes(action, nu)
    if via_push is not None and abs(via_rho - via_push) > ROUTE_AGREEMENT:
        logger.warning("avg_hellinger_sq: las dos rutas difieren en %.3e", abs(via_rho - via_push))
    return via_rho
