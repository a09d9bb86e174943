# services/evidence_service.py
"""
Evidencia (nunca certificado) sobre ∫ρ̄_R dν acotada y ∫ρ̲_R dν > 0, y el criterio de
cercanía a isometrías sobre un arco.
"""
import logging
from dataclasses import dataclass

import numpy as np

from circle.actions import ActionSpec, act
from circle.diffeos import c1_distance_at
from circle.sampling import grid_points
from errors import InputError
from groups.balls import ball
from hilbert.rho_bounds import rho_envelopes
from measures.grid import GridMeasure, integrate, lebesgue
from measures.radon_nikodym import radon_nikodym

logger = logging.getLogger(__name__)

INF_FLOOR = 0.1
SPREAD = 1e-3
RATIO = 0.5


@dataclass(frozen=True)
class EvidenceReport:
    radii: list[int]
    sup_integrals: list[float]
    inf_integrals: list[float]
    sup_bounded_hint: bool
    inf_positive_hint: bool

    def to_dict(self) -> dict:
        return {
            "radii": self.radii,
            "sup_integrals": self.sup_integrals,
            "inf_integrals": self.inf_integrals,
            "flags": {"sup_bounded_hint": self.sup_bounded_hint, "inf_positive_hint": self.inf_positive_hint},
            "monotone": {"sup": "nondecreasing", "inf": "nonincreasing"},
        }

    def rows(self) -> list[tuple]:
        return list(zip(self.radii, self.sup_integrals, self.inf_integrals))


def _spread(values: list[float]) -> float:
    tail = values[-3:]
    return max(tail) - min(tail)


def _sup_bounded(values: list[float]) -> bool:
    """Estable, o con incrementos que decaen geométricamente."""
    if _spread(values) < SPREAD:
        return True
    if len(values) < 3:
        return False
    d1, d2 = values[-2] - values[-3], values[-1] - values[-2]
    return d1 > 0 and d2 <= RATIO * d1


def evidence_theorem2(action: ActionSpec, nu: GridMeasure, r_max: int) -> EvidenceReport:
    if r_max < 0:
        raise InputError(f"R_max debe ser >= 0: {r_max}", "/radius")
    radii, sups, infs = [], [], []
    for r, upper, lower in rho_envelopes(action, nu, r_max):
        radii.append(r)
        sups.append(integrate(upper, nu))
        infs.append(integrate(lower, nu))
    inf_hint = infs[-1] >= INF_FLOOR and _spread(infs) < SPREAD
    sup_hint = _sup_bounded(sups)
    if not inf_hint:
        logger.warning("evidencia: ∫ρ̲_R no se estabiliza por encima de %.2g (R=%d)", INF_FLOOR, r_max)
    if not sup_hint:
        logger.warning("evidencia: ∫ρ̄_R sigue creciendo en R=%d", r_max)
    return EvidenceReport(radii=radii, sup_integrals=sups, inf_integrals=infs,
                          sup_bounded_hint=sup_hint, inf_positive_hint=inf_hint)


@dataclass(frozen=True)
class NearIsometryReport:
    radius: int
    arc: tuple[float, float]
    points: int
    c_r: float
    criterion_met: bool
    implied_inf_derivative: float | None
    measured_inf_derivative: float
    inf_integral_bound_on_arc: float | None
    inf_integral_on_arc: float

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "arc": list(self.arc),
            "points": self.points,
            "C_R": self.c_r,
            "criterion_met": self.criterion_met,
            "conclusion": ("inf Dφ_g >= 1 - C_R > 0 sobre el arco" if self.criterion_met
                           else "criterio no satisfecho; sin conclusión"),
            "implied_inf_derivative": self.implied_inf_derivative,
            "measured_inf_derivative": self.measured_inf_derivative,
            "inf_integral_bound_on_arc": self.inf_integral_bound_on_arc,
            "inf_integral_on_arc": self.inf_integral_on_arc,
        }


def arc_points(start: float, length: float, n: int) -> np.ndarray:
    """Puntos de la malla en el arco [start, start + length)."""
    if not 0 < length <= 1:
        raise InputError(f"el arco debe tener longitud en (0, 1]: {length}", "/params/arc")
    x = grid_points(n)
    mask = np.mod(x - start, 1.0) < length
    if not mask.any():
        raise InputError("el arco no contiene puntos de la malla", "/params/arc")
    return np.flatnonzero(mask)


def near_isometry_check(action: ActionSpec, comparison: ActionSpec, arc: tuple[float, float],
                        radius: int) -> NearIsometryReport:
    """
    C_R = max_{g∈B_R, x∈U} d_x(φ_g, î_g). Si C_R < 1, inf Dφ_g >= 1 − C_R en U y
    ∫_U ρ̲_R dλ >= (1 − C_R)|U|.
    """
    if comparison.group != action.group or comparison.grid_size != action.grid_size:
        raise InputError("la acción de comparación no comparte grupo o malla", "/action")
    for s in comparison.group.generators:
        if np.any(comparison.generator(s).deriv != 1.0):
            raise InputError(f"la comparación no es una rotación en {s!r}", "/action")
    start, length = arc
    idx = arc_points(start, length, action.grid_size)
    x = grid_points(action.grid_size)[idx]
    c_r = 0.0
    inf_deriv = np.inf
    leb = lebesgue(action.grid_size)
    lower = np.ones(action.grid_size)
    for g in ball(action.group, radius).elements:
        phi = act(action, g)
        c_r = max(c_r, float(np.max(c1_distance_at(x, phi, act(comparison, g)))))
        inf_deriv = min(inf_deriv, float(np.min(phi.deriv[idx])))
        np.minimum(lower, radon_nikodym(action, leb, g), out=lower)
    met = c_r < 1.0
    mask = np.zeros(action.grid_size)
    mask[idx] = 1.0
    arc_measure = integrate(mask, leb)
    logger.info("casi-isometría R=%d: C_R=%.6g, inf Dφ=%.6g", radius, c_r, inf_deriv)
    return NearIsometryReport(
        radius=radius,
        arc=(float(start), float(length)),
        points=int(idx.size),
        c_r=c_r,
        criterion_met=met,
        implied_inf_derivative=1.0 - c_r if met else None,
        measured_inf_derivative=inf_deriv,
        inf_integral_bound_on_arc=(1.0 - c_r) * arc_measure if met else None,
        inf_integral_on_arc=integrate(lower * mask, leb),
    )
