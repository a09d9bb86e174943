# services/certify_service.py
"""
Certificado de no amenabilidad: (1/#S) Σ_s H(ν, s*ν)² < λ₁/2 con holgura δ_cert.
Sólo consume λ₁ exacto o cota inferior certificada.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from circle.actions import ActionSpec, sine_action
from config import TOLERANCES, Tolerances
from errors import PolicyError
from groups.words import GroupSpec
from measures.grid import GridMeasure, integrate, lebesgue
from measures.hellinger import avg_hellinger_sq
from spectral.laplacian import Lambda1Kind, Lambda1Value, lambda1_exact

logger = logging.getLogger(__name__)

ROUTE_AGREEMENT = 1e-6


class Verdict(str, Enum):
    CERTIFIED = "CertifiedNotAmenable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CertificateReport:
    verdict: Verdict
    avg_h_sq: float
    lambda1: Lambda1Value
    margin: float
    delta_cert: float
    route: str
    provenance: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def __post_init__(self):
        # compuerta de solidez
        if self.verdict is Verdict.CERTIFIED:
            if not self.lambda1.certifiable:
                raise PolicyError("las estimaciones de lambda_1 no pueden certificar")
            if not (self.lambda1.value > 0 and self.margin > self.delta_cert):
                raise PolicyError(f"margen {self.margin:.3g} no supera δ_cert={self.delta_cert:.3g}")

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "avg_h_sq": self.avg_h_sq,
            "lambda1": self.lambda1.to_dict(),
            "margin": self.margin,
            "delta_cert": self.delta_cert,
            "route": self.route,
            "provenance": self.provenance,
            "checks": self.checks,
        }


def _require_certifiable(group: GroupSpec, lambda1: Lambda1Value, tol: Tolerances = TOLERANCES) -> Lambda1Value:
    """Valor cerrado de la familia; λ₁ declarado debe ser compatible con él."""
    if lambda1.kind is Lambda1Kind.ESTIMATE:
        raise PolicyError("las estimaciones de lambda_1 (Dirichlet) no pueden certificar")
    exact = lambda1_exact(group)
    if lambda1.kind is Lambda1Kind.EXACT and abs(lambda1.value - exact.value) > tol.delta_cert:
        raise PolicyError(f"lambda_1 exacto {lambda1.value:.6g} no es el de {group} ({exact.value:.6g})")
    if lambda1.value > exact.value + tol.delta_cert:
        raise PolicyError(f"la cota inferior {lambda1.value:.6g} supera lambda_1 de {group} ({exact.value:.6g})")
    return exact


def _decide(avg: float, lambda1: Lambda1Value, exact: Lambda1Value, tol: Tolerances, route: str,
            provenance: dict, checks: dict | None = None) -> CertificateReport:
    margin = lambda1.value / 2.0 - avg
    delta = tol.delta_cert + tol.tau_int
    # grupos amenables (λ₁ = 0) nunca certifican
    certified = lambda1.certifiable and exact.value > 0 and lambda1.value > 0 and margin > delta
    verdict = Verdict.CERTIFIED if certified else Verdict.INCONCLUSIVE
    logger.info("certificado %s: avg_h_sq=%.6g lambda1=%.6g margen=%.6g -> %s",
                route, avg, lambda1.value, margin, verdict.value)
    return CertificateReport(verdict=verdict, avg_h_sq=avg, lambda1=lambda1, margin=margin,
                             delta_cert=delta, route=route, provenance=provenance, checks=checks or {})


def _provenance(action: ActionSpec, nu: GridMeasure, tol: Tolerances) -> dict:
    return {
        "group": action.group.to_dict(),
        "action": action.describe(),
        "measure": nu.describe(),
        "N": action.grid_size,
        "tolerances": tol.as_dict(),
    }


def certify_hellinger(action: ActionSpec, nu: GridMeasure, lambda1: Lambda1Value,
                      tol: Tolerances = TOLERANCES) -> CertificateReport:
    exact = _require_certifiable(action.group, lambda1, tol)
    avg = avg_hellinger_sq(action, nu)
    return _decide(avg, lambda1, exact, tol, "hellinger", _provenance(action, nu, tol))


def generator_derivative_avg(action: ActionSpec) -> float:
    """1 − (1/#S) Σ_s ∫ √Dφ_s dλ"""
    leb = lebesgue(action.grid_size)
    gens = action.group.generators
    beta = float(np.mean([integrate(np.sqrt(action.generator(s).deriv), leb) for s in gens]))
    return max(1.0 - beta, 0.0)


def certify_generator_derivative(action: ActionSpec, lambda1: Lambda1Value,
                                 tol: Tolerances = TOLERANCES) -> CertificateReport:
    """Caso ν = Lebesgue, con la ruta de Hellinger como verificación cruzada."""
    exact = _require_certifiable(action.group, lambda1, tol)
    leb = lebesgue(action.grid_size)
    avg = generator_derivative_avg(action)
    via_hellinger = avg_hellinger_sq(action, leb, cross_check=False)
    gap = abs(avg - via_hellinger)
    if gap > ROUTE_AGREEMENT:
        logger.warning("derivadas y Hellinger difieren en %.3e", gap)
    checks = {"hellinger_route": via_hellinger, "route_gap": gap, "routes_agree": gap <= ROUTE_AGREEMENT}
    return _decide(avg, lambda1, exact, tol, "generator_derivative", _provenance(action, leb, tol), checks)


@dataclass(frozen=True)
class SweepRow:
    a: float
    avg_h_sq: float
    margin: float
    verdict: Verdict


def margin_sweep(group: GroupSpec, thetas: Sequence[float], amplitudes: Sequence[float], grid_size: int,
                 lambda1: Lambda1Value, tol: Tolerances = TOLERANCES) -> list[SweepRow]:
    """Certifica la acción perturbada para cada amplitud a; se informa, no se interpreta."""
    _require_certifiable(group, lambda1, tol)
    leb = lebesgue(grid_size)
    rows = []
    for a in amplitudes:
        report = certify_hellinger(sine_action(group, thetas, a, grid_size), leb, lambda1, tol)
        rows.append(SweepRow(a=float(a), avg_h_sq=report.avg_h_sq, margin=report.margin, verdict=report.verdict))
    return rows
