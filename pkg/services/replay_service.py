# services/replay_service.py
"""
Reproduce la cadena de desigualdades sobre un testigo concreto:
ψ_g = <π_g ξ, ξ>, matriz [ψ(g⁻¹h)] en B_R, raíz cuadrada Q, η = columna en e,
Rayleigh de η frente a λ₁. Nunca emite veredictos.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from circle.actions import ActionSpec
from config import TOLERANCES, Tolerances
from errors import InputError, NumericError
from groups.balls import ball
from groups.kernels import Kernel
from groups.words import Word, inv, mul
from hilbert.vectors import ModuleVector, apply_pi, scalar_inner
from hilbert.witnesses import WitnessReport, verify_witness
from measures.grid import GridMeasure, integrate
from measures.hellinger import beta as beta_of
from measures.radon_nikodym import radon_nikodym
from spectral.laplacian import Lambda1Value, lambda1_exact, rayleigh_quotient

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReplayReport:
    refused: bool
    reason: str | None = None
    radius: int | None = None
    witness: WitnessReport | None = None
    psi: Kernel | None = None
    psi_min_eigenvalue: float | None = None
    eta: Kernel | None = None
    eta_norm: float | None = None
    eta_overlaps: dict[str, float] = field(default_factory=dict)
    tau_trunc: float | None = None
    beta: float | None = None
    beta_bound: float | None = None
    rigorous_bound: float | None = None
    mean_psi_s: float | None = None
    rayleigh: float | None = None
    lambda1: Lambda1Value | None = None
    avg_h_sq: float | None = None
    chain_holds: bool | None = None
    contrapositive_holds: bool | None = None

    @property
    def contradiction_demonstrated(self) -> bool:
        """La desigualdad Rayleigh >= λ₁ se exhibe sobre los datos."""
        return bool(not self.refused and self.rayleigh >= self.lambda1.value - 1e-9)

    def to_dict(self) -> dict:
        if self.refused:
            return {"refused": True, "reason": self.reason}
        return {
            "refused": False,
            "radius": self.radius,
            "witness": self.witness.to_dict(),
            "psi": {str(g): self.psi[g] for g in self.psi.support},
            "psi_min_eigenvalue": self.psi_min_eigenvalue,
            "eta_norm": self.eta_norm,
            "eta_overlaps": self.eta_overlaps,
            "tau_trunc": self.tau_trunc,
            "beta": self.beta,
            "beta_times_one_minus_eps": self.beta_bound,
            "rigorous_lower_bound": self.rigorous_bound,
            "mean_psi_s": self.mean_psi_s,
            "rayleigh": self.rayleigh,
            "lambda1": self.lambda1.to_dict(),
            "avg_h_sq": self.avg_h_sq,
            "flags": {
                "chain_holds": self.chain_holds,
                "contrapositive_holds": self.contrapositive_holds,
                "CONTRADICTION_DEMONSTRATED": self.contradiction_demonstrated,
            },
        }


def psi_support(xi: ModuleVector) -> set[Word]:
    """{h k⁻¹ : h, k en supp ξ}; fuera de aquí ψ se anula."""
    words = list(xi.entries)
    return {mul(h, inv(k)) for h in words for k in words}


def positive_definite_function(xi: ModuleVector, action: ActionSpec, nu: GridMeasure) -> Kernel:
    """ψ_g = <π_g ξ, ξ>, simetrizada en g y g⁻¹."""
    raw = {g: scalar_inner(apply_pi(action, nu, g, xi), xi, nu) for g in psi_support(xi)}
    return Kernel(xi.spec, {g: 0.5 * (v + raw[inv(g)]) for g, v in raw.items()})


def replay_theorem3(xi: ModuleVector, action: ActionSpec, nu: GridMeasure, radius: int,
                    lambda1: Lambda1Value | None = None, tol: Tolerances = TOLERANCES) -> ReplayReport:
    witness = verify_witness(xi, action, 1.0, tol)
    if not witness.nonnegative:
        return ReplayReport(refused=True, reason="el testigo tiene valores negativos (falla (a))")
    if not witness.unit:
        return ReplayReport(refused=True, reason=f"<ξ,ξ> difiere de 1_X en {witness.unit_defect:.3g} (falla (b))")

    spec = action.group
    lambda1 = lambda1_exact(spec) if lambda1 is None else lambda1
    psi = positive_definite_function(xi, action, nu)
    support_r = max(g.length for g in psi.values)
    if radius < support_r:
        raise InputError(f"R={radius} es menor que el radio del soporte de ψ ({support_r})", "/radius")

    b = ball(spec, radius)
    n = len(b)
    m = np.zeros((n, n))
    for i, g in enumerate(b.elements):
        for k, v in psi.values.items():
            j = b.index.get(mul(g, k))
            if j is not None:
                m[i, j] = v
    m = 0.5 * (m + m.T)
    w, vecs = scipy.linalg.eigh(m)
    min_eig = float(w[0])
    if min_eig < -tol.psd:
        raise NumericError(f"la matriz de ψ no es semidefinida positiva (mín {min_eig:.3e}); "
                           "la cuadratura es demasiado gruesa", abs(min_eig))
    q = (vecs * np.sqrt(np.clip(w, 0.0, None))) @ vecs.T
    eta = Kernel(spec, {g: float(q[i, 0]) for i, g in enumerate(b.elements) if q[i, 0] != 0.0})
    eta_norm = eta.norm()

    gens = spec.generator_words()
    overlaps = {s.letters[0]: eta.inner(eta.translate(s)) for s in gens}
    tau_trunc = max(abs(overlaps[s.letters[0]] - psi[s]) for s in gens)
    rayleigh = rayleigh_quotient(eta)

    beta = beta_of(action, nu)
    eps = witness.defect
    rigorous = float(np.mean([
        (1.0 - witness.generator_defects[s.letters[0]]) * integrate(np.sqrt(radon_nikodym(action, nu, s)), nu)
        for s in gens
    ]))
    mean_psi_s = float(np.mean([psi[s] for s in gens]))
    avg_h_sq = max(1.0 - beta, 0.0)
    chain = rigorous <= mean_psi_s + tol.tau_unitary
    contra = 1.0 - mean_psi_s >= (lambda1.value - 2.0 * avg_h_sq) / 2.0 - tau_trunc - tol.tau_unitary

    logger.info("replay R=%d |B_R|=%d: mín autovalor %.3e, τ_trunc %.3e, Rayleigh %.6g",
                radius, n, min_eig, tau_trunc, rayleigh)
    return ReplayReport(
        refused=False,
        radius=radius,
        witness=witness,
        psi=psi,
        psi_min_eigenvalue=min_eig,
        eta=eta,
        eta_norm=eta_norm,
        eta_overlaps=overlaps,
        tau_trunc=tau_trunc,
        beta=beta,
        beta_bound=beta * (1.0 - eps),
        rigorous_bound=rigorous,
        mean_psi_s=mean_psi_s,
        rayleigh=rayleigh,
        lambda1=lambda1,
        avg_h_sq=avg_h_sq,
        chain_holds=chain,
        contrapositive_holds=contra,
    )
