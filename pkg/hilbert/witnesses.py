# hilbert/witnesses.py
"""
Testigos de amenabilidad: ξ con (a) ξ_g >= 0, (b) <ξ,ξ> = 1_X y
(c) sup_x (1 − (1/#S) Σ_s <ξ, L_sξ>(x)) <= ε.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from circle.actions import ActionSpec
from config import TOLERANCES, Tolerances
from errors import CapabilityError, InputError
from groups.kernels import Kernel
from groups.words import GroupSpec, Word, from_exponents, mul
from hilbert.vectors import ModuleVector, apply_L, module_inner
from measures.grid import GridMeasure, integrate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessReport:
    nonnegative: bool
    unit: bool
    unit_defect: float
    defect: float
    generator_defects: dict[str, float]
    epsilon: float
    within_epsilon: bool

    @property
    def valid(self) -> bool:
        """(a) y (b); (c) depende de ε."""
        return self.nonnegative and self.unit

    @property
    def is_witness(self) -> bool:
        return self.valid and self.within_epsilon

    def to_dict(self) -> dict:
        return {
            "a_nonnegative": self.nonnegative,
            "b_unit": self.unit,
            "b_unit_defect": self.unit_defect,
            "c_within_epsilon": self.within_epsilon,
            "defect": self.defect,
            "epsilon": self.epsilon,
            "generator_defects": self.generator_defects,
        }


def overlaps(xi: ModuleVector, action: ActionSpec) -> dict[str, np.ndarray]:
    """<ξ, L_sξ>(x) por generador."""
    return {s.letters[0]: module_inner(xi, apply_L(action, s, xi)) for s in action.group.generator_words()}


def verify_witness(xi: ModuleVector, action: ActionSpec, epsilon: float,
                   tol: Tolerances = TOLERANCES) -> WitnessReport:
    nonneg = all(bool(np.all(row >= 0)) for row in xi.entries.values())
    unit_defect = float(np.max(np.abs(module_inner(xi, xi) - 1.0)))
    ov = overlaps(xi, action)
    mean_overlap = np.mean(list(ov.values()), axis=0)
    defect = float(np.max(1.0 - mean_overlap))
    per_gen = {s: float(np.max(1.0 - o)) for s, o in ov.items()}
    report = WitnessReport(
        nonnegative=nonneg,
        unit=unit_defect <= tol.witness_unit,
        unit_defect=unit_defect,
        defect=defect,
        generator_defects=per_gen,
        epsilon=float(epsilon),
        within_epsilon=defect <= epsilon,
    )
    logger.debug("testigo |supp|=%d defecto=%.6g (a)=%s (b)=%s", len(xi.entries), defect, nonneg, report.unit)
    return report


def box(spec: GroupSpec, n: int) -> list[Word]:
    """{0, ..., n-1}^d en Z^d."""
    if spec.is_free:
        raise CapabilityError(f"no hay conjuntos de Følner en {spec}")
    if n < 1:
        raise InputError(f"el lado de la caja debe ser >= 1: {n}")
    return [from_exponents(spec, v) for v in itertools.product(range(n), repeat=spec.rank)]


def build_folner_witness(spec: GroupSpec, n: int, grid_size: int) -> ModuleVector:
    """ξ = |F|^(-1/2) 1_F ⊗ 1_X con F la caja de lado n."""
    cells = box(spec, n)
    value = float(n) ** (-spec.rank / 2)
    return ModuleVector(spec, grid_size, {g: np.full(grid_size, value) for g in cells})


def point_witness(spec: GroupSpec, grid_size: int) -> ModuleVector:
    """ξ_e ≡ 1."""
    return ModuleVector(spec, grid_size, {spec.identity(): np.ones(grid_size)})


def overlap_defect(support: Iterable[Word], spec: GroupSpec) -> Fraction:
    """1 − (1/#S) Σ_s |F ∩ sF| / |F| en aritmética exacta."""
    f = frozenset(support)
    if not f:
        raise InputError("soporte vacío")
    gens = spec.generator_words()
    hits = sum(1 for s in gens for g in f if mul(s, g) in f)
    return 1 - Fraction(hits, len(gens) * len(f))


def average_witness(xi: ModuleVector, nu: GridMeasure) -> Kernel:
    """ξ̃_g = (∫ ξ_g² dν)^(1/2)"""
    return Kernel(xi.spec, {g: float(np.sqrt(integrate(row**2, nu))) for g, row in xi.entries.items()})
