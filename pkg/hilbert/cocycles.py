# hilbert/cocycles.py
"""
Cociclos de coborde b_g = ⊕_n (L_g ξ_n − ξ_n) sobre una familia de testigos con defecto
<= 1/n², sus cotas de crecimiento 2φ(|g|) <= <b_g,b_g> <= K|g|² y las versiones
ponderadas por ρ̲_R o ρ̄_R.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from circle.actions import ActionSpec
from config import TOLERANCES, Tolerances
from errors import InputError
from groups.balls import ball
from groups.words import Word, distance, exponents, mul
from hilbert.vectors import ModuleVector, apply_L, apply_pi, module_inner
from hilbert.witnesses import build_folner_witness, verify_witness
from measures.grid import GridFunction, GridMeasure, integrate
from measures.radon_nikodym import radon_nikodym

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = 8

Mode = Literal["inf", "sup"]


@dataclass(frozen=True, eq=False)
class CocycleLevel:
    n: int
    witness: ModuleVector
    radius: int
    defect: float


@dataclass(frozen=True, eq=False)
class CocycleFamily:
    action: ActionSpec
    levels: tuple[CocycleLevel, ...]
    _constants: dict = field(default_factory=dict, repr=False)

    @property
    def count(self) -> int:
        return len(self.levels)

    def phi(self, length: int) -> int:
        """φ(t) = #{n : t >= R_n}"""
        return sum(1 for lv in self.levels if length >= lv.radius)

    def describe(self) -> dict:
        return {"levels": [{"n": lv.n, "radius": lv.radius, "support": len(lv.witness.entries),
                            "defect": lv.defect} for lv in self.levels]}


def support_radius(xi: ModuleVector) -> int:
    """Diámetro del soporte + 1: <ξ, L_g ξ> = 0 si |g| >= R."""
    words = list(xi.entries)
    if not xi.spec.is_free:
        pts = np.array([exponents(g) for g in words])
        # diámetro l1 por proyecciones con signos
        diam = max(int(np.ptp(pts @ np.array(signs))) for signs in itertools.product((1, -1), repeat=xi.spec.rank))
        return diam + 1
    return max((distance(g, h) for g in words for h in words), default=0) + 1


def build_cocycle_family(action: ActionSpec, witnesses: Sequence[ModuleVector],
                         tol: Tolerances = TOLERANCES) -> CocycleFamily:
    """Verifica cada nivel: (a), (b) y defecto <= 1/n²."""
    levels = []
    for n, xi in enumerate(witnesses, start=1):
        report = verify_witness(xi, action, 1.0 / n**2, tol)
        if not report.valid or report.defect > 1.0 / n**2 + tol.witness_unit:
            raise InputError(f"nivel {n} no verificado: defecto {report.defect:.6g} > 1/n² = {1.0 / n**2:.6g} "
                             f"o falla (a)/(b)", "/params/levels")
        levels.append(CocycleLevel(n=n, witness=xi, radius=support_radius(xi), defect=report.defect))
    logger.debug("familia de cociclos: %d niveles, radios %s", len(levels), [lv.radius for lv in levels])
    return CocycleFamily(action=action, levels=tuple(levels))


def folner_family(action: ActionSpec, count: int = DEFAULT_LEVELS) -> CocycleFamily:
    """Nivel n: caja de lado n² en Z^d, defecto exacto 1/n²."""
    if count < 1:
        raise InputError(f"se necesita al menos un nivel: {count}", "/params/levels")
    witnesses = [build_folner_witness(action.group, n * n, action.grid_size) for n in range(1, count + 1)]
    return build_cocycle_family(action, witnesses)


def build_coboundary_cocycle(family: CocycleFamily, g: Word) -> tuple[ModuleVector, ...]:
    """b_g nivel por nivel."""
    return tuple(apply_L(family.action, g, lv.witness) - lv.witness for lv in family.levels)


def cocycle_norm_sq(family: CocycleFamily, g: Word) -> GridFunction:
    """<b_g, b_g>_{C(X)} sumado sobre niveles."""
    return sum((module_inner(b, b) for b in build_coboundary_cocycle(family, g)), np.zeros(family.action.grid_size))


def _max_abs(v: ModuleVector) -> float:
    return max((float(np.max(np.abs(row))) for row in v.entries.values()), default=0.0)


def check_cocycle(family: CocycleFamily, g: Word, h: Word) -> float:
    """max |b_{gh} − (L_g b_h + b_g)| sobre niveles, soportes y malla."""
    bg = build_coboundary_cocycle(family, g)
    bh = build_coboundary_cocycle(family, h)
    bgh = build_coboundary_cocycle(family, mul(g, h))
    return max(_max_abs(x - (apply_L(family.action, g, y) + z)) for x, y, z in zip(bgh, bh, bg))


def upper_constant(family: CocycleFamily) -> float:
    """K = Σ_n max_s sup_x <b_s, b_s>; se calcula una vez por familia."""
    cached = family._constants.get("K")
    if cached is not None:
        return cached
    gens = family.action.group.generator_words()
    total = 0.0
    for lv in family.levels:
        worst = 0.0
        for s in gens:
            b = apply_L(family.action, s, lv.witness) - lv.witness
            worst = max(worst, float(np.max(module_inner(b, b))))
        total += worst
    family._constants["K"] = total
    return total


@dataclass(frozen=True)
class CocycleBounds:
    lower: float
    upper: float
    pointwise: GridFunction

    @property
    def holds(self) -> bool:
        slack = 1e-9 * max(1.0, self.upper)
        return bool(np.all(self.pointwise >= self.lower - slack) and np.all(self.pointwise <= self.upper + slack))


def cocycle_bounds(family: CocycleFamily, g: Word) -> CocycleBounds:
    return CocycleBounds(
        lower=2.0 * family.phi(g.length),
        upper=upper_constant(family) * g.length**2,
        pointwise=cocycle_norm_sq(family, g),
    )


def _weight(action: ActionSpec, nu: GridMeasure, words, mode: Mode) -> GridFunction:
    rows = np.array([radon_nikodym(action, nu, k) for k in words])
    if mode == "inf":
        return rows.min(axis=0)
    if mode == "sup":
        return rows.max(axis=0)
    raise InputError(f"modo desconocido: {mode!r}", "/params/mode")


def weight_cocycle(family: CocycleFamily, nu: GridMeasure, radius: int, mode: Mode, g: Word) -> float:
    """‖ρ^(1/2) b_g‖² = ∫ ρ̲_R <b_g,b_g> dν (o ρ̄_R)."""
    w = _weight(family.action, nu, ball(family.action.group, radius).elements, mode)
    return integrate(w * cocycle_norm_sq(family, g), nu)


@dataclass(frozen=True)
class WeightedSandwich:
    lower: float
    value: float
    upper: float
    weight_integral: float

    @property
    def holds(self) -> bool:
        slack = 1e-9 * max(1.0, self.upper)
        return self.lower - slack <= self.value <= self.upper + slack


def weight_sandwich(family: CocycleFamily, nu: GridMeasure, radius: int, mode: Mode, g: Word) -> WeightedSandwich:
    """2φ(|g|)·I <= ‖ρ^(1/2) b_g‖² <= K|g|²·I con I = ∫ ρ_R dν."""
    w = _weight(family.action, nu, ball(family.action.group, radius).elements, mode)
    i = integrate(w, nu)
    bounds = cocycle_bounds(family, g)
    return WeightedSandwich(lower=bounds.lower * i, value=integrate(w * bounds.pointwise, nu),
                            upper=bounds.upper * i, weight_integral=i)


def weighted_cocycle_defect(family: CocycleFamily, nu: GridMeasure, radius: int, mode: Mode,
                            g: Word, h: Word) -> float:
    """
    U_g b̲_h + b̲_g frente a b̲_{gh} con U_g = π_g; el peso en h se toma sobre B_R
    y en g y gh sobre g·B_R, donde la identidad es exacta.
    """
    action = family.action
    elements = ball(action.group, radius).elements
    w_h = np.sqrt(_weight(action, nu, elements, mode))
    w_g = np.sqrt(_weight(action, nu, [mul(g, k) for k in elements], mode))
    bg = build_coboundary_cocycle(family, g)
    bh = build_coboundary_cocycle(family, h)
    bgh = build_coboundary_cocycle(family, mul(g, h))
    worst = 0.0
    for x, y, z in zip(bgh, bh, bg):
        lhs = apply_pi(action, nu, g, y.multiply(w_h)) + z.multiply(w_g)
        worst = max(worst, _max_abs(x.multiply(w_g) - lhs))
    return worst
