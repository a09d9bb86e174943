# hilbert/vectors.py
"""
Vectores del módulo ℓ₂(G)⊗C(X): mapas de soporte finito palabra -> función en la malla,
con el producto C(X)-valuado <ξ,η>(x) = Σ_g ξ_g(x) η_g(x) y el producto escalar
∫ <ξ,η>(x) dν.
"""
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from circle.actions import ActionSpec, act
from circle.sampling import periodic_interp
from errors import InputError
from groups.kernels import Kernel
from groups.words import GroupSpec, Word, inv, mul
from measures.grid import GridFunction, GridMeasure, integrate
from measures.radon_nikodym import radon_nikodym, translate_function


@dataclass(frozen=True, eq=False)
class ModuleVector:
    spec: GroupSpec
    n: int
    entries: Mapping[Word, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for g, row in self.entries.items():
            if g.spec != self.spec:
                raise InputError(f"la palabra {g} no es de {self.spec}")
            row = np.array(row, dtype=float)
            if row.shape != (self.n,):
                raise InputError(f"la fila {g} tiene forma {row.shape}, se esperaba ({self.n},)")
            row.setflags(write=False)
            clean[g] = row
        object.__setattr__(self, "entries", clean)

    @property
    def support(self) -> tuple[Word, ...]:
        return tuple(sorted(self.entries, key=Word.sort_key))

    def __getitem__(self, g: Word) -> np.ndarray:
        row = self.entries.get(g)
        return np.zeros(self.n) if row is None else row

    def _check(self, other: "ModuleVector") -> None:
        if other.spec != self.spec or other.n != self.n:
            raise InputError(f"vectores incompatibles: {self.spec}/N={self.n} y {other.spec}/N={other.n}")

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        self._check(other)
        keys = set(self.entries) | set(other.entries)
        return ModuleVector(self.spec, self.n, {g: self[g] + other[g] for g in keys})

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + other.scaled(-1.0)

    def scaled(self, c: float) -> "ModuleVector":
        return ModuleVector(self.spec, self.n, {g: c * row for g, row in self.entries.items()})

    def multiply(self, f: GridFunction) -> "ModuleVector":
        """Producto entrada a entrada por una función de X."""
        return ModuleVector(self.spec, self.n, {g: row * f for g, row in self.entries.items()})

    @classmethod
    def from_kernel(cls, k: Kernel, n: int) -> "ModuleVector":
        """k ⊗ 1_X"""
        return cls(k.spec, n, {g: np.full(n, v) for g, v in k.values.items()})


def module_inner(xi: ModuleVector, eta: ModuleVector) -> GridFunction:
    xi._check(eta)
    out = np.zeros(xi.n)
    for g in set(xi.entries) & set(eta.entries):
        out += xi.entries[g] * eta.entries[g]
    return out


def scalar_inner(xi: ModuleVector, eta: ModuleVector, nu: GridMeasure) -> float:
    return integrate(module_inner(xi, eta), nu)


def _is_constant(row: np.ndarray) -> bool:
    return bool(np.all(row == row[0]))


def apply_L(action: ActionSpec, g: Word, xi: ModuleVector) -> ModuleVector:
    """(L_g ξ)_h(x) = ξ_{g⁻¹h}(Φ_{g⁻¹}x)"""
    if xi.spec != action.group or xi.n != action.grid_size:
        raise InputError("el vector y la acción no comparten grupo o malla")
    if g.is_identity:
        return xi
    moved = act(action, inv(g)).lift
    out = {}
    for k, row in xi.entries.items():
        # filas constantes no se interpolan
        out[mul(g, k)] = row.copy() if _is_constant(row) else periodic_interp(row, moved)
    return ModuleVector(xi.spec, xi.n, out)


def apply_pi(action: ActionSpec, nu: GridMeasure, g: Word, xi: ModuleVector) -> ModuleVector:
    """π_g = ρ_g^(1/2) L_g"""
    if g.is_identity:
        return xi
    return apply_L(action, g, xi).multiply(np.sqrt(radon_nikodym(action, nu, g)))


def isometry_defect(action: ActionSpec, g: Word, xi: ModuleVector) -> float:
    """max_x |<L_gξ, L_gξ>(x) − <ξ,ξ>(Φ_{g⁻¹}x)|"""
    lg = apply_L(action, g, xi)
    return float(np.max(np.abs(module_inner(lg, lg) - translate_function(action, g, module_inner(xi, xi)))))


def unitarity_defect(action: ActionSpec, nu: GridMeasure, g: Word, xi: ModuleVector,
                     eta: ModuleVector | None = None) -> float:
    eta = xi if eta is None else eta
    before = scalar_inner(xi, eta, nu)
    after = scalar_inner(apply_pi(action, nu, g, xi), apply_pi(action, nu, g, eta), nu)
    return abs(after - before)


def homomorphism_defect(action: ActionSpec, nu: GridMeasure, g: Word, h: Word, xi: ModuleVector) -> float:
    """‖π_{gh}ξ − π_g π_h ξ‖ en la norma de ν."""
    diff = apply_pi(action, nu, mul(g, h), xi) - apply_pi(action, nu, g, apply_pi(action, nu, h, xi))
    return float(np.sqrt(max(scalar_inner(diff, diff, nu), 0.0)))
