# measures/grid.py
import logging
from dataclasses import dataclass

import numpy as np

from circle.diffeos import CircleDiffeo, invert
from circle.sampling import grid_points, periodic_interp
from config import TOLERANCES, Tolerances
from errors import InputError, NumericError, UnsupportedMeasureError

logger = logging.getLogger(__name__)

# valores en los N puntos medios de la malla
GridFunction = np.ndarray

# masa aceptada en la entrada; la densidad guardada queda a 1e-9 de masa 1
MASS_TOL = 1e-6
RENORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GridMeasure:
    """Medida de probabilidad en S¹ dada por su densidad respecto de Lebesgue."""

    density: np.ndarray
    label: str = "density"

    def __post_init__(self):
        d = np.array(self.density, dtype=float)
        if d.ndim != 1 or d.shape[0] < 2:
            raise InputError("la densidad debe ser un vector de al menos 2 valores", "/measure/values")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise InputError("la densidad debe ser finita y no negativa", "/measure/values")
        mass = float(d.mean())
        if abs(mass - 1.0) > MASS_TOL:
            raise InputError(f"la densidad no tiene masa 1 (masa {mass:.9g}); use GridMeasure.from_values",
                             "/measure/values")
        if abs(mass - 1.0) > RENORM_TOL:
            d = d / mass
        d.setflags(write=False)
        object.__setattr__(self, "density", d)

    @property
    def n(self) -> int:
        return self.density.shape[0]

    @property
    def is_positive(self) -> bool:
        return bool(np.all(self.density > 0))

    def require_positive(self) -> None:
        if not self.is_positive:
            raise UnsupportedMeasureError(
                f"la densidad de {self.label} se anula en {int(np.sum(self.density <= 0))} puntos de la malla")

    @classmethod
    def from_values(cls, values, label: str = "density") -> "GridMeasure":
        """Renormaliza a masa 1."""
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or not np.all(np.isfinite(v)) or np.any(v < 0):
            raise InputError("la densidad debe ser finita y no negativa", "/measure/values")
        mass = v.mean()
        if mass <= 0:
            raise InputError("la densidad tiene masa cero", "/measure/values")
        return cls(v / mass, label=label)

    def describe(self) -> dict:
        return {"kind": self.label, "N": self.n}


def lebesgue(n: int) -> GridMeasure:
    return GridMeasure(np.ones(n), label="lebesgue")


def von_mises(n: int, center: float = 0.5, kappa: float = 2.0) -> GridMeasure:
    """Densidad suave y positiva exp(kappa cos 2π(x - c)), renormalizada."""
    x = grid_points(n)
    return GridMeasure.from_values(np.exp(kappa * np.cos(2 * np.pi * (x - center))), label="von_mises")


def check_same_grid(*items) -> int:
    sizes = {it.shape[-1] if isinstance(it, np.ndarray) else it.n for it in items}
    if len(sizes) != 1:
        raise InputError(f"mallas distintas: {sorted(sizes)}")
    return sizes.pop()


def integrate(f: GridFunction, nu: GridMeasure) -> float:
    """Regla del punto medio para ∫ f dν."""
    f = np.asarray(f, dtype=float)
    check_same_grid(f, nu)
    return float(np.mean(f * nu.density))


def pushforward(nu: GridMeasure, phi: CircleDiffeo, tol: Tolerances = TOLERANCES) -> GridMeasure:
    """φ_*ν: densidad p(φ⁻¹y)·Dφ⁻¹(y); la deriva de masa se mide antes de renormalizar."""
    check_same_grid(nu, phi)
    phi_inv = invert(phi)
    out = periodic_interp(nu.density, phi_inv.lift) * phi_inv.deriv
    mass = float(out.mean())
    if abs(mass - 1.0) > tol.tau_int:
        raise NumericError(f"la imagen de la medida perdió masa: {mass:.12g}", abs(mass - 1.0))
    return GridMeasure(out, label=f"pushforward({nu.label})")
