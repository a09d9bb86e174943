# circle/diffeos.py
"""
Difeomorfismos del círculo que preservan orientación, muestreados en la malla de
puntos medios. Rotaciones, rotaciones perturbadas y sus inversas/composiciones
guardan además una evaluación cerrada (`exact`) que se usa fuera de la malla;
los difeomorfismos muestreados por el usuario se interpolan.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from math import pi
from typing import Callable

import numpy as np

from circle.sampling import circle_distance, grid_points, periodic_interp
from config import Tolerances
from errors import InputError, NumericError

logger = logging.getLogger(__name__)

NEWTON_STEPS = 60
NEWTON_TOL = 1e-13

# y -> (lift(y), Dφ(y))
Evaluator = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


class DiffeoKind(str, Enum):
    ROTATION = "rotation"
    SINE = "sine"
    INVERSE = "inverse"
    COMPOSITE = "composite"
    SAMPLED = "samples"


@dataclass(frozen=True, eq=False)
class CircleDiffeo:
    lift: np.ndarray
    deriv: np.ndarray
    kind: DiffeoKind
    params: dict = field(default_factory=dict)
    exact: Evaluator | None = field(default=None, repr=False)

    def __post_init__(self):
        lift = np.array(self.lift, dtype=float)
        deriv = np.array(self.deriv, dtype=float)
        if lift.ndim != 1 or lift.shape != deriv.shape:
            raise InputError(f"lift y deriv deben ser vectores del mismo largo: {lift.shape} vs {deriv.shape}")
        if not (np.all(np.isfinite(lift)) and np.all(np.isfinite(deriv))):
            raise InputError("lift/deriv con valores no finitos")
        if not np.all(deriv > 0):
            raise InputError(f"derivada no positiva (mín {deriv.min():.3g}): no es un difeomorfismo")
        steps = np.diff(np.append(lift, lift[0] + 1.0))
        if not np.all(steps > 0):
            raise InputError("el lift no es estrictamente creciente o no tiene grado 1")
        lift.setflags(write=False)
        deriv.setflags(write=False)
        object.__setattr__(self, "lift", lift)
        object.__setattr__(self, "deriv", deriv)

    @property
    def n(self) -> int:
        return self.lift.shape[0]

    @property
    def is_builtin(self) -> bool:
        return self.exact is not None

    @property
    def displacement(self) -> np.ndarray:
        return self.lift - grid_points(self.n)

    def evaluate(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(lift(y), Dφ(y)) en puntos arbitrarios."""
        y = np.asarray(y, dtype=float)
        if self.exact is not None:
            return self.exact(y)
        return periodic_interp(self.displacement, y) + y, periodic_interp(self.deriv, y)

    def lift_at(self, y: np.ndarray) -> np.ndarray:
        return self.evaluate(y)[0]

    def deriv_at(self, y: np.ndarray) -> np.ndarray:
        return self.evaluate(y)[1]

    def describe(self) -> dict:
        return {"kind": self.kind.value, **{k: v for k, v in self.params.items() if not k.startswith("_")}}


def _from_exact(n: int, kind: DiffeoKind, params: dict, exact: Evaluator) -> CircleDiffeo:
    lift, deriv = exact(grid_points(n))
    return CircleDiffeo(lift=lift, deriv=deriv, kind=kind, params=params, exact=exact)


def make_rotation(theta: float, n: int) -> CircleDiffeo:
    theta = float(theta)

    def exact(y):
        return y + theta, np.ones_like(y)

    return _from_exact(n, DiffeoKind.ROTATION, {"theta": theta}, exact)


def make_identity(n: int) -> CircleDiffeo:
    return make_rotation(0.0, n)


def make_sine_perturbed(theta: float, a: float, n: int) -> CircleDiffeo:
    """x -> x + theta + (a/2π) sin(2πx); Dφ = 1 + a cos(2πx)."""
    theta, a = float(theta), float(a)
    if not abs(a) < 1:
        raise InputError(f"|a| debe ser < 1 para tener un difeomorfismo: a={a}")
    if a == 0:
        return make_rotation(theta, n)

    def exact(y):
        return y + theta + a / (2 * pi) * np.sin(2 * pi * y), 1.0 + a * np.cos(2 * pi * y)

    return _from_exact(n, DiffeoKind.SINE, {"theta": theta, "a": a}, exact)


def from_samples(lift, deriv) -> CircleDiffeo:
    f = CircleDiffeo(lift=lift, deriv=deriv, kind=DiffeoKind.SAMPLED)
    # deriv frente a diferencias centradas del lift
    h = 1.0 / f.n
    disp = f.displacement
    fd = 1.0 + (np.roll(disp, -1) - np.roll(disp, 1)) / (2 * h)
    gap = float(np.max(np.abs(fd - f.deriv)))
    if gap > Tolerances.tau_diffeo(f.n):
        logger.warning("difeomorfismo muestreado: deriv difiere de las diferencias del lift en %.3g", gap)
    return f


def _check_same_grid(f: CircleDiffeo, g: CircleDiffeo) -> None:
    if f.n != g.n:
        raise InputError(f"mallas distintas: {f.n} y {g.n}")


def compose(f: CircleDiffeo, g: CircleDiffeo) -> CircleDiffeo:
    """f∘g con regla de la cadena."""
    _check_same_grid(f, g)
    if f.kind is DiffeoKind.ROTATION and g.kind is DiffeoKind.ROTATION:
        return make_rotation(f.params["theta"] + g.params["theta"], f.n)
    fl, fd = f.evaluate(g.lift)
    exact = None
    if f.exact is not None and g.exact is not None:
        f_exact, g_exact = f.exact, g.exact

        def exact(y):
            gl, gd = g_exact(y)
            fl_, fd_ = f_exact(gl)
            return fl_, fd_ * gd

    return CircleDiffeo(lift=fl, deriv=fd * g.deriv, kind=DiffeoKind.COMPOSITE, exact=exact)


def _sampled_inverse(lift: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Inversa monótona lineal a trozos por búsqueda en el lift extendido."""
    n = lift.shape[0]
    x = grid_points(n)
    big_l = np.concatenate([lift - 1.0, lift, lift + 1.0])
    big_x = np.concatenate([x - 1.0, x, x + 1.0])
    if not np.all(np.diff(big_l) > 0):
        raise NumericError("no se puede invertir: lift no monótono")
    # lleva y a [lift[0], lift[0] + 1)
    shift = np.floor(np.asarray(y) - lift[0])
    target = np.asarray(y) - shift
    pos = np.searchsorted(big_l, target)
    if np.any(pos <= 0) or np.any(pos >= big_l.shape[0]):
        raise NumericError("búsqueda de raíz fuera del rango del lift")
    return np.interp(target, big_l, big_x) + shift


def _newton_inverse(f_exact: Evaluator, y: np.ndarray, start: np.ndarray) -> np.ndarray:
    x = start.copy()
    for _ in range(NEWTON_STEPS):
        fl, fd = f_exact(x)
        step = (fl - y) / fd
        x = x - step
        if np.max(np.abs(step), initial=0.0) <= NEWTON_TOL:
            return x
    residual = float(np.max(np.abs(f_exact(x)[0] - y), initial=0.0))
    if residual > 1e-10:
        raise NumericError("Newton no convergió al invertir el difeomorfismo", residual)
    return x


def invert(f: CircleDiffeo) -> CircleDiffeo:
    if f.kind is DiffeoKind.ROTATION:
        return make_rotation(-f.params["theta"], f.n)
    if f.kind is DiffeoKind.INVERSE and "_of" in f.params:
        return f.params["_of"]

    x = grid_points(f.n)
    if f.exact is None:
        xs = _sampled_inverse(f.lift, x)
        return CircleDiffeo(lift=xs, deriv=1.0 / f.deriv_at(xs), kind=DiffeoKind.INVERSE)

    f_exact, f_lift = f.exact, f.lift

    def exact(y):
        xs = _newton_inverse(f_exact, y, _sampled_inverse(f_lift, y))
        return xs, 1.0 / f_exact(xs)[1]

    inv = _from_exact(f.n, DiffeoKind.INVERSE, {"of": f.describe(), "_of": f}, exact)
    logger.debug("inversa de %s calculada con Newton (N=%d)", f.kind.value, f.n)
    return inv


def c1_distance(f: CircleDiffeo, g: CircleDiffeo) -> float:
    """max_x d_S¹(f(x), g(x)) + max_x |Df(x) - Dg(x)| sobre la malla."""
    _check_same_grid(f, g)
    return float(np.max(circle_distance(f.lift, g.lift)) + np.max(np.abs(f.deriv - g.deriv)))


def c1_distance_at(x, f: CircleDiffeo, g: CircleDiffeo) -> np.ndarray | float:
    """d_x(f, g); acepta un punto o un arreglo de puntos."""
    _check_same_grid(f, g)
    fl, fd = f.evaluate(np.asarray(x, dtype=float))
    gl, gd = g.evaluate(np.asarray(x, dtype=float))
    out = circle_distance(fl, gl) + np.abs(fd - gd)
    return float(out) if np.ndim(out) == 0 else out
