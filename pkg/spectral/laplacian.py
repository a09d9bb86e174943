# spectral/laplacian.py
"""
lambda_1: fondo del espectro del laplaciano promediado I - P en el grafo de Cayley,
con P = (1/#S) sum_s lambda(s).

rayleigh_quotient conserva la normalización por aristas
(1/#S) sum_{s,g} |f_g - f_{s⁻¹g}|^2 / sum_g |f_g|^2, que vale 2<f,(I-P)f>/<f,f>;
por eso rayleigh_quotient(f) >= 2*lambda_1 >= lambda_1.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from math import sqrt
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from config import TOLERANCES, Tolerances
from errors import CapabilityError, InputError, NumericError
from groups.balls import CayleyBall, ball
from groups.kernels import Kernel
from groups.words import FREE, FREE_ABELIAN, GroupSpec, Word, mul

logger = logging.getLogger(__name__)

DENSE_LIMIT = 1500


class Lambda1Kind(str, Enum):
    EXACT = "exact_closed_form"
    LOWER_BOUND = "certified_lower_bound"
    ESTIMATE = "estimate_from_above"


@dataclass(frozen=True)
class Lambda1Value:
    value: float
    kind: Lambda1Kind
    source: str | None = None
    radius: int | None = None

    def __post_init__(self):
        if not self.value >= 0:
            raise InputError(f"lambda_1 debe ser >= 0: {self.value}")
        if self.kind is Lambda1Kind.LOWER_BOUND and not self.source:
            raise InputError("una cota inferior certificada necesita procedencia (source)")
        if self.kind is Lambda1Kind.ESTIMATE and self.radius is None:
            raise InputError("una estimación de Dirichlet necesita el radio")

    @property
    def certifiable(self) -> bool:
        return self.kind in (Lambda1Kind.EXACT, Lambda1Kind.LOWER_BOUND)

    def to_dict(self) -> dict:
        out = {"value": self.value, "kind": self.kind.value}
        if self.source is not None:
            out["source"] = self.source
        if self.radius is not None:
            out["radius"] = self.radius
        return out


def lambda1_exact(spec: GroupSpec) -> Lambda1Value:
    if spec.family == FREE_ABELIAN:
        return Lambda1Value(0.0, Lambda1Kind.EXACT, source="amenable")
    if spec.family == FREE:
        k = spec.rank
        # radio espectral de Kesten: sqrt(2k-1)/k
        return Lambda1Value(1.0 - sqrt(2 * k - 1) / k, Lambda1Kind.EXACT, source="kesten")
    raise CapabilityError(f"sin valor cerrado de lambda_1 para {spec}")


def certified_lower_bound(value: float, source: str) -> Lambda1Value:
    return Lambda1Value(float(value), Lambda1Kind.LOWER_BOUND, source=source)


def generator_overlaps(f: Kernel) -> dict[str, float]:
    """<f, s·f> por generador."""
    return {s.letters[0]: f.inner(f.translate(s)) for s in f.spec.generator_words()}


def rayleigh_quotient(f: Kernel) -> float:
    if not f.values or f.is_zero():
        raise InputError("el cociente de Rayleigh no está definido para el núcleo cero")
    spec = f.spec
    total = 0.0
    for s in spec.generator_words():
        shifted = f.translate(s)
        for g in set(f.values) | set(shifted.values):
            total += (f[g] - shifted[g]) ** 2
    return total / spec.order / f.inner(f)


def normalized_rayleigh(f: Kernel) -> float:
    """<f,(I-P)f>/<f,f>, la cantidad que minimiza lambda1_dirichlet."""
    return rayleigh_quotient(f) / 2.0


def averaged_adjacency(b: CayleyBall) -> scipy.sparse.csr_matrix:
    """P restringido a la bola con frontera cero."""
    n, order = b.neighbors.shape
    rows = np.repeat(np.arange(n), order)
    cols = b.neighbors.ravel()
    keep = cols >= 0
    data = np.full(keep.sum(), 1.0 / order)
    return scipy.sparse.csr_matrix((data, (rows[keep], cols[keep])), shape=(n, n))


def _top_eigenpair(p: scipy.sparse.csr_matrix, tol: Tolerances) -> tuple[float, np.ndarray]:
    n = p.shape[0]
    if n <= DENSE_LIMIT:
        w, v = scipy.linalg.eigh(p.toarray())
        return float(w[-1]), v[:, -1]
    # v0 determinista y no radial
    v0 = 1.0 + 0.1 * np.random.default_rng(0).random(n)
    try:
        w, v = scipy.sparse.linalg.eigsh(p, k=1, which="LA", v0=v0, tol=0, maxiter=tol.eigen_maxiter)
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        if len(exc.eigenvalues):
            lam, vec = float(exc.eigenvalues[-1]), exc.eigenvectors[:, -1]
            residual = np.linalg.norm(p @ vec - lam * vec) / np.linalg.norm(vec)
        else:
            residual = float("nan")
        raise NumericError(f"eigsh no convergió en {tol.eigen_maxiter} iteraciones", residual) from exc
    return float(w[0]), v[:, 0]


def lambda1_dirichlet(spec: GroupSpec, radius: int, tol: Tolerances = TOLERANCES) -> Lambda1Value:
    if radius < 1:
        raise InputError(f"el radio de Dirichlet debe ser >= 1: {radius}")
    b = ball(spec, radius)
    p = averaged_adjacency(b)
    top, vec = _top_eigenpair(p, tol)
    lam = 1.0 - top
    # residuo de (I-P)v = lam v
    residual = np.linalg.norm((vec - p @ vec) - lam * vec) / np.linalg.norm(vec)
    logger.debug("dirichlet %s R=%d n=%d lambda=%.12f residuo=%.2e", spec, radius, len(b), lam, residual)
    if residual > tol.eigen_residual:
        raise NumericError(f"residuo de Dirichlet demasiado grande en R={radius}", residual)
    return Lambda1Value(max(lam, 0.0), Lambda1Kind.ESTIMATE, radius=radius)


def dirichlet_series(spec: GroupSpec, radii: Sequence[int], tol: Tolerances = TOLERANCES) -> list[Lambda1Value]:
    series = [lambda1_dirichlet(spec, r, tol) for r in sorted(radii)]
    for prev, cur in zip(series, series[1:]):
        if cur.value > prev.value + tol.eigen_residual:
            logger.warning("serie de Dirichlet no monótona: R=%d %.12f > R=%d %.12f",
                           cur.radius, cur.value, prev.radius, prev.value)
    return series


@dataclass(frozen=True)
class CheegerCandidate:
    set: frozenset[Word]
    boundary: int
    ratio: float


def cheeger_ratio(words: Iterable[Word], spec: GroupSpec) -> CheegerCandidate:
    """#{(g, s) : g en F, s·g fuera de F} / #F; cota superior de h."""
    f = frozenset(words)
    if not f:
        raise InputError("el conjunto de Cheeger no puede ser vacío")
    gens = spec.generator_words()
    boundary = sum(1 for g in f for s in gens if mul(s, g) not in f)
    return CheegerCandidate(set=f, boundary=boundary, ratio=boundary / len(f))
