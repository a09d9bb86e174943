# groups/kernels.py
from dataclasses import dataclass, field
from math import sqrt
from typing import Iterable, Mapping

import config
from errors import ResourceError
from groups.words import GroupSpec, Word, mul


@dataclass(frozen=True)
class Kernel:
    """Función real de soporte finito en el grupo (psi, eta, f, 1_e)."""

    spec: GroupSpec
    values: Mapping[Word, float] = field(default_factory=dict)

    @property
    def support(self) -> tuple[Word, ...]:
        return tuple(sorted(self.values, key=Word.sort_key))

    def __getitem__(self, g: Word) -> float:
        return self.values.get(g, 0.0)

    def __add__(self, other: "Kernel") -> "Kernel":
        out = dict(self.values)
        for g, v in other.values.items():
            out[g] = out.get(g, 0.0) + v
        return Kernel(self.spec, out)

    def scaled(self, c: float) -> "Kernel":
        return Kernel(self.spec, {g: c * v for g, v in self.values.items()})

    def inner(self, other: "Kernel") -> float:
        small, big = sorted((self, other), key=lambda k: len(k.values))
        return sum(v * big[g] for g, v in small.values.items())

    def norm(self) -> float:
        return sqrt(self.inner(self))

    def translate(self, g: Word) -> "Kernel":
        """(g·f)_h = f_{g⁻¹h}"""
        return Kernel(self.spec, {mul(g, h): v for h, v in self.values.items()})

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    @classmethod
    def delta(cls, g: Word, value: float = 1.0) -> "Kernel":
        return cls(g.spec, {g: value})

    @classmethod
    def indicator(cls, spec: GroupSpec, words: Iterable[Word], value: float = 1.0) -> "Kernel":
        return cls(spec, {g: value for g in words})


def convolve(p: Kernel, q: Kernel, cap: int | None = None) -> Kernel:
    """(p*q)(g) = sum_h p(h) q(h⁻¹g)"""
    cap = config.max_ball() if cap is None else cap
    if len(p.values) * len(q.values) > cap:
        raise ResourceError(f"convolución de {len(p.values)}x{len(q.values)} términos supera el tope {cap}")
    out: dict[Word, float] = {}
    for h, ph in p.values.items():
        for k, qk in q.values.items():
            g = mul(h, k)
            out[g] = out.get(g, 0.0) + ph * qk
    return Kernel(p.spec, out)
