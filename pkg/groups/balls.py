# groups/balls.py
import logging
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterator, Mapping

import numpy as np

import config
from errors import InputError, ResourceError
from groups.words import GroupSpec, Word, mul, reduce

logger = logging.getLogger(__name__)


def sphere_size(spec: GroupSpec, r: int) -> int:
    if r == 0:
        return 1
    if spec.is_free:
        k = spec.rank
        return 2 * k * (2 * k - 1) ** (r - 1)
    return ball_size(spec, r) - ball_size(spec, r - 1)


def ball_size(spec: GroupSpec, radius: int) -> int:
    if radius < 0:
        raise InputError(f"radio negativo: {radius}")
    if spec.is_free:
        return sum(sphere_size(spec, r) for r in range(radius + 1))
    # puntos de Z^d con norma l1 <= R
    d = spec.rank
    return sum(2**i * comb(d, i) * comb(radius, i) for i in range(min(d, radius) + 1))


@dataclass(frozen=True)
class CayleyBall:
    spec: GroupSpec
    radius: int
    elements: tuple[Word, ...]
    index: Mapping[Word, int]

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.elements)

    def __contains__(self, g: Word) -> bool:
        return g in self.index

    def sphere(self, r: int) -> tuple[Word, ...]:
        return tuple(g for g in self.elements if g.length == r)

    @cached_property
    def neighbors(self) -> np.ndarray:
        """neighbors[i, k] = índice de s_k·g_i en la bola, o -1 si sale."""
        table = np.full((len(self), self.spec.order), -1, dtype=np.int64)
        gens = self.spec.generator_words()
        for i, g in enumerate(self.elements):
            for k, s in enumerate(gens):
                table[i, k] = self.index.get(mul(s, g), -1)
        return table


def ball(spec: GroupSpec, radius: int, cap: int | None = None) -> CayleyBall:
    """Enumera {g : |g| <= R} en anchura, generadores en el orden de S."""
    cap = config.max_ball() if cap is None else cap
    size = ball_size(spec, radius)
    if size > cap:
        raise ResourceError(f"la bola de radio {radius} en {spec} tiene {size} elementos (tope {cap})")

    identity = spec.identity()
    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    for r in range(1, radius + 1):
        layer = []
        for g in frontier:
            for s in spec.generators:
                w = reduce(spec, g.letters + (s,))
                if w.length == r and w not in index:
                    index[w] = len(elements)
                    elements.append(w)
                    layer.append(w)
        frontier = layer

    logger.debug("bola %s R=%d: %d elementos", spec, radius, len(elements))
    return CayleyBall(spec=spec, radius=radius, elements=tuple(elements), index=index)
