# circle/actions.py
import logging
from dataclasses import dataclass, field
from math import sqrt
from typing import Mapping, Sequence

from circle.diffeos import (
    CircleDiffeo,
    DiffeoKind,
    c1_distance,
    compose,
    invert,
    make_identity,
    make_rotation,
    make_sine_perturbed,
)
from config import Tolerances
from errors import InputError
from groups.words import GroupSpec, Word, inverse_symbol

logger = logging.getLogger(__name__)

# palabras memorizadas por acción; al llenarse se descarta la más antigua
MAX_CACHE = 1024


def default_thetas(rank: int) -> tuple[float, ...]:
    # múltiplos de sqrt(2) - 1 módulo 1
    return tuple(((sqrt(2) - 1) * (i + 1)) % 1.0 for i in range(rank))


@dataclass(frozen=True, eq=False)
class ActionSpec:
    """Homomorfismo g -> Φ_g dado en los generadores (incluidas las inversas)."""

    group: GroupSpec
    assignment: Mapping[str, CircleDiffeo]
    grid_size: int
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        missing = [s for s in self.group.generators if s not in self.assignment]
        if missing:
            raise InputError(f"faltan generadores en la acción: {missing}", "/action/generators")
        for s, f in self.assignment.items():
            if f.n != self.grid_size:
                raise InputError(f"el generador {s!r} usa N={f.n}, la acción N={self.grid_size}",
                                 f"/action/generators/{s}")

    @property
    def is_builtin(self) -> bool:
        return all(f.is_builtin for f in self.assignment.values())

    def generator(self, s: str) -> CircleDiffeo:
        try:
            return self.assignment[s]
        except KeyError:
            raise InputError(f"generador {s!r} sin difeomorfismo asignado") from None

    def describe(self) -> dict:
        return {s: self.assignment[s].describe() for s in self.group.generators if s.islower()}


def build_action(group: GroupSpec, generators: Mapping[str, CircleDiffeo],
                 check: bool = True) -> ActionSpec:
    """
    Completa las inversas que falten con invert() y verifica
    consistencia de inversas y, en Z^d, conmutación.
    """
    sizes = {f.n for f in generators.values()}
    if len(sizes) != 1:
        raise InputError(f"los generadores usan mallas distintas: {sorted(sizes)}", "/action/generators")
    n = sizes.pop()
    assignment = dict(generators)
    for s in group.generators:
        if s.islower() and s not in assignment:
            raise InputError(f"falta el generador {s!r}", f"/action/generators/{s}")
    for s in group.generators:
        if s.isupper() and s not in assignment:
            assignment[s] = invert(assignment[s.lower()])
    action = ActionSpec(group=group, assignment=assignment, grid_size=n)
    if check:
        check_action(action)
    return action


def _report_violation(action: ActionSpec, message: str) -> None:
    if action.is_builtin:
        raise InputError(message, "/action")
    logger.warning("%s (difeomorfismo muestreado, se continúa)", message)


def check_action(action: ActionSpec) -> None:
    tau = Tolerances.tau_diffeo(action.grid_size)
    ident = make_identity(action.grid_size)
    for s in action.group.generators:
        if not s.islower():
            continue
        f, f_inv = action.generator(s), action.generator(inverse_symbol(s))
        gap = c1_distance(compose(f, f_inv), ident)
        if gap > tau:
            _report_violation(action, f"{s} y {inverse_symbol(s)} no son inversos (distancia {gap:.3g} > {tau:.3g})")
    if action.group.is_free:
        return
    lows = [s for s in action.group.generators if s.islower()]
    for i, s in enumerate(lows):
        for t in lows[i + 1:]:
            fs, ft = action.generator(s), action.generator(t)
            gap = c1_distance(compose(fs, ft), compose(ft, fs))
            if gap > tau:
                _report_violation(action, f"{s} y {t} no conmutan (distancia {gap:.3g} > {tau:.3g})")


def act(action: ActionSpec, g: Word) -> CircleDiffeo:
    """Φ_g = A(s1)∘...∘A(sm); memoriza los sufijos, a lo sumo MAX_CACHE."""
    if g.spec != action.group:
        raise InputError(f"la palabra {g} es de {g.spec}, la acción de {action.group}")
    cache = action._cache
    if g in cache:
        return cache[g]
    if g.is_identity:
        out = make_identity(action.grid_size)
    elif g.length == 1:
        out = action.generator(g.letters[0])
    else:
        suffix = Word(g.spec, g.letters[1:])
        out = compose(action.generator(g.letters[0]), act(action, suffix))
    while len(cache) >= MAX_CACHE:
        cache.pop(next(iter(cache)))
    cache[g] = out
    return out


def rotation_action(group: GroupSpec, thetas: Sequence[float], n: int) -> ActionSpec:
    lows = [s for s in group.generators if s.islower()]
    if len(thetas) != len(lows):
        raise InputError(f"se esperaban {len(lows)} ángulos, hay {len(thetas)}")
    return build_action(group, {s: make_rotation(t, n) for s, t in zip(lows, thetas)})


def sine_action(group: GroupSpec, thetas: Sequence[float], a: float | Sequence[float], n: int) -> ActionSpec:
    """Rotaciones perturbadas x + θ_s + (a_s/2π) sin 2πx en cada generador libre."""
    lows = [s for s in group.generators if s.islower()]
    amps = [a] * len(lows) if isinstance(a, (int, float)) else list(a)
    if len(thetas) != len(lows) or len(amps) != len(lows):
        raise InputError(f"se esperaban {len(lows)} ángulos y amplitudes")
    return build_action(group, {s: make_sine_perturbed(t, x, n) for s, t, x in zip(lows, thetas, amps)})


def power_action(group: GroupSpec, base: CircleDiffeo) -> ActionSpec:
    """Acción de Z^d: el generador i-ésimo va a base^(i+1); conmutan por construcción."""
    lows = [s for s in group.generators if s.islower()]
    gens = {}
    current = base
    for s in lows:
        gens[s] = current
        current = compose(base, current)
    return build_action(group, gens)


def isometric_companion(action: ActionSpec) -> ActionSpec:
    """Misma acción con cada generador reemplazado por la rotación de igual θ."""
    gens = {}
    for s in action.group.generators:
        if not s.islower():
            continue
        f = action.generator(s)
        if f.kind not in (DiffeoKind.ROTATION, DiffeoKind.SINE):
            raise InputError(f"el generador {s!r} no tiene rotación asociada ({f.kind.value})", f"/action/generators/{s}")
        gens[s] = make_rotation(f.params["theta"], action.grid_size)
    return build_action(action.group, gens)
