# repos/configs.py
"""Lectura y validación del JSON de corrida; los errores llevan el puntero JSON del campo."""
import dataclasses
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

import config
from circle.actions import ActionSpec, build_action, power_action
from circle.diffeos import CircleDiffeo, compose, from_samples, make_rotation, make_sine_perturbed
from config import TOLERANCES, Tolerances
from errors import InputError
from groups.words import GroupSpec
from hilbert.vectors import ModuleVector
from hilbert.witnesses import build_folner_witness, point_witness
from measures.grid import GridMeasure, lebesgue, von_mises
from spectral.laplacian import Lambda1Value, certified_lower_bound, lambda1_dirichlet, lambda1_exact

logger = logging.getLogger(__name__)

KNOWN_KEYS = {"group", "action", "measure", "grid", "radius", "tolerances", "lambda1", "params", "seed"}


@dataclass(frozen=True)
class RunConfig:
    group: GroupSpec
    grid: int
    radius: int
    tolerances: Tolerances
    seed: int
    action: dict | None = None
    measure: dict = field(default_factory=lambda: {"kind": "lebesgue"})
    lambda1: dict = field(default_factory=lambda: {"kind": "exact"})
    params: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)


def _number(value: Any, pointer: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"se esperaba un número, hay {value!r}", pointer)
    return float(value)


def _integer(value: Any, pointer: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"se esperaba un entero, hay {value!r}", pointer)
    if value < minimum:
        raise InputError(f"debe ser >= {minimum}: {value}", pointer)
    return value


def _object(value: Any, pointer: str) -> dict:
    if not isinstance(value, dict):
        raise InputError("se esperaba un objeto", pointer)
    return value


def parse_tolerances(data: Any) -> Tolerances:
    data = _object(data, "/tolerances")
    names = {f.name for f in dataclasses.fields(Tolerances)}
    overrides = {}
    for key, value in data.items():
        if key not in names:
            raise InputError(f"tolerancia desconocida {key!r}", f"/tolerances/{key}")
        overrides[key] = int(_number(value, f"/tolerances/{key}")) if key == "eigen_maxiter" \
            else _number(value, f"/tolerances/{key}")
    return dataclasses.replace(TOLERANCES, **overrides)


def config_from_dict(data: Any) -> RunConfig:
    data = _object(data, "")
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise InputError(f"campo desconocido {unknown[0]!r}", f"/{unknown[0]}")
    if "group" not in data:
        raise InputError("falta 'group'", "/group")
    group = GroupSpec.from_dict(data["group"])
    grid = _integer(data.get("grid", config.GRID_SIZE), "/grid", minimum=2)
    if grid & (grid - 1):
        raise InputError(f"N debe ser potencia de dos: {grid}", "/grid")
    return RunConfig(
        group=group,
        grid=grid,
        radius=_integer(data.get("radius", 2), "/radius"),
        tolerances=parse_tolerances(data.get("tolerances", {})),
        seed=_integer(data.get("seed", 0), "/seed"),
        action=_object(data["action"], "/action") if "action" in data else None,
        measure=_object(data.get("measure", {"kind": "lebesgue"}), "/measure"),
        lambda1=_object(data.get("lambda1", {"kind": "exact"}), "/lambda1"),
        params=_object(data.get("params", {}), "/params"),
        raw=data,
    )


def parse_config(path: Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"no se puede leer {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"JSON mal formado en {path}: {exc.msg} (línea {exc.lineno})", "") from exc
    cfg = config_from_dict(data)
    logger.debug("config %s: %s N=%d R=%d", path, cfg.group, cfg.grid, cfg.radius)
    return cfg


def build_diffeo(spec: Any, n: int, pointer: str) -> CircleDiffeo:
    spec = _object(spec, pointer)
    kind = spec.get("kind")
    try:
        if kind == "rotation":
            return make_rotation(_number(spec.get("theta"), f"{pointer}/theta"), n)
        if kind == "sine":
            return make_sine_perturbed(_number(spec.get("theta", 0.0), f"{pointer}/theta"),
                                       _number(spec.get("a"), f"{pointer}/a"), n)
        if kind == "samples":
            lift, deriv = spec.get("lift"), spec.get("deriv")
            for key, vals in (("lift", lift), ("deriv", deriv)):
                if not isinstance(vals, list) or len(vals) != n:
                    raise InputError(f"'{key}' debe ser una lista de {n} números", f"{pointer}/{key}")
            return from_samples(np.asarray(lift, dtype=float), np.asarray(deriv, dtype=float))
        if kind == "composite":
            parts = spec.get("of")
            if not isinstance(parts, list) or not parts:
                raise InputError("'of' debe ser una lista no vacía", f"{pointer}/of")
            maps = [build_diffeo(p, n, f"{pointer}/of/{i}") for i, p in enumerate(parts)]
            out = maps[-1]
            for f in reversed(maps[:-1]):
                out = compose(f, out)
            return out
    except InputError as exc:
        if exc.pointer is None:
            raise InputError(str(exc), pointer) from exc
        raise
    raise InputError(f"tipo de difeomorfismo desconocido {kind!r}", f"{pointer}/kind")


def build_action_from(cfg: RunConfig) -> ActionSpec:
    if cfg.action is None:
        raise InputError("falta 'action'", "/action")
    if "power_of" in cfg.action:
        if cfg.group.is_free:
            raise InputError("'power_of' sólo define acciones de Z^d", "/action/power_of")
        return power_action(cfg.group, build_diffeo(cfg.action["power_of"], cfg.grid, "/action/power_of"))
    gens = _object(cfg.action.get("generators"), "/action/generators")
    known = set(cfg.group.generators)
    diffeos = {}
    for s, spec in gens.items():
        if s not in known:
            raise InputError(f"generador desconocido {s!r} para {cfg.group}", f"/action/generators/{s}")
        diffeos[s] = build_diffeo(spec, cfg.grid, f"/action/generators/{s}")
    return build_action(cfg.group, diffeos)


def build_measure(spec: dict, n: int, pointer: str = "/measure") -> GridMeasure:
    kind = spec.get("kind", "lebesgue")
    if kind == "lebesgue":
        return lebesgue(n)
    if kind == "density":
        values = spec.get("values")
        if not isinstance(values, list) or len(values) != n:
            raise InputError(f"'values' debe ser una lista de {n} números", f"{pointer}/values")
        return GridMeasure.from_values(values)
    if kind == "von_mises":
        return von_mises(n, _number(spec.get("center", 0.5), f"{pointer}/center"),
                         _number(spec.get("kappa", 2.0), f"{pointer}/kappa"))
    raise InputError(f"tipo de medida desconocido {kind!r}", f"{pointer}/kind")


def build_lambda1(cfg: RunConfig) -> Lambda1Value:
    spec = cfg.lambda1
    kind = spec.get("kind", "exact")
    if kind == "exact":
        return lambda1_exact(cfg.group)
    if kind == "lower_bound":
        source = spec.get("source")
        if not isinstance(source, str) or not source:
            raise InputError("una cota inferior necesita 'source'", "/lambda1/source")
        return certified_lower_bound(_number(spec.get("value"), "/lambda1/value"), source)
    if kind == "dirichlet":
        return lambda1_dirichlet(cfg.group, _integer(spec.get("radius", cfg.radius), "/lambda1/radius", 1),
                                 cfg.tolerances)
    raise InputError(f"tipo de lambda_1 desconocido {kind!r}", "/lambda1/kind")


def build_witness(cfg: RunConfig) -> ModuleVector:
    from repos.reports import read_witness

    spec = _object(cfg.params.get("witness", {"kind": "point"}), "/params/witness")
    kind = spec.get("kind")
    if kind == "point":
        return point_witness(cfg.group, cfg.grid)
    if kind == "folner":
        return build_folner_witness(cfg.group, _integer(spec.get("n"), "/params/witness/n", 1), cfg.grid)
    if kind == "file":
        path = spec.get("path")
        if not isinstance(path, str):
            raise InputError("falta 'path'", "/params/witness/path")
        return read_witness(Path(path), cfg.group, cfg.grid)
    if kind == "entries":
        entries = _object(spec.get("entries"), "/params/witness/entries")
        rows = {}
        for word, vals in entries.items():
            ptr = f"/params/witness/entries/{word}"
            if isinstance(vals, list):
                row = np.array([_number(v, f"{ptr}/{i}") for i, v in enumerate(vals)])
            else:
                row = np.full(cfg.grid, _number(vals, ptr))
            if row.shape != (cfg.grid,):
                raise InputError(f"se esperaban {cfg.grid} valores", ptr)
            rows[cfg.group.word(word)] = row
        return ModuleVector(cfg.group, cfg.grid, rows)
    raise InputError(f"tipo de testigo desconocido {kind!r}", "/params/witness/kind")


def build_arc(cfg: RunConfig) -> tuple[float, float]:
    """Arco [inicio, longitud] de params.arc; por defecto todo el círculo."""
    arc = cfg.params.get("arc", [0.0, 1.0])
    if not (isinstance(arc, list) and len(arc) == 2):
        raise InputError("'arc' debe ser [inicio, longitud]", "/params/arc")
    return _number(arc[0], "/params/arc/0"), _number(arc[1], "/params/arc/1")
