# repos/reports.py
import csv
import json
import platform
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy

from errors import InputError
from groups.words import GroupSpec
from hilbert.vectors import ModuleVector
from repos.base import staged_write, to_jsonable, write_json
from repos.configs import RunConfig


def provenance(cfg: RunConfig) -> dict:
    """Sin marcas de tiempo: misma config y semilla, mismos bytes."""
    return {
        "config": cfg.raw,
        "seed": cfg.seed,
        "N": cfg.grid,
        "radius": cfg.radius,
        "tolerances": {**cfg.tolerances.as_dict(), "tau_diffeo": cfg.tolerances.tau_diffeo(cfg.grid)},
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }


def report_path(out_dir: Path, command: str) -> Path:
    return Path(out_dir) / f"{command}.json"


def write_report(out_dir: Path, command: str, payload: dict, cfg: RunConfig) -> Path:
    return write_json(report_path(out_dir, command),
                      {"command": command, "result": payload, "provenance": provenance(cfg)})


def write_series(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with staged_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else to_jsonable(v) for v in row])
    return Path(path)


def write_witness(path: Path, xi: ModuleVector) -> Path:
    return write_json(path, {
        "group": xi.spec.to_dict(),
        "N": xi.n,
        "entries": {str(g): xi.entries[g] for g in xi.support},
    })


def read_witness(path: Path, spec: GroupSpec, n: int) -> ModuleVector:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"no se puede leer el testigo {path}: {exc}", "/params/witness/path") from exc
    if GroupSpec.from_dict(data.get("group", {}), "/params/witness/group") != spec:
        raise InputError(f"el testigo es de otro grupo: {data.get('group')}", "/params/witness/group")
    if data.get("N") != n:
        raise InputError(f"el testigo usa N={data.get('N')}, la corrida N={n}", "/params/witness/N")
    entries = data.get("entries")
    if not isinstance(entries, dict):
        raise InputError("faltan 'entries'", "/params/witness/entries")
    return ModuleVector(spec, n, {spec.word(w): np.asarray(v, dtype=float) for w, v in entries.items()})
