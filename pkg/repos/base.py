# repos/base.py
from contextlib import contextmanager
import dataclasses
import json
import os
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator, TextIO

import numpy as np

from groups.words import Word


@contextmanager
def staged_write(path: Path) -> Iterator[TextIO]:
    """Escribe en un temporal hermano y lo renombra al terminar; si falla, lo borra."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    fh = tmp.open("w", encoding="utf-8", newline="")
    try:
        yield fh
        fh.close()
        os.replace(tmp, path)  # atómico en el mismo directorio
    except Exception:
        fh.close()
        tmp.unlink(missing_ok=True)
        raise


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Word):
        return str(obj)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return {"numerator": obj.numerator, "denominator": obj.denominator, "value": float(obj)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        # JSON no admite inf/nan
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, obj: Any) -> Path:
    with staged_write(path) as fh:
        fh.write(dump_json(obj))
    return Path(path)
