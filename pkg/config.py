import os
from dataclasses import dataclass
from pathlib import Path
from dotenv import load_dotenv

from errors import InputError

BASE_DIR = Path(__file__).resolve().parent
load_dotenv(BASE_DIR / ".env", override=False)

OUT_DIR = Path(os.getenv("AMENCERT_OUT_DIR", str(BASE_DIR / "reports")))
GRID_SIZE = int(os.getenv("AMENCERT_GRID", "4096"))
LOG_LEVEL = os.getenv("AMENCERT_LOG_LEVEL", "WARNING")

MAX_BALL_DEFAULT = 1_000_000


def max_ball() -> int:
    # leído en cada llamada: AMENCERT_MAX_BALL puede cambiar durante la sesión
    return int(os.getenv("AMENCERT_MAX_BALL", str(MAX_BALL_DEFAULT)))


@dataclass(frozen=True)
class Tolerances:
    tau_int: float = 1e-6
    tau_unitary: float = 1e-5
    tau_cocycle: float = 1e-4
    tau_lemma: float = 1e-3
    witness_unit: float = 1e-6
    psd: float = 1e-8
    delta_cert: float = 1e-6
    eigen_residual: float = 1e-9
    eigen_maxiter: int = 10_000

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise InputError(f"la tolerancia {name} debe ser positiva: {value}", f"/tolerances/{name}")

    @staticmethod
    def tau_diffeo(n: int) -> float:
        return 10.0 / n

    def as_dict(self) -> dict:
        return dict(vars(self))


TOLERANCES = Tolerances()
