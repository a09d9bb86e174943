# circle/sampling.py
"""Malla uniforme de S¹ = [0,1): N celdas, muestras en los puntos medios."""
import numpy as np

from errors import InputError


def grid_points(n: int) -> np.ndarray:
    if n < 2:
        raise InputError(f"la malla necesita al menos 2 puntos: {n}", "/grid")
    return (np.arange(n) + 0.5) / n


def periodic_interp(values: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Interpolación lineal periódica de muestras en los puntos medios.
    `values` puede ser (N,) o (m, N); en el segundo caso se interpola cada fila.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    t = np.asarray(y, dtype=float) * n - 0.5
    j = np.floor(t)
    w = t - j
    j0 = j.astype(np.int64) % n
    j1 = (j0 + 1) % n
    return values[..., j0] * (1.0 - w) + values[..., j1] * w


def circle_distance(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Distancia de arco en S¹, siempre <= 1/2."""
    frac = np.mod(np.asarray(u) - np.asarray(v), 1.0)
    return np.minimum(frac, 1.0 - frac)


def nearest_index(x: float, n: int) -> int:
    return int(np.floor(np.mod(x, 1.0) * n)) % n
