import numpy as np
import pytest

from circle.actions import default_thetas, power_action, rotation_action, sine_action
from circle.diffeos import make_sine_perturbed
from groups.words import FREE, FREE_ABELIAN, GroupSpec, Word
from measures.grid import lebesgue

# malla fina para las tolerancias de cuadratura
FINE = 4096


@pytest.fixture(scope="session")
def f2():
    return GroupSpec(FREE, 2)


@pytest.fixture(scope="session")
def z2():
    return GroupSpec(FREE_ABELIAN, 2)


@pytest.fixture(scope="session")
def leb():
    return lebesgue(FINE)


@pytest.fixture(scope="session")
def rot_f2(f2):
    return rotation_action(f2, default_thetas(2), FINE)


@pytest.fixture(scope="session")
def sine_f2(f2):
    """Rotaciones perturbadas con a = 0.1."""
    return sine_action(f2, default_thetas(2), 0.1, FINE)


@pytest.fixture(scope="session")
def z2_power(z2):
    """Acción conmutativa de Z² (φ, φ²) en N = 256."""
    return power_action(z2, make_sine_perturbed(default_thetas(1)[0], 0.1, 256))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_word(rng):
    """Palabra reducida al azar de largo <= max_len."""

    def make(spec: GroupSpec, max_len: int) -> Word:
        letters = rng.choice(list(spec.generators), size=int(rng.integers(0, max_len + 1)))
        return spec.word("".join(letters))

    return make
