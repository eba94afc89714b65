import numpy as np
import pytest

from cpstensor.core import Tensor4, project_cps


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_tensor(rng: np.random.Generator, n: int, complex_entries: bool = True) -> Tensor4:
    data = rng.standard_normal((n,) * 4)
    if complex_entries:
        data = data + 1j * rng.standard_normal((n,) * 4)
    return Tensor4(data)


def random_cps(rng: np.random.Generator, n: int) -> Tensor4:
    return project_cps(random_tensor(rng, n))
