import numpy as np
import pytest

from pvisrec.corpus import generate_synthetic_corpus


@pytest.fixture(scope="session")
def small_corpus():
    return generate_synthetic_corpus(seed=1, n_users=10, n_datasets=10)


@pytest.fixture(scope="session")
def warm_kernels():
    # first psi call triggers numba compilation; keep it out of timed tests
    from pvisrec.kernels import psi_kernel
    psi_kernel(np.array([1.0, 2.0, 3.0]))
