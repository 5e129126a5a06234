import numpy as np
import pytest

from twogon import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # pay the one-time JIT cost here, outside any timed test section
    _kernels.recursion_table(0.5, 4)
    _kernels.coeff_at(0.5, 4)
    gp, gc = np.zeros(2), np.ones(2)
    out = np.empty(3)
    _kernels.product_chunk(np.array([0.5, 0.5]), gp, gc, 2, out)
    _kernels.mc_count_chunk(2, 4, np.uint64(1))
    _kernels.uniform_chunk(np.uint64(1), 4)
