import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ncbeurling import FinVNAlgebra, NestSpec, build_from_basis, build_nest_subalgebra

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def m2():
    return FinVNAlgebra((2,))


@pytest.fixture
def upper2(m2):
    """Upper triangular 2x2 matrices."""
    return build_nest_subalgebra(m2, NestSpec.upper_triangular((2,)))


@pytest.fixture
def control(m2):
    """span{1, e_12}: tracial, not maximal subdiagonal."""
    return build_from_basis(m2, [m2.unit(0, 0, 1)])


def e(M, i, j, block=0):
    """Matrix unit with 1-based indices, as in hand computations."""
    return M.unit(block, i - 1, j - 1)


def close(x, y, tol=1e-12):
    return np.allclose(np.asarray(x), np.asarray(y), atol=tol, rtol=0)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
