import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncbeurling import DomainError, FinVNAlgebra, StructuralError
from ncbeurling.algebra_core import (
    adjoint,
    conjugate_exponent,
    lp_norm,
    operator_norm,
    polar_decompose,
    positive_power,
    support_projection,
    trace,
    trace_power,
)

from conftest import close, e

seeds = st.integers(0, 2**32 - 1)
dims_st = st.lists(st.integers(1, 4), min_size=1, max_size=3)


def _algebra(dims, seed):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.5, 2.0, len(dims))
    return FinVNAlgebra(tuple(dims), tuple(w / np.dot(w, dims))), rng


# --- construction -----------------------------------------------------------

def test_default_weights_are_normalised():
    M = FinVNAlgebra((1, 2))
    assert M.weights == pytest.approx((1 / 3, 1 / 3))
    assert M.dim == 5 and M.total_dim == 3


def test_state_condition_enforced():
    with pytest.raises(StructuralError):
        FinVNAlgebra((2,), (0.3,))
    with pytest.raises(StructuralError):
        FinVNAlgebra((1, 1), (1.5, -0.5))


def test_off_block_entries_rejected():
    M = FinVNAlgebra((1, 1))
    x = np.ones((2, 2))
    with pytest.raises(StructuralError):
        M.check(x)


def test_vec_is_isometric():
    M, rng = _algebra([2, 3], 4)
    x, y = M.random_element(rng), M.random_element(rng)
    assert np.vdot(M.vec(y), M.vec(x)) == pytest.approx(trace(M, adjoint(y) @ x))
    assert close(M.unvec(M.vec(x)), x)


# --- trace ------------------------------------------------------------------

def test_trace_of_identity_is_one():
    assert trace(FinVNAlgebra((3, 1)), FinVNAlgebra((3, 1)).identity()) == pytest.approx(1.0)


def test_trace_matrix_unit_m2(m2):
    assert trace(m2, e(m2, 1, 1)) == pytest.approx(0.5)


def test_trace_on_one_plus_two_blocks():
    M = FinVNAlgebra((1, 2), (1 / 3, 1 / 3))
    x = M.element([np.eye(1), np.zeros((2, 2))])
    assert trace(M, x) == pytest.approx(1 / 3)


@given(dims_st, seeds)
def test_trace_is_tracial(dims, seed):
    M, rng = _algebra(dims, seed)
    x, y = M.random_element(rng), M.random_element(rng)
    assert abs(trace(M, x @ y) - trace(M, y @ x)) <= M.tol


# --- norms ------------------------------------------------------------------

@pytest.mark.parametrize("p", [1, 1.5, 2, 3.5, math.inf])
def test_lp_norm_of_identity(p):
    M = FinVNAlgebra((2, 3))
    assert lp_norm(M, M.identity(), p) == pytest.approx(1.0)


def test_lp_norm_matrix_unit(m2):
    assert lp_norm(m2, e(m2, 1, 1), 2) == pytest.approx(math.sqrt(0.5))
    assert lp_norm(m2, e(m2, 1, 1), math.inf) == pytest.approx(1.0)


def test_lp_norm_rejects_exponent_below_one(m2):
    with pytest.raises(DomainError):
        lp_norm(m2, m2.identity(), 0.5)


def test_conjugate_exponents():
    assert conjugate_exponent(1) == math.inf
    assert conjugate_exponent(math.inf) == 1
    assert conjugate_exponent(4) == pytest.approx(4 / 3)
    with pytest.raises(DomainError):
        conjugate_exponent(0.5)


@given(dims_st, seeds, st.sampled_from([1.0, 4 / 3, 2.0, 4.0, math.inf]))
def test_holder_inequality(dims, seed, p):
    M, rng = _algebra(dims, seed)
    x, y = M.random_element(rng), M.random_element(rng)
    q = conjugate_exponent(p)
    assert abs(trace(M, adjoint(y) @ x)) <= lp_norm(M, x, p) * lp_norm(M, y, q) + M.tol


@given(dims_st, seeds, st.sampled_from([(1, 2), (1.5, 3), (2, math.inf), (1, math.inf)]))
def test_lp_norm_monotone_in_p(dims, seed, pq):
    M, rng = _algebra(dims, seed)
    x = M.random_element(rng)
    p, q = pq
    assert lp_norm(M, x, p) <= lp_norm(M, x, q) + M.tol


# --- functional calculus ----------------------------------------------------

def test_polar_examples(m2):
    u, pos = polar_decompose(m2, m2.identity())
    assert close(u, m2.identity()) and close(pos, m2.identity())
    u, pos = polar_decompose(m2, 2 * e(m2, 1, 2))
    assert close(u, e(m2, 1, 2)) and close(pos, 2 * e(m2, 2, 2))
    u, pos = polar_decompose(m2, m2.zeros())
    assert close(u, 0) and close(pos, 0)


@given(dims_st, seeds, st.integers(1, 4))
def test_polar_reconstruction(dims, seed, rank):
    M, rng = _algebra(dims, seed)
    x = M.random_element(rng)
    # lower the rank of every block to exercise partial isometries
    x = M.element([b @ np.diag([1.0] * min(rank, len(b)) + [0.0] * (len(b) - min(rank, len(b))))
                   for b in M.split(x)])
    u, pos = polar_decompose(M, x)
    assert lp_norm(M, x - u @ pos, math.inf) <= 10 * M.tol
    assert operator_norm(adjoint(u) @ u @ pos - pos) <= 10 * M.tol


def test_positive_power_examples(m2):
    assert close(positive_power(m2, m2.identity(), 0.7), m2.identity())
    assert close(positive_power(m2, 4 * e(m2, 1, 1), 0.5), 2 * e(m2, 1, 1))
    assert close(positive_power(m2, 4 * e(m2, 1, 1), -0.5), 0.5 * e(m2, 1, 1))


def test_positive_power_rejects_indefinite(m2):
    with pytest.raises(DomainError, match="eigenvalue"):
        positive_power(m2, e(m2, 1, 1) - e(m2, 2, 2), 0.5)


def test_support_projection_examples(m2):
    assert close(support_projection(m2, m2.identity()), m2.identity())
    assert close(support_projection(m2, 3 * e(m2, 1, 1)), e(m2, 1, 1))
    assert close(support_projection(m2, m2.zeros()), 0)


def test_trace_power_ignores_rounding_level_eigenvalues(m2):
    x = e(m2, 1, 1) + 1e-18 * e(m2, 2, 2)
    assert trace_power(m2, x, 0.5) == pytest.approx(0.5, abs=1e-15)


def test_random_unitary_is_unitary():
    M, rng = _algebra([3, 2], 1)
    u = M.random_unitary(rng)
    assert operator_norm(adjoint(u) @ u - M.identity()) < 1e-12
