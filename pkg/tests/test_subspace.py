import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncbeurling import PreconditionError, Subspace
from ncbeurling.harness import random_invariant_subspace, random_nest_algebra
from ncbeurling.subspace import (
    from_generators,
    invariance_residual,
    is_invariant,
    is_simply_invariant,
    ortho_complement_within,
    right_module_span,
    span_sum,
    wandering_subspace,
)

from conftest import e

seeds = st.integers(0, 2**32 - 1)


def span(M, *xs):
    return from_generators(M, list(xs))


def test_from_generators_dimensions(m2):
    assert span(m2, m2.identity()).dim == 1
    assert span(m2, e(m2, 1, 1), 2 * e(m2, 1, 1)).dim == 1
    assert span(m2, e(m2, 1, 1), e(m2, 1, 2)).dim == 2
    assert from_generators(m2, []).dim == 0


def test_right_module_span_examples(m2, upper2):
    assert right_module_span(span(m2, m2.identity()), upper2.a_basis).equals(upper2.a_space)
    S = right_module_span(span(m2, e(m2, 1, 1), e(m2, 1, 2)), upper2.a0_basis)
    assert S.equals(span(m2, e(m2, 1, 2)))
    assert right_module_span(Subspace.zero(m2), upper2.a_basis).dim == 0


def test_is_invariant_examples(m2, upper2):
    assert is_invariant(upper2.a_space, upper2)
    assert is_invariant(span(m2, e(m2, 1, 1), e(m2, 1, 2)), upper2)
    assert not is_invariant(span(m2, e(m2, 1, 1)), upper2)


def test_ortho_complement_examples(m2):
    K = span(m2, e(m2, 1, 1), e(m2, 1, 2))
    assert ortho_complement_within(K, Subspace.zero(m2)).equals(K)
    assert ortho_complement_within(K, K).dim == 0
    assert ortho_complement_within(K, span(m2, e(m2, 1, 2))).equals(span(m2, e(m2, 1, 1)))


def test_ortho_complement_requires_containment(m2):
    with pytest.raises(PreconditionError) as info:
        ortho_complement_within(span(m2, e(m2, 1, 1)), span(m2, e(m2, 2, 2)))
    assert info.value.witness is not None


def test_wandering_subspace_examples(m2, upper2):
    assert wandering_subspace(upper2.a_space, upper2).W.equals(upper2.d_space)
    W = wandering_subspace(span(m2, e(m2, 1, 1), e(m2, 1, 2)), upper2).W
    assert W.equals(span(m2, e(m2, 1, 1)))
    assert wandering_subspace(Subspace.zero(m2), upper2).W.dim == 0


def test_wandering_subspace_requires_invariance(m2, upper2):
    with pytest.raises(PreconditionError):
        wandering_subspace(span(m2, e(m2, 1, 1)), upper2)


def test_simply_invariant_examples(m2, upper2):
    assert is_simply_invariant(upper2.a_space, upper2)
    assert not is_simply_invariant(Subspace.zero(m2), upper2)
    assert is_simply_invariant(span(m2, e(m2, 1, 2)), upper2)


@given(seeds)
def test_wandering_splits_invariant_subspace(seed):
    rng = np.random.default_rng(seed)
    A = random_nest_algebra(rng, 4, 2)
    K = random_invariant_subspace(A, rng, k=int(rng.integers(1, 3)), max_rank=2)
    wd = wandering_subspace(K, A)
    assert wd.W.is_orthogonal_to(wd.KA0, 1e-10)
    assert wd.reconstruction_residual() <= 10 * A.ambient.tol
    # the wandering subspace is a right D-module
    assert right_module_span(wd.W, A.d_basis).equals(wd.W, 1e-8)


@given(seeds)
def test_type2_part_of_right_ideal_lies_in_strict_part(seed):
    from ncbeurling import type_decomposition

    rng = np.random.default_rng(seed)
    A = random_nest_algebra(rng, 4, 2)
    gens = [A.a_space.random_element(rng) for _ in range(int(rng.integers(1, 3)))]
    K = right_module_span(from_generators(A.ambient, gens), A.a_basis)
    dec = type_decomposition(K, A, rng=rng)
    assert A.a0_space.contains_subspace(dec.Z, 1e-8)
    # type 1 right ideals of a nest algebra: the extracted isometries lie in A
    if dec.Z.dim == 0:
        assert all(A.a_space.residual(u) <= 1e-8 for u in dec.isometries)


def test_random_invariant_subspace_contract(upper2):
    K = random_invariant_subspace(upper2, 5)
    assert is_invariant(K, upper2)
    assert np.array_equal(K.Q, random_invariant_subspace(upper2, 5).Q)
    assert random_invariant_subspace(upper2, 5, k=0).dim == 0


def test_span_sum_and_distance(m2):
    a, b = span(m2, e(m2, 1, 1)), span(m2, e(m2, 2, 2))
    s = span_sum(a, b)
    assert s.dim == 2 and s.contains_subspace(a) and a.distance(b) == 1.0
    assert invariance_residual(Subspace.zero(m2), None) == 0.0
