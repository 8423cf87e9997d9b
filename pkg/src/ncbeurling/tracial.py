"""Tracial subalgebras A of M: the diagonal D = A cap A^*, the expectation Phi, and A_0.

Phi is realised as the tau-orthogonal projection of L^2(M) onto span(D); in finite
dimensions this is the unique trace-preserving conditional expectation onto D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra_core import FinVNAlgebra, adjoint, operator_norm, trace
from .errors import NotTracialError, StructuralError
from .subspace import (
    Subspace,
    adjoint_space,
    from_generators,
    intersection,
    ortho_complement_within,
    orthonormalize,
    products,
    span_sum,
)


@dataclass(frozen=True)
class NestSpec:
    """Per block, the sizes of the consecutive nest atoms (an ordered partition of 1..n_k)."""

    atoms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        atoms = tuple(tuple(int(a) for a in block) for block in self.atoms)
        for block in atoms:
            if not block or any(a <= 0 for a in block):
                raise StructuralError(f"nest atoms must be nonempty, got {block}")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def upper_triangular(cls, dims: Sequence[int]) -> "NestSpec":
        return cls(tuple((1,) * n for n in dims))

    @classmethod
    def trivial(cls, dims: Sequence[int]) -> "NestSpec":
        return cls(tuple((n,) for n in dims))

    @classmethod
    def from_intervals(cls, intervals) -> "NestSpec":
        """From per-block lists of 1-based index intervals, e.g. ``[[[1, 2], [3]]]``."""
        atoms = []
        for k, block in enumerate(intervals):
            expected = 1
            sizes = []
            for atom in block:
                atom = [int(i) for i in atom]
                if not atom or atom != list(range(expected, expected + len(atom))):
                    raise StructuralError(
                        f"block {k}: nest atom {atom} is not the consecutive interval starting at {expected}")
                expected += len(atom)
                sizes.append(len(atom))
            atoms.append(tuple(sizes))
        return cls(tuple(atoms))

    def intervals(self) -> list[list[list[int]]]:
        out = []
        for block in self.atoms:
            start, cur = 1, []
            for a in block:
                cur.append(list(range(start, start + a)))
                start += a
            out.append(cur)
        return out

    def check(self, M: FinVNAlgebra) -> None:
        if len(self.atoms) != len(M.dims):
            raise StructuralError(f"nest has {len(self.atoms)} blocks, algebra has {len(M.dims)}")
        for k, (block, n) in enumerate(zip(self.atoms, M.dims)):
            if sum(block) != n:
                raise StructuralError(f"block {k}: nest atoms {block} do not cover 1..{n}")

    def atom_labels(self, k: int) -> np.ndarray:
        return np.repeat(np.arange(len(self.atoms[k])), self.atoms[k])


@dataclass(frozen=True, eq=False)
class TracialSubalgebra:
    """A unital subalgebra A with diagonal D, expectation Phi onto span(D), and A_0 = A minus D."""

    ambient: FinVNAlgebra
    a_space: Subspace
    d_space: Subspace
    a0_space: Subspace
    nest: NestSpec | None = None

    @property
    def a_basis(self) -> np.ndarray:
        return self.a_space.elements

    @property
    def d_basis(self) -> np.ndarray:
        return self.d_space.elements

    @property
    def a0_basis(self) -> np.ndarray:
        return self.a0_space.elements

    @cached_property
    def phi(self) -> np.ndarray:
        """Matrix of Phi acting on ``vec`` coordinates."""
        return self.d_space.projector

    @property
    def dim(self) -> int:
        return self.a_space.dim

    def __repr__(self):
        return (f"TracialSubalgebra(dims={self.ambient.dims}, dim A={self.a_space.dim}, "
                f"dim D={self.d_space.dim}, dim A0={self.a0_space.dim})")


def expectation(A: TracialSubalgebra, x) -> np.ndarray:
    """``Phi(x)``; accepts a single element or a stack of elements."""
    M = A.ambient
    return M.unvec(M.vec(x) @ A.phi.T)


def multiplicativity_residual(A: TracialSubalgebra):
    """Largest ``||Phi(ab) - Phi(a)Phi(b)||_2`` over basis pairs of A, with the witness pair."""
    M = A.ambient
    basis = A.a_basis
    n = len(basis)
    phi_ab = expectation(A, products(basis, basis))
    phi_a = expectation(A, basis)
    prod_phi = products(phi_a, phi_a)
    diff = np.linalg.norm(M.vec(phi_ab - prod_phi), axis=-1)
    if diff.size == 0:
        return 0.0, None
    idx = int(np.argmax(diff))
    i, j = divmod(idx, n)
    return float(diff[idx]), (basis[i], basis[j])


def _finish(M: FinVNAlgebra, a_space: Subspace, d_space: Subspace, nest=None) -> TracialSubalgebra:
    a0_space = ortho_complement_within(a_space, d_space)
    A = TracialSubalgebra(M, a_space, d_space, a0_space, nest)
    resid, witness = multiplicativity_residual(A)
    if resid > M.tol * max(1.0, _basis_scale(A)):
        raise NotTracialError(
            f"Phi is not multiplicative on A (residual {resid:.3e}); not a tracial subalgebra",
            witness=witness,
        )
    return A


def _basis_scale(A: TracialSubalgebra) -> float:
    # products of orthonormal basis elements scale like 1 / min weight
    return 1.0 / min(A.ambient.weights)


def build_nest_subalgebra(M: FinVNAlgebra, nest: NestSpec) -> TracialSubalgebra:
    """Block-upper-triangular matrices with respect to the nest atoms in each block."""
    nest.check(M)
    a_gens, d_gens = [], []
    for k, (n, w) in enumerate(zip(M.dims, M.weights)):
        labels = nest.atom_labels(k)
        for i in range(n):
            for j in range(n):
                if labels[i] <= labels[j]:
                    e = M.unit(k, i, j) / math.sqrt(w)
                    a_gens.append(e)
                    if labels[i] == labels[j]:
                        d_gens.append(e)
    a_space = Subspace(M, M.vecs(a_gens))
    d_space = Subspace(M, M.vecs(d_gens))
    return _finish(M, a_space, d_space, nest)


def build_from_basis(M: FinVNAlgebra, generators: Sequence, max_rounds: int = 64) -> TracialSubalgebra:
    """Unital algebra generated by ``generators``; raises :class:`NotTracialError` if not tracial."""
    gens = [M.identity()] + [M.check(g) for g in generators]
    S = from_generators(M, gens)
    for _ in range(max_rounds):
        grown = span_sum(S, Subspace(M, orthonormalize(M.vec(products(S.elements, S.elements)).T, M.tol)))
        if grown.dim == S.dim:
            break
        S = grown
    D = intersection(S, adjoint_space(S))
    return _finish(M, S, D)


def is_maximal_subdiagonal(A: TracialSubalgebra) -> bool:
    """``A + A^*`` spans M."""
    return span_sum(A.a_space, adjoint_space(A.a_space)).dim == A.ambient.dim


def hermitian_basis(M: FinVNAlgebra) -> np.ndarray:
    """Real orthonormal basis (for ``Re <x, y>``) of the Hermitian elements of M."""
    out = []
    for k, (n, w) in enumerate(zip(M.dims, M.weights)):
        c = 1.0 / math.sqrt(w)
        for i in range(n):
            out.append(c * M.unit(k, i, i))
            for j in range(i + 1, n):
                eij, eji = M.unit(k, i, j), M.unit(k, j, i)
                out.append(c * (eij + eji) / math.sqrt(2))
                out.append(c * 1j * (eij - eji) / math.sqrt(2))
    return np.asarray(out)


def _real_null_space(C: np.ndarray, tol: float) -> np.ndarray:
    """Real null space of the complex linear map ``t -> C t`` restricted to real ``t``."""
    R = np.vstack([C.real, C.imag])
    m = R.shape[1]
    if R.shape[0] == 0:
        return np.eye(m)
    _, s, vh = np.linalg.svd(R)
    s_full = np.zeros(m)
    s_full[: s.size] = s
    top = float(s_full.max()) if s_full.size else 0.0
    return vh.T[:, s_full <= tol * max(1.0, top)]


def annihilator_outside_diagonal(A: TracialSubalgebra) -> np.ndarray:
    """Real basis (as Hermitian elements) of ``{x = x^* : tau(x A_0) = 0}`` minus Herm(D)."""
    M = A.ambient
    H = hermitian_basis(M)
    wd = M.weight_diagonal
    # C[a, j] = tau(H_j a)
    C = np.einsum("jik,aki,i->aj", H, A.a0_basis, wd) if A.a0_space.dim else np.zeros((0, len(H)))
    V = _real_null_space(C, M.tol)
    herm_d = []
    for d in A.d_basis:
        herm_d.append((d + adjoint(d)) / 2)
        herm_d.append((d - adjoint(d)) / 2j)
    if herm_d:
        # real coordinates Re <h, H_j> = Re tau(H_j h)
        Td = np.einsum("jik,aki,i->ja", H, np.asarray(herm_d), wd).real
        Td = orthonormalize(Td, M.tol).real
        V = V - Td @ (Td.T @ V)
    V = orthonormalize(V, M.tol, ref=1.0).real
    return np.einsum("jr,jik->rik", V, H)


def unique_extension_witness(A: TracialSubalgebra):
    """A positive ``g`` with ``tau(g A_0) = 0`` and ``g`` outside span(D), or ``None``.

    Since ``1`` lies in D and ``tau(A_0) = 0``, any Hermitian annihilator ``v`` of ``A_0``
    can be shifted by a multiple of ``1`` into the positive cone.  A witness therefore
    exists exactly when the Hermitian annihilator is not contained in D, which is a
    finite linear-algebra question; the returned ``g`` has operator norm 1 and a
    nontrivial kernel.
    """
    M = A.ambient
    V = annihilator_outside_diagonal(A)
    if len(V) == 0:
        return None
    v = V[0]
    v = (v + adjoint(v)) / 2
    diag = np.real(np.diagonal(v))
    lead = diag[np.abs(diag) > M.tol * max(1.0, float(np.abs(diag).max()))]
    if lead.size and lead[0] < 0:
        v = -v
    lowest = min(float(np.linalg.eigvalsh(b).min()) for b in M.split(v))
    g = v - lowest * M.identity()
    return g / operator_norm(g)


def a_infinity(A: TracialSubalgebra) -> Subspace:
    """``[A]_2 cap M``, which is span(A) itself in finite dimensions."""
    return A.a_space


def expectation_is_trace_preserving(A: TracialSubalgebra, xs) -> float:
    """Largest ``|tau(Phi(x)) - tau(x)|`` over ``xs``."""
    M = A.ambient
    return max((abs(trace(M, expectation(A, x)) - trace(M, x)) for x in xs), default=0.0)
