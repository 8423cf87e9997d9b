"""Subspaces of L^2(M) held as orthonormal bases, and the right-module calculus on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .algebra_core import FinVNAlgebra, adjoint
from .errors import PreconditionError

if TYPE_CHECKING:
    from .tracial import TracialSubalgebra


def orthonormalize(cols: np.ndarray, tol: float, ref: float | None = None) -> np.ndarray:
    """Orthonormal basis for the column span of ``cols``.

    A singular value counts as zero when it is at most ``tol * ref``; ``ref`` defaults
    to the largest singular value of ``cols`` (falling back to 1 for the zero matrix).
    """
    cols = np.asarray(cols, dtype=complex)
    if cols.shape[1] == 0:
        return np.zeros((cols.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    if ref is None:
        ref = float(s[0]) if s.size and s[0] > 0 else 1.0
    return u[:, s > tol * ref]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of L^2(M); ``Q`` holds orthonormal ``vec`` coordinates as columns."""

    ambient: FinVNAlgebra
    Q: np.ndarray

    @classmethod
    def zero(cls, M: FinVNAlgebra) -> "Subspace":
        return cls(M, np.zeros((M.dim, 0), dtype=complex))

    @classmethod
    def full(cls, M: FinVNAlgebra) -> "Subspace":
        return cls(M, np.eye(M.dim, dtype=complex))

    @property
    def dim(self) -> int:
        return self.Q.shape[1]

    @property
    def tol(self) -> float:
        return self.ambient.tol

    @cached_property
    def elements(self) -> np.ndarray:
        """Basis elements stacked as an ``(dim, N, N)`` array."""
        return self.ambient.unvec(self.Q.T)

    @property
    def basis(self) -> list[np.ndarray]:
        return list(self.elements)

    @cached_property
    def projector(self) -> np.ndarray:
        return self.Q @ adjoint(self.Q)

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient.dim})"

    def project(self, x) -> np.ndarray:
        """Orthogonal projection of the element ``x`` onto this subspace."""
        M = self.ambient
        v = M.vec(x)
        return M.unvec(self.Q @ (adjoint(self.Q) @ v))

    def residual(self, x) -> float:
        """``||x - P x||_2``."""
        v = self.ambient.vec(x)
        return float(np.linalg.norm(v - self.Q @ (adjoint(self.Q) @ v)))

    def contains(self, x, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        scale = max(1.0, float(np.linalg.norm(self.ambient.vec(x))))
        return self.residual(x) <= tol * scale

    def containment_residual(self, other: "Subspace") -> float:
        """Largest distance from a unit vector of ``other`` to this subspace."""
        if other.dim == 0:
            return 0.0
        r = other.Q - self.Q @ (adjoint(self.Q) @ other.Q)
        return float(np.linalg.norm(r, 2))

    def contains_subspace(self, other: "Subspace", tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return self.containment_residual(other) <= tol

    def distance(self, other: "Subspace") -> float:
        """Spectral-norm distance between the orthogonal projections (1 if dims differ)."""
        if self.dim != other.dim:
            return 1.0
        if self.dim == 0:
            return 0.0
        return max(self.containment_residual(other), other.containment_residual(self))

    def equals(self, other: "Subspace", tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return self.distance(other) <= tol

    def is_orthogonal_to(self, other: "Subspace", tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        if self.dim == 0 or other.dim == 0:
            return True
        return float(np.linalg.norm(adjoint(self.Q) @ other.Q, 2)) <= tol

    def gram_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(np.linalg.norm(adjoint(self.Q) @ self.Q - np.eye(self.dim), 2))

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        """Gaussian combination of the basis, unit 2-norm (zero for the zero space)."""
        if self.dim == 0:
            return self.ambient.zeros()
        c = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        c /= np.linalg.norm(c)
        return self.ambient.unvec(self.Q @ c)


def from_generators(M: FinVNAlgebra, gens: Sequence, ref: float | None = None) -> Subspace:
    """Orthonormal basis of ``span(gens)`` using the global rank threshold."""
    gens = list(gens)
    if not gens:
        return Subspace.zero(M)
    return Subspace(M, orthonormalize(M.vecs(gens), M.tol, ref))


def span_sum(*spaces: Subspace) -> Subspace:
    M = spaces[0].ambient
    return Subspace(M, orthonormalize(np.hstack([s.Q for s in spaces]), M.tol, ref=1.0))


def intersection(S: Subspace, T: Subspace) -> Subspace:
    """``S cap T`` from the null space of ``[Q_S, -Q_T]``."""
    M = S.ambient
    if S.dim == 0 or T.dim == 0:
        return Subspace.zero(M)
    stacked = np.hstack([S.Q, -T.Q])
    _, s, vh = np.linalg.svd(stacked)
    s_full = np.zeros(stacked.shape[1])
    s_full[: s.size] = s
    null = adjoint(vh)[:, s_full <= M.tol * max(1.0, float(s_full.max()))]
    return Subspace(M, orthonormalize(S.Q @ null[: S.dim, :], M.tol, ref=1.0))


def adjoint_space(S: Subspace) -> Subspace:
    """``S^* = {x^* : x in S}``."""
    return from_generators(S.ambient, [adjoint(x) for x in S.basis])


def products(S, T) -> np.ndarray:
    """All products ``s t`` as an ``(len(S) * len(T), N, N)`` array."""
    S = np.asarray(S, dtype=complex)
    T = np.asarray(T, dtype=complex)
    if S.shape[0] == 0 or T.shape[0] == 0:
        n = S.shape[-1] if S.ndim == 3 else T.shape[-1]
        return np.zeros((0, n, n), dtype=complex)
    P = np.einsum("aij,bjk->abik", S, T)
    return P.reshape((-1,) + P.shape[-2:])


def right_module_span(S: Subspace, T: Sequence) -> Subspace:
    """``span{s t : s in basis(S), t in T}``.

    When ``T`` spans a multiplicatively closed set this is already a right module,
    so no iteration is performed.
    """
    M = S.ambient
    if S.dim == 0 or len(T) == 0:
        return Subspace.zero(M)
    return Subspace(M, orthonormalize(M.vec(products(S.elements, T)).T, M.tol))


def invariance_residual(K: Subspace, A: "TracialSubalgebra") -> float:
    """Largest relative distance from a product ``k a`` (basis elements) to ``K``."""
    M = K.ambient
    if K.dim == 0:
        return 0.0
    V = M.vec(products(K.elements, A.a_basis)).T
    R = V - K.Q @ (adjoint(K.Q) @ V)
    scale = np.maximum(1.0, np.linalg.norm(V, axis=0))
    return float(np.max(np.linalg.norm(R, axis=0) / scale))


def is_invariant(K: Subspace, A: "TracialSubalgebra") -> bool:
    """``K A subset K`` within tolerance."""
    return invariance_residual(K, A) <= K.tol


def ortho_complement_within(K: Subspace, L: Subspace) -> Subspace:
    """``K minus L`` (orthogonal complement of ``L`` inside ``K``); requires ``L subset K``."""
    M = K.ambient
    if L.dim:
        r = L.Q - K.Q @ (adjoint(K.Q) @ L.Q)
        norms = np.linalg.norm(r, axis=0)
        bad = int(np.argmax(norms))
        if norms[bad] > M.tol:
            raise PreconditionError(
                f"subspace is not contained in K (residual {norms[bad]:.3e})",
                witness=L.basis[bad],
            )
    if K.dim == 0:
        return Subspace.zero(M)
    r = K.Q - L.Q @ (adjoint(L.Q) @ K.Q)
    return Subspace(M, orthonormalize(r, M.tol, ref=1.0))


@dataclass(frozen=True, eq=False)
class WanderingData:
    """``K = [K A_0] + W`` orthogonally, with ``W`` the right wandering subspace."""

    K: Subspace
    KA0: Subspace
    W: Subspace

    def reconstruction_residual(self) -> float:
        return self.K.distance(span_sum(self.KA0, self.W)) if self.K.dim else 0.0


def wandering_subspace(K: Subspace, A: "TracialSubalgebra", check: bool = True) -> WanderingData:
    """``W = K minus [K A_0]``."""
    if check and not is_invariant(K, A):
        raise PreconditionError("K is not right A-invariant")
    KA0 = right_module_span(K, A.a0_basis)
    W = ortho_complement_within(K, KA0)
    return WanderingData(K, KA0, W)


def is_simply_invariant(K: Subspace, A: "TracialSubalgebra") -> bool:
    """``[K A_0]`` is a proper subspace of ``K``."""
    if not is_invariant(K, A):
        raise PreconditionError("K is not right A-invariant")
    return right_module_span(K, A.a0_basis).dim < K.dim


def gram_diagonal_residual(W: Subspace, A: "TracialSubalgebra"):
    """Largest ``||w_i^* w_j - Phi(w_i^* w_j)||_2`` over basis pairs, with the witness pair."""
    if W.dim == 0:
        return 0.0, None
    M = W.ambient
    E = W.elements
    V = M.vec(products(np.conj(np.swapaxes(E, 1, 2)), E)).T
    R = V - A.d_space.Q @ (adjoint(A.d_space.Q) @ V)
    norms = np.linalg.norm(R, axis=0)
    idx = int(np.argmax(norms))
    return float(norms[idx]), divmod(idx, W.dim)
