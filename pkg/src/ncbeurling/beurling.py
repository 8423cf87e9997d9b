"""Type 1 / type 2 decomposition of right invariant subspaces.

For a maximal subdiagonal A every invariant K splits as a column sum
``K = Z + sum_i u_i span(A)`` where Z is type 2 (``Z = [Z A_0]``) and the u_i are
partial isometries with ``u_i^* u_i`` in D and ``u_j^* u_i = 0`` for ``i != j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra_core import adjoint, operator_norm, polar_decompose
from .errors import InvariantError, PreconditionError
from .subspace import (
    Subspace,
    WanderingData,
    from_generators,
    gram_diagonal_residual,
    invariance_residual,
    ortho_complement_within,
    orthonormalize,
    products,
    right_module_span,
    span_sum,
    wandering_subspace,
)
from .tracial import TracialSubalgebra, expectation, is_maximal_subdiagonal

#: residual bound for decomposition invariants, in units of the ambient tolerance
INVARIANT_FACTOR = 10.0


class TypeLabel(enum.Enum):
    ZERO = "Zero"
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    MIXED = "Mixed"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class TypeDecomposition:
    """``K = Z + K1`` with ``K1 = span_i(u_i A)`` and the wandering data of K."""

    K: Subspace
    Z: Subspace
    isometries: list[np.ndarray]
    K1: Subspace
    wandering: WanderingData
    algebra: TracialSubalgebra
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def W(self) -> Subspace:
        return self.wandering.W

    @property
    def label(self) -> TypeLabel:
        if self.K.dim == 0:
            return TypeLabel.ZERO
        if self.Z.dim == 0:
            return TypeLabel.TYPE1
        if self.W.dim == 0:
            return TypeLabel.TYPE2
        return TypeLabel.MIXED

    def summand(self, i: int) -> Subspace:
        """``span(u_i A)``."""
        return from_generators(self.K.ambient, products([self.isometries[i]], self.algebra.a_basis))


def _rank(M, x) -> int:
    svals = [np.linalg.svd(b, compute_uv=False) for b in M.split(x)]
    top = max((float(s.max(initial=0.0)) for s in svals), default=0.0)
    if top == 0:
        return 0
    return sum(int(np.sum(s > M.tol * top)) for s in svals)


def extract_partial_isometries(
    W: Subspace,
    A: TracialSubalgebra,
    rng: np.random.Generator | None = None,
    order: Sequence[int] | None = None,
) -> list[np.ndarray]:
    """Split the wandering subspace as ``W = sum_i u_i span(D)`` (orthogonal sum).

    Each round chooses, among the residual basis vectors followed by one random
    combination of them, the element ``w`` maximising ``rank(w^* w)`` (first wins on
    ties), takes its polar part ``u``, and deflates the residual by the D-module
    projection ``v -> v - u Phi(u^* v)``.  The random combination attains the maximal
    support generically, so a wandering subspace with a separating vector yields a
    unitary in the first round.  ``order`` permutes the initial basis.
    """
    M = W.ambient
    if rng is None:
        rng = np.random.default_rng(0)
    resid, witness = gram_diagonal_residual(W, A)
    if resid > INVARIANT_FACTOR * M.tol:
        raise PreconditionError(
            f"W^*W is not contained in span(D) (residual {resid:.3e})",
            witness=None if witness is None else (W.basis[witness[0]], W.basis[witness[1]]),
        )
    Q = W.Q if order is None else W.Q[:, list(order)]
    isometries = []
    while Q.shape[1] > 0:
        elems = M.unvec(Q.T)
        c = rng.standard_normal(Q.shape[1]) + 1j * rng.standard_normal(Q.shape[1])
        combo = M.unvec(Q @ (c / np.linalg.norm(c)))
        candidates = list(elems) + [combo]
        ranks = [_rank(M, adjoint(w) @ w) for w in candidates]
        w = candidates[int(np.argmax(ranks))]
        u, _ = polar_decompose(M, w)
        isometries.append(u)
        # D-module projection onto u D: v - u Phi(u^* v)
        uv = expectation(A, np.einsum("ij,ajk->aik", adjoint(u), elems))
        deflated = elems - np.einsum("ij,ajk->aik", u, uv)
        newQ = orthonormalize(M.vec(deflated).T, M.tol, ref=1.0)
        if newQ.shape[1] >= Q.shape[1]:
            raise InvariantError("extraction made no progress; W is not a D-module", residual=resid)
        Q = newQ
    return isometries


def _require(K: Subspace, A: TracialSubalgebra) -> None:
    r = invariance_residual(K, A)
    if r > K.tol:
        raise PreconditionError(f"K is not right A-invariant (residual {r:.3e})")
    if not is_maximal_subdiagonal(A):
        raise PreconditionError("A is not maximal subdiagonal; the type decomposition is not licensed")


def decomposition_residuals(dec: TypeDecomposition) -> dict[str, float]:
    """Residual of every structural relation of the decomposition (all should vanish)."""
    A, M = dec.algebra, dec.K.ambient
    us = np.asarray(dec.isometries).reshape((-1,) + (M.total_dim,) * 2)
    r: dict[str, float] = {}

    def norm2(x):
        x = np.asarray(x)
        return float(np.max(np.linalg.norm(M.vec(x), axis=-1))) if x.size else 0.0

    uu = np.einsum("aji,ajk->aik", us.conj(), us)
    r["partial_isometry"] = max((operator_norm(e @ e - e) for e in uu), default=0.0)
    r["support_in_D"] = max((A.d_space.residual(e) for e in uu), default=0.0)
    cross = [adjoint(us[j]) @ us[i] for i in range(len(us)) for j in range(len(us)) if i != j]
    r["orthogonal_ranges"] = norm2(cross) if cross else 0.0
    r["u_star_Z"] = norm2(products(np.conj(np.swapaxes(us, 1, 2)), dec.Z.elements))
    r["Z_type2"] = dec.Z.distance(right_module_span(dec.Z, A.a0_basis))
    r["Z_star_K1"] = norm2(products(np.conj(np.swapaxes(dec.Z.elements, 1, 2)), dec.K1.elements))
    r["Z_star_W"] = norm2(products(np.conj(np.swapaxes(dec.Z.elements, 1, 2)), dec.W.elements))
    r["K_equals_Z_plus_K1"] = dec.K.distance(span_sum(dec.Z, dec.K1)) if dec.K.dim else 0.0
    r["u_in_K"] = max((dec.K.residual(u) for u in us), default=0.0)
    r["W_gram_in_D"] = gram_diagonal_residual(dec.W, A)[0]
    uD = from_generators(M, products(us, A.d_basis)) if len(us) else Subspace.zero(M)
    r["W_equals_sum_uD"] = dec.W.distance(uD)
    uA = from_generators(M, products(us, A.a_basis)) if len(us) else Subspace.zero(M)
    r["K1_equals_sum_uA"] = dec.K1.distance(uA)
    r["K1_wandering_is_W"] = wandering_subspace(dec.K1, A, check=False).W.distance(dec.W)
    return r


def dimension_count(dec: TypeDecomposition) -> tuple[int, int]:
    """``(dim Z + sum_i dim(u_i A), dim K)``."""
    total = dec.Z.dim + sum(dec.summand(i).dim for i in range(len(dec.isometries)))
    return total, dec.K.dim


def type_decomposition(
    K: Subspace,
    A: TracialSubalgebra,
    rng: np.random.Generator | None = None,
    order: Sequence[int] | None = None,
    validate: bool = True,
) -> TypeDecomposition:
    """The column-sum decomposition ``K = Z + sum_i u_i span(A)``."""
    _require(K, A)
    M = K.ambient
    wd = wandering_subspace(K, A, check=False)
    gram, witness = gram_diagonal_residual(wd.W, A)
    if gram > INVARIANT_FACTOR * M.tol:
        raise InvariantError(f"W^*W is not contained in span(D) (residual {gram:.3e})",
                             residual=gram, witness=witness)
    K1 = right_module_span(wd.W, A.a_basis)
    Z = ortho_complement_within(K, K1)
    isometries = extract_partial_isometries(wd.W, A, rng=rng, order=order)
    dec = TypeDecomposition(K, Z, isometries, K1, wd, A)
    if validate:
        res = decomposition_residuals(dec)
        dec.residuals.update(res)
        name = max(res, key=res.get)
        if res[name] > INVARIANT_FACTOR * M.tol:
            raise InvariantError(f"decomposition invariant {name!r} fails (residual {res[name]:.3e})",
                                 residual=res[name], witness=name)
    return dec


def classify_type(K: Subspace, A: TracialSubalgebra) -> TypeLabel:
    return type_decomposition(K, A, validate=False).label


def standard_generator(dec: TypeDecomposition):
    """A unitary ``u`` with ``K = span(u A)``, or ``None`` if the wandering subspace is not standard."""
    M = dec.K.ambient
    tol = INVARIANT_FACTOR * M.tol
    if dec.Z.dim != 0 or len(dec.isometries) != 1:
        return None
    u = dec.isometries[0]
    one = M.identity()
    if operator_norm(adjoint(u) @ u - one) > tol or operator_norm(u @ adjoint(u) - one) > tol:
        return None
    uA = from_generators(M, products([u], dec.algebra.a_basis))
    if not uA.equals(dec.K, tol):
        return None
    return u


def theta_projection(dec: TypeDecomposition, w) -> np.ndarray:
    """``theta(w) = sum_i u_i Phi(u_i^* w)``: the projection of K onto its wandering subspace
    along ``[K A_0]``."""
    M = dec.K.ambient
    w = M.check(w)
    if not dec.K.contains(w, INVARIANT_FACTOR * M.tol):
        raise PreconditionError("theta is defined on K only", witness=w)
    out = M.zeros()
    for u in dec.isometries:
        out = out + u @ expectation(dec.algebra, adjoint(u) @ w)
    return out


def column_projections(dec: TypeDecomposition, k) -> tuple[list[np.ndarray], np.ndarray]:
    """``([u_i u_i^* k]_i, (1 - sum_i u_i u_i^*) k)``."""
    M = dec.K.ambient
    parts = [u @ adjoint(u) @ k for u in dec.isometries]
    rest = k - sum(parts, M.zeros())
    return parts, rest
