"""Inner-outer (Beurling-Nevanlinna) factorization and the column L^p-sum identities."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra_core import (
    FinVNAlgebra,
    adjoint,
    is_projection,
    lp_norm,
    operator_norm,
    polar_decompose,
    trace_power,
)
from .beurling import (
    INVARIANT_FACTOR,
    TypeLabel,
    standard_generator,
    type_decomposition,
)
from .errors import DomainError, InvariantError, PreconditionError
from .subspace import Subspace, from_generators, products
from .tracial import TracialSubalgebra, expectation, is_maximal_subdiagonal


class Kind(enum.Enum):
    UNITARY = "Unitary"
    PARTIAL = "Partial"
    SUM = "Sum"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class InnerOuterFactorization:
    """``f = sum_i u_i h_i`` with partial isometries ``u_i`` and ``h_i`` in span(A)."""

    f: np.ndarray
    pairs: list[tuple[np.ndarray, np.ndarray]]
    kind: Kind
    algebra: TracialSubalgebra

    @property
    def u(self) -> np.ndarray:
        return self.pairs[0][0]

    @property
    def h(self) -> np.ndarray:
        return self.pairs[0][1]

    def reconstruct(self) -> np.ndarray:
        M = self.algebra.ambient
        return sum((u @ h for u, h in self.pairs), M.zeros())

    def residuals(self) -> dict[str, float]:
        A = self.algebra
        M = A.ambient
        one = M.identity()
        r = {"reconstruction": lp_norm(M, self.f - self.reconstruct(), 2)}
        r["partial_isometry"] = max(operator_norm(adjoint(u) @ u @ adjoint(u) @ u - adjoint(u) @ u)
                                    for u, _ in self.pairs)
        r["support_in_D"] = max(A.d_space.residual(adjoint(u) @ u) for u, _ in self.pairs)
        cross = [operator_norm(adjoint(uj) @ ui)
                 for i, (ui, _) in enumerate(self.pairs) for j, (uj, _) in enumerate(self.pairs) if i != j]
        r["orthogonal_ranges"] = max(cross, default=0.0)
        r["h_in_A"] = max(A.a_space.residual(h) for _, h in self.pairs)
        r["support_fixes_h"] = max(lp_norm(M, adjoint(u) @ u @ h - h, 2) for u, h in self.pairs)
        r["support_in_hA"] = max(hull(h, A).residual(adjoint(u) @ u) for u, h in self.pairs)
        if self.kind is Kind.UNITARY:
            u = self.u
            r["unitary"] = max(operator_norm(adjoint(u) @ u - one), operator_norm(u @ adjoint(u) - one))
            r["outer"] = 0.0 if is_outer(self.h, A) else 1.0
        return r


def hull(f, A: TracialSubalgebra) -> Subspace:
    return from_generators(A.ambient, products([f], A.a_basis))


def invariant_hull(f, A: TracialSubalgebra) -> Subspace:
    """``[f A] = span{f a : a in A}``."""
    return hull(A.ambient.check(f), A)


def is_wandering_vector(f, A: TracialSubalgebra) -> bool:
    """``f`` is orthogonal to ``[f A_0]``."""
    M = A.ambient
    f = M.check(f)
    nrm = lp_norm(M, f, 2)
    if nrm == 0:
        return True
    fA0 = from_generators(M, products([f], A.a0_basis))
    v = M.vec(f / nrm)
    return float(np.linalg.norm(adjoint(fA0.Q) @ v)) <= M.tol


def is_separating(f, A: TracialSubalgebra) -> bool:
    """``d -> f d`` is injective on D."""
    M = A.ambient
    images = products([M.check(f)], A.d_basis)
    if lp_norm(M, f, 2) == 0:
        return A.d_space.dim == 0
    return from_generators(M, images).dim == A.d_space.dim


def is_outer(h, A: TracialSubalgebra) -> bool:
    """``h`` lies in span(A) and ``span(h A) = span(A)``."""
    M = A.ambient
    h = M.check(h)
    scale = max(1.0, lp_norm(M, h, 2))
    if A.a_space.residual(h) > INVARIANT_FACTOR * M.tol * scale:
        return False
    return hull(h, A).equals(A.a_space, INVARIANT_FACTOR * M.tol)


def is_positive_invertible(M: FinVNAlgebra, f) -> bool:
    f = M.check(f)
    scale = max(1.0, operator_norm(f))
    if operator_norm(f - adjoint(f)) > M.tol * scale:
        return False
    lowest = min(float(np.linalg.eigvalsh((b + adjoint(b)) / 2).min()) for b in M.split(f))
    return lowest > M.tol * scale


def _require_subdiagonal(A: TracialSubalgebra) -> None:
    if not is_maximal_subdiagonal(A):
        raise PreconditionError("A is not maximal subdiagonal")


def _checked(fac: InnerOuterFactorization) -> InnerOuterFactorization:
    M = fac.algebra.ambient
    res = fac.residuals()
    scale = max(1.0, lp_norm(M, fac.f, 2))
    name = max(res, key=res.get)
    if res[name] > INVARIANT_FACTOR * M.tol * scale:
        raise InvariantError(f"factorization invariant {name!r} fails (residual {res[name]:.3e})",
                             residual=res[name], witness=name)
    return fac


def _normalized_inner(A: TracialSubalgebra, u, f) -> np.ndarray:
    """Polar part of ``u Phi(u^* f)`` when it has the same support as ``u``, else ``u``.

    Both generate ``u span(A)``; the polar part makes ``Phi(h)`` positive for ``h = v^* f``.
    """
    M = A.ambient
    v, _ = polar_decompose(M, u @ expectation(A, adjoint(u) @ f))
    if operator_norm(adjoint(v) @ v - adjoint(u) @ u) <= INVARIANT_FACTOR * M.tol:
        return v
    return u


def bn_factorize(f, A: TracialSubalgebra, rng: np.random.Generator | None = None):
    """``f = u h`` with ``u`` unitary and ``h`` outer, or ``None`` when no such factorization exists.

    Existence is decided by the standard-generator criterion on ``[f A]``.  The inner
    factor is then normalised to the polar part of the wandering component of ``f``,
    which makes ``Phi(h)`` positive (so ``f = 1`` gives ``u = h = 1``).
    """
    _require_subdiagonal(A)
    M = A.ambient
    f = M.check(f)
    K = invariant_hull(f, A)
    dec = type_decomposition(K, A, rng=rng)
    u = standard_generator(dec)
    if u is None:
        return None
    u = _normalized_inner(A, u, f)
    h = adjoint(u) @ f
    return _checked(InnerOuterFactorization(f, [(u, h)], Kind.UNITARY, A))


def partial_bn_factorize(f, A: TracialSubalgebra, rng: np.random.Generator | None = None):
    """``f = u h`` with ``u^* u`` a projection in D and ``span(h A) = (u^* u) span(A)``.

    Applies to wandering vectors and to positive invertible ``f``; the latter upgrade to
    a unitary inner factor.  Returns ``None`` for ``f = 0``.
    """
    _require_subdiagonal(A)
    M = A.ambient
    f = M.check(f)
    if is_positive_invertible(M, f):
        return bn_factorize(f, A, rng=rng)
    if not is_wandering_vector(f, A):
        raise PreconditionError("f must be a wandering vector or positive invertible", witness=f)
    if lp_norm(M, f, 2) == 0:
        return None
    dec = type_decomposition(invariant_hull(f, A), A, rng=rng)
    if len(dec.isometries) != 1:
        raise InvariantError(
            f"hull of a wandering vector produced {len(dec.isometries)} isometries; expected 1",
            witness=dec.isometries)
    # f lies in the wandering subspace [f D], so its own polar part is a valid generator
    u, _ = polar_decompose(M, f)
    kind = Kind.PARTIAL
    if operator_norm(adjoint(u) @ u - M.identity()) <= INVARIANT_FACTOR * M.tol:
        kind = Kind.UNITARY
    fac = _checked(InnerOuterFactorization(f, [(u, adjoint(u) @ f)], kind, A))
    span_h = hull(fac.h, A)
    target = from_generators(M, products([adjoint(u) @ u], A.a_basis))
    if not span_h.equals(target, INVARIANT_FACTOR * M.tol):
        raise InvariantError("span(h A) differs from (u^* u) span(A)", residual=span_h.distance(target))
    return fac


def inner_outer_sum(f, A: TracialSubalgebra, rng: np.random.Generator | None = None):
    """``f = sum_i u_i h_i`` when ``[f A]`` is type 1; ``None`` otherwise."""
    _require_subdiagonal(A)
    M = A.ambient
    f = M.check(f)
    dec = type_decomposition(invariant_hull(f, A), A, rng=rng)
    if dec.label is not TypeLabel.TYPE1:
        return None
    us = [_normalized_inner(A, u, f) for u in dec.isometries]
    pairs = [(u, adjoint(u) @ f) for u in us]
    return _checked(InnerOuterFactorization(f, pairs, Kind.SUM, A))


def column_sum_norm_residual(M: FinVNAlgebra, xs: Sequence, p: float, relative: bool = False) -> float:
    """``|tau(|sum x_i|^p) - tau((sum x_i^* x_i)^(p/2))|`` for a family with ``x_i^* x_j = 0``.

    Both sides are evaluated from singular values: ``(sum x_i^* x_i)^(1/2)`` has the
    singular values of the column ``[x_1; x_2; ...]``, which avoids square roots of
    eigenvalues near zero.  For ``p = inf`` the operator norms are compared.
    """
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p!r}")
    xs = [M.check(x) for x in xs]
    if not xs:
        return 0.0
    scale = max(1.0, max(operator_norm(x) for x in xs) ** 2)
    for i, xi in enumerate(xs):
        for j, xj in enumerate(xs):
            if i != j and operator_norm(adjoint(xi) @ xj) > INVARIANT_FACTOR * M.tol * scale:
                raise PreconditionError(f"x_{i}^* x_{j} != 0", witness=(i, j))
    total = M.split(sum(xs, M.zeros()))
    columns = [np.vstack(bs) for bs in zip(*(M.split(x) for x in xs))]
    s_sum = [np.linalg.svd(b, compute_uv=False) for b in total]
    s_col = [np.linalg.svd(b, compute_uv=False) for b in columns]
    if math.isinf(p):
        lhs = max(float(s.max(initial=0.0)) for s in s_sum)
        rhs = max(float(s.max(initial=0.0)) for s in s_col)
    else:
        lhs = sum(w * float(np.sum(s ** p)) for w, s in zip(M.weights, s_sum))
        rhs = sum(w * float(np.sum(s ** p)) for w, s in zip(M.weights, s_col))
    diff = abs(lhs - rhs)
    if relative:
        return diff / max(abs(lhs), abs(rhs), np.finfo(float).tiny)
    return diff


def _spectral_projections(M: FinVNAlgebra, v) -> list[np.ndarray]:
    """Spectral projections of a positive ``v`` for each distinct eigenvalue (clustered by tol)."""
    blocks = M.split(v)
    eigs = [np.linalg.eigh((b + adjoint(b)) / 2) for b in blocks]
    values = np.sort(np.concatenate([w for w, _ in eigs]))
    scale = max(1.0, float(np.abs(values).max(initial=0.0)))
    clusters = []
    for x in values:
        if not clusters or x - clusters[-1][-1] > M.tol * scale:
            clusters.append([x])
        else:
            clusters[-1].append(x)
    out = []
    for c in clusters:
        lo, hi = c[0] - M.tol * scale / 2, c[-1] + M.tol * scale / 2
        parts = []
        for w, vecs in eigs:
            sel = vecs[:, (w >= lo) & (w <= hi)]
            parts.append(sel @ adjoint(sel))
        out.append(M.element(parts))
    return out


def _istr_sides(M: FinVNAlgebra, v, e, d, p: float) -> tuple[float, float]:
    a = adjoint(d) @ v @ d
    b = adjoint(d) @ e @ d
    return trace_power(M, (a + adjoint(a)) / 2, p), trace_power(M, (b + adjoint(b)) / 2, p)


def istr_witness(M: FinVNAlgebra, v, e, p: float, trials: int = 32,
                 rng: np.random.Generator | None = None):
    """A ``d`` with ``tau((d^* v d)^p) != tau((d^* e d)^p)``, or ``None`` when ``v = e``.

    Candidates, in order: ``1``, ``1 - e``, ``e``, the spectral projections of ``v``,
    then ``trials`` seeded Gaussian elements.
    """
    if not p > 0 or math.isinf(p):
        raise DomainError(f"p must lie in (0, inf), got {p!r}")
    v, e = M.check(v), M.check(e)
    if not is_projection(M, e, INVARIANT_FACTOR * M.tol):
        raise PreconditionError("e must be a projection", witness=e)
    scale = max(1.0, operator_norm(v))
    if operator_norm(v - adjoint(v)) > M.tol * scale:
        raise PreconditionError("v must be Hermitian", witness=v)
    lowest = min(float(np.linalg.eigvalsh((b + adjoint(b)) / 2).min()) for b in M.split(v))
    if lowest < -M.tol * scale:
        raise PreconditionError(f"v must be positive semidefinite (eigenvalue {lowest:.3e})", witness=v)
    if operator_norm(v - e) <= M.tol * scale:
        return None
    one = M.identity()
    candidates = [one, one - e, e] + _spectral_projections(M, v)
    if rng is None:
        rng = np.random.default_rng(0)
    candidates += [M.random_element(rng) for _ in range(trials)]
    for d in candidates:
        lhs, rhs = _istr_sides(M, v, e, d, p)
        if abs(lhs - rhs) > M.tol * max(1.0, lhs, rhs):
            return d
    return None
