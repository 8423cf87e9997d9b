"""Finite von Neumann algebras ``M = M_{n_1} + ... + M_{n_K}`` with a faithful tracial state.

Elements are stored as dense block-diagonal ``(N, N)`` complex arrays, ``N = sum(n_k)``.
Every L^p(M) coincides with M as a set in finite dimensions, so one array type serves
all exponents; only the norms depend on p.

The Hilbert space L^2(M) carries ``<x, y> = tau(y^* x)``.  The coordinate map
``vec(x) = concat_k sqrt(lambda_k) * ravel(x_k)`` is an isometry onto ``C^{dim M}``,
which lets subspaces be handled as ordinary orthonormal column matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainError, StructuralError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class FinVNAlgebra:
    """The pair (M, tau) with ``tau(x) = sum_k weights[k] * Tr(x_k)``.

    ``weights`` defaults to the uniform choice ``1 / sum(dims)``.
    """

    dims: tuple[int, ...]
    weights: tuple[float, ...] = field(default=None)
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims or any(n <= 0 for n in dims):
            raise StructuralError(f"block dimensions must be positive integers, got {self.dims!r}")
        if self.weights is None:
            total = sum(dims)
            weights = tuple(1.0 / total for _ in dims)
        else:
            weights = tuple(float(w) for w in self.weights)
        if len(weights) != len(dims):
            raise StructuralError("one weight per block is required")
        if any(not w > 0 for w in weights):
            raise StructuralError(f"trace weights must be positive (faithful state), got {weights}")
        mass = sum(w * n for w, n in zip(weights, dims))
        if abs(mass - 1.0) > 1e-12:
            raise StructuralError(f"sum(weight_k * n_k) must equal 1 (state), got {mass!r}")
        if not self.tol > 0:
            raise StructuralError("tolerance must be positive")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_blocks(cls, blocks: Sequence[tuple[int, float]], tol: float = DEFAULT_TOL):
        """Build from ``[(n_k, lambda_k), ...]`` pairs."""
        dims, weights = zip(*blocks) if blocks else ((), ())
        return cls(tuple(dims), tuple(weights), tol)

    @property
    def blocks(self) -> list[tuple[int, float]]:
        return list(zip(self.dims, self.weights))

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def dim(self) -> int:
        """Complex dimension of M (= dim L^2(M))."""
        return sum(n * n for n in self.dims)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return tuple(np.concatenate([[0], np.cumsum(self.dims)]).astype(int))

    @cached_property
    def slices(self) -> tuple[slice, ...]:
        o = self.offsets
        return tuple(slice(o[k], o[k + 1]) for k in range(len(self.dims)))

    @cached_property
    def _block_mask(self) -> np.ndarray:
        mask = np.zeros((self.total_dim, self.total_dim), dtype=bool)
        for s in self.slices:
            mask[s, s] = True
        return mask

    @cached_property
    def _vec_scale(self) -> np.ndarray:
        return np.concatenate([np.full(n * n, math.sqrt(w)) for n, w in zip(self.dims, self.weights)])

    @cached_property
    def weight_diagonal(self) -> np.ndarray:
        """Per-row trace weight, so that ``tau(x) = sum(weight_diagonal * diag(x))``."""
        return np.concatenate([np.full(n, w) for n, w in zip(self.dims, self.weights)])

    # -- element construction -------------------------------------------------

    def identity(self) -> np.ndarray:
        return np.eye(self.total_dim, dtype=complex)

    def zeros(self) -> np.ndarray:
        return np.zeros((self.total_dim, self.total_dim), dtype=complex)

    def element(self, blocks: Sequence) -> np.ndarray:
        """Assemble an element from its per-block matrices."""
        if len(blocks) != len(self.dims):
            raise StructuralError(f"expected {len(self.dims)} blocks, got {len(blocks)}")
        x = self.zeros()
        for k, (s, b) in enumerate(zip(self.slices, blocks)):
            b = np.asarray(b, dtype=complex)
            if b.shape != (self.dims[k], self.dims[k]):
                raise StructuralError(f"block {k} has shape {b.shape}, expected {(self.dims[k],) * 2}")
            x[s, s] = b
        return x

    def unit(self, block: int, i: int, j: int) -> np.ndarray:
        """Matrix unit ``e_ij`` (0-based) in the given block."""
        x = self.zeros()
        o = self.offsets[block]
        x[o + i, o + j] = 1.0
        return x

    def split(self, x) -> list[np.ndarray]:
        """Per-block views of ``x``."""
        x = self.check(x)
        return [x[s, s] for s in self.slices]

    def check(self, x) -> np.ndarray:
        """Return ``x`` as a complex array, raising if it does not conform to the blocks."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.total_dim, self.total_dim):
            raise StructuralError(f"element has shape {x.shape}, expected {(self.total_dim,) * 2}")
        off = x[~self._block_mask]
        if off.size and np.max(np.abs(off)) > 0:
            raise StructuralError("element has nonzero entries outside the diagonal blocks")
        return x

    # -- L^2 coordinates ----------------------------------------------------

    def vec(self, x) -> np.ndarray:
        """Isometric coordinates of ``x`` in ``C^{dim M}``; batched over leading axes."""
        x = np.asarray(x, dtype=complex)
        lead = x.shape[:-2]
        parts = [x[..., s, s].reshape(lead + (-1,)) for s in self.slices]
        return np.concatenate(parts, axis=-1) * self._vec_scale

    def vecs(self, xs) -> np.ndarray:
        """Stack ``vec`` of several elements as columns."""
        if len(xs) == 0:
            return np.zeros((self.dim, 0), dtype=complex)
        return self.vec(np.asarray(xs, dtype=complex)).T

    def unvec(self, v) -> np.ndarray:
        """Inverse of ``vec``; batched over leading axes."""
        v = np.asarray(v, dtype=complex) / self._vec_scale
        lead = v.shape[:-1]
        x = np.zeros(lead + (self.total_dim, self.total_dim), dtype=complex)
        pos = 0
        for n, s in zip(self.dims, self.slices):
            x[..., s, s] = v[..., pos:pos + n * n].reshape(lead + (n, n))
            pos += n * n
        return x

    def inner(self, x, y) -> complex:
        """``<x, y> = tau(y^* x)``."""
        return complex(np.vdot(self.vec(y), self.vec(x)))

    def standard_basis(self) -> list[np.ndarray]:
        """Matrix units rescaled to be orthonormal in L^2(M)."""
        out = []
        for k, (n, w) in enumerate(zip(self.dims, self.weights)):
            for i in range(n):
                for j in range(n):
                    out.append(self.unit(k, i, j) / math.sqrt(w))
        return out

    # -- random elements ----------------------------------------------------

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        """Complex Gaussian entries of unit variance, scaled to unit 2-norm."""
        x = self.element([
            (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
            for n in self.dims
        ])
        nrm = lp_norm(self, x, 2)
        return x / nrm if nrm > 0 else x

    def random_unitary(self, rng: np.random.Generator) -> np.ndarray:
        """Haar-distributed unitary, block by block."""
        blocks = []
        for n in self.dims:
            z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
            q, r = np.linalg.qr(z)
            d = np.diagonal(r)
            blocks.append(q * (d / np.abs(d)))
        return self.element(blocks)


def adjoint(x) -> np.ndarray:
    return np.asarray(x).conj().T


def conjugate_exponent(p: float) -> float:
    """``q`` with ``1/p + 1/q = 1``."""
    check_exponent(p)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def check_exponent(p: float) -> float:
    if not (p >= 1):
        raise DomainError(f"L^p exponent must satisfy p >= 1, got {p!r}")
    return float(p)


def trace(M: FinVNAlgebra, x) -> complex:
    """``tau(x) = sum_k lambda_k Tr(x_k)``."""
    x = M.check(x)
    return complex(np.sum(M.weight_diagonal * np.diagonal(x)))


def singular_values(M: FinVNAlgebra, x) -> list[np.ndarray]:
    return [np.linalg.svd(b, compute_uv=False) for b in M.split(x)]


def lp_norm(M: FinVNAlgebra, x, p: float) -> float:
    """``tau(|x|^p)^(1/p)``; the operator norm when ``p = inf``."""
    check_exponent(p)
    svals = singular_values(M, x)
    if math.isinf(p):
        return float(max(float(s.max(initial=0.0)) for s in svals))
    total = sum(w * float(np.sum(s ** p)) for w, s in zip(M.weights, svals))
    return total ** (1.0 / p)


def operator_norm(x) -> float:
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def _hermitian_eig(M: FinVNAlgebra, x):
    """Per-block Hermitian eigendecompositions after a positivity check."""
    x = M.check(x)
    scale = max(1.0, operator_norm(x))
    asym = operator_norm(x - adjoint(x))
    if asym > M.tol * scale:
        raise DomainError(f"element is not Hermitian (|x - x*| = {asym:.3e})")
    eigs = [np.linalg.eigh((b + adjoint(b)) / 2) for b in M.split(x)]
    lowest = min((float(w.min()) for w, _ in eigs if w.size), default=0.0)
    if lowest < -M.tol * scale:
        raise DomainError(f"element is not positive semidefinite: eigenvalue {lowest:.6e}")
    return eigs


def _zero_cutoff(M: FinVNAlgebra, eigs) -> float:
    top = max((float(np.max(np.abs(w))) for w, _ in eigs if w.size), default=0.0)
    return M.tol * top if top > 0 else M.tol


def positive_power(M: FinVNAlgebra, x, s: float) -> np.ndarray:
    """``x^s`` for positive semidefinite ``x``; zero eigenvalues stay zero.

    For ``s < 0`` this is the pseudo-inverse power on the support of ``x``.
    """
    eigs = _hermitian_eig(M, x)
    cut = _zero_cutoff(M, eigs)
    blocks = []
    for w, v in eigs:
        keep = w > cut
        f = np.zeros_like(w)
        f[keep] = w[keep] ** s
        blocks.append((v * f) @ adjoint(v))
    return M.element(blocks)


def support_projection(M: FinVNAlgebra, x) -> np.ndarray:
    """Orthogonal projection onto the range of a positive semidefinite ``x``."""
    eigs = _hermitian_eig(M, x)
    cut = _zero_cutoff(M, eigs)
    blocks = []
    for w, v in eigs:
        vk = v[:, w > cut]
        blocks.append(vk @ adjoint(vk))
    return M.element(blocks)


def trace_power(M: FinVNAlgebra, x, s: float) -> float:
    """``tau(x^s)`` for positive semidefinite ``x`` and ``s > 0``.

    Eigenvalues at rounding level are treated as zero, as in :func:`positive_power`;
    otherwise ``s < 1`` would magnify them (``1e-18 ** 0.5 = 1e-9``).
    """
    eigs = _hermitian_eig(M, x)
    cut = _zero_cutoff(M, eigs)
    total = 0.0
    for lam, (w, _) in zip(M.weights, eigs):
        total += lam * float(np.sum(w[w > cut] ** s))
    return total


def polar_decompose(M: FinVNAlgebra, x) -> tuple[np.ndarray, np.ndarray]:
    """``x = u |x|`` with ``|x| = (x^* x)^{1/2}`` and ``u^* u`` the support of ``|x|``."""
    blocks_u, blocks_p = [], []
    parts = M.split(x)
    svals = [np.linalg.svd(b, compute_uv=False) for b in parts]
    top = max((float(s.max(initial=0.0)) for s in svals), default=0.0)
    cut = M.tol * top if top > 0 else M.tol
    for b in parts:
        w, s, vh = np.linalg.svd(b)
        keep = s > cut
        wk, sk, vk = w[:, keep], s[keep], vh[keep, :]
        blocks_u.append(wk @ vk)
        blocks_p.append((adjoint(vk) * sk) @ vk)
    return M.element(blocks_u), M.element(blocks_p)


def is_projection(M: FinVNAlgebra, e, tol: float | None = None) -> bool:
    tol = M.tol if tol is None else tol
    e = M.check(e)
    return operator_norm(e - adjoint(e)) <= tol and operator_norm(e @ e - e) <= tol
