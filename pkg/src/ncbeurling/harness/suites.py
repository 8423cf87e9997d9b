"""Property suites over seeded random instances, collected into a :class:`Report`."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

import numpy as np

from ..algebra_core import FinVNAlgebra, adjoint, lp_norm, operator_norm, positive_power
from ..beurling import (
    column_projections,
    decomposition_residuals,
    dimension_count,
    standard_generator,
    theta_projection,
    type_decomposition,
)
from ..errors import NCBeurlingError, PreconditionError
from ..factorization import (
    bn_factorize,
    column_sum_norm_residual,
    hull,
    is_outer,
    istr_witness,
    partial_bn_factorize,
)
from ..subspace import Subspace, from_generators, gram_diagonal_residual, wandering_subspace
from ..tracial import (
    TracialSubalgebra,
    build_from_basis,
    is_maximal_subdiagonal,
    unique_extension_witness,
)
from .instances import InstanceSpec, random_invariant_subspace, random_nest_algebra

COLUMN_NORM_EXPONENTS = (1.0, 1.5, 2.0, 3.0, 4.0)
THETA_EXPONENTS = (1.0, 2.0, 3.0, math.inf)
ISTR_EXPONENTS = (0.5, 1.0, 1.5, 2.0, 3.0)

# acceptance bounds
DECOMPOSITION_BOUND = 1e-8
COLUMN_NORM_BOUND = 1e-10
THETA_SLACK = 1e-9
THETA_KERNEL_BOUND = 1e-8
FACTOR_BOUND = 1e-8
UNITARY_BOUND = 1e-9
ISTR_SEPARATION = 1e-3


class UsageError(NCBeurlingError, ValueError):
    """Bad command-line or suite request."""


def _jsonable(x):
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return np.stack([x.real, x.imag], axis=-1).tolist()
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


@dataclass
class CheckRecord:
    name: str
    anchor: str
    passed: bool
    residual: float
    trials: int = 1
    failures: int = 0
    witness: Any = None

    def __post_init__(self):
        if not self.passed and self.failures == 0:
            self.failures = self.trials

    def to_dict(self) -> dict:
        return _jsonable({
            "name": self.name, "anchor": self.anchor, "status": "pass" if self.passed else "fail",
            "residual": self.residual, "trials": self.trials, "failures": self.failures,
            "witness": self.witness,
        })


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)
    wall_clock: float = 0.0
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def summary(self) -> dict[str, int]:
        n_fail = sum(not r.passed for r in self.records)
        return {"checks": len(self.records), "passed": len(self.records) - n_fail, "failed": n_fail}

    def extend(self, records) -> None:
        self.records.extend(records)

    def to_dict(self) -> dict:
        return {"summary": self.summary, "passed": self.passed, "wall_clock": self.wall_clock,
                "info": _jsonable(self.info), "checks": [r.to_dict() for r in self.records]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_text(self) -> str:
        lines = [f"{k}: {v}" for k, v in self.info.items() if not isinstance(v, (dict, list))]
        for r in self.records:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"[{status}] {r.name:<36} residual={r.residual:.3e} "
                         f"trials={r.trials} failures={r.failures}  ({r.anchor})")
        s = self.summary
        lines.append(f"{s['passed']}/{s['checks']} checks passed in {self.wall_clock:.2f}s")
        return "\n".join(lines)


class _Check:
    """Accumulates the worst residual and the first failing witness over trials."""

    def __init__(self, name: str, anchor: str, bound: float | None = None):
        self.name, self.anchor, self.bound = name, anchor, bound
        self.worst = 0.0
        self.trials = 0
        self.failures = 0
        self.witness = None

    def observe(self, residual: float, witness: Callable[[], Any] | Any = None, ok: bool | None = None):
        self.trials += 1
        residual = float(residual)
        if ok is None:
            ok = residual <= self.bound
        if not math.isnan(residual):
            self.worst = max(self.worst, residual)
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness() if callable(witness) else witness
        return ok

    def error(self, exc: Exception, context: dict):
        self.trials += 1
        self.failures += 1
        self.worst = math.inf
        if self.witness is None:
            self.witness = dict(context, error=f"{type(exc).__name__}: {exc}",
                                payload=getattr(exc, "witness", None))

    def record(self) -> CheckRecord:
        return CheckRecord(self.name, self.anchor, self.failures == 0 and self.trials > 0,
                           self.worst, self.trials, self.failures, self.witness)


@dataclass
class SuiteContext:
    spec: InstanceSpec
    trials: int = 100
    exponents: tuple[float, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.seed is None:
            self.seed = self.spec.seed
        self._fixed = None

    def rng(self, suite: str, trial: int) -> np.random.Generator:
        return np.random.default_rng([int(self.seed), SUITE_IDS[suite], trial])

    def algebra(self, rng: np.random.Generator) -> TracialSubalgebra:
        """The instance algebra, or a fresh random nest algebra in random-nest mode."""
        if self.spec.random_nest is not None:
            opts = self.spec.random_nest
            return random_nest_algebra(rng, int(opts.get("max_dim", 5)), int(opts.get("max_blocks", 3)),
                                       self.spec.tolerance)
        if self._fixed is None:
            self._fixed = self.spec.subalgebra()
        return self._fixed

    def draws(self, suite: str, n: int | None = None) -> Iterator[tuple[int, TracialSubalgebra, np.random.Generator]]:
        for t in range(self.trials if n is None else n):
            rng = self.rng(suite, t)
            yield t, self.algebra(rng), rng

    def ps(self, default) -> tuple[float, ...]:
        return tuple(self.exponents) if self.exponents else tuple(default)


def _draw_subspace(A: TracialSubalgebra, rng: np.random.Generator) -> Subspace:
    # the plain generator almost always returns all of M; low-rank draws give proper subspaces
    mode = int(rng.integers(3))
    if mode == 0:
        return random_invariant_subspace(A, rng)
    return random_invariant_subspace(A, rng, k=mode, max_rank=max(A.ambient.dims))


def _ctx(t, A, **extra):
    return dict(trial=t, dims=list(A.ambient.dims), **extra)


# -- suites -------------------------------------------------------------------


def suite_decomposition(ctx: SuiteContext) -> list[CheckRecord]:
    inv = _Check("decomposition-invariants", "column-sum decomposition K = Z + sum u_i A", DECOMPOSITION_BOUND)
    dims = _Check("decomposition-dimension-count", "dim Z + sum dim(u_i A) = dim K", 0.0)
    gram = _Check("wandering-gram-in-diagonal", "W^* W lies in span(D)", DECOMPOSITION_BOUND)
    for t, A, rng in ctx.draws("decomposition"):
        K = _draw_subspace(A, rng)
        try:
            dec = type_decomposition(K, A, rng=rng, validate=False)
        except NCBeurlingError as exc:
            for c in (inv, dims, gram):
                c.error(exc, _ctx(t, A))
            continue
        res = decomposition_residuals(dec)
        worst = max(res, key=res.get)
        inv.observe(res[worst], lambda: _ctx(t, A, invariant=worst, K=K.elements))
        total, dk = dimension_count(dec)
        dims.observe(abs(total - dk), lambda: _ctx(t, A, counted=total, dim_K=dk))
        g, pair = gram_diagonal_residual(dec.W, A)
        gram.observe(g, lambda: _ctx(t, A, pair=[dec.W.basis[pair[0]], dec.W.basis[pair[1]]]))
    return [inv.record(), dims.record(), gram.record()]


def suite_uniqueness(ctx: SuiteContext) -> list[CheckRecord]:
    zc = _Check("uniqueness-Z", "type 2 part does not depend on the extraction", DECOMPOSITION_BOUND)
    kc = _Check("uniqueness-K1", "type 1 part does not depend on the extraction", DECOMPOSITION_BOUND)
    for t, A, rng in ctx.draws("uniqueness"):
        K = _draw_subspace(A, rng)
        try:
            first = type_decomposition(K, A, rng=np.random.default_rng(rng.integers(2**32)), validate=False)
            order = rng.permutation(first.W.dim)
            second = type_decomposition(K, A, rng=np.random.default_rng(rng.integers(2**32)),
                                        order=order, validate=False)
        except NCBeurlingError as exc:
            zc.error(exc, _ctx(t, A))
            kc.error(exc, _ctx(t, A))
            continue
        zc.observe(first.Z.distance(second.Z), lambda: _ctx(t, A, order=order, K=K.elements))
        kc.observe(first.K1.distance(second.K1), lambda: _ctx(t, A, order=order, K=K.elements))
    return [zc.record(), kc.record()]


def suite_column_norm(ctx: SuiteContext) -> list[CheckRecord]:
    ps = ctx.ps(COLUMN_NORM_EXPONENTS)
    checks = {p: _Check(f"column-sum-norm[p={p:g}]", "||sum x_i||_p^p = tau((sum x_i^* x_i)^(p/2))",
                        COLUMN_NORM_BOUND) for p in ps}
    proj = _Check("column-projections-contractive", "||u_i u_i^* k||_p <= ||k||_p", THETA_SLACK)
    for t, A, rng in ctx.draws("column-norm"):
        M = A.ambient
        K = _draw_subspace(A, rng)
        try:
            dec = type_decomposition(K, A, rng=rng, validate=False)
        except NCBeurlingError as exc:
            for c in list(checks.values()) + [proj]:
                c.error(exc, _ctx(t, A))
            continue
        family = [u @ A.a_space.random_element(rng) for u in dec.isometries]
        if dec.Z.dim:
            family.append(dec.Z.random_element(rng))
        for p, c in checks.items():
            try:
                r = column_sum_norm_residual(M, family, p, relative=True)
            except PreconditionError as exc:
                c.error(exc, _ctx(t, A, family=family))
                continue
            c.observe(r, lambda: _ctx(t, A, p=p, family=family))
        k = K.random_element(rng)
        parts, _ = column_projections(dec, k)
        for p in ps:
            gap = max((lp_norm(M, x, p) - lp_norm(M, k, p) for x in parts), default=0.0)
            proj.observe(gap, lambda: _ctx(t, A, p=p, k=k))
    return [c.record() for c in checks.values()] + [proj.record()]


def suite_theta(ctx: SuiteContext) -> list[CheckRecord]:
    ps = ctx.ps(THETA_EXPONENTS)
    checks = {p: _Check(f"theta-contraction[p={p:g}]", "||theta(w)||_p <= ||w||_p", THETA_SLACK) for p in ps}
    kern = _Check("theta-kernel", "theta vanishes on [K A_0]", THETA_KERNEL_BOUND)
    idem = _Check("theta-idempotent-onto-W", "theta is a projection onto W", DECOMPOSITION_BOUND)
    for t, A, rng in ctx.draws("theta"):
        M = A.ambient
        K = _draw_subspace(A, rng)
        try:
            dec = type_decomposition(K, A, rng=rng, validate=False)
        except NCBeurlingError as exc:
            for c in list(checks.values()) + [kern, idem]:
                c.error(exc, _ctx(t, A))
            continue
        w = K.random_element(rng)
        tw = theta_projection(dec, w)
        for p, c in checks.items():
            c.observe(lp_norm(M, tw, p) - lp_norm(M, w, p), lambda: _ctx(t, A, p=p, w=w))
        k0 = dec.wandering.KA0.random_element(rng)
        kern.observe(lp_norm(M, theta_projection(dec, k0), 2), lambda: _ctx(t, A, w=k0))
        r = max(lp_norm(M, theta_projection(dec, tw) - tw, 2), dec.W.residual(tw))
        idem.observe(r, lambda: _ctx(t, A, w=w))
    return [c.record() for c in checks.values()] + [kern.record(), idem.record()]


def _random_positive_invertible(M: FinVNAlgebra, rng: np.random.Generator) -> np.ndarray:
    b = M.random_element(rng)
    f = b @ adjoint(b) + float(rng.uniform(0.05, 1.0)) * M.identity()
    f = (f + adjoint(f)) / 2
    return f / operator_norm(f)


def _random_wandering_vector(A: TracialSubalgebra, rng: np.random.Generator):
    for _ in range(8):
        K = _draw_subspace(A, rng)
        W = wandering_subspace(K, A, check=False).W
        if W.dim:
            return W.random_element(rng)
    raise PreconditionError("no nonzero wandering subspace found")


def suite_factorization(ctx: SuiteContext) -> list[CheckRecord]:
    bn = _Check("bn-factorization", "positive invertible f = u h, u unitary, h outer", FACTOR_BOUND)
    un = _Check("bn-inner-factor-unitary", "u^* u = u u^* = 1", UNITARY_BOUND)
    outer = _Check("bn-outer-factor", "[h A] = [A]", 0.0)
    part = _Check("partial-bn-factorization", "wandering f = u h with u^* u in D", FACTOR_BOUND)
    std = _Check("standard-generator", "K = [w A] for unitary w has a unitary generator", DECOMPOSITION_BOUND)
    nonstd = _Check("standard-generator-absent", "no unitary generator for [e A] with e a proper projection", 0.0)
    for t, A, rng in ctx.draws("factorization"):
        M = A.ambient
        f = _random_positive_invertible(M, rng)
        try:
            fac = bn_factorize(f, A, rng=rng)
        except NCBeurlingError as exc:
            for c in (bn, un, outer):
                c.error(exc, _ctx(t, A, f=f))
        else:
            if fac is None:
                for c in (bn, un, outer):
                    c.observe(math.inf, lambda: _ctx(t, A, f=f, reason="no factorization"), ok=False)
            else:
                bn.observe(lp_norm(M, f - fac.u @ fac.h, 2), lambda: _ctx(t, A, f=f))
                one = M.identity()
                r = max(operator_norm(adjoint(fac.u) @ fac.u - one), operator_norm(fac.u @ adjoint(fac.u) - one))
                un.observe(r, lambda: _ctx(t, A, f=f, u=fac.u))
                ok = is_outer(fac.h, A)
                outer.observe(0.0 if ok else 1.0, lambda: _ctx(t, A, h=fac.h), ok=ok)
        try:
            g = _random_wandering_vector(A, rng)
            pf = partial_bn_factorize(g, A, rng=rng)
            res = pf.residuals()
            worst = max(res, key=res.get)
            part.observe(res[worst], lambda: _ctx(t, A, f=g, invariant=worst))
        except NCBeurlingError as exc:
            part.error(exc, _ctx(t, A))
    for t, A, rng in ctx.draws("factorization", max(1, ctx.trials // 4)):
        M = A.ambient
        w = M.random_unitary(rng)
        K = hull(w, A)
        try:
            dec = type_decomposition(K, A, rng=rng, validate=False)
            u = standard_generator(dec)
        except NCBeurlingError as exc:
            std.error(exc, _ctx(t, A, w=w))
            continue
        if u is None:
            std.observe(math.inf, lambda: _ctx(t, A, w=w, reason="no unitary generator"), ok=False)
        else:
            std.observe(hull(u, A).distance(K), lambda: _ctx(t, A, w=w, u=u))
        if M.total_dim > 1:
            e = M.unit(0, 0, 0) if M.dims[0] > 1 else M.identity() - M.unit(0, 0, 0)
            if A.d_space.contains(e):
                try:
                    got = standard_generator(type_decomposition(hull(e, A), A, rng=rng, validate=False))
                except NCBeurlingError as exc:
                    nonstd.error(exc, _ctx(t, A, e=e))
                    continue
                nonstd.observe(0.0 if got is None else 1.0, lambda: _ctx(t, A, e=e, u=got), ok=got is None)
    out = [bn.record(), un.record(), outer.record(), part.record(), std.record()]
    if nonstd.trials:
        out.append(nonstd.record())
    return out


def _random_projection_pair(M: FinVNAlgebra, rng: np.random.Generator):
    """A random projection ``P`` and its complement, built from complementary unitary columns."""
    ps, qs = [], []
    for n in M.dims:
        q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        r = int(rng.integers(0, n + 1))
        ps.append(q[:, :r] @ adjoint(q[:, :r]))
        qs.append(q[:, r:] @ adjoint(q[:, r:]))
    return M.element(ps), M.element(qs)


def _random_projection(M: FinVNAlgebra, rng: np.random.Generator) -> np.ndarray:
    return _random_projection_pair(M, rng)[0]


def _random_istr_pair(M: FinVNAlgebra, rng: np.random.Generator):
    e = _random_projection(M, rng)
    while True:
        kind = int(rng.integers(3))
        if kind == 0:
            b = M.random_element(rng)
            v = b @ adjoint(b)
            v = v / operator_norm(v)
        elif kind == 1:
            b = M.random_element(rng)
            bump = b @ adjoint(b)
            v = e + float(rng.uniform(2e-3, 1e-1)) * bump / operator_norm(bump)
        else:
            v = _random_projection(M, rng)
        v = (v + adjoint(v)) / 2
        if operator_norm(v - e) > ISTR_SEPARATION:
            return v, e


def suite_istr(ctx: SuiteContext) -> list[CheckRecord]:
    ps = [p for p in ctx.ps(ISTR_EXPONENTS) if math.isfinite(p) and p > 0]
    found = _Check("istr-witness-found", "v != e is detected by some d", 0.0)
    sound = _Check("istr-witness-sound", "tau((d^* v d)^p) != tau((d^* e d)^p) at the witness", 0.0)
    equal = _Check("istr-no-witness-when-equal", "v = e admits no witness", 0.0)
    for t, A, rng in ctx.draws("istr"):
        M = A.ambient
        v, e = _random_istr_pair(M, rng)
        p = float(ps[int(rng.integers(len(ps)))])
        d = istr_witness(M, v, e, p, rng=rng)
        if d is None:
            found.observe(math.inf, lambda: _ctx(t, A, v=v, e=e, p=p), ok=False)
        else:
            found.observe(0.0, ok=True)
            # independent evaluation: tau((d^* x d)^p) = ||x^(1/2) d||_{2p}^{2p}
            lhs = lp_norm(M, positive_power(M, v, 0.5) @ d, 2 * p) ** (2 * p)
            rhs = lp_norm(M, e @ d, 2 * p) ** (2 * p)
            ok = abs(lhs - rhs) > M.tol * max(1.0, lhs, rhs)
            sound.observe(0.0 if ok else 1.0, lambda: _ctx(t, A, v=v, e=e, p=p, d=d, sides=[lhs, rhs]), ok=ok)
        same = istr_witness(M, e, e, p, rng=rng)
        equal.observe(0.0 if same is None else 1.0, lambda: _ctx(t, A, e=e, d=same), ok=same is None)
    return [found.record(), sound.record(), equal.record()]


def control_algebra() -> TracialSubalgebra:
    """``span{1, e_12}`` in ``M_2``: tracial but not maximal subdiagonal."""
    M = FinVNAlgebra((2,))
    return build_from_basis(M, [M.unit(0, 0, 1)])


def suite_negative_control(ctx: SuiteContext) -> list[CheckRecord]:
    A = None
    if ctx.spec.random_nest is None:
        candidate = ctx.algebra(ctx.rng("negative-control", 0))
        if not is_maximal_subdiagonal(candidate):
            A = candidate
    canonical = A is None
    if canonical:
        A = control_algebra()
    M = A.ambient
    info = {"dims": list(M.dims), "dim_A": A.dim, "dim_D": A.d_space.dim}
    sub = CheckRecord("control-not-maximal-subdiagonal", "A + A^* does not span M",
                      not is_maximal_subdiagonal(A), 0.0, witness=info)
    g = unique_extension_witness(A)
    ext = CheckRecord("control-extension-witness", "a positive g annihilating A_0 outside D",
                      g is not None, 0.0, witness={"g": g} if g is not None else info)
    try:
        type_decomposition(Subspace.full(M), A, validate=False)
        refused = CheckRecord("control-decomposition-refused", "the decomposition requires maximality",
                              False, 1.0, witness=info)
    except PreconditionError:
        refused = CheckRecord("control-decomposition-refused", "the decomposition requires maximality", True, 0.0)
    candidates = []
    if canonical:
        candidates.append(from_generators(M, [M.unit(0, 0, 0), M.unit(0, 0, 1), M.unit(0, 1, 1)]))
    best, best_witness = 0.0, None
    tries = 0
    for t in range(max(1, ctx.trials)):
        rng = ctx.rng("negative-control", t)
        K = candidates[t] if t < len(candidates) else _draw_subspace(A, rng)
        tries += 1
        W = wandering_subspace(K, A, check=False).W
        r, pair = gram_diagonal_residual(W, A)
        if r > best:
            best = r
            best_witness = {"trial": t, "K": K.elements, "W": W.elements,
                            "pair": [W.basis[pair[0]], W.basis[pair[1]]], "residual": r}
        if best > 1e3 * M.tol:
            break
    gram = CheckRecord("control-gram-violation", "some invariant K has W^* W outside span(D)",
                       best > 1e3 * M.tol, best, trials=tries, witness=best_witness)
    return [sub, ext, refused, gram]


def suite_upper_triangular_purity(ctx: SuiteContext) -> list[CheckRecord]:
    c = _Check("upper-triangular-no-type2", "every invariant subspace of a nest algebra has Z = 0", 0.0)
    for t, A, rng in ctx.draws("upper-triangular-purity"):
        K = _draw_subspace(A, rng)
        try:
            dec = type_decomposition(K, A, rng=rng, validate=False)
        except NCBeurlingError as exc:
            c.error(exc, _ctx(t, A))
            continue
        c.observe(dec.Z.dim, lambda: _ctx(t, A, K=K.elements, Z=dec.Z.elements))
    return [c.record()]


def _zero_product_pair(M: FinVNAlgebra, rng: np.random.Generator):
    P, Q = _random_projection_pair(M, rng)
    return P @ M.random_element(rng), Q @ M.random_element(rng)


def suite_zero_product_orthogonality(ctx: SuiteContext) -> list[CheckRecord]:
    agree = _Check("zero-product-iff-orthogonal-hulls", "f^* g = 0 iff [f A] is orthogonal to [g A]", 0.0)
    oracle = _Check("orthogonality-oracle-agrees", "pairwise inner products <f a, g b> vs projector test", 0.0)
    n_zero = ctx.trials // 4
    n_zero_seen = 0
    for t, A, rng in ctx.draws("zero-product-orthogonality"):
        M = A.ambient
        if t < n_zero:
            f, g = _zero_product_pair(M, rng)
        else:
            f, g = M.random_element(rng), M.random_element(rng)
        nf, ng = max(operator_norm(f), 1e-300), max(operator_norm(g), 1e-300)
        tol = 10 * M.tol
        zero = operator_norm(adjoint(f) @ g) <= tol * nf * ng
        n_zero_seen += zero
        Hf, Hg = hull(f, A), hull(g, A)
        orth = Hf.is_orthogonal_to(Hg, tol)
        # brute force: <f a, g b> = tau(b^* g^* f a) over basis pairs of A
        fa, gb = M.vec(f @ A.a_basis), M.vec(g @ A.a_basis)
        scale = max(1.0, float(np.abs(fa).max(initial=0.0)) * float(np.abs(gb).max(initial=0.0)) * M.dim)
        brute = float(np.abs(gb.conj() @ fa.T).max(initial=0.0)) <= tol * scale
        agree.observe(0.0 if zero == orth else 1.0,
                      lambda: _ctx(t, A, f=f, g=g, zero_product=zero, orthogonal=orth), ok=zero == orth)
        oracle.observe(0.0 if brute == orth else 1.0,
                       lambda: _ctx(t, A, f=f, g=g, brute=brute, orthogonal=orth), ok=brute == orth)
    rec = [agree.record(), oracle.record()]
    rec.append(CheckRecord("zero-product-pairs-present", "constructed pairs with f^* g = 0",
                           n_zero_seen >= n_zero, float(n_zero_seen), trials=ctx.trials,
                           witness={"constructed": n_zero, "detected": n_zero_seen}))
    return rec


SUITES: dict[str, Callable[[SuiteContext], list[CheckRecord]]] = {
    "decomposition": suite_decomposition,
    "uniqueness": suite_uniqueness,
    "column-norm": suite_column_norm,
    "theta": suite_theta,
    "factorization": suite_factorization,
    "istr": suite_istr,
    "negative-control": suite_negative_control,
    "upper-triangular-purity": suite_upper_triangular_purity,
    "zero-product-orthogonality": suite_zero_product_orthogonality,
}
SUITE_IDS = {name: i for i, name in enumerate(SUITES)}


def run_suite(spec: InstanceSpec, suites, trials: int = 100, exponents=None, seed: int | None = None) -> Report:
    """Run the named suites against ``spec`` and collect a :class:`Report`."""
    suites = list(suites)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    ctx = SuiteContext(spec, trials, tuple(exponents) if exponents else None, seed)
    report = Report(info={"suites": suites, "trials": trials, "seed": ctx.seed})
    start = time.perf_counter()
    for name in suites:
        report.extend(SUITES[name](ctx))
    report.wall_clock = time.perf_counter() - start
    return report
