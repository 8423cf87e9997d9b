"""Acceptance criteria, run at their stated tolerances.

Each test records one PASS/FAIL line; the lines are printed in the pytest terminal
summary, or directly when this file is run as a script.
"""

import math
import sys
import time

import numpy as np
import pytest

from ncbeurling import FinVNAlgebra, NestSpec, standard_generator, type_decomposition
from ncbeurling.harness import InstanceSpec, run_suite
from ncbeurling.subspace import from_generators

RESULTS: dict[int, str] = {}
_CACHE: dict[tuple, object] = {}

RANDOM_NESTS = InstanceSpec((1,), (1.0,), random_nest={"max_dim": 5, "max_blocks": 3}, seed=2024)


def report(spec, suite, trials, exponents=None):
    key = (id(spec), suite, trials, exponents)
    if key not in _CACHE:
        _CACHE[key] = run_suite(spec, [suite], trials=trials, exponents=exponents)
    return {r.name: r for r in _CACHE[key].records}


def upper_triangular(n, seed):
    return InstanceSpec((n,), (1.0 / n,), nest=NestSpec.upper_triangular((n,)), seed=seed)


def verdict(number, title, checks):
    """Record and return whether every named check passed."""
    ok = all(passed for passed, _ in checks)
    detail = "; ".join(d for _, d in checks)
    RESULTS[number] = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    print(RESULTS[number])
    return ok


def line(rec, bound=None):
    extra = f" <= {bound:g}" if bound is not None else ""
    ok = rec.passed and (bound is None or rec.residual <= bound)
    return ok, f"{rec.name} worst={rec.residual:.2e}{extra} ({rec.trials - rec.failures}/{rec.trials})"


def test_criterion_1_decomposition_soundness():
    r = report(RANDOM_NESTS, "decomposition", 200)
    assert verdict(1, "decomposition soundness", [
        line(r["decomposition-invariants"], 1e-8),
        line(r["decomposition-dimension-count"]),
    ]) and r["decomposition-invariants"].trials == 200


def test_criterion_2_uniqueness():
    r = report(RANDOM_NESTS, "uniqueness", 200)
    assert verdict(2, "uniqueness under permuted extraction", [
        line(r["uniqueness-Z"], 1e-8), line(r["uniqueness-K1"], 1e-8)])


def test_criterion_3_wandering_gram():
    r = report(RANDOM_NESTS, "decomposition", 200)
    ctrl = report(InstanceSpec((2,), (0.5,), generators=[FinVNAlgebra((2,)).unit(0, 0, 1)]),
                  "negative-control", 100)
    gram = ctrl["control-gram-violation"]
    assert verdict(3, "wandering Gram property", [
        line(r["wandering-gram-in-diagonal"], 1e-8),
        (gram.passed and gram.witness is not None,
         f"control violation found, residual={gram.residual:.2e}"),
    ])


def test_criterion_4_upper_triangular_purity():
    checks = []
    for n in (4, 5):
        rec = report(upper_triangular(n, 40 + n), "upper-triangular-purity", 100)["upper-triangular-no-type2"]
        ok, text = line(rec)
        checks.append((ok and rec.trials == 100, f"M_{n}: {text}"))
    assert verdict(4, "upper-triangular purity", checks)


def test_criterion_5_column_sum_identity():
    r = report(RANDOM_NESTS, "column-norm", 100, (1.0, 1.5, 2.0, 3.0, 4.0))
    assert verdict(5, "column L^p-sum identity", [
        line(r[f"column-sum-norm[p={p:g}]"], 1e-10) for p in (1, 1.5, 2, 3, 4)])


def test_criterion_6_theta_contraction():
    r = report(RANDOM_NESTS, "theta", 100, (1.0, 2.0, 3.0, math.inf))
    checks = [line(r[f"theta-contraction[p={p:g}]"], 1e-9) for p in (1, 2, 3, math.inf)]
    checks.append(line(r["theta-kernel"], 1e-8))
    assert verdict(6, "theta contraction and kernel", checks)


def test_criterion_7_factorization():
    r = report(RANDOM_NESTS, "factorization", 200)
    assert verdict(7, "factorization", [
        line(r["bn-factorization"], 1e-8),
        line(r["bn-inner-factor-unitary"], 1e-9),
        line(r["bn-outer-factor"]),
        line(r["partial-bn-factorization"], 1e-8),
    ]) and r["bn-factorization"].trials == 200 and r["partial-bn-factorization"].trials == 200


def test_criterion_8_standard_case():
    r = report(RANDOM_NESTS, "factorization", 200)
    std = r["standard-generator"]
    M = FinVNAlgebra((2,))
    A = InstanceSpec((2,), (0.5,), nest=NestSpec.upper_triangular((2,))).subalgebra()
    K = from_generators(M, [M.unit(0, 0, 0), M.unit(0, 0, 1)])
    none = standard_generator(type_decomposition(K, A)) is None
    assert verdict(8, "standard-case equivalence", [
        (line(std, 1e-8)[0] and std.trials == 50, line(std, 1e-8)[1]),
        (none, f"span{{e11, e12}} has no unitary generator: {none}"),
    ])


def test_criterion_9_istr_oracle():
    r = report(RANDOM_NESTS, "istr", 100)
    assert verdict(9, "istr witness oracle", [
        line(r["istr-witness-found"]), line(r["istr-witness-sound"]), line(r["istr-no-witness-when-equal"])])


def test_criterion_10_zero_product_orthogonality():
    r = report(RANDOM_NESTS, "zero-product-orthogonality", 200)
    present = r["zero-product-pairs-present"]
    assert verdict(10, "zero product iff orthogonal hulls", [
        line(r["zero-product-iff-orthogonal-hulls"]),
        line(r["orthogonality-oracle-agrees"]),
        (present.passed, f"constructed zero-product pairs detected: {present.residual:.0f} of 50"),
    ])


if __name__ == "__main__":
    start = time.perf_counter()
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print(f"{10 - failed}/10 criteria passed in {time.perf_counter() - start:.1f}s")
    sys.exit(1 if failed else 0)
