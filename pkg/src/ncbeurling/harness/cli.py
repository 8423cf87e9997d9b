"""Command-line interface.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors
(bad flags, malformed instance files, unknown suites).
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from ..algebra_core import DEFAULT_TOL, lp_norm
from ..beurling import INVARIANT_FACTOR, decomposition_residuals, dimension_count, type_decomposition
from ..errors import NCBeurlingError, PreconditionError
from ..factorization import (
    bn_factorize,
    inner_outer_sum,
    is_wandering_vector,
    partial_bn_factorize,
)
from ..subspace import adjoint_space, span_sum
from ..tracial import is_maximal_subdiagonal, multiplicativity_residual, unique_extension_witness
from .instances import InstanceSpec, SpecFormatError, random_spec
from .suites import SUITES, CheckRecord, Report, UsageError, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parse_exponents(text: str) -> list[float]:
    out = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            continue
        try:
            p = math.inf if item in ("inf", "infinity") else float(item)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid exponent {item!r}") from None
        if not p > 0:
            raise argparse.ArgumentTypeError(f"exponent must be positive, got {item!r}")
        out.append(p)
    return out


def _parse_suites(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _load(args) -> InstanceSpec:
    spec = InstanceSpec.load(args.instance)
    changes = {}
    if args.tol is not None:
        changes["tolerance"] = args.tol
    if args.seed is not None:
        changes["seed"] = args.seed
    return dataclasses.replace(spec, **changes) if changes else spec


def _residual_records(res: dict[str, float], bound: float, anchor: str, prefix: str = "") -> list[CheckRecord]:
    return [CheckRecord(prefix + name, anchor, value <= bound, value,
                        witness=None if value <= bound else {"invariant": name, "residual": value, "bound": bound})
            for name, value in res.items()]


def _rng(spec: InstanceSpec) -> np.random.Generator:
    return np.random.default_rng(spec.seed)


def cmd_decompose(args) -> Report:
    spec = _load(args)
    A = spec.subalgebra()
    M = A.ambient
    name = args.subspace or next(iter(spec.subspaces), None)
    if name is None:
        raise SpecFormatError("instance has no subspaces to decompose", "subspaces")
    K = spec.subspace(name, A)
    report = Report(info={"command": "decompose", "subspace": name})
    try:
        dec = type_decomposition(K, A, rng=_rng(spec), validate=False)
    except PreconditionError as exc:
        report.records.append(CheckRecord("decomposition-preconditions", "K invariant, A maximal subdiagonal",
                                          False, math.inf, witness={"error": str(exc), "payload": exc.witness}))
        return report
    bound = INVARIANT_FACTOR * M.tol
    report.extend(_residual_records(decomposition_residuals(dec), bound, "decomposition invariant"))
    total, dim_k = dimension_count(dec)
    report.records.append(CheckRecord("dimension-count", "dim Z + sum dim(u_i A) = dim K", total == dim_k,
                                      float(abs(total - dim_k)),
                                      witness=None if total == dim_k else {"counted": total, "dim_K": dim_k}))
    report.info.update({"type": str(dec.label), "dim_K": K.dim, "dim_Z": dec.Z.dim, "dim_W": dec.W.dim,
                        "isometry_count": len(dec.isometries),
                        "isometries": list(dec.isometries), "Z_basis": dec.Z.basis, "W_basis": dec.W.basis})
    return report


def cmd_factorize(args) -> Report:
    spec = _load(args)
    A = spec.subalgebra()
    M = A.ambient
    name = args.element or next(iter(spec.elements), None)
    if name is None:
        raise SpecFormatError("instance has no elements to factorize", "elements")
    f = spec.element(name)
    report = Report(info={"command": "factorize", "element": name, "mode": args.mode})
    try:
        fac = None
        if args.mode in ("auto", "unitary"):
            fac = bn_factorize(f, A, rng=_rng(spec))
        if fac is None and args.mode in ("auto", "partial") and (args.mode == "partial" or is_wandering_vector(f, A)):
            fac = partial_bn_factorize(f, A, rng=_rng(spec))
        if fac is None and args.mode in ("auto", "sum"):
            fac = inner_outer_sum(f, A, rng=_rng(spec))
    except PreconditionError as exc:
        report.records.append(CheckRecord("factorization-preconditions", "A maximal subdiagonal, f admissible",
                                          False, math.inf, witness={"error": str(exc), "payload": exc.witness}))
        return report
    if fac is None:
        report.records.append(CheckRecord("factorization-exists", "some inner-outer factorization of f",
                                          False, math.inf, witness={"f": f, "mode": args.mode}))
        return report
    bound = INVARIANT_FACTOR * M.tol * max(1.0, lp_norm(M, f, 2))
    report.extend(_residual_records(fac.residuals(), bound, "factorization invariant"))
    report.info.update({"kind": str(fac.kind), "pairs": len(fac.pairs),
                        "u": [u for u, _ in fac.pairs], "h": [h for _, h in fac.pairs]})
    return report


def cmd_check(args) -> Report:
    spec = _load(args)
    A = spec.subalgebra()
    M = A.ambient
    report = Report(info={"command": "check-subdiagonal", "dim_A": A.dim, "dim_D": A.d_space.dim,
                          "dim_A0": A.a0_space.dim, "dim_M": M.dim})
    resid, _ = multiplicativity_residual(A)
    report.records.append(CheckRecord("tracial", "Phi is multiplicative on A", True, resid))
    maximal = is_maximal_subdiagonal(A)
    report.info["maximal-subdiagonal"] = maximal
    span = span_sum(A.a_space, adjoint_space(A.a_space)).dim
    report.records.append(CheckRecord("maximal-subdiagonal", "A + A^* spans M", maximal, float(M.dim - span),
                                      witness=None if maximal else {"dim_A_plus_A_star": span, "dim_M": M.dim}))
    g = unique_extension_witness(A)
    report.info["unique-extension"] = g is None
    rec = CheckRecord("unique-extension", "no positive g outside D annihilates A_0", g is None,
                      0.0 if g is None else 1.0, witness=None if g is None else {"g": g})
    report.records.append(rec)
    return report


def cmd_suite(args) -> Report:
    if args.instance is None:
        spec = InstanceSpec((1,), (1.0,), random_nest={"max_dim": 5, "max_blocks": 3},
                            seed=args.seed or 0, tolerance=args.tol or DEFAULT_TOL)
    else:
        spec = _load(args)
    suites = list(SUITES) if args.suite is None else args.suite
    report = run_suite(spec, suites, trials=args.trials, exponents=args.p, seed=args.seed)
    report.info["command"] = "property-suite"
    return report


def cmd_gen(args):
    spec = random_spec(args.seed or 0, args.max_dim, args.max_blocks, args.tol or DEFAULT_TOL)
    return spec


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="zero tolerance (default: instance value, 1e-9)")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: instance value)")
    common.add_argument("--out", type=Path, default=None, help="write the structured JSON result here")

    parser = argparse.ArgumentParser(prog="ncbeurling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="type 1 / type 2 decomposition of a subspace")
    p.add_argument("instance", type=Path)
    p.add_argument("--subspace", default=None, help="subspace name (default: the first one)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("factorize", parents=[common], help="inner-outer factorization of an element")
    p.add_argument("instance", type=Path)
    p.add_argument("--element", default=None, help="element name (default: the first one)")
    p.add_argument("--mode", choices=["auto", "unitary", "partial", "sum"], default="auto")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("check-subdiagonal", parents=[common], help="tracial and maximal-subdiagonal checks")
    p.add_argument("instance", type=Path)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("property-suite", parents=[common], help="run randomized property suites")
    p.add_argument("instance", type=Path, nargs="?", default=None,
                   help="instance file (default: random nest algebras)")
    p.add_argument("--suite", type=_parse_suites, default=None,
                   help=f"comma-separated suites (default: all of {', '.join(SUITES)})")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--p", type=_parse_exponents, default=None, help="comma-separated L^p exponents, e.g. 1,2,inf")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("gen", parents=[common], help="emit a random instance file")
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--max-blocks", type=int, default=2)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (SpecFormatError, UsageError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NCBeurlingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if isinstance(result, InstanceSpec):
        text = result.dumps()
        if args.out:
            args.out.write_text(text + "\n")
        else:
            print(text)
        return EXIT_OK
    print(result.to_text())
    if args.out:
        args.out.write_text(result.to_json() + "\n")
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
