"""Instance specifications: JSON (de)serialisation and seeded random generators.

File layout::

    {
      "algebra": {"blocks": [{"dim": 2, "weight": 0.5}]},
      "subalgebra": {"nest": [[[1], [2]]]}          # or {"generators": [matrix, ...]}
                                                    # or {"random_nest": {"max_dim": 5, "max_blocks": 3}}
      "subspaces": {"K": [matrix, ...]},
      "elements": {"f": matrix},
      "seed": 0,
      "tolerance": 1e-9
    }

A matrix is a list with one entry per block; each entry is a row-major nested list of
``[re, im]`` pairs.  Floats go through ``repr`` so round trips are bit-exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..algebra_core import DEFAULT_TOL, FinVNAlgebra
from ..errors import NCBeurlingError, StructuralError
from ..subspace import Subspace, from_generators, right_module_span
from ..tracial import NestSpec, TracialSubalgebra, build_from_basis, build_nest_subalgebra


class SpecFormatError(NCBeurlingError, ValueError):
    """Malformed instance file; ``where`` names the offending field or line."""

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def encode_matrix(M: FinVNAlgebra, x) -> list:
    out = []
    for b in M.split(x):
        out.append([[[float(z.real), float(z.imag)] for z in row] for row in b])
    return out


def decode_matrix(M: FinVNAlgebra, data, where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != len(M.dims):
        raise SpecFormatError(f"expected a list of {len(M.dims)} blocks", where)
    blocks = []
    for k, (n, block) in enumerate(zip(M.dims, data)):
        try:
            arr = np.asarray(block, dtype=float)
        except (TypeError, ValueError) as exc:
            raise SpecFormatError(f"block {k} is not numeric ({exc})", where) from None
        if arr.shape != (n, n, 2):
            raise SpecFormatError(f"block {k} has shape {arr.shape}, expected ({n}, {n}, 2)", where)
        blocks.append(arr[..., 0] + 1j * arr[..., 1])
    return M.element(blocks)


@dataclass
class InstanceSpec:
    dims: tuple[int, ...]
    weights: tuple[float, ...]
    nest: NestSpec | None = None
    generators: list[np.ndarray] | None = None
    random_nest: dict | None = None
    subspaces: dict[str, list[np.ndarray]] = field(default_factory=dict)
    elements: dict[str, np.ndarray] = field(default_factory=dict)
    seed: int = 0
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        modes = sum(x is not None for x in (self.nest, self.generators, self.random_nest))
        if modes != 1:
            raise SpecFormatError("exactly one of nest / generators / random_nest is required", "subalgebra")
        M = self.algebra()
        if self.nest is not None:
            self.nest.check(M)
        for name, gens in self.subspaces.items():
            for g in gens:
                M.check(g)
        for name, x in self.elements.items():
            M.check(x)

    def algebra(self) -> FinVNAlgebra:
        return FinVNAlgebra(self.dims, self.weights, self.tolerance)

    def subalgebra(self) -> TracialSubalgebra:
        """The fixed subalgebra of the instance (not available in random-nest mode)."""
        M = self.algebra()
        if self.nest is not None:
            return build_nest_subalgebra(M, self.nest)
        if self.generators is not None:
            return build_from_basis(M, self.generators)
        raise SpecFormatError("instance draws random nest algebras; no fixed subalgebra", "subalgebra")

    def subspace(self, name: str, A: TracialSubalgebra | None = None) -> Subspace:
        """The named subspace; if ``A`` is given it is closed up to the invariant hull."""
        if name not in self.subspaces:
            raise SpecFormatError(f"no subspace named {name!r}", "subspaces")
        S = from_generators(self.algebra(), self.subspaces[name])
        return S if A is None else right_module_span(S, A.a_basis)

    def element(self, name: str) -> np.ndarray:
        if name not in self.elements:
            raise SpecFormatError(f"no element named {name!r}", "elements")
        return self.elements[name]

    def __eq__(self, other):
        if not isinstance(other, InstanceSpec):
            return NotImplemented

        def same(a, b):
            return a.shape == b.shape and np.array_equal(a, b)

        if (self.dims, self.weights, self.nest, self.random_nest, self.seed, self.tolerance) != (
                other.dims, other.weights, other.nest, other.random_nest, other.seed, other.tolerance):
            return False
        if (self.generators is None) != (other.generators is None):
            return False
        if self.generators is not None and (
                len(self.generators) != len(other.generators)
                or not all(same(a, b) for a, b in zip(self.generators, other.generators))):
            return False
        if self.subspaces.keys() != other.subspaces.keys() or self.elements.keys() != other.elements.keys():
            return False
        for k in self.subspaces:
            a, b = self.subspaces[k], other.subspaces[k]
            if len(a) != len(b) or not all(same(x, y) for x, y in zip(a, b)):
                return False
        return all(same(self.elements[k], other.elements[k]) for k in self.elements)

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        M = self.algebra()
        if self.nest is not None:
            sub = {"nest": self.nest.intervals()}
        elif self.generators is not None:
            sub = {"generators": [encode_matrix(M, g) for g in self.generators]}
        else:
            sub = {"random_nest": dict(self.random_nest)}
        return {
            "algebra": {"blocks": [{"dim": n, "weight": w} for n, w in zip(self.dims, self.weights)]},
            "subalgebra": sub,
            "subspaces": {k: [encode_matrix(M, g) for g in v] for k, v in self.subspaces.items()},
            "elements": {k: encode_matrix(M, x) for k, x in self.elements.items()},
            "seed": self.seed,
            "tolerance": self.tolerance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceSpec":
        if not isinstance(data, dict):
            raise SpecFormatError("top level must be an object")
        try:
            blocks = data["algebra"]["blocks"]
            dims = tuple(int(b["dim"]) for b in blocks)
            weights = tuple(float(b["weight"]) for b in blocks)
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecFormatError(f"missing or invalid field {exc}", "algebra.blocks") from None
        tol = float(data.get("tolerance", DEFAULT_TOL))
        try:
            M = FinVNAlgebra(dims, weights, tol)
        except StructuralError as exc:
            raise SpecFormatError(str(exc), "algebra") from None
        sub = data.get("subalgebra")
        if not isinstance(sub, dict):
            raise SpecFormatError("must be an object", "subalgebra")
        nest = generators = random_nest = None
        try:
            if "nest" in sub:
                nest = NestSpec.from_intervals(sub["nest"])
            elif "generators" in sub:
                generators = [decode_matrix(M, g, f"subalgebra.generators[{i}]")
                              for i, g in enumerate(sub["generators"])]
            elif "random_nest" in sub:
                random_nest = dict(sub["random_nest"] or {})
            else:
                raise SpecFormatError("expected 'nest', 'generators' or 'random_nest'", "subalgebra")
        except StructuralError as exc:
            raise SpecFormatError(str(exc), "subalgebra") from None
        subspaces = {}
        for name, gens in (data.get("subspaces") or {}).items():
            subspaces[name] = [decode_matrix(M, g, f"subspaces.{name}[{i}]") for i, g in enumerate(gens)]
        elements = {name: decode_matrix(M, x, f"elements.{name}")
                    for name, x in (data.get("elements") or {}).items()}
        try:
            return cls(dims, weights, nest, generators, random_nest, subspaces, elements,
                       int(data.get("seed", 0)), tol)
        except StructuralError as exc:
            raise SpecFormatError(str(exc)) from None

    @classmethod
    def loads(cls, text: str) -> "InstanceSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "InstanceSpec":
        return cls.loads(Path(path).read_text())

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps())


# -- random generation --------------------------------------------------------


def random_weights(dims, rng: np.random.Generator) -> tuple[float, ...]:
    w = rng.uniform(0.5, 2.0, size=len(dims))
    w = w / float(np.dot(w, dims))
    # renormalise through a single division so that sum(w_k n_k) is 1 to rounding
    return tuple(float(x) for x in w)


def random_nest(dims, rng: np.random.Generator) -> NestSpec:
    atoms = []
    for n in dims:
        if n == 1:
            atoms.append((1,))
            continue
        cuts = np.sort(rng.choice(np.arange(1, n), size=int(rng.integers(0, n)), replace=False))
        atoms.append(tuple(int(a) for a in np.diff(np.concatenate([[0], cuts, [n]]))))
    return NestSpec(tuple(atoms))


def random_nest_algebra(rng: np.random.Generator, max_dim: int = 5, max_blocks: int = 3,
                        tol: float = DEFAULT_TOL) -> TracialSubalgebra:
    """A nest algebra over ``M_{n_1} + ... + M_{n_K}`` with random sizes, weights and nest."""
    dims = tuple(int(n) for n in rng.integers(1, max_dim + 1, size=int(rng.integers(1, max_blocks + 1))))
    M = FinVNAlgebra(dims, random_weights(dims, rng), tol)
    return build_nest_subalgebra(M, random_nest(dims, rng))


def random_low_rank(M: FinVNAlgebra, rng: np.random.Generator, rank: int) -> np.ndarray:
    """Gaussian element whose blocks have rank at most ``rank``."""
    blocks = []
    for n in M.dims:
        r = min(rank, n)
        a = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        b = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
        blocks.append(a @ b / math.sqrt(2 * r))
    x = M.element(blocks)
    return x / np.sqrt(sum(w * np.vdot(b, b).real for w, b in zip(M.weights, M.split(x))))


def random_invariant_subspace(A: TracialSubalgebra, seed, k: int | None = None,
                              max_rank: int | None = None) -> Subspace:
    """``[span{g_1..g_k} A]`` for Gaussian ``g_i``; ``k`` uniform in ``1..dim M`` by default.

    ``max_rank`` caps the block rank of each generator, which yields smaller subspaces.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    M = A.ambient
    if k is None:
        k = int(rng.integers(1, M.dim + 1))
    if max_rank is None:
        gens = [M.random_element(rng) for _ in range(k)]
    else:
        gens = [random_low_rank(M, rng, int(rng.integers(1, max_rank + 1))) for _ in range(k)]
    return right_module_span(from_generators(M, gens), A.a_basis)


def random_spec(seed: int, max_dim: int = 4, max_blocks: int = 2, tol: float = DEFAULT_TOL) -> InstanceSpec:
    """A concrete random instance: nest algebra, one invariant subspace ``K``, one element ``f``."""
    rng = np.random.default_rng(seed)
    A = random_nest_algebra(rng, max_dim, max_blocks, tol)
    M = A.ambient
    k = int(rng.integers(1, 3))
    gens = [random_low_rank(M, rng, int(rng.integers(1, max(M.dims) + 1))) for _ in range(k)]
    f = M.random_element(rng)
    return InstanceSpec(M.dims, M.weights, nest=A.nest, subspaces={"K": gens}, elements={"f": f},
                        seed=seed, tolerance=tol)
