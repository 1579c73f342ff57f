"""Branch-order calculus for sums of products of radicals in several variables.

A radical factor ``(prod_i (z_{v_i} - c_i))**(1/k)`` branches along the union
of the coordinate hyperplanes ``z_{v_i} = c_i``. Entire factors carry index 1
and no locus. Variables are indexed from 0.

Counting rules:

* a product of radicals takes ``lcm`` of its indices as its number of values,
  and a sum multiplies the counts of its terms;
* at a point, each term keeps only the factors whose locus passes through the
  point. Factors linked through a common hyperplane move together and combine
  by ``lcm``; unlinked groups combine by product. Terms multiply, and the
  branch order is that total minus one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce as _fold
from typing import Sequence

from .errors import NotABranchPoint

LOCUS_TOL = 1e-12

Hyperplane = tuple[int, complex]


@dataclass(frozen=True)
class RadicalFactor:
    index: int = 1
    loci: frozenset[Hyperplane] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"radical index must be >= 1, got {self.index}")
        if self.index >= 2 and not self.loci:
            raise ValueError("a radical factor needs a branch locus")
        object.__setattr__(self, "loci", frozenset((int(i), complex(c)) for i, c in self.loci))

    @property
    def is_radical(self) -> bool:
        return self.index >= 2

    def loci_through(self, point: Sequence[complex], tol: float = LOCUS_TOL) -> set[Hyperplane]:
        return {(i, c) for i, c in self.loci if abs(point[i] - c) <= tol}


def radical(index: int, *loci: Hyperplane) -> RadicalFactor:
    """``radical(2, (1, 0), (2, 0))`` is the square root of ``z_1 * z_2``."""
    return RadicalFactor(index, frozenset(loci))


ENTIRE = RadicalFactor()


@dataclass(frozen=True)
class RadicalExpr:
    n_vars: int
    terms: tuple[tuple[RadicalFactor, ...], ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(tuple(t) for t in self.terms))
        for term in self.terms:
            for f in term:
                for i, _ in f.loci:
                    if not 0 <= i < self.n_vars:
                        raise ValueError(f"locus variable {i} out of range for {self.n_vars} variables")


def _lcm(values) -> int:
    return _fold(math.lcm, values, 1)


def term_valence(term: Sequence[RadicalFactor]) -> int:
    return _lcm(f.index for f in term)


def valence(expr: RadicalExpr) -> int:
    """Number of values of the expression: per-term lcm, multiplied over terms."""
    return math.prod(term_valence(t) for t in expr.terms)


def _linked_groups(factors: list[RadicalFactor], hits: list[set[Hyperplane]]) -> list[list[int]]:
    parent = list(range(len(factors)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(factors)):
        for j in range(i):
            if hits[i] & hits[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(factors)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def local_cycle_count(term: Sequence[RadicalFactor], point: Sequence[complex], tol: float = LOCUS_TOL) -> int:
    """Cycle length contributed by one product term at ``point`` (1 if unbranched)."""
    active, hits = [], []
    for f in term:
        if not f.is_radical:
            continue
        h = f.loci_through(point, tol)
        if h:
            active.append(f)
            hits.append(h)
    return math.prod(_lcm(active[i].index for i in g) for g in _linked_groups(active, hits))


def branch_order(expr: RadicalExpr, point: Sequence[complex], tol: float = LOCUS_TOL) -> int:
    if len(point) != expr.n_vars:
        raise ValueError(f"point has {len(point)} coordinates, expression has {expr.n_vars} variables")
    point = [complex(p) for p in point]
    on_locus = any(f.loci_through(point, tol) for t in expr.terms for f in t if f.is_radical)
    if not on_locus:
        raise NotABranchPoint(f"no branch locus passes through {tuple(point)}")
    return math.prod(local_cycle_count(t, point, tol) for t in expr.terms) - 1


def example_expression() -> RadicalExpr:
    """``z2 (z1-1)^(1/3) - z3 (z2 z3)^(1/2) (z1-2i)^(1/4) + z1 (z2-3i)^(1/2) (z3-4i)^(1/3)``."""
    z1, z2, z3 = 0, 1, 2
    return RadicalExpr(
        n_vars=3,
        terms=(
            (ENTIRE, radical(3, (z1, 1))),
            (ENTIRE, radical(2, (z2, 0), (z3, 0)), radical(4, (z1, 2j))),
            (ENTIRE, radical(2, (z2, 3j)), radical(3, (z3, 4j))),
        ),
        label="three-term radical example",
    )


EXAMPLE_POINTS = {
    "P1": (2j, 0, 1),
    "P2": (0, 3j, 4j),
    "P3": (1, 0, 4j),
    "P4": (1, 0, 0),
}


def expr_to_json(expr: RadicalExpr) -> dict:
    return {
        "n_vars": expr.n_vars,
        "terms": [
            [
                {"index": f.index, "loci": [[i, [c.real, c.imag]] for i, c in sorted(f.loci, key=lambda h: (h[0], h[1].real, h[1].imag))]}
                for f in t
            ]
            for t in expr.terms
        ],
    }


def expr_from_json(data: dict) -> RadicalExpr:
    terms = []
    for t in data["terms"]:
        terms.append(
            tuple(
                RadicalFactor(int(f.get("index", 1)), frozenset((int(i), complex(c[0], c[1])) for i, c in f.get("loci", [])))
                for f in t
            )
        )
    return RadicalExpr(int(data["n_vars"]), tuple(terms), data.get("label", ""))
