"""Branching vectors and their characteristic roots.

A branching rule that spawns children with budget decrements (a_1, ..., a_p)
has branching number x, the unique root > 1 of sum_i x^(-a_i) = 1; the search
tree it generates has O*(x^k) nodes.  This module computes those roots and
builds the composed vectors used to certify the isolate rule.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

#: absolute tolerance of the bisection root finder
ROOT_TOL = 1e-9


def _validate(vector: Sequence[int]) -> tuple[int, ...]:
    v = tuple(vector)
    if not v:
        raise ValueError("branching vector must be non-empty")
    if any(a < 1 for a in v):
        raise ValueError(f"branching vector entries must be >= 1, got {v}")
    return v


def branching_number(vector: Sequence[int]) -> float:
    """Root x > 1 of sum x^(-a_i) = 1, or 1.0 for a single-entry vector.

    Bracketing bisection on [1, len(vector)].  The upper end is always valid:
    with every a_i >= 1, sum len(v)^(-a_i) <= 1, with equality only when all
    entries are 1 (and then the root is exactly len(v)).
    """
    v = _validate(vector)
    if len(v) == 1:
        return 1.0

    def residual(x: float) -> float:
        return sum(x ** -a for a in v) - 1.0

    lo, hi = 1.0 + 1e-12, float(len(v))
    while hi - lo > ROOT_TOL:
        mid = (lo + hi) / 2
        if residual(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def chain_vector(p: int) -> tuple[int, ...]:
    """Vector of a chain of p binary {1, >=3}-cost splits ending in a >=1 solve.

    Length 2^p; the entry p + 1 + 2*i appears comb(p, i) times for i = 0..p.
    """
    if p < 0:
        raise ValueError("chain length must be non-negative")
    return compose_chain_vector([(0, p, 1)])


def compose_chain_vector(leaves: Iterable[tuple[int, int, int]]) -> tuple[int, ...]:
    """Concatenate the worst-case vectors contributed by closure leaves.

    Each leaf (cost, frontier, bound) stands for: `cost` budget already spent
    reaching the leaf, a remaining frontier of `frontier` edges (each split
    costs 1 or at least 3), and a final exact solve removing at least `bound`
    edges.  The leaf therefore contributes entries cost + frontier + bound + 2*i
    with multiplicity comb(frontier, i).
    """
    out: list[int] = []
    for cost, frontier, bound in leaves:
        if cost < 0 or frontier < 0 or bound < 1:
            raise ValueError(f"invalid leaf ({cost}, {frontier}, {bound})")
        for i in range(frontier + 1):
            out.extend([cost + frontier + bound + 2 * i] * comb(frontier, i))
    if not out:
        raise ValueError("no leaves given")
    return tuple(sorted(out))
