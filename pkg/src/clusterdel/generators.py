"""Deterministic instance generators for tests, demos, and the CLI."""

from __future__ import annotations

import random

from .graph import Graph, edge


def make_path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def make_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi graph; fully determined by (n, p, seed)."""
    if not 0 <= p <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def make_planted(sizes: list[int], noise: int, seed: int) -> tuple[Graph, dict]:
    """Disjoint cliques plus `noise` random edges between different cliques.

    Deleting the noise edges restores a cluster graph, so the optimum is at
    most `noise`; the metadata records that planted bound.
    """
    if any(s < 1 for s in sizes):
        raise ValueError("clique sizes must be positive")
    n = sum(sizes)
    owner = []
    for i, s in enumerate(sizes):
        owner.extend([i] * s)
    edges = set()
    off = 0
    for s in sizes:
        for a in range(off, off + s):
            for b in range(a + 1, off + s):
                edges.add((a, b))
        off += s
    cross = [
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if owner[a] != owner[b]
    ]
    if noise > len(cross):
        raise ValueError(f"cannot place {noise} cross edges, only {len(cross)} pairs")
    rng = random.Random(seed)
    picked = rng.sample(cross, noise)
    edges.update(picked)
    meta = {
        "kind": "planted",
        "sizes": list(sizes),
        "noise": noise,
        "seed": seed,
        "planted_bound": noise,
        "noise_edges": sorted(picked),
    }
    return Graph.from_edges(n, sorted(edges)), meta


def chain_gadget() -> tuple[Graph, tuple[int, int, int]]:
    """A 17-vertex gadget whose level-0 frontier admits a maximal chain of
    eight single-edge deletions before any frontier stops being heavy.

    Layout: anchor path 0-1-2; two mirrored blocks of partial vertices
    (3,4 attached to 0 and 5,6 attached to 2), each feeding a pair of
    layer-1 vertices, which carry 2+1 pendant stubs.  Vertex 6 is adjacent
    to both 9 and 10, mirroring vertex 5.
    """
    u, v, w = 0, 1, 2
    b1, b2, b3, b4 = 3, 4, 5, 6
    c1, c2, c3, c4 = 7, 8, 9, 10
    d1, d2, d3, d4, d5, d6 = 11, 12, 13, 14, 15, 16
    edges = [
        (u, v), (v, w),
        (u, b1), (u, b2), (b1, b2),
        (b1, c1), (b1, c2), (b2, c1), (b2, c2), (c1, c2),
        (w, b3), (w, b4), (b3, b4),
        (b3, c3), (b3, c4), (b4, c3), (b4, c4), (c3, c4),
        (c1, d1), (c1, d2), (c2, d3),
        (c3, d4), (c3, d5), (c4, d6),
    ]
    return Graph.from_edges(17, [edge(a, b) for a, b in edges]), (u, v, w)
