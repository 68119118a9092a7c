"""Shared test utilities: small graph builders and independent naive oracles.

Everything here deliberately avoids the library's own algorithms so that
tests cross-check two genuinely different computations.
"""

from __future__ import annotations

import itertools
import random

from clusterdel.graph import Graph, edge


# ---------------------------------------------------------------- builders

def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the centre at vertex 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    n = sum(g.n for g in graphs)
    edges = []
    off = 0
    for g in graphs:
        edges.extend((a + off, b + off) for a, b in g.edges())
        off += g.n
    return Graph.from_edges(n, edges)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def all_graphs(n: int):
    """Every labelled simple graph on n vertices."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    for picks in itertools.product((False, True), repeat=len(pairs)):
        yield Graph.from_edges(n, [e for e, take in zip(pairs, picks) if take])


# ------------------------------------------------------------ naive checks

def naive_is_cluster(g: Graph) -> bool:
    """No induced P3 anywhere, by brute force over ordered triples."""
    for u, v, w in itertools.permutations(range(g.n), 3):
        if u < w and g.has_edge(u, v) and g.has_edge(v, w) and not g.has_edge(u, w):
            return False
    return True


def naive_p3s(g: Graph) -> list[tuple[int, int, int]]:
    """All induced P3 triples (u, v, w) with centre v and u < w."""
    out = []
    for v in range(g.n):
        for u, w in itertools.combinations(range(g.n), 2):
            if v in (u, w):
                continue
            if g.has_edge(u, v) and g.has_edge(v, w) and not g.has_edge(u, w):
                out.append((u, v, w))
    return sorted(out, key=lambda t: (t[1], t[0], t[2]))


def naive_c4s(g: Graph) -> list[tuple[int, int, int, int]]:
    """All induced 4-cycles, one canonical tuple per vertex set."""
    out = []
    for quad in itertools.combinations(range(g.n), 4):
        sub = [(a, b) for a, b in itertools.combinations(quad, 2) if g.has_edge(a, b)]
        if len(sub) != 4:
            continue
        deg = {v: sum(v in e for e in sub) for v in quad}
        if any(d != 2 for d in deg.values()):
            continue
        v1 = quad[0]
        nbrs = sorted(v for v in quad if g.has_edge(v1, v))
        opp = next(v for v in quad if v != v1 and v not in nbrs)
        out.append((v1, nbrs[0], opp, nbrs[1]))
    return out


def naive_induced_paths(g: Graph, length: int) -> list[tuple[int, ...]]:
    """All induced paths on exactly `length` vertices (both directions)."""
    out = []
    for seq in itertools.permutations(range(g.n), length):
        ok = True
        for i, a in enumerate(seq):
            for j in range(i + 1, length):
                b = seq[j]
                if g.has_edge(a, b) != (j == i + 1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(seq)
    return out


def slow_min_deletion(g: Graph) -> int:
    """Edge-subset enumeration in increasing size; first clustering subset."""
    from clusterdel.graph import delete_edges, is_cluster_graph

    edges = g.edges()
    for size in range(len(edges) + 1):
        for subset in itertools.combinations(edges, size):
            if is_cluster_graph(delete_edges(g, subset)):
                return size
    raise AssertionError("unreachable: deleting all edges always clusters")


def partition_min_deletion(g: Graph) -> int:
    """Minimum deletions by enumerating all partitions of V into cliques."""
    verts = list(range(g.n))
    best = [0]

    def retained(block: list[int]) -> int | None:
        for a, b in itertools.combinations(block, 2):
            if not g.has_edge(a, b):
                return None
        return len(block) * (len(block) - 1) // 2

    def rec(rest: list[int], acc: int):
        if not rest:
            best[0] = max(best[0], acc)
            return
        head, tail = rest[0], rest[1:]
        for r in range(len(tail) + 1):
            for extra in itertools.combinations(tail, r):
                block = [head, *extra]
                got = retained(block)
                if got is None:
                    continue
                remaining = [v for v in tail if v not in extra]
                rec(remaining, acc + got)

    rec(verts, 0)
    return g.edge_count() - best[0]
