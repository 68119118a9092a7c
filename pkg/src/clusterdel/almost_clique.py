"""Exact minimum cluster deletion for components that are almost a clique.

A component is alpha-almost a clique when removing at most alpha vertices
(the removable part X) leaves a complete graph (the rest Q).  Two exact
engines are provided and cross-checked:

  subset     bottom-up dynamic program over vertex subsets of the component;
             certain but exponential, used when the component has <= 18
             vertices.
  partition  enumerates partitions of X into cliques; for each partition the
             best placement of Q vertices is found exactly.  Every cluster of
             an optimal clustering intersects X in one partition group, except
             for at most one cluster lying entirely inside Q (two such
             clusters could always be merged, Q being complete).  For a fixed
             partition the achievable class-size vectors form a polymatroid
             (Hall's condition with the coverage function of the compatibility
             sets), and the objective is separable convex, so the optimum sits
             on a polymatroid vertex; those are exactly the greedy points of
             orderings of class subsets, swept by a subset DP.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from .graph import Edge, Graph, _bits, connected_components, edge, is_clique_mask

SUBSET_CAP = 18


@dataclass(frozen=True)
class AlmostCliqueDecomposition:
    removable: frozenset[int]  # X: at most alpha vertices
    clique_rest: frozenset[int]  # Q: induces a complete graph

    @property
    def vertices(self) -> frozenset[int]:
        return self.removable | self.clique_rest


def decompose(g: Graph, alpha: int) -> Optional[AlmostCliqueDecomposition]:
    """Smallest X with |X| <= alpha whose removal leaves a clique, or None.

    Branches on non-adjacent pairs (a vertex cover of the complement graph),
    deepening the budget, so the returned X has minimum size and the search
    is deterministic.  Requires g connected.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if g.n > 0 and len(connected_components(g)) != 1:
        raise ValueError("decompose expects a connected graph")
    all_mask = (1 << g.n) - 1

    def least_nonadjacent(removed: int) -> Optional[tuple[int, int]]:
        active = all_mask & ~removed
        for a in _bits(active):
            rest = active & ~g.adj[a] & ~((1 << (a + 1)) - 1)
            if rest:
                b = (rest & -rest).bit_length() - 1
                return a, b
        return None

    def search(removed: int, budget: int) -> Optional[int]:
        pair = least_nonadjacent(removed)
        if pair is None:
            return removed
        if budget == 0:
            return None
        a, b = pair
        got = search(removed | 1 << a, budget - 1)
        if got is not None:
            return got
        return search(removed | 1 << b, budget - 1)

    for budget in range(alpha + 1):
        got = search(0, budget)
        if got is not None:
            removable = frozenset(_bits(got))
            return AlmostCliqueDecomposition(
                removable=removable,
                clique_rest=frozenset(range(g.n)) - removable,
            )
    return None


def _check(g: Graph, decomp: AlmostCliqueDecomposition) -> tuple[int, ...]:
    if decomp.removable & decomp.clique_rest:
        raise ValueError("decomposition parts overlap")
    verts = decomp.vertices
    comp = next(
        (c for c in connected_components(g) if verts == set(c)), None
    )
    if comp is None:
        raise ValueError("decomposition does not cover one connected component")
    q_mask = 0
    for x in decomp.clique_rest:
        q_mask |= 1 << x
    if not is_clique_mask(g, q_mask):
        raise ValueError("clique_rest does not induce a complete graph")
    return comp


def solve_component(
    g: Graph, decomp: AlmostCliqueDecomposition, engine: str = "auto"
) -> frozenset[Edge]:
    """Minimum edge set whose deletion makes the component a cluster graph."""
    comp = _check(g, decomp)
    if engine == "auto":
        engine = "subset" if len(comp) <= SUBSET_CAP else "partition"
    if engine == "subset":
        if len(comp) > SUBSET_CAP:
            raise ValueError(f"component too large for the subset engine: {len(comp)}")
        cluster = _subset_clusters(g, comp)
    elif engine == "partition":
        cluster = _partition_clusters(g, decomp)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    out = set()
    for v in comp:
        for u in _bits(g.adj[v]):
            if u > v and cluster[u] != cluster[v]:
                out.add(edge(v, u))
    return frozenset(out)


# ------------------------------------------------------------ subset engine

def _subset_clusters(g: Graph, comp: tuple[int, ...]) -> dict[int, int]:
    k = len(comp)
    local_adj = [0] * k
    pos = {v: i for i, v in enumerate(comp)}
    for v in comp:
        for u in _bits(g.adj[v]):
            if u in pos:
                local_adj[pos[v]] |= 1 << pos[u]

    full = (1 << k) - 1
    table = [0] * (full + 1)
    pick = [0] * (full + 1)
    for mask in range(1, full + 1):
        low = (mask & -mask).bit_length() - 1
        best, best_pick = -1, 1 << low
        stack = [(1 << low, 1, local_adj[low] & mask)]
        while stack:
            clique, size, cand = stack.pop()
            val = size * (size - 1) // 2 + table[mask & ~clique]
            if val > best:
                best, best_pick = val, clique
            c = cand
            while c:
                vbit = c & -c
                c ^= vbit
                v = vbit.bit_length() - 1
                stack.append(
                    (clique | vbit, size + 1, cand & local_adj[v] & ~((vbit << 1) - 1))
                )
        table[mask] = best
        pick[mask] = best_pick

    cluster: dict[int, int] = {}
    mask, cid = full, 0
    while mask:
        chosen = pick[mask]
        for b in _bits(chosen):
            cluster[comp[b]] = cid
        mask &= ~chosen
        cid += 1
    return cluster


# --------------------------------------------------------- partition engine

def _clique_partitions(g: Graph, verts: list[int]) -> Iterator[list[tuple[int, ...]]]:
    """All partitions of verts into sets that are cliques of g.

    Anchored on the least remaining vertex, so each partition appears once.
    """
    if not verts:
        yield []
        return
    head, tail = verts[0], verts[1:]
    for r in range(len(tail) + 1):
        for extra in combinations(tail, r):
            ok = all(g.has_edge(head, x) for x in extra) and all(
                g.has_edge(a, b) for a, b in combinations(extra, 2)
            )
            if not ok:
                continue
            rest = [v for v in tail if v not in extra]
            block = (head, *extra)
            for more in _clique_partitions(g, rest):
                yield [block, *more]


def _partition_clusters(
    g: Graph, decomp: AlmostCliqueDecomposition
) -> dict[int, int]:
    xs = sorted(decomp.removable)
    qs = sorted(decomp.clique_rest)
    nq = len(qs)

    best_value = -1
    best_config = None

    for partition in _clique_partitions(g, xs):
        t = len(partition)
        fixed = sum(len(b) * (len(b) - 1) // 2 for b in partition)
        # coverage mask per class: which Q vertices may join it
        cover = []
        for block in partition:
            m = 0
            for qi, q in enumerate(qs):
                if all(g.has_edge(q, x) for x in block):
                    m |= 1 << qi
            cover.append(m)

        # subset DP over greedy chains of class subsets
        size = 1 << t
        union = [0] * size
        value = [0] * size
        last = [-1] * size
        for tmask in range(1, size):
            bits = tmask
            bi = -1
            while bits:
                ib = bits & -bits
                bits ^= ib
                i = ib.bit_length() - 1
                prev = tmask ^ ib
                u = union[prev] | cover[i]
                inc = u.bit_count() - union[prev].bit_count()
                blk = len(partition[i])
                val = value[prev] + inc * blk + inc * (inc - 1) // 2
                if bi == -1 or val > value[tmask]:
                    union[tmask] = u
                    value[tmask] = val
                    last[tmask] = i
                    bi = i
                # union is identical whichever element is last; value varies
        best_t, best_tv = 0, fixed + nq * (nq - 1) // 2
        for tmask in range(size):
            residual = nq - union[tmask].bit_count()
            val = fixed + value[tmask] + residual * (residual - 1) // 2
            if val > best_tv:
                best_tv, best_t = val, tmask
        if best_tv > best_value:
            # recover the chain order for the winning subset
            order = []
            tm = best_t
            while tm:
                i = last[tm]
                order.append(i)
                tm ^= 1 << i
            order.reverse()
            best_value = best_tv
            best_config = (partition, cover, order)

    if best_config is None:
        raise ValueError("removable part admits no clique partition")

    partition, cover, order = best_config
    cluster: dict[int, int] = {}
    for cid, block in enumerate(partition):
        for x in block:
            cluster[x] = cid
    assigned = 0
    for i in order:
        fresh = cover[i] & ~assigned
        assigned |= fresh
        for qi in _bits(fresh):
            cluster[qs[qi]] = i
    residual_id = len(partition)
    for qi in range(nq):
        if not (assigned >> qi & 1):
            cluster[qs[qi]] = residual_id
    return cluster
