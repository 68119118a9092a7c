"""Brute-force ground truth for minimum cluster deletion on small graphs.

Deleting a minimum edge set is the same as retaining a maximum number of
edges inside a partition of the vertices into cliques.  The optimum is found
per connected component by a dynamic program over vertex subsets: peel off
the clique containing the least unassigned vertex.  Hard size cap n <= 18.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Edge, Graph, _bits, connected_components, edge

SIZE_CAP = 18


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: frozenset[Edge]


def _component_best(g: Graph, comp: tuple[int, ...]) -> dict[int, int]:
    """cluster id per vertex of one component, maximising retained edges."""
    local = {v: i for i, v in enumerate(comp)}
    adj = [0] * len(comp)
    for v in comp:
        for u in _bits(g.adj[v]):
            adj[local[v]] |= 1 << local[u]

    best: dict[int, int] = {0: 0}
    choice: dict[int, int] = {}

    def solve(mask: int) -> int:
        got = best.get(mask)
        if got is not None:
            return got
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        top, pick = -1, 1 << low
        # all cliques inside mask that contain the least vertex
        stack = [(1 << low, 1, adj[low] & rest)]
        while stack:
            clique, size, cand = stack.pop()
            val = size * (size - 1) // 2 + solve(mask & ~clique)
            if val > top:
                top, pick = val, clique
            c = cand
            while c:
                vbit = c & -c
                c ^= vbit
                v = vbit.bit_length() - 1
                stack.append((clique | vbit, size + 1, cand & adj[v] & ~((vbit << 1) - 1)))
        best[mask] = top
        choice[mask] = pick
        return top

    solve((1 << len(comp)) - 1)

    cluster: dict[int, int] = {}
    mask = (1 << len(comp)) - 1
    cid = 0
    while mask:
        pick = choice[mask]
        for b in _bits(pick):
            cluster[comp[b]] = cid
        mask &= ~pick
        cid += 1
    return cluster


def exact_min_deletion(g: Graph) -> OracleResult:
    """Minimum number of edge deletions turning g into a cluster graph.

    Component-additive; the witness is reconstructed from the chosen clique
    partition.  Raises ValueError beyond the size cap.
    """
    if g.n > SIZE_CAP:
        raise ValueError(f"graph too large for the oracle: n={g.n} > {SIZE_CAP}")
    witness: set[Edge] = set()
    for comp in connected_components(g):
        if len(comp) == 1:
            continue
        cluster = _component_best(g, comp)
        for v in comp:
            for u in _bits(g.adj[v]):
                if u > v and cluster[u] != cluster[v]:
                    witness.add(edge(v, u))
    return OracleResult(optimum=len(witness), witness=frozenset(witness))


def exact_decision(g: Graph, k: int) -> bool:
    """True iff at most k deletions suffice.  Same size cap as the optimum."""
    return exact_min_deletion(g).optimum <= k
