"""Simple undirected graphs and the structure detectors the solvers branch on.

Vertices are dense integers 0..n-1 and stay stable under edge deletion:
removing edges never renumbers anything, so edge sets collected while
branching remain valid in the original input graph.  Adjacency is stored
as one integer bit row per vertex, which makes neighbourhood intersections
and the conflict-set sizes cheap.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

Edge = tuple[int, int]


def edge(a: int, b: int) -> Edge:
    """Canonical form of an undirected edge (smaller endpoint first)."""
    if a == b:
        raise ValueError(f"self-loop at vertex {a}")
    return (a, b) if a < b else (b, a)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: tuple[int, ...]):
        self.n = n
        self.adj = adj

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        adj = [0] * n
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a},{b}) out of range for n={n}")
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return cls(n, tuple(adj))

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.adj[a] >> b & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> Iterator[int]:
        return _bits(self.adj[v])

    def edges(self) -> list[Edge]:
        """All edges in lexicographic order."""
        out = []
        for a in range(self.n):
            higher = self.adj[a] >> (a + 1) << (a + 1)
            for b in _bits(higher):
                out.append((a, b))
        return out

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


def delete_edges(g: Graph, f: Iterable[Edge]) -> Graph:
    """Graph with the edges of f removed; every edge of f must exist in g."""
    adj = list(g.adj)
    for a, b in f:
        if not (0 <= a < g.n and 0 <= b < g.n) or not (adj[a] >> b & 1):
            raise ValueError(f"edge ({a},{b}) not present in graph")
        adj[a] &= ~(1 << b)
        adj[b] &= ~(1 << a)
    return Graph(g.n, tuple(adj))


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Maximal connected vertex sets, each sorted, ordered by least vertex."""
    seen = 0
    comps = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= g.adj[u]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(tuple(_bits(comp)))
    return comps


def component_of(g: Graph, v: int) -> int:
    """Bit mask of the connected component containing v."""
    comp = 1 << v
    frontier = comp
    while frontier:
        nxt = 0
        for u in _bits(frontier):
            nxt |= g.adj[u]
        frontier = nxt & ~comp
        comp |= frontier
    return comp


def is_clique_mask(g: Graph, mask: int) -> bool:
    for v in _bits(mask):
        if g.adj[v] & mask != mask & ~(1 << v):
            return False
    return True


def is_cluster_graph(g: Graph) -> bool:
    """True iff every connected component induces a complete graph."""
    seen = 0
    for v in range(g.n):
        if seen >> v & 1:
            continue
        comp = component_of(g, v)
        if not is_clique_mask(g, comp):
            return False
        seen |= comp
    return True


def conflict_edges(g: Graph, e: Edge) -> frozenset[Edge]:
    """Edges that together with e induce a path on three vertices.

    These are the edges sharing exactly one endpoint with e whose other
    endpoints are non-adjacent.  A solution that keeps e must delete all
    of them, which is what the heavy-edge branching rule exploits.
    """
    a, b = e
    if not g.has_edge(a, b):
        raise ValueError(f"edge ({a},{b}) not present in graph")
    out = set()
    for z in _bits(g.adj[a] & ~g.adj[b] & ~(1 << b)):
        out.add(edge(a, z))
    for z in _bits(g.adj[b] & ~g.adj[a] & ~(1 << a)):
        out.add(edge(b, z))
    return frozenset(out)


def conflict_degree(g: Graph, a: int, b: int) -> int:
    """len(conflict_edges(g, (a, b))) without materialising the set."""
    return (g.adj[a] & ~g.adj[b] & ~(1 << b)).bit_count() + (
        g.adj[b] & ~g.adj[a] & ~(1 << a)
    ).bit_count()


def find_induced_p3(g: Graph) -> Optional[tuple[int, int, int]]:
    """Lexicographically least induced P3 as (u, v, w), v the centre, u < w.

    Ordered by (v, u, w).  Returns None iff g is a cluster graph.
    """
    for v in range(g.n):
        nb = g.adj[v]
        if nb.bit_count() < 2:
            continue
        for u in _bits(nb):
            rest = nb & ~g.adj[u]
            rest &= ~((1 << (u + 1)) - 1)  # keep w > u only
            if rest:
                w = (rest & -rest).bit_length() - 1
                return (u, v, w)
    return None


def find_induced_c4(g: Graph) -> Optional[tuple[int, int, int, int]]:
    """Lexicographically least induced 4-cycle (v1, v2, v3, v4).

    Consecutive pairs are edges; both chords (v1,v3) and (v2,v4) are absent.
    """
    for v1 in range(g.n):
        for v2 in _bits(g.adj[v1]):
            if v2 == v1:
                continue
            # v3 adjacent to v2, not adjacent (and not equal) to v1
            for v3 in _bits(g.adj[v2] & ~g.adj[v1] & ~(1 << v1)):
                cand = g.adj[v3] & g.adj[v1] & ~g.adj[v2] & ~(1 << v2)
                if cand:
                    v4 = (cand & -cand).bit_length() - 1
                    return (v1, v2, v3, v4)
    return None


def find_induced_long_path(
    g: Graph, min_len: int = 7, isolated_interior: bool = False
) -> Optional[tuple[int, ...]]:
    """An induced path on exactly min_len vertices, or None.

    Any induced path with more vertices contains one, so searching for the
    exact length is enough.  The first path in lexicographic DFS order is
    returned, which keeps the branching engine deterministic.

    With isolated_interior=True only paths whose interior vertices have no
    neighbours off the path are admitted; since the path is induced this is
    the same as requiring every interior vertex to have degree exactly 2.
    """
    if min_len < 2:
        raise ValueError("min_len must be at least 2")
    if min_len > g.n:
        return None
    adj = g.adj
    path = []

    def extend(last: int, blocked: int) -> Optional[tuple[int, ...]]:
        # blocked: path vertices plus every neighbour of a non-last path vertex
        if len(path) == min_len:
            return tuple(path)
        final = len(path) + 1 == min_len
        for v in _bits(adj[last] & ~blocked):
            if isolated_interior and not final and adj[v].bit_count() != 2:
                continue
            path.append(v)
            got = extend(v, blocked | adj[last] | 1 << v)
            if got is not None:
                return got
            path.pop()
        return None

    for start in range(g.n):
        path.clear()
        path.append(start)
        got = extend(start, 1 << start)
        if got is not None:
            return got
    return None


def validate_solution(g: Graph, s: Iterable[Edge], k: int) -> bool:
    """True iff s is a set of at most k edges of g whose removal clusters g."""
    s = set(s)
    if len(s) > k:
        return False
    for a, b in s:
        if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
            return False
    return is_cluster_graph(delete_edges(g, s))
