"""Layered decomposition around an induced P3 and its structural audit.

Around a chosen induced P3 (left, centre, right) the vertices split into:

  anchor        the three path vertices themselves
  partial       vertices outside the anchor with one or two anchor neighbours
  side_left     partial vertices adjacent to exactly one of {left, centre}
  side_right    partial vertices adjacent to exactly one of {right, centre}
  full          vertices adjacent to all three anchor vertices
  fringe        vertices outside all of the above with a neighbour in `full`
  layers[i]     vertices outside all of the above at graph distance exactly i
                from `partial` (layers[0] is `partial` itself)
  frontiers[i]  edges between layers[i] and layers[i+1]; frontier 1 excludes
                marked edges

The heavy level is the least frontier index holding an edge whose conflict
set has size >= 3; the isolate rule keeps branching on such edges until no
frontier is heavy.  The audit checks the size and degree bounds that the
isolate rule's budget analysis relies on, each gated by the precondition
under which it is claimed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import (
    Edge,
    Graph,
    _bits,
    component_of,
    conflict_degree,
    edge,
    find_induced_c4,
    is_clique_mask,
)


class StructureError(Exception):
    """A structural guarantee the solver relies on failed to hold."""


@dataclass(frozen=True, eq=False)
class P3Context:
    graph: Graph
    anchor: tuple[int, int, int]  # (left, centre, right); centre is the midpoint
    side_left: frozenset[int]
    side_right: frozenset[int]
    full: frozenset[int]
    fringe: frozenset[int]
    layers: tuple[frozenset[int], ...]  # layers[0] is the partial set
    frontiers: tuple[frozenset[Edge], ...]  # frontiers[i] joins layers i and i+1
    marked: frozenset[Edge]
    heavy_level: Optional[int]  # least frontier index with a conflict-3 edge
    heavy_edge: Optional[Edge]  # lexicographically least such edge
    _layer_of: dict[int, int] = field(repr=False)

    @property
    def anchor_set(self) -> frozenset[int]:
        return frozenset(self.anchor)

    @property
    def partial(self) -> frozenset[int]:
        return self.layers[0]

    def layer_of(self, x: int) -> Optional[int]:
        return self._layer_of.get(x)

    def next_neighbors(self, x: int) -> frozenset[int]:
        i = self._layer_of[x]
        if i + 1 >= len(self.layers):
            return frozenset()
        return frozenset(_bits(self.graph.adj[x])) & self.layers[i + 1]

    def same_neighbors(self, x: int) -> frozenset[int]:
        i = self._layer_of[x]
        return frozenset(_bits(self.graph.adj[x])) & self.layers[i]

    def prev_neighbors(self, x: int) -> frozenset[int]:
        i = self._layer_of[x]
        if i == 0:
            return frozenset()
        return frozenset(_bits(self.graph.adj[x])) & self.layers[i - 1]


def check_induced_p3(g: Graph, p3: tuple[int, int, int]) -> None:
    u, v, w = p3
    if len({u, v, w}) != 3:
        raise StructureError(f"anchor vertices must be distinct, got {p3}")
    if not (g.has_edge(u, v) and g.has_edge(v, w)) or g.has_edge(u, w):
        raise StructureError(f"{p3} is not an induced P3 with centre {v}")


def build_context(
    g: Graph, p3: tuple[int, int, int], marks: Iterable[Edge] = ()
) -> P3Context:
    """Compute the full decomposition around the induced P3 (left, centre, right)."""
    check_induced_p3(g, p3)
    u, v, w = p3
    marked = frozenset(marks)
    for a, b in marked:
        if not g.has_edge(a, b):
            raise StructureError(f"marked edge ({a},{b}) not in graph")

    a_mask = (1 << u) | (1 << v) | (1 << w)
    partial_mask = 0
    full_mask = 0
    for x in range(g.n):
        if a_mask >> x & 1:
            continue
        cnt = (g.adj[x] & a_mask).bit_count()
        if 1 <= cnt <= 2:
            partial_mask |= 1 << x
        elif cnt == 3:
            full_mask |= 1 << x

    fringe_mask = 0
    for x in range(g.n):
        if (a_mask | partial_mask | full_mask) >> x & 1:
            continue
        if g.adj[x] & full_mask:
            fringe_mask |= 1 << x

    side_left = frozenset(
        x
        for x in _bits(partial_mask)
        if (g.has_edge(x, u) + g.has_edge(x, v)) == 1
    )
    side_right = frozenset(
        x
        for x in _bits(partial_mask)
        if (g.has_edge(x, w) + g.has_edge(x, v)) == 1
    )

    # multi-source BFS from the partial set: literal graph distance
    dist: dict[int, int] = {x: 0 for x in _bits(partial_mask)}
    frontier = partial_mask
    seen = partial_mask
    d = 0
    while frontier:
        nxt = 0
        for x in _bits(frontier):
            nxt |= g.adj[x]
        frontier = nxt & ~seen
        seen |= frontier
        d += 1
        for x in _bits(frontier):
            dist[x] = d

    excluded = a_mask | partial_mask | full_mask | fringe_mask
    by_level: dict[int, set[int]] = {}
    for x, dx in dist.items():
        if dx >= 1 and not (excluded >> x & 1):
            by_level.setdefault(dx, set()).add(x)
    max_level = max(by_level, default=0)
    layers = [frozenset(_bits(partial_mask))]
    layers += [frozenset(by_level.get(i, ())) for i in range(1, max_level + 1)]

    layer_of = {x: i for i, layer in enumerate(layers) for x in layer}

    frontiers: list[frozenset[Edge]] = []
    for i in range(len(layers)):
        if i + 1 == len(layers):
            frontiers.append(frozenset())
            break
        es = set()
        upper = layers[i + 1]
        for x in layers[i]:
            for y in _bits(g.adj[x]):
                if y in upper:
                    e = edge(x, y)
                    if i == 1 and e in marked:
                        continue
                    es.add(e)
        frontiers.append(frozenset(es))
    if not frontiers:
        frontiers.append(frozenset())

    heavy_level: Optional[int] = None
    heavy_edge: Optional[Edge] = None
    for i, es in enumerate(frontiers):
        hot = sorted(e for e in es if conflict_degree(g, *e) >= 3)
        if hot:
            heavy_level, heavy_edge = i, hot[0]
            break

    return P3Context(
        graph=g,
        anchor=p3,
        side_left=side_left,
        side_right=side_right,
        full=frozenset(_bits(full_mask)),
        fringe=frozenset(_bits(fringe_mask)),
        layers=tuple(layers),
        frontiers=tuple(frontiers),
        marked=marked,
        heavy_level=heavy_level,
        heavy_edge=heavy_edge,
        _layer_of=layer_of,
    )


def component_closure(ctx: P3Context, g: Graph) -> frozenset[int]:
    """Anchor + partial layers + full + fringe.

    Whenever no edge of g has a conflict set of size >= 4 and the full set is
    a clique, this union must equal the connected component of the centre;
    the equality is asserted and a violation raises StructureError.
    """
    union = set(ctx.anchor) | ctx.full | ctx.fringe
    for layer in ctx.layers:
        union |= layer
    heavy_free = not any(conflict_degree(g, a, b) >= 4 for a, b in g.edges())
    full_mask = 0
    for x in ctx.full:
        full_mask |= 1 << x
    if heavy_free and is_clique_mask(g, full_mask):
        comp = frozenset(_bits(component_of(g, ctx.anchor[1])))
        if frozenset(union) != comp:
            raise StructureError(
                f"closure {sorted(union)} does not match component {sorted(comp)}"
            )
    return frozenset(union)


# --------------------------------------------------------------- the audit

@dataclass(frozen=True)
class Assumptions:
    """Which rule preconditions hold for the graph under audit.

    heavy_edge_free: no edge has a conflict set of size >= 4.
    square_free:     no induced 4-cycle.
    full_is_clique:  the full set induces a complete graph.
    """

    heavy_edge_free: bool = False
    square_free: bool = False
    full_is_clique: bool = False


@dataclass(frozen=True)
class AuditCheck:
    name: str
    status: str  # "passed" | "failed" | "skipped"
    witness: object = None


@dataclass(frozen=True)
class AuditReport:
    checks: tuple[AuditCheck, ...]

    @property
    def failures(self) -> tuple[AuditCheck, ...]:
        return tuple(c for c in self.checks if c.status == "failed")

    @property
    def passed(self) -> bool:
        return not self.failures

    def by_name(self, name: str) -> AuditCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _level_at_most(ctx: P3Context, bound: int) -> range:
    """Layer indices 1..min(heavy level, last layer), inclusive."""
    top = len(ctx.layers) - 1
    if ctx.heavy_level is not None:
        top = min(top, ctx.heavy_level)
    return range(bound, top + 1)


def audit_structure(ctx: P3Context, g: Graph, assume: Assumptions) -> AuditReport:
    """Check the structural bounds the isolate rule's analysis relies on.

    Each check runs only when its stated hypothesis holds (per `assume` and
    the heavy level); otherwise it is reported as skipped.  A failed check
    carries a concrete witness and means either a solver bug or a broken
    guarantee, so test suites must treat failures as fatal.
    """
    checks: list[AuditCheck] = []
    j = ctx.heavy_level  # None means no frontier is heavy (level infinity)

    def j_at_least(c: int) -> bool:
        return j is None or j >= c

    # side sets have at most two vertices each (needs: no heavy edge)
    if assume.heavy_edge_free:
        bad = None
        if len(ctx.side_left) > 2:
            bad = ("side_left", sorted(ctx.side_left))
        elif len(ctx.side_right) > 2:
            bad = ("side_right", sorted(ctx.side_right))
        checks.append(AuditCheck("side_size", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("side_size", "skipped"))

    # the full set is a clique (needs: no induced square)
    if assume.square_free:
        bad = None
        for x in sorted(ctx.full):
            for y in sorted(ctx.full):
                if y > x and not g.has_edge(x, y):
                    bad = (x, y)
                    break
            if bad:
                break
        checks.append(AuditCheck("full_clique", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("full_clique", "skipped"))

    # fringe bounds (needs: no heavy edge and full set a clique)
    if assume.heavy_edge_free and assume.full_is_clique:
        bad = None
        if len(ctx.fringe) > 3:
            bad = ("size", sorted(ctx.fringe))
        else:
            allowed = ctx.partial | ctx.full | ctx.fringe
            for x in sorted(ctx.fringe):
                nbrs = set(_bits(g.adj[x]))
                if not ctx.full <= nbrs:
                    bad = (x, "misses", sorted(ctx.full - nbrs))
                    break
                if not nbrs <= allowed:
                    bad = (x, "reaches", sorted(nbrs - allowed))
                    break
        checks.append(AuditCheck("fringe", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("fringe", "skipped"))

    # every layer vertex has at most two next-layer neighbours; first layer
    # and frontier 0 are bounded by twice the partial set
    if assume.heavy_edge_free:
        bad = None
        for i, layer in enumerate(ctx.layers):
            for x in sorted(layer):
                if len(ctx.next_neighbors(x)) > 2:
                    bad = (x, sorted(ctx.next_neighbors(x)))
                    break
            if bad:
                break
        if bad is None and len(ctx.layers) > 1:
            if len(ctx.layers[1]) > 2 * len(ctx.partial):
                bad = ("layer1", len(ctx.layers[1]), len(ctx.partial))
            elif len(ctx.frontiers[0]) > 2 * len(ctx.partial):
                bad = ("frontier0", len(ctx.frontiers[0]), len(ctx.partial))
        checks.append(AuditCheck("next_two", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("next_two", "skipped"))

    # below the heavy level every vertex has at most one next-layer neighbour
    if j_at_least(1):
        bad = None
        for i in _level_at_most(ctx, 1):
            for x in sorted(ctx.layers[i]):
                if len(ctx.next_neighbors(x)) > 1:
                    bad = (x, sorted(ctx.next_neighbors(x)))
                    break
            if bad:
                break
        checks.append(AuditCheck("next_one", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("next_one", "skipped"))

    # from layer 2 up to the heavy level: at most one same-layer neighbour,
    # and having one forbids next-layer neighbours
    if j_at_least(2):
        bad = None
        for i in _level_at_most(ctx, 2):
            for x in sorted(ctx.layers[i]):
                same = ctx.same_neighbors(x)
                if len(same) > 1:
                    bad = (x, "same", sorted(same))
                    break
                if len(same) == 1 and ctx.next_neighbors(x):
                    bad = (x, "same_and_next", sorted(ctx.next_neighbors(x)))
                    break
            if bad:
                break
        checks.append(AuditCheck("same_one", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("same_one", "skipped"))

    # from layer 3 up: at most two previous-layer neighbours, and exactly two
    # forbids same- and next-layer neighbours
    if j_at_least(3):
        bad = None
        for i in _level_at_most(ctx, 3):
            for x in sorted(ctx.layers[i]):
                prev = ctx.prev_neighbors(x)
                if len(prev) > 2:
                    bad = (x, "prev", sorted(prev))
                    break
                if len(prev) == 2 and (ctx.same_neighbors(x) or ctx.next_neighbors(x)):
                    bad = (x, "prev_two_not_isolated")
                    break
            if bad:
                break
        checks.append(AuditCheck("prev_two", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("prev_two", "skipped"))

    # a layer-2 vertex with a next-layer neighbour has at most two previous
    # neighbours, and its unique next neighbour is a pendant attached to it
    if j_at_least(2):
        bad = None
        layer2 = ctx.layers[2] if len(ctx.layers) > 2 else frozenset()
        for x in sorted(layer2):
            nxt = ctx.next_neighbors(x)
            if not nxt:
                continue
            if len(nxt) != 1:
                bad = (x, "next_not_unique", sorted(nxt))
                break
            if len(ctx.prev_neighbors(x)) > 2:
                bad = (x, "prev", sorted(ctx.prev_neighbors(x)))
                break
            (x2,) = nxt
            if set(_bits(g.adj[x2])) != {x}:
                bad = (x, "stub_degree", x2, sorted(_bits(g.adj[x2])))
                break
        checks.append(AuditCheck("stub_next", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("stub_next", "skipped"))

    # frontier sizes never grow up to the heavy level
    bad = None
    for i in _level_at_most(ctx, 1):
        if len(ctx.frontiers[i]) > len(ctx.frontiers[i - 1]):
            bad = (i, len(ctx.frontiers[i]), len(ctx.frontiers[i - 1]))
            break
    checks.append(AuditCheck("frontier_monotone", "failed" if bad else "passed", bad))

    # layers 2..heavy form disjoint paths, at most one per unmarked frontier-1
    # edge; components touching no unmarked frontier-1 edge must be singletons
    if j_at_least(2):
        bad = None
        zone = set()
        for i in _level_at_most(ctx, 2):
            zone |= ctx.layers[i]
        zone_mask = 0
        for x in zone:
            zone_mask |= 1 << x
        comps: list[set[int]] = []
        left = set(zone)
        while left:
            start = min(left)
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in _bits(g.adj[x] & zone_mask):
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            comps.append(comp)
            left -= comp
        frontier1 = ctx.frontiers[1] if len(ctx.frontiers) > 1 else frozenset()
        touched = 0
        for comp in comps:
            degs = [(g.adj[x] & zone_mask).bit_count() for x in comp]
            if max(degs, default=0) > 2 or sum(degs) // 2 != len(comp) - 1:
                bad = ("not_a_path", sorted(comp))
                break
            has_link = any(x in e for e in frontier1 for x in comp)
            if has_link:
                touched += 1
            elif len(comp) > 1:
                bad = ("unlinked_component", sorted(comp))
                break
        if bad is None and touched > len(frontier1):
            bad = ("too_many_paths", touched, len(frontier1))
        checks.append(AuditCheck("layer_paths", "failed" if bad else "passed", bad))
    else:
        checks.append(AuditCheck("layer_paths", "skipped"))

    return AuditReport(checks=tuple(checks))


def assumptions_for(g: Graph, full_set: frozenset[int]) -> Assumptions:
    """Compute the three precondition flags directly from the graph."""
    heavy_free = not any(conflict_degree(g, a, b) >= 4 for a, b in g.edges())
    square_free = find_induced_c4(g) is None
    mask = 0
    for x in full_set:
        mask |= 1 << x
    return Assumptions(
        heavy_edge_free=heavy_free,
        square_free=square_free,
        full_is_clique=is_clique_mask(g, mask),
    )
