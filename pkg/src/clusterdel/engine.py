"""Branch-and-reduce search for cluster deletion.

Three interchangeable strategies drive the search:

  baseline2k   split every induced P3 on its two edges; O*(2^k) tree.
  bd2011       long-path rule, then heavy-edge rule, then square rule, then
               the three-stage isolate rule.
  new1404      long-path rule, then heavy-edge rule; if an induced square
               remains, the square-isolate rule, otherwise the isolate rule.

All tie-breaking is lexicographic, so a given (graph, budget, strategy)
always produces the same tree and the same statistics.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .almost_clique import AlmostCliqueDecomposition, solve_component
from .graph import (
    Edge,
    Graph,
    _bits,
    component_of,
    conflict_degree,
    conflict_edges,
    connected_components,
    delete_edges,
    edge,
    find_induced_c4,
    find_induced_long_path,
    find_induced_p3,
    is_clique_mask,
    validate_solution,
)
from .structure import (
    P3Context,
    StructureError,
    assumptions_for,
    audit_structure,
    build_context,
)

STRATEGIES = ("baseline2k", "bd2011", "new1404")

RULE_KEYS = (
    "reduce",
    "p3",
    "long_path",
    "heavy_edge",
    "square",
    "isolate",
    "square_isolate",
)


class EngineError(Exception):
    """A rule precondition or internal guarantee was violated."""


class SearchTimeout(Exception):
    """The configured deadline expired before the search finished."""


@dataclass(frozen=True)
class Instance:
    """One node of the search tree: graph, remaining budget, live marks."""

    graph: Graph
    budget: int
    marked: frozenset[Edge] = frozenset()


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    elapsed: float = 0.0
    rule_counts: dict[str, int] = field(
        default_factory=lambda: {k: 0 for k in RULE_KEYS}
    )
    isolate_frontier_branches: int = 0
    isolate_path_branches: int = 0

    def signature(self) -> dict:
        """Everything except wall-clock time, for determinism comparisons."""
        return {
            "nodes_expanded": self.nodes_expanded,
            "max_depth": self.max_depth,
            "rule_counts": dict(self.rule_counts),
            "isolate_frontier_branches": self.isolate_frontier_branches,
            "isolate_path_branches": self.isolate_path_branches,
        }


def _edge_difference(parent: Graph, child: Graph) -> frozenset[Edge]:
    out = set()
    for v in range(parent.n):
        gone = parent.adj[v] & ~child.adj[v]
        gone &= ~((1 << (v + 1)) - 1)
        for u in _bits(gone):
            out.add((v, u))
    return frozenset(out)


def _heavy_edge(g: Graph) -> Optional[Edge]:
    """Lexicographically least edge whose conflict set has size >= 4."""
    for e in g.edges():
        if conflict_degree(g, *e) >= 4:
            return e
    return None


def _live_marks(marks: frozenset[Edge], g: Graph) -> frozenset[Edge]:
    return frozenset(e for e in marks if g.has_edge(*e))


# ------------------------------------------------------------------ reduce

def reduce_instance(inst: Instance) -> tuple[str, Instance]:
    """Verdict checks plus removal of components that are already cliques.

    Returns ("yes"|"no"|"open", instance); removed components are stripped
    to isolated vertices, which costs no budget and leaves ids stable.
    """
    g, k = inst.graph, inst.budget
    if k < 0:
        return "no", inst
    from .graph import is_cluster_graph

    if is_cluster_graph(g):
        return "yes", inst
    if k == 0:
        return "no", inst
    strip = []
    for comp in connected_components(g):
        if len(comp) < 2:
            continue
        mask = 0
        for v in comp:
            mask |= 1 << v
        if is_clique_mask(g, mask):
            strip.extend(
                (a, b) for a in comp for b in comp if a < b
            )
    if strip:
        g = delete_edges(g, strip)
        inst = Instance(g, k, _live_marks(inst.marked, g))
    return "open", inst


# ------------------------------------------------------------- plain rules

def rule_long_path(inst: Instance, path: tuple[int, ...]) -> list[Instance]:
    """Split an induced path on >= 7 vertices into its two alternating edge sets."""
    g = inst.graph
    if len(path) < 7:
        raise EngineError(f"path too short for the long-path rule: {path}")
    for i, a in enumerate(path):
        for j in range(i + 1, len(path)):
            if g.has_edge(a, path[j]) != (j == i + 1):
                raise EngineError(f"{path} is not an induced path")
    es = [edge(path[i], path[i + 1]) for i in range(len(path) - 1)]
    odds, evens = es[0::2], es[1::2]
    return [
        Instance(delete_edges(g, odds), inst.budget - len(odds), inst.marked),
        Instance(delete_edges(g, evens), inst.budget - len(evens), inst.marked),
    ]


def rule_heavy_edge(inst: Instance, e: Edge) -> list[Instance]:
    """Branch on keeping or deleting an edge with at least 4 conflict edges."""
    g = inst.graph
    fe = conflict_edges(g, e)
    if len(fe) < 4:
        raise EngineError(f"edge {e} has only {len(fe)} conflict edges")
    g1 = delete_edges(g, [e])
    g2 = delete_edges(g, fe)
    return [
        Instance(g1, inst.budget - 1, _live_marks(inst.marked, g1)),
        Instance(g2, inst.budget - len(fe), _live_marks(inst.marked, g2)),
    ]


def rule_square(inst: Instance, cycle: tuple[int, int, int, int]) -> list[Instance]:
    """Branch on the two opposite edge pairs of an induced 4-cycle."""
    g = inst.graph
    v1, v2, v3, v4 = cycle
    ok = (
        g.has_edge(v1, v2)
        and g.has_edge(v2, v3)
        and g.has_edge(v3, v4)
        and g.has_edge(v4, v1)
        and not g.has_edge(v1, v3)
        and not g.has_edge(v2, v4)
    )
    if not ok:
        raise EngineError(f"{cycle} is not an induced 4-cycle")
    pair_a = [edge(v1, v2), edge(v3, v4)]
    pair_b = [edge(v2, v3), edge(v4, v1)]
    ga = delete_edges(g, pair_a)
    gb = delete_edges(g, pair_b)
    return [
        Instance(ga, inst.budget - 2, _live_marks(inst.marked, ga)),
        Instance(gb, inst.budget - 2, _live_marks(inst.marked, gb)),
    ]


# ------------------------------------------------------------ isolate rule

def rule_isolate(
    inst: Instance,
    p3: tuple[int, int, int],
    stats: Optional[SearchStats] = None,
    audit: bool = False,
) -> list[Instance]:
    """Disconnect the anchor P3's region from the rest in three stages.

    Stage 1 branches on heavy frontier edges (keep-or-delete-conflicts) until
    no frontier is heavy, marking replaced level-1 edges in the bulk child.
    Stage 2 splits every >= 7-vertex path living in layers 2 and beyond.
    Stage 3 solves the component of the centre exactly (it is now almost a
    clique: everything outside the full set is small) and emits one child per
    branch with the marks cleared.  Descendants whose budget would go
    negative are pruned.
    """
    g0, k0 = inst.graph, inst.budget
    if _heavy_edge(g0) is not None:
        raise EngineError("isolate rule requires that no heavy edge remains")
    ctx0 = build_context(g0, p3, _live_marks(inst.marked, g0))
    full_mask = 0
    for x in ctx0.full:
        full_mask |= 1 << x
    if not is_clique_mask(g0, full_mask):
        raise EngineError("isolate rule requires the full set to be a clique")
    if audit:
        assume = assumptions_for(g0, ctx0.full)
        report = audit_structure(ctx=ctx0, g=g0, assume=assume)
        if not report.passed:
            raise StructureError(f"structure audit failed: {report.failures}")

    # stage 1: branch on heavy frontier edges until none is left
    first_stage = frontier_stage_leaves(g0, k0, p3, ctx0.marked, stats=stats)

    # stage 2: alternate-edge splits of long paths beyond layer 1
    second_stage: list[tuple[Graph, int, frozenset[Edge]]] = []
    for g1, k1, m1, _splits in first_stage:
        ctx1 = build_context(g1, p3, m1)
        paths = _zone_paths(g1, ctx1)
        long_paths = [p for p in paths if len(p) >= 7]
        if not long_paths:
            second_stage.append((g1, k1, m1))
            continue
        if stats is not None:
            stats.isolate_path_branches += len(long_paths)
        combos: list[list[Edge]] = [[]]
        for p in long_paths:
            es = [edge(p[i], p[i + 1]) for i in range(len(p) - 1)]
            sides = (es[0::2], es[1::2])
            combos = [prev + list(side) for prev in combos for side in sides]
        for combo in combos:
            k2 = k1 - len(combo)
            if k2 < 0:
                continue
            g2 = delete_edges(g1, combo)
            second_stage.append((g2, k2, _live_marks(m1, g2)))

    # stage 3: exact solve of the centre's component, marks cleared
    children: list[Instance] = []
    for g2, k2, m2 in second_stage:
        ctx2 = build_context(g2, p3, m2)
        comp = frozenset(_bits(component_of(g2, p3[1])))
        q = ctx2.full
        x = comp - q
        if audit:
            expected = set(p3) | ctx2.fringe
            for layer in ctx2.layers:
                expected |= layer
            if x != expected:
                raise StructureError(
                    f"component of the centre is {sorted(comp)} but the "
                    f"decomposition covers {sorted(expected | q)}"
                )
        s = solve_component(g2, AlmostCliqueDecomposition(x, q))
        if not s:
            raise EngineError("stage-3 exact solve deleted nothing")
        k3 = k2 - len(s)
        if k3 < 0:
            continue
        children.append(Instance(delete_edges(g2, s), k3, frozenset()))
    return children


def frontier_stage_leaves(
    g: Graph,
    k: int,
    p3: tuple[int, int, int],
    marked: frozenset[Edge] = frozenset(),
    stats: Optional[SearchStats] = None,
) -> list[tuple[Graph, int, frozenset[Edge], int]]:
    """Leaves of the isolate rule's first stage as (graph, budget, marks, splits).

    `splits` counts the keep-or-delete branchings taken to reach the leaf; the
    all-single-deletions leaf therefore has splits equal to its budget drop.
    Branches whose budget would go negative are pruned.
    """
    leaves: list[tuple[Graph, int, frozenset[Edge], int]] = []

    def descend(gg: Graph, kk: int, marks: frozenset[Edge], splits: int) -> None:
        ctx = build_context(gg, p3, marks)
        if ctx.heavy_level is None:
            leaves.append((gg, kk, marks, splits))
            return
        if stats is not None:
            stats.isolate_frontier_branches += 1
        e = ctx.heavy_edge
        if kk - 1 >= 0:
            g1 = delete_edges(gg, [e])
            descend(g1, kk - 1, _live_marks(marks, g1), splits + 1)
        fe = conflict_edges(gg, e)
        bulk_marked = marks
        if ctx.heavy_level == 1:
            a, b = e
            x, y = (a, b) if ctx.layer_of(a) == 1 else (b, a)
            shared = ctx.same_neighbors(x) & ctx.prev_neighbors(y)
            if shared:
                bulk_marked = marks | {edge(s, x) for s in shared} | {
                    edge(s, y) for s in shared
                }
        if kk - len(fe) >= 0:
            g2 = delete_edges(gg, fe)
            descend(g2, kk - len(fe), _live_marks(bulk_marked, g2), splits + 1)

    descend(g, k, _live_marks(marked, g), 0)
    return leaves


def _zone_paths(g: Graph, ctx: P3Context) -> list[tuple[int, ...]]:
    """Component paths of the induced subgraph on layers 2 and beyond."""
    zone = set()
    for layer in ctx.layers[2:]:
        zone |= layer
    zone_mask = 0
    for v in zone:
        zone_mask |= 1 << v
    paths = []
    left = set(zone)
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in _bits(g.adj[v] & zone_mask):
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        left -= comp
        degs = {v: (g.adj[v] & zone_mask).bit_count() for v in comp}
        if max(degs.values()) > 2 or sum(degs.values()) // 2 != len(comp) - 1:
            raise StructureError(f"layer component {sorted(comp)} is not a path")
        if len(comp) == 1:
            paths.append((start,))
            continue
        ends = sorted(v for v, d in degs.items() if d == 1)
        cur, prev = ends[0], None
        seq = [cur]
        while len(seq) < len(comp):
            nxt = next(
                u for u in _bits(g.adj[cur] & zone_mask) if u != prev
            )
            seq.append(nxt)
            cur, prev = nxt, cur
        paths.append(tuple(seq))
    return paths


# ----------------------------------------------------- square-isolate rule

def rule_square_isolate(
    inst: Instance,
    cycle: tuple[int, int, int, int],
    stats: Optional[SearchStats] = None,
    audit: bool = False,
) -> list[Instance]:
    """Square-guided splitting around the P3 hidden in an induced 4-cycle.

    The cycle (u, v, w, u2) makes (u, v, w) an induced P3.  If its full set
    is a clique the isolate rule applies directly.  Otherwise branch on the
    square through two non-adjacent full vertices; on each child apply the
    heavy-edge rule if possible, else repeat the square step once more, after
    which the heavy-edge rule is guaranteed (three vertices then sit on one
    side of the anchor, which forces a heavy edge).
    """
    g, k = inst.graph, inst.budget
    u, v, w, u2 = cycle
    ok = (
        g.has_edge(u, v)
        and g.has_edge(v, w)
        and g.has_edge(w, u2)
        and g.has_edge(u2, u)
        and not g.has_edge(u, w)
        and not g.has_edge(v, u2)
    )
    if not ok:
        raise EngineError(f"{cycle} is not an induced 4-cycle")
    if _heavy_edge(g) is not None:
        raise EngineError("square-isolate requires that no heavy edge remains")

    def full_set(gi: Graph) -> frozenset[int]:
        mask = gi.adj[u] & gi.adj[v] & gi.adj[w]
        return frozenset(_bits(mask))

    def least_nonadjacent(gi: Graph, verts: frozenset[int]) -> Optional[Edge]:
        for a in sorted(verts):
            for b in sorted(verts):
                if b > a and not gi.has_edge(a, b):
                    return (a, b)
        return None

    def clique(gi: Graph, verts: frozenset[int]) -> bool:
        mask = 0
        for t in verts:
            mask |= 1 << t
        return is_clique_mask(gi, mask)

    full0 = full_set(g)
    if clique(g, full0):
        return rule_isolate(inst, (u, v, w), stats=stats, audit=audit)

    x, y = least_nonadjacent(g, full0)
    children: list[Instance] = []
    for pair in ([edge(u, x), edge(w, y)], [edge(x, w), edge(y, u)]):
        ki = k - 2
        if ki < 0:
            continue
        gi = delete_edges(g, pair)
        mi = _live_marks(inst.marked, gi)
        heavy = _heavy_edge(gi)
        if heavy is not None:
            children.extend(rule_heavy_edge(Instance(gi, ki, mi), heavy))
            continue
        fi = full_set(gi)
        if clique(gi, fi):
            children.extend(
                rule_isolate(Instance(gi, ki, mi), (u, v, w), stats=stats, audit=audit)
            )
            continue
        xi, yi = least_nonadjacent(gi, fi)
        for pair2 in ([edge(u, xi), edge(w, yi)], [edge(xi, w), edge(yi, u)]):
            kii = ki - 2
            if kii < 0:
                continue
            gii = delete_edges(gi, pair2)
            mii = _live_marks(mi, gii)
            heavy2 = _heavy_edge(gii)
            if heavy2 is None:
                raise EngineError(
                    "heavy edge must exist after the second square split"
                )
            children.extend(rule_heavy_edge(Instance(gii, kii, mii), heavy2))
    return children


# ------------------------------------------------------------- the search

def _pick_long_path(g: Graph, mode: str) -> Optional[tuple[int, ...]]:
    if g.n < 7:
        return None
    return find_induced_long_path(g, 7, isolated_interior=(mode == "guarded"))


def solve_decision_stats(
    g: Graph,
    k: int,
    strategy: str,
    *,
    audit: bool = False,
    long_path_mode: str = "guarded",
    timeout: Optional[float] = None,
) -> tuple[Optional[frozenset[Edge]], SearchStats]:
    """Witness of at most k deletions (or None) plus search statistics.

    long_path_mode selects which induced >= 7-vertex paths the long-path rule
    accepts.  The default "guarded" admits only paths whose interior vertices
    have no neighbours off the path, which is provably safe.  "literal"
    admits every induced path; that variant is refuted by the 8-vertex graph
    made of a 7-path plus one vertex adjacent to positions 2 and 4, whose
    optimum keeps a mixed-parity matching, so it exists for comparison only.
    """
    if k < 0:
        raise ValueError("budget must be non-negative")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if long_path_mode not in ("guarded", "literal"):
        raise ValueError(f"unknown long_path_mode {long_path_mode!r}")
    stats = SearchStats()
    deadline = time.monotonic() + timeout if timeout is not None else None
    start = time.perf_counter()

    def search(inst: Instance, depth: int) -> Optional[frozenset[Edge]]:
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout
        stats.nodes_expanded += 1
        stats.max_depth = max(stats.max_depth, depth)
        before = inst
        status, inst2 = reduce_instance(inst)
        if status == "yes":
            return frozenset()
        if status == "no":
            return None
        if inst2.graph is not before.graph:
            stats.rule_counts["reduce"] += 1
        inst = inst2
        gg, kk = inst.graph, inst.budget

        if strategy == "baseline2k":
            p3 = find_induced_p3(gg)
            stats.rule_counts["p3"] += 1
            pu, pv, pw = p3
            g1 = delete_edges(gg, [edge(pu, pv)])
            g2 = delete_edges(gg, [edge(pv, pw)])
            children = [
                Instance(g1, kk - 1, _live_marks(inst.marked, g1)),
                Instance(g2, kk - 1, _live_marks(inst.marked, g2)),
            ]
        else:
            path = _pick_long_path(gg, strict_long_path)
            if path is not None:
                stats.rule_counts["long_path"] += 1
                children = rule_long_path(inst, path)
            else:
                heavy = _heavy_edge(gg)
                if heavy is not None:
                    stats.rule_counts["heavy_edge"] += 1
                    children = rule_heavy_edge(inst, heavy)
                else:
                    square = find_induced_c4(gg)
                    if strategy == "bd2011":
                        if square is not None:
                            stats.rule_counts["square"] += 1
                            children = rule_square(inst, square)
                        else:
                            stats.rule_counts["isolate"] += 1
                            p3 = find_induced_p3(gg)
                            children = rule_isolate(inst, p3, stats=stats, audit=audit)
                    else:  # new1404
                        if square is not None:
                            stats.rule_counts["square_isolate"] += 1
                            children = rule_square_isolate(
                                inst, square, stats=stats, audit=audit
                            )
                        else:
                            stats.rule_counts["isolate"] += 1
                            p3 = find_induced_p3(gg)
                            children = rule_isolate(inst, p3, stats=stats, audit=audit)

        for child in children:
            deleted = _edge_difference(gg, child.graph)
            if not deleted or child.budget != kk - len(deleted):
                raise EngineError(
                    f"child budget {child.budget} does not match "
                    f"{len(deleted)} deletions from budget {kk}"
                )
            sub = search(child, depth + 1)
            if sub is not None:
                return deleted | sub
        return None

    witness = search(Instance(g, k, frozenset()), 0)
    stats.elapsed = time.perf_counter() - start
    if witness is not None and not validate_solution(g, witness, k):
        raise EngineError("search produced an invalid witness")
    return witness, stats


def solve_decision(
    g: Graph, k: int, strategy: str = "new1404", **kwargs
) -> Optional[frozenset[Edge]]:
    return solve_decision_stats(g, k, strategy, **kwargs)[0]


def solve_minimum_stats(
    g: Graph, strategy: str = "new1404", **kwargs
) -> tuple[int, frozenset[Edge], SearchStats]:
    """Smallest k admitting a solution, its witness, and summed statistics."""
    total = SearchStats()
    for k in range(g.edge_count() + 1):
        witness, stats = solve_decision_stats(g, k, strategy, **kwargs)
        total.nodes_expanded += stats.nodes_expanded
        total.max_depth = max(total.max_depth, stats.max_depth)
        total.elapsed += stats.elapsed
        for key, cnt in stats.rule_counts.items():
            total.rule_counts[key] += cnt
        total.isolate_frontier_branches += stats.isolate_frontier_branches
        total.isolate_path_branches += stats.isolate_path_branches
        if witness is not None:
            if len(witness) != k:
                raise EngineError(
                    f"witness of size {len(witness)} found first at budget {k}"
                )
            return k, witness, total
    raise EngineError("unreachable: deleting every edge clusters any graph")


def solve_minimum(g: Graph, strategy: str = "new1404", **kwargs) -> tuple[int, frozenset[Edge]]:
    k, witness, _ = solve_minimum_stats(g, strategy, **kwargs)
    return k, witness
