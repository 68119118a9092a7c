import itertools
import random

import pytest

from clusterdel.generators import chain_gadget
from clusterdel.graph import Graph, delete_edges, find_induced_p3
from clusterdel.structure import (
    Assumptions,
    StructureError,
    assumptions_for,
    audit_structure,
    build_context,
    component_closure,
)

from helpers import path_graph, random_graph, star_graph


def naive_decomposition(g, p3):
    """Recompute every set straight from the definitions, no shortcuts."""
    u, v, w = p3
    anchor = {u, v, w}
    partial = {
        x
        for x in range(g.n)
        if x not in anchor and 1 <= sum(g.has_edge(x, a) for a in anchor) <= 2
    }
    full = {
        x
        for x in range(g.n)
        if x not in anchor and sum(g.has_edge(x, a) for a in anchor) == 3
    }
    fringe = {
        x
        for x in range(g.n)
        if x not in anchor | partial | full and any(g.has_edge(x, c) for c in full)
    }
    # literal BFS distance to the partial set
    dist = {x: 0 for x in partial}
    frontier = set(partial)
    while frontier:
        nxt = set()
        for x in frontier:
            for y in range(g.n):
                if g.has_edge(x, y) and y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.add(y)
        frontier = nxt
    outside = anchor | partial | full | fringe
    layers = {}
    for x, d in dist.items():
        if d >= 1 and x not in outside:
            layers.setdefault(d, set()).add(x)
    side_left = {
        b for b in partial if (g.has_edge(b, u) + g.has_edge(b, v)) == 1
    }
    side_right = {
        b for b in partial if (g.has_edge(b, w) + g.has_edge(b, v)) == 1
    }
    return partial, side_left, side_right, full, fringe, layers


def test_isolated_p3_context():
    g = path_graph(3)
    ctx = build_context(g, (0, 1, 2))
    assert ctx.partial == frozenset()
    assert ctx.full == frozenset() and ctx.fringe == frozenset()
    assert len(ctx.layers) == 1
    assert ctx.heavy_level is None and ctx.heavy_edge is None


def test_rejects_non_p3():
    g = path_graph(4)
    with pytest.raises(StructureError):
        build_context(g, (0, 1, 1))
    with pytest.raises(StructureError):
        build_context(g, (0, 2, 1))  # 0-2 is not an edge
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(StructureError):
        build_context(tri, (0, 1, 2))


def test_chain_gadget_context():
    g, anchor = chain_gadget()
    ctx = build_context(g, anchor)
    assert len(ctx.partial) == 4
    assert len(ctx.layers) == 3
    assert len(ctx.layers[1]) == 4
    assert len(ctx.layers[2]) == 6
    assert len(ctx.frontiers[0]) == 8
    assert ctx.heavy_level == 0


def test_partition_invariants_random():
    rng = random.Random(31)
    done = 0
    while done < 150:
        g = random_graph(rng.randint(4, 11), rng.choice([0.2, 0.4, 0.6]), rng)
        p3 = find_induced_p3(g)
        if p3 is None:
            continue
        done += 1
        ctx = build_context(g, p3)
        partial, sl, sr, full, fringe, layers = naive_decomposition(g, p3)
        assert ctx.partial == partial
        assert ctx.side_left == sl and ctx.side_right == sr
        assert ctx.side_left | ctx.side_right == ctx.partial
        assert ctx.full == full and ctx.fringe == fringe
        for i, layer in enumerate(ctx.layers[1:], start=1):
            assert layer == layers.get(i, set())
        # pairwise disjoint
        blocks = [set(ctx.anchor), ctx.partial, ctx.full, ctx.fringe, *ctx.layers[1:]]
        for a, b in itertools.combinations(blocks, 2):
            assert not (a & b)
        # every partial vertex keeps 1..2 anchor neighbours and so on
        for b in ctx.partial:
            assert 1 <= sum(g.has_edge(b, a) for a in ctx.anchor) <= 2
        for c in ctx.full:
            assert sum(g.has_edge(c, a) for a in ctx.anchor) == 3


def test_heavy_level_minimality():
    rng = random.Random(37)
    from clusterdel.graph import conflict_degree

    done = 0
    while done < 120:
        g = random_graph(rng.randint(4, 10), rng.choice([0.25, 0.5]), rng)
        p3 = find_induced_p3(g)
        if p3 is None:
            continue
        done += 1
        ctx = build_context(g, p3)
        j = ctx.heavy_level
        limit = len(ctx.frontiers) if j is None else j
        for i in range(limit):
            assert all(conflict_degree(g, *e) <= 2 for e in ctx.frontiers[i])
        if j is not None:
            assert any(conflict_degree(g, *e) >= 3 for e in ctx.frontiers[j])
            assert ctx.heavy_edge in ctx.frontiers[j]


def test_marks_shrink_frontier_one():
    g, anchor = chain_gadget()
    ctx = build_context(g, anchor)
    assert len(ctx.frontiers) > 1
    base = len(ctx.frontiers[1])
    some = sorted(ctx.frontiers[1])[:2]
    marked = build_context(g, anchor, marks=some)
    assert len(marked.frontiers[1]) == base - len(some)
    # marks never touch frontier 0
    assert marked.frontiers[0] == ctx.frontiers[0]


def test_component_closure_examples():
    g = path_graph(3)
    ctx = build_context(g, (0, 1, 2))
    assert component_closure(ctx, g) == {0, 1, 2}

    # P3 plus a vertex adjacent to all three plus a pendant on that vertex
    g2 = Graph.from_edges(5, [(0, 1), (1, 2), (3, 0), (3, 1), (3, 2), (3, 4)])
    ctx2 = build_context(g2, (0, 1, 2))
    assert ctx2.full == {3} and ctx2.fringe == {4}
    assert component_closure(ctx2, g2) == {0, 1, 2, 3, 4}


def test_component_closure_matches_component_on_reduced_instances():
    from clusterdel.graph import component_of, conflict_degree, _bits

    rng = random.Random(41)
    done = 0
    while done < 60:
        g = random_graph(rng.randint(5, 10), 0.35, rng)
        # crude reduction: delete heavy edges until none remains
        while True:
            heavy = [e for e in g.edges() if conflict_degree(g, *e) >= 4]
            if not heavy:
                break
            g = delete_edges(g, [heavy[0]])
        p3 = find_induced_p3(g)
        if p3 is None:
            continue
        ctx = build_context(g, p3)
        assume = assumptions_for(g, ctx.full)
        if not assume.full_is_clique:
            continue
        done += 1
        closure = component_closure(ctx, g)
        assert closure == set(_bits(component_of(g, p3[1])))


def test_audit_vacuous_on_isolated_p3():
    g = path_graph(3)
    ctx = build_context(g, (0, 1, 2))
    report = audit_structure(
        g=g, ctx=ctx, assume=Assumptions(True, True, True)
    )
    assert report.passed
    assert all(c.status == "passed" for c in report.checks)


def test_audit_hypothesis_gating():
    # star with a heavy edge: the side-size check must be skipped, not run
    g = star_graph(5)
    p3 = find_induced_p3(g)
    ctx = build_context(g, p3)
    report = audit_structure(g=g, ctx=ctx, assume=Assumptions(False, True, True))
    assert report.by_name("side_size").status == "skipped"
    assert report.by_name("full_clique").status == "passed"


def test_audit_failure_carries_witness():
    # five vertices attached to exactly one anchor endpoint break the side
    # bound, which is fine because the heavy-edge rule applies; force the
    # flag to observe the failure report
    g = star_graph(5)
    extra = Graph.from_edges(
        7, g.edges() + [(1, 6)]
    )  # 0 centre; make 1-0-2 style p3 exist
    p3 = find_induced_p3(extra)
    ctx = build_context(extra, p3)
    report = audit_structure(g=extra, ctx=ctx, assume=Assumptions(True, True, True))
    if not report.passed:
        for c in report.failures:
            assert c.witness is not None


def test_audit_on_reduced_random_graphs():
    from clusterdel.graph import conflict_degree, find_induced_c4

    rng = random.Random(43)
    done = 0
    while done < 150:
        g = random_graph(rng.randint(5, 11), rng.choice([0.3, 0.5]), rng)
        # reduce: drop heavy edges and square edges until neither applies
        while True:
            heavy = [e for e in g.edges() if conflict_degree(g, *e) >= 4]
            if heavy:
                g = delete_edges(g, [heavy[0]])
                continue
            sq = find_induced_c4(g)
            if sq is not None:
                v1, v2, v3, v4 = sq
                g = delete_edges(g, [tuple(sorted((v1, v2))), tuple(sorted((v3, v4)))])
                continue
            break
        p3 = find_induced_p3(g)
        if p3 is None:
            continue
        done += 1
        ctx = build_context(g, p3)
        assume = assumptions_for(g, ctx.full)
        assert assume.heavy_edge_free and assume.square_free and assume.full_is_clique
        report = audit_structure(g=g, ctx=ctx, assume=assume)
        assert report.passed, report.failures
