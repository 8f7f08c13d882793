"""Graph core: formats, generators, primitives, exact stability number."""

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treealpha.errors import CapExceededError, FormatError
from treealpha.graphs import (
    Graph,
    Path,
    WeightFn,
    alpha_exact,
    closed_nbhd,
    components,
    emit_graph,
    generate,
    is_anticomplete,
    line_graph,
    max_stable_set,
    open_nbhd,
    parse_graph,
    subdivide,
)

from .oracles import naive_alpha, naive_components


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph(10, outer + inner + spokes)


small_graphs = st.integers(0, 9).flatmap(
    lambda n: st.builds(
        Graph,
        st.just(n),
        st.lists(
            st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0)))
            .filter(lambda e: e[0] != e[1]),
            max_size=2 * n,
        ),
    )
    if n > 0
    else st.just(Graph(0))
)


class TestGraphBasics:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 5)])

    def test_multi_edges_collapse(self):
        g = Graph(2, [(0, 1), (1, 0), (0, 1)])
        assert g.edge_count() == 1

    def test_adjacency_symmetric(self):
        g = generate("gnp", n=12, p=0.4, seed=7)
        for u in g.vertices:
            for v in g.neighbors(u):
                assert u in g.neighbors(v)

    def test_induced_translation(self):
        g = generate("cycle", k=6)
        sub, to_sub, to_host = g.induced([1, 2, 4])
        assert sub.n == 3
        assert to_host[to_sub[4]] == 4
        assert sub.has_edge(to_sub[1], to_sub[2])
        assert not sub.has_edge(to_sub[2], to_sub[4])


class TestFormats:
    def test_graph6_known_string(self):
        # 'D?{' is a 5-vertex string; round-trip must be byte identical
        g = parse_graph("D?{", "graph6")
        assert g.n == 5
        assert emit_graph(g, "graph6") == "D?{"

    def test_graph6_header_stripped(self):
        g = parse_graph(">>graph6<<D?{", "graph6")
        assert g.n == 5

    def test_edgelist_p3(self):
        g = parse_graph("0 1\n1 2", "edgelist")
        assert g.n == 3
        assert g.edges() == [(0, 1), (1, 2)]

    def test_edgelist_self_loop_rejected(self):
        with pytest.raises(FormatError):
            parse_graph("0 0", "edgelist")

    def test_edgelist_non_integer_rejected(self):
        with pytest.raises(FormatError):
            parse_graph("0 x", "edgelist")

    def test_edgelist_declared_n_too_small(self):
        with pytest.raises(FormatError):
            parse_graph("0 5", "edgelist", n=3)

    def test_empty_graph_roundtrip(self):
        g = Graph(0)
        assert emit_graph(g, "graph6") == "?"
        assert parse_graph("?", "graph6").n == 0

    def test_k3_roundtrip(self):
        g = generate("complete", k=3)
        assert parse_graph(emit_graph(g, "graph6"), "graph6") == g

    def test_random_roundtrip_both_formats(self):
        g = generate("gnp", n=12, p=0.4, seed=7)
        for fmt in ("graph6", "edgelist"):
            assert parse_graph(emit_graph(g, fmt), fmt) == g

    def test_edgelist_keeps_isolated_vertices(self):
        g = Graph(5, [(0, 1)])
        assert parse_graph(emit_graph(g, "edgelist"), "edgelist") == g

    def test_graph6_bad_length(self):
        with pytest.raises(FormatError):
            parse_graph("D?", "graph6")

    @given(small_graphs)
    @settings(max_examples=120, deadline=None)
    def test_roundtrip_identity_property(self, g):
        for fmt in ("graph6", "edgelist"):
            assert parse_graph(emit_graph(g, fmt), fmt) == g

    def test_graph6_matches_networkx(self):
        nx = pytest.importorskip("networkx")
        for seed in range(12):
            g = generate("gnp", n=11, p=0.35, seed=seed)
            nxg = nx.Graph()
            nxg.add_nodes_from(g.vertices)
            nxg.add_edges_from(g.edges())
            theirs = nx.to_graph6_bytes(nxg, header=False).decode().strip()
            assert emit_graph(g, "graph6") == theirs


class TestGenerators:
    def test_s111_is_claw(self):
        g = generate("s_ttt", t=1)
        assert g.n == 4 and g.edge_count() == 3
        assert g.degree(0) == 3

    def test_k_gamma_2_of_3(self):
        g = generate("k_gamma_2", gamma=3)
        assert g.n == 9 and g.edge_count() == 9

    def test_wall_1_is_c6(self):
        g = generate("wall", t=1)
        assert g.n == 6 and g.edge_count() == 6
        assert all(g.degree(v) == 2 for v in g.vertices)

    def test_wall_degree_and_girth(self):
        for t in (2, 3):
            g = generate("wall", t=t)
            assert max(g.degree(v) for v in g.vertices) <= 3
            assert _girth(g) == 6

    def test_wall_2_counts(self):
        g = generate("wall", t=2)
        assert g.n == 16 and g.edge_count() == 19

    def test_gnp_deterministic(self):
        a = generate("gnp", n=20, p=0.3, seed=5)
        b = generate("gnp", n=20, p=0.3, seed=5)
        c = generate("gnp", n=20, p=0.3, seed=6)
        assert a == b
        assert a != c

    def test_bad_params(self):
        with pytest.raises(ValueError):
            generate("path", k=0)
        with pytest.raises(ValueError):
            generate("gnp", n=5, p=1.5, seed=0)


def _girth(g: Graph) -> int:
    best = None
    for src in g.vertices:
        dist = {src: 0}
        parent = {src: -1}
        queue = [src]
        while queue:
            u = queue.pop(0)
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    cyc = dist[u] + dist[w] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


class TestLineGraphSubdivide:
    def test_line_graph_p4(self):
        g, _ = line_graph(generate("path", k=4))
        assert g == generate("path", k=3)

    def test_line_graph_claw(self):
        g, _ = line_graph(generate("s_ttt", t=1))
        assert g == generate("complete", k=3)

    def test_line_graph_c5(self):
        g, _ = line_graph(generate("cycle", k=5))
        assert g.n == 5 and all(g.degree(v) == 2 for v in g.vertices)

    def test_line_graph_degree_identity(self):
        g = generate("gnp", n=10, p=0.4, seed=3)
        lg, ids = line_graph(g)
        for (u, v), i in ids.items():
            assert lg.degree(i) == g.degree(u) + g.degree(v) - 2

    def test_subdivide_k2_once(self):
        g = subdivide(Graph(2, [(0, 1)]), {(0, 1): 1})
        # ids 0,1 preserved; the new vertex 2 sits between them
        assert g.n == 3 and g.edges() == [(0, 2), (1, 2)]

    def test_subdivide_claw_gives_s222(self):
        g = generate("s_ttt", t=1)
        sub = subdivide(g, {e: 1 for e in g.edges()})
        s222 = generate("s_ttt", t=2)
        assert sub.n == s222.n and sub.edge_count() == s222.edge_count()
        assert sorted(sub.degree(v) for v in sub.vertices) == sorted(
            s222.degree(v) for v in s222.vertices
        )

    def test_subdivide_zero_is_identity(self):
        g = generate("gnp", n=8, p=0.5, seed=1)
        assert subdivide(g, {e: 0 for e in g.edges()}) == g

    def test_subdivide_unknown_edge(self):
        with pytest.raises(ValueError):
            subdivide(Graph(3, [(0, 1)]), {(1, 2): 1})

    def test_subdivide_vertex_count(self):
        g = generate("cycle", k=5)
        counts = {e: i for i, e in enumerate(g.edges())}
        assert subdivide(g, counts).n == g.n + sum(counts.values())


class TestSetPrimitives:
    def test_components_p5_middle(self):
        g = generate("path", k=5)
        comps = components(g, {2})
        assert sorted(len(c) for c in comps) == [2, 2]

    def test_components_c6_whole(self):
        assert len(components(generate("cycle", k=6))) == 1

    def test_components_k33_one_side(self):
        g = generate("complete_bipartite", a=3, b=3)
        comps = components(g, {0, 1, 2})
        assert sorted(len(c) for c in comps) == [1, 1, 1]

    def test_components_match_oracle(self):
        rng = random.Random(11)
        for _ in range(40):
            g = generate("gnp", n=9, p=0.3, seed=rng.randrange(10**6))
            removed = frozenset(v for v in g.vertices if rng.random() < 0.3)
            assert set(components(g, removed)) == naive_components(g, removed)

    def test_components_pairwise_anticomplete(self):
        g = generate("gnp", n=12, p=0.25, seed=9)
        comps = components(g, {0, 1})
        for i, a in enumerate(comps):
            for b in comps[i + 1:]:
                assert is_anticomplete(g, a, b)
        assert frozenset().union(*comps, frozenset({0, 1})) == frozenset(g.vertices)

    def test_star_center_closed_nbhd(self):
        g = generate("complete_bipartite", a=1, b=5)
        assert closed_nbhd(g, {0}) == frozenset(range(6))

    def test_leaf_open_nbhd(self):
        g = generate("path", k=3)
        assert open_nbhd(g, {0}) == frozenset({1})

    def test_empty_nbhd(self):
        g = generate("path", k=3)
        assert closed_nbhd(g, frozenset()) == frozenset()

    @given(small_graphs, st.data())
    @settings(max_examples=80, deadline=None)
    def test_nbhd_identities(self, g, data):
        xs = frozenset(
            data.draw(st.lists(st.integers(0, g.n - 1), max_size=g.n))
        ) if g.n else frozenset()
        assert closed_nbhd(g, xs) == xs | open_nbhd(g, xs)
        assert not (open_nbhd(g, xs) & xs)


class TestAlphaExact:
    def test_k5(self):
        assert alpha_exact(generate("complete", k=5)) == 1

    def test_c5(self):
        assert alpha_exact(generate("cycle", k=5)) == 2

    def test_petersen(self):
        assert alpha_exact(petersen()) == 4

    def test_subset(self):
        g = generate("cycle", k=6)
        assert alpha_exact(g, {0, 1, 2}) == 2

    def test_witness_is_stable(self):
        g = generate("gnp", n=14, p=0.4, seed=2)
        s = max_stable_set(g)
        assert len(s) == alpha_exact(g)
        for a in s:
            for b in s:
                if a != b:
                    assert not g.has_edge(a, b)

    def test_cap_refusal(self):
        g = Graph(6)
        with pytest.raises(CapExceededError):
            alpha_exact(g, cap_override=5)

    def test_matches_naive_on_200_random(self):
        rng = random.Random(424242)
        for _ in range(200):
            n = rng.randint(1, 16)
            g = generate("gnp", n=n, p=rng.choice([0.2, 0.5, 0.8]), seed=rng.randrange(10**6))
            assert alpha_exact(g) == naive_alpha(g)


class TestWeightFn:
    def test_total_cap(self):
        with pytest.raises(ValueError):
            WeightFn({0: Fraction(3, 4), 1: Fraction(1, 2)})

    def test_normal_flag(self):
        w = WeightFn.uniform(range(5))
        assert w.is_normal()
        assert not WeightFn({0: Fraction(1, 2)}).is_normal()

    def test_json_roundtrip(self):
        w = WeightFn({0: Fraction(1, 3), 2: Fraction(1, 6)})
        again = WeightFn.from_json(w.to_json())
        assert again.of(0) == Fraction(1, 3)
        assert again.of(1) == 0
        assert again.of(2) == Fraction(1, 6)

    def test_json_floats(self):
        w = WeightFn.from_json(json.dumps({"0": 0.25, "1": 0.75}))
        assert w.float_mode
        assert w.is_normal()

    def test_restrict_no_renormalize(self):
        w = WeightFn.uniform(range(4))
        r = w.restrict({0, 1})
        assert r.total == Fraction(1, 2)

    def test_scale(self):
        w = WeightFn({0: Fraction(1, 4)})
        assert w.scale(2).of(0) == Fraction(1, 2)
        with pytest.raises(ValueError):
            w.scale(8)


class TestPath:
    def test_path_verify(self):
        g = generate("cycle", k=5)
        assert Path((0, 1, 2)).verify(g)
        assert Path((0, 1, 2)).verify(g, induced=True)
        assert not Path((0, 2)).verify(g)
        assert Path((4, 0, 1)).verify(g, induced=True)

    def test_path_chord_not_induced(self):
        g = generate("cycle", k=4)
        assert Path((0, 1, 2, 3)).verify(g)
        assert not Path((0, 1, 2, 3)).verify(g, induced=True)  # chord 3-0

    def test_path_rejects_repeats(self):
        g = generate("cycle", k=4)
        assert not Path((0, 1, 0)).verify(g)
