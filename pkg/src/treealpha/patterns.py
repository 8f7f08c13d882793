"""Induced-subgraph pattern detection.

A generic exact backtracking matcher (capped), specialized searches for the
three-legged subdivided claw and for bicliques that scale past the generic
cap, and a bounded semi-decision for freeness from line graphs of wall
subdivisions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .caps import cap
from .errors import CapExceededError
from .graphs import Graph, generate, line_graph, max_stable_set, mask_to_set, subdivide


@dataclass
class Embedding:
    """Injective map from pattern vertices to host vertices, induced."""

    mapping: dict[int, int]

    def image(self) -> frozenset[int]:
        return frozenset(self.mapping.values())

    def verify(self, pattern: Graph, host: Graph) -> bool:
        m = self.mapping
        if set(m) != set(pattern.vertices):
            return False
        if len(set(m.values())) != len(m):
            return False
        for a in pattern.vertices:
            for b in range(a + 1, pattern.n):
                if pattern.has_edge(a, b) != host.has_edge(m[a], m[b]):
                    return False
        return True


@dataclass(frozen=True)
class PatternSpec:
    """One of the named forbidden structures, or an explicit pattern graph."""

    kind: str  # s_ttt | k_tt | k_gamma_2 | explicit
    t: int = 0
    gamma: int = 0
    graph: Graph | None = None

    def realize(self) -> Graph:
        if self.kind == "s_ttt":
            return generate("s_ttt", t=self.t)
        if self.kind == "k_tt":
            return generate("complete_bipartite", a=self.t, b=self.t)
        if self.kind == "k_gamma_2":
            return generate("k_gamma_2", gamma=self.gamma)
        if self.kind == "explicit":
            if self.graph is None:
                raise ValueError("explicit pattern spec needs a graph")
            return self.graph
        raise ValueError(f"unknown pattern kind {self.kind!r}")


def _backtrack_induced(g: Graph, h: Graph) -> Embedding | None:
    """Exact induced-subgraph search with forward-checked domains.

    Pattern vertices are assigned in id order and host candidates tried in
    ascending order, so the returned embedding is deterministic and a
    self-match yields the identity.
    """
    if h.n == 0:
        return Embedding({})
    if h.n > g.n:
        return None
    full = (1 << g.n) - 1
    domains = []
    for u in h.vertices:
        du = h.degree(u)
        m = 0
        for v in g.vertices:
            if g.degree(v) >= du:
                m |= 1 << v
        if not m:
            return None
        domains.append(m)

    assign: dict[int, int] = {}

    def rec(u: int, doms: list[int]) -> bool:
        if u == h.n:
            return True
        m = doms[u]
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            nbr = g.adj_mask(v)
            new_doms = list(doms)
            ok = True
            for p in range(u + 1, h.n):
                if h.has_edge(p, u):
                    nd = new_doms[p] & nbr
                else:
                    nd = new_doms[p] & ~nbr & full
                nd &= ~b
                if not nd:
                    ok = False
                    break
                new_doms[p] = nd
            if not ok:
                continue
            assign[u] = v
            if rec(u + 1, new_doms):
                return True
            del assign[u]
        return False

    if rec(0, domains):
        return Embedding(dict(assign))
    return None


def contains_induced(g: Graph, h: Graph, cap_override: int | None = None) -> Embedding | None:
    """An induced embedding of h into g, or None; exactness guaranteed."""
    limit = cap("pattern", cap_override)
    if h.n > limit:
        raise CapExceededError("contains_induced pattern size", h.n, limit)
    emb = _backtrack_induced(g, h)
    assert emb is None or emb.verify(h, g)
    return emb


# -- specialized searches -------------------------------------------------------


def _find_s_ttt(g: Graph, t: int) -> Embedding | None:
    """Center plus three induced legs of t vertices, pairwise anticomplete."""
    pattern_ids = lambda leg, pos: 1 + leg * t + pos  # noqa: E731

    for center in g.vertices:
        if g.degree(center) < 3:
            continue
        cmask = g.adj_mask(center)
        legs: list[list[int]] = []
        used = 1 << center

        def leg_ok(x: int, leg: list[int]) -> bool:
            xm = g.adj_mask(x)
            # attached only to its predecessor (or the center at position 0)
            if leg:
                if not (xm >> leg[-1]) & 1:
                    return False
                if (xm >> center) & 1:
                    return False
                for p in leg[:-1]:
                    if (xm >> p) & 1:
                        return False
            else:
                if not (xm >> center) & 1:
                    return False
            for other in legs:
                for p in other:
                    if (xm >> p) & 1:
                        return False
            return True

        def grow(leg: list[int]) -> bool:
            nonlocal used
            if len(leg) == t:
                legs.append(list(leg))
                if len(legs) == 3:
                    return True
                if grow([]):
                    return True
                legs.pop()
                return False
            for x in g.vertices:
                if (used >> x) & 1 or not leg_ok(x, leg):
                    continue
                leg.append(x)
                used |= 1 << x
                if grow(leg):
                    return True
                used &= ~(1 << x)
                leg.pop()
            return False

        if cmask.bit_count() >= 3 and grow([]):
            mapping = {0: center}
            for j, leg in enumerate(legs):
                for i, v in enumerate(leg):
                    mapping[pattern_ids(j, i)] = v
            return Embedding(mapping)
    return None


def _find_k_tt(g: Graph, t: int) -> Embedding | None:
    """Induced biclique with stable sides of size t, complete across."""
    found: list[tuple[list[int], list[int]]] = []

    def rec(a_list: list[int], common: int, start: int) -> bool:
        if len(a_list) == t:
            candidates = mask_to_set(common)
            if len(candidates) < t:
                return False
            stable = max_stable_set(g, candidates, cap_override=len(candidates))
            if len(stable) < t:
                return False
            found.append((a_list, sorted(stable)[:t]))
            return True
        need = t - len(a_list)
        for v in range(start, g.n - need + 1):
            if any(g.has_edge(v, a) for a in a_list):
                continue
            new_common = common & g.adj_mask(v) if a_list else g.adj_mask(v)
            if new_common.bit_count() < t:
                continue
            if rec(a_list + [v], new_common, v + 1):
                return True
        return False

    if not rec([], 0, 0):
        return None
    a_side, b_side = found[0]
    mapping = {i: v for i, v in enumerate(a_side)}
    mapping.update({t + i: v for i, v in enumerate(b_side)})
    return Embedding(mapping)


def find_pattern(g: Graph, spec: PatternSpec) -> Embedding | None:
    """Specialized pattern search; agrees with contains_induced where both run."""
    if spec.kind == "s_ttt":
        emb = _find_s_ttt(g, spec.t)
    elif spec.kind == "k_tt":
        emb = _find_k_tt(g, spec.t)
    else:
        emb = _backtrack_induced(g, spec.realize())
    assert emb is None or emb.verify(spec.realize(), g)
    return emb


# -- wall line-graph freeness (bounded) -----------------------------------------


@dataclass
class LtVerdict:
    """Semi-decision outcome; certified_cap is the largest host size the
    enumeration can definitively clear at the requested size cap."""

    status: str  # free | witness | inconclusive
    certified_cap: int
    witness: Embedding | None = None
    members_tested: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        out = {
            "verdict": self.status,
            "certified_cap": self.certified_cap,
            "members_tested": self.members_tested,
        }
        if self.witness is not None:
            out["witness"] = {str(k): v for k, v in sorted(self.witness.mapping.items())}
        return out


def _distributions(total: int, bins: int):
    """All ways to split `total` across `bins` nonnegative counts."""
    if bins == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _distributions(total - first, bins - 1):
            yield (first,) + rest


def lt_free_upto(g: Graph, t: int, size_cap: int,
                 member_budget: int = 200_000) -> LtVerdict:
    """Test g against line graphs of wall subdivisions up to size_cap vertices.

    A subdivision with V + s vertices (s extra) has a line graph on E + s
    vertices, so only s <= |V(g)| - E can possibly embed; verdicts are
    certified exactly when the cap covers every such s.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    wall = generate("wall", t=t)
    v_wall, e_wall = wall.n, wall.edge_count()
    edges = wall.edges()
    s_enum = size_cap - v_wall
    s_fit = g.n - e_wall

    tested = 0
    s_complete = -1
    for s in range(0, min(s_fit, s_enum) + 1):
        for dist in _distributions(s, len(edges)):
            if tested >= member_budget:
                return LtVerdict(
                    status="inconclusive",
                    certified_cap=e_wall + s_complete,
                    members_tested=tested,
                    notes=[f"member budget {member_budget} exhausted at s={s}"],
                )
            counts = {e: c for e, c in zip(edges, dist)}
            member, _ = line_graph(subdivide(wall, counts))
            tested += 1
            emb = _backtrack_induced(g, member)
            if emb is not None:
                return LtVerdict(
                    status="witness",
                    certified_cap=e_wall + max(s_enum, 0),
                    witness=emb,
                    members_tested=tested,
                )
        s_complete = s

    certified_cap = e_wall + s_enum
    if s_fit < 0 or s_complete >= s_fit:
        return LtVerdict(status="free", certified_cap=max(certified_cap, g.n),
                         members_tested=tested)
    return LtVerdict(status="inconclusive", certified_cap=certified_cap,
                     members_tested=tested)
