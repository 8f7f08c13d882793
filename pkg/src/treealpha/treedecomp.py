"""Tree decompositions: validation, statistics, exact tree independence
number for tiny graphs, assembly from a balanced-separator oracle, and exact
MWIS both brute-force and by dynamic programming over a decomposition."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .caps import cap
from .errors import (
    CapExceededError,
    InvariantViolationError,
    OracleContractError,
    PreconditionError,
)
from .graphs import (
    Graph,
    WeightFn,
    alpha_exact,
    check_vertex_set,
    components,
    mask_to_set,
    max_stable_set,
    set_to_mask,
)


@dataclass
class TreeDecomposition:
    """A tree plus a bag per tree node."""

    tree: Graph
    bags: dict[int, frozenset[int]]

    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def to_json(self) -> str:
        return json.dumps(
            {
                "nodes": list(range(self.tree.n)),
                "edges": [list(e) for e in self.tree.edges()],
                "bags": {str(t): sorted(b) for t, b in sorted(self.bags.items())},
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "TreeDecomposition":
        raw = json.loads(text)
        nodes = raw["nodes"]
        tree = Graph(len(nodes), [tuple(e) for e in raw["edges"]])
        bags = {int(t): frozenset(b) for t, b in raw["bags"].items()}
        return cls(tree, bags)

    @classmethod
    def single_bag(cls, g: Graph) -> "TreeDecomposition":
        return cls(Graph(1), {0: frozenset(g.vertices)})


@dataclass
class TDReport:
    ok: bool
    violations: list[tuple[str, object]] = field(default_factory=list)


def validate_td(g: Graph, td: TreeDecomposition) -> TDReport:
    """Check the three defining conditions, reporting every violation."""
    violations: list[tuple[str, object]] = []
    t = td.tree
    if set(td.bags) != set(t.vertices):
        violations.append(("tree", "bag keys do not match tree nodes"))
        return TDReport(False, violations)
    if t.n > 0 and (t.edge_count() != t.n - 1 or len(components(t)) != 1):
        violations.append(("tree", "decomposition tree is not a tree"))
        return TDReport(False, violations)

    covered: set[int] = set()
    for b in td.bags.values():
        covered |= b
    for v in g.vertices:
        if v not in covered:
            violations.append(("vertex-coverage", v))

    for u, v in g.edges():
        if not any(u in b and v in b for b in td.bags.values()):
            violations.append(("edge-coverage", (u, v)))

    for v in g.vertices:
        holders = [tn for tn in t.vertices if v in td.bags[tn]]
        if not holders:
            continue
        seen = {holders[0]}
        stack = [holders[0]]
        hold = set(holders)
        while stack:
            x = stack.pop()
            for y in t.neighbors(x):
                if y in hold and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != hold:
            violations.append(("subtree-connectivity", (v, sorted(hold))))

    return TDReport(not violations, violations)


def td_stats(g: Graph, td: TreeDecomposition,
             alpha_cap: int | None = None) -> tuple[int, int]:
    """(width, independence number) of the decomposition, exact."""
    width = td.width()
    independence = 0
    for b in td.bags.values():
        if b:
            independence = max(independence, alpha_exact(g, b, alpha_cap))
    return width, independence


# -- chordality and minimal triangulations -----------------------------------


def _is_chordal_masks(n: int, adj: list[int]) -> bool:
    # maximum cardinality search, then verify the elimination order is perfect
    weight = [0] * n
    order: list[int] = []
    placed = 0
    numbered = 0
    while placed < n:
        best, bw = -1, -1
        for v in range(n):
            if not (numbered >> v) & 1 and weight[v] > bw:
                best, bw = v, weight[v]
        order.append(best)
        numbered |= 1 << best
        placed += 1
        m = adj[best]
        while m:
            b = m & -m
            u = b.bit_length() - 1
            if not (numbered >> u) & 1:
                weight[u] += 1
            m ^= b
    order.reverse()  # order is a candidate perfect elimination ordering
    pos = {v: i for i, v in enumerate(order)}
    for i, v in enumerate(order):
        later = [u for u in mask_to_set(adj[v]) if pos[u] > i]
        if not later:
            continue
        w = min(later, key=lambda u: pos[u])
        for u in later:
            if u != w and not (adj[w] >> u) & 1:
                return False
    return True


def is_chordal(g: Graph) -> bool:
    return _is_chordal_masks(g.n, list(g._masks))


def minimal_triangulations(g: Graph) -> set[frozenset]:
    """All minimal chordal completions, as sets of fill edges.

    Enumerates elimination orderings depth-first, deduplicating on the
    (eliminated set, fill set) state, then filters non-minimal fill-ins by
    single-edge removal.
    """
    n = g.n
    base = list(g._masks)
    seen: set[tuple[int, frozenset]] = set()
    fills: set[frozenset] = set()

    def rec(remaining: int, adj: list[int], fill: frozenset):
        state = (remaining, fill)
        if state in seen:
            return
        seen.add(state)
        if remaining == 0:
            fills.add(fill)
            return
        m = remaining
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            nb = adj[v] & remaining & ~b
            new_adj = list(adj)
            new_fill = set()
            nbs = []
            mm = nb
            while mm:
                bb = mm & -mm
                nbs.append(bb.bit_length() - 1)
                mm ^= bb
            for i, a in enumerate(nbs):
                for c in nbs[i + 1:]:
                    if not (new_adj[a] >> c) & 1:
                        new_adj[a] |= 1 << c
                        new_adj[c] |= 1 << a
                        new_fill.add((min(a, c), max(a, c)))
            rec(remaining & ~b, new_adj, fill | frozenset(new_fill))

    rec((1 << n) - 1, base, frozenset())

    def with_fill(fill: Iterable[tuple[int, int]]) -> list[int]:
        adj = list(base)
        for a, c in fill:
            adj[a] |= 1 << c
            adj[c] |= 1 << a
        return adj

    minimal: set[frozenset] = set()
    for fill in fills:
        if all(
            not _is_chordal_masks(n, with_fill(fill - {e}))
            for e in fill
        ):
            minimal.add(fill)
    return minimal


def _maximal_cliques_chordal(n: int, adj: list[int]) -> list[frozenset[int]]:
    # perfect elimination order by MCS, then bag(v) = {v} + later neighbors
    weight = [0] * n
    numbered = 0
    order: list[int] = []
    for _ in range(n):
        best, bw = -1, -1
        for v in range(n):
            if not (numbered >> v) & 1 and weight[v] > bw:
                best, bw = v, weight[v]
        order.append(best)
        numbered |= 1 << best
        mm = adj[best]
        while mm:
            b = mm & -mm
            u = b.bit_length() - 1
            if not (numbered >> u) & 1:
                weight[u] += 1
            mm ^= b
    order.reverse()
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    for i, v in enumerate(order):
        later = frozenset(u for u in mask_to_set(adj[v]) if pos[u] > i) | {v}
        bags.append(later)
    out = []
    for b in bags:
        if not any(b < other for other in bags):
            out.append(b)
    return list(dict.fromkeys(out))


def tree_alpha_exact(g: Graph, cap_override: int | None = None) -> int:
    """Exact tree independence number via minimal chordal completions.

    The minimum over all minimal triangulations H of the largest stability
    number (in g) over the maximal cliques of H.
    """
    limit = cap("tree_alpha", cap_override)
    if g.n > limit:
        raise CapExceededError("tree_alpha_exact", g.n, limit)
    if g.n == 0:
        return 0
    best = None
    base = list(g._masks)
    for fill in minimal_triangulations(g):
        adj = list(base)
        for a, c in fill:
            adj[a] |= 1 << c
            adj[c] |= 1 << a
        worst = 0
        for bag in _maximal_cliques_chordal(g.n, adj):
            worst = max(worst, alpha_exact(g, bag))
        best = worst if best is None else min(best, worst)
    return best


# -- assembly from a balanced-separator oracle --------------------------------


SepOracle = Callable[[Graph, WeightFn], Iterable[int]]


@dataclass
class AssembleResult:
    td: TreeDecomposition
    oracle_alphas: list[int]
    d_realized: int
    max_pieces: int


def _balanced_here(g: Graph, w: WeightFn, x: frozenset[int], c: Fraction) -> bool:
    return all(w.weight(comp) <= c + w.tol for comp in components(g, x))


def assemble_td(g: Graph, sep_oracle: SepOracle, c: Fraction = Fraction(1, 2),
                alpha_cap: int | None = None) -> AssembleResult:
    """Build a tree decomposition by recursive balanced separation.

    Recursion state is (active region, accumulated boundary); the weight
    handed to the oracle is uniform on boundary plus active region, every
    oracle output is re-checked for (w,c)-balance, and the resulting
    decomposition is validated and its independence number asserted against
    ceil((3-c)/(1-c)) times the largest oracle-output stability number.
    """
    if not (Fraction(1, 2) <= c < 1):
        raise PreconditionError(f"balance fraction c={c} outside [1/2, 1)")
    bags: dict[int, frozenset[int]] = {}
    tree_edges: list[tuple[int, int]] = []
    oracle_alphas: list[int] = []
    max_pieces = 0

    def call_oracle(univ: frozenset[int], w: WeightFn) -> frozenset[int]:
        sub, to_sub, to_host = g.induced(univ)
        x_sub = frozenset(sep_oracle(sub, w.translate(to_sub)))
        for v in x_sub:
            if not (0 <= v < sub.n):
                raise OracleContractError(
                    f"oracle returned vertex {v} outside its instance", (sub, w)
                )
        if not _balanced_here(sub, w.translate(to_sub), x_sub, c):
            raise OracleContractError(
                "oracle output is not a balanced separator", (sub, w)
            )
        x = frozenset(to_host[v] for v in x_sub)
        oracle_alphas.append(alpha_exact(g, x, alpha_cap) if x else 0)
        return x

    def new_node(bag: frozenset[int]) -> int:
        node = len(bags)
        bags[node] = bag
        return node

    def decompose(region: frozenset[int], boundary: list[frozenset[int]]) -> int:
        nonlocal max_pieces
        bverts = frozenset().union(*boundary) if boundary else frozenset()
        if not region:
            return new_node(bverts)
        univ = region | bverts
        w = WeightFn.uniform(univ)
        x = call_oracle(univ, w)
        pieces = len([p for p in boundary if p]) + (1 if x else 0)
        bag = bverts | x
        outside = frozenset(g.vertices) - region
        rest = components(g, outside | x)
        if len(rest) == 1 and rest[0] == region:
            # the separator missed the active region; force a cut of it
            x2 = call_oracle(univ, WeightFn.uniform(region))
            x = x | x2
            bag = bverts | x
            pieces += 1
            rest = components(g, outside | x)
        max_pieces = max(max_pieces, pieces)
        node = new_node(bag)
        for comp in rest:
            nb = frozenset(
                u for u in bag if any(v in g.neighbors(u) for v in comp)
            )
            child_boundary = [p & nb for p in boundary if p & nb]
            if x & nb:
                child_boundary.append(x & nb)
            child = decompose(comp, child_boundary)
            tree_edges.append((node, child))
        return node

    decompose(frozenset(g.vertices), [])
    td = TreeDecomposition(Graph(len(bags), tree_edges), dict(bags))

    report = validate_td(g, td)
    if not report.ok:
        raise InvariantViolationError(
            "assembled decomposition failed validation", trace=report.violations
        )
    d_realized = max(oracle_alphas, default=0)
    _, indep = td_stats(g, td, alpha_cap)
    ratio = (3 - c) / (1 - c)
    bound = -(-ratio.numerator // ratio.denominator) * max(d_realized, 1)
    if indep > bound:
        raise InvariantViolationError(
            f"bag independence {indep} exceeds bound {bound}",
            trace={"d_realized": d_realized, "c": str(c)},
        )
    return AssembleResult(td, oracle_alphas, d_realized, max_pieces)


# -- MWIS ----------------------------------------------------------------------


@dataclass
class MWISInstance:
    graph: Graph
    weights: dict[int, object]

    def __post_init__(self):
        check_vertex_set(self.graph, self.weights.keys())
        for v, x in self.weights.items():
            if x < 0:
                raise ValueError(f"negative weight {x} at vertex {v}")

    def w(self, v: int):
        return self.weights.get(v, 0)

    def total(self, vs: Iterable[int]):
        return sum(self.w(v) for v in vs)


def _mwis_brute(inst: MWISInstance, cap_override: int | None) -> tuple[frozenset[int], object]:
    g = inst.graph
    limit = cap("mwis_brute", cap_override)
    if g.n > limit:
        raise CapExceededError("mwis brute force", g.n, limit)
    masks = g._masks
    best_set, best_val = 0, 0

    def bound(mask: int):
        # clique cover: one best-weight pick per clique
        total = 0
        rem = mask
        while rem:
            b = rem & -rem
            v = b.bit_length() - 1
            clique = [v]
            cand = rem & masks[v] & ~b
            rem ^= b
            while cand:
                cb = cand & -cand
                u = cb.bit_length() - 1
                clique.append(u)
                rem &= ~cb
                cand &= masks[u] & ~cb
            total += max(inst.w(u) for u in clique)
        return total

    def rec(mask: int, cur: int, cur_val):
        nonlocal best_set, best_val
        if mask == 0:
            if cur_val > best_val:
                best_set, best_val = cur, cur_val
            return
        if cur_val + bound(mask) <= best_val:
            return
        pick, score = -1, None
        mm = mask
        while mm:
            b = mm & -mm
            v = b.bit_length() - 1
            s = (inst.w(v), (masks[v] & mask).bit_count())
            if score is None or s > score:
                pick, score = v, s
            mm ^= b
        bit = 1 << pick
        rec(mask & ~(masks[pick] | bit), cur | bit, cur_val + inst.w(pick))
        rec(mask & ~bit, cur, cur_val)

    rec((1 << g.n) - 1, 0, 0)
    return mask_to_set(best_set), best_val


def _independent_subsets(g: Graph, bag: frozenset[int]) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []
    items = sorted(bag)

    def rec(i: int, chosen: list[int]):
        if i == len(items):
            out.append(frozenset(chosen))
            return
        v = items[i]
        rec(i + 1, chosen)
        if all(not g.has_edge(v, u) for u in chosen):
            chosen.append(v)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return out


def _mwis_td(inst: MWISInstance, td: TreeDecomposition,
             state_cap: int | None) -> tuple[frozenset[int], object]:
    g = inst.graph
    report = validate_td(g, td)
    if not report.ok:
        raise PreconditionError(f"invalid tree decomposition: {report.violations}")

    per_bag = {t: _independent_subsets(g, b) for t, b in td.bags.items()}
    limit = cap("mwis_states", state_cap)
    total_states = sum(len(v) for v in per_bag.values())
    if total_states > limit:
        raise CapExceededError("mwis td state count", total_states, limit)

    tree = td.tree
    root = 0
    parent = {root: None}
    order = [root]
    for t in order:
        for u in tree.neighbors(t):
            if u not in parent:
                parent[u] = t
                order.append(u)

    # nice-decomposition semantics, derived internally: each child table is
    # forgotten down to the shared intersection and re-introduced into the
    # parent bag; joins add values and subtract the shared weight once.
    tables: dict[int, dict[frozenset, tuple[object, frozenset]]] = {}

    def introduce_forget(table, from_bag, to_bag):
        cur_bag = set(from_bag)
        cur = table
        for v in sorted(from_bag - to_bag):  # forget
            cur_bag.discard(v)
            nxt: dict[frozenset, tuple[object, frozenset]] = {}
            for s, (val, wit) in cur.items():
                key = s - {v}
                if key not in nxt or val > nxt[key][0]:
                    nxt[key] = (val, wit)
            cur = nxt
        for v in sorted(to_bag - from_bag):  # introduce
            nxt = {}
            for s, (val, wit) in cur.items():
                if s not in nxt or val > nxt[s][0]:
                    nxt[s] = (val, wit)
                if all(not g.has_edge(v, u) for u in s):
                    key = s | {v}
                    cand = (val + inst.w(v), wit | {v})
                    if key not in nxt or cand[0] > nxt[key][0]:
                        nxt[key] = cand
            cur_bag.add(v)
            cur = nxt
        return cur

    for t in reversed(order):
        bag = td.bags[t]
        table = {
            s: (inst.total(s), frozenset(s)) for s in per_bag[t]
        }
        for u in tree.neighbors(t):
            if parent.get(u) != t:
                continue
            lifted = introduce_forget(tables[u], td.bags[u], bag)
            joined = {}
            for s, (val, wit) in table.items():
                if s in lifted:
                    lv, lw = lifted[s]
                    joined[s] = (val + lv - inst.total(s), wit | lw)
            table = joined
        tables[t] = table

    best_val, best_wit = None, frozenset()
    for s, (val, wit) in tables[root].items():
        if best_val is None or val > best_val:
            best_val, best_wit = val, wit
    return best_wit, best_val if best_val is not None else 0


def mwis(instance: MWISInstance, method: str = "brute",
         td: TreeDecomposition | None = None,
         cap_override: int | None = None) -> tuple[frozenset[int], object]:
    """Exact maximum weight stable set with a witness."""
    if method == "brute":
        return _mwis_brute(instance, cap_override)
    if method == "td":
        if td is None:
            raise PreconditionError("td method needs a decomposition")
        result = _mwis_td(instance, td, cap_override)
        wit, val = result
        if not all(
            not instance.graph.has_edge(a, b) for a in wit for b in wit if a < b
        ):
            raise InvariantViolationError("td DP produced a non-stable witness")
        return result
    raise ValueError(f"unknown mwis method {method!r}")
