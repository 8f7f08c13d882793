"""Immutable simple graphs, weight functions, generators and set primitives.

Vertices are dense ids ``0..n-1``. Induced subgraphs return an explicit id
translation instead of renumbering silently. All randomized generation takes
an explicit seed and is deterministic. Graphs are immutable after
construction and safe to share across concurrent tasks.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .caps import cap
from .errors import CapExceededError, FormatError

Vertex = int
Edge = tuple[int, int]

FLOAT_TOL = Fraction(1, 10**9)


def norm_edge(u: int, v: int) -> Edge:
    """Normalize an undirected edge to (min, max) form."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph: symmetric adjacency, no loops, no multi-edges."""

    __slots__ = ("n", "_adj", "_masks")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)
        masks = []
        for s in adj:
            m = 0
            for w in s:
                m |= 1 << w
            masks.append(m)
        self._masks = tuple(masks)

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def adj_mask(self, v: int) -> int:
        return self._masks[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def edge_count(self) -> int:
        return sum(len(s) for s in self._adj) // 2

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"

    # -- derived graphs ----------------------------------------------------

    def induced(self, verts: Iterable[int]) -> tuple["Graph", dict[int, int], tuple[int, ...]]:
        """Induced subgraph plus id translation.

        Returns (subgraph, host_to_sub, sub_to_host); sub ids are assigned in
        increasing host-id order.
        """
        order = sorted(set(verts))
        check_vertex_set(self, order)
        host_to_sub = {h: i for i, h in enumerate(order)}
        edges = [
            (host_to_sub[u], host_to_sub[v])
            for u in order
            for v in self._adj[u]
            if u < v and v in host_to_sub
        ]
        return Graph(len(order), edges), host_to_sub, tuple(order)

    def complement_mask(self, mask: int) -> int:
        return ((1 << self.n) - 1) & ~mask


def set_to_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def mask_to_set(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def check_vertex_set(g: Graph, vs: Iterable[int]) -> frozenset[int]:
    """Validate that every id lies in g's universe; returns the frozenset."""
    s = frozenset(vs)
    for v in s:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} outside universe 0..{g.n - 1}")
    return s


# -- paths -------------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    """An ordered sequence of distinct vertices forming a path."""

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def verify(self, g: Graph, induced: bool = False) -> bool:
        vs = self.vertices
        if len(set(vs)) != len(vs) or not vs:
            return False
        for a, b in zip(vs, vs[1:]):
            if not g.has_edge(a, b):
                return False
        if induced:
            for i, a in enumerate(vs):
                for b in vs[i + 2:]:
                    if g.has_edge(a, b):
                        return False
        return True


def is_induced_path(g: Graph, vs: Iterable[int]) -> bool:
    return Path(tuple(vs)).verify(g, induced=True)


# -- weight functions ---------------------------------------------------------


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise FormatError(f"cannot interpret weight {x!r}")


class WeightFn:
    """Nonnegative vertex weights with total at most 1.

    Weights are held as exact rationals; floats given by the caller are
    converted to their exact binary value and ``float_mode`` switches the
    normality test and balance comparisons to a 1e-9 tolerance.
    """

    __slots__ = ("_w", "float_mode")

    def __init__(self, weights: Mapping[int, object], float_mode: bool = False):
        w: dict[int, Fraction] = {}
        saw_float = float_mode
        for v, x in weights.items():
            if isinstance(x, float):
                saw_float = True
            fx = _to_fraction(x)
            if fx < 0 or fx > 1:
                raise ValueError(f"weight of {v} is {fx}, outside [0,1]")
            if fx:
                w[int(v)] = fx
        self._w = w
        self.float_mode = saw_float
        if self.total > 1 + self.tol:
            raise ValueError(f"total weight {self.total} exceeds 1")

    @property
    def tol(self) -> Fraction:
        return FLOAT_TOL if self.float_mode else Fraction(0)

    def of(self, v: int) -> Fraction:
        return self._w.get(v, Fraction(0))

    def weight(self, vs: Iterable[int]) -> Fraction:
        return sum((self._w.get(v, Fraction(0)) for v in vs), Fraction(0))

    @property
    def total(self) -> Fraction:
        return sum(self._w.values(), Fraction(0))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._w)

    def is_normal(self) -> bool:
        return abs(self.total - 1) <= self.tol

    def normalized(self) -> "WeightFn":
        t = self.total
        if t == 0:
            raise ValueError("cannot normalize an all-zero weight function")
        return WeightFn({v: x / t for v, x in self._w.items()}, self.float_mode)

    def restrict(self, vs: Iterable[int]) -> "WeightFn":
        """Restriction without renormalization; thresholds stay absolute."""
        keep = set(vs)
        return WeightFn({v: x for v, x in self._w.items() if v in keep}, self.float_mode)

    def scale(self, factor) -> "WeightFn":
        f = _to_fraction(factor)
        return WeightFn({v: x * f for v, x in self._w.items()}, self.float_mode)

    def translate(self, mapping: Mapping[int, int]) -> "WeightFn":
        """Reindex weights through a host-to-sub id translation."""
        return WeightFn(
            {mapping[v]: x for v, x in self._w.items() if v in mapping}, self.float_mode
        )

    @classmethod
    def uniform(cls, vs: Iterable[int]) -> "WeightFn":
        vs = list(vs)
        if not vs:
            raise ValueError("uniform weight function needs a nonempty set")
        share = Fraction(1, len(vs))
        return cls({v: share for v in vs})

    def items(self):
        return sorted(self._w.items())

    # -- JSON boundary: {"vertex": "num/den" | float} ----------------------

    @classmethod
    def from_json(cls, text: str) -> "WeightFn":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError(f"bad weight JSON: {e}") from e
        if not isinstance(raw, dict):
            raise FormatError("weight JSON must be an object")
        return cls({int(k): v for k, v in raw.items()})

    def to_json(self) -> str:
        out = {}
        for v, x in self.items():
            out[str(v)] = f"{x.numerator}/{x.denominator}" if not self.float_mode else float(x)
        return json.dumps(out, sort_keys=True)

    def __repr__(self) -> str:
        return f"WeightFn(total={self.total}, support={len(self._w)})"


# -- neighborhoods and components ---------------------------------------------


def open_nbhd(g: Graph, x: Iterable[int]) -> frozenset[int]:
    """N(X): vertices outside X with a neighbor in X."""
    xs = check_vertex_set(g, x)
    out: set[int] = set()
    for v in xs:
        out |= g.neighbors(v)
    return frozenset(out - xs)


def closed_nbhd(g: Graph, x: Iterable[int]) -> frozenset[int]:
    """N[X] = X together with N(X)."""
    xs = check_vertex_set(g, x)
    out = set(xs)
    for v in xs:
        out |= g.neighbors(v)
    return frozenset(out)


def components(g: Graph, removed: Iterable[int] = ()) -> list[frozenset[int]]:
    """Connected components of g minus ``removed``, sorted by least vertex."""
    rm = check_vertex_set(g, removed)
    seen = set(rm)
    out = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        out.append(frozenset(comp))
    return out


def components_masks(g: Graph, removed_mask: int = 0) -> list[int]:
    """Component bitmasks of g minus the masked vertices, by least vertex."""
    alive = g.complement_mask(removed_mask)
    out = []
    while alive:
        low = alive & -alive
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                v = b.bit_length() - 1
                nxt |= g.adj_mask(v)
                m ^= b
            frontier = nxt & alive & ~comp
            comp |= frontier
        out.append(comp)
        alive &= ~comp
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


# -- maximum stable set (exact) -----------------------------------------------


def _clique_cover_bound(masks: tuple[int, ...], mask: int) -> int:
    # greedy partition into cliques; the number of cliques bounds alpha
    count = 0
    rem = mask
    while rem:
        b = rem & -rem
        v = b.bit_length() - 1
        cand = rem & masks[v] & ~b
        rem ^= b
        while cand:
            cb = cand & -cand
            u = cb.bit_length() - 1
            rem &= ~cb
            cand = cand & masks[u] & ~cb
        count += 1
    return count


def _max_stable_mask(masks: tuple[int, ...], mask: int) -> int:
    best = 0
    best_size = -1

    def rec(m: int, cur: int, cur_size: int):
        nonlocal best, best_size
        if m == 0:
            if cur_size > best_size:
                best, best_size = cur, cur_size
            return
        if cur_size + _clique_cover_bound(masks, m) <= best_size:
            return
        # branch on a vertex of maximum degree inside m
        pick, pick_deg = -1, -1
        mm = m
        while mm:
            b = mm & -mm
            v = b.bit_length() - 1
            d = (masks[v] & m).bit_count()
            if d > pick_deg:
                pick, pick_deg = v, d
            mm ^= b
        bit = 1 << pick
        if pick_deg == 0:
            # m is edgeless; take it all
            total = cur_size + m.bit_count()
            if total > best_size:
                best, best_size = cur | m, total
            return
        rec(m & ~(masks[pick] | bit), cur | bit, cur_size + 1)
        rec(m & ~bit, cur, cur_size)

    rec(mask, 0, 0)
    return best


def max_stable_set(g: Graph, x: Iterable[int] | None = None,
                   cap_override: int | None = None) -> frozenset[int]:
    """A maximum stable set of G[x], exact, via branch and bound.

    Refuses (never approximates) when |x| exceeds the alpha cap.
    """
    xs = check_vertex_set(g, x) if x is not None else frozenset(range(g.n))
    limit = cap("alpha", cap_override)
    if len(xs) > limit:
        raise CapExceededError("alpha_exact", len(xs), limit)
    mask = set_to_mask(xs)
    return mask_to_set(_max_stable_mask(g._masks, mask))


def alpha_exact(g: Graph, x: Iterable[int] | None = None,
                cap_override: int | None = None) -> int:
    """Exact stability number of G[x]."""
    return len(max_stable_set(g, x, cap_override))


def is_stable_set(g: Graph, vs: Iterable[int]) -> bool:
    vs = list(vs)
    return all(not g.has_edge(a, b) for i, a in enumerate(vs) for b in vs[i + 1:])


def is_anticomplete(g: Graph, a: Iterable[int], b: Iterable[int]) -> bool:
    sa, sb = set(a), set(b)
    if sa & sb:
        return False
    return all(not g.has_edge(u, v) for u in sa for v in sb)


# -- text formats ---------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _g6_encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> (6 * k)) & 63) + 63 for k in range(5, -1, -1)])
    raise FormatError(f"graph too large for graph6: n={n}")


def _g6_decode_n(data: bytes) -> tuple[int, bytes]:
    if not data:
        raise FormatError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, data[1:]
    if len(data) >= 2 and data[1] != 126:
        if len(data) < 4:
            raise FormatError("truncated graph6 vertex count")
        n = 0
        for byte in data[1:4]:
            n = (n << 6) | (byte - 63)
        return n, data[4:]
    if len(data) < 8:
        raise FormatError("truncated graph6 vertex count")
    n = 0
    for byte in data[2:8]:
        n = (n << 6) | (byte - 63)
    return n, data[8:]


def _emit_graph6(g: Graph) -> str:
    n = g.n
    bits = []
    for j in range(1, n):
        col = g.adj_mask(j)
        for i in range(j):
            bits.append(1 if (col >> i) & 1 else 0)
    while len(bits) % 6:
        bits.append(0)
    payload = bytearray(_g6_encode_n(n))
    for k in range(0, len(bits), 6):
        byte = 0
        for b in bits[k:k + 6]:
            byte = (byte << 1) | b
        payload.append(byte + 63)
    return payload.decode("ascii")


def _parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):].strip()
    try:
        data = s.encode("ascii")
    except UnicodeEncodeError as e:
        raise FormatError("graph6 input is not ASCII") from e
    for byte in data:
        if byte != 126 and not (63 <= byte <= 126):
            raise FormatError(f"invalid graph6 byte {byte}")
    n, rest = _g6_decode_n(data)
    need_bits = n * (n - 1) // 2
    need_bytes = (need_bits + 5) // 6
    if len(rest) != need_bytes:
        raise FormatError(
            f"graph6 body has {len(rest)} bytes, expected {need_bytes} for n={n}"
        )
    bits = []
    for byte in rest:
        val = byte - 63
        if not (0 <= val <= 63):
            raise FormatError(f"invalid graph6 data byte {byte}")
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    for extra in bits[need_bits:]:
        if extra:
            raise FormatError("nonzero padding bits in graph6 body")
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


def _emit_edgelist(g: Graph) -> str:
    # the leading comment pins the vertex count so isolated vertices survive
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def _parse_edgelist(text: str, n: int | None = None) -> Graph:
    edges = []
    max_v = -1
    declared = n
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)
        if len(line) == 2 and declared is None:
            comment = line[1].strip()
            if comment.startswith("n="):
                try:
                    declared = int(comment[2:])
                except ValueError:
                    pass
        body = line[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise FormatError(f"line {lineno}: non-integer endpoint in {raw!r}") from e
        if u < 0 or v < 0:
            raise FormatError(f"line {lineno}: negative vertex id in {raw!r}")
        if u == v:
            raise FormatError(f"line {lineno}: self-loop at {u}")
        edges.append((u, v))
        max_v = max(max_v, u, v)
    count = declared if declared is not None else max_v + 1
    if max_v >= count:
        raise FormatError(f"vertex {max_v} out of range for declared n={count}")
    return Graph(count, edges)


def parse_graph(text: str, fmt: str, n: int | None = None) -> Graph:
    """Parse graph6 (bit-exact) or whitespace edge-list text."""
    if fmt == "graph6":
        return _parse_graph6(text)
    if fmt == "edgelist":
        return _parse_edgelist(text, n)
    raise FormatError(f"unknown graph format {fmt!r}")


def emit_graph(g: Graph, fmt: str) -> str:
    if fmt == "graph6":
        return _emit_graph6(g)
    if fmt == "edgelist":
        return _emit_edgelist(g)
    raise FormatError(f"unknown graph format {fmt!r}")


# -- generators -----------------------------------------------------------------


def _gen_path(k: int) -> Graph:
    return Graph(k, [(i, i + 1) for i in range(k - 1)])


def _gen_cycle(k: int) -> Graph:
    if k < 3:
        raise ValueError(f"cycle needs at least 3 vertices, got {k}")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def _gen_complete(k: int) -> Graph:
    return Graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def _gen_complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def _gen_s_ttt(t: int) -> Graph:
    # center 0; leg j occupies ids 1 + j*t .. (j+1)*t, chained outward
    edges = []
    for j in range(3):
        base = 1 + j * t
        edges.append((0, base))
        edges.extend((base + i, base + i + 1) for i in range(t - 1))
    return Graph(3 * t + 1, edges)


def _gen_k_gamma_2(gamma: int) -> Graph:
    # complete graph on gamma vertices, every edge subdivided twice
    base = _gen_complete(gamma)
    return subdivide(base, {e: 2 for e in base.edges()})


def _gen_wall(t: int) -> Graph:
    """Elementary t-by-t wall.

    Coordinate rule: start from the grid fragment with rows 0..t and columns
    0..2t+1, keep all horizontal edges, keep the vertical edge between
    (r, c) and (r+1, c) exactly when r + c is even, then prune degree-one
    vertices until none remain. Ids are dense in (row, column) order.
    """
    rows, cols = t + 1, 2 * t + 2
    verts = {(r, c) for r in range(rows) for c in range(cols)}
    edges = set()
    for r in range(rows):
        for c in range(cols - 1):
            edges.add(((r, c), (r, c + 1)))
    for r in range(rows - 1):
        for c in range(cols):
            if (r + c) % 2 == 0:
                edges.add(((r, c), (r + 1, c)))
    while True:
        deg = {v: 0 for v in verts}
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        drop = {v for v, d in deg.items() if d <= 1}
        if not drop:
            break
        verts -= drop
        edges = {(a, b) for a, b in edges if a not in drop and b not in drop}
    order = sorted(verts)
    ids = {v: i for i, v in enumerate(order)}
    return Graph(len(order), [(ids[a], ids[b]) for a, b in edges])


def _gen_gnp(n: int, p: float, seed: int) -> Graph:
    if not (0 <= p <= 1):
        raise ValueError(f"edge probability {p} outside [0,1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def generate(kind: str, seed: int | None = None, **params) -> Graph:
    """Named graph families; gnp is deterministic per seed."""
    checked = {k: v for k, v in params.items()}
    for key in ("k", "t", "a", "b", "gamma", "n"):
        if key in checked and checked[key] is not None and checked[key] <= 0:
            raise ValueError(f"parameter {key}={checked[key]} must be positive")
    if kind == "path":
        return _gen_path(params["k"])
    if kind == "cycle":
        return _gen_cycle(params["k"])
    if kind == "complete":
        return _gen_complete(params["k"])
    if kind == "complete_bipartite":
        return _gen_complete_bipartite(params["a"], params["b"])
    if kind == "s_ttt":
        return _gen_s_ttt(params["t"])
    if kind == "k_gamma_2":
        return _gen_k_gamma_2(params["gamma"])
    if kind == "wall":
        return _gen_wall(params["t"])
    if kind == "gnp":
        return _gen_gnp(params["n"], params["p"], seed if seed is not None else 0)
    raise ValueError(f"unknown graph kind {kind!r}")


def line_graph(g: Graph) -> tuple[Graph, dict[Edge, int]]:
    """L(G) plus the edge-to-vertex mapping.

    Line-graph ids follow the lexicographic order of g's edges.
    """
    es = g.edges()
    ids = {e: i for i, e in enumerate(es)}
    out = []
    for i, (u, v) in enumerate(es):
        for j in range(i + 1, len(es)):
            x, y = es[j]
            if u in (x, y) or v in (x, y):
                out.append((i, j))
    return Graph(len(es), out), ids


def subdivide(g: Graph, counts: Mapping[Edge, int]) -> Graph:
    """Replace each edge by a path with counts[e] new internal vertices.

    Original vertex ids are preserved; new ids are appended per sorted edge.
    """
    known = set(g.edges())
    norm_counts = {}
    for e, c in counts.items():
        ne = norm_edge(*e)
        if ne not in known:
            raise ValueError(f"unknown edge key {e}")
        if c < 0:
            raise ValueError(f"negative subdivision count for {e}")
        norm_counts[ne] = c
    edges = []
    nxt = g.n
    for e in g.edges():
        c = norm_counts.get(e, 0)
        u, v = e
        if c == 0:
            edges.append((u, v))
            continue
        chain = [u] + list(range(nxt, nxt + c)) + [v]
        nxt += c
        edges.extend(zip(chain, chain[1:]))
    return Graph(nxt, edges)
