"""Multigraph core: representation, tours, cuts, contraction and spanning trees.

Vertices and edges carry stable integer ids.  Every iteration order in this
module is by ascending id, so results are deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class GraphError(ValueError):
    """Raised for structurally invalid input (self-loops, disconnected, ...)."""


class Graph:
    """Undirected multigraph with stable vertex and edge ids.

    Parallel edges are allowed, self-loops are not.  Instances are treated as
    immutable; every "modifying" operation returns a new graph.
    """

    __slots__ = ("_ends", "_adj")

    def __init__(self, edges: Mapping[int, tuple[int, int]], vertices: Iterable[int] = ()):
        ends: dict[int, tuple[int, int]] = {}
        adj: dict[int, list[int]] = {v: [] for v in vertices}
        for e in sorted(edges):
            u, v = edges[e]
            if u == v:
                raise GraphError(f"self-loop on vertex {u} (edge {e})")
            if u > v:
                u, v = v, u
            ends[e] = (u, v)
            adj.setdefault(u, []).append(e)
            adj.setdefault(v, []).append(e)
        self._ends = ends
        self._adj = {v: tuple(adj[v]) for v in sorted(adj)}

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], n: int | None = None) -> "Graph":
        pairs = list(pairs)
        if n is None:
            n = 1 + max((max(p) for p in pairs), default=-1)
        return cls(dict(enumerate(pairs)), range(n))

    # -- basic queries -------------------------------------------------
    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self._adj)

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(self._ends)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return len(self._ends)

    def ends(self, e: int) -> tuple[int, int]:
        return self._ends[e]

    def other(self, e: int, v: int) -> int:
        a, b = self._ends[e]
        if v == a:
            return b
        if v == b:
            return a
        raise GraphError(f"vertex {v} is not an endpoint of edge {e}")

    def incident(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int) -> list[int]:
        """Neighbours with multiplicity, in incident-edge order."""
        return [self.other(e, v) for e in self._adj[v]]

    def edges_between(self, u: int, v: int) -> list[int]:
        return [e for e in self._adj[u] if self.other(e, u) == v]

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def items(self):
        return self._ends.items()

    def pairs(self) -> list[tuple[int, int]]:
        return [self._ends[e] for e in self._ends]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._ends == other._ends and tuple(self._adj) == tuple(other._adj)

    def __hash__(self):
        return hash((tuple(self._ends.items()), tuple(self._adj)))

    # -- derived graphs ------------------------------------------------
    def subgraph(self, vertices: Iterable[int]) -> "Graph":
        keep = set(vertices)
        edges = {e: uv for e, uv in self._ends.items() if uv[0] in keep and uv[1] in keep}
        return Graph(edges, sorted(keep))

    def without_edges(self, removed: Iterable[int]) -> "Graph":
        removed = set(removed)
        return Graph({e: uv for e, uv in self._ends.items() if e not in removed}, self.vertices)

    def edge_subgraph(self, kept: Iterable[int]) -> "Graph":
        """Graph on the endpoints of ``kept`` with exactly those edges."""
        kept = sorted(set(kept))
        verts = sorted({v for e in kept for v in self._ends[e]})
        return Graph({e: self._ends[e] for e in kept}, verts)

    def relabeled(self) -> tuple["Graph", dict[int, int], dict[int, int]]:
        """Dense relabelling: returns (graph, vertex map old->new, edge map old->new)."""
        vmap = {v: i for i, v in enumerate(self._adj)}
        emap = {e: i for i, e in enumerate(self._ends)}
        edges = {emap[e]: (vmap[u], vmap[v]) for e, (u, v) in self._ends.items()}
        return Graph(edges, range(len(vmap))), vmap, emap

    def canonical(self) -> tuple["Graph", dict[int, int]]:
        """Dense graph whose edge ids follow the sorted (min, max) endpoint order.

        Returns the graph and the edge map old -> new.  Writing the canonical
        graph with :func:`format_edge_list` and reading it back preserves ids.
        """
        dense, vmap, emap = self.relabeled()
        order = sorted(dense.edge_ids, key=lambda e: (dense.ends(e), e))
        renum = {e: i for i, e in enumerate(order)}
        g = Graph({renum[e]: dense.ends(e) for e in order}, dense.vertices)
        return g, {old: renum[emap[old]] for old in emap}

    def fresh_vertex(self) -> int:
        return 1 + max(self._adj, default=-1)

    def fresh_edge(self) -> int:
        return 1 + max(self._ends, default=-1)


# ---------------------------------------------------------------------------
# union-find


class DisjointSet:
    def __init__(self, items: Iterable = ()):
        self.parent = {x: x for x in items}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return [sorted(g) for _, g in sorted(out.items())]


def components(graph: Graph, edges: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components (sorted vertex lists) using ``edges`` (default all)."""
    ds = DisjointSet(graph.vertices)
    for e in graph.edge_ids if edges is None else edges:
        ds.union(*graph.ends(e))
    return ds.groups()


def is_connected(graph: Graph) -> bool:
    return graph.n <= 1 or len(components(graph)) == 1


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    degree_violations: dict[int, int] = field(default_factory=dict)
    self_loops: tuple[int, ...] = ()


def validate(graph: Graph, mode: str = "cubic") -> ValidationReport:
    """Check the degree condition for ``mode`` in {"cubic", "subcubic"}."""
    if mode == "cubic":
        allowed = {3}
    elif mode == "subcubic":
        allowed = {2, 3}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    bad = {v: graph.degree(v) for v in graph.vertices if graph.degree(v) not in allowed}
    loops = tuple(e for e, (u, v) in graph.items() if u == v)
    return ValidationReport(ok=not bad and not loops, degree_violations=bad, self_loops=loops)


# ---------------------------------------------------------------------------
# tours


@dataclass(frozen=True, eq=True)
class Tour:
    """Edge multiset of a closed spanning walk; multiplicities are 1 or 2."""

    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "Tour":
        return cls(tuple(sorted((e, k) for e, k in counts.items() if k)))

    @classmethod
    def from_edges(cls, edges: Iterable[int]) -> "Tour":
        return cls.from_counts(Counter(edges))

    @property
    def length(self) -> int:
        return sum(k for _, k in self.counts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def edges(self) -> list[int]:
        """Edge ids with repetition."""
        return [e for e, k in self.counts for _ in range(k)]

    def __len__(self) -> int:
        return self.length


def tour_problems(graph: Graph, counts: Mapping[int, int]) -> list[str]:
    """Reasons ``counts`` is not a tour of ``graph`` (empty list when valid)."""
    problems = []
    deg = Counter()
    ds = DisjointSet(graph.vertices)
    for e, k in counts.items():
        if k == 0:
            continue
        if e not in graph._ends:
            problems.append(f"edge {e} not in graph")
            continue
        if not 0 < k <= 2:
            problems.append(f"edge {e} has multiplicity {k}")
        u, v = graph.ends(e)
        deg[u] += k
        deg[v] += k
        ds.union(u, v)
    if graph.n == 1 and not counts:
        return problems
    for v in graph.vertices:
        if deg[v] == 0:
            problems.append(f"vertex {v} not visited")
        elif deg[v] % 2:
            problems.append(f"vertex {v} has odd degree {deg[v]}")
    if len({ds.find(v) for v in graph.vertices}) > 1:
        problems.append("support is disconnected")
    return problems


def is_tour(graph: Graph, tour: Tour | Mapping[int, int]) -> bool:
    counts = tour.as_dict() if isinstance(tour, Tour) else tour
    return not tour_problems(graph, counts)


# ---------------------------------------------------------------------------
# bridges and blocks


@dataclass(frozen=True)
class BlockStructure:
    bridges: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]  # 2-edge-connected components
    articulation: tuple[int, ...]


def _lowpoint_dfs(graph: Graph, root: int, skip: frozenset = frozenset()):
    """Iterative DFS giving (bridges, articulation points) reachable from ``root``."""
    disc: dict[int, int] = {root: 0}
    low: dict[int, int] = {root: 0}
    bridges = []
    artic = set()
    children_of_root = 0
    # stack entries: (vertex, edge used to enter, iterator over incident edges)
    stack = [(root, -1, iter(graph.incident(root)))]
    counter = 1
    while stack:
        v, via, it = stack[-1]
        advanced = False
        for e in it:
            if e == via or e in skip:
                continue
            w = graph.other(e, v)
            if w not in disc:
                disc[w] = low[w] = counter
                counter += 1
                stack.append((w, e, iter(graph.incident(w))))
                advanced = True
                break
            low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if stack:
            p = stack[-1][0]
            low[p] = min(low[p], low[v])
            if low[v] > disc[p]:
                bridges.append(via)
            if p == root:
                children_of_root += 1
            elif low[v] >= disc[p]:
                artic.add(p)
    if children_of_root > 1:
        artic.add(root)
    return bridges, artic, disc


def bridges(graph: Graph, skip: Iterable[int] = ()) -> list[int]:
    """All bridges of ``graph`` (minus edges in ``skip``), any connectivity."""
    skip = frozenset(skip)
    seen: set[int] = set()
    out: list[int] = []
    for v in graph.vertices:
        if v in seen:
            continue
        b, _, disc = _lowpoint_dfs(graph, v, skip)
        out.extend(b)
        seen.update(disc)
    return sorted(out)


def bridges_and_blocks(graph: Graph) -> BlockStructure:
    if graph.n == 0:
        return BlockStructure((), (), ())
    if not is_connected(graph):
        raise GraphError("bridges_and_blocks requires a connected graph")
    br, artic, _ = _lowpoint_dfs(graph, graph.vertices[0])
    br = sorted(br)
    comps = components(graph, [e for e in graph.edge_ids if e not in set(br)])
    return BlockStructure(tuple(br), tuple(tuple(c) for c in comps), tuple(sorted(artic)))


def is_bridgeless(graph: Graph) -> bool:
    return is_connected(graph) and not bridges(graph)


# ---------------------------------------------------------------------------
# 3-edge cuts


@dataclass(frozen=True)
class EdgeCut:
    edges: frozenset[int]
    sides: tuple[frozenset[int], frozenset[int]]

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))


def cut_sides(graph: Graph, removed: Iterable[int]) -> tuple[frozenset[int], frozenset[int]] | None:
    """Sides of the bond ``removed``: None unless removal leaves exactly two
    components and every removed edge crosses between them."""
    removed = set(removed)
    comps = components(graph, [e for e in graph.edge_ids if e not in removed])
    if len(comps) != 2:
        return None
    a = frozenset(comps[0])
    for e in removed:
        u, v = graph.ends(e)
        if (u in a) == (v in a):
            return None
    return a, frozenset(comps[1])


def enumerate_three_cuts(graph: Graph) -> list[EdgeCut]:
    """Every 3-edge bond of a connected multigraph, sorted by edge ids.

    For each pair of edges whose removal keeps the graph connected, the
    bridges of the remainder complete the pair to a candidate triple.
    """
    if not is_connected(graph):
        raise GraphError("enumerate_three_cuts requires a connected graph")
    eids = graph.edge_ids
    base_bridges = set(bridges(graph))
    found: dict[tuple[int, ...], EdgeCut] = {}
    for i, e1 in enumerate(eids):
        if e1 in base_bridges:
            continue
        for e2 in eids[i + 1:]:
            if e2 in base_bridges:
                continue
            for e3 in bridges(graph, skip=(e1, e2)):
                if e3 <= e2:
                    continue
                key = (e1, e2, e3)
                sides = cut_sides(graph, key)
                if sides is not None:
                    found[key] = EdgeCut(frozenset(key), sides)
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# contraction and spanning trees


def contract_parts(graph: Graph, partition: Iterable[Iterable[int]]) -> tuple[Graph, dict[int, int]]:
    """Quotient multigraph with one vertex per part.

    Part ``i`` becomes vertex ``i``; edges between distinct parts keep their
    ids (the returned mapping is quotient edge -> original edge), intra-part
    edges are dropped.
    """
    parts = [sorted(p) for p in partition]
    where: dict[int, int] = {}
    for i, p in enumerate(parts):
        for v in p:
            if v in where:
                raise GraphError(f"vertex {v} in two parts")
            where[v] = i
    missing = set(graph.vertices) - set(where)
    if missing:
        raise GraphError(f"partition misses vertices {sorted(missing)}")
    edges = {}
    for e, (u, v) in graph.items():
        if where[u] != where[v]:
            edges[e] = (where[u], where[v])
    return Graph(edges, range(len(parts))), {e: e for e in edges}


def spanning_tree(graph: Graph) -> set[int]:
    """Kruskal over ascending edge ids; raises on disconnected input."""
    ds = DisjointSet(graph.vertices)
    tree = set()
    for e in graph.edge_ids:
        if ds.union(*graph.ends(e)):
            tree.add(e)
    if len(tree) != max(graph.n - 1, 0):
        raise GraphError("spanning_tree requires a connected graph")
    return tree


# ---------------------------------------------------------------------------
# simple cycles of bounded length


@dataclass(frozen=True)
class Cycle:
    """Simple cycle: vertices in cyclic order and the edge joining each to the next."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)


def cycles_of_length(graph: Graph, length: int) -> list[Cycle]:
    """All simple cycles with exactly ``length`` edges (length >= 3).

    Each cycle is reported once, starting at its smallest vertex and oriented
    so that the second vertex is smaller than the last; parallel edges give
    distinct cycles.  Output is sorted by (vertices, edges).
    """
    if length < 3:
        raise ValueError("cycle length must be at least 3")
    out = []
    for start in graph.vertices:
        path = [start]
        used = [-1]

        def extend(v: int) -> None:
            for e in graph.incident(v):
                w = graph.other(e, v)
                if len(path) == length:
                    if w == start and e != used[-1] and path[1] < path[-1]:
                        out.append(Cycle(tuple(path), tuple(used[1:]) + (e,)))
                    continue
                if w <= start or w in path:
                    continue
                path.append(w)
                used.append(e)
                extend(w)
                path.pop()
                used.pop()

        extend(start)
    out.sort(key=lambda c: (c.vertices, c.edges))
    return out


def chords(graph: Graph, cycle: Cycle) -> list[int]:
    """Edges joining two non-consecutive vertices of ``cycle``."""
    pos = {v: i for i, v in enumerate(cycle.vertices)}
    k = len(cycle.vertices)
    out = set()
    for v in cycle.vertices:
        for e in graph.incident(v):
            w = graph.other(e, v)
            if w in pos and (pos[v] - pos[w]) % k not in (1, k - 1):
                out.add(e)
    return sorted(out)


def is_induced_cycle(graph: Graph, cycle: Cycle) -> bool:
    inside = set(cycle.vertices)
    return sum(1 for e, (u, v) in graph.items() if u in inside and v in inside) == len(cycle)


def cycle_decomposition(graph: Graph, edges: Iterable[int]) -> list[Cycle]:
    """Split a 2-regular edge set into its cycles (each starting at its minimum vertex)."""
    edges = sorted(set(edges))
    at: dict[int, list[int]] = {}
    for e in edges:
        for v in graph.ends(e):
            at.setdefault(v, []).append(e)
    for v, es in at.items():
        if len(es) != 2:
            raise GraphError(f"vertex {v} has degree {len(es)} in a supposed cycle set")
    seen: set[int] = set()
    out = []
    for start in sorted(at):
        if start in seen:
            continue
        verts = [start]
        used = []
        prev_e = None
        v = start
        while True:
            a, b = at[v]
            e = a if a != prev_e else b
            if prev_e is None:
                # orient towards the smaller neighbour for determinism
                wa, wb = graph.other(a, v), graph.other(b, v)
                e = a if (wa, a) <= (wb, b) else b
            used.append(e)
            w = graph.other(e, v)
            if w == start:
                break
            verts.append(w)
            prev_e, v = e, w
        seen.update(verts)
        out.append(Cycle(tuple(verts), tuple(used)))
    return out


# ---------------------------------------------------------------------------
# edge-list text format


def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; edge ids follow line order."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphError("empty edge list")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        pairs = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (IndexError, ValueError) as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if len(pairs) != m:
        raise GraphError(f"header announces {m} edges, found {len(pairs)}")
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
    return Graph.from_pairs(pairs, n)


def format_edge_list(graph: Graph) -> str:
    """Dense graphs only; edges are written sorted by (min endpoint, max endpoint)."""
    if graph.vertices != tuple(range(graph.n)):
        graph = graph.relabeled()[0]
    pairs = sorted(graph.pairs())
    lines = [f"{graph.n} {graph.m}"] + [f"{u} {v}" for u, v in pairs]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_edge_list(graph: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(graph))


def format_tour(graph: Graph, tour: Tour) -> str:
    """A tour in edge-list form: ``n k`` and one ``u v`` line per traversal."""
    pairs = sorted(tuple(sorted(graph.ends(e))) for e in tour.edges())
    return "\n".join([f"{graph.n} {len(pairs)}"] + [f"{u} {v}" for u, v in pairs]) + "\n"


def parse_tour(graph: Graph, text: str) -> Tour:
    """Inverse of :func:`format_tour`; parallel edges are filled in ascending id order."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphError("empty tour")
    try:
        k = int(rows[0][1])
        pairs = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (IndexError, ValueError) as exc:
        raise GraphError(f"malformed tour: {exc}") from None
    if len(pairs) != k:
        raise GraphError(f"header announces {k} traversals, found {len(pairs)}")
    counts: Counter = Counter()
    for u, v in pairs:
        ids = graph.edges_between(u, v) if graph.has_vertex(u) and graph.has_vertex(v) else []
        if not ids:
            raise GraphError(f"({u}, {v}) is not an edge")
        # put the traversal on the first parallel copy with room left
        e = next((e for e in sorted(ids) if counts[e] < 2), sorted(ids)[0])
        counts[e] += 1
    return Tour.from_counts(counts)


def pairs_multiset(graph: Graph, edges: Iterable[int]) -> list[tuple[int, int]]:
    return sorted(graph.ends(e) for e in edges)


__all__ = [
    "BlockStructure", "Cycle", "DisjointSet", "EdgeCut", "Graph", "GraphError", "Tour",
    "ValidationReport", "bridges", "bridges_and_blocks", "chords", "components",
    "contract_parts", "cut_sides", "cycle_decomposition", "cycles_of_length",
    "enumerate_three_cuts", "format_edge_list", "format_tour", "parse_tour", "is_bridgeless", "is_connected",
    "is_induced_cycle", "is_tour", "parse_edge_list", "read_edge_list", "spanning_tree",
    "tour_problems", "validate", "write_edge_list",
]

