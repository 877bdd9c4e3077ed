"""Ground truth for the test-suite: exact TSP, definition-level validators and
instance generators.

Validators here deliberately avoid the helpers in :mod:`cubictsp.graph` and go
through networkx instead, so they check the builders along an independent path.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import networkx as nx
import numpy as np

from .graph import Graph, GraphError

HELD_KARP_MAX_N = 18


# ---------------------------------------------------------------------------
# metric closure and exact TSP


def metric_closure(graph: Graph) -> np.ndarray:
    """All-pairs unit-weight shortest-path distances, indexed by vertex rank."""
    idx = {v: i for i, v in enumerate(graph.vertices)}
    n = graph.n
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in graph.vertices:
        row = dist[idx[s]]
        row[idx[s]] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w in graph.neighbors(v):
                    if row[idx[w]] < 0:
                        row[idx[w]] = d
                        nxt.append(w)
            frontier = nxt
    if (dist < 0).any():
        raise GraphError("metric closure of a disconnected graph")
    return dist


def held_karp_opt(graph: Graph) -> int:
    """Length of a shortest closed walk visiting every vertex.

    Bitmask dynamic programme over the metric closure, vectorised per
    subset-size layer.  Limited to ``n <= 18``.
    """
    n = graph.n
    if n > HELD_KARP_MAX_N:
        raise ValueError(f"held_karp_opt supports n <= {HELD_KARP_MAX_N}, got {n}")
    if n <= 1:
        return 0
    dist = metric_closure(graph)
    if n == 2:
        return int(2 * dist[0, 1])
    k = n - 1
    inf = np.int64(1 << 40)
    dp = np.full((1 << k, k), inf, dtype=np.int64)
    for j in range(k):
        dp[1 << j, j] = dist[0, j + 1]
    masks = np.arange(1 << k, dtype=np.int64)
    popcount = np.zeros(1 << k, dtype=np.int64)
    for j in range(k):
        popcount += (masks >> j) & 1
    inner = dist[1:, 1:]
    for size in range(2, k + 1):
        layer = masks[popcount == size]
        for j in range(k):
            sel = layer[((layer >> j) & 1) == 1]
            prev = sel ^ (1 << j)
            dp[sel, j] = (dp[prev] + inner[:, j][None, :]).min(axis=1)
    full = (1 << k) - 1
    return int((dp[full] + dist[1:, 0]).min())


@lru_cache(maxsize=None)
def _permutations(k: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(1, k + 1))), dtype=np.int64).reshape(-1, k)


def permutation_opt(graph: Graph) -> int:
    """Exhaustive search over vertex orders (n <= 9): the Held-Karp cross-check."""
    n = graph.n
    if n > 9:
        raise ValueError("permutation_opt is limited to n <= 9")
    if n <= 1:
        return 0
    dist = metric_closure(graph)
    perms = _permutations(n - 1)
    cost = dist[0, perms[:, 0]] + dist[perms[:, -1], 0]
    for a in range(n - 2):
        cost = cost + dist[perms[:, a], perms[:, a + 1]]
    return int(cost.min())


# ---------------------------------------------------------------------------
# definition-level validators


def _multigraph(graph: Graph) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(graph.vertices)
    for e, (u, v) in graph.items():
        g.add_edge(u, v, key=e)
    return g


def verify_tour(graph: Graph, counts) -> bool:
    """True iff ``counts`` (Tour or edge -> multiplicity) is a TSP tour of ``graph``."""
    counts = counts.as_dict() if hasattr(counts, "as_dict") else dict(counts)
    support = nx.MultiGraph()
    support.add_nodes_from(graph.vertices)
    edge_ids = set(graph.edge_ids)
    for e, k in counts.items():
        if k == 0:
            continue
        if e not in edge_ids or k not in (1, 2):
            return False
        u, v = graph.ends(e)
        for _ in range(k):
            support.add_edge(u, v)
    if graph.n == 1:
        return support.number_of_edges() == 0
    if any(d == 0 or d % 2 for _, d in support.degree()):
        return False
    return nx.is_connected(support)


def verify_cover(graph: Graph, cover: Iterable[tuple[Iterable[int], Mapping[int, int]]]) -> bool:
    """True iff the (vertex set, edge multiset) components form an Eulerian subgraph cover."""
    seen: set[int] = set()
    for verts, counts in cover:
        verts = set(verts)
        if verts & seen or not verts:
            return False
        seen |= verts
        comp = nx.MultiGraph()
        comp.add_nodes_from(verts)
        for e, k in dict(counts).items():
            if k == 0:
                continue
            if e not in set(graph.edge_ids) or k not in (1, 2):
                return False
            u, v = graph.ends(e)
            if u not in verts or v not in verts:
                return False
            for _ in range(k):
                comp.add_edge(u, v)
        if any(d % 2 for _, d in comp.degree()):
            return False
        if len(verts) > 1 and (any(d == 0 for _, d in comp.degree()) or not nx.is_connected(comp)):
            return False
    return seen == set(graph.vertices)


def brute_force_three_cuts(graph: Graph) -> list[tuple[int, int, int]]:
    """All 3-edge bonds by testing every edge triple against the definition:
    removal leaves exactly two components and each removed edge joins them.

    Components of all T triples are found at once by min-label propagation on
    a (T, n) label array.
    """
    verts = list(graph.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    eids = list(graph.edge_ids)
    n, m = len(verts), len(eids)
    if m < 3:
        return []
    us = np.array([pos[graph.ends(e)[0]] for e in eids])
    vs = np.array([pos[graph.ends(e)[1]] for e in eids])
    triples = np.array(list(itertools.combinations(range(m), 3)))
    t = len(triples)
    rows = np.arange(t)
    keep = np.ones((t, m), dtype=bool)
    for k in range(3):
        keep[rows, triples[:, k]] = False
    labels = np.tile(np.arange(n), (t, 1))
    while True:
        before = labels.copy()
        for j in range(m):
            a, b = labels[:, us[j]], labels[:, vs[j]]
            low = np.where(keep[:, j], np.minimum(a, b), a)
            labels[:, us[j]] = low
            labels[:, vs[j]] = np.where(keep[:, j], low, b)
        labels = np.take_along_axis(labels, labels, axis=1)
        if (labels == before).all():
            break
    roots = (labels == np.arange(n)).sum(axis=1)
    ok = roots == 2
    for k in range(3):
        j = triples[:, k]
        ok &= labels[rows, us[j]] != labels[rows, vs[j]]
    return [tuple(eids[j] for j in tr) for tr in triples[ok]]


def brute_force_bridges(graph: Graph) -> list[int]:
    g = _multigraph(graph)
    base = nx.number_connected_components(g)
    out = []
    for e, (u, v) in graph.items():
        g.remove_edge(u, v, key=e)
        if nx.number_connected_components(g) > base:
            out.append(e)
        g.add_edge(u, v, key=e)
    return out


def chorded_six_cycles(graph: Graph) -> list[tuple[int, ...]]:
    """Vertex sets of 6-cycles having at least one chord (networkx enumeration)."""
    simple = nx.Graph(_multigraph(graph))
    found = set()
    for cyc in nx.simple_cycles(simple, length_bound=6):
        if len(cyc) != 6:
            continue
        ring = {frozenset((cyc[i], cyc[(i + 1) % 6])) for i in range(6)}
        inside = simple.subgraph(cyc)
        if any(frozenset(e) not in ring for e in inside.edges()):
            found.add(tuple(sorted(cyc)))
    return sorted(found)


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class Instance:
    name: str
    graph: Graph
    rotation: dict[int, tuple[int, ...]] | None = None


def _canonical_instance(name: str, pairs, n: int, positions=None) -> Instance:
    pairs = sorted((min(u, v), max(u, v)) for u, v in pairs)
    graph = Graph.from_pairs(pairs, n)
    rotation = None if positions is None else rotation_from_convex_positions(graph, positions)
    return Instance(name, graph, rotation)


def rotation_from_convex_positions(graph: Graph, positions) -> dict[int, tuple[int, ...]]:
    """Rotation system of a convex polyhedron's skeleton from centred 3D coordinates.

    Neighbours are sorted by angle in the tangent plane, seen from outside.
    """
    pts = np.asarray(positions, dtype=float)
    pts = pts - pts.mean(axis=0)
    rot = {}
    for v in graph.vertices:
        normal = pts[v] / np.linalg.norm(pts[v])
        inc = graph.incident(v)
        dirs = []
        for e in inc:
            d = pts[graph.other(e, v)] - pts[v]
            dirs.append(d - d.dot(normal) * normal)
        a = dirs[0] / np.linalg.norm(dirs[0])
        b = np.cross(normal, a)
        angles = [math.atan2(d.dot(b), d.dot(a)) % (2 * math.pi) for d in dirs]
        rot[v] = tuple(e for _, e in sorted(zip(angles, inc)))
    return rot


def even_prism(k: int) -> Instance:
    """Prism over the cycle C_{2k}: a Barnette graph on 4k vertices."""
    if k < 2:
        raise ValueError("even_prism needs k >= 2")
    r = 2 * k
    pairs = []
    pos = []
    for i in range(r):
        pairs.append((i, (i + 1) % r))
        pairs.append((r + i, r + (i + 1) % r))
        pairs.append((i, r + i))
    for z in (1.0, -1.0):
        for i in range(r):
            t = 2 * math.pi * i / r
            pos.append((math.cos(t), math.sin(t), z))
    return _canonical_instance(f"even_prism_{k}", pairs, 2 * r, pos)


def cube() -> Instance:
    inst = even_prism(2)
    return Instance("cube", inst.graph, inst.rotation)


def _polyhedron_from_points(name: str, pts: list[tuple[float, ...]], edge_len2: float) -> Instance:
    pairs = []
    for i, j in itertools.combinations(range(len(pts)), 2):
        d2 = sum((a - b) ** 2 for a, b in zip(pts[i], pts[j]))
        if abs(d2 - edge_len2) < 1e-9:
            pairs.append((i, j))
    return _canonical_instance(name, pairs, len(pts), pts)


def _signed_permutations(base: tuple[float, float, float]) -> list[tuple[float, ...]]:
    out = set()
    for perm in itertools.permutations(base):
        for signs in itertools.product((1, -1), repeat=3):
            out.add(tuple(s * x for s, x in zip(signs, perm)))
    return sorted(out)


def truncated_octahedron() -> Instance:
    """24 vertices; 6 square and 8 hexagonal faces."""
    return _polyhedron_from_points("truncated_octahedron", _signed_permutations((0.0, 1.0, 2.0)), 2.0)


def truncated_cuboctahedron() -> Instance:
    """48 vertices; 12 square, 8 hexagonal and 6 octagonal faces."""
    s = math.sqrt(2)
    return _polyhedron_from_points(
        "truncated_cuboctahedron", _signed_permutations((1.0, 1 + s, 1 + 2 * s)), 4.0)


def k4() -> Instance:
    tetra = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    return _canonical_instance("k4", itertools.combinations(range(4), 2), 4, tetra)


def k33() -> Instance:
    return _canonical_instance("k33", [(a, b) for a in range(3) for b in range(3, 6)], 6)


def triangular_prism() -> Instance:
    pairs = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    return _canonical_instance("triangular_prism", pairs, 6)


def petersen() -> Instance:
    pairs = [(i, (i + 1) % 5) for i in range(5)]
    pairs += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    pairs += [(i, 5 + i) for i in range(5)]
    return _canonical_instance("petersen", pairs, 10)


def double_hexagon() -> Instance:
    """Two hexagons with chords v2v6, v3v5 joined at v1 and v4 (n = 12)."""
    pairs = []
    for off in (0, 6):
        ring = [off + i for i in range(6)]  # ring[i] is v_{i+1}
        pairs += [(ring[i], ring[(i + 1) % 6]) for i in range(6)]
        pairs += [(ring[1], ring[5]), (ring[2], ring[4])]
    pairs += [(0, 6), (3, 9)]
    return _canonical_instance("double_hexagon", pairs, 12)


def subdivided_k4_pair() -> Instance:
    """Two copies of K4 with one edge subdivided, joined by a bridge between
    the subdivision vertices (n = 10, one bridge)."""
    pairs = []
    for off in (0, 5):
        a, b, c, d, s = (off + i for i in range(5))
        pairs += [(a, s), (s, b), (a, c), (a, d), (b, c), (b, d), (c, d)]
    pairs.append((4, 9))
    return _canonical_instance("subdivided_k4_pair", pairs, 10)


def spliced_hexagon(rule: str, seed: int = 0) -> Instance:
    """A random bridgeless cubic graph with a chorded hexagon spliced in so that
    reduction ``rule`` (R1..R4) applies to it.

    R1 and R2 replace one edge a-b by a path through the structure, R3
    replaces a vertex, R4 replaces two disjoint edges.
    """
    if rule not in ("R1", "R2", "R3", "R4"):
        raise ValueError(f"unknown rule {rule!r}")
    rng = random.Random(seed)
    while True:
        base = random_cubic(rng.choice([8, 10, 12]), rng.randrange(10**6)).graph
        if nx.has_bridges(nx.Graph(base.pairs())) or not nx.is_connected(nx.Graph(base.pairs())):
            continue
        break
    pairs = list(base.pairs())
    h = [base.n + i for i in range(6)]
    pairs += [(h[i], h[(i + 1) % 6]) for i in range(6)]
    if rule == "R1":
        pairs += [(h[0], h[2]), (h[3], h[5])]
        a, b = pairs.pop(rng.randrange(base.m))
        pairs += [(a, h[1]), (h[4], b)]
        return _canonical_instance(f"spliced_R1_{seed}", pairs, base.n + 6)
    chord = rng.choice([(0, 2), (0, 3)])
    pairs.append((h[chord[0]], h[chord[1]]))
    free = [h[i] for i in range(6) if i not in chord]
    rng.shuffle(free)
    if rule == "R2":
        w1, w2 = base.n + 6, base.n + 7
        pairs += [(free[0], w1), (free[1], w1), (free[2], w2), (free[3], w2)]
        a, b = pairs.pop(rng.randrange(base.m))
        pairs += [(a, w1), (w2, b)]
        return _canonical_instance(f"spliced_R2_{seed}", pairs, base.n + 8)
    if rule == "R3":
        w = base.n + 6
        v = rng.randrange(base.n)
        nbrs = [x for e in base.incident(v) for x in base.ends(e) if x != v]
        pairs = [(x, y) for x, y in pairs if v not in (x, y)]
        pairs += [(free[0], w), (free[1], w)]
        pairs += [(t, x) for t, x in zip((w, free[2], free[3]), nbrs)]
        # vertex v is gone: shift the last vertex into its slot
        last = base.n + 6
        pairs = [tuple(v if x == last else x for x in e) for e in pairs]
        return _canonical_instance(f"spliced_R3_{seed}", pairs, base.n + 6)
    base_pairs = list(base.pairs())
    while True:
        i, j = rng.sample(range(base.m), 2)
        (a, b), (c, d) = base_pairs[i], base_pairs[j]
        if len({a, b, c, d}) == 4:
            break
    pairs = [e for k, e in enumerate(pairs) if k not in (i, j)]
    pairs += [(free[0], a), (free[1], b), (free[2], c), (free[3], d)]
    return _canonical_instance(f"spliced_R4_{seed}", pairs, base.n + 6)


def _random_cubic_pairs(n: int, rng: random.Random) -> list[tuple[int, int]]:
    while True:
        stubs = [v for v in range(n) for _ in range(3)]
        rng.shuffle(stubs)
        pairs = [(min(a, b), max(a, b)) for a, b in zip(stubs[::2], stubs[1::2])]
        if any(a == b for a, b in pairs) or len(set(pairs)) != len(pairs):
            continue
        g = nx.Graph(pairs)
        if nx.is_connected(g) and not any(True for _ in nx.bridges(g)):
            return pairs


def random_cubic(n: int, seed: int = 0) -> Instance:
    """Uniform pairing model, rejected until simple and 2-connected."""
    if n < 4 or n % 2:
        raise ValueError(f"random_cubic needs an even n >= 4, got {n}")
    rng = random.Random(seed)
    return _canonical_instance(f"random_cubic_{n}_s{seed}", _random_cubic_pairs(n, rng), n)


def random_cubic_bridged(n: int, b: int, seed: int = 0) -> Instance:
    """Connected cubic graph with exactly ``b`` bridges.

    A random tree on ``b + 1`` nodes decides the bridge layout.  Nodes of tree
    degree 3 become cut vertices with three bridges half of the time; every
    other node is a random 2-connected cubic block with one edge subdivided per
    incident bridge.
    """
    if b < 1:
        raise ValueError("random_cubic_bridged needs b >= 1")
    if n % 2:
        raise ValueError("n must be even")
    rng = random.Random(seed)
    for _ in range(1000):
        nodes = b + 1
        # random labelled tree via a Pruefer-like attachment process
        parent = [-1] + [rng.randrange(i) for i in range(1, nodes)]
        deg = [0] * nodes
        for i in range(1, nodes):
            deg[i] += 1
            deg[parent[i]] += 1
        singleton = [deg[i] == 3 and rng.random() < 0.5 for i in range(nodes)]
        blocks = [i for i in range(nodes) if not singleton[i]]
        budget = n - sum(1 for s in singleton if s) - sum(deg[i] for i in blocks)
        sizes = {i: 4 for i in blocks}
        budget -= 4 * len(blocks)
        if budget < 0 or budget % 2:
            continue
        while budget:
            i = rng.choice(blocks)
            sizes[i] += 2
            budget -= 2
        if any(3 * sizes[i] // 2 < deg[i] for i in blocks):
            continue
        pairs: list[tuple[int, int]] = []
        attach: dict[int, list[int]] = {}
        nxt = 0
        for i in range(nodes):
            if singleton[i]:
                attach[i] = [nxt] * 3
                nxt += 1
                continue
            base = _random_cubic_pairs(sizes[i], rng) if sizes[i] > 4 else list(itertools.combinations(range(4), 2))
            base = [(u + nxt, v + nxt) for u, v in base]
            nxt += sizes[i]
            chosen = rng.sample(range(len(base)), deg[i])
            ports = []
            for j, (u, v) in enumerate(base):
                if j in chosen:
                    pairs += [(u, nxt), (nxt, v)]
                    ports.append(nxt)
                    nxt += 1
                else:
                    pairs.append((u, v))
            attach[i] = ports
        for i in range(1, nodes):
            pairs.append((attach[i].pop(), attach[parent[i]].pop()))
        assert nxt == n
        return _canonical_instance(f"random_cubic_bridged_{n}_b{b}_s{seed}", pairs, n)
    raise ValueError(f"could not build a bridged cubic graph with n={n}, b={b}")


NAMED = {
    "cube": cube,
    "truncated_octahedron": truncated_octahedron,
    "truncated_cuboctahedron": truncated_cuboctahedron,
    "k4": k4,
    "k33": k33,
    "triangular_prism": triangular_prism,
    "petersen": petersen,
    "double_hexagon": double_hexagon,
    "subdivided_k4_pair": subdivided_k4_pair,
}


def generate(kind: str, seed: int = 0, **params) -> Instance:
    """Dispatch on generator ``kind``; parametrised kinds read ``k``, ``n``, ``b``."""
    if kind in NAMED:
        return NAMED[kind]()
    if kind == "even_prism":
        return even_prism(int(params["k"]))
    if kind == "random_cubic":
        return random_cubic(int(params["n"]), seed)
    if kind == "spliced_hexagon":
        return spliced_hexagon(str(params["rule"]), seed)
    if kind == "random_cubic_bridged":
        return random_cubic_bridged(int(params["n"]), int(params["b"]), seed)
    raise ValueError(f"unknown generator kind {kind!r}")


def format_rotation(rotation: Mapping[int, Iterable[int]]) -> str:
    return "".join(" ".join(map(str, rotation[v])) + "\n" for v in sorted(rotation))


def parse_rotation(text: str) -> dict[int, tuple[int, ...]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    return {v: tuple(int(t) for t in ln.split()) for v, ln in enumerate(lines)}
