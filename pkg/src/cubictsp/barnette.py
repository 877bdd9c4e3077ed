"""Tours on Barnette graphs (cubic, bipartite, planar, 3-connected).

Faces come from a rotation system; a proper 3-colouring of the faces gives
three starting cycle covers, each improved by alternating faces of one colour
while that strictly reduces the number of cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cover import Component, EulerianCover, tour_from_cover
from .graph import DisjointSet, Graph, GraphError, Tour, cycle_decomposition

Rotation = Mapping[int, Sequence[int]]


class ColoringError(GraphError):
    """The faces admit no proper 3-colouring of the required kind."""


@dataclass
class FaceSet:
    """Faces as closed walks: parallel lists of vertices and edges."""

    face_vertices: list[tuple[int, ...]]
    face_edges: list[tuple[int, ...]]
    coloring: list[int] | None = None

    def __len__(self) -> int:
        return len(self.face_edges)

    def edge_faces(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for f, edges in enumerate(self.face_edges):
            for e in edges:
                out.setdefault(e, []).append(f)
        return out

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in self.face_edges]
        for fs in self.edge_faces().values():
            if len(fs) == 2 and fs[0] != fs[1]:
                adj[fs[0]].add(fs[1])
                adj[fs[1]].add(fs[0])
        return adj

    def of_color(self, c: int) -> list[int]:
        assert self.coloring is not None
        return [f for f, col in enumerate(self.coloring) if col == c]

    def edge_coloring(self) -> dict[int, int]:
        """Colour of e = the colour missing from its two faces."""
        assert self.coloring is not None
        out = {}
        for e, (f, g) in self.edge_faces().items():
            rest = {1, 2, 3} - {self.coloring[f], self.coloring[g]}
            if len(rest) != 1:
                raise ColoringError(f"edge {e} lies between faces of the same colour")
            out[e] = rest.pop()
        return out


def validate_rotation(graph: Graph, rotation: Rotation) -> None:
    for v in graph.vertices:
        if v not in rotation or sorted(rotation[v]) != sorted(graph.incident(v)):
            raise GraphError(f"rotation at vertex {v} does not list its incident edges")


def faces_from_rotation(graph: Graph, rotation: Rotation) -> FaceSet:
    """Trace faces: arriving at v along e, leave along the edge after e in v's rotation."""
    validate_rotation(graph, rotation)
    pos = {v: {e: i for i, e in enumerate(rotation[v])} for v in graph.vertices}
    unused = {(e, u) for e, (a, b) in graph.items() for u in (a, b)}  # dart = (edge, tail)
    face_vertices, face_edges = [], []
    for e0 in graph.edge_ids:
        for tail in graph.ends(e0):
            if (e0, tail) not in unused:
                continue
            verts, edges = [], []
            e, u = e0, tail
            while (e, u) in unused:
                unused.discard((e, u))
                verts.append(u)
                edges.append(e)
                v = graph.other(e, u)
                rot = rotation[v]
                e = rot[(pos[v][e] + 1) % len(rot)]
                u = v
            face_vertices.append(tuple(verts))
            face_edges.append(tuple(edges))
    expected = 2 + graph.m - graph.n
    if len(face_edges) != expected:
        raise GraphError(f"rotation gives {len(face_edges)} faces, a spherical embedding needs {expected}")
    return FaceSet(face_vertices, face_edges)


def three_face_coloring(faces: FaceSet) -> list[int]:
    """Proper 3-colouring of the dual by backtracking.

    The largest face (lowest index on ties) gets colour 1; afterwards the
    uncoloured face with the most distinct neighbouring colours is coloured
    next, trying colours in increasing order.
    """
    if any(len(f) % 2 for f in faces.face_edges):
        raise ColoringError("odd face: not a Barnette embedding")
    adj = faces.adjacency()
    if any(len(a) % 2 for a in adj):
        raise ColoringError("a face has an odd number of neighbouring faces")
    nf = len(faces)
    color = [0] * nf

    def pick() -> int | None:
        best, key = None, None
        for f in range(nf):
            if color[f]:
                continue
            k = (len({color[g] for g in adj[f] if color[g]}), len(adj[f]), -f)
            if key is None or k > key:
                best, key = f, k
        return best

    def solve() -> bool:
        f = pick()
        if f is None:
            return True
        used = {color[g] for g in adj[f]}
        for c in (1, 2, 3):
            if c not in used:
                color[f] = c
                if solve():
                    return True
        color[f] = 0
        return False

    if nf:
        first = max(range(nf), key=lambda f: (len(faces.face_edges[f]), -f))
        color[first] = 1
        if not solve():
            raise ColoringError("the faces admit no proper 3-colouring")
    faces.coloring = color
    return color


def count_cycles(graph: Graph, edges) -> int:
    ds = DisjointSet()
    for e in edges:
        u, v = graph.ends(e)
        ds.add(u)
        ds.add(v)
        ds.union(u, v)
    return len({ds.find(x) for x in ds.parent})


def is_alternating(cover: frozenset[int], face_edges: Sequence[int]) -> bool:
    flags = [e in cover for e in face_edges]
    k = len(flags)
    return k % 2 == 0 and all(flags[i] != flags[(i + 1) % k] for i in range(k))


def alternate_face(cover: frozenset[int], face_edges: Sequence[int]) -> frozenset[int]:
    """Symmetric difference of a cycle cover with an alternating face."""
    if not is_alternating(cover, face_edges):
        raise GraphError("face is not alternating for the cover")
    return cover ^ frozenset(face_edges)


@dataclass
class ColorRun:
    color: int
    cover: frozenset[int]
    initial_count: int
    count: int
    moves: list[int] = field(default_factory=list)


@dataclass
class BarnetteResult:
    tour: Tour
    cover: frozenset[int]
    cycles: int
    faces: FaceSet
    runs: list[ColorRun]
    audit: "BarnetteAudit"


def improve_cover(graph: Graph, faces: FaceSet, color: int, matching: frozenset[int]) -> ColorRun:
    """Start from the faces of colour color % 3 + 1 and alternate faces of
    ``color`` while the cycle count strictly drops (ascending face index,
    rescanning after every accepted move)."""
    start = color % 3 + 1
    cover = frozenset(e for f in faces.of_color(start) for e in faces.face_edges[f])
    count = count_cycles(graph, cover)
    run = ColorRun(color, cover, count, count)
    candidates = faces.of_color(color)
    improved = True
    while improved:
        improved = False
        for f in candidates:
            fe = faces.face_edges[f]
            if not is_alternating(cover, fe):
                raise GraphError(f"face {f} stopped alternating for colour {color}")
            new = cover ^ frozenset(fe)
            c = count_cycles(graph, new)
            if c < count:
                if not matching <= new:
                    raise GraphError("cover lost an edge of its own colour class")
                cover, count = new, c
                run.moves.append(f)
                improved = True
                break
    run.cover, run.count = cover, count
    return run


def cover_to_eulerian(graph: Graph, cover: frozenset[int]) -> EulerianCover:
    return EulerianCover(tuple(Component.from_cycle(c) for c in cycle_decomposition(graph, cover)))


def barnette_tour(graph: Graph, rotation: Rotation) -> BarnetteResult:
    faces = faces_from_rotation(graph, rotation)
    three_face_coloring(faces)
    ecol = faces.edge_coloring()
    classes = {i: frozenset(e for e, c in ecol.items() if c == i) for i in (1, 2, 3)}
    for i, cls in classes.items():
        if 2 * len(cls) != graph.n or len({v for e in cls for v in graph.ends(e)}) != graph.n:
            raise ColoringError(f"edge colour class {i} is not a perfect matching")
    runs = [improve_cover(graph, faces, i, classes[i]) for i in (1, 2, 3)]
    best = min(runs, key=lambda r: (r.count, r.color))
    tour = tour_from_cover(graph, cover_to_eulerian(graph, best.cover))
    if tour.length != graph.n + 2 * best.count - 2:
        raise GraphError("tour length differs from n + 2|C| - 2")
    audit = audit_barnette_bounds(graph, faces, {r.color: r.cover for r in runs})
    return BarnetteResult(tour, best.cover, best.count, faces, runs, audit)


# ---------------------------------------------------------------------------
# audit


@dataclass
class BarnetteAudit:
    violations: list[str]
    counts: dict[int, int]
    min_count_bound: Fraction

    @property
    def ok(self) -> bool:
        return not self.violations


def cycle_count_bound(n: int) -> Fraction:
    return Fraction(5 * n + 14, 36)


def tour_length_bound(n: int) -> Fraction:
    return Fraction(23 * n - 22, 18)


def audit_barnette_bounds(graph: Graph, faces: FaceSet, covers: Mapping[int, frozenset[int]]) -> BarnetteAudit:
    """Evaluate the four cycle-count inequalities for covers at their fixpoint."""
    assert faces.coloring is not None
    violations: list[str] = []
    n = graph.n
    lengths = [len(f) for f in faces.face_edges]
    f4 = sum(1 for x in lengths if x == 4)
    four_faces = {frozenset(fe) for fe in faces.face_edges if len(fe) == 4}
    counts = {}
    for i, cover in covers.items():
        cycles = cycle_decomposition(graph, cover)
        counts[i] = len(cycles)
        owner = {v: j for j, c in enumerate(cycles) for v in c.vertices}
        colored = faces.of_color(i)
        first = 1
        third = 0
        for f in colored:
            k = lengths[f] // 2
            meeting = len({owner[v] for v in faces.face_vertices[f]})
            if meeting > (k + 1) // 2:
                violations.append(f"colour {i}: face {f} (length {2 * k}) meets {meeting} cycles")
            first += (k - 1) // 2
            third += (k + 1) // 2
        if counts[i] > first:
            violations.append(f"colour {i}: {counts[i]} cycles > {first}")
        if counts[i] != 1:
            square_cycles = sum(1 for c in cycles if c.edge_set in four_faces)
            if 3 * counts[i] > square_cycles + third:
                violations.append(f"colour {i}: 3*{counts[i]} > {square_cycles} + {third}")
    bound = min(Fraction(n + 4, 6) - Fraction(f4, 6), Fraction(n + 1, 9) + Fraction(f4, 6))
    if counts and min(counts.values()) > bound:
        violations.append(f"min cycle count {min(counts.values())} > {bound}")
    return BarnetteAudit(violations, counts, bound)
