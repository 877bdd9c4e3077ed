"""Eulerian subgraph covers: construction from a matching distribution, the
three local merge operations, contributions, tour assembly and the per-vertex
contribution audit."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graph import (Cycle, DisjointSet, Graph, GraphError, Tour, chords, contract_parts,
                    cycle_decomposition, cycles_of_length, is_induced_cycle, spanning_tree)
from .matching import MatchingDistribution, decompose_third

EPSILON = Fraction(1, 61236)
SMALL_GRAPH = 10


@dataclass(frozen=True)
class Component:
    """Connected even-degree multi-subgraph: vertex set plus edge multiplicities."""

    vertices: frozenset[int]
    counts: tuple[tuple[int, int], ...]
    origin: str = "cycle"

    @classmethod
    def make(cls, vertices: Iterable[int], counts: Mapping[int, int], origin: str) -> "Component":
        return cls(frozenset(vertices), tuple(sorted((e, k) for e, k in counts.items() if k)), origin)

    @classmethod
    def from_cycle(cls, cycle: Cycle, origin: str = "cycle") -> "Component":
        return cls.make(cycle.vertices, {e: 1 for e in cycle.edges}, origin)

    @property
    def h(self) -> int:
        return len(self.vertices)

    @property
    def length(self) -> int:
        return sum(k for _, k in self.counts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(e for e, _ in self.counts)

    def is_cycle(self) -> bool:
        return all(k == 1 for _, k in self.counts) and self.length == self.h

    def contribution(self) -> Fraction:
        return Fraction(self.length + 2, self.h)


@dataclass(frozen=True)
class EulerianCover:
    components: tuple[Component, ...]

    def __len__(self) -> int:
        return len(self.components)

    def owner(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.components) for v in c.vertices}

    def replace(self, drop: Iterable[int], new: Component) -> "EulerianCover":
        drop = set(drop)
        kept = [c for i, c in enumerate(self.components) if i not in drop]
        kept.append(new)
        kept.sort(key=lambda c: min(c.vertices))
        return EulerianCover(tuple(kept))

    def as_pairs(self) -> list[tuple[frozenset[int], dict[int, int]]]:
        return [(c.vertices, c.as_dict()) for c in self.components]

    def contributions(self) -> dict[int, Fraction]:
        return {v: c.contribution() for c in self.components for v in c.vertices}


def cover_problems(graph: Graph, cover: EulerianCover) -> list[str]:
    """Structural invariants: partition, multiplicity <= 2, even, connected."""
    problems = []
    seen: set[int] = set()
    for idx, comp in enumerate(cover.components):
        if comp.vertices & seen:
            problems.append(f"component {idx} overlaps another")
        seen |= comp.vertices
        deg: Counter = Counter()
        for e, k in comp.counts:
            if k > 2:
                problems.append(f"component {idx}: edge {e} used {k} times")
            u, v = graph.ends(e)
            if u not in comp.vertices or v not in comp.vertices:
                problems.append(f"component {idx}: edge {e} leaves the component")
            deg[u] += k
            deg[v] += k
        if any(deg[v] % 2 for v in deg):
            problems.append(f"component {idx}: odd degree")
        if not _spans_connected(comp.vertices, comp.as_dict(), graph):
            problems.append(f"component {idx}: not connected")
    if seen != set(graph.vertices):
        problems.append("components do not partition the vertex set")
    return problems


def _spans_connected(vertices, counts: Mapping[int, int], graph: Graph) -> bool:
    if len(vertices) == 1:
        return True
    ds = DisjointSet(vertices)
    touched = set()
    for e, k in counts.items():
        if k:
            u, v = graph.ends(e)
            if u not in vertices or v not in vertices:
                return False
            ds.union(u, v)
            touched.update((u, v))
    return touched == set(vertices) and len({ds.find(v) for v in vertices}) == 1


# ---------------------------------------------------------------------------
# initial covers


def initial_cycle_covers(graph: Graph, dist: MatchingDistribution) -> list[EulerianCover]:
    """The cycle cover E \\ M_i for every atom of the distribution."""
    covers = []
    for idx, m in enumerate(dist.matchings):
        cycles = cycle_decomposition(graph, [e for e in graph.edge_ids if e not in m])
        for c in cycles:
            if len(c) <= 3:
                raise GraphError(f"cover {idx}: complement of a 3-cut perfect matching has a {len(c)}-cycle")
            if len(c) == 5 and not is_induced_cycle(graph, c):
                raise GraphError(f"cover {idx}: 5-cycle {c.vertices} has a chord")
        covers.append(EulerianCover(tuple(Component.from_cycle(c) for c in cycles)))
    return covers


# ---------------------------------------------------------------------------
# merge operations


@dataclass
class OpLog:
    op: str
    host_cycle: tuple[int, ...]
    merged_sizes: tuple[int, ...]


def _single_cycle(graph: Graph, vertices: frozenset[int], edges: set[int]) -> bool:
    if len(edges) != len(vertices):
        return False
    deg: Counter = Counter()
    for e in edges:
        u, v = graph.ends(e)
        if u not in vertices or v not in vertices:
            return False
        deg[u] += 1
        deg[v] += 1
    if any(deg[v] != 2 for v in vertices):
        return False
    return _spans_connected(vertices, {e: 1 for e in edges}, graph)


def _merge_by_host_cycle(cover: EulerianCover, graph: Graph, hosts: Sequence[Cycle], parts: int,
                         op: str, log: list[OpLog]) -> EulerianCover:
    while True:
        owner = cover.owner()
        for host in hosts:
            idx = sorted({owner[v] for v in host.vertices})
            if len(idx) != parts:
                continue
            comps = [cover.components[i] for i in idx]
            if not all(c.is_cycle() for c in comps):
                continue
            union_edges = set().union(*(c.edge_set for c in comps))
            merged = union_edges ^ host.edge_set
            verts = frozenset().union(*(c.vertices for c in comps))
            if _single_cycle(graph, verts, merged):
                log.append(OpLog(op, host.vertices, tuple(c.h for c in comps)))
                cover = cover.replace(idx, Component.make(verts, {e: 1 for e in merged}, op))
                break
        else:
            return cover


def apply_u1(cover: EulerianCover, graph: Graph, hexagons: Sequence[Cycle] | None = None,
             log: list[OpLog] | None = None) -> EulerianCover:
    """Merge three cover cycles meeting a 6-cycle of G into their symmetric
    difference with it, while such a merge yields one simple cycle."""
    hexagons = cycles_of_length(graph, 6) if hexagons is None else hexagons
    return _merge_by_host_cycle(cover, graph, hexagons, 3, "U1", [] if log is None else log)


def apply_u2(cover: EulerianCover, graph: Graph, squares: Sequence[Cycle] | None = None,
             log: list[OpLog] | None = None) -> EulerianCover:
    """Same as :func:`apply_u1` for two cover cycles meeting a 4-cycle of G."""
    squares = cycles_of_length(graph, 4) if squares is None else squares
    return _merge_by_host_cycle(cover, graph, squares, 2, "U2", [] if log is None else log)


def _sum_and_trim(graph: Graph, base: Counter, extra: Counter, vertices: frozenset[int]) -> Counter:
    """Edge-sum of two connected Eulerian multigraphs sharing >= 2 vertices,
    minus two copies of the smallest edge present in both whose removal keeps
    the sum connected."""
    total = base + extra
    for e in sorted(set(base) & set(extra)):
        trial = total.copy()
        trial[e] -= 2
        if trial[e] == 0:
            del trial[e]
        if _spans_connected(vertices, trial, graph):
            return trial
    raise GraphError("no removable parallel pair: merged multigraph would disconnect")


def merge_through_pentagon(graph: Graph, g1: Component, g2: Component, pentagon: Cycle) -> Component:
    """Combine g1 (2 vertices on the pentagon), the pentagon and g2 (3 vertices)
    into one component with at most l1 + l2 + 1 edges."""
    ring = Counter({e: 1 for e in pentagon.edges})
    first_verts = g1.vertices | pentagon.vertex_set
    step = _sum_and_trim(graph, Counter(g1.as_dict()), ring, first_verts)
    verts = first_verts | g2.vertices
    merged = _sum_and_trim(graph, step, Counter(g2.as_dict()), verts)
    for e in list(merged):
        while merged[e] > 2:
            merged[e] -= 2
    comp = Component.make(verts, merged, "U3")
    if comp.length > g1.length + g2.length + 1:
        raise GraphError("pentagon merge added more than one edge")
    return comp


def apply_u3(cover: EulerianCover, graph: Graph, pentagons: Sequence[Cycle] | None = None,
             log: list[OpLog] | None = None) -> EulerianCover:
    """Merge two components of >= 5 vertices that together cover a 5-cycle of G."""
    pentagons = cycles_of_length(graph, 5) if pentagons is None else pentagons
    log = [] if log is None else log
    while True:
        owner = cover.owner()
        for pent in pentagons:
            idx = sorted({owner[v] for v in pent.vertices})
            if len(idx) != 2:
                continue
            comps = [cover.components[i] for i in idx]
            if min(c.h for c in comps) < 5:
                continue
            shares = [len(c.vertices & pent.vertex_set) for c in comps]
            if sorted(shares) != [2, 3]:
                continue
            g1, g2 = (comps[0], comps[1]) if shares[0] == 2 else (comps[1], comps[0])
            new = merge_through_pentagon(graph, g1, g2, pent)
            log.append(OpLog("U3", pent.vertices, (g1.h, g2.h)))
            cover = cover.replace(idx, new)
            break
        else:
            return cover


# ---------------------------------------------------------------------------
# tours and contributions


def tour_from_cover(graph: Graph, cover: EulerianCover) -> Tour:
    """Components plus a doubled spanning tree of the graph with components contracted."""
    quotient, _ = contract_parts(graph, [c.vertices for c in cover.components])
    counts = Counter()
    for c in cover.components:
        counts.update(c.as_dict())
    for e in spanning_tree(quotient):
        counts[e] += 2
    return Tour.from_counts(counts)


@dataclass
class CoverRun:
    """History of one cover through the three operations."""

    weight: Fraction
    initial: EulerianCover
    after_u1: EulerianCover
    after_u2: EulerianCover
    final: EulerianCover
    log: list[OpLog] = field(default_factory=list)

    def stages(self) -> list[EulerianCover]:
        return [self.initial, self.after_u1, self.after_u2]


def run_operations(graph: Graph, cover: EulerianCover, weight: Fraction = Fraction(1),
                   cycles: dict[int, list[Cycle]] | None = None) -> CoverRun:
    cycles = cycles or {k: cycles_of_length(graph, k) for k in (4, 5, 6)}
    log: list[OpLog] = []
    u1 = apply_u1(cover, graph, cycles[6], log)
    u2 = apply_u2(u1, graph, cycles[4], log)
    u3 = apply_u3(u2, graph, cycles[5], log)
    return CoverRun(weight, cover, u1, u2, u3, log)


@dataclass
class ContributionLedger:
    weights: list[Fraction]
    per_cover: list[dict[int, Fraction]]

    def z(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for w, zi in zip(self.weights, self.per_cover):
            for v, x in zi.items():
                out[v] = out.get(v, Fraction(0)) + w * x
        return out

    def cover_total(self, i: int) -> Fraction:
        return sum(self.per_cover[i].values(), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.z().values(), Fraction(0))


@dataclass
class CoverResult:
    tour: Tour
    ledger: ContributionLedger
    chosen: int
    runs: list[CoverRun]
    dist: MatchingDistribution | None
    method: str

    def phase_counts(self) -> dict[str, int]:
        if not self.runs:
            return {}
        run = self.runs[self.chosen]
        return {"initial": len(run.initial), "U1": len(run.after_u1),
                "U2": len(run.after_u2), "U3": len(run.final)}


def hamiltonian_cycle(graph: Graph) -> list[int] | None:
    """Edge ids of a Hamiltonian cycle by exhaustive search, or None."""
    n = graph.n
    if n < 2:
        return None
    start = graph.vertices[0]
    path_v = [start]
    path_e: list[int] = []
    on_path = {start}

    def extend(v: int) -> bool:
        if len(path_v) == n:
            for e in graph.incident(v):
                if graph.other(e, v) == start and (n > 2 or e != path_e[-1]):
                    path_e.append(e)
                    return True
            return False
        for e in graph.incident(v):
            w = graph.other(e, v)
            if w in on_path:
                continue
            on_path.add(w)
            path_v.append(w)
            path_e.append(e)
            if extend(w):
                return True
            on_path.discard(w)
            path_v.pop()
            path_e.pop()
        return False

    return path_e if extend(start) else None


def best_tour(graph: Graph, dist: MatchingDistribution | None = None) -> CoverResult:
    """Short tour of a cubic 2-connected graph.

    Below 10 vertices an exhaustive Hamiltonian cycle is returned.  Otherwise
    every cover of the matching distribution goes through U1, U2, U3 and the
    cover with the shortest assembled tour is used (ties: lowest index).
    """
    if graph.n < SMALL_GRAPH and dist is None:
        ham = hamiltonian_cycle(graph)
        if ham is not None:
            comp = Component.make(graph.vertices, Counter(ham), "hamiltonian")
            cover = EulerianCover((comp,))
            ledger = ContributionLedger([Fraction(1)], [cover.contributions()])
            return CoverResult(Tour.from_edges(ham), ledger, 0, [], None, "exhaustive")
    dist = decompose_third(graph) if dist is None else dist
    cycles = {k: cycles_of_length(graph, k) for k in (4, 5, 6)}
    runs = []
    for w, cover in zip(dist.weights, initial_cycle_covers(graph, dist)):
        run = run_operations(graph, cover, w, cycles)
        problems = cover_problems(graph, run.final)
        if problems:
            raise GraphError(f"invalid cover after operations: {problems}")
        runs.append(run)
    tours = [tour_from_cover(graph, r.final) for r in runs]
    chosen = min(range(len(tours)), key=lambda i: (tours[i].length, i))
    ledger = ContributionLedger([r.weight for r in runs], [r.final.contributions() for r in runs])
    return CoverResult(tours[chosen], ledger, chosen, runs, dist, "covers")


def main_bound(n: int) -> Fraction:
    """(4/3 - 1/61236) n - 2 as an exact rational."""
    return (Fraction(4, 3) - EPSILON) * n - 2


# ---------------------------------------------------------------------------
# contribution audit


@dataclass
class ContributionAudit:
    classes: dict[int, str]
    violations: list[str]
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def chorded_squares(graph: Graph) -> list[tuple[Cycle, bool]]:
    """Chorded 4-cycles of G, each with an 'isolated' flag.

    A chorded 4-cycle is isolated when neither of its two outgoing edges ends
    in another chorded 4-cycle.
    """
    found: list[Cycle] = []
    for c in cycles_of_length(graph, 4):
        if chords(graph, c) and all(other.vertex_set != c.vertex_set for other in found):
            found.append(c)
    sets = [c.vertex_set for c in found]
    out = []
    for c in found:
        ends = set()
        for v in c.vertices:
            for e in graph.incident(v):
                w = graph.other(e, v)
                if w not in c.vertex_set:
                    ends.add(w)
        isolated = not any(w in s for w in ends for s in sets if s != c.vertex_set)
        out.append((c, isolated))
    return out


def audit_contributions(graph: Graph, runs: Sequence[CoverRun]) -> ContributionAudit:
    """Check the per-vertex contribution classes and the global sum bound."""
    violations: list[str] = []
    notes: list[str] = []
    ledger = ContributionLedger([r.weight for r in runs], [r.final.contributions() for r in runs])
    z = ledger.z()
    thirteen_tenths = Fraction(13, 10)
    four_thirds = Fraction(4, 3)

    for i, run in enumerate(runs):
        zi = ledger.per_cover[i]
        for stage_name, stage in zip(("initial", "U1", "U2"), run.stages()):
            for comp in stage.components:
                h = min(comp.h, 10)
                cap = Fraction(h + 2, h)
                for v in comp.vertices:
                    if zi[v] > cap:
                        violations.append(f"cover {i}: z({v}) = {zi[v]} > {cap} (cycle of length {comp.h} at {stage_name})")
        originals = {(c.vertices, c.counts) for c in run.initial.components}
        for comp in run.final.components:
            if comp.origin == "U3" and comp.contribution() > thirteen_tenths:
                violations.append(f"cover {i}: merged component on {comp.h} vertices has z = {comp.contribution()}")
            if comp.h <= 9 and (comp.vertices, comp.counts) not in originals:
                violations.append(f"cover {i}: component on {comp.h} vertices is not an original cycle")
            for v in comp.vertices:
                inside = sum(1 for w in graph.neighbors(v) if w in comp.vertices)
                if inside < 2:
                    violations.append(f"cover {i}: vertex {v} has {inside} neighbours in its component")

    classes: dict[int, str] = {}
    squares = chorded_squares(graph)
    for c, isolated in squares:
        for v in c.vertices:
            classes.setdefault(v, "P1" if isolated else "P2")
    finals = [r.final.owner() for r in runs]
    induced: dict[int, list[Component]] = {}
    for v in graph.vertices:
        if v in classes:
            continue
        for r, own in zip(runs, finals):
            comp = r.final.components[own[v]]
            if comp.is_cycle() and comp.h in (4, 5, 6):
                cyc = cycle_decomposition(graph, comp.edge_set)[0]
                if is_induced_cycle(graph, cyc):
                    induced.setdefault(v, []).append(comp)
        sizes = {c.h for c in induced.get(v, [])}
        for size, label in ((4, "P3"), (5, "P4"), (6, "P5")):
            if size in sizes:
                classes[v] = label
                break
        else:
            classes[v] = "P6"
        if len(sizes) > 1:
            notes.append(f"vertex {v}: induced components of sizes {sorted(sizes)}; using {classes[v]}")

    caps = {"P1": four_thirds, "P2": thirteen_tenths, "P3": four_thirds - Fraction(1, 60),
            "P4": four_thirds - Fraction(1, 60), "P5": four_thirds, "P6": thirteen_tenths}
    for v, label in classes.items():
        if z[v] > caps[label]:
            violations.append(f"vertex {v} ({label}): z = {z[v]} > {caps[label]}")
    six_cap = 6 * (four_thirds - Fraction(1, 729))
    checked = set()
    for v, label in classes.items():
        if label != "P5":
            continue
        for comp in induced[v]:
            if comp.h != 6 or comp.vertices in checked:
                continue
            checked.add(comp.vertices)
            s = sum((z[w] for w in comp.vertices), Fraction(0))
            if s > six_cap:
                violations.append(f"hexagon {sorted(comp.vertices)}: sum z = {s} > {six_cap}")
    total = sum(z.values(), Fraction(0))
    if total > (four_thirds - EPSILON) * graph.n:
        violations.append(f"sum of contributions {total} > (4/3 - 1/61236) n")
    return ContributionAudit(classes, violations, notes)
