"""Tours for connected cubic graphs, with or without bridges.

The 2-connected pipeline is: remove chorded 6-cycles, build a tour of the
reduced graph from Eulerian subgraph covers, and lift it back step by step.
Graphs with bridges are split at the bridges; each 2-edge-connected piece is
made cubic by turning degree-2 vertices into chorded 4-cycles, solved, and
contracted again, and the pieces are joined by doubling every bridge.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .cover import EPSILON, CoverResult, best_tour, main_bound
from .graph import (Graph, GraphError, Tour, bridges_and_blocks, format_edge_list, is_connected,
                    parse_tour, tour_problems, validate)
from .reducer import LIFT_BOUND, LiftInfo, ReductionRecord, lift_tour_with_info, reduce_fully


@dataclass
class TwoConnectedSolution:
    tour: Tour
    reduced: Graph
    trace: list[ReductionRecord]
    lifts: list[LiftInfo]
    cover: CoverResult
    n: int

    @property
    def bound(self) -> Fraction:
        return main_bound(self.n)

    def lift_violations(self) -> list[str]:
        return [f"{info.kind} lift added {info.increment} > {LIFT_BOUND[info.kind]}"
                for info in self.lifts if info.increment > LIFT_BOUND[info.kind]]


def solve_two_connected(graph: Graph) -> TwoConnectedSolution:
    """reduce -> best tour of the reduced graph -> lift back through the trace."""
    report = validate(graph)
    if not report.ok:
        raise GraphError(f"input is not cubic: degrees {report.degree_violations}")
    if not is_connected(graph) or bridges_and_blocks(graph).bridges:
        raise GraphError("input is not 2-connected")
    reduced, trace = reduce_fully(graph)
    cover = best_tour(reduced)
    graphs = [graph]
    for rec in trace:
        graphs.append(rec.apply(graphs[-1]))
    tour = cover.tour
    lifts: list[LiftInfo] = []
    for rec, after in zip(reversed(trace), reversed(graphs[1:])):
        tour, info = lift_tour_with_info(tour, rec, after)
        lifts.append(info)
    lifts.reverse()
    problems = tour_problems(graph, tour.as_dict())
    if problems:
        raise GraphError(f"lifted tour is invalid: {problems}")
    return TwoConnectedSolution(tour, reduced, trace, lifts, cover, graph.n)


# ---------------------------------------------------------------------------
# bridges


@dataclass
class BridgeDecomposition:
    bridges: tuple[int, ...]
    components: list[Graph]  # every 2-edge-connected component, singletons included
    singletons: tuple[int, ...]

    @property
    def b(self) -> int:
        return len(self.bridges)

    @property
    def n0(self) -> int:
        return len(self.singletons)


def decompose_bridges(graph: Graph) -> BridgeDecomposition:
    blocks = bridges_and_blocks(graph)
    comps = [graph.subgraph(c) for c in blocks.components]
    singles = tuple(sorted(c.vertices[0] for c in comps if c.n == 1))
    return BridgeDecomposition(blocks.bridges, comps, singles)


def subtour_lower_bound(graph: Graph) -> int:
    """2b + n - n0, a lower bound on the subtour LP value and hence on OPT."""
    d = decompose_bridges(graph)
    return 2 * d.b + graph.n - d.n0


# ---------------------------------------------------------------------------
# degree-2 gadgets


@dataclass(frozen=True)
class Gadget:
    """Chorded 4-cycle a-b-c-d-a with chord b-d standing in for vertex ``a``."""

    vertex: int
    vertices: tuple[int, int, int, int]
    edges: tuple[int, ...]
    moved_edge: int  # second edge of the old vertex, now attached at c


def expand_degree2(component: Graph) -> tuple[Graph, list[Gadget]]:
    edges = dict(component.items())
    verts = list(component.vertices)
    nv, ne = component.fresh_vertex(), component.fresh_edge()
    gadgets = []
    for v in component.vertices:
        if component.degree(v) != 2:
            continue
        _, moved = component.incident(v)
        b, c, d = nv, nv + 1, nv + 2
        nv += 3
        x, y = edges[moved]
        edges[moved] = (c, y) if x == v else (x, c)
        new = {ne: (v, b), ne + 1: (b, c), ne + 2: (c, d), ne + 3: (d, v), ne + 4: (b, d)}
        edges.update(new)
        ne += 5
        verts += [b, c, d]
        gadgets.append(Gadget(v, (v, b, c, d), tuple(new), moved))
    return Graph(edges, sorted(verts)), gadgets


def contract_gadgets(tour: Tour, gadgets: list[Gadget]) -> Tour:
    drop = {e for g in gadgets for e in g.edges}
    return Tour.from_counts({e: k for e, k in tour.as_dict().items() if e not in drop})


@dataclass
class ComponentSolution:
    tour: Tour
    method: str
    expanded_n: int = 0
    degree2: int = 0
    inner: TwoConnectedSolution | None = None


def _trivial(component: Graph) -> ComponentSolution | None:
    if component.n == 1:
        return ComponentSolution(Tour(()), "singleton")
    return None


def algorithm_B(component: Graph) -> ComponentSolution:
    """Expand degree-2 vertices, solve the cubic graph, contract the gadgets."""
    trivial = _trivial(component)
    if trivial is not None:
        return trivial
    report = validate(component, "subcubic")
    if not report.ok:
        raise GraphError(f"component is not subcubic: {report.degree_violations}")
    expanded, gadgets = expand_degree2(component)
    inner = solve_two_connected(expanded)
    tour = contract_gadgets(inner.tour, gadgets)
    problems = tour_problems(component, tour.as_dict())
    if problems:
        raise GraphError(f"contracted tour is invalid: {problems}")
    return ComponentSolution(tour, "B", expanded.n, len(gadgets), inner)


Plugin = Union[Callable[[Graph], Tour], str]


def run_external(cmd: str, component: Graph, timeout: float = 60.0) -> Tour:
    """Send the component as an edge list on stdin, read a tour edge list from stdout."""
    dense, vmap, emap = component.relabeled()
    proc = subprocess.run(shlex.split(cmd), input=format_edge_list(dense), capture_output=True,
                          text=True, timeout=timeout)
    if proc.returncode != 0:
        raise GraphError(f"plugin exited with {proc.returncode}: {proc.stderr.strip()}")
    dense_tour = parse_tour(dense, proc.stdout)
    back = {new: old for old, new in emap.items()}
    return Tour.from_counts({back[e]: k for e, k in dense_tour.as_dict().items()})


def algorithm_A(component: Graph, plugin: Plugin | None = None) -> ComponentSolution:
    """Tour from a registered plugin (validated), else algorithm B's tour."""
    trivial = _trivial(component)
    if trivial is not None:
        return trivial
    if plugin is None:
        sol = algorithm_B(component)
        return ComponentSolution(sol.tour, "A=B", sol.expanded_n, sol.degree2, sol.inner)
    tour = run_external(plugin, component) if isinstance(plugin, str) else plugin(component)
    if not isinstance(tour, Tour):
        tour = Tour.from_counts(dict(tour))
    problems = tour_problems(component, tour.as_dict())
    if problems:
        raise GraphError(f"plugin tour rejected: {problems}")
    return ComponentSolution(tour, "A")


def glue(decomp: BridgeDecomposition, tours: list[Tour]) -> Tour:
    """Component tours plus every bridge twice."""
    if len(tours) != len(decomp.components):
        raise GraphError(f"{len(decomp.components)} components but {len(tours)} tours")
    counts: dict[int, int] = {}
    for comp, t in zip(decomp.components, tours):
        if comp.n > 1 and not t.counts:
            raise GraphError("a component is missing its tour")
        counts.update(t.as_dict())
    for e in decomp.bridges:
        counts[e] = 2
    return Tour.from_counts(counts)


@dataclass
class GeneralSolution:
    tour: Tour
    decomposition: BridgeDecomposition
    parts: list[ComponentSolution]
    lower_bound: int
    n: int
    notes: list[str] = field(default_factory=list)

    @property
    def b_bound(self) -> Fraction:
        """4b + (4/3 - eps)(n - n0)."""
        d = self.decomposition
        return 4 * d.b + (Fraction(4, 3) - EPSILON) * (self.n - d.n0)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.tour.length, max(self.lower_bound, 1))


def solve_general(graph: Graph, plugin: Plugin | None = None) -> GeneralSolution:
    """Per component take the shorter of algorithms A and B, then glue."""
    report = validate(graph)
    if not report.ok:
        raise GraphError(f"input is not cubic: degrees {report.degree_violations}")
    if not is_connected(graph):
        raise GraphError("input is disconnected")
    decomp = decompose_bridges(graph)
    parts = []
    for comp in decomp.components:
        b_sol = algorithm_B(comp)
        a_sol = algorithm_A(comp, plugin) if plugin is not None else None
        parts.append(a_sol if a_sol is not None and a_sol.tour.length < b_sol.tour.length else b_sol)
    tour = glue(decomp, [p.tour for p in parts])
    problems = tour_problems(graph, tour.as_dict())
    if problems:
        raise GraphError(f"glued tour is invalid: {problems}")
    return GeneralSolution(tour, decomp, parts, subtour_lower_bound(graph), graph.n)
