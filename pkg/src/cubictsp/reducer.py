"""Removal of chorded 6-cycles and exact lifting of tours back.

Four rewrite rules shrink a cubic 2-connected graph until no 6-cycle has a
chord:

* R1: a 6-cycle with two chords (a 2-edge cut around it) becomes a chorded
  4-cycle;
* R2: one chord, two distinct outside neighbours (each attached twice): the
  cycle plus both neighbours becomes a chorded 4-cycle;
* R3: one chord, three distinct outside neighbours: the cycle plus the doubly
  attached neighbour becomes a triangle;
* R4: one chord, four distinct outside neighbours: the cycle becomes a single
  edge whose endpoints take the neighbours in one of the two non-crossing
  pairings, chosen so that the new edge is not a bridge.

Boundary edges keep their ids and the vertices they touch inside the removed
region are reused for the gadget, so a tour of the reduced graph can be mapped
back by re-solving only the removed region.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .graph import Cycle, DisjointSet, Graph, GraphError, Tour, chords, cycles_of_length, is_bridgeless, tour_problems

LIFT_BOUND = {"R1": 2, "R2": 4, "R3": 5, "R4": 4}
REMOVED_SIZE = {"R1": 6, "R2": 8, "R3": 7, "R4": 6}


@dataclass(frozen=True)
class ChordedSixCycle:
    cycle: Cycle
    chords: tuple[int, ...]
    kind: str
    boundary: tuple[int, ...]
    outer: tuple[int, ...]

    @property
    def classification(self) -> str:
        return {"R1": "TwoChords", "R2": "OneChord2W", "R3": "OneChord3W", "R4": "OneChord4W"}[self.kind]


@dataclass(frozen=True)
class ReductionRecord:
    """Everything needed to replay a reduction and to undo it on tours.

    ``boundary`` lists (edge id, endpoint inside U, endpoint outside) in the
    original graph; ``gadget_boundary`` lists (edge id, gadget endpoint) in the
    reduced graph.
    """

    kind: str
    removed: tuple[int, ...]
    internal: tuple[tuple[int, int, int], ...]
    boundary: tuple[tuple[int, int, int], ...]
    gadget_vertices: tuple[int, ...]
    gadget_edges: tuple[tuple[int, int, int], ...]
    gadget_boundary: tuple[tuple[int, int], ...]
    pairing: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def apply(self, graph: Graph) -> Graph:
        removed = set(self.removed)
        internal = {e for e, _, _ in self.internal}
        bnd = {e for e, _, _ in self.boundary}
        edges = {e: uv for e, uv in graph.items() if e not in internal and e not in bnd}
        for e, _, outer in self.boundary:
            inner = dict(self.gadget_boundary)[e]
            edges[e] = (outer, inner)
        for e, u, v in self.gadget_edges:
            edges[e] = (u, v)
        verts = [v for v in graph.vertices if v not in removed] + list(self.gadget_vertices)
        return Graph(edges, sorted(verts))

    def expand(self, reduced: Graph) -> Graph:
        gverts = set(self.gadget_vertices)
        gedges = {e for e, _, _ in self.gadget_edges}
        bnd = {e for e, _, _ in self.boundary}
        edges = {e: uv for e, uv in reduced.items() if e not in gedges and e not in bnd}
        for e, inner, outer in self.boundary:
            edges[e] = (inner, outer)
        for e, u, v in self.internal:
            edges[e] = (u, v)
        verts = [v for v in reduced.vertices if v not in gverts] + list(self.removed)
        return Graph(edges, sorted(verts))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "removed": list(self.removed),
            "internal": [list(t) for t in self.internal],
            "boundary": [list(t) for t in self.boundary],
            "gadget_vertices": list(self.gadget_vertices),
            "gadget_edges": [list(t) for t in self.gadget_edges],
            "gadget_boundary": [list(t) for t in self.gadget_boundary],
            "pairing": None if self.pairing is None else [list(p) for p in self.pairing],
        }

    @classmethod
    def from_json(cls, d: dict) -> "ReductionRecord":
        return cls(
            d["kind"], tuple(d["removed"]), tuple(tuple(t) for t in d["internal"]),
            tuple(tuple(t) for t in d["boundary"]), tuple(d["gadget_vertices"]),
            tuple(tuple(t) for t in d["gadget_edges"]), tuple(tuple(t) for t in d["gadget_boundary"]),
            None if d.get("pairing") is None else tuple(tuple(p) for p in d["pairing"]),
        )


# ---------------------------------------------------------------------------
# detection


def _cut(graph: Graph, inside: set[int]) -> list[tuple[int, int, int]]:
    """(edge, inner endpoint, outer endpoint) for edges leaving ``inside``, by edge id."""
    out = []
    for v in sorted(inside):
        for e in graph.incident(v):
            w = graph.other(e, v)
            if w not in inside:
                out.append((e, v, w))
    return sorted(out)


def classify(graph: Graph, cycle: Cycle) -> ChordedSixCycle | None:
    """Reduction kind for a chorded 6-cycle, or None if no rule applies to it."""
    ch = tuple(chords(graph, cycle))
    if not ch or len(ch) > 2:
        return None
    ring = cycle.vertex_set
    boundary, outer = [], []
    for v in cycle.vertices:
        for e in graph.incident(v):
            if e in cycle.edge_set or e in ch:
                continue
            w = graph.other(e, v)
            if w in ring:
                return None
            boundary.append(e)
            outer.append(w)
    if len(ch) == 2:
        return ChordedSixCycle(cycle, ch, "R1", tuple(boundary), tuple(outer)) if len(boundary) == 2 else None
    if len(boundary) != 4:
        return None
    kind = {2: "R2", 3: "R3", 4: "R4"}.get(len(set(outer)))
    if kind is None:
        return None
    return ChordedSixCycle(cycle, ch, kind, tuple(boundary), tuple(outer))


def chorded_six_cycles(graph: Graph) -> list[tuple[Cycle, ChordedSixCycle | None]]:
    """Every 6-cycle with a chord, with its classification (None = not reducible)."""
    out = []
    for c in cycles_of_length(graph, 6):
        if chords(graph, c):
            out.append((c, classify(graph, c)))
    return out


def find_chorded_six_cycle(graph: Graph) -> ChordedSixCycle | None:
    """Lexicographically smallest chorded 6-cycle some reduction applies to."""
    for c in cycles_of_length(graph, 6):
        if not chords(graph, c):
            continue
        occ = classify(graph, c)
        if occ is not None and _build(graph, occ) is not None:
            return occ
    return None


# ---------------------------------------------------------------------------
# rewriting


def _valid_result(graph: Graph) -> bool:
    return all(graph.degree(v) == 3 for v in graph.vertices) and is_bridgeless(graph)


def _build(graph: Graph, occ: ChordedSixCycle) -> tuple[Graph, ReductionRecord] | None:
    ring = set(occ.cycle.vertices)
    if occ.kind == "R1":
        removed = ring
    elif occ.kind == "R2":
        removed = ring | set(occ.outer)
    elif occ.kind == "R3":
        twice = [w for w in set(occ.outer) if occ.outer.count(w) == 2]
        removed = ring | set(twice)
    else:
        removed = ring
    cut = _cut(graph, removed)
    internal = tuple(sorted((e, *graph.ends(e)) for e, (u, v) in graph.items() if u in removed and v in removed))
    new_v = graph.fresh_vertex()
    new_e = graph.fresh_edge()
    candidates = []
    if occ.kind in ("R1", "R2"):
        if len(cut) != 2 or cut[0][1] == cut[1][1]:
            return None
        a, c = cut[0][1], cut[1][1]
        b, d = new_v, new_v + 1
        gedges = ((new_e, a, b), (new_e + 1, b, c), (new_e + 2, c, d), (new_e + 3, a, d), (new_e + 4, b, d))
        candidates.append(((a, b, c, d), gedges, tuple((e, inner) for e, inner, _ in cut), None))
    elif occ.kind == "R3":
        if len(cut) != 3 or len({inner for _, inner, _ in cut}) != 3:
            return None
        t1, t2, t3 = (inner for _, inner, _ in cut)
        gedges = ((new_e, t1, t2), (new_e + 1, t2, t3), (new_e + 2, t1, t3))
        candidates.append(((t1, t2, t3), gedges, tuple((e, inner) for e, inner, _ in cut), None))
    else:
        if len(cut) != 4:
            return None
        e1, e2, e3, e4 = occ.boundary
        inner_of = {e: inner for e, inner, _ in cut}
        p, q = inner_of[e1], inner_of[e3]
        for left, right in (((e1, e2), (e3, e4)), ((e1, e4), (e2, e3))):
            gb = tuple(sorted([(e, p) for e in left] + [(e, q) for e in right]))
            candidates.append(((p, q), ((new_e, p, q),), gb, (left, right)))
    built = []
    for gverts, gedges, gbound, pairing in candidates:
        rec = ReductionRecord(occ.kind, tuple(sorted(removed)), internal, tuple(cut),
                              tuple(sorted(gverts)), tuple(gedges), tuple(sorted(gbound)), pairing)
        try:
            reduced = rec.apply(graph)
        except GraphError:
            continue
        if _valid_result(reduced):
            built.append((reduced, rec))
    if built:
        # prefer an R4 pairing whose crossing attachment pairs are all joined
        # by a Hamiltonian path of the hexagon (a tour then lifts with +4)
        return min(built, key=lambda b: _bad_pairs(graph, b[1]))
    if occ.kind == "R4":
        raise GraphError("both pairings leave the new edge as a bridge")
    return None


def _bad_pairs(graph: Graph, rec: ReductionRecord) -> int:
    if rec.pairing is None:
        return 0
    inner = {e: v for e, v, _ in rec.boundary}
    left, right = rec.pairing
    return sum(1 for a in left for b in right
               if not _hamiltonian_path(rec.removed, rec.internal, inner[a], inner[b]))


@lru_cache(maxsize=4096)
def _hamiltonian_path(vertices: tuple[int, ...], edges: tuple[tuple[int, int, int], ...], s: int, t: int) -> bool:
    if s == t:
        return len(vertices) == 1
    adj = {v: set() for v in vertices}
    for _, u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    middle = [v for v in vertices if v not in (s, t)]
    for perm in itertools.permutations(middle):
        path = (s, *perm, t)
        if all(path[i + 1] in adj[path[i]] for i in range(len(path) - 1)):
            return True
    return False


def apply_reduction(graph: Graph, occ: ChordedSixCycle) -> tuple[Graph, ReductionRecord]:
    built = _build(graph, occ)
    if built is None:
        raise GraphError(f"reduction {occ.kind} does not apply to cycle {occ.cycle.vertices}")
    return built


def reduce_fully(graph: Graph) -> tuple[Graph, list[ReductionRecord]]:
    """Apply reductions until none applies; returns (reduced graph, trace)."""
    trace = []
    while True:
        occ = find_chorded_six_cycle(graph)
        if occ is None:
            return graph, trace
        graph, rec = apply_reduction(graph, occ)
        trace.append(rec)


def replay(graph: Graph, trace: Iterable[ReductionRecord]) -> Graph:
    for rec in trace:
        graph = rec.apply(graph)
    return graph


# ---------------------------------------------------------------------------
# lifting


@dataclass
class LiftInfo:
    kind: str
    cut_pattern: tuple[int, ...]
    chosen_boundary: tuple[int, ...]
    increment: int
    notes: list[str] = field(default_factory=list)


@lru_cache(maxsize=4096)
def _parity_table(removed: tuple[int, ...], internal: tuple[tuple[int, int, int], ...]):
    """Map parity signature over ``removed`` -> internal edge masks with that odd-degree pattern."""
    index = {v: i for i, v in enumerate(removed)}
    table: dict[int, list[int]] = {}
    for mask in range(1 << len(internal)):
        sig = 0
        cost = 0
        for j, (_, u, v) in enumerate(internal):
            if mask >> j & 1:
                sig ^= (1 << index[u]) ^ (1 << index[v])
                cost += 1
        table.setdefault(sig, []).append((cost, mask))
    for lst in table.values():
        lst.sort()
    return table


def lift_tour(tour: Tour, record: ReductionRecord, reduced: Graph) -> Tour:
    return lift_tour_with_info(tour, record, reduced)[0]


WINDOW_LIMIT = 14  # largest number of edges inside a re-solved window


def lift_tour_with_info(tour: Tour, record: ReductionRecord, reduced: Graph) -> tuple[Tour, LiftInfo]:
    """Shortest tour of the original graph that agrees with ``tour`` outside
    the removed region.

    Everything outside the region is kept; the boundary multiplicities and
    the multiplicities inside the region are chosen by exhaustive search
    (parity classes first, then the fewest doubled edges that connect).  If
    that exceeds the per-rule bound, growing windows around the region are
    re-solved the same way, starting from the lifted tour.
    """
    problems = tour_problems(reduced, tour.as_dict())
    if problems:
        raise GraphError(f"tour of the reduced graph is invalid: {problems}")
    counts = tour.as_dict()
    gadget = {e for e, _, _ in record.gadget_edges}
    bids = [e for e, _, _ in record.boundary]
    old_cut = tuple(counts.get(e, 0) for e in bids)
    if sum(old_cut) % 2:
        raise GraphError(f"odd tour multiplicity across the cut: {old_cut}")
    graph = record.expand(reduced)
    fixed = {e: k for e, k in counts.items() if e not in gadget and e not in bids and k}
    done = _complete(graph, fixed, record.removed, record.internal, record.boundary)
    if done is None:
        raise GraphError("no tour of the original graph extends the given tour")
    notes = []
    window = set(record.removed)
    while sum(done.values()) - tour.length > LIFT_BOUND[record.kind]:
        grown = window | {graph.other(e, v) for v in window for e in graph.incident(v)}
        internal = tuple(sorted((e, u, v) for e, (u, v) in graph.items() if u in grown and v in grown))
        if grown == window or len(internal) > WINDOW_LIMIT:
            notes.append(f"window of {len(window)} vertices could not meet the bound")
            break
        window = grown
        cut = tuple(_cut(graph, window))
        inner_edges = {e for e, _, _ in internal} | {e for e, _, _ in cut}
        kept = {e: k for e, k in done.items() if e not in inner_edges}
        better = _complete(graph, kept, tuple(sorted(window)), internal, cut)
        if better is not None and sum(better.values()) < sum(done.values()):
            done = better
            notes.append(f"re-solved a window of {len(window)} vertices")
    lifted = Tour.from_counts(done)
    y = tuple(done.get(e, 0) for e in bids)
    return lifted, LiftInfo(record.kind, old_cut, y, lifted.length - tour.length, notes)


def _complete(graph: Graph, fixed: dict[int, int], region: tuple[int, ...],
              internal: tuple[tuple[int, int, int], ...],
              cut: tuple[tuple[int, int, int], ...]) -> dict[int, int] | None:
    """Cheapest multiplicities on the region's internal and cut edges that
    turn ``fixed`` (edges away from the region) into a tour, or None."""
    ds = DisjointSet()
    deg: dict[int, int] = {}
    for e, k in fixed.items():
        u, v = graph.ends(e)
        for x in (u, v):
            ds.add(x)
            deg[x] = deg.get(x, 0) + k
        ds.union(u, v)
    for _, _, w in cut:
        ds.add(w)
    comp_label = {x: ds.find(x) for x in ds.parent}
    labels = sorted(set(comp_label.values()))
    lab_index = {lab: i for i, lab in enumerate(labels)}
    r_index = {v: len(labels) + i for i, v in enumerate(region)}
    node_count = len(labels) + len(region)
    table = _parity_table(region, internal)
    pos = {v: i for i, v in enumerate(region)}
    base = sum(fixed.values())

    best = None
    for y in itertools.product((0, 1, 2), repeat=len(cut)):
        ysum = sum(y)
        if best is not None and base + ysum >= best[0]:
            continue
        outer_deg = dict.fromkeys((w for _, _, w in cut), 0)
        for (_, _, w), k in zip(cut, y):
            outer_deg[w] += k
        if any((deg.get(w, 0) + d) % 2 or deg.get(w, 0) + d == 0 for w, d in outer_deg.items()):
            continue
        sig = 0
        y_at = dict.fromkeys(region, 0)
        for (_, inner, _), k in zip(cut, y):
            y_at[inner] += k
            if k % 2:
                sig ^= 1 << pos[inner]
        for odd_cost, mask in table.get(sig, []):
            if best is not None and base + ysum + odd_cost >= best[0]:
                break
            free = [j for j in range(len(internal)) if not mask >> j & 1]
            found = None
            for size in range(len(free) + 1):
                if best is not None and base + ysum + odd_cost + 2 * size >= best[0]:
                    break
                for dbl in itertools.combinations(free, size):
                    if _connects(y, cut, internal, mask, dbl, y_at, comp_label, lab_index, r_index, node_count):
                        found = dbl
                        break
                if found is not None:
                    break
            if found is not None:
                total = base + ysum + odd_cost + 2 * len(found)
                if best is None or total < best[0]:
                    best = (total, y, mask, found)
    if best is None:
        return None
    _, y, mask, dbl = best
    out = dict(fixed)
    for (e, _, _), k in zip(cut, y):
        if k:
            out[e] = k
    for j, (e, _, _) in enumerate(internal):
        if mask >> j & 1:
            out[e] = 1
        elif j in dbl:
            out[e] = 2
    return out


def _connects(y, cut, internal, mask, dbl, y_at, comp_label, lab_index, r_index, node_count) -> bool:
    parent = list(range(node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    covered = dict(y_at)
    for (_, inner, w), k in zip(cut, y):
        if k:
            parent[find(lab_index[comp_label[w]])] = find(r_index[inner])
    for j, (_, u, v) in enumerate(internal):
        if mask >> j & 1 or j in dbl:
            covered[u] += 1
            covered[v] += 1
            parent[find(r_index[u])] = find(r_index[v])
    if any(c == 0 for c in covered.values()):
        return False
    root = find(0)
    return all(find(x) == root for x in range(node_count))
