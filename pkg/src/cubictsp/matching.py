"""Exact decomposition of (1/3) * chi^E into 3-cut perfect matchings.

All perfect matchings are enumerated, those meeting some 3-edge cut in more
than one edge are discarded, and a convex combination is found by an
integer-preserving phase-one simplex (exact, Bland's rule).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import EdgeCut, Graph, GraphError, enumerate_three_cuts

Matching = frozenset


@dataclass(frozen=True)
class MatchingDistribution:
    atoms: tuple[tuple[frozenset[int], Fraction], ...]

    @property
    def k(self) -> int:
        return len(self.atoms)

    @property
    def matchings(self) -> list[frozenset[int]]:
        return [m for m, _ in self.atoms]

    @property
    def weights(self) -> list[Fraction]:
        return [w for _, w in self.atoms]

    def to_json(self) -> list[dict]:
        return [{"edges": sorted(m), "lambda": _fmt(w)} for m, w in self.atoms]

    @classmethod
    def from_json(cls, rows: Iterable[dict]) -> "MatchingDistribution":
        return cls(tuple((frozenset(r["edges"]), Fraction(r["lambda"])) for r in rows))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def enumerate_perfect_matchings(graph: Graph) -> list[frozenset[int]]:
    """Every perfect matching, found by always matching the lowest free vertex.

    Edges are tried in ascending id order, so the output order is deterministic
    and parallel edges yield distinct matchings.
    """
    if graph.n % 2:
        return []
    order = graph.vertices
    free = set(order)
    chosen: list[int] = []
    out: list[frozenset[int]] = []

    def extend() -> None:
        if not free:
            out.append(frozenset(chosen))
            return
        v = min(free)
        for e in graph.incident(v):
            w = graph.other(e, v)
            if w in free:
                free.discard(v)
                free.discard(w)
                chosen.append(e)
                extend()
                chosen.pop()
                free.add(v)
                free.add(w)

    extend()
    return out


def filter_three_cut_perfect(matchings: Sequence[frozenset[int]], three_cuts: Iterable[EdgeCut]) -> list[frozenset[int]]:
    cuts = [c.edges for c in three_cuts]
    return [m for m in matchings if all(len(m & c) == 1 for c in cuts)]


# ---------------------------------------------------------------------------
# exact phase-one simplex


def _feasible_point(columns: list[frozenset[int]], rows: list[int], rhs: list[int]) -> dict[int, Fraction] | None:
    """Find x >= 0 with sum_{j : r in columns[j]} x_j = rhs[r] for every row r.

    Integer-preserving tableau: every entry is an integer and the true tableau
    is ``T / D``.  Artificial columns are dropped once they leave the basis.
    Returns column index -> value, or None if infeasible.
    """
    nrow = len(rows)
    ncol = len(columns)
    tab = [[1 if rows[i] in columns[j] else 0 for j in range(ncol)] + [rhs[i]] for i in range(nrow)]
    basis = [ncol + i for i in range(nrow)]  # artificial ids follow structural ids
    # phase-one objective: minimise the sum of artificials
    obj = [-sum(tab[i][j] for i in range(nrow)) for j in range(ncol)] + [-sum(rhs)]
    det = 1
    while True:
        enter = next((j for j in range(ncol) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(nrow):
            a = tab[i][enter]
            if a <= 0:
                continue
            if leave is None:
                leave = i
                continue
            b = tab[leave][enter]
            lhs, rhs_cmp = tab[i][-1] * b, tab[leave][-1] * a
            if lhs < rhs_cmp or (lhs == rhs_cmp and basis[i] < basis[leave]):
                leave = i
        if leave is None:  # unbounded cannot happen in phase one
            raise RuntimeError("phase-one simplex unbounded")
        piv_row = tab[leave]
        p = piv_row[enter]
        for i in range(nrow):
            if i == leave:
                continue
            row = tab[i]
            f = row[enter]
            if f == 0:
                tab[i] = [(p * x) // det for x in row]
            else:
                tab[i] = [(p * x - f * y) // det for x, y in zip(row, piv_row)]
        f = obj[enter]
        obj = [(p * x - f * y) // det for x, y in zip(obj, piv_row)]
        det = p
        basis[leave] = enter
    if obj[-1] != 0:
        return None
    sol = {}
    for i, j in enumerate(basis):
        if j < ncol and tab[i][-1] != 0:
            sol[j] = Fraction(tab[i][-1], det)
    return sol


def decompose_third(graph: Graph, *, prefer_uniform: bool = True) -> MatchingDistribution:
    """Write (1/3) chi^E as an exact convex combination of 3-cut perfect matchings.

    When every edge lies in exactly a third of the 3-cut perfect matchings and
    there are at most m + 1 of them, the uniform distribution is returned;
    otherwise a basic solution of the feasibility LP (support <= m + 1).
    """
    cuts = enumerate_three_cuts(graph)
    pms = filter_three_cut_perfect(enumerate_perfect_matchings(graph), cuts)
    if not pms:
        raise GraphError("no 3-cut perfect matching: input is not cubic and 2-connected")
    edges = list(graph.edge_ids)
    if prefer_uniform and len(pms) <= graph.m + 1:
        hits = {e: 0 for e in edges}
        for m in pms:
            for e in m:
                hits[e] += 1
        if all(3 * h == len(pms) for h in hits.values()):
            w = Fraction(1, len(pms))
            return MatchingDistribution(tuple((m, w) for m in pms))
    # rows: one per edge (value 1 for x = 3 lambda) plus the total-mass row (3)
    total = -1
    columns = [m | {total} for m in pms]
    rows = edges + [total]
    rhs = [1] * len(edges) + [3]
    sol = _feasible_point(columns, rows, rhs)
    if sol is None:
        raise GraphError("(1/3) chi^E is not in the 3-cut perfect matching polytope: "
                         "input is not cubic and 2-connected")
    return MatchingDistribution(tuple((pms[j], sol[j] / 3) for j in sorted(sol)))


def greedy_peel(graph: Graph, max_steps: int = 10_000) -> MatchingDistribution | None:
    """Experimental backend: repeatedly subtract the largest feasible multiple
    of a 3-cut perfect matching inside the support of the residual.

    Each step only accepts a weight that keeps the residual feasible (checked
    with the exact LP), so success is certified; returns None when stuck.
    """
    cuts = enumerate_three_cuts(graph)
    pms = filter_three_cut_perfect(enumerate_perfect_matchings(graph), cuts)
    residual = {e: Fraction(1, 3) for e in graph.edge_ids}
    mass = Fraction(1)
    atoms: list[tuple[frozenset[int], Fraction]] = []
    for _ in range(max_steps):
        if mass == 0:
            break
        progressed = False
        for m in pms:
            if any(residual[e] == 0 for e in m):
                continue
            step = min(residual[e] for e in m)
            # shrink until the rest stays decomposable
            for cand in (step, step / 2, step / 3):
                rest = {e: residual[e] - (cand if e in m else 0) for e in residual}
                rest_mass = mass - cand
                if rest_mass == 0:
                    ok = all(v == 0 for v in rest.values())
                else:
                    ok = _residual_feasible(pms, rest, rest_mass)
                if ok:
                    atoms.append((m, cand))
                    residual, mass = rest, rest_mass
                    progressed = True
                    break
            if progressed:
                break
        if not progressed:
            return None
    if mass != 0:
        return None
    merged: dict[frozenset[int], Fraction] = {}
    for m, w in atoms:
        merged[m] = merged.get(m, Fraction(0)) + w
    return MatchingDistribution(tuple(sorted(merged.items(), key=lambda a: sorted(a[0]))))


def _residual_feasible(pms, residual: dict[int, Fraction], mass: Fraction) -> bool:
    support = [m for m in pms if all(residual[e] > 0 for e in m)]
    if not support:
        return False
    scale = 1
    for v in list(residual.values()) + [mass]:
        scale = scale * v.denominator // _gcd(scale, v.denominator)
    total = -1
    edges = sorted(residual)
    columns = [m | {total} for m in support]
    rhs = [int(residual[e] * scale) for e in edges] + [int(mass * scale)]
    return _feasible_point(columns, edges + [total], rhs) is not None


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass
class DistributionReport:
    ok: bool
    problems: list[str] = field(default_factory=list)


def verify_distribution(graph: Graph, dist: MatchingDistribution) -> DistributionReport:
    """Check all four distribution invariants with exact arithmetic.

    3-cuts are re-derived here from scratch (every edge triple), independent of
    :func:`enumerate_three_cuts`.
    """
    problems = []
    cuts = _three_cuts_by_triples(graph)
    marginal = {e: Fraction(0) for e in graph.edge_ids}
    total = Fraction(0)
    for idx, (m, w) in enumerate(dist.atoms):
        if w <= 0:
            problems.append(f"atom {idx}: non-positive weight {w}")
        total += w
        covered: dict[int, int] = {}
        for e in m:
            if e not in marginal:
                problems.append(f"atom {idx}: unknown edge {e}")
                continue
            marginal[e] += w
            for v in graph.ends(e):
                covered[v] = covered.get(v, 0) + 1
        if any(covered.get(v, 0) != 1 for v in graph.vertices):
            problems.append(f"atom {idx}: not a perfect matching")
        for cut in cuts:
            if len(m & cut) != 1:
                problems.append(f"atom {idx}: meets 3-cut {sorted(cut)} in {len(m & cut)} edges")
                break
    if total != 1:
        problems.append(f"weights sum to {total}")
    bad = [e for e, x in marginal.items() if x != Fraction(1, 3)]
    if bad:
        problems.append(f"edge marginals differ from 1/3 on edges {bad}")
    return DistributionReport(not problems, problems)


def _three_cuts_by_triples(graph: Graph) -> list[frozenset[int]]:
    verts = graph.vertices
    eids = graph.edge_ids
    out = []
    for triple in itertools.combinations(eids, 3):
        removed = set(triple)
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in eids:
            if e not in removed:
                u, v = graph.ends(e)
                parent[find(u)] = find(v)
        roots = {find(v) for v in verts}
        if len(roots) == 2 and all(find(graph.ends(e)[0]) != find(graph.ends(e)[1]) for e in triple):
            out.append(frozenset(triple))
    return out
