"""How large does a single R4 lift get, and when?

For every first reduction found on seeded random graphs that is an R4, lift an
optimal-length tour of the reduced graph back and tabulate the increment
against two features of the hexagon: whether its chord closes a triangle, and
whether the chosen pairing leaves a crossing attachment pair with no
Hamiltonian path.  With --opt also compare OPT(G) - OPT(H) by Held-Karp.

    python3 scripts/r4_lift_study.py --sizes 8 10 12 14 16 --seeds 25 --opt
"""

import argparse
from collections import Counter

from cubictsp.cover import best_tour
from cubictsp.graph import is_bridgeless
from cubictsp.oracle import held_karp_opt, random_cubic
from cubictsp.reducer import _bad_pairs, apply_reduction, find_chorded_six_cycle, lift_tour_with_info


def chord_is_short(graph, occ):
    """True when the chord joins vertices at distance 2 on the hexagon."""
    ring = occ.cycle.vertices
    u, v = graph.ends(occ.chords[0])
    d = abs(ring.index(u) - ring.index(v))
    return min(d, 6 - d) == 2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14, 16])
    ap.add_argument("--seeds", type=int, default=25)
    ap.add_argument("--opt", action="store_true", help="also compute OPT(G) - OPT(H) (n <= 18)")
    args = ap.parse_args()

    table = Counter()
    gaps = Counter()
    for n in args.sizes:
        for seed in range(args.seeds):
            g = random_cubic(n, seed).graph
            if not is_bridgeless(g):
                continue
            occ = find_chorded_six_cycle(g)
            if occ is None or occ.kind != "R4":
                continue
            reduced, rec = apply_reduction(g, occ)
            _, info = lift_tour_with_info(best_tour(reduced).tour, rec, reduced)
            table[(chord_is_short(g, occ), _bad_pairs(g, rec) > 0, info.increment)] += 1
            if args.opt and n <= 18:
                gaps[held_karp_opt(g) - held_karp_opt(reduced)] += 1
    print("(short chord, unpaired crossing, increment): count")
    for key, count in sorted(table.items()):
        print(f"  {key}: {count}")
    if gaps:
        print("OPT(G) - OPT(H):", dict(sorted(gaps.items())))


if __name__ == "__main__":
    main()
