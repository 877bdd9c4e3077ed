"""Cycle counts and tour lengths of the face-alternation algorithm on planar
bipartite cubic instances, against the (5n+14)/36 and (23n-22)/18 bounds.

    python3 scripts/barnette_sweep.py --max-k 20
"""

import argparse
import time
from fractions import Fraction

from cubictsp.barnette import barnette_tour, cycle_count_bound, tour_length_bound
from cubictsp.oracle import cube, even_prism, truncated_cuboctahedron, truncated_octahedron


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-k", type=int, default=10, help="largest prism order")
    args = ap.parse_args()

    insts = [cube(), truncated_octahedron(), truncated_cuboctahedron()]
    insts += [even_prism(k) for k in range(2, args.max_k + 1)]
    print(f"{'instance':<24}{'n':>5}{'cycles':>8}{'cap':>9}{'|T|':>6}{'bound':>9}{'audit':>7}{'secs':>7}")
    for inst in insts:
        n = inst.graph.n
        start = time.perf_counter()
        res = barnette_tour(inst.graph, inst.rotation)
        secs = time.perf_counter() - start
        ok = res.cycles <= cycle_count_bound(n) and res.tour.length <= tour_length_bound(n)
        print(f"{inst.name:<24}{n:>5}{res.cycles:>8}{float(cycle_count_bound(n)):>9.2f}"
              f"{res.tour.length:>6}{float(tour_length_bound(n)):>9.2f}"
              f"{'ok' if ok and res.audit.ok else 'FAIL':>7}{secs:>7.2f}")
    print(f"ratio bound (23n-22)/18n -> {float(Fraction(23, 18)):.4f}")


if __name__ == "__main__":
    main()
