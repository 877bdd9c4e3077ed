import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubictsp.barnette import faces_from_rotation
from cubictsp.cover import hamiltonian_cycle
from cubictsp.general import subtour_lower_bound
from cubictsp.graph import format_edge_list, is_bridgeless, validate
from cubictsp.oracle import (cube, even_prism, generate, held_karp_opt, k4, metric_closure,
                             permutation_opt, petersen, random_cubic, random_cubic_bridged, spliced_hexagon,
                             truncated_octahedron, verify_cover, verify_tour)


@pytest.mark.parametrize("inst, opt", [(k4(), 4), (cube(), 8), (petersen(), 11)])
def test_held_karp_examples(inst, opt):
    assert held_karp_opt(inst.graph) == opt


def test_held_karp_size_limit():
    with pytest.raises(ValueError):
        held_karp_opt(random_cubic(20, 0).graph)


def test_metric_closure_is_a_metric():
    d = metric_closure(petersen().graph)
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    n = len(d)
    for k in range(n):
        assert (d <= d[:, [k]] + d[[k], :]).all()
    assert d.max() == 2  # Petersen has diameter 2


def test_verify_tour_examples():
    g = k4().graph
    ham = [e for e in g.edge_ids if set(g.ends(e)) in ({0, 1}, {1, 2}, {2, 3}, {0, 3})]
    assert len(ham) == 4
    assert verify_tour(g, {e: 1 for e in ham})
    assert not verify_tour(g, {ham[0]: 1})  # odd degree
    assert not verify_tour(g, {e: 3 if i == 0 else 1 for i, e in enumerate(ham)})


def test_verify_cover_examples():
    g = cube().graph
    ham = hamiltonian_cycle(g)
    assert verify_cover(g, [(g.vertices, {e: 1 for e in ham})])
    assert not verify_cover(g, [(g.vertices, {ham[0]: 3})])
    halves = [set(g.ends(ham[0])), set(g.vertices) - set(g.ends(ham[0]))]
    assert not verify_cover(g, [(halves[0], {ham[0]: 2}), (halves[1], {})])  # 6 vertices, no edges


def test_generator_examples():
    c = even_prism(2)
    assert c.graph.n == 8 and len(faces_from_rotation(c.graph, c.rotation)) == 6
    t = truncated_octahedron()
    faces = faces_from_rotation(t.graph, t.rotation)
    sizes = sorted(len(f) for f in faces.face_edges)
    assert t.graph.n == 24 and sizes == [4] * 6 + [6] * 8
    import networkx as nx
    assert nx.is_bipartite(nx.Graph(t.graph.pairs()))


def test_random_cubic_reproducible():
    a = random_cubic(20, seed=1).graph
    b = random_cubic(20, seed=1).graph
    assert format_edge_list(a) == format_edge_list(b)
    assert format_edge_list(a) != format_edge_list(random_cubic(20, seed=2).graph)
    with pytest.raises(ValueError):
        random_cubic(9, 0)


def test_generate_dispatch():
    assert generate("even_prism", k=3).graph.n == 12
    assert generate("random_cubic", seed=4, n=10).graph.n == 10
    assert generate("petersen").graph.n == 10
    with pytest.raises(ValueError):
        generate("dodecahedron")


@pytest.mark.parametrize("rule", ["R1", "R2", "R3", "R4"])
def test_spliced_hexagon_contains_its_structure(rule):
    from cubictsp.reducer import chorded_six_cycles
    for seed in range(5):
        g = spliced_hexagon(rule, seed).graph
        assert validate(g).ok and is_bridgeless(g)
        assert rule in {occ.kind for _, occ in chorded_six_cycles(g) if occ}
    with pytest.raises(ValueError):
        spliced_hexagon("R5")


def test_held_karp_at_least_lower_bound():
    for seed in range(6):
        for n, b in ((12, 1), (16, 2)):
            g = random_cubic_bridged(n, b, seed).graph
            assert held_karp_opt(g) >= subtour_lower_bound(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5_000))
def test_held_karp_matches_permutations(seed):
    rng = random.Random(seed)
    n = rng.choice([4, 6, 8])
    g = random_cubic(n, seed).graph
    assert held_karp_opt(g) == permutation_opt(g)
