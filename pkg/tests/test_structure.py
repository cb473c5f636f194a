import pytest

from trihc.constructions import CE10_HUB, CE10_RIM, all_triangulations, ce10, stacked
from trihc.plane import TriangulationError, subdivide_face
from trihc.structure import (
    chordless_separating_quadrangles,
    find_common_separating_edge,
    is_4_connected,
    is_reducible_edge,
    reducible_edges,
    scattering_certificate_not_hc,
    scattering_lower_bound,
    separating_triangle_count,
    separating_triangles,
    triangles,
)

from oracles import (
    brute_chordless_separating_quadrangles,
    brute_reducible,
    brute_triangles,
    components_after_removal,
    to_nx,
)


def test_k4_has_no_separating_triangle(K4):
    assert separating_triangles(K4) == []


def test_b3_single_rim_triangle(B3):
    assert len(triangles(B3)) == 7
    (s,) = separating_triangles(B3)
    assert s.vertices == (0, 1, 2)
    assert {s.inside, s.outside} == {frozenset({3}), frozenset({4})}


def test_ce10_four_hub_triangles():
    g = ce10()
    got = {s.vertices for s in separating_triangles(g)}
    r = CE10_RIM
    want = {tuple(sorted((CE10_HUB, r[k], r[(k + 1) % 4]))) for k in range(4)}
    assert got == want


def test_separating_triangle_sides_are_connected_and_split():
    for g in all_triangulations(9):
        G = to_nx(g)
        for s in separating_triangles(g):
            assert s.inside and s.outside
            assert s.inside | s.outside | set(s.vertices) == set(range(g.n))
            for side in (s.inside, s.outside):
                import networkx as nx

                assert nx.is_connected(G.subgraph(side))
            assert not any(G.has_edge(a, b) for a in s.inside for b in s.outside)


def test_separating_triangles_match_brute_force_n_le_9():
    for g in all_triangulations(9):
        _, seps = brute_triangles(g)
        got = [s.vertices for s in separating_triangles(g)]
        assert got == seps
        assert separating_triangle_count(g) == len(seps)


def test_is_4_connected(K4, B3, octa):
    assert is_4_connected(octa)
    assert not is_4_connected(B3)
    assert not is_4_connected(K4)


def test_quadrangles(octa, icosa, K4):
    assert len(chordless_separating_quadrangles(octa)) == 3
    assert chordless_separating_quadrangles(icosa) == []
    assert chordless_separating_quadrangles(K4) == []


def test_quadrangles_match_brute_force_n_le_8():
    for g in all_triangulations(8):
        got = {frozenset(frozenset({q[i], q[(i + 1) % 4]}) for i in range(4)) for q in chordless_separating_quadrangles(g)}
        assert got == brute_chordless_separating_quadrangles(g)


def test_reducible_examples(octa, icosa, B3):
    assert all(is_reducible_edge(icosa, u, v) for u, v in icosa.edges())
    assert not any(is_reducible_edge(octa, u, v) for u, v in octa.edges())
    assert not any(is_reducible_edge(B3, u, v) for u, v in [(0, 1), (1, 2), (0, 2)])
    assert all(is_reducible_edge(B3, a, r) for a in (3, 4) for r in range(3))
    with pytest.raises(TriangulationError):
        is_reducible_edge(octa, 0, 2)


def test_reducible_matches_brute_force_n_le_9():
    for g in all_triangulations(9):
        red = reducible_edges(g)
        for u, v in g.edges():
            expect = brute_reducible(g, u, v)
            assert ((u, v) in red) == expect
            assert is_reducible_edge(g, u, v) == expect


def test_common_edge_examples(B3, octa):
    assert find_common_separating_edge(B3) == (0, 1)
    assert find_common_separating_edge(ce10()) is None
    assert find_common_separating_edge(octa) == (0, 1)


def test_common_edge_two_triangles_sharing_edge(K4):
    # both faces incident to edge 0-1 of K4 get a vertex
    u, v = 0, 1
    w1, w2 = K4.apexes(u, v)
    g = subdivide_face(K4, (u, v, w1), K4, (0, 1, 2))
    g = subdivide_face(g, (u, v, w2), K4, (0, 1, 2))
    seps = separating_triangles(g)
    assert len(seps) == 2
    assert all(u in s.vertices and v in s.vertices for s in seps)
    assert find_common_separating_edge(g) == (u, v)


def test_scattering_lower_bound_examples(K4, octa):
    w = scattering_lower_bound(ce10(), {CE10_HUB, *CE10_RIM})
    assert (w.components, w.bound) == (5, 0)
    w = scattering_lower_bound(K4, range(4))
    assert (w.components, w.bound) == (0, -4)
    w = scattering_lower_bound(octa, {0, 1, 2, 3})
    assert (w.components, w.bound) == (2, -2)
    assert scattering_lower_bound(octa, {0}) is None


def test_scattering_only_whole_vertex_set_for_k4(K4):
    from itertools import combinations

    hits = [X for r in range(5) for X in combinations(range(4), r) if scattering_lower_bound(K4, X) is not None]
    assert hits == [(0, 1, 2, 3)]


def test_scattering_certificate(octa, B3):
    w = scattering_certificate_not_hc(ce10(), max_subset=5)
    assert w is not None and w.bound >= 0
    assert components_after_removal(ce10(), w.X) == w.components
    assert scattering_certificate_not_hc(octa, max_subset=6) is None
    assert scattering_certificate_not_hc(B3, max_subset=5) is None


def test_stacked_two_has_path_of_septri():
    assert separating_triangle_count(stacked(2)) == 2
