import itertools
import random
from fractions import Fraction as F

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlkit.hypgraph import (
    DisconnectedGraph,
    FiniteGraph,
    GraphMap,
    PreconditionError,
    all_distances,
    bfs_distances,
    binary_tree,
    cayley_ball,
    commuting_elliptic_bound,
    cone_off,
    cone_off_oracle,
    cycle_graph,
    delta_four_point,
    delta_oracle,
    format_edgelist,
    geodesic,
    grid_graph,
    is_quasiconvex,
    left_spine,
    parse_edgelist,
    path_graph,
    random_tree,
    reflection_map,
    rotation_map,
    shift_map,
    star_graph,
    to_dot,
    translation_length_estimate,
    verify_coneoff,
)


def tree_path_length(g, u, v):
    """Independent oracle: walk up parent pointers from a BFS rooted at 0."""
    parent = {0: None}
    order = [0]
    adj = g.adjacency()
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)

    def ancestors(x):
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out

    au, av = ancestors(u), ancestors(v)
    common = set(au) & set(av)
    return next(i for i, x in enumerate(au) if x in common) + next(i for i, x in enumerate(av) if x in common)


# --- distances ----------------------------------------------------------------


def test_distance_examples():
    assert all_distances(path_graph(2))[0, 1] == 1
    assert all_distances(path_graph(17))[0, 16] == 16
    t = random_tree(40, 3)
    D = all_distances(t)
    for u, v in itertools.combinations(range(40), 2):
        assert D[u, v] == tree_path_length(t, u, v)


def test_disconnected_rejected():
    with pytest.raises(DisconnectedGraph):
        all_distances(FiniteGraph(3, ((0, 1),)))


@given(st.integers(0, 10**6))
def test_distance_matrix_matches_bfs(seed):
    rng = random.Random(seed)
    g = random_tree(30, seed)
    extra = [(rng.randrange(30), rng.randrange(30)) for _ in range(5)]
    g = FiniteGraph(30, g.edges + tuple(e for e in extra if e[0] != e[1]))
    D = all_distances(g)
    for s in rng.sample(range(30), 5):
        assert list(D[s]) == bfs_distances(g, s)
    assert (D == D.T).all()
    i, j, k = rng.randrange(30), rng.randrange(30), rng.randrange(30)
    assert D[i, k] <= D[i, j] + D[j, k]


def test_geodesic_is_shortest():
    g = grid_graph(5, 6)
    D = all_distances(g)
    p = geodesic(g, 0, 29)
    assert p[0] == 0 and p[-1] == 29 and len(p) == D[0, 29] + 1
    assert all(D[a, b] == 1 for a, b in zip(p, p[1:]))


def test_edgelist_and_dot():
    g = cycle_graph(5)
    assert parse_edgelist(format_edgelist(g)) == g
    assert parse_edgelist("# c\n0 1\n1 2  # tail\n").n == 3
    with pytest.raises(ValueError, match="line 2"):
        parse_edgelist("0 1\n0 x\n")
    dot = to_dot(g, [(0, 1)])
    assert "0 -- 1 [style=dashed, color=red];" in dot and "1 -- 2;" in dot


def test_cayley_ball():
    g = cayley_ball([(1, 0, 2), (0, 2, 1)], 3)
    assert g.n == 6
    assert all_distances(g).max() == 3


# --- hyperbolicity -------------------------------------------------------------


def test_delta_examples():
    assert delta_four_point(cycle_graph(4)).delta == F(1, 2)
    D8 = all_distances(cycle_graph(8))
    assert delta_four_point(cycle_graph(8), D8).delta == delta_oracle(D8.tolist(), 8) == 1
    assert delta_four_point(star_graph(6)).delta == 0


def test_delta_on_random_trees():
    for seed in range(20):
        res = delta_four_point(random_tree(random.Random(seed).randint(4, 60), seed))
        assert res.delta == 0 and res.exact


@pytest.mark.parametrize("k", [5, 6, 7, 9, 10])
def test_delta_matches_oracle_on_cycles(k):
    D = all_distances(cycle_graph(k))
    assert delta_four_point(cycle_graph(k), D).delta == delta_oracle(D.tolist(), k)


def test_delta_sampled_above_threshold():
    res = delta_four_point(grid_graph(8, 9), samples=20000, seed=1)
    assert not res.exact and res.quadruples == 20000
    assert res.delta <= delta_four_point(grid_graph(8, 9), exact_limit=100).delta


# --- quasiconvexity ------------------------------------------------------------


def test_quasiconvex_examples():
    g = star_graph(5)
    assert is_quasiconvex(g, range(6), 0)
    t = binary_tree(4)
    assert is_quasiconvex(t, left_spine(4), 0)
    assert not is_quasiconvex(g, [1, 2], 0)
    assert is_quasiconvex(g, [1, 2], 1)


# --- cone-off ------------------------------------------------------------------


def test_coneoff_examples():
    p = path_graph(10)
    assert cone_off(p, [0], 20).new_edges == ()
    assert cone_off(p, list(range(10)), 0).new_edges == ()
    P40 = path_graph(40)
    for R in (1, 2, 3, 5):
        assert set(cone_off(P40, [0], R).new_edges) == cone_off_oracle(P40, [0], R)


def test_coneoff_matches_oracle_on_cycles_and_grids():
    for g, orbit in [(cycle_graph(14), [0]), (grid_graph(4, 5), [0, 19]), (binary_tree(3), [0])]:
        for R in range(0, 3):
            assert set(cone_off(g, orbit, R).new_edges) == cone_off_oracle(g, orbit, R)


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_coneoff_lipschitz_monotone_and_subsegments(seed, R):
    rng = random.Random(seed)
    g = random_tree(25, seed)
    u = rng.randrange(25)
    g = FiniteGraph(25, g.edges + ((u, (u + rng.randrange(1, 25)) % 25),))
    orbit = [rng.randrange(25)]
    D = all_distances(g)
    co, co2 = cone_off(g, orbit, R, D), cone_off(g, orbit, R + 1, D)
    assert (all_distances(co.graph) <= D).all()
    assert set(co2.new_edges) <= set(co.new_edges)
    new = set(co.new_edges)
    H = g.to_networkx().subgraph([v for v in range(25) if v not in co.neighbourhood])
    for u, v in new:
        for a, b in itertools.combinations(nx.shortest_path(H, u, v), 2):
            assert D[a, b] < 2 or (min(a, b), max(a, b)) in new


def test_coneoff_equivariance():
    g = cycle_graph(12)
    rot = rotation_map(12, 3)
    orbit = [0, 3, 6, 9]
    new = set(cone_off(g, orbit, 0).new_edges)
    moved = {tuple(sorted((rot(u), rot(v)))) for u, v in new}
    assert moved == new


def test_verify_coneoff_tree_spine():
    t = binary_tree(10)
    spine = left_spine(10)
    rep = verify_coneoff(t, spine, 3, spine, Q=0, samples=40)
    assert rep.lipschitz and rep.K == 1.0 and rep.distortion == 1.0 and rep.hausdorff == 0
    assert rep.precondition


def test_verify_coneoff_trivial_and_preconditions():
    p = path_graph(8)
    rep = verify_coneoff(p, [0], 20, [0, 3, 7])
    assert rep.new_edges == 0 and rep.distortion == 1.0 and rep.hausdorff == 0
    t = binary_tree(6)
    spine = left_spine(6)
    weak = verify_coneoff(t, spine, 0, spine, Q=0)
    assert not weak.precondition and weak.notes
    with pytest.raises(PreconditionError):
        verify_coneoff(t, spine, 0, spine, Q=0, strict=True)
    with pytest.raises(PreconditionError):
        verify_coneoff(star_graph(4), [1, 2], 3, [1, 2], Q=0)


def test_hausdorff_regression_is_seed_stable():
    t = binary_tree(7)
    spine = left_spine(7)
    vals = {verify_coneoff(t, spine, 2, spine, samples=10, seed=s).hausdorff for s in range(4)}
    assert vals == {0}


# --- isometry types -----------------------------------------------------------------


def test_translation_examples():
    g = cycle_graph(12)
    D = all_distances(g)
    est = translation_length_estimate(GraphMap.identity(12), 0, 20, D)
    assert est.ell_hat == 0 and est.classification == "EllipticCandidate"
    est = translation_length_estimate(rotation_map(12, 5), 0, 30, D)
    assert est.classification == "EllipticCandidate"
    P = path_graph(200)
    est = translation_length_estimate(shift_map(200, 2), 0, 50, all_distances(P))
    assert est.ell_hat == 2 and est.classification == "LoxodromicCandidate" and est.sequence[-1] == 100


def test_translation_truncates():
    P = path_graph(20)
    est = translation_length_estimate(shift_map(20, 3), 0, 50, all_distances(P))
    assert est.truncated and len(est.sequence) == 6


def test_commuting_elliptic_examples():
    p = path_graph(9)
    D = all_distances(p)
    ident = GraphMap.identity(9)
    assert commuting_elliptic_bound([ident], [ident], 4, D).diameter == 0
    g = grid_graph(5, 7)
    Dg = all_distances(g)
    flip_rows = GraphMap.from_function(35, lambda v: (4 - v // 7) * 7 + v % 7)
    flip_cols = GraphMap.from_function(35, lambda v: (v // 7) * 7 + 6 - v % 7)
    res = commuting_elliptic_bound([flip_rows], [flip_cols], 0, Dg)
    assert res.holds and res.M == 4 and res.N == 6 and res.diameter == 10
    c = cycle_graph(10)
    res = commuting_elliptic_bound([rotation_map(10, 1)], [GraphMap.identity(10)], 0, all_distances(c))
    assert res.N == 0 and res.diameter == res.M
    with pytest.raises(ValueError):
        commuting_elliptic_bound([rotation_map(10, 1)], [reflection_map(10)], 0, all_distances(c))


def test_graph_map_algebra():
    r = rotation_map(8, 3)
    assert (r * r.inverse()) == GraphMap.identity(8)
    assert r.is_isometric(all_distances(cycle_graph(8)))
    s = shift_map(8, 2)
    assert not s.total and s.is_isometric(all_distances(path_graph(8)))
    assert np.array_equal(np.array(s.image[:6]), np.arange(2, 8))
