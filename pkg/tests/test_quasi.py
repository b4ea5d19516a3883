import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlkit import quasi as qz
from nlkit.hypgraph import (
    GraphMap,
    all_distances,
    binary_tree,
    cycle_graph,
    left_spine,
    path_graph,
    rotation_map,
    shift_map,
)

Z = qz.integers()
BALL = range(-20, 21)


def test_defect_examples():
    pairs = list(itertools.product(BALL, BALL))
    assert qz.defect_estimate(qz.homomorphism_Z(), pairs, Z) == 0
    q = qz.parity_perturbed_Z()
    assert qz.defect_estimate(q, pairs, Z) == 2
    assert qz.defect_estimate(q, [(1, 1)], Z) == 2
    assert qz.defect_estimate(q, [], Z) == 0


def test_homogenize_examples():
    h = qz.homogenize_estimate(qz.homomorphism_Z(), 7, 13, Z)
    assert h.value == 7 and h.bracket_ok
    # exact value of q(1^100)/100 for q(k) = k + (k mod 2) is 100/100
    q = qz.parity_perturbed_Z()
    h = qz.homogenize_estimate(q, 1, 100, Z)
    assert h.value == F(1) and h.q_g == 2 and h.bracket_ok
    assert qz.homogenize_estimate(q, 0, 50, Z).value == 0
    with pytest.raises(ValueError):
        qz.homogenize_estimate(q, 1, 0, Z)


@given(st.integers(-40, 40), st.integers(1, 300))
def test_homogenize_bracket(g, N):
    q = qz.parity_perturbed_Z()
    assert qz.homogenize_estimate(q, g, N, Z, defect=2).bracket_ok


def test_busemann_examples():
    P = path_graph(101)
    ray = qz.RaySpec(P, tuple(range(101)))
    assert qz.busemann_estimate(ray, GraphMap.identity(101)).value == 0
    est = qz.busemann_estimate(ray, shift_map(101, 2))
    assert est.value == -2 and est.stable
    with pytest.raises(ValueError):
        qz.busemann_estimate(ray, shift_map(101, -2))
    with pytest.raises(ValueError):
        qz.busemann_estimate(qz.RaySpec(P, (0, 2, 3)), GraphMap.identity(101))


def test_busemann_on_tree_spine_matches_bfs():
    t = binary_tree(8)
    spine = left_spine(8)
    ray = qz.RaySpec(t, tuple(spine))
    # spine shift: pushes each spine vertex one step down, elsewhere undefined
    down = {v: w for v, w in zip(spine, spine[1:])}
    g = GraphMap.from_function(t.n, down.get)
    est = qz.busemann_estimate(ray, g)
    D = all_distances(t)
    x0, xN = spine[0], spine[-1]
    assert est.value == D[g(x0), xN] - D[x0, xN] == -1


def test_link_check_examples():
    P = path_graph(101)
    v = qz.loxodromic_link_check(qz.RaySpec(P, tuple(range(101))), shift_map(101, 2))
    assert abs(v.beta_hat) == 2 and v.ell_hat == 2 and v.classification == "LoxodromicCandidate" and v.consistent
    C = cycle_graph(12)
    v = qz.loxodromic_link_check(qz.RaySpec(C, tuple(range(7))), rotation_map(12, 1), n_max=24)
    assert v.ell_hat == 0 and v.classification == "EllipticCandidate" and v.consistent
    v = qz.loxodromic_link_check(qz.RaySpec(P, tuple(range(101))), GraphMap.identity(101))
    assert (v.beta_hat, v.ell_hat) == (0, 0) and v.consistent


def test_quasiline_example():
    r = qz.quasiline_generators(qz.homomorphism_Z(), Z, 3, 50)
    assert sorted(r.X) == [-2, -1, 1, 2]
    for k in range(-50, 51):
        assert r.word_length[k] == -(-abs(k) // 2)
    assert r.holds(2, 1, qz.homomorphism_Z())
    # symmetric under inversion
    assert all(r.word_length[k] == r.word_length[-k] for k in range(51))


def test_quasiline_rejections():
    zero = qz.Quasimorphism("0", lambda k: 0)
    with pytest.raises(qz.HypothesisError, match=r"\(0, C/2\)"):
        qz.quasiline_generators(zero, Z, 3, 10)
    with pytest.raises(qz.HypothesisError, match="defect"):
        qz.quasiline_generators(qz.parity_perturbed_Z(), Z, 3, 10)


def test_quasicocycle_examples():
    Dh = qz.dihedral()
    els = [(k, e) for k in range(-15, 16) for e in (1, -1)]
    pairs = list(itertools.product(els, els))
    assert qz.check_sign_homomorphism(qz.dihedral_sign, els, Dh)
    reg = qz.quasicocycle_extend(qz.translation_part(lambda k: k), qz.dihedral_sign, (0, -1), Dh)
    assert reg.defect(pairs, Dh) == 0
    beta = qz.translation_part(lambda k: k + k % 2)
    trans = [e for e in els if e[1] == 1]
    d_beta = qz.defect_estimate(beta, itertools.product(trans, trans), Dh)
    pert = qz.quasicocycle_extend(beta, qz.dihedral_sign, (0, -1), Dh)
    assert d_beta == 2 and pert.defect(pairs, Dh) <= 2 * d_beta
    assert all(pert.phi(t) == beta(t) for t in trans)
    zero = qz.quasicocycle_extend(qz.translation_part(lambda k: 0), qz.dihedral_sign, (0, -1), Dh)
    assert zero.defect(pairs, Dh) == 0 and all(zero.phi(g) == 0 for g in els)
    with pytest.raises(ValueError):
        qz.quasicocycle_extend(beta, qz.dihedral_sign, (3, 1), Dh)


def test_wreath_examples():
    W = qz.WreathModel(5, 2)
    rng = random.Random(0)
    pairs = qz.sample_pairs(W.random, rng, 1000)
    oracle = W.oracle()
    assert qz.defect_estimate(qz.wreath_lift(lambda a: a, W), pairs, oracle) == 0
    assert qz.defect_estimate(qz.wreath_lift(lambda a: a + a % 2, W), pairs, oracle) <= 10
    zero = qz.wreath_lift(lambda a: 0, W)
    assert all(zero(x) == 0 for x, _ in pairs)


def test_wreath_lift_exhaustive_small_tuples():
    W = qz.WreathModel(3, 1)
    oracle = W.oracle()
    elems = []
    for vals in itertools.product(range(-1, 2), repeat=3):
        f = tuple(sorted(((s, 0), a) for s, a in enumerate(vals) if a))
        for b in (-1, 0, 1):
            elems.append((f, b))
    pairs = list(itertools.product(elems, elems))
    assert qz.defect_estimate(qz.wreath_lift(lambda a: a, W), pairs, oracle) == 0
    assert qz.defect_estimate(qz.wreath_lift(lambda a: a + a % 2, W), pairs, oracle) <= 3 * 2


def test_wreath_lift_unbounded_along_a_lamp_ray():
    W = qz.WreathModel(5, 2)
    lift = qz.wreath_lift(lambda a: a, W)
    vals = [lift(W.oracle().power(W.lamp(0), n)) for n in range(0, 40, 10)]
    assert vals == [0, 10, 20, 30]


def test_wreath_model_is_a_group():
    W = qz.WreathModel(4, 2)
    rng = random.Random(1)
    for _ in range(200):
        x, y, z = W.random(rng), W.random(rng), W.random(rng)
        assert W.op(W.op(x, y), z) == W.op(x, W.op(y, z))
        assert W.op(x, W.inv(x)) == W.identity
