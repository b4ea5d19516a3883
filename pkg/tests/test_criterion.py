import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlkit.cantor import Arity, ClopenSet, Cylinder, is_subset, tuple_admissible
from nlkit.criterion import (
    Inconclusive,
    ResidueMismatch,
    VFamily,
    agrees_on_arc,
    brin_thompson,
    build_cover_A,
    circle_glue,
    circle_ordered_witness,
    decompose_A,
    extremely_proximal_witness,
    fixes_pointwise,
    glue,
    property2_witness,
    property3_witness,
    random_B,
    run_criterion_suite,
    sample_A,
    symmetric_twisted,
    transitivity_witness,
    weak_triple_witness,
)
from nlkit.criterion import circle as cw
from nlkit.criterion.families import random_tuple
from nlkit.criterion.witnesses import agrees_on
from nlkit.elements import CircleMap, VElement, rotation
from nlkit.elements import circle as ce
from nlkit.points import sample_points

B = Arity(2, 1)
FAM = VFamily(B)


def S(*words, arity=B):
    return ClopenSet(arity, [(0, w) for w in words])


def V(*pairs):
    return VElement(B, [(Cylinder(0, d), Cylinder(0, c)) for d, c in pairs])


SWAP = V(("0", "1"), ("1", "0"))
X0 = V(("00", "0"), ("01", "10"), ("1", "11"))
ID = VElement.identity(B)


# --- transitivity ---------------------------------------------------------


def test_transitivity_examples():
    src = (S("00"), S("01"))
    assert transitivity_witness(src, src).is_identity
    dst = (S("10"), S("110"))
    g = transitivity_witness(src, dst)
    assert [g.image(a) for a in src] == list(dst)


def test_transitivity_rejects_bad_tuples():
    with pytest.raises(ValueError):
        transitivity_witness((S("0"), S("1")), (S("00"), S("01")))
    with pytest.raises(ValueError):
        transitivity_witness((S("0"),), (S("00"), S("01")))


def test_transitivity_random_4_tuples():
    rng = random.Random(0)
    for _ in range(100):
        src, sizes = random_tuple(FAM, rng, 4, depth=4)
        dst, _ = random_tuple(FAM, rng, 4, depth=4, sizes=sizes)
        g = transitivity_witness(src, dst)
        assert all(g.image(a) == b for a, b in zip(src, dst))


def test_residue_obstruction_for_ternary():
    T = Arity(3, 1)
    # one cylinder versus two: piece counts differ modulo 2, no element can match them
    with pytest.raises(ResidueMismatch):
        transitivity_witness((S("0", arity=T),), (S("0", "1", arity=T),))


@given(st.integers(0, 10**6))
def test_back_and_forth_fixes_sets(seed):
    rng = random.Random(seed)
    src, sizes = random_tuple(FAM, rng, 2)
    dst, _ = random_tuple(FAM, rng, 2, sizes=sizes)
    g = transitivity_witness(src, dst)
    h = transitivity_witness(dst, src)
    assert all((h * g).image(a) == a for a in src)


@given(st.integers(0, 10**6))
def test_conjugation_covariance(seed):
    rng = random.Random(seed)
    src, sizes = random_tuple(FAM, rng, 2)
    dst, _ = random_tuple(FAM, rng, 2, sizes=sizes)
    g = transitivity_witness(src, dst)
    t = FAM.random_element(rng)
    tg = t * g * t.inverse()
    assert all(tg.image(t.image(a)) == t.image(b) for a, b in zip(src, dst))


# --- glue -------------------------------------------------------------------


def test_glue_examples():
    assert glue([(S("0"), ID), (S("1"), ID)]).is_identity
    g = V(("00", "01"), ("01", "00"), ("1", "1"))
    b = glue([(S("0"), g)])
    assert agrees_on(b, g, S("0"), 30)
    assert fixes_pointwise(b, S("1"))


def test_glue_rejects_overlap_and_non_invariant():
    with pytest.raises(ValueError):
        glue([(S("0"), ID), (S("00"), ID)])
    with pytest.raises(ValueError):
        glue([(S("0"), SWAP)])


def test_glue_agrees_on_subcylinders():
    rng = random.Random(4)
    for _ in range(20):
        (I, J, K), _ = random_tuple(FAM, rng, 3)
        r = FAM.random_element(rng)
        g = transitivity_witness((r.image(I),), (I,)) * r
        b = glue([(I, g)])
        for c in I.cylinders:
            for w in ["", "0", "1", "00", "01", "10", "11"]:
                sub = ClopenSet(B, [(c.root, c.word + w)])
                assert b.image(sub) == g.image(sub)
        assert len(sample_points(I, 30)) == 30 and agrees_on(b, g, I, 30)
        assert fixes_pointwise(b, J) and fixes_pointwise(b, K)


# --- weak triples, cover, bounded generation ----------------------------------


def test_weak_triple_examples():
    wt = weak_triple_witness(ID, ID)
    assert tuple_admissible((wt.M, wt.N, wt.P)) and wt.b.image(wt.P) == wt.P
    wt = weak_triple_witness(SWAP, ID)
    assert (wt.b * SWAP).image(wt.M) == wt.M and wt.b.image(wt.N) == wt.N
    assert tuple_admissible((SWAP.image(wt.M), wt.N, wt.P))


def test_weak_triple_inconclusive_is_reported():
    with pytest.raises(Inconclusive):
        weak_triple_witness(SWAP, X0, max_depth=0)


def test_cover_examples():
    cover = build_cover_A(FAM)
    assert cover.sets == tuple(S(w) for w in ["00", "01", "10", "11"])
    assert cover.check()
    t = build_cover_A(VFamily(Arity(3, 1)))
    assert len(t.sets) == 3 and t.check()
    assert build_cover_A(brin_thompson(2)).check()


def test_decompose_examples():
    cover = build_cover_A(FAM)
    assert decompose_A(ID, cover) == [ID]
    fs = decompose_A(SWAP, cover)
    assert len(fs) == 3 and fs[0] * fs[1] * fs[2] == SWAP


@pytest.mark.parametrize("fam", [FAM, VFamily(Arity(3, 2)), brin_thompson(2), symmetric_twisted(3)], ids=repr)
def test_decompose_random(fam):
    cover = build_cover_A(fam)
    rng = random.Random(11)
    for _ in range(20):
        g = fam.random_element(rng)
        fs = decompose_A(g, cover, fam)
        prod = fs[0]
        for f in fs[1:]:
            prod = prod * f
        assert len(fs) <= 3 and prod == g
        assert all(any(fixes_pointwise(f, s) for s in cover.sets) for f in fs)


# --- properties (2) and (3) --------------------------------------------------


def test_property2_examples():
    ch = property2_witness(ID, ID)
    assert ch.g.is_identity and ch.h.is_identity and all(ch.checks.values())
    b1 = V(("00", "01"), ("01", "00"), ("1", "1"))
    b2 = V(("0", "0"), ("10", "11"), ("11", "10"))
    ch = property2_witness(b1, b2)
    assert all(ch.checks.values())
    with pytest.raises(ValueError):
        property2_witness(SWAP, b1)


def test_property2_random():
    rng = random.Random(2)
    for _ in range(20):
        ch = property2_witness(random_B(FAM, rng), random_B(FAM, rng), FAM)
        assert all(ch.checks.values())


def test_property3_examples():
    cover = build_cover_A(FAM)
    rng = random.Random(3)
    sa = [sample_A(FAM, cover, rng) for _ in range(10)]
    res = property3_witness(ID, ID, cover, sa)
    assert res.ok
    res = property3_witness(SWAP, X0, cover, sa)
    assert sum(len(c["verdicts"]) for c in res.checks) == 30 and res.ok
    for a, U in sa:
        assert fixes_pointwise(a, U)


# --- proximality and condition (C) -------------------------------------------


def test_proximality_examples():
    assert extremely_proximal_witness(S("00"), S("0")).is_identity
    u, v = S("0", "10"), S("111")
    f = extremely_proximal_witness(u, v)
    assert is_subset(f.image(u), v)
    with pytest.raises(ValueError):
        extremely_proximal_witness(S(""), v)


def test_proximality_ternary_residues():
    T = VFamily(Arity(3, 1))
    u = S("0", "1", arity=Arity(3, 1))
    v = S("22", arity=Arity(3, 1))
    f = extremely_proximal_witness(u, v, T)
    assert is_subset(f.image(u), v)


def test_condition_C():
    from nlkit.criterion.suite import check_condition_C
    from nlkit.criterion.witnesses import condition_C

    ok, J = condition_C(S("0", "10"))
    assert ok and J == S("11")
    for fam in [FAM, VFamily(Arity(3, 1)), brin_thompson(2)]:
        rep = check_condition_C(fam)
        assert rep.verdict == "pass" and rep.witnesses["sets_checked"] == 2 ** rep.inputs["cells"] - 2


# --- the circle -----------------------------------------------------------------


def test_circle_transitivity_examples():
    src = [F(0), F(1, 2)]
    assert circle_ordered_witness(src, src).is_identity
    f = circle_ordered_witness([F(0), F(1, 2)], [F(1, 4), F(3, 4)])
    assert f == rotation(F(1, 4))
    src, dst = [F(0), F(1, 4), F(1, 2)], [F(0), F(1, 8), F(3, 4)]
    f = circle_ordered_witness(src, dst)
    assert [ce.circle_eval(f, x) for x in src] == dst


def test_circle_transitivity_rejects():
    with pytest.raises(ValueError):
        circle_ordered_witness([F(0), F(1, 2), F(1, 4)], [F(0), F(1, 4), F(1, 2)])
    with pytest.raises(ValueError):
        circle_ordered_witness([F(1, 3)], [F(0)])


def test_circle_glue_examples():
    ident = CircleMap.identity()
    assert circle_glue([(F(0), ident), (F(1, 2), ident)]).is_identity
    bump = cw.random_arc_map(F(1, 4), F(1, 2), random.Random(0))
    f = circle_glue([(F(1, 4), bump), (F(1, 2), ident)])
    assert agrees_on_arc(f, bump, F(1, 4), F(1, 2)) and agrees_on_arc(f, ident, F(1, 2), F(5, 4))
    with pytest.raises(ValueError):
        circle_glue([(F(0), rotation(F(1, 8))), (F(1, 2), ident)])


def test_circle_weak_triple():
    rng = random.Random(5)
    for _ in range(10):
        g, h = ce.random_element(rng, 8), ce.random_element(rng, 8)
        M, N, P, b = cw.weak_triple_circle(g, h)
        assert cw.arcs_admissible([M, N, P])
        bg = b * g
        assert (bg(M[0]), bg(M[1])) == M and (b(P[0]), b(P[1])) == P


# --- suite ------------------------------------------------------------------------


def test_suite_budget_zero_is_empty():
    assert run_criterion_suite(FAM, 0)["items"] == []
    assert run_criterion_suite("T", 0)["items"] == []


@pytest.mark.parametrize("fam", [VFamily(Arity(3, 2)), brin_thompson(2), symmetric_twisted(3), "T"], ids=str)
def test_suite_small_budgets(fam):
    rep = run_criterion_suite(fam, 8, seed=1)
    for c in rep["counts"].values():
        assert c["fail"] == 0 and c["inconclusive"] == 0


def test_suite_is_deterministic():
    a = run_criterion_suite(FAM, 5, seed=9)
    b = run_criterion_suite(FAM, 5, seed=9)
    assert a == b
