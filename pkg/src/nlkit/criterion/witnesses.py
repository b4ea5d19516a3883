"""Witness constructions for the dynamical criterion on Cantor-set families.

Every builder verifies its output with exact set and element operations
before returning it; failures raise :class:`WitnessError`.
"""

from __future__ import annotations

import random
from bisect import insort
from dataclasses import dataclass, field
from typing import Sequence

from ..cantor import complement, is_disjoint, is_subset, tuple_admissible, union
from ..elements import conjugate
from ..points import sample_points
from .families import family_of, random_proper_set, residue, small_set


class WitnessError(RuntimeError):
    """A constructed witness failed its own verification (never expected)."""


class ResidueMismatch(ValueError):
    """No element maps one set to the other: piece counts differ modulo ``n - 1``."""


class Inconclusive(Exception):
    """The bounded search ran out without finding a witness."""


def _union_all(fam, sets):
    acc = fam.empty()
    for s in sets:
        acc = union(acc, s)
    return acc


def _refine_to(fam, pieces: list, k: int) -> list:
    pieces = sorted(pieces)
    while len(pieces) < k:
        head = pieces.pop(0)
        for kid in fam.refine(head):
            insort(pieces, kid)
    return pieces


# --------------------------------------------------------------------------
# transitivity


def transitivity_witness(src: Sequence, dst: Sequence, family=None):
    """Element ``g`` with ``g src[i] = dst[i]`` for every ``i``.

    Both tuples together with their leftover complements are refined so that
    matching entries have equally many pieces, which are then matched in
    lexicographic order.
    """
    src, dst = tuple(src), tuple(dst)
    if len(src) != len(dst) or not src:
        raise ValueError("tuples must be nonempty and of equal length")
    if not tuple_admissible(src) or not tuple_admissible(dst):
        raise ValueError("inadmissible tuple: entries must be proper, disjoint, with non-full union")
    fam = family or family_of(src[0])
    groups_src = list(src) + [complement(_union_all(fam, src))]
    groups_dst = list(dst) + [complement(_union_all(fam, dst))]
    m = fam.modulus
    triples = []
    for a, b in zip(groups_src, groups_dst):
        pa, pb = list(fam.pieces(a)), list(fam.pieces(b))
        if (len(pa) - len(pb)) % m:
            raise ResidueMismatch(f"{a} and {b} have piece counts {len(pa)} and {len(pb)}, not congruent mod {m}")
        k = max(len(pa), len(pb))
        triples.extend((x, y, None) for x, y in zip(_refine_to(fam, pa, k), _refine_to(fam, pb, k)))
    g = fam.make(triples)
    for a, b in zip(src, dst):
        if g.image(a) != b:
            raise WitnessError(f"transitivity witness sends {a} to {g.image(a)}, not {b}")
    return g


# --------------------------------------------------------------------------
# gluing


def glue(pieces: Sequence[tuple], family=None):
    """Element agreeing with each ``g`` on its clopen set ``S`` and the identity elsewhere.

    Each ``S`` must satisfy ``g S = S`` and the sets must be pairwise disjoint.
    """
    pieces = list(pieces)
    if not pieces:
        if family is None:
            raise ValueError("cannot infer the family of an empty gluing")
        return family.identity()
    fam = family or family_of(pieces[0][1])
    for i, (s, g) in enumerate(pieces):
        if not fam.owns(g) or not fam.owns(s):
            raise ValueError("piece and element belong to a different family")
        if g.image(s) != s:
            raise ValueError(f"piece {i} is not invariant under its element")
        for t, _ in pieces[:i]:
            if not is_disjoint(s, t):
                raise ValueError("glued pieces overlap")
    triples = []
    for s, g in pieces:
        triples.extend(fam.restrict(g, s))
    rest = complement(_union_all(fam, [s for s, _ in pieces]))
    triples.extend(fam.fixed_triples(rest))
    b = fam.make(triples)
    for s, g in pieces:
        for p in sample_points(s, 8):
            if b(p) != g(p):
                raise WitnessError("glued element disagrees with its piece")
    return b


def agrees_on(b, g, s, k: int = 30) -> bool:
    """``b`` and ``g`` agree on ``k`` sample points of ``s`` and on images of its depth-2 subsets."""
    if any(b(p) != g(p) for p in sample_points(s, k)):
        return False
    fam = family_of(s)
    for piece in fam.pieces(s):
        subs = [piece]
        for _ in range(2):
            subs = [c for q in subs for c in fam.refine(q)]
            for c in subs:
                one = fam.as_set([c])
                if b.image(one) != g.image(one):
                    return False
    return True


def fixes_pointwise(g, s) -> bool:
    return is_subset(s, g.fixed_set())


# --------------------------------------------------------------------------
# condition (3T)


@dataclass
class WeakTriple:
    M: object
    N: object
    P: object
    b: object


def weak_triple_witness(g, h, family=None, max_depth: int | None = None) -> WeakTriple:
    """Find ``(M, N, P)`` and ``b`` with ``b g M = M``, ``b h N = N``, ``b P = P``.

    Searches single cells of increasing depth; raises :class:`Inconclusive`
    when nothing is found up to ``max_depth``.
    """
    fam = family or family_of(g)
    start = fam.default_depth()
    stop = start + 3 if max_depth is None else max_depth
    for d in range(start, stop + 1):
        cells = [fam.as_set([c]) for c in fam.cells(d)]
        gi = [g.image(c) for c in cells]
        hi = [h.image(c) for c in cells]
        for p, P in enumerate(cells):
            for m, M in enumerate(cells):
                if m == p or not is_disjoint(gi[m], P):
                    continue
                for n, N in enumerate(cells):
                    if n in (m, p) or not is_disjoint(hi[n], P) or not is_disjoint(hi[n], gi[m]):
                        continue
                    if not tuple_admissible((M, N, P)) or not tuple_admissible((gi[m], hi[n], P)):
                        continue
                    b = transitivity_witness((gi[m], hi[n], P), (M, N, P), fam)
                    if (b * g).image(M) != M or (b * h).image(N) != N or b.image(P) != P:
                        raise WitnessError("weak triple witness failed verification")
                    return WeakTriple(M, N, P, b)
    raise Inconclusive(f"no weak triple up to depth {stop}")


# --------------------------------------------------------------------------
# the finite cover and bounded generation


@dataclass
class CoverA:
    sets: tuple
    third: dict = field(default_factory=dict)

    def check(self) -> bool:
        if not self.sets:
            return False
        fam = family_of(self.sets[0])
        if not _union_all(fam, self.sets).is_full:
            return False
        if not all(s.is_proper_nonempty for s in self.sets):
            return False
        for i in range(len(self.sets)):
            for j in range(len(self.sets)):
                k = self.third.get((i, j))
                if k is None or not is_disjoint(self.sets[k], union(self.sets[i], self.sets[j])):
                    return False
        return True

    def member_containing(self, p) -> int:
        for i, s in enumerate(self.sets):
            if s.contains_point(p):
                return i
        raise ValueError("point not covered")


def build_cover_A(family) -> CoverA:
    """Uniform refinement into at least three pieces; each pair misses some third piece."""
    fam = family
    pieces = list(fam.pieces(fam.full()))
    while len(pieces) < 3:
        pieces = sorted(kid for p in pieces for kid in fam.refine(p))
    sets = tuple(fam.as_set([p]) for p in pieces)
    third = {}
    for i in range(len(sets)):
        for j in range(len(sets)):
            third[(i, j)] = next(k for k in range(len(sets)) if k not in (i, j))
    cover = CoverA(sets, third)
    if not cover.check():
        raise WitnessError("cover construction failed its own check")
    return cover


def _small_neighbourhood(fam, g, x, inside, target):
    """Single cell ``I'`` with ``x in I' <= inside`` and ``g I' <= target``."""
    piece = next(p for p in fam.pieces(inside) if fam.as_set([p]).contains_point(x))
    for _ in range(64):
        s = fam.as_set([piece])
        if is_subset(g.image(s), target):
            return s
        piece = next(k for k in fam.refine(piece) if fam.as_set([k]).contains_point(x))
    raise WitnessError("no small neighbourhood found")


def decompose_A(g, cover: CoverA, family=None) -> list:
    """Write ``g = e^-1 (e g a) a^-1`` with each factor fixing a member of ``cover``."""
    fam = family or family_of(g)
    ident = fam.identity()
    if g == ident:
        return [ident]
    x = sample_points(fam.full(), 1)[0]
    y = g(x)
    i, j = cover.member_containing(x), cover.member_containing(y)
    I, J = cover.sets[i], cover.sets[j]
    K = cover.sets[cover.third[(i, j)]]
    I1 = _small_neighbourhood(fam, g, x, I, J)
    J1 = g.image(I1)

    a0 = transitivity_witness((J, K), (I1, K), fam)
    a = a0 * glue([(K, a0)], fam).inverse()
    c0 = transitivity_witness((J1, K), (J, K), fam)
    c = c0 * glue([(K, c0)], fam).inverse()
    d = glue([(J, c * g * a)], fam)
    e = d.inverse() * c
    factors = [e.inverse(), e * g * a, a.inverse()]
    if factors[0] * factors[1] * factors[2] != g:
        raise WitnessError("decomposition does not recompose")
    for f in factors:
        if not any(fixes_pointwise(f, s) for s in cover.sets):
            raise WitnessError("factor fixes no cover member")
    return factors


def sample_A(family, cover: CoverA, rng: random.Random, size: int = 8):
    """Random element fixing pointwise a random member of ``cover``."""
    fam = family
    U = cover.sets[rng.randrange(len(cover.sets))]
    r = fam.random_element(rng, size)
    t = transitivity_witness((r.image(U),), (U,), fam)
    tr = t * r
    return tr * glue([(U, tr)], fam).inverse(), U


# --------------------------------------------------------------------------
# properties (2) and (3)


@dataclass
class CommutingChain:
    g: object
    h: object
    checks: dict


def property2_witness(b1, b2, family=None) -> CommutingChain:
    """``g, h`` with ``[b1, b1^g] = [b1^g, b1^h] = [b1^h, b2] = 1``."""
    fam = family or family_of(b1)
    I, J = b1.fixed_set(), b2.fixed_set()
    if I.is_empty or J.is_empty:
        raise ValueError("both elements must fix some nonempty clopen set pointwise")
    ident = fam.identity()
    if I.is_full:
        g = h = ident
    else:
        I1 = complement(I)
        # K inside I leaving part of J uncovered; L inside J and disjoint from K
        K = small_set(fam, I, residue(fam, I1), extra=2)
        if is_subset(J, K):
            raise WitnessError("cannot place K")
        L = small_set(fam, J - K, residue(fam, I1), extra=2)
        g = transitivity_witness((I1,), (K,), fam)
        h = transitivity_witness((I1,), (L,), fam)
    bg, bh = conjugate(b1, g), conjugate(b1, h)
    checks = {
        "b~b^g": b1 * bg == bg * b1,
        "b^g~b^h": bg * bh == bh * bg,
        "b^h~b'": bh * b2 == b2 * bh,
    }
    return CommutingChain(g, h, checks)


@dataclass
class Property3Result:
    M: object
    N: object
    P: object
    b: object
    conjugators: dict
    checks: list
    factorizations: dict

    @property
    def ok(self) -> bool:
        return all(all(c["verdicts"].values()) for c in self.checks)


def property3_witness(g, h, cover: CoverA, sample_a: Sequence, family=None) -> Property3Result:
    """Build ``b`` and the conjugators ``f(g, h, I)``; check the three products fix ``P, M, N``.

    ``sample_a`` holds pairs ``(a, I)`` with ``a`` fixing the cover member ``I``.
    The factorization of each ``f`` through ``A`` is recorded, not verified.
    """
    fam = family or family_of(g)
    wt = weak_triple_witness(g, h, fam)
    M, N, P, b0 = wt.M, wt.N, wt.P, wt.b
    c0 = glue([(P, b0), (M, b0 * g)], fam)
    c1 = glue([(N, b0 * h)], fam)
    b = c1.inverse() * c0.inverse() * b0
    if not (fixes_pointwise(b, P) and fixes_pointwise(b * g, M) and fixes_pointwise(b * h, N)):
        raise WitnessError("corrected b does not fix P, gM, hN")
    MNP = _union_all(fam, (M, N, P))
    rest = complement(MNP)
    conj, facts = {}, {}
    for idx, I in enumerate(cover.sets):
        # Y avoids M, N, P; J = Y^c must match I's residue
        want = (len(fam.pieces(fam.full())) - residue(fam, I)) % fam.modulus
        Y = small_set(fam, rest, want, extra=1)
        J = complement(Y)
        f = transitivity_witness((I,), (J,), fam)
        conj[idx] = f
        facts[idx] = decompose_A(f, cover, fam)
    checks = []
    for a, I in sample_a:
        idx = cover.sets.index(I)
        af = conjugate(a, conj[idx])
        prods = {"a^f b": (af * b, P), "a^f b g": (af * b * g, M), "a^f b h": (af * b * h, N)}
        verdicts = {k: fixes_pointwise(x, s) and not x.fixed_set().is_empty for k, (x, s) in prods.items()}
        checks.append({"cover_index": idx, "verdicts": verdicts})
    return Property3Result(M, N, P, b, conj, checks, facts)


# --------------------------------------------------------------------------
# extreme proximality


def extremely_proximal_witness(u, v, family=None):
    """``f`` with ``f u <= v`` for proper nonempty clopen ``u``, ``v``."""
    if not u.is_proper_nonempty or not v.is_proper_nonempty:
        raise ValueError("both sets must be proper and nonempty")
    fam = family or family_of(u)
    if is_subset(u, v):
        return fam.identity()
    target = small_set(fam, v, residue(fam, u), extra=1)
    f = transitivity_witness((u,), (target,), fam)
    if not is_subset(f.image(u), v):
        raise WitnessError("proximality witness failed")
    return f


def condition_C(s) -> tuple[bool, object]:
    """For a proper nonempty clopen ``s`` the complement itself is the required basis member."""
    j = complement(s)
    return j.is_proper_nonempty and is_subset(complement(s), j), j


def random_B(family, rng: random.Random, size: int = 8):
    """Random element fixing pointwise a random proper clopen set."""
    fam = family
    U = random_proper_set(fam, rng)
    r = fam.random_element(rng, size)
    t = transitivity_witness((r.image(U),), (U,), fam)
    tr = t * r
    return tr * glue([(U, tr)], fam).inverse()
