"""Uniform access to the Cantor-set families: ``V_n(r)`` and twisted Brin-Thompson groups.

A family knows its space of clopen sets, how to build an element from
matched pieces, and how to restrict an element to a clopen set.  Everything
in :mod:`nlkit.criterion.witnesses` is written against this interface.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from ..cantor import Arity, Brick, BrickSet, ClopenSet, Cylinder, _refine
from ..elements import twisted as tw
from ..elements import vgroup
from ..elements.twisted import TwistedElement, TwistGroup
from ..elements.vgroup import VElement
from ..points import sample_points


class VFamily:
    kind = "V"

    def __init__(self, arity: Arity = Arity(2, 1)):
        self.arity = arity

    def __repr__(self):
        return f"V_{self.arity.n}({self.arity.r})"

    def __eq__(self, other):
        return isinstance(other, VFamily) and other.arity == self.arity

    def __hash__(self):
        return hash(("V", self.arity))

    @property
    def modulus(self) -> int:
        """Piece counts of a set are invariant modulo this number."""
        return self.arity.n - 1

    def full(self) -> ClopenSet:
        return ClopenSet.full(self.arity)

    def empty(self) -> ClopenSet:
        return ClopenSet.empty(self.arity)

    def identity(self) -> VElement:
        return VElement.identity(self.arity)

    def owns(self, x) -> bool:
        return getattr(x, "arity", None) == self.arity

    def pieces(self, s: ClopenSet) -> tuple:
        return s.cylinders

    def as_set(self, pieces) -> ClopenSet:
        return ClopenSet._raw(self.arity, list(pieces))

    def refine(self, piece):
        return _refine(piece, self.arity)

    def cells(self, depth: int) -> list[Cylinder]:
        digits = self.arity.digits
        return [
            Cylinder(root, "".join(w))
            for root in range(self.arity.r)
            for w in itertools.product(digits, repeat=depth)
        ]

    def default_depth(self) -> int:
        d = 0
        while self.arity.r * self.arity.n**d < 8:
            d += 1
        return d

    def random_element(self, rng: random.Random, size: int = 8) -> VElement:
        return vgroup.random_element(self.arity, rng, size)

    def make(self, triples) -> VElement:
        return VElement(self.arity, [(d, c) for d, c, _ in triples])

    def restrict(self, g: VElement, s: ClopenSet) -> list[tuple]:
        out = []
        for cyl in s.cylinders:
            for d, c in g._matching(cyl):
                if len(cyl.word) >= len(d.word):
                    out.append((cyl, Cylinder(c.root, c.word + cyl.word[len(d.word) :]), None))
                else:
                    out.append((d, c, None))
        return out

    def fixed_triples(self, s: ClopenSet) -> list[tuple]:
        return [(c, c, None) for c in s.cylinders]


class TwistedFamily:
    kind = "SVG"

    def __init__(self, group: TwistGroup):
        self.group = group

    def __repr__(self):
        if len(self.group.elements) == 1:
            return f"{self.group.dims}V"
        return f"SV_Gamma(|S|={self.group.dims}, |Gamma|={len(self.group.elements)})"

    def __eq__(self, other):
        return isinstance(other, TwistedFamily) and other.group == self.group

    def __hash__(self):
        return hash(("SVG", self.group))

    @property
    def dims(self) -> int:
        return self.group.dims

    @property
    def modulus(self) -> int:
        return 1

    def full(self) -> BrickSet:
        return BrickSet.full(self.dims)

    def empty(self) -> BrickSet:
        return BrickSet.empty(self.dims)

    def identity(self) -> TwistedElement:
        return TwistedElement.identity(self.group)

    def owns(self, x) -> bool:
        if isinstance(x, BrickSet):
            return x.dims == self.dims
        return isinstance(x, TwistedElement) and x.group == self.group

    def pieces(self, s: BrickSet) -> tuple:
        return s.bricks

    def as_set(self, pieces) -> BrickSet:
        return BrickSet(self.dims, pieces)

    def refine(self, piece):
        return _refine(piece, self.dims)

    def cells(self, depth: int) -> list[Brick]:
        per = ["".join(w) for w in itertools.product("01", repeat=depth)]
        return [Brick(ws) for ws in itertools.product(per, repeat=self.dims)]

    def default_depth(self) -> int:
        return 2 if self.dims <= 2 else 1

    def random_element(self, rng: random.Random, size: int = 6) -> TwistedElement:
        return tw.random_element(self.group, rng, size)

    def make(self, triples) -> TwistedElement:
        ident = self.group.identity
        return TwistedElement(self.group, [(d, c, ident if g is None else g) for d, c, g in triples])

    def restrict(self, g: TwistedElement, s: BrickSet) -> list[tuple]:
        out = []
        for b in s.bricks:
            for psi, phi, gam in g.pairs:
                beta = b.meet(psi)
                if beta is None:
                    continue
                e = [beta.words[t][len(psi.words[t]) :] for t in range(self.dims)]
                inv = tw.perm_inverse(gam)
                out.append((beta, Brick(tuple(phi.words[u] + e[inv[u]] for u in range(self.dims))), gam))
        return out

    def fixed_triples(self, s: BrickSet) -> list[tuple]:
        ident = self.group.identity
        return [(b, b, ident) for b in s.bricks]


def family_of(x):
    """Family of an element or clopen set (bricks default to the untwisted group)."""
    if isinstance(x, (VElement, ClopenSet)):
        return VFamily(x.arity)
    if isinstance(x, TwistedElement):
        return TwistedFamily(x.group)
    if isinstance(x, BrickSet):
        return TwistedFamily(TwistGroup(x.dims))
    raise TypeError(f"no Cantor-set family for {type(x).__name__}")


def brin_thompson(s: int) -> TwistedFamily:
    """``sV``: the untwisted group on ``C^s``."""
    return TwistedFamily(TwistGroup(s))


def symmetric_twisted(s: int = 3) -> TwistedFamily:
    """``SV_Gamma`` with ``Gamma`` the full symmetric group on ``S``."""
    if s == 1:
        return TwistedFamily(TwistGroup(1))
    cycle = tuple(list(range(1, s)) + [0])
    swap = tuple([1, 0] + list(range(2, s)))
    return TwistedFamily(TwistGroup(s, [cycle, swap]))


# --------------------------------------------------------------------------
# set helpers shared by the witnesses


def residue(fam, s) -> int:
    return len(fam.pieces(s)) % fam.modulus


def small_set(fam, container, res: int, extra: int = 1):
    """A proper subset of ``container`` whose piece count is ``res`` modulo the family modulus.

    Built from up to ``n-1`` siblings one level below a descendant of the
    first piece of ``container`` (``extra`` levels down), so no merging occurs.
    """
    pieces = fam.pieces(container)
    if not pieces:
        raise ValueError("container is empty")
    p = pieces[0]
    for _ in range(extra):
        p = fam.refine(p)[0]
    kids = fam.refine(p)
    m = fam.modulus
    j = res % m or m
    return fam.as_set(kids[:j])


def random_proper_set(fam, rng: random.Random, depth: int | None = None):
    cells = fam.cells(fam.default_depth() if depth is None else depth)
    while True:
        chosen = [c for c in cells if rng.random() < 0.5]
        if 0 < len(chosen) < len(cells):
            return fam.as_set(chosen)


def random_tuple(fam, rng: random.Random, k: int, depth: int | None = None, sizes: Sequence[int] | None = None):
    """Random admissible ``k``-tuple of unions of depth-``depth`` cells.

    ``sizes`` fixes how many cells each entry uses; pairing two tuples with
    the same sizes guarantees matching residues.
    """
    d = fam.default_depth() if depth is None else depth
    cells = fam.cells(d)
    rng.shuffle(cells)
    if sizes is None:
        budget = len(cells) - 1
        if budget < k:
            raise ValueError(f"depth {d} has too few cells for a {k}-tuple")
        sizes = [1] * k
        for _ in range(rng.randint(0, budget - k)):
            sizes[rng.randrange(k)] += 1
    if sum(sizes) >= len(cells):
        raise ValueError("tuple sizes leave no room for the complement")
    out, pos = [], 0
    for sz in sizes:
        out.append(fam.as_set(cells[pos : pos + sz]))
        pos += sz
    return tuple(out), list(sizes)


def points_in(s, k: int = 30):
    return sample_points(s, k)
