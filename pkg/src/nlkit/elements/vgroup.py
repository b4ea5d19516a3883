"""Higman-Thompson groups ``V_n(r)`` as reduced tree-pair diagrams."""

from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from typing import Iterable, Sequence

from ..cantor import Arity, ArityError, ClopenSet, Cylinder, _check_cylinder
from ..points import CantorPoint


class FamilyMismatch(TypeError):
    pass


def _reduce(arity: Arity, pairs: dict[Cylinder, Cylinder]) -> tuple[tuple[Cylinder, Cylinder], ...]:
    n = arity.n
    digits = arity.digits
    changed = True
    while changed:
        changed = False
        groups: dict[tuple[int, str], list[Cylinder]] = {}
        for d in pairs:
            if d.word:
                groups.setdefault((d.root, d.word[:-1]), []).append(d)
        for (root, parent), kids in groups.items():
            if len(kids) != n:
                continue
            c0 = pairs[Cylinder(root, parent + "0")]
            if not c0.word:
                continue
            target = c0.word[:-1]
            if all(
                (c := pairs[Cylinder(root, parent + j)]).root == c0.root and c.word == target + j
                for j in digits
            ):
                for j in digits:
                    del pairs[Cylinder(root, parent + j)]
                pairs[Cylinder(root, parent)] = Cylinder(c0.root, target)
                changed = True
    return tuple(sorted(pairs.items()))


def _cover_check(arity: Arity, cyls: Sequence[Cylinder], what: str):
    s = ClopenSet._raw(arity, cyls)
    total = sum(arity.n ** -len(c.word) for c in cyls)
    if not s.is_full or abs(total - arity.r) > 1e-12:
        raise ValueError(f"{what} cylinders do not form a partition")


class VElement:
    """Element of ``V_n(r)``: cylinder ``d`` is sent to ``c`` by prefix replacement.

    ``pairs`` is the reduced list of ``(domain, codomain)`` cylinders sorted by
    domain.  Reduced diagrams are unique, so ``==`` is syntactic.
    """

    __slots__ = ("arity", "pairs", "_dom", "_hash")

    def __init__(self, arity: Arity, pairs: Iterable[tuple[Cylinder, Cylinder]], check: bool = True):
        pairs = [(Cylinder(*d), Cylinder(*c)) for d, c in pairs]
        if check:
            for d, c in pairs:
                _check_cylinder(arity, d)
                _check_cylinder(arity, c)
            _cover_check(arity, [d for d, _ in pairs], "domain")
            _cover_check(arity, [c for _, c in pairs], "codomain")
        self.arity = arity
        self.pairs = _reduce(arity, dict(pairs))
        self._dom = None
        self._hash = None

    @classmethod
    def identity(cls, arity: Arity) -> "VElement":
        return cls(arity, [(Cylinder(i, ""), Cylinder(i, "")) for i in range(arity.r)], check=False)

    @classmethod
    def from_patterns(cls, arity, domain, codomain, sigma=None) -> "VElement":
        """Build from two ordered cylinder lists; ``sigma[i]`` indexes ``codomain``."""
        if len(domain) != len(codomain):
            raise ValueError("domain and codomain patterns differ in size")
        sigma = list(range(len(domain))) if sigma is None else list(sigma)
        if sorted(sigma) != list(range(len(domain))):
            raise ValueError("sigma is not a bijection")
        return cls(arity, [(domain[i], codomain[sigma[i]]) for i in range(len(domain))])

    # -- diagram views
    @property
    def domain(self) -> tuple[Cylinder, ...]:
        return tuple(d for d, _ in self.pairs)

    @property
    def codomain(self) -> tuple[Cylinder, ...]:
        return tuple(sorted(c for _, c in self.pairs))

    @property
    def sigma(self) -> tuple[int, ...]:
        cod = self.codomain
        return tuple(cod.index(c) for _, c in self.pairs)

    def __eq__(self, other):
        if not isinstance(other, VElement):
            return NotImplemented
        return self.arity == other.arity and self.pairs == other.pairs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, self.pairs))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{d}->{c}" for d, c in self.pairs)
        return f"VElement(n={self.arity.n}, r={self.arity.r}: {body})"

    @property
    def is_identity(self) -> bool:
        return all(d == c for d, c in self.pairs)

    def _domain_index(self):
        if self._dom is None:
            self._dom = (tuple(d for d, _ in self.pairs), {d: c for d, c in self.pairs})
        return self._dom

    def _matching(self, cyl: Cylinder):
        """Pairs whose domain is comparable with ``cyl``."""
        keys, table = self._domain_index()
        for k in range(len(cyl.word), -1, -1):
            d = Cylinder(cyl.root, cyl.word[:k])
            if d in table:
                return [(d, table[d])]
        lo = bisect_left(keys, cyl)
        hi = bisect_right(keys, Cylinder(cyl.root, cyl.word + "~"))
        return [(d, table[d]) for d in keys[lo:hi]]

    # -- group law
    def __mul__(self, other: "VElement") -> "VElement":
        return compose(self, other)

    def inverse(self) -> "VElement":
        obj = VElement.__new__(VElement)
        obj.arity = self.arity
        obj.pairs = tuple(sorted((c, d) for d, c in self.pairs))
        obj._dom = None
        obj._hash = None
        return obj

    def __pow__(self, k: int) -> "VElement":
        base = self if k >= 0 else self.inverse()
        out = VElement.identity(self.arity)
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- actions
    def __call__(self, p: CantorPoint) -> CantorPoint:
        return apply_point(self, p)

    def image(self, s: ClopenSet) -> ClopenSet:
        return image_clopen(self, s)

    def fixed_set(self) -> ClopenSet:
        return fixed_clopen(self)


def _check_family(g, h):
    if type(g) is not type(h):
        raise FamilyMismatch(f"cannot combine {type(g).__name__} with {type(h).__name__}")
    if g.arity != h.arity:
        raise FamilyMismatch(f"arity mismatch: {g.arity} vs {h.arity}")


def compose(g: VElement, h: VElement) -> VElement:
    """``g o h`` (``h`` acts first)."""
    _check_family(g, h)
    out: dict[Cylinder, Cylinder] = {}
    for d, c in h.pairs:
        for d2, c2 in g._matching(c):
            if len(c.word) >= len(d2.word):
                out[d] = Cylinder(c2.root, c2.word + c.word[len(d2.word) :])
            else:
                out[Cylinder(d.root, d.word + d2.word[len(c.word) :])] = c2
    obj = VElement.__new__(VElement)
    obj.arity = g.arity
    obj.pairs = _reduce(g.arity, out)
    obj._dom = None
    obj._hash = None
    return obj


def inverse(g):
    return g.inverse()


def apply_point(g: VElement, p: CantorPoint) -> CantorPoint:
    keys, table = g._domain_index()
    maxlen = max(len(d.word) for d in keys)
    prefix = p.word.expand(maxlen)
    for k in range(maxlen + 1):
        d = Cylinder(p.root, prefix[:k])
        if d in table:
            c = table[d]
            return CantorPoint(c.root, p.word.drop(k).prepend(c.word))
    raise ValueError(f"point {p} outside the domain of {g}")


def image_clopen(g: VElement, s: ClopenSet) -> ClopenSet:
    if s.arity != g.arity:
        raise ArityError(f"arity mismatch: {s.arity} vs {g.arity}")
    out = []
    for cyl in s.cylinders:
        for d, c in g._matching(cyl):
            if len(cyl.word) >= len(d.word):
                out.append(Cylinder(c.root, c.word + cyl.word[len(d.word) :]))
            else:
                out.append(c)
    return ClopenSet._raw(g.arity, out)


def fixed_clopen(g: VElement) -> ClopenSet:
    """Interior of the fixed-point set: the domain pieces mapped to themselves."""
    return ClopenSet._raw(g.arity, [d for d, c in g.pairs if d == c])


def random_pattern(arity: Arity, splits: int, rng: random.Random) -> list[Cylinder]:
    leaves = [Cylinder(i, "") for i in range(arity.r)]
    for _ in range(splits):
        leaf = leaves.pop(rng.randrange(len(leaves)))
        leaves.extend(Cylinder(leaf.root, leaf.word + j) for j in arity.digits)
    return leaves


def random_element(arity: Arity, seed, size: int) -> VElement:
    """Random element whose diagrams have at most ``max(size, r)`` pieces."""
    if size < 1:
        raise ValueError("size must be >= 1")
    if size == 1:
        return VElement.identity(arity)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    max_splits = max(0, (size - arity.r) // (arity.n - 1))
    splits = rng.randint(0, max_splits)
    dom = random_pattern(arity, splits, rng)
    cod = random_pattern(arity, splits, rng)
    rng.shuffle(cod)
    return VElement(arity, zip(dom, cod), check=False)
