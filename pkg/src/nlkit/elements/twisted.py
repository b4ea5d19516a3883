"""Twisted Brin-Thompson groups ``SV_Gamma`` for a finite index set ``S``.

With the trivial group this is the Brin-Thompson group ``sV`` (``s = |S|``).
A pair ``(psi, phi, gamma)`` sends ``kappa`` in the brick ``B(psi)`` to the
point ``s -> phi(s) + kappa'(gamma^-1 s)`` where ``kappa'`` is ``kappa`` with
the prefixes ``psi`` removed.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from ..cantor import Brick, BrickSet, brick_split
from ..points import EPWord, ProductPoint
from .vgroup import FamilyMismatch

Perm = tuple[int, ...]


def perm_compose(a: Perm, b: Perm) -> Perm:
    """``a o b``."""
    return tuple(a[b[i]] for i in range(len(b)))


def perm_inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


class TwistGroup:
    """Finite permutation group on ``{0..dims-1}`` generated by ``generators``."""

    def __init__(self, dims: int, generators: Iterable[Sequence[int]] = ()):
        gens = [tuple(g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(dims)):
                raise ValueError(f"{g} is not a permutation of 0..{dims - 1}")
        self.dims = dims
        self.generators = tuple(gens)
        ident = tuple(range(dims))
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    x = perm_compose(g, e)
                    if x not in elems:
                        elems.add(x)
                        nxt.append(x)
            frontier = nxt
        self.elements = tuple(sorted(elems))
        self._set = frozenset(elems)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.dims))

    def __contains__(self, p) -> bool:
        return tuple(p) in self._set

    def __eq__(self, other):
        return isinstance(other, TwistGroup) and self.dims == other.dims and self._set == other._set

    def __hash__(self):
        return hash((self.dims, self._set))

    def __repr__(self):
        return f"TwistGroup(dims={self.dims}, order={len(self.elements)})"


def _reduce(pairs: dict[Brick, tuple[Brick, Perm]]) -> tuple:
    changed = True
    while changed:
        changed = False
        for psi in sorted(pairs):
            if psi not in pairs:
                continue
            phi, gam = pairs[psi]
            for t, w in enumerate(psi.words):
                if not w or w[-1] != "0":
                    continue
                sib = Brick(psi.words[:t] + (w[:-1] + "1",) + psi.words[t + 1 :])
                if sib not in pairs:
                    continue
                phi1, gam1 = pairs[sib]
                if gam1 != gam:
                    continue
                u = gam[t]
                v = phi.words[u]
                if not v or v[-1] != "0":
                    continue
                want = Brick(phi.words[:u] + (v[:-1] + "1",) + phi.words[u + 1 :])
                if phi1 != want:
                    continue
                del pairs[psi], pairs[sib]
                parent = Brick(psi.words[:t] + (w[:-1],) + psi.words[t + 1 :])
                pairs[parent] = (Brick(phi.words[:u] + (v[:-1],) + phi.words[u + 1 :]), gam)
                changed = True
                break
    return tuple(sorted((d, c, g) for d, (c, g) in pairs.items()))


def _as_brick(b) -> Brick:
    return b if isinstance(b, Brick) else Brick(tuple(b))


def _measure(bricks: Iterable[Brick]) -> float:
    return sum(2.0 ** -b.size for b in bricks)


class TwistedElement:
    """Element of ``SV_Gamma`` given by ``(domain brick, codomain brick, twist)`` triples.

    Reduced forms are not unique in dimension > 1, so equality falls back to
    an exact identity test of ``g h^-1`` when the reduced triples differ.
    """

    __slots__ = ("group", "pairs", "_hash")

    def __init__(self, group: TwistGroup, pairs: Iterable[tuple], check: bool = True):
        triples = [(_as_brick(d), _as_brick(c), tuple(g)) for d, c, g in pairs]
        if check:
            for d, c, g in triples:
                if d.dims != group.dims or c.dims != group.dims:
                    raise ValueError("brick dimension does not match the twist group")
                if g not in group:
                    raise ValueError(f"twist {g} not in {group}")
            for what, bs in (("domain", [d for d, _, _ in triples]), ("codomain", [c for _, c, _ in triples])):
                if not BrickSet(group.dims, bs).is_full or abs(_measure(bs) - 1.0) > 1e-12:
                    raise ValueError(f"{what} bricks do not form a pattern")
        self.group = group
        self.pairs = _reduce({d: (c, g) for d, c, g in triples})
        self._hash = None

    @classmethod
    def _raw(cls, group, pairs_dict):
        obj = cls.__new__(cls)
        obj.group = group
        obj.pairs = _reduce(pairs_dict)
        obj._hash = None
        return obj

    @classmethod
    def identity(cls, group: TwistGroup) -> "TwistedElement":
        whole = Brick(("",) * group.dims)
        return cls._raw(group, {whole: (whole, group.identity)})

    @classmethod
    def twist(cls, group: TwistGroup, gamma: Sequence[int]) -> "TwistedElement":
        """The global twist ``tau_gamma``."""
        whole = Brick(("",) * group.dims)
        return cls(group, [(whole, whole, tuple(gamma))])

    @property
    def dims(self) -> int:
        return self.group.dims

    @property
    def domain(self):
        return tuple(d for d, _, _ in self.pairs)

    @property
    def codomain(self):
        return tuple(sorted(c for _, c, _ in self.pairs))

    @property
    def sigma(self):
        cod = self.codomain
        return tuple(cod.index(c) for _, c, _ in self.pairs)

    @property
    def twists(self):
        return tuple(g for _, _, g in self.pairs)

    @property
    def is_identity(self) -> bool:
        ident = self.group.identity
        return all(d == c and g == ident for d, c, g in self.pairs)

    def __eq__(self, other):
        if not isinstance(other, TwistedElement):
            return NotImplemented
        if self.group != other.group:
            return False
        if self.pairs == other.pairs:
            return True
        return compose(self, other.inverse()).is_identity

    def __hash__(self):
        # must agree with the semantic equality above, so hash images of probes
        if self._hash is None:
            probes = _probes(self.dims)
            self._hash = hash(tuple(apply_point(self, p) for p in probes))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{d}->{c}" + ("" if g == self.group.identity else f"@{list(g)}") for d, c, g in self.pairs)
        return f"TwistedElement({body})"

    def __mul__(self, other):
        return compose(self, other)

    def inverse(self) -> "TwistedElement":
        obj = TwistedElement.__new__(TwistedElement)
        obj.group = self.group
        obj.pairs = tuple(sorted((c, d, perm_inverse(g)) for d, c, g in self.pairs))
        obj._hash = None
        return obj

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = TwistedElement.identity(self.group)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __call__(self, p: ProductPoint) -> ProductPoint:
        return apply_point(self, p)

    def image(self, s: BrickSet) -> BrickSet:
        return image_clopen(self, s)

    def fixed_set(self) -> BrickSet:
        return fixed_clopen(self)


def _probes(dims):
    tails = ("0", "1", "01", "011")
    return [ProductPoint(tuple(EPWord("", tails[(i + k) % 4]) for i in range(dims))) for k in range(4)]


def _check(g, h):
    if not isinstance(h, TwistedElement):
        raise FamilyMismatch(f"cannot combine TwistedElement with {type(h).__name__}")
    if g.group != h.group:
        raise FamilyMismatch("twisted elements over different groups")


def compose(g: TwistedElement, h: TwistedElement) -> TwistedElement:
    """``g o h``; refinements behind a twist are pulled back through it."""
    _check(g, h)
    out: dict[Brick, tuple[Brick, Perm]] = {}
    dims = g.dims
    for psi, phi, gam in h.pairs:
        for psi2, phi2, gam2 in g.pairs:
            beta = phi.meet(psi2)
            if beta is None:
                continue
            e = [beta.words[s][len(phi.words[s]) :] for s in range(dims)]
            f = [beta.words[s][len(psi2.words[s]) :] for s in range(dims)]
            inv2 = perm_inverse(gam2)
            alpha = Brick(tuple(psi.words[t] + e[gam[t]] for t in range(dims)))
            delta = Brick(tuple(phi2.words[s] + f[inv2[s]] for s in range(dims)))
            out[alpha] = (delta, perm_compose(gam2, gam))
    return TwistedElement._raw(g.group, out)


def apply_point(g: TwistedElement, p: ProductPoint) -> ProductPoint:
    dims = g.dims
    for psi, phi, gam in g.pairs:
        if all(p.words[t].startswith(psi.words[t]) for t in range(dims)):
            kappa = [p.words[t].drop(len(psi.words[t])) for t in range(dims)]
            inv = perm_inverse(gam)
            return ProductPoint(tuple(kappa[inv[s]].prepend(phi.words[s]) for s in range(dims)))
    raise ValueError(f"point {p} not covered by the domain pattern")


def image_clopen(g: TwistedElement, s: BrickSet) -> BrickSet:
    if s.dims != g.dims:
        raise ValueError("dimension mismatch")
    dims = g.dims
    out = []
    for b in s.bricks:
        for psi, phi, gam in g.pairs:
            beta = b.meet(psi)
            if beta is None:
                continue
            e = [beta.words[t][len(psi.words[t]) :] for t in range(dims)]
            inv = perm_inverse(gam)
            out.append(Brick(tuple(phi.words[u] + e[inv[u]] for u in range(dims))))
    return BrickSet(dims, out)


def fixed_clopen(g: TwistedElement) -> BrickSet:
    ident = g.group.identity
    return BrickSet(g.dims, [d for d, c, gam in g.pairs if d == c and gam == ident])


def random_pattern(dims: int, splits: int, rng: random.Random) -> list[Brick]:
    bricks = [Brick(("",) * dims)]
    for _ in range(splits):
        b = bricks.pop(rng.randrange(len(bricks)))
        bricks.extend(brick_split(b, rng.randrange(dims)))
    return bricks


def random_element(group: TwistGroup, seed, size: int) -> TwistedElement:
    if size < 1:
        raise ValueError("size must be >= 1")
    if size == 1:
        return TwistedElement.identity(group)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    splits = rng.randint(0, size - 1)
    dom = random_pattern(group.dims, splits, rng)
    cod = random_pattern(group.dims, splits, rng)
    rng.shuffle(cod)
    twists = [rng.choice(group.elements) for _ in dom]
    return TwistedElement(group, zip(dom, cod, twists), check=False)
