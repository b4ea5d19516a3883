"""Clopen subsets of Cantor sets.

Two models are provided:

* :class:`ClopenSet` -- finite unions of cylinders in the boundary of the
  rooted forest with ``r`` copies of the ``n``-ary tree.  Words are strings
  over ``'0'..str(n-1)`` so ``n <= 10``.
* :class:`BrickSet` -- finite unions of dyadic bricks in the product Cantor
  set ``C^S`` for a finite index set ``S = {0, ..., dims-1}``.

Both keep a canonical representation, so two sets are equal exactly when
their representations are equal.
"""

from __future__ import annotations

import functools
import itertools
import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class Arity:
    n: int = 2
    r: int = 1

    def __post_init__(self):
        if not 2 <= self.n <= 10:
            raise ValueError(f"branching n must be in [2, 10], got {self.n}")
        if self.r < 1:
            raise ValueError(f"number of roots must be >= 1, got {self.r}")

    @property
    def digits(self) -> str:
        return "0123456789"[: self.n]


class Cylinder(NamedTuple):
    root: int
    word: str

    def __str__(self):
        return f"{self.root}:{self.word}"

    def contains(self, other: "Cylinder") -> bool:
        return self.root == other.root and other.word.startswith(self.word)

    def comparable(self, other: "Cylinder") -> bool:
        return self.contains(other) or other.contains(self)


def _check_cylinder(arity: Arity, c: Cylinder):
    if not 0 <= c.root < arity.r:
        raise ValueError(f"root {c.root} out of range for {arity}")
    bad = set(c.word) - set(arity.digits)
    if bad:
        raise ValueError(f"word {c.word!r} uses letters {sorted(bad)} outside arity {arity.n}")


def _normalize(arity: Arity, cyls: Iterable[Cylinder]) -> tuple[Cylinder, ...]:
    s = set(cyls)
    # antichain: drop anything below another member
    s = {c for c in s if not any((c.root, c.word[:k]) in s for k in range(len(c.word)))}
    if not s:
        return ()
    n = arity.n
    depth = max(len(c.word) for c in s)
    for d in range(depth, 0, -1):
        groups: dict[tuple[int, str], list[Cylinder]] = {}
        for c in s:
            if len(c.word) == d:
                groups.setdefault((c.root, c.word[:-1]), []).append(c)
        for (root, parent), kids in groups.items():
            if len(kids) == n:
                s.difference_update(kids)
                s.add(Cylinder(root, parent))
    return tuple(sorted(s))


class ClopenSet:
    """Clopen subset of the boundary of the forest ``T_n(r)``.

    Stored as a sorted antichain of cylinders in which no complete family of
    ``n`` siblings occurs.
    """

    __slots__ = ("arity", "cylinders", "_hash")

    def __init__(self, arity: Arity, cylinders: Iterable[Cylinder | tuple] = ()):
        cyls = [c if isinstance(c, Cylinder) else Cylinder(*c) for c in cylinders]
        for c in cyls:
            _check_cylinder(arity, c)
        self.arity = arity
        self.cylinders = _normalize(arity, cyls)
        self._hash = None

    @classmethod
    def _raw(cls, arity, cylinders):
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.cylinders = _normalize(arity, cylinders)
        obj._hash = None
        return obj

    @classmethod
    def full(cls, arity: Arity) -> "ClopenSet":
        return cls._raw(arity, [Cylinder(i, "") for i in range(arity.r)])

    @classmethod
    def empty(cls, arity: Arity) -> "ClopenSet":
        return cls._raw(arity, [])

    @classmethod
    def parse(cls, text: str, arity: Arity) -> "ClopenSet":
        return parse_clopen(text, arity)

    def __eq__(self, other):
        if not isinstance(other, ClopenSet):
            return NotImplemented
        return self.arity == other.arity and self.cylinders == other.cylinders

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, self.cylinders))
        return self._hash

    def __repr__(self):
        return f"ClopenSet({self})"

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.cylinders) + "]"

    def __iter__(self):
        return iter(self.cylinders)

    def __len__(self):
        return len(self.cylinders)

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __sub__(self, other):
        return minus(self, other)

    def __invert__(self):
        return complement(self)

    def __le__(self, other):
        return is_subset(self, other)

    @property
    def depth(self) -> int:
        return max((len(c.word) for c in self.cylinders), default=0)

    @property
    def is_empty(self) -> bool:
        return not self.cylinders

    @property
    def is_full(self) -> bool:
        return len(self.cylinders) == self.arity.r and all(c.word == "" for c in self.cylinders)

    @property
    def is_proper_nonempty(self) -> bool:
        return not self.is_empty and not self.is_full

    def contains_point(self, point) -> bool:
        """Membership of a ``CantorPoint`` (root + eventually periodic word)."""
        return any(c.root == point.root and point.word.startswith(c.word) for c in self.cylinders)

    def pieces(self) -> list["ClopenSet"]:
        return [ClopenSet._raw(self.arity, [c]) for c in self.cylinders]

    def residue(self) -> int:
        """Number of cylinders modulo ``n - 1``; invariant under ``V_n(r)``."""
        return len(self.cylinders) % (self.arity.n - 1)


def _same_arity(a, b):
    if a.arity != b.arity:
        raise ArityError(f"arity mismatch: {a.arity} vs {b.arity}")


def _complement_cyls(arity: Arity, cylinders: Sequence[Cylinder]) -> list[Cylinder]:
    out: list[Cylinder] = []
    by_root: dict[int, list[str]] = {}
    for c in cylinders:
        by_root.setdefault(c.root, []).append(c.word)

    def rec(root, word, members):
        if word in members:
            return
        below = [m for m in members if m.startswith(word)]
        if not below:
            out.append(Cylinder(root, word))
            return
        for j in arity.digits:
            rec(root, word + j, below)

    for root in range(arity.r):
        rec(root, "", by_root.get(root, []))
    return out


@functools.lru_cache(maxsize=8192)
def _complement_cached(arity: Arity, cylinders: tuple) -> "ClopenSet":
    return ClopenSet._raw(arity, _complement_cyls(arity, cylinders))


def complement(c: ClopenSet) -> ClopenSet:
    if isinstance(c, BrickSet):
        return c.complement()
    return _complement_cached(c.arity, c.cylinders)


def _intersect_cyls(a: Sequence[Cylinder], b: Sequence[Cylinder]) -> list[Cylinder]:
    out = []
    for x in a:
        for y in b:
            if x.root != y.root:
                continue
            if y.word.startswith(x.word):
                out.append(y)
            elif x.word.startswith(y.word):
                out.append(x)
    return out


def union(a, b):
    _same_arity(a, b)
    if isinstance(a, BrickSet):
        return a._combine(b, "union")
    return ClopenSet._raw(a.arity, a.cylinders + b.cylinders)


def intersect(a, b):
    _same_arity(a, b)
    if isinstance(a, BrickSet):
        return a._combine(b, "intersect")
    return ClopenSet._raw(a.arity, _intersect_cyls(a.cylinders, b.cylinders))


def minus(a, b):
    _same_arity(a, b)
    if isinstance(a, BrickSet):
        return a._combine(b, "minus")
    return ClopenSet._raw(a.arity, _intersect_cyls(a.cylinders, complement(b).cylinders))


def boolean(a, b, op: str):
    try:
        fn = {"union": union, "intersect": intersect, "minus": minus}[op]
    except KeyError:
        raise ValueError(f"unknown boolean op {op!r}") from None
    return fn(a, b)


def is_subset(a, b) -> bool:
    return minus(a, b).is_empty


def is_disjoint(a, b) -> bool:
    return intersect(a, b).is_empty


def predicates(c) -> dict[str, bool]:
    return {
        "is_empty": c.is_empty,
        "is_full": c.is_full,
        "is_proper_nonempty": c.is_proper_nonempty,
    }


def tuple_admissible(ts: Sequence) -> bool:
    """Membership in the tuple set: proper nonempty, pairwise disjoint, union not full.

    For clopen sets closure is the set itself and "not dense" means "not full".
    """
    if not ts:
        return False
    arity = ts[0].arity
    if any(t.arity != arity for t in ts):
        raise ArityError("tuple entries have different arities")
    if not all(t.is_proper_nonempty for t in ts):
        return False
    acc = ts[0]
    for t in ts[1:]:
        if not is_disjoint(acc, t):
            return False
        acc = union(acc, t)
    return not acc.is_full


# --------------------------------------------------------------------------
# bricks in C^S


class Brick(NamedTuple):
    """Brick ``B(psi)``: a finite binary prefix per coordinate (``''`` = no constraint)."""

    words: tuple[str, ...]

    @property
    def dims(self) -> int:
        return len(self.words)

    def __str__(self):
        return "(" + ",".join(self.words) + ")"

    def contains(self, other: "Brick") -> bool:
        return all(w2.startswith(w1) for w1, w2 in zip(self.words, other.words))

    def meet(self, other: "Brick") -> "Brick | None":
        out = []
        for w1, w2 in zip(self.words, other.words):
            if w2.startswith(w1):
                out.append(w2)
            elif w1.startswith(w2):
                out.append(w1)
            else:
                return None
        return Brick(tuple(out))

    @property
    def size(self) -> int:
        return sum(len(w) for w in self.words)


def brick(*words: str) -> Brick:
    return Brick(tuple(words))


def brick_split(b: Brick, s: int) -> tuple[Brick, Brick]:
    """Halve ``b`` along coordinate ``s``."""
    if not 0 <= s < b.dims:
        raise ValueError(f"coordinate {s} not in dims 0..{b.dims - 1}")
    w = list(b.words)
    lo, hi = w.copy(), w.copy()
    lo[s] += "0"
    hi[s] += "1"
    return Brick(tuple(lo)), Brick(tuple(hi))


def _extensions(word: str, depth: int) -> list[str]:
    k = depth - len(word)
    if k <= 0:
        return [word]
    return [word + "".join(t) for t in itertools.product("01", repeat=k)]


def _cells_at(bricks: Iterable[Brick], depths: tuple[int, ...]) -> set[tuple[str, ...]]:
    cells = set()
    for b in bricks:
        cells.update(itertools.product(*(_extensions(w, d) for w, d in zip(b.words, depths))))
    return cells


def _coarsen(cells: set, depths: list[int]) -> tuple[tuple[int, ...], frozenset]:
    dims = len(depths)
    for i in range(dims):
        while depths[i] > 0:
            d = depths[i]
            ok = True
            for c in cells:
                w = c[i]
                twin = c[:i] + (w[:-1] + ("1" if w[-1] == "0" else "0"),) + c[i + 1 :]
                if twin not in cells:
                    ok = False
                    break
            if not ok:
                break
            cells = {c[:i] + (c[i][:-1],) + c[i + 1 :] for c in cells}
            depths[i] = d - 1
    return tuple(depths), frozenset(cells)


class BrickSet:
    """Clopen subset of ``C^S`` for ``S = {0..dims-1}``.

    The canonical form is the minimal depth vector at which the set is a union
    of grid cells together with that cell set; :attr:`bricks` gives a
    deterministic k-d decomposition of it.
    """

    __slots__ = ("dims", "depths", "cells", "_bricks", "_hash")

    def __init__(self, dims: int, bricks: Iterable[Brick | Sequence[str]] = ()):
        bs = [b if isinstance(b, Brick) else Brick(tuple(b)) for b in bricks]
        for b in bs:
            if b.dims != dims:
                raise ArityError(f"brick {b} does not have {dims} coordinates")
            if set("".join(b.words)) - {"0", "1"}:
                raise ValueError(f"brick {b} is not binary")
        self.dims = dims
        depths = [max((len(b.words[i]) for b in bs), default=0) for i in range(dims)]
        self.depths, self.cells = _coarsen(_cells_at(bs, tuple(depths)), depths)
        self._bricks = None
        self._hash = None

    @classmethod
    def _from_cells(cls, dims, depths, cells):
        obj = cls.__new__(cls)
        obj.dims = dims
        obj.depths, obj.cells = _coarsen(set(cells), list(depths))
        obj._bricks = None
        obj._hash = None
        return obj

    @classmethod
    def full(cls, dims: int) -> "BrickSet":
        return cls(dims, [Brick(("",) * dims)])

    @classmethod
    def empty(cls, dims: int) -> "BrickSet":
        return cls(dims, [])

    @property
    def arity(self):
        # lets the shared boolean helpers compare "arity" uniformly
        return ("bricks", self.dims)

    def __eq__(self, other):
        if not isinstance(other, BrickSet):
            return NotImplemented
        return self.dims == other.dims and self.depths == other.depths and self.cells == other.cells

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dims, self.depths, self.cells))
        return self._hash

    def __str__(self):
        return "[" + ", ".join(str(b) for b in self.bricks) + "]"

    def __repr__(self):
        return f"BrickSet({self})"

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __sub__(self, other):
        return minus(self, other)

    def __invert__(self):
        return self.complement()

    def __le__(self, other):
        return is_subset(self, other)

    def __len__(self):
        return len(self.bricks)

    def __iter__(self):
        return iter(self.bricks)

    @property
    def bricks(self) -> tuple[Brick, ...]:
        if self._bricks is None:
            self._bricks = tuple(self._decompose())
        return self._bricks

    def _decompose(self):
        out: list[Brick] = []
        depths = self.depths
        cells = self.cells
        if not cells:
            return out

        def rec(words: list[str], members: list):
            total = 1
            for w, d in zip(words, depths):
                total <<= d - len(w)
            if len(members) == total:
                out.append(Brick(tuple(words)))
                return
            if not members:
                return
            i = next(k for k in range(self.dims) if len(words[k]) < depths[k])
            pos = len(words[i])
            for bit in "01":
                sub = [c for c in members if c[i][pos] == bit]
                w2 = words.copy()
                w2[i] = words[i] + bit
                rec(w2, sub)

        rec([""] * self.dims, list(cells))
        return sorted(out)

    @property
    def depth(self) -> int:
        return max(self.depths, default=0)

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def is_full(self) -> bool:
        return all(d == 0 for d in self.depths) and len(self.cells) == 1

    @property
    def is_proper_nonempty(self) -> bool:
        return not self.is_empty and not self.is_full

    def at_depths(self, depths: Sequence[int]) -> set:
        return _cells_at([Brick(c) for c in self.cells], tuple(depths))

    def complement(self) -> "BrickSet":
        all_cells = set(itertools.product(*(_extensions("", d) for d in self.depths)))
        return BrickSet._from_cells(self.dims, self.depths, all_cells - self.cells)

    def _combine(self, other: "BrickSet", op: str) -> "BrickSet":
        depths = tuple(max(a, b) for a, b in zip(self.depths, other.depths))
        x, y = self.at_depths(depths), other.at_depths(depths)
        if op == "union":
            cells = x | y
        elif op == "intersect":
            cells = x & y
        else:
            cells = x - y
        return BrickSet._from_cells(self.dims, depths, cells)

    def contains_point(self, point) -> bool:
        return any(all(w.startswith(b) for w, b in zip(point.words, br.words)) for br in self.bricks)

    def pieces(self) -> list["BrickSet"]:
        return [BrickSet(self.dims, [b]) for b in self.bricks]

    def residue(self) -> int:
        return 0


# --------------------------------------------------------------------------
# patterns


@dataclass(frozen=True)
class Pattern:
    """Partition of the whole space into cylinders or bricks.

    ``labels[i]`` is the index of the input set that piece ``i`` refines, or
    ``-1`` for pieces of the leftover complement.
    """

    pieces: tuple
    labels: tuple[int, ...]

    def __len__(self):
        return len(self.pieces)


def _piece_set(space, piece):
    if isinstance(piece, Brick):
        return BrickSet(space.dims, [piece])
    return ClopenSet._raw(space.arity, [piece])


def _refine(piece, arity_or_dims):
    if isinstance(piece, Brick):
        i = min(range(piece.dims), key=lambda k: (len(piece.words[k]), k))
        return list(brick_split(piece, i))
    return [Cylinder(piece.root, piece.word + j) for j in arity_or_dims.digits]


def is_partition(space_full, pieces: Sequence) -> bool:
    """True iff the pieces are pairwise disjoint and cover the space."""
    acc = space_full.empty(space_full.dims) if isinstance(space_full, BrickSet) else ClopenSet.empty(space_full.arity)
    for p in pieces:
        s = _piece_set(space_full, p)
        if not is_disjoint(acc, s):
            return False
        acc = union(acc, s)
    return acc.is_full


def complete_to_partition(ts: Sequence, k: int) -> Pattern:
    """Refine disjoint sets and their leftover complement into exactly ``k`` pieces.

    The lexicographically first piece is split repeatedly until the count is
    reached.  Raises ``ValueError`` naming the minimum if ``k`` is too small,
    or if ``k`` is not reachable (for ``n``-ary trees each split adds ``n-1``).
    """
    if not ts:
        raise ValueError("need at least one set")
    first = ts[0]
    for i, a in enumerate(ts):
        for b in ts[i + 1 :]:
            if not is_disjoint(a, b):
                raise ValueError("input sets are not pairwise disjoint")
    acc = ts[0]
    for t in ts[1:]:
        acc = union(acc, t)
    rest = complement(acc)
    pieces: list = []
    labels: list[int] = []
    groups = list(enumerate(ts)) + [(-1, rest)]
    for label, s in groups:
        items = s.bricks if isinstance(s, BrickSet) else s.cylinders
        pieces.extend(items)
        labels.extend([label] * len(items))
    minimum = len(pieces)
    if k < minimum:
        raise ValueError(f"k={k} is below the minimum piece count {minimum}")
    step = 1 if isinstance(first, BrickSet) else first.arity.n - 1
    if (k - minimum) % step:
        raise ValueError(f"k={k} not reachable from {minimum} in steps of {step}")
    space = first.dims if isinstance(first, BrickSet) else first.arity
    order = sorted(range(len(pieces)), key=lambda i: pieces[i])
    pieces = [pieces[i] for i in order]
    labels = [labels[i] for i in order]
    while len(pieces) < k:
        head, lab = pieces.pop(0), labels.pop(0)
        kids = _refine(head, space)
        for kid in kids:
            j = bisect_left(pieces, kid)
            pieces.insert(j, kid)
            labels.insert(j, lab)
    return Pattern(tuple(pieces), tuple(labels))


# --------------------------------------------------------------------------
# text grammar: cylinders ``root:word``, bricks ``(w0,w1,...)``, sets ``[a, b]``

_CYL = re.compile(r"^\s*(\d+):([0-9]*)\s*$")
_BRICK = re.compile(r"\(([01,]*)\)")


def parse_cylinder(text: str) -> Cylinder:
    m = _CYL.match(text)
    if not m:
        raise ValueError(f"bad cylinder literal {text!r}; expected root:word")
    return Cylinder(int(m.group(1)), m.group(2))


def parse_clopen(text: str, arity: Arity) -> ClopenSet:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"clopen set literal must be bracketed: {text!r}")
    body = body[1:-1].strip()
    items = [parse_cylinder(t) for t in body.split(",")] if body else []
    return ClopenSet(arity, items)


def parse_brick(text: str) -> Brick:
    m = _BRICK.fullmatch(text.strip())
    if not m:
        raise ValueError(f"bad brick literal {text!r}; expected (w0,w1,...)")
    return Brick(tuple(m.group(1).split(",")))


def parse_brickset(text: str, dims: int) -> BrickSet:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"brick set literal must be bracketed: {text!r}")
    items = [Brick(tuple(m.group(1).split(","))) for m in _BRICK.finditer(body)]
    return BrickSet(dims, items)
