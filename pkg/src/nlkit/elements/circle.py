"""Thompson's group ``T``: dyadic piecewise-linear homeomorphisms of ``R/Z``.

A map is stored as the lift points ``(x_i, F(x_i))`` over ``[0, 1)``, always
including ``x = 0`` and otherwise only genuine breakpoints, normalized so that
``F(0)`` lies in ``[0, 1)``.  Between points the lift is affine and it extends
by ``F(x + 1) = F(x) + 1``.  All arithmetic is exact.
"""

from __future__ import annotations

import math
import random
import re
from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Sequence

from .vgroup import FamilyMismatch

Dyadic = Fraction


def is_dyadic(x) -> bool:
    x = Fraction(x)
    d = x.denominator
    return d & (d - 1) == 0


def dyadic(x) -> Fraction:
    """Coerce to an exact dyadic rational; rejects anything else."""
    if isinstance(x, str):
        return parse_dyadic(x)
    if isinstance(x, float):
        x = Fraction(x)
    x = Fraction(x)
    if not is_dyadic(x):
        raise ValueError(f"{x} is not a dyadic rational")
    return x


def dyadic_parts(x: Fraction) -> tuple[int, int]:
    """``(numerator, exponent)`` with ``x = numerator / 2**exponent``."""
    x = dyadic(x)
    return x.numerator, x.denominator.bit_length() - 1


def format_dyadic(x) -> str:
    num, k = dyadic_parts(x)
    return str(num) if k == 0 else f"{num}/2^{k}"


_DY = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(?:2\^(\d+)|(\d+)))?\s*$")


def parse_dyadic(text: str) -> Fraction:
    """Accepts ``3/2^3``, ``3/8`` or ``-1``."""
    m = _DY.match(text)
    if not m:
        raise ValueError(f"bad dyadic literal {text!r}; expected num/2^k")
    num = int(m.group(1))
    if m.group(2) is not None:
        return Fraction(num, 2 ** int(m.group(2)))
    if m.group(3) is not None:
        return dyadic(Fraction(num, int(m.group(3))))
    return Fraction(num)


def _is_pow2(s: Fraction) -> bool:
    if s <= 0:
        return False
    return s.numerator & (s.numerator - 1) == 0 and s.denominator & (s.denominator - 1) == 0


def _frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


class CircleMap:
    __slots__ = ("points", "_xs")

    def __init__(self, points: Iterable[tuple], check: bool = True):
        pts = [(Fraction(x), Fraction(y)) for x, y in points]
        self.points = _canonical(pts, check)
        self._xs = [x for x, _ in self.points]

    @classmethod
    def from_lift_points(cls, points: Iterable[tuple]) -> "CircleMap":
        """Build from lift samples ``(x, F(x))`` with ``x`` spanning less than one period.

        The x's need not start at 0; the lift is interpolated linearly between
        consecutive samples and across the wrap ``x_last -> x_0 + 1``.
        """
        return cls(points)

    @classmethod
    def identity(cls) -> "CircleMap":
        return cls([(Fraction(0), Fraction(0))], check=False)

    # -- views matching the breakpoint/slope/offset description
    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(self._xs)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        pts = self.points + ((Fraction(1), self.points[0][1] + 1),)
        return tuple((pts[i + 1][1] - pts[i][1]) / (pts[i + 1][0] - pts[i][0]) for i in range(len(self.points)))

    @property
    def offset(self) -> Fraction:
        return self.points[0][1]

    def lift(self, x) -> Fraction:
        x = Fraction(x)
        k = math.floor(x)
        u = x - k
        i = bisect_right(self._xs, u) - 1
        x0, y0 = self.points[i]
        if i + 1 < len(self.points):
            x1, y1 = self.points[i + 1]
        else:
            x1, y1 = Fraction(1), self.points[0][1] + 1
        return y0 + (y1 - y0) * (u - x0) / (x1 - x0) + k

    def __call__(self, x) -> Fraction:
        return _frac_part(self.lift(x))

    def lift_inverse(self, y) -> Fraction:
        y = Fraction(y)
        y0 = self.points[0][1]
        k = math.floor(y - y0)
        v = y - k
        ys = [p[1] for p in self.points]
        i = bisect_right(ys, v) - 1
        x0, a = self.points[i]
        if i + 1 < len(self.points):
            x1, b = self.points[i + 1]
        else:
            x1, b = Fraction(1), y0 + 1
        return x0 + (x1 - x0) * (v - a) / (b - a) + k

    def __eq__(self, other):
        if not isinstance(other, CircleMap):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        body = ", ".join(f"{format_dyadic(x)}->{format_dyadic(y)}" for x, y in self.points)
        return f"CircleMap({body})"

    @property
    def is_identity(self) -> bool:
        return self.points == ((0, 0),)

    def __mul__(self, other):
        return circle_compose(self, other)

    def inverse(self) -> "CircleMap":
        return circle_inverse(self)

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = CircleMap.identity()
        for _ in range(abs(k)):
            out = out * base
        return out


def _canonical(pts: list[tuple[Fraction, Fraction]], check: bool):
    if not pts:
        raise ValueError("a circle map needs at least one lift point")
    pts = sorted(pts)
    if pts[-1][0] - pts[0][0] >= 1:
        raise ValueError("lift points must span less than one period")
    if check:
        for x, y in pts:
            if not (is_dyadic(x) and is_dyadic(y)):
                raise ValueError(f"lift point ({x}, {y}) is not dyadic")
    ext = pts + [(pts[0][0] + 1, pts[0][1] + 1)]
    slopes = []
    for (xa, ya), (xb, yb) in zip(ext, ext[1:]):
        if xb == xa:
            raise ValueError("repeated x in lift points")
        s = (yb - ya) / (xb - xa)
        if check and not _is_pow2(s):
            raise ValueError(f"slope {s} on [{xa}, {xb}] is not a power of 2")
        slopes.append(s)
    # re-sample at 0 and at every breakpoint reduced into [0, 1)
    def lift(x):
        k = math.floor(x - pts[0][0])
        u = x - k
        i = bisect_right([p[0] for p in pts], u) - 1
        xa, ya = ext[i]
        return ya + slopes[i] * (u - xa) + k

    xs = sorted({Fraction(0)} | {_frac_part(x) for x, _ in pts})
    ys = [lift(x) for x in xs]
    shift = math.floor(ys[0])
    samples = [(x, y - shift) for x, y in zip(xs, ys)]
    # drop points that are not true breakpoints (except 0)
    closed = samples + [(Fraction(1), samples[0][1] + 1)]
    keep = [samples[0]]
    for i in range(1, len(samples)):
        xa, ya = keep[-1]
        xb, yb = samples[i]
        xc, yc = closed[i + 1]
        if (yb - ya) * (xc - xb) != (yc - yb) * (xb - xa):
            keep.append(samples[i])
    return tuple(keep)


def _check(f, g):
    if not isinstance(f, CircleMap) or not isinstance(g, CircleMap):
        raise FamilyMismatch(f"cannot compose {type(f).__name__} with {type(g).__name__}")


def circle_compose(f: CircleMap, g: CircleMap) -> CircleMap:
    """``f o g``: breakpoints of ``g`` merged with ``g``-preimages of those of ``f``."""
    _check(f, g)
    xs = {x for x, _ in g.points}
    xs |= {_frac_part(g.lift_inverse(x)) for x, _ in f.points}
    return CircleMap([(x, f.lift(g.lift(x))) for x in sorted(xs)], check=False)


def circle_inverse(f: CircleMap) -> CircleMap:
    return CircleMap([(y, x) for x, y in f.points], check=False)


def circle_eval(f: CircleMap, x) -> Fraction:
    x = dyadic(x)
    if not 0 <= x < 1:
        raise ValueError(f"{x} is not in [0, 1)")
    return f(x)


def rotation(t) -> CircleMap:
    t = _frac_part(dyadic(t))
    return CircleMap([(Fraction(0), t)])


def x0() -> CircleMap:
    """First generator of ``F``, seen inside ``T`` (it fixes 0)."""
    F = Fraction
    return CircleMap([(F(0), F(0)), (F(1, 2), F(1, 4)), (F(3, 4), F(1, 2))])


def x1() -> CircleMap:
    F = Fraction
    return CircleMap([(F(0), F(0)), (F(1, 2), F(1, 2)), (F(3, 4), F(5, 8)), (F(7, 8), F(3, 4))])


def commutator(a: CircleMap, b: CircleMap) -> CircleMap:
    return a * b * a.inverse() * b.inverse()


# --------------------------------------------------------------------------
# standard dyadic subdivisions


def dyadic_pieces(a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Greedy split of ``[a, b]`` into standard dyadic intervals ``[k/2^j, (k+1)/2^j]``."""
    a, b = dyadic(a), dyadic(b)
    if not a < b:
        raise ValueError("empty interval")
    out = []
    while a < b:
        # largest standard interval starting at a and staying inside [a, b]
        j = 0
        while True:
            step = Fraction(1, 2**j)
            if (a / step).denominator == 1 and a + step <= b:
                break
            j += 1
        out.append((a, a + step))
        a += step
    return out


def _halve_to(pieces: list, k: int) -> list:
    pieces = list(pieces)
    while len(pieces) < k:
        # split the longest piece (first one on ties) to keep things balanced
        i = max(range(len(pieces)), key=lambda t: (pieces[t][1] - pieces[t][0], -t))
        a, b = pieces[i]
        m = (a + b) / 2
        pieces[i : i + 1] = [(a, m), (m, b)]
    return pieces


def interval_map_points(a, b, c, d) -> list[tuple[Fraction, Fraction]]:
    """Lift points of a dyadic PL increasing map ``[a, b] -> [c, d]``."""
    p = dyadic_pieces(a, b)
    q = dyadic_pieces(c, d)
    k = max(len(p), len(q))
    p, q = _halve_to(p, k), _halve_to(q, k)
    return [(x[0], y[0]) for x, y in zip(p, q)]


# --------------------------------------------------------------------------
# random elements


def _random_subdivision(k: int, rng: random.Random) -> list[tuple[Fraction, Fraction]]:
    pieces = [(Fraction(0), Fraction(1))]
    while len(pieces) < k:
        i = rng.randrange(len(pieces))
        a, b = pieces[i]
        m = (a + b) / 2
        pieces[i : i + 1] = [(a, m), (m, b)]
    return pieces


def random_element(seed, size: int) -> CircleMap:
    """Random element of ``T`` built from two subdivisions with ``<= size`` pieces."""
    if size < 1:
        raise ValueError("size must be >= 1")
    if size == 1:
        return CircleMap.identity()
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    k = rng.randint(1, size)
    dom = _random_subdivision(k, rng)
    cod = _random_subdivision(k, rng)
    shift = rng.randrange(k)
    pts = []
    for i, (a, _) in enumerate(dom):
        j = i + shift
        pts.append((a, cod[j % k][0] + (j // k)))
    return CircleMap(pts)


def positively_ordered(ts: Sequence) -> bool:
    """Strict positive cyclic order: distinct points whose forward gaps sum to one turn."""
    ts = [_frac_part(dyadic(t)) for t in ts]
    if len(set(ts)) != len(ts):
        return False
    if len(ts) <= 2:
        return True
    total = sum(_frac_part(ts[(i + 1) % len(ts)] - ts[i]) for i in range(len(ts)))
    return total == 1
