"""Transitivity and gluing for Thompson's group ``T`` acting on the circle.

Arcs are open intervals ``(a, b)`` of ``R/Z`` given by dyadic endpoints and
read counterclockwise from ``a`` to ``b``.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from ..elements.circle import CircleMap, dyadic, interval_map_points, positively_ordered
from .witnesses import Inconclusive, WitnessError


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _lifted(ts: Sequence[Fraction]) -> list[Fraction]:
    """Lift a positively ordered tuple to an increasing sequence starting in ``[0, 1)``."""
    out = [_frac(ts[0])]
    for t in ts[1:]:
        out.append(out[-1] + _frac(t - out[-1]))
    return out


def circle_ordered_witness(src: Sequence, dst: Sequence) -> CircleMap:
    """``f`` in ``T`` with ``f(src[i]) = dst[i]``, built arc by arc from dyadic interval maps."""
    src = [dyadic(t) for t in src]
    dst = [dyadic(t) for t in dst]
    if len(src) != len(dst) or not src:
        raise ValueError("tuples must be nonempty and of equal length")
    if len(src) > 8:
        raise ValueError("at most 8 points are supported")
    if not positively_ordered(src) or not positively_ordered(dst):
        raise ValueError("tuples must be strictly positively cyclically ordered")
    s, d = _lifted(src), _lifted(dst)
    s.append(s[0] + 1)
    d.append(d[0] + 1)
    pts = []
    for i in range(len(src)):
        pts.extend(interval_map_points(s[i], s[i + 1], d[i], d[i + 1]))
    f = CircleMap(pts)
    for a, b in zip(src, dst):
        if f(_frac(a)) != _frac(b):
            raise WitnessError("circle witness misses a point")
    return f


def _fixes(g: CircleMap, x: Fraction) -> bool:
    return g(_frac(x)) == _frac(x)


def circle_glue(arcs: Sequence[tuple]) -> CircleMap:
    """Glue ``(o_i, g_i)``: on ``[o_i, o_{i+1}]`` the result agrees with ``g_i``.

    Every ``g_i`` must fix both endpoints of its arc and map the arc onto itself.
    """
    if not arcs:
        return CircleMap.identity()
    os_ = [dyadic(o) for o, _ in arcs]
    if not positively_ordered(os_):
        raise ValueError("arc endpoints must be positively ordered")
    lo = _lifted(os_)
    lo.append(lo[0] + 1)
    pts = []
    for i, (_, g) in enumerate(arcs):
        a, b = lo[i], lo[i + 1]
        if not (_fixes(g, a) and _fixes(g, b)):
            raise ValueError(f"element on arc {i} does not fix its endpoints")
        shift = g.lift(a) - a
        if g.lift(b) - shift != b:
            raise ValueError(f"element on arc {i} does not preserve its arc")
        inner = []
        for x, _ in g.points:
            k = math.ceil(a - x)
            xx = x + k
            while xx < b:
                if xx > a:
                    inner.append(xx)
                xx += 1
        pts.append((a, a))
        pts.extend((x, g.lift(x) - shift) for x in sorted(set(inner)))
    f = CircleMap(pts)
    for i, (_, g) in enumerate(arcs):
        a, b = lo[i], lo[i + 1]
        probes = [a, b, (a + b) / 2] + [x for x in _breaks_in(g, a, b)]
        if any(f(_frac(x)) != g(_frac(x)) for x in probes):
            raise WitnessError("glued circle map disagrees on an arc")
    return f


def _breaks_in(g, a, b):
    for x, _ in g.points:
        xx = x + math.ceil(a - x)
        while xx <= b:
            yield xx
            xx += 1


def agrees_on_arc(f: CircleMap, g: CircleMap, a, b, k: int = 16) -> bool:
    """Exact agreement at all breakpoints of both maps inside ``[a, b]`` and ``k`` grid points.

    Two PL maps agreeing at every breakpoint of either one in an interval and
    at its ends agree on the whole interval.
    """
    a, b = Fraction(a), Fraction(b)
    if b <= a:
        b += 1
    probes = {a, b} | set(_breaks_in(f, a, b)) | set(_breaks_in(g, a, b))
    probes |= {a + (b - a) * Fraction(i, k) for i in range(k + 1)}
    return all(f(_frac(x)) == g(_frac(x)) for x in probes)


def random_arc_map(a, b, rng: random.Random, pieces: int = 4) -> CircleMap:
    """Random element of ``T`` supported on the arc ``[a, b]`` (identity outside)."""
    a = dyadic(a)
    b = dyadic(b)
    if b <= a:
        b += 1

    def subdivision(k):
        parts = [(a, b)]
        while len(parts) < k:
            i = rng.randrange(len(parts))
            x, y = parts[i]
            m = (x + y) / 2
            parts[i : i + 1] = [(x, m), (m, y)]
        return parts

    k = rng.randint(1, pieces)
    p, q = subdivision(k), subdivision(k)
    pts = [(x, y) for (x, _), (y, _) in zip(p, q)]
    pts.append((b, b))
    if b - a < 1:
        return CircleMap(pts)
    return CircleMap(pts[:-1])


def random_ordered_tuple(rng: random.Random, m: int, level: int = 5) -> list[Fraction]:
    grid = rng.sample(range(2**level), m)
    ts = sorted(Fraction(t, 2**level) for t in grid)
    shift = rng.randrange(m)
    return ts[shift:] + ts[:shift]


# --------------------------------------------------------------------------
# arcs as basis members


def arcs_admissible(arcs: Sequence[tuple]) -> bool:
    """Closures pairwise disjoint and union not dense: endpoints strictly cyclically ordered."""
    ends = [e for arc in arcs for e in arc]
    return positively_ordered(ends) and len(ends) == len(set(_frac(Fraction(e)) for e in ends))


def circle_condition_C(arc, eps=Fraction(1, 64)) -> tuple[bool, tuple]:
    """For ``I = (a, b)`` the arc ``J = (b - eps, a + eps)`` contains the closed complement of ``I``."""
    a, b = (dyadic(x) for x in arc)
    length = _frac(b - a)
    eps = min(eps, length / 4)
    J = (_frac(b - eps), _frac(a + eps))
    # [b, a] inside (b - eps, a + eps) and J leaves (a + eps, b - eps) uncovered
    ok = 0 < eps and _frac(J[1] - J[0]) == 1 - length + 2 * eps < 1
    return ok, J


def weak_triple_circle(g: CircleMap, h: CircleMap, level: int = 4, max_level: int = 8):
    """Arcs ``M, N, P`` and ``b`` in ``T`` with ``b g M = M``, ``b h N = N``, ``b P = P``.

    Grid search over arcs of length ``2^-level``; the images keep the cyclic
    order of ``(M, N, P)`` so a six-point ordered witness exists.
    """
    for lv in range(level, max_level + 1):
        step = Fraction(1, 2**lv)
        cells = [(k * step, (k + 1) * step) for k in range(2**lv)]
        for P in cells:
            for M in cells:
                gM = (g(M[0]), g(M[1]))
                if M == P:
                    continue
                for N in cells:
                    if N in (M, P):
                        continue
                    hN = (h(N[0]), h(N[1]))
                    if not arcs_admissible([M, N, P]) or not arcs_admissible([gM, hN, P]):
                        continue
                    src = [*gM, *hN, *P]
                    dst = [*M, *N, *P]
                    b = circle_ordered_witness(src, dst)
                    return M, N, P, b
    raise Inconclusive("no circle triple found")
