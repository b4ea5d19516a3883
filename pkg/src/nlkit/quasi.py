"""Quasimorphisms, homogenization, Busemann estimates, sign-twisted quasicocycles,
quasi-line generating sets and the wreath-product lift.

Values are exact (``int``/``Fraction``) whenever the inputs are.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .hypgraph import FiniteGraph, GraphMap, all_distances, translation_length_estimate

TOL = 1e-9


class HypothesisError(ValueError):
    pass


# --------------------------------------------------------------------------
# group oracles


@dataclass(frozen=True)
class GroupOracle:
    name: str
    op: Callable
    inv: Callable
    identity: Hashable
    generators: tuple

    def power(self, g, n: int):
        base = g if n >= 0 else self.inv(g)
        out = self.identity
        for _ in range(abs(n)):
            out = self.op(out, base)
        return out

    def word(self, letters: Iterable) -> Hashable:
        out = self.identity
        for x in letters:
            out = self.op(out, x)
        return out

    def ball(self, radius: int, gens: Sequence | None = None) -> dict:
        """Word lengths of every element within ``radius`` (symmetric generating set)."""
        gens = list(self.generators if gens is None else gens)
        moves = list(dict.fromkeys(gens + [self.inv(g) for g in gens]))
        dist = {self.identity: 0}
        q = deque([self.identity])
        while q:
            u = q.popleft()
            if dist[u] == radius:
                continue
            for s in moves:
                v = self.op(u, s)
                if v not in dist:
                    dist[v] = dist[u] + 1
                    q.append(v)
        return dist


def integers() -> GroupOracle:
    return GroupOracle("Z", lambda a, b: a + b, lambda a: -a, 0, (1,))


def dihedral() -> GroupOracle:
    """Infinite dihedral group as pairs ``(k, e)``: ``x -> e x + k`` on the integers."""

    def op(a, b):
        return (a[0] + a[1] * b[0], a[1] * b[1])

    def inv(a):
        return (-a[1] * a[0], a[1])

    return GroupOracle("D_inf", op, inv, (0, 1), ((1, 1), (0, -1)))


@dataclass(frozen=True)
class WreathModel:
    """``A wr_S Z`` with ``A`` the integers and ``Z`` shifting ``S = C x {0..copies-1}``.

    ``C`` is the cyclic group of order ``m`` (or the integers when ``m`` is
    ``None``); the shift orbits are the ``copies`` layers.  Elements are
    ``(f, b)`` with ``f`` a sorted tuple of ``((c, layer), a)`` with ``a != 0``.
    """

    m: int | None = 5
    copies: int = 2

    def _norm(self, c):
        return c % self.m if self.m else c

    def op(self, x, y):
        f, b = x
        g, c = y
        acc = dict(f)
        for (s, layer), a in g:
            key = (self._norm(s + b), layer)
            acc[key] = acc.get(key, 0) + a
        return (tuple(sorted((k, v) for k, v in acc.items() if v)), b + c)

    def inv(self, x):
        f, b = x
        return (tuple(sorted(((self._norm(s - b), layer), -a) for (s, layer), a in f)), -b)

    @property
    def identity(self):
        return ((), 0)

    def lamp(self, s: int, layer: int = 0, a: int = 1):
        return ((((self._norm(s), layer), a),), 0)

    def shift(self, b: int = 1):
        return ((), b)

    def oracle(self) -> GroupOracle:
        gens = (self.shift(1),) + tuple(self.lamp(0, layer) for layer in range(self.copies))
        return GroupOracle(f"Z wr Z/{self.m}" if self.m else "Z wr Z", self.op, self.inv, self.identity, gens)

    def random(self, rng: random.Random, support: int = 5, amp: int = 6, shift: int = 6):
        span = self.m or 12
        keys = rng.sample([(s, l) for s in range(span) for l in range(self.copies)], rng.randint(0, support))
        f = tuple(sorted((k, rng.choice([a for a in range(-amp, amp + 1) if a])) for k in keys))
        return (f, rng.randint(-shift, shift))


# --------------------------------------------------------------------------
# quasimorphisms


@dataclass(frozen=True)
class Quasimorphism:
    name: str
    evaluate: Callable
    claimed_defect: object = None

    def __call__(self, g):
        return self.evaluate(g)


def homomorphism_Z() -> Quasimorphism:
    return Quasimorphism("k", lambda k: k, 0)


def parity_perturbed_Z() -> Quasimorphism:
    return Quasimorphism("k + (k mod 2)", lambda k: k + k % 2, 2)


def defect_estimate(q: Quasimorphism, pairs: Iterable[tuple], oracle: GroupOracle):
    """``max |q(gh) - q(g) - q(h)|`` over the pairs: a lower bound for the defect."""
    best = 0
    for g, h in pairs:
        best = max(best, abs(q(oracle.op(g, h)) - q(g) - q(h)))
    return best


@dataclass
class Homogenization:
    value: object
    q_g: object
    defect: object
    bracket_ok: bool


def homogenize_estimate(q: Quasimorphism, g, N: int, oracle: GroupOracle, defect=None) -> Homogenization:
    """``q(g^N) / N`` and the check ``|q(g^N)/N - q(g)| <= D``.

    Since ``|q(g^N) - N q(g)| <= (N - 1) D`` the bracket holds at every
    finite ``N`` and not only in the limit.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    v = q(oracle.power(g, N))
    value = Fraction(v, N) if isinstance(v, (int, Fraction)) else v / N
    D = q.claimed_defect if defect is None else defect
    ok = True if D is None else abs(value - q(g)) <= D + (0 if isinstance(value, Fraction) else TOL)
    return Homogenization(value, q(g), D, ok)


# --------------------------------------------------------------------------
# Busemann quasimorphisms on graphs


@dataclass(frozen=True)
class RaySpec:
    graph: FiniteGraph
    vertices: tuple

    def check(self, D: np.ndarray) -> bool:
        x0 = self.vertices[0]
        return all(int(D[x0, x]) == n for n, x in enumerate(self.vertices))


@dataclass
class BusemannEstimate:
    value: int
    tail: list
    stable: bool


def busemann_estimate(ray: RaySpec, g: GraphMap, D: np.ndarray | None = None) -> BusemannEstimate:
    """``d(g x_0, x_N) - d(x_0, x_N)`` and the tail over ``n`` in ``[N/2, N]``."""
    D = all_distances(ray.graph) if D is None else D
    if not ray.check(D):
        raise ValueError("ray prefix is not geodesic")
    x0 = ray.vertices[0]
    gx = g(x0)
    if gx < 0:
        raise ValueError("g x_0 is outside the graph")
    N = len(ray.vertices) - 1
    tail = [int(D[gx, ray.vertices[n]] - D[x0, ray.vertices[n]]) for n in range(N // 2, N + 1)]
    return BusemannEstimate(tail[-1], tail, len(set(tail)) == 1)


def homogenized_busemann(ray: RaySpec, g: GraphMap, n: int, D: np.ndarray) -> Fraction:
    """``q_x(g^n) / n`` using the Busemann value of ``g^n``; undefined powers shrink ``n``."""
    p = g
    k = 1
    val = Fraction(busemann_estimate(ray, g, D).value)
    while k < n:
        p2 = g * p
        if p2(ray.vertices[0]) < 0:
            break
        p, k = p2, k + 1
        val = Fraction(busemann_estimate(ray, p, D).value, k)
    return val


@dataclass
class LinkVerdict:
    beta_hat: Fraction
    ell_hat: Fraction
    classification: str
    consistent: bool


def loxodromic_link_check(ray: RaySpec, g: GraphMap, n_max: int = 20, min_rate=Fraction(1, 4)) -> LinkVerdict:
    """Compare a nonzero homogenized Busemann value with a loxodromic translation estimate."""
    D = all_distances(ray.graph)
    beta = homogenized_busemann(ray, g, n_max, D)
    est = translation_length_estimate(g, ray.vertices[0], n_max, D, min_rate)
    lox = est.classification == "LoxodromicCandidate"
    consistent = (abs(beta) >= min_rate) == lox
    return LinkVerdict(beta, est.asymptotic, est.classification, consistent)


# --------------------------------------------------------------------------
# quasi-line generating sets


@dataclass
class QuasilineReport:
    X: list
    word_length: dict
    a: object
    b: object

    def holds(self, a, b, p: Quasimorphism) -> bool:
        return all(abs(p(g)) / a - b <= n <= a * abs(p(g)) + b for g, n in self.word_length.items())


def quasiline_generators(p: Quasimorphism, oracle: GroupOracle, C, R: int, a=2) -> QuasilineReport:
    """``X = {g : |p(g)| < C}`` inside the radius-``R`` ball and word lengths in ``X``.

    Checks the hypotheses ``D(p) <= C/2`` (on ball pairs) and that some value
    of ``p`` lies in ``(0, C/2)``; ``b`` is the least constant making the
    affine comparison hold with the given ``a``.
    """
    ball = oracle.ball(R)
    elems = sorted(ball, key=lambda g: (ball[g], repr(g)))
    D = defect_estimate(p, itertools.product(elems, elems), oracle)
    if D > Fraction(C) / 2:
        raise HypothesisError(f"defect estimate {D} exceeds C/2 = {Fraction(C) / 2}")
    if not any(0 < abs(p(g)) < Fraction(C) / 2 for g in elems):
        raise HypothesisError(f"no value of p in (0, C/2) on the ball of radius {R}")
    X = [g for g in elems if abs(p(g)) < C and g != oracle.identity]
    inside = set(elems)
    dist = {oracle.identity: 0}
    q = deque([oracle.identity])
    while q:
        u = q.popleft()
        for s in X:
            v = oracle.op(u, s)
            if v in inside and v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    b = max(max(n - a * abs(p(g)), abs(p(g)) / Fraction(a) - n) for g, n in dist.items())
    return QuasilineReport(X, dist, a, max(b, 0))


# --------------------------------------------------------------------------
# quasicocycles


@dataclass(frozen=True)
class EpsQuasicocycle:
    epsilon: Callable
    phi: Callable

    def defect(self, pairs: Iterable[tuple], oracle: GroupOracle):
        best = 0
        for g, h in pairs:
            best = max(best, abs(self.phi(oracle.op(g, h)) - self.phi(g) - self.epsilon(g) * self.phi(h)))
        return best


def check_sign_homomorphism(eps: Callable, elems: Sequence, oracle: GroupOracle) -> bool:
    return all(eps(oracle.op(g, h)) == eps(g) * eps(h) for g in elems for h in elems) and any(
        eps(g) == -1 for g in elems
    )


def quasicocycle_extend(beta: Quasimorphism, eps: Callable, s, oracle: GroupOracle) -> EpsQuasicocycle:
    """``phi(k s^i) = beta(k)`` with ``k`` in the kernel of ``eps`` and ``i`` in ``{0, 1}``."""
    if eps(s) != -1:
        raise ValueError("s lies in the kernel of eps")
    s_inv = oracle.inv(s)

    def phi(g):
        k = g if eps(g) == 1 else oracle.op(g, s_inv)
        return beta(k)

    return EpsQuasicocycle(eps, phi)


def dihedral_sign(g) -> int:
    return g[1]


def translation_part(q: Callable) -> Quasimorphism:
    """Lift a function of ``k`` to the translations ``(k, 1)`` of the dihedral group."""
    return Quasimorphism("beta", lambda g: q(g[0]))


# --------------------------------------------------------------------------
# wreath lift


def wreath_lift(phi: Callable, model: WreathModel, layer: int = 0) -> Quasimorphism:
    """``(f, b) -> sum of phi(f(s))`` over the shift orbit ``C x {layer}``."""

    def lift(x):
        f, _ = x
        return sum((phi(a) for (s, l), a in f if l == layer), 0)

    return Quasimorphism(f"lift over layer {layer}", lift)


def sample_pairs(gen: Callable, rng: random.Random, k: int) -> list[tuple]:
    return [(gen(rng), gen(rng)) for _ in range(k)]

