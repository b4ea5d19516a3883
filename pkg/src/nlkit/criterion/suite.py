"""Seeded sweeps over the four criterion conditions, with recomputable evidence per item."""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field

from ..cantor import Brick, tuple_admissible
from ..elements import CircleMap, element_to_dict
from ..elements.circle import format_dyadic, random_element as random_circle
from . import circle as cw
from .families import TwistedFamily, VFamily, random_tuple
from .witnesses import (
    Inconclusive,
    agrees_on,
    condition_C,
    fixes_pointwise,
    glue,
    transitivity_witness,
    weak_triple_witness,
)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class WitnessReport:
    condition: str
    seed: object
    inputs: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    verdict: str = PASS
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _verdict(checks: dict) -> str:
    return PASS if checks and all(checks.values()) else FAIL


def run_item(condition: str, seed, body) -> WitnessReport:
    """Run ``body(report)``; unexpected exceptions count as failures, exhaustion as inconclusive."""
    rep = WitnessReport(condition, seed)
    try:
        body(rep)
        rep.verdict = _verdict(rep.checks)
    except Inconclusive as exc:
        rep.verdict, rep.note = INCONCLUSIVE, str(exc)
    except Exception as exc:  # a crash is never a pass
        rep.verdict, rep.note = FAIL, f"{type(exc).__name__}: {exc}"
    return rep


def _rng(seed, condition: str, i: int) -> random.Random:
    return random.Random(f"{seed}/{condition}/{i}")


def _s(x) -> str:
    return str(x)


# --------------------------------------------------------------------------
# Cantor-set families


def exhaustive_cells(fam, max_cells: int = 8) -> list:
    """Finest grid with at most ``max_cells`` cells; all sets up to that depth are unions of them."""
    if isinstance(fam, VFamily):
        d = 1
        while fam.arity.r * fam.arity.n ** (d + 1) <= max_cells:
            d += 1
        return fam.cells(d)
    depths = [0] * fam.dims
    i = 0
    while 2 ** (sum(depths) + 1) <= max_cells:
        depths[i % fam.dims] += 1
        i += 1
    per = [["".join(w) for w in itertools.product("01", repeat=d)] for d in depths]
    return [Brick(ws) for ws in itertools.product(*per)]


def check_condition_C(fam) -> WitnessReport:
    def body(rep):
        cells = exhaustive_cells(fam)
        checked, bad = 0, []
        for mask in range(1, 2 ** len(cells) - 1):
            s = fam.as_set([c for k, c in enumerate(cells) if mask >> k & 1])
            ok, _ = condition_C(s)
            checked += 1
            if not ok:
                bad.append(str(s))
        rep.inputs = {"cells": len(cells)}
        rep.checks = {"complement_in_basis": not bad}
        rep.witnesses = {"sets_checked": checked, "failures": bad[:5]}

    return run_item("C", "exhaustive", body)


def _preserving(fam, s, rng):
    """Random element mapping ``s`` onto itself."""
    r = fam.random_element(rng)
    return transitivity_witness((r.image(s),), (s,), fam) * r


def _cantor_items(fam, budget: int, seed):
    if budget <= 0:
        return []
    items = [check_condition_C(fam)]
    for i in range(budget):
        rng = _rng(seed, "2T", i)

        def body(rep, rng=rng):
            src, sizes = random_tuple(fam, rng, 2)
            dst, _ = random_tuple(fam, rng, 2, sizes=sizes)
            g = transitivity_witness(src, dst, fam)
            rep.inputs = {"src": [_s(x) for x in src], "dst": [_s(x) for x in dst]}
            rep.witnesses = {"g": element_to_dict(g)}
            rep.checks = {f"g src[{k}] = dst[{k}]": g.image(a) == b for k, (a, b) in enumerate(zip(src, dst))}

        items.append(run_item("2T", i, body))
    for i in range(budget):
        rng = _rng(seed, "3T", i)

        def body(rep, rng=rng):
            g, h = fam.random_element(rng), fam.random_element(rng)
            wt = weak_triple_witness(g, h, fam)
            rep.inputs = {"g": element_to_dict(g), "h": element_to_dict(h)}
            rep.witnesses = {"M": _s(wt.M), "N": _s(wt.N), "P": _s(wt.P), "b": element_to_dict(wt.b)}
            gM, hN = g.image(wt.M), h.image(wt.N)
            rep.checks = {
                "(M,N,P) admissible": tuple_admissible((wt.M, wt.N, wt.P)),
                "(gM,hN,P) admissible": tuple_admissible((gM, hN, wt.P)),
                "b gM = M": wt.b.image(gM) == wt.M,
                "b hN = N": wt.b.image(hN) == wt.N,
                "b P = P": wt.b.image(wt.P) == wt.P,
            }

        items.append(run_item("3T", i, body))
    for i in range(budget):
        rng = _rng(seed, "L", i)

        def body(rep, rng=rng):
            (I, J, K), _ = random_tuple(fam, rng, 3)
            g, h = _preserving(fam, I, rng), _preserving(fam, J, rng)
            b = glue([(I, g), (J, h)], fam)
            rep.inputs = {"I": _s(I), "J": _s(J), "K": _s(K), "g": element_to_dict(g), "h": element_to_dict(h)}
            rep.witnesses = {"b": element_to_dict(b)}
            rep.checks = {
                "b|I = g|I": agrees_on(b, g, I),
                "b|J = h|J": agrees_on(b, h, J),
                "b|K = id": fixes_pointwise(b, K),
            }

        items.append(run_item("L", i, body))
    return items


# --------------------------------------------------------------------------
# the circle


def _fmt(ts) -> list[str]:
    return [format_dyadic(t) for t in ts]


def _circle_items(budget: int, seed):
    items = []
    for i in range(budget):
        rng = _rng(seed, "C", i)

        def body(rep, rng=rng):
            a, b = sorted(cw.random_ordered_tuple(rng, 2))
            ok, J = cw.circle_condition_C((a, b))
            rep.inputs = {"I": _fmt((a, b))}
            rep.witnesses = {"J": _fmt(J)}
            rep.checks = {"complement of I inside J, J proper": ok}

        items.append(run_item("C", i, body))
    for i in range(budget):
        rng = _rng(seed, "2T", i)

        def body(rep, rng=rng):
            src, dst = cw.random_ordered_tuple(rng, 4), cw.random_ordered_tuple(rng, 4)
            f = cw.circle_ordered_witness(src, dst)
            rep.inputs = {"src": _fmt(src), "dst": _fmt(dst)}
            rep.witnesses = {"f": element_to_dict(f)}
            rep.checks = {"f src = dst": all(f(a) == b for a, b in zip(src, dst))}

        items.append(run_item("2T", i, body))
    for i in range(budget):
        rng = _rng(seed, "3T", i)

        def body(rep, rng=rng):
            g, h = random_circle(rng, 8), random_circle(rng, 8)
            M, N, P, b = cw.weak_triple_circle(g, h)
            bg, bh = b * g, b * h
            rep.inputs = {"g": element_to_dict(g), "h": element_to_dict(h)}
            rep.witnesses = {"M": _fmt(M), "N": _fmt(N), "P": _fmt(P), "b": element_to_dict(b)}
            rep.checks = {
                "(M,N,P) admissible": cw.arcs_admissible([M, N, P]),
                "(gM,hN,P) admissible": cw.arcs_admissible([(g(M[0]), g(M[1])), (h(N[0]), h(N[1])), P]),
                "b gM = M": (bg(M[0]), bg(M[1])) == M,
                "b hN = N": (bh(N[0]), bh(N[1])) == N,
                "b P = P": (b(P[0]), b(P[1])) == P,
            }

        items.append(run_item("3T", i, body))
    for i in range(budget):
        rng = _rng(seed, "L", i)

        def body(rep, rng=rng):
            e = sorted(cw.random_ordered_tuple(rng, 6))
            I, J, K = (e[0], e[1]), (e[2], e[3]), (e[4], e[5])
            g, h = cw.random_arc_map(*I, rng), cw.random_arc_map(*J, rng)
            ident = CircleMap.identity()
            b = cw.circle_glue([(I[0], g), (I[1], ident), (J[0], h), (J[1], ident), (K[0], ident), (K[1], ident)])
            rep.inputs = {"I": _fmt(I), "J": _fmt(J), "K": _fmt(K), "g": element_to_dict(g), "h": element_to_dict(h)}
            rep.witnesses = {"b": element_to_dict(b)}
            rep.checks = {
                "b|I = g|I": cw.agrees_on_arc(b, g, *I),
                "b|J = h|J": cw.agrees_on_arc(b, h, *J),
                "b|K = id": cw.agrees_on_arc(b, ident, *K),
            }

        items.append(run_item("L", i, body))
    for i in range(budget):
        rng = _rng(seed, "6T", i)

        def body(rep, rng=rng):
            src, dst = cw.random_ordered_tuple(rng, 6), cw.random_ordered_tuple(rng, 6)
            f = cw.circle_ordered_witness(src, dst)
            rep.inputs = {"src": _fmt(src), "dst": _fmt(dst)}
            rep.witnesses = {"f": element_to_dict(f)}
            rep.checks = {"f src = dst": all(f(a) == b for a, b in zip(src, dst))}

        items.append(run_item("6T", i, body))
    return items


def count_verdicts(items) -> dict:
    counts: dict = {}
    for it in items:
        d = it if isinstance(it, dict) else it.to_dict()
        c = counts.setdefault(d["condition"], {PASS: 0, FAIL: 0, INCONCLUSIVE: 0})
        c[d["verdict"]] += 1
    return dict(sorted(counts.items()))


def run_criterion_suite(family, budget: int, seed=0) -> dict:
    """Verify (C), (2T), (3T), (L) on ``budget`` seeded samples each (plus 6T for ``T``).

    ``family`` is a :class:`VFamily`, a :class:`TwistedFamily` or the string ``"T"``.
    """
    if family == "T":
        items = _circle_items(budget, seed)
        name = "T"
    elif isinstance(family, (VFamily, TwistedFamily)):
        items = _cantor_items(family, budget, seed)
        name = repr(family)
    else:
        raise ValueError(f"unsupported family {family!r}")
    dicts = [it.to_dict() for it in items]
    return {"family": name, "budget": budget, "seed": seed, "counts": count_verdicts(dicts), "items": dicts}
