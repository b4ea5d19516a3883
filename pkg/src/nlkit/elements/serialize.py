"""JSON-friendly dictionaries for group elements, using the text grammar of :mod:`nlkit.cantor`."""

from __future__ import annotations

from ..cantor import Arity, parse_brick, parse_cylinder
from .circle import CircleMap, format_dyadic, parse_dyadic
from .twisted import TwistedElement, TwistGroup
from .vgroup import VElement


def element_to_dict(g) -> dict:
    if isinstance(g, VElement):
        return {
            "family": "V",
            "n": g.arity.n,
            "r": g.arity.r,
            "domain": [str(d) for d in g.domain],
            "codomain": [str(c) for c in g.codomain],
            "sigma": list(g.sigma),
        }
    if isinstance(g, TwistedElement):
        return {
            "family": "SVG",
            "dims": g.dims,
            "generators": [list(p) for p in g.group.generators],
            "domain": [str(d) for d in g.domain],
            "codomain": [str(c) for c in g.codomain],
            "sigma": list(g.sigma),
            "twists": [list(t) for t in g.twists],
        }
    if isinstance(g, CircleMap):
        return {
            "family": "T",
            "breakpoints": [format_dyadic(x) for x in g.breakpoints],
            "slopes": [format_dyadic(s) for s in g.slopes],
            "offset": format_dyadic(g.offset),
        }
    raise TypeError(f"cannot serialize {type(g).__name__}")


def element_from_dict(d: dict):
    fam = d.get("family")
    if fam == "V":
        arity = Arity(d["n"], d["r"])
        dom = [parse_cylinder(t) for t in d["domain"]]
        cod = [parse_cylinder(t) for t in d["codomain"]]
        return VElement.from_patterns(arity, dom, cod, d["sigma"])
    if fam == "SVG":
        group = TwistGroup(d["dims"], d["generators"])
        dom = [parse_brick(t) for t in d["domain"]]
        cod = [parse_brick(t) for t in d["codomain"]]
        sigma = d["sigma"]
        return TwistedElement(group, [(dom[i], cod[sigma[i]], tuple(d["twists"][i])) for i in range(len(dom))])
    if fam == "T":
        xs = [parse_dyadic(t) for t in d["breakpoints"]]
        slopes = [parse_dyadic(t) for t in d["slopes"]]
        y = parse_dyadic(d["offset"])
        pts = []
        for i, x in enumerate(xs):
            pts.append((x, y))
            nxt = xs[i + 1] if i + 1 < len(xs) else 1
            y = y + slopes[i] * (nxt - x)
        g = CircleMap(pts)
        if g.points[0][1] + 1 != y:
            raise ValueError("slopes do not give a degree-one map")
        return g
    raise ValueError(f"unknown element family {fam!r}")
