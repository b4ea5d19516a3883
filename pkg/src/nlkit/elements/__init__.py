"""Group elements: ``V_n(r)`` tree pairs, twisted Brin-Thompson pattern pairs, and ``T``."""

from . import circle, twisted, vgroup
from .circle import CircleMap, circle_compose, circle_eval, circle_inverse, rotation
from .serialize import element_from_dict, element_to_dict
from .twisted import TwistedElement, TwistGroup
from .vgroup import FamilyMismatch, VElement


def compose(g, h):
    """``g o h`` for any family (``h`` acts first)."""
    if isinstance(g, VElement):
        return vgroup.compose(g, h)
    if isinstance(g, TwistedElement):
        return twisted.compose(g, h)
    if isinstance(g, CircleMap):
        return circle.circle_compose(g, h)
    raise FamilyMismatch(f"not a group element: {type(g).__name__}")


def inverse(g):
    return g.inverse()


def apply_point(g, p):
    return g(p)


def image_clopen(g, c):
    return g.image(c)


def fixed_clopen(g):
    return g.fixed_set()


def conjugate(b, g):
    """``b^g = g b g^-1``."""
    return g * b * g.inverse()


def commute(a, b) -> bool:
    return a * b == b * a


__all__ = [
    "CircleMap",
    "FamilyMismatch",
    "TwistGroup",
    "TwistedElement",
    "VElement",
    "apply_point",
    "circle_compose",
    "circle_eval",
    "circle_inverse",
    "commute",
    "compose",
    "conjugate",
    "element_from_dict",
    "element_to_dict",
    "fixed_clopen",
    "image_clopen",
    "inverse",
    "rotation",
]
