"""Eventually periodic boundary points.

A point of a Cantor set is an infinite word; we only represent eventually
periodic ones, ``pre + per + per + ...``.  The class is closed under prefix
removal and prefix insertion, which is all the group actions need.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


def _primitive(per: str) -> str:
    n = len(per)
    for d in range(1, n + 1):
        if n % d == 0 and per[:d] * (n // d) == per:
            return per[:d]
    return per


@dataclass(frozen=True)
class EPWord:
    pre: str
    per: str

    def __post_init__(self):
        if not self.per:
            raise ValueError("period must be nonempty")
        pre, per = self.pre, _primitive(self.per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    def __str__(self):
        return f"{self.pre}({self.per})"

    @classmethod
    def parse(cls, text: str) -> "EPWord":
        m = re.fullmatch(r"\s*([0-9]*)\(([0-9]+)\)\s*", text)
        if not m:
            raise ValueError(f"bad eventually periodic word {text!r}; expected pre(per)")
        return cls(m.group(1), m.group(2))

    def expand(self, length: int) -> str:
        s = self.pre
        if len(s) >= length:
            return s[:length]
        reps = (length - len(s)) // len(self.per) + 1
        return (s + self.per * reps)[:length]

    def startswith(self, word: str) -> bool:
        return self.expand(len(word)) == word

    def drop(self, k: int) -> "EPWord":
        if k <= len(self.pre):
            return EPWord(self.pre[k:], self.per)
        shift = (k - len(self.pre)) % len(self.per)
        return EPWord("", self.per[shift:] + self.per[:shift])

    def prepend(self, word: str) -> "EPWord":
        return EPWord(word + self.pre, self.per)


@dataclass(frozen=True)
class CantorPoint:
    """Point of the boundary of the forest ``T_n(r)``."""

    root: int
    word: EPWord

    def __str__(self):
        return f"{self.root}:{self.word}"

    @classmethod
    def parse(cls, text: str) -> "CantorPoint":
        root, _, w = text.partition(":")
        return cls(int(root), EPWord.parse(w))


@dataclass(frozen=True)
class ProductPoint:
    """Point of ``C^S``: one eventually periodic binary word per coordinate."""

    words: tuple[EPWord, ...]

    def __str__(self):
        return "<" + ",".join(str(w) for w in self.words) + ">"


def least_point_in_cylinder(cyl, tail: str = "0") -> CantorPoint:
    return CantorPoint(cyl.root, EPWord(cyl.word, tail))


def sample_points(s, k: int, tails=("0", "1", "01", "10", "001", "011", "110", "0111")) -> list:
    """Deterministic points inside a clopen set.

    Points are lexicographically least extensions (tail ``(0)``) first, then
    other short periodic tails, cycling over the pieces of ``s``.
    """
    from .cantor import BrickSet

    pieces = list(s.bricks) if isinstance(s, BrickSet) else list(s.cylinders)
    out = []
    if not pieces:
        return out
    for t in range(len(tails) * 4):
        for p in pieces:
            if len(out) >= k:
                return out
            tail = tails[t % len(tails)]
            pad = "0" * (t // len(tails))
            if isinstance(s, BrickSet):
                words = tuple(EPWord(w + pad, tails[(t + i) % len(tails)]) for i, w in enumerate(p.words))
                out.append(ProductPoint(words))
            else:
                out.append(CantorPoint(p.root, EPWord(p.word + pad, tail)))
    return list(dict.fromkeys(out))[:k]
