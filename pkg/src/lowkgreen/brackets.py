"""Ordered exponential integrals over piecewise-constant functions.

``bracket((s1, ..., sn), a, b, v)`` is the integral of
``exp(s1 v(z1) + ... + sn v(zn))`` over ``a <= z1 <= ... <= zn <= b``.
Because v is piecewise constant the inner integrals are piecewise
polynomials, so the value is obtained exactly by carrying
``I_j(z) = int_a^z exp(s_j v(t)) I_{j-1}(t) dt`` as a :class:`PiecewisePoly`.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, UnsupportedOrderError

MAX_WORD = 4
MAX_DEGREE = 8


class PiecewiseSource(Protocol):
    def pieces(self, a: float, b: float) -> list[tuple[float, float, float]]: ...


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial with coefficients in local coordinates.

    On ``[breakpoints[i], breakpoints[i+1]]`` the value is
    ``sum_j coeffs[i][j] * (t - breakpoints[i])**j``.
    """

    breakpoints: tuple[float, ...]
    coeffs: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.breakpoints) - 1:
            raise DomainError("need one coefficient list per interval")
        if any(len(c) - 1 > MAX_DEGREE for c in self.coeffs):
            raise DomainError(f"piece degree exceeds {MAX_DEGREE}")

    @classmethod
    def constant(cls, value: float, a: float, b: float) -> "PiecewisePoly":
        return cls((a, b), ((value,),))

    @property
    def span(self) -> tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]

    def _index(self, t: float) -> int:
        lo, hi = self.span
        if t < lo - 1e-12 * max(1.0, abs(lo)) or t > hi + 1e-12 * max(1.0, abs(hi)):
            raise DomainError(f"{t!r} outside [{lo!r}, {hi!r}]")
        i = bisect_right(self.breakpoints, t) - 1
        return min(max(i, 0), len(self.coeffs) - 1)

    def __call__(self, t: float) -> float:
        i = self._index(t)
        return float(npoly.polyval(t - self.breakpoints[i], self.coeffs[i]))

    @property
    def degree(self) -> int:
        return max(len(c) for c in self.coeffs) - 1

    def integral(self) -> float:
        total = 0.0
        for (lo, hi), c in zip(zip(self.breakpoints, self.breakpoints[1:]), self.coeffs):
            total += float(npoly.polyval(hi - lo, npoly.polyint(c)))
        return total

    def weighted_antiderivative(self, weights: Sequence[float]) -> "PiecewisePoly":
        """``z -> int_{start}^z w(t) p(t) dt`` with w constant on each piece."""
        out = []
        acc = 0.0
        for (lo, hi), c, w in zip(zip(self.breakpoints, self.breakpoints[1:]),
                                  self.coeffs, weights):
            ci = npoly.polyint(np.asarray(c, dtype=float) * w)
            ci[0] = acc
            out.append(tuple(float(x) for x in ci))
            acc = float(npoly.polyval(hi - lo, ci))
        return PiecewisePoly(self.breakpoints, tuple(out))


def _check_word(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(int(s) for s in word)
    if not w:
        raise DomainError("sign word must be nonempty")
    if any(s not in (1, -1) for s in w):
        raise DomainError("signs must be +1 or -1")
    if len(w) > MAX_WORD:
        raise UnsupportedOrderError(f"words longer than {MAX_WORD} are not supported")
    return w


def parse_word(word) -> tuple[int, ...]:
    """Accept ``"+-+"``, ``"[+,-]"`` or a sequence of +-1."""
    if isinstance(word, str):
        chars = [c for c in word if c in "+-"]
        return _check_word([1 if c == "+" else -1 for c in chars])
    return _check_word(word)


def bracket_function(word, a: float, b: float, v: PiecewiseSource) -> PiecewisePoly:
    """The running bracket ``z -> [word]_a^z`` on ``[a, b]``."""
    w = parse_word(word)
    if a > b:
        raise DomainError("bracket needs a <= b")
    pcs = v.pieces(a, b)
    if not pcs:
        return PiecewisePoly.constant(0.0, a, b if b > a else a)
    bps = tuple([p[0] for p in pcs] + [pcs[-1][1]])
    vals = [p[2] for p in pcs]
    cur = PiecewisePoly(bps, tuple((1.0,) for _ in pcs))
    for s in w:
        cur = cur.weighted_antiderivative([math.exp(s * val) for val in vals])
    return cur


def bracket(word, a: float, b: float, v: PiecewiseSource) -> float:
    """Exact ``[word]_a^b`` over the piecewise-constant ``v``."""
    if a > b:
        raise DomainError("bracket needs a <= b")
    if a == b:
        parse_word(word)
        return 0.0
    f = bracket_function(word, a, b, v)
    return f(b)


def periodic_bracket(word, x: float, tail) -> float:
    """``p[word]_{x-L}^x`` for a periodic tail."""
    return bracket(word, x - tail.period, x, tail)
