"""Small-k coefficients of R_r, S and G_S for asymptotically periodic V.

Conventions: ``Delta^+-(z) = e^{+-V(z)} - e^{+-V_tail(z)}`` measured against
the tail of the relevant side, ``D(z) = e^{V0} Delta^- - e^{-V0} Delta^+`` and
``B(z) = p[+-]_{z-L}^z - p[-+]_{z-L}^z``.  Integrals over half-lines are
clipped to the support of Delta, which is exact for compact perturbations.
All integrands are piecewise polynomials in z, so Gauss-Legendre on the
merged breakpoints integrates them exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .brackets import bracket, periodic_bracket
from .errors import DomainError, UnsupportedOrderError
from .periodic import PeriodConstants, period_constants
from .potential import PeriodicPotential, PotentialProfile

_GL = np.polynomial.legendre.leggauss(6)


def _cuts(lo: float, hi: float, *sources) -> list[float]:
    pts = {lo, hi}
    for s in sources:
        pts.update(p for p in s.breakpoints(lo, hi))
    return sorted(p for p in pts if lo <= p <= hi)


def gl_integrate(f: Callable[[float], float], lo: float, hi: float, cuts: list[float]) -> float:
    """Composite Gauss-Legendre over the given cut points."""
    if hi <= lo:
        return 0.0
    nodes, weights = _GL
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        half, mid = (b - a) / 2, (b + a) / 2
        total += half * sum(w * f(mid + half * t) for t, w in zip(nodes, weights))
    return total


class _Side:
    """Per-side data: the tail, its constants, and the Delta-weighted pieces."""

    def __init__(self, profile: PotentialProfile, tail: PeriodicPotential):
        self.profile = profile
        self.tail = tail
        self.c: PeriodConstants = period_constants(tail)

    def dplus(self, z: float) -> float:
        v, vt = self.profile(z), self.tail(z)
        return 0.0 if v == vt else math.exp(v) - math.exp(vt)

    def dminus(self, z: float) -> float:
        v, vt = self.profile(z), self.tail(z)
        return 0.0 if v == vt else math.exp(-v) - math.exp(-vt)

    def D(self, z: float) -> float:
        V0 = self.c.V0
        return math.exp(V0) * self.dminus(z) - math.exp(-V0) * self.dplus(z)

    def B(self, z: float) -> float:
        return periodic_bracket("+-", z, self.tail) - periodic_bracket("-+", z, self.tail)

    def left_integral(self, f, x: float) -> float:
        """``int_{-inf}^x f`` for f supported on z >= x_min."""
        lo = self.profile.x_min
        if x <= lo:
            return 0.0
        return gl_integrate(f, lo, x, _cuts(lo, x, self.profile, self.tail))

    def right_integral(self, f, x: float) -> float:
        """``int_x^inf f`` for f supported on z < x_max."""
        hi = self.profile.x_max
        if x >= hi:
            return 0.0
        return gl_integrate(f, x, hi, _cuts(x, hi, self.profile, self.tail))

    def full_integral(self, f) -> float:
        p = self.profile
        return gl_integrate(f, p.x_min, p.x_max, _cuts(p.x_min, p.x_max, p, self.tail))


# -- generalized reflection coefficient -----------------------------------

def rbar(n: int, x: float, W: float, profile: PotentialProfile) -> float:
    """Coefficient of (ik)^n in the W-deformed R_r(x, -inf; W; k)."""
    if n not in (0, 1, 2):
        raise UnsupportedOrderError("rbar is available for n = 0, 1, 2")
    sd = _Side(profile, profile.left_tail)
    L0, V0, Q = sd.c.L0, sd.c.V0, sd.c.Q
    ch = math.cosh((W - V0) / 2)
    if n == 0:
        return -math.tanh((W - V0) / 2)
    if n == 1:
        return sd.B(x) / (4 * L0 * ch ** 2) + sd.left_integral(sd.D, x) / (2 * ch ** 2)
    ep, em = math.exp((W + V0) / 2), math.exp(-(W + V0) / 2)
    per = (em * periodic_bracket("+-+", x, sd.tail) - ep * periodic_bracket("-+-", x, sd.tail)
           + (L0 ** 4 + 4 * Q) * math.sinh((W - V0) / 2) / (4 * L0))

    def inner(z):
        first = (ep * sd.dminus(z) + em * sd.dplus(z)) * sd.B(z)
        d = sd.D(z)
        if d == 0:
            return first
        return first + 2 * L0 * (ep * bracket("-", z, x, profile)
                                 + em * bracket("+", z, x, profile)) * d

    return (per + sd.left_integral(inner, x)) / (4 * L0 * ch ** 3)


def reflection_series(x: float, profile: PotentialProfile, orders: int = 2) -> list[float]:
    """Taylor coefficients r_0..r_orders of R_r(x, -inf; k) in powers of ik."""
    W = profile(x)
    return [rbar(n, x, W, profile) for n in range(orders + 1)]


# -- a_n and s_n ------------------------------------------------------------

def _a_side(sd: _Side, side: str, x: float, n: int) -> float:
    V0, L0, Q = sd.c.V0, sd.c.L0, sd.c.Q
    prof = sd.profile
    ev = math.exp(prof(x) - V0)
    if n == 0:
        return -0.5 * ev
    sgn = 1.0 if side == "R" else -1.0
    integ = sd.left_integral if side == "R" else sd.right_integral
    if n == 1:
        return sgn * ev * sd.B(x) / (4 * L0) + 0.5 * ev * integ(sd.D, x)
    if n == 2:
        K = L0 ** 4 + 4 * Q
        per = ev / (2 * L0) * (math.exp(-V0) * periodic_bracket("+-+", x, sd.tail) - K / (8 * L0))
        e2 = math.exp(prof(x) - 2 * V0)
        t1 = integ(lambda z: sd.dplus(z) * sd.B(z), x)
        if side == "R":
            t2 = integ(lambda z: sd.D(z) * bracket("+", z, x, prof), x)
        else:
            t2 = integ(lambda z: sd.D(z) * bracket("+", x, z, prof), x)
        return per + sgn * e2 * t1 / (2 * L0) + e2 * t2
    raise UnsupportedOrderError("a_n is available for n = 0, 1, 2")


def a_coeffs(x: float, profile: PotentialProfile, side: str, n: int) -> float:
    """a_n^R (left tail constants) or a_n^L (right tail constants) at x."""
    if side not in ("R", "L"):
        raise DomainError("side must be 'R' or 'L'")
    tail = profile.left_tail if side == "R" else profile.right_tail
    return _a_side(_Side(profile, tail), side, x, n)


@dataclass
class SCoefficients:
    """Evaluators for s_n(x), n in ``orders``.

    ``provenance[n]`` names the formula family used for each order.
    """

    profile: PotentialProfile
    orders: tuple[int, ...]
    provenance: dict[int, str]
    _funcs: dict[int, Callable[[float], float]] = field(repr=False)
    t1: Callable[[float], float] | None = field(default=None, repr=False)

    def __call__(self, n: int, x: float) -> float:
        if n not in self._funcs:
            raise UnsupportedOrderError(f"s_{n} not available (have {self.orders})")
        return self._funcs[n](x)

    def s(self, n: int) -> Callable[[float], float]:
        return lambda x: self(n, x)


class _Symmetric:
    def __init__(self, profile: PotentialProfile):
        self.sd = _Side(profile, profile.left_tail)
        self.p = profile

    def s0(self, x):
        return -math.exp(self.p(x) - self.sd.c.V0)

    @cached_property
    def _s1_const(self):
        return 0.5 * self.sd.full_integral(self.sd.D)

    def s1(self, x):
        return math.exp(self.p(x) - self.sd.c.V0) * self._s1_const

    def s2(self, x):
        sd, p = self.sd, self.p
        V0, L0, Q = sd.c.V0, sd.c.L0, sd.c.Q
        body = (2 * periodic_bracket("+-+", x, sd.tail)
                - math.exp(V0) * (L0 ** 3 / 4 + Q / L0)
                + sd.left_integral(lambda z: sd.B(z) * sd.dplus(z), x)
                - sd.right_integral(lambda z: sd.B(z) * sd.dplus(z), x)
                + 2 * L0 * sd.left_integral(lambda z: sd.D(z) * bracket("+", z, x, p), x)
                + 2 * L0 * sd.right_integral(lambda z: sd.D(z) * bracket("+", x, z, p), x))
        return math.exp(p(x) - 2 * V0) / (2 * L0) * body

    @cached_property
    def _s3_const(self):
        sd = self.sd
        V0, L0, Q = sd.c.V0, sd.c.L0, sd.c.Q

        def f(z):
            dp = sd.dplus(z)
            if dp == 0:
                return 0.0
            return (3 * math.exp(-V0) * periodic_bracket("+-+", z, sd.tail)
                    + math.exp(V0) * periodic_bracket("-+-", z, sd.tail)
                    - L0 ** 3 / 2 - 2 * Q / L0) * dp
        return sd.full_integral(f)

    def s3(self, x):
        sd, p = self.sd, self.p
        V0, L0 = sd.c.V0, sd.c.L0
        em, ep = math.exp(-V0), math.exp(V0)

        def mix(z):
            return sd.B(z) * (3 * em * sd.dplus(z) - ep * sd.dminus(z))

        body = (self._s3_const
                + sd.left_integral(lambda z: mix(z) * bracket("+", z, x, p), x)
                - sd.right_integral(lambda z: mix(z) * bracket("+", x, z, p), x)
                + 2 * L0 * sd.left_integral(
                    lambda z: sd.D(z) * (3 * em * bracket("++", z, x, p)
                                         - ep * bracket("-+", z, x, p)), x)
                # the printed right-hand term pairs with [+-]_x^z, the mirror of [-+]_z^x
                + 2 * L0 * sd.right_integral(
                    lambda z: sd.D(z) * (3 * em * bracket("++", x, z, p)
                                         - ep * bracket("+-", x, z, p)), x))
        return math.exp(p(x) - 2 * V0) / (2 * L0) * body


def s_coeffs(profile: PotentialProfile, up_to: int = 3) -> SCoefficients:
    """s_0..s_up_to for a profile with one common periodic tail."""
    if not profile.is_symmetric:
        raise DomainError("tails differ; use s_coeffs_two_sided")
    if not 0 <= up_to <= 3:
        raise UnsupportedOrderError("s_n is available for n <= 3")
    sym = _Symmetric(profile)
    funcs = {0: sym.s0, 1: sym.s1, 2: sym.s2, 3: sym.s3}
    orders = tuple(range(up_to + 1))
    return SCoefficients(profile, orders, {n: "closed-form s_n (common tail)" for n in orders},
                         {n: funcs[n] for n in orders})


def s_coeffs_two_sided(profile: PotentialProfile, up_to: int = 2) -> SCoefficients:
    """s_n = a_n^R (left tail) + a_n^L (right tail), n <= 2."""
    if not 0 <= up_to <= 2:
        raise UnsupportedOrderError("two-sided s_n is available for n <= 2")
    R = _Side(profile, profile.left_tail)
    Lside = _Side(profile, profile.right_tail)

    def make(n):
        return lambda x: _a_side(R, "R", x, n) + _a_side(Lside, "L", x, n)

    orders = tuple(range(up_to + 1))
    funcs = {n: make(n) for n in orders}

    def t1(x):
        return funcs[1](x) / funcs[0](x) if 1 in funcs else None

    return SCoefficients(profile, orders, {n: "a_n^R + a_n^L (separate tails)" for n in orders},
                         funcs, t1)


# -- Green coefficients -------------------------------------------------------

@dataclass(frozen=True)
class ExpansionResult:
    x: float
    y: float
    g: dict[int, float]
    q: dict[int, float]
    t_x: dict[int, float]
    t_y: dict[int, float]
    provenance: dict[str, str]
    warnings: tuple[str, ...] = ()

    def partial_sum(self, k: complex, up_to: int | None = None) -> complex:
        ik = 1j * complex(k)
        return sum(v * ik ** n for n, v in self.g.items() if up_to is None or n <= up_to)


def q_integral(s_func: Callable[[float], float], profile: PotentialProfile, x: float,
               y: float) -> float:
    """``-int_y^x s(z) dz`` on breakpoints of the profile and both tails."""
    if x == y:
        return 0.0
    cuts = _cuts(y, x, profile, profile.left_tail, profile.right_tail)
    return -gl_integrate(s_func, y, x, cuts)


def assemble_green(q: dict[int, float], tx: dict[int, float], ty: dict[int, float],
                   gm1: float, N: int) -> dict[int, float]:
    """Combine q_n and t_n into g_{-1}..g_N (symmetric-tail structure)."""
    g = {-1: gm1}
    q1 = q.get(1)
    a1, b1 = tx.get(1), ty.get(1)
    if N >= 0:
        g[0] = (q1 - a1 / 2 - b1 / 2) * gm1
    if N >= 1:
        q2, a2, b2 = q[2], tx[2], ty[2]
        g[1] = (q2 + q1 ** 2 / 2 - q1 / 2 * (a1 + b1) - a2 / 2 - b2 / 2
                + 3 * a1 ** 2 / 8 + 3 * b1 ** 2 / 8 + a1 * b1 / 4) * gm1
    if N >= 2:
        q2, q3, a2, b2, a3, b3 = q[2], q[3], tx[2], ty[2], tx[3], ty[3]
        g[2] = (q3 + q1 * q2 + q1 ** 3 / 6
                - (q1 ** 2 / 4 + q2 / 2) * (a1 + b1)
                + q1 * (3 * a1 ** 2 / 8 + 3 * b1 ** 2 / 8 + a1 * b1 / 4 - a2 / 2 - b2 / 2)
                - a3 / 2 - b3 / 2 + 3 * a1 * a2 / 4 + 3 * b1 * b2 / 4
                - 5 * a1 ** 3 / 16 - 5 * b1 ** 3 / 16 + a2 * b1 / 4 + b2 * a1 / 4
                - 3 * a1 * b1 / 16 * (a1 + b1)) * gm1
    return {n: float(v) for n, v in g.items()}


def green_coeffs(profile: PotentialProfile, x: float, y: float, N: int = 2) -> ExpansionResult:
    """g_{-1}..g_N of G_S(x, y; k) = sum (ik)^n g_n for x >= y."""
    if x < y:
        raise DomainError("green_coeffs expects x >= y")
    if N < -1:
        raise UnsupportedOrderError("N must be >= -1")
    if profile.is_symmetric:
        if N > 2:
            raise UnsupportedOrderError("g_n is available for n <= 2")
        sc = s_coeffs(profile, N + 1)
        V0 = period_constants(profile.left_tail).V0
        # t_n = s_n / s_0 with s_0 = -e^{V - V0} written out
        tx = {n: -math.exp(V0 - profile(x)) * sc(n, x) for n in range(1, N + 2)}
        ty = {n: -math.exp(V0 - profile(y)) * sc(n, y) for n in range(1, N + 2)}
        gm1 = 0.5 * math.exp(V0) * math.exp(-(profile(x) + profile(y)) / 2)
        prov = {"s": "closed-form s_n (common tail)", "g": "q/t assembly"}
    else:
        if N > 1:
            raise UnsupportedOrderError("separate tails support g_n for n <= 1")
        sc = s_coeffs_two_sided(profile, N + 1)
        s0x, s0y = sc(0, x), sc(0, y)
        tx = {n: sc(n, x) / s0x for n in range(1, N + 2)}
        ty = {n: sc(n, y) / s0y for n in range(1, N + 2)}
        gm1 = 1 / (2 * math.sqrt(s0x * s0y))
        prov = {"s": "a_n^R + a_n^L (separate tails)", "g": "q/t assembly"}
    q = {n: q_integral(sc.s(n - 1), profile, x, y) for n in range(1, N + 2)}
    g = assemble_green(q, tx, ty, gm1, N)
    return ExpansionResult(x, y, g, q, tx, ty, prov)
