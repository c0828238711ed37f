"""The two worked lattices and their closed-form reference values.

Example 1 is a Fokker-Planck lattice (0 on (0, a), C on (a, L)) with a
square-well impurity of depth h on (0, a).  Example 2 is the Kronig-Penney
Schroedinger lattice with the same shape and a barrier of height h on
(0, a).  Everything here is written out by hand from the closed forms so it
can serve as an independent check on the general machinery.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import DomainError, NoBandBottomError
from .potential import PeriodicPotential, PotentialProfile


@dataclass(frozen=True)
class Example1Params:
    C: float = 1.0
    L: float = 1.0
    a: float = 0.6
    h: float = 1.0

    def __post_init__(self):
        if not 0 < self.a < self.L:
            raise DomainError("need 0 < a < L")

    @property
    def b(self) -> float:
        return self.L - self.a

    def tail(self) -> PeriodicPotential:
        return PeriodicPotential(self.L, ((self.a, 0.0), (self.b, self.C)), 0.0)

    def profile(self) -> PotentialProfile:
        t = self.tail()
        return PotentialProfile(t, t, ((0.0, -self.h),), 0.0, self.a)


@dataclass(frozen=True)
class Example2Params:
    C: float = 1.0
    L: float = 1.0
    a: float = 0.6
    h: float = 0.5

    def __post_init__(self):
        if not 0 < self.a < self.L:
            raise DomainError("need 0 < a < L")

    @property
    def b(self) -> float:
        return self.L - self.a

    def tail(self) -> PeriodicPotential:
        """Unshifted Schroedinger tail."""
        return PeriodicPotential(self.L, ((self.a, 0.0), (self.b, self.C)), 0.0)

    def profile(self) -> PotentialProfile:
        t = self.tail()
        return PotentialProfile(t, t, ((0.0, self.h),), 0.0, self.a)


# -- Example 1 --------------------------------------------------------------

def ex1_constants(p: Example1Params) -> dict:
    a, b, C = p.a, p.b, p.C
    Pp, Mm = a + b * math.exp(C), a + b * math.exp(-C)
    return {
        "P": Pp, "M": Mm,
        "L0": math.sqrt(Pp * Mm),
        "V0": 0.5 * math.log(Pp / Mm),
        "Q": (a ** 4 + 6 * a * a * b * b + b ** 4) / 12 + a * b / 3 * (a * a + b * b) * math.cosh(C),
    }


def ex1_pm(p: Example1Params, x: float, sign: int = 1) -> float:
    """p[+-] over [x-L, x] for 0 < x < a; sign=-1 gives p[-+]."""
    a, b, C = p.a, p.b, sign * p.C
    return 0.5 * (a * a + b * b) + math.exp(-C) * b * (a - x) + math.exp(C) * b * x


def ex1_pmp(p: Example1Params, x: float, sign: int = 1) -> float:
    """p[+-+] over [x-L, x] for 0 < x < a; sign=-1 gives p[-+-]."""
    a, b, C = p.a, p.b, sign * p.C
    return (a / 6 * (a * a + 3 * b * b) + 2 * b * x * (x - a) * math.sinh(C)
            + b / 6 * (3 * a * a + b * b) * math.exp(C))


def ex1_s(p: Example1Params, x: float) -> list[float]:
    """s0..s3 on 0 < x < a."""
    a, b, C, h = p.a, p.b, p.C, p.h
    c = ex1_constants(p)
    L0, V0, Q = c["L0"], c["V0"], c["Q"]
    D = math.sinh(V0 + h) - math.sinh(V0)
    K = L0 ** 4 + 4 * Q
    s0 = -math.exp(-(V0 + h))
    s1 = math.exp(-(V0 + h)) * a * D
    s2 = (math.exp(-(2 * V0 + h)) / L0 * (
        a / 6 * (a * a + 3 * b * b) + b / 6 * (3 * a * a + b * b) * math.exp(C)
        + 2 * b * x * (x - a) * math.exp(-h) * math.sinh(C) - math.exp(V0) / (8 * L0) * K)
        + math.exp(-2 * (V0 + h)) * (x * x + (a - x) ** 2) * D)
    s3 = (math.exp(-(2 * V0 + h)) / (2 * L0) * a * (math.exp(-h) - 1) * (
        (3 * math.exp(-V0) + math.exp(V0)) * a / 6 * (a * a + 3 * b * b)
        + (3 * math.exp(-V0 + C) + math.exp(V0 - C)) * b / 6 * (3 * a * a + b * b)
        # printed with a^3, which breaks the length^4 scaling of the bracket
        - b * a ** 2 * (math.exp(-h) + 1) * math.exp(-V0) * math.sinh(C)
        - K / (2 * L0))
        + math.exp(-(2 * V0 + h)) / 3 * (x ** 3 - (x - a) ** 3)
        * (3 * math.exp(-V0 - 2 * h) - math.exp(V0)) * D)
    return [s0, s1, s2, s3]


def ex1_green_leading(p: Example1Params, x: float, y: float) -> tuple[float, float]:
    """(g_{-1}, g_0) for 0 < y <= x < a."""
    V0, h, a = ex1_constants(p)["V0"], p.h, p.a
    gm1 = math.exp(V0 + h) / 2
    g0 = 0.5 * (x - y) + a / 2 * math.exp(V0 + h) * (math.sinh(V0 + h) - math.sinh(V0))
    return gm1, g0


def ex1_rbar(p: Example1Params, x: float, W: float) -> tuple[float, float]:
    """(rbar_0, rbar_1) on 0 < x < a."""
    V0, h, a = ex1_constants(p)["V0"], p.h, p.a
    r0 = math.tanh((V0 - W) / 2)
    r1 = (x * math.sinh(V0 + h) - a / 2 * math.sinh(V0)) / math.cosh((W - V0) / 2) ** 2
    return r0, r1


def ex1_period_alpha_beta(p: Example1Params, k: complex) -> tuple[complex, complex]:
    A = math.tanh(-p.C / 2)
    pre = cmath.exp(-1j * k * p.L) / (1 - A * A)
    e = cmath.exp(2j * k * p.b)
    return pre * (1 - A * A * e), pre * A * (e - 1)


def ex1_reflection(p: Example1Params, x: float, k: complex) -> complex:
    """R_r(x, -inf; k) on 0 < x < a from the period closed form.

    The square root branch is the one whose Bloch eigenvalue has modulus
    at least one (limit from the upper half plane on the real axis).
    """
    al, be = ex1_period_alpha_beta(p, k)
    alm, bem = ex1_period_alpha_beta(p, -k)
    root = cmath.sqrt(4 - (al + alm) ** 2)
    Y = (al + alm) / 2
    lam = Y - 0.5j * root
    if abs(lam) < 1:
        root = -root
    R0 = (-al + alm - 1j * root) / (2 * bem)
    t = math.tanh(p.h / 2)
    return cmath.exp(2j * k * x) * (t + R0) / (1 + R0 * t)


def ex1_green(p: Example1Params, x: float, y: float, k: complex) -> complex:
    """Exact G_S for 0 < y <= x < a, Im k > 0."""
    Rl_x = ex1_reflection(p, p.a - x, k)
    Rr_x = ex1_reflection(p, x, k)
    Rr_y = ex1_reflection(p, y, k)
    return (1 + Rl_x) * (1 + Rr_y) * cmath.exp(1j * k * (x - y)) / (2j * k * (1 - Rl_x * Rr_x))


def infinite_well_green(a: float, x: float, y: float, k: complex) -> complex:
    return cmath.cos(k * (x - a)) * cmath.cos(k * y) / (k * cmath.sin(k * a))


# -- Example 2 --------------------------------------------------------------

def example2_band_bottom(C: float, L: float, a: float) -> float:
    """Smallest root of the Kronig-Penney band-bottom condition."""
    b = L - a

    def f(E):
        q, pp = math.sqrt(C - E), math.sqrt(E)
        return q * math.tanh(b * q / 2) - pp * math.tan(a * pp / 2)

    hi = min(C, (math.pi / a) ** 2) * (1 - 1e-12)
    lo = 1e-300
    if f(lo) * f(hi) > 0:
        raise NoBandBottomError("no sign change of the band-bottom condition")
    return brentq(f, lo, hi, xtol=1e-15, rtol=1e-15)


def ex2_closed(p: Example2Params, x: float, y: float) -> dict:
    """Closed-form zero-energy data and (g0, g1) for 0 < y <= x < a."""
    a, b, C, h = p.a, p.b, p.C, p.h
    E0 = example2_band_bottom(C, p.L, a)
    pp, q, s = math.sqrt(E0), math.sqrt(C - E0), math.sqrt(h - E0)
    xi = q / s * math.tanh(b * q / 2)

    def psi_p(z):
        return math.cosh(s * (z - a)) - xi * math.sinh(s * (z - a))

    def psi_m(z):
        return math.cosh(s * z) + xi * math.sinh(s * z)

    W = 2 * xi * s * math.cosh(s * a) + (1 + xi * xi) * s * math.sinh(s * a)
    P = math.sinh(b * q) / q + math.sin(a * pp) / pp
    M = (b / 2 / math.cosh(b * q / 2) ** 2 + a / 2 / math.cos(a * pp / 2) ** 2
         + math.tanh(b * q / 2) / q + math.tan(a * pp / 2) / pp)
    g0 = -psi_p(x) * psi_m(y) / W
    ints = (math.sinh(s * (x - a)) / (s * psi_p(x)) - math.sinh(s * (y - a)) / (s * psi_p(y))
            + math.sinh(s * x) / (s * psi_m(x)) - math.sinh(s * y) / (s * psi_m(y)))
    ratios = (psi_p(x) / psi_m(x) + psi_m(x) / psi_p(x)
              + psi_p(y) / psi_m(y) + psi_m(y) / psi_p(y))
    g1 = -0.5 * math.sqrt(M / P) * (ints + ratios / W) * psi_p(x) * psi_m(y) / W
    return {"E0": E0, "p": pp, "q": q, "s": s, "xi": xi, "W": W, "P": P, "M": M,
            "g0": g0, "g1": g1, "psi_plus": psi_p, "psi_minus": psi_m}
