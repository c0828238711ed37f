"""Schroedinger potentials in the generic case.

Energies are shifted so that k = 0 sits at the bottom of the lowest band.
The zero-energy solutions psi0+ (bounded to the right) and psi0- (bounded
to the left) are propagated exactly through each constant segment, and the
Green-function coefficients g0, g1, g2 are assembled from them.  Integrals
of psi^2 and psi^-2 over a segment have closed forms; only the nested
one-period brackets of the derived tails need quadrature.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import (DomainError, ExceptionalCaseError, NoBandBottomError,
                     NumericalDegeneracyError, PoleError, PositivityError,
                     UnsupportedOrderError)
from .expansion import ExpansionResult
from .periodic import PeriodConstants
from .potential import PeriodicPotential, PotentialProfile

EXCEPTIONAL_TOL = 1e-8
Y_TOL = 1e-9
_GLN = np.polynomial.legendre.leggauss(24)


# -- exact segment propagation ---------------------------------------------

def _ch_shc(z):
    """``cosh(sqrt z)`` and ``sinh(sqrt z)/sqrt z``; both entire in z."""
    if abs(z) < 1e-3:
        ch = 1 + z / 2 * (1 + z / 12 * (1 + z / 30 * (1 + z / 56 * (1 + z / 90))))
        shc = 1 + z / 6 * (1 + z / 20 * (1 + z / 42 * (1 + z / 72 * (1 + z / 110))))
        return ch, shc
    if isinstance(z, complex):
        r = cmath.sqrt(z)
        return cmath.cosh(r), cmath.sinh(r) / r
    if z > 0:
        r = math.sqrt(z)
        return math.cosh(r), math.sinh(r) / r
    r = math.sqrt(-z)
    return math.cos(r), math.sin(r) / r


def _shc_m1(u):
    """``(shc(u) - 1) / u`` without cancellation."""
    if abs(u) < 0.5:
        total, term = 0.0, 1.0
        for n in range(1, 12):
            term = term / ((2 * n) * (2 * n + 1)) if n > 1 else 1 / 6
            total += term * u ** (n - 1)
        return total
    return (_ch_shc(u)[1] - 1) / u


def segment_matrix(kappa2, w: float):
    """Map ``(psi, psi')`` across width w (negative w goes backwards)."""
    ch, shc = _ch_shc(kappa2 * w * w)
    return ch, w * shc, kappa2 * w * shc, ch


def _apply(m, s):
    return m[0] * s[0] + m[1] * s[1], m[2] * s[0] + m[3] * s[1]


def _mat_mul(m, n):
    return (m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
            m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3])


def _walk(source, k2, a: float, state, b: float):
    """Propagate ``state`` at a to b through the pieces of ``source``."""
    if b >= a:
        for lo, hi, v in source.pieces(a, b):
            state = _apply(segment_matrix(v - k2, hi - lo), state)
        return state
    for lo, hi, v in reversed(source.pieces(b, a)):
        state = _apply(segment_matrix(v - k2, lo - hi), state)
    return state


def _forward_matrix(source, k2, a: float, b: float):
    m = (1.0, 0.0, 0.0, 1.0)
    for lo, hi, v in source.pieces(a, b):
        m = _mat_mul(segment_matrix(v - k2, hi - lo), m)
    return m


def _segment_integrals(kappa2: float, w: float, p: float, d: float, p_end: float):
    """``(int psi^2, int psi^-2)`` over one segment of width w > 0."""
    z = kappa2 * w * w
    _, shc = _ch_shc(z)
    _, shc4 = _ch_shc(4 * z)
    icc = w / 2 * (1 + shc4)
    ics = w * w / 2 * shc * shc
    iss = 2 * w ** 3 * _shc_m1(4 * z)
    return p * p * icc + 2 * p * d * ics + d * d * iss, w * shc / (p * p_end)


# -- profiles and the band bottom ------------------------------------------

def tail_Y(tail: PeriodicPotential, E):
    """Half trace of the one-period map of ``psi'' = (V_S - E) psi``."""
    x0 = tail.phase_origin
    m = _forward_matrix(tail, E, x0, x0 + tail.period)
    return (m[0] + m[3]) / 2


def schrodinger_band_edges(tail: PeriodicPotential, energy_offset: float, k_max: float,
                           n_grid: int = 4000) -> list[float]:
    """Real k in (0, k_max] with ``|Y(E0 + k^2)| = 1``, excluding k = 0."""

    def g(k):
        return tail_Y(tail, energy_offset + k * k) ** 2 - 1

    ks = np.linspace(0.0, k_max, n_grid + 1)[1:]
    vals = [g(k) for k in ks]
    edges = []
    for k0, k1, g0, g1 in zip(ks, ks[1:], vals, vals[1:]):
        if g0 == 0:
            edges.append(float(k0))
        elif g0 * g1 < 0:
            edges.append(float(brentq(g, k0, k1, xtol=1e-14, rtol=1e-14)))
    return edges


def band_bottom_offset(tail: PeriodicPotential, n_scan: int = 400) -> float:
    """Energy of the bottom of the lowest band of ``-d^2/dx^2 + V_S``.

    The root of ``Y(E) = 1`` lies between the minimum and the mean of the
    tail; the first sign change on a uniform scan is refined by Brent's
    method.
    """
    vals = [v for _, v in tail.segments]
    if tail.is_constant():
        return float(vals[0])
    lo = min(vals)
    hi = sum(w * v for w, v in tail.segments) / tail.period

    def f(E):
        return tail_Y(tail, E) - 1

    grid = np.linspace(lo, hi, n_scan + 1)
    prev_E, prev_f = grid[0], f(grid[0])
    if prev_f == 0:
        return float(prev_E)
    for E in grid[1:]:
        fE = f(E)
        if fE == 0:
            return float(E)
        if (fE < 0) != (prev_f < 0):
            return float(brentq(f, prev_E, E, xtol=1e-15, rtol=1e-15))
        prev_E, prev_f = E, fE
    raise NoBandBottomError("Y(E) - 1 has no sign change between min and mean of the tail")


@dataclass(frozen=True)
class SchrodingerProfile:
    """V_S with the band-bottom offset that puts k = 0 at the lowest band edge."""

    raw: PotentialProfile
    energy_offset: float

    @cached_property
    def shifted(self) -> PotentialProfile:
        return self.raw.shifted(-self.energy_offset)

    def __call__(self, x: float) -> float:
        return self.shifted(x)

    def pieces(self, a: float, b: float):
        return self.shifted.pieces(a, b)

    @property
    def x_min(self) -> float:
        return self.raw.x_min

    @property
    def x_max(self) -> float:
        return self.raw.x_max

    @property
    def period_left(self) -> float:
        return self.raw.left_tail.period

    @property
    def period_right(self) -> float:
        return self.raw.right_tail.period

    def band_bottom_Y(self, side: str = "left") -> float:
        return tail_Y(self.raw.tail(side), self.energy_offset)


def schrodinger_profile(raw: PotentialProfile, energy_offset: float | None = None) -> SchrodingerProfile:
    """Attach the band-bottom offset to a Schroedinger potential."""
    if energy_offset is None:
        energy_offset = band_bottom_offset(raw.left_tail)
        if not raw.is_symmetric:
            other = band_bottom_offset(raw.right_tail)
            if abs(other - energy_offset) > 1e-10 * max(1.0, abs(energy_offset)):
                raise DomainError("left and right tails have different band bottoms")
    return SchrodingerProfile(raw, float(energy_offset))


# -- zero-energy solutions -------------------------------------------------

@dataclass(frozen=True)
class ZeroEnergySolution:
    """psi0 on one side, anchored at ``x_ref`` on the edge of its periodic
    region.  ``periodic`` marks a pure-tail solution (periodic both ways)."""

    source: object
    side: str
    x_ref: float
    state_ref: tuple[float, float]
    period: float
    periodic: bool = False
    tail_constants: PeriodConstants | None = field(default=None, compare=False)

    def _reduce(self, x: float) -> float:
        L = self.period
        if self.side == "+" and (x > self.x_ref or self.periodic):
            return self.x_ref + math.fmod(x - self.x_ref, L) if x >= self.x_ref \
                else self.x_ref + L - math.fmod(self.x_ref - x, L)
        if self.side == "-" and (x < self.x_ref or self.periodic):
            return self.x_ref - math.fmod(self.x_ref - x, L) if x <= self.x_ref \
                else self.x_ref - L + math.fmod(x - self.x_ref, L)
        return x

    def values(self, x: float) -> tuple[float, float]:
        """``(psi0(x), psi0'(x))``."""
        return _walk(self.source, 0.0, self.x_ref, self.state_ref, self._reduce(x))

    def __call__(self, x: float) -> float:
        return self.values(x)[0]

    def scaled(self, c: float) -> "ZeroEnergySolution":
        if c <= 0:
            raise DomainError("scale factor must be positive")
        s = (self.state_ref[0] * c, self.state_ref[1] * c)
        tc = self.tail_constants
        if tc is not None:
            P, M = tc.P / c ** 2, tc.M * c ** 2
            tc = PeriodConstants(P, M, math.sqrt(P * M), 0.5 * math.log(P / M), tc.Q)
        return replace(self, state_ref=s, tail_constants=tc)

    def integrals(self, a: float, b: float) -> tuple[float, float]:
        """``(int_a^b psi^2, int_a^b psi^-2)`` in closed form per segment."""
        if b <= a:
            return 0.0, 0.0
        p, d = self.values(a)
        sq = inv = 0.0
        for lo, hi, v in self.source.pieces(a, b):
            w = hi - lo
            pe, de = _apply(segment_matrix(v, w), (p, d))
            if p <= 0 or pe <= 0:
                raise PositivityError(f"psi0 is not positive on [{lo!r}, {hi!r}]")
            i2, im2 = _segment_integrals(v, w, p, d, pe)
            sq += i2
            inv += im2
            p, d = pe, de
        return sq, inv

    def periodic_part(self) -> "ZeroEnergySolution":
        """The tail Bloch solution continued to all x, equal to psi0 on the
        periodic side."""
        if self.periodic:
            return self
        tail = _tail_of(self.source, self.side)
        return replace(self, source=tail, periodic=True)

    def check_positive(self, a: float, b: float, per_piece: int = 16) -> None:
        for lo, hi, _ in self.source.pieces(a, b):
            for t in np.linspace(lo, hi, per_piece):
                if self(float(t)) <= 0:
                    raise PositivityError(f"psi0{self.side} is not positive at x={float(t)!r}")


def _tail_of(source, side: str) -> PeriodicPotential:
    prof = source.shifted if isinstance(source, SchrodingerProfile) else source
    return prof.right_tail if side == "+" else prof.left_tail


def _bloch_vector(m) -> tuple[float, float]:
    """Eigenvector of a unimodular 2x2 map for eigenvalue one."""
    v1 = (m[1], 1 - m[0])
    v2 = (1 - m[3], m[2])
    n1, n2 = math.hypot(*v1), math.hypot(*v2)
    v = v1 if n1 >= n2 else v2
    scale = max(1.0, max(abs(e) for e in m))
    if max(n1, n2) < 1e-13 * scale:
        raise NumericalDegeneracyError("band-bottom eigenvector is degenerate")
    if v[0] == 0:
        raise PositivityError("Bloch solution vanishes at the reference point")
    return 1.0, v[1] / v[0]


def zero_energy_solution(profile: SchrodingerProfile, side: str) -> ZeroEnergySolution:
    """psi0+ (``side='+'``, bounded as x -> +inf) or psi0- (bounded to the left),
    normalised to one at x_max or x_min respectively."""
    if side not in ("+", "-"):
        raise DomainError("side must be '+' or '-'")
    src = profile.shifted
    if side == "+":
        tail, x_ref = src.right_tail, profile.x_max
        m = _forward_matrix(src, 0.0, x_ref, x_ref + tail.period)
    else:
        tail, x_ref = src.left_tail, profile.x_min
        m = _forward_matrix(src, 0.0, x_ref - tail.period, x_ref)
    Y = (m[0] + m[3]) / 2
    if abs(Y - 1) > Y_TOL * max(1.0, abs(m[1]) + abs(m[2])):
        raise DomainError(f"k = 0 is not at the band bottom (Y - 1 = {Y - 1:.3g})")
    sol = ZeroEnergySolution(src, side, x_ref, _bloch_vector(m), tail.period)
    per = sol.periodic_part()
    lo, hi = (x_ref, x_ref + tail.period) if side == "+" else (x_ref - tail.period, x_ref)
    per.check_positive(lo, hi)
    sol.check_positive(profile.x_min - tail.period, profile.x_max + tail.period)
    M, P = per.integrals(lo, hi)
    tc = PeriodConstants(P, M, math.sqrt(P * M), 0.5 * math.log(P / M), math.nan)
    return replace(sol, tail_constants=tc)


def fp_potentials(sol_plus: ZeroEnergySolution, sol_minus: ZeroEnergySolution):
    """``(V+, V-, f+, f-)`` evaluators with ``V = -2 log psi0``, ``f = psi0'/psi0``."""

    def V(sol):
        def ev(x):
            p = sol(x)
            if p <= 0:
                raise PositivityError(f"psi0{sol.side}({x!r}) = {p!r} is not positive")
            return -2 * math.log(p)
        return ev

    def f(sol):
        def ev(x):
            p, d = sol.values(x)
            if p <= 0:
                raise PositivityError(f"psi0{sol.side}({x!r}) = {p!r} is not positive")
            return d / p
        return ev

    return V(sol_plus), V(sol_minus), f(sol_plus), f(sol_minus)


def wronskian(sol_plus: ZeroEnergySolution, sol_minus: ZeroEnergySolution, x: float) -> float:
    """``W[psi0+, psi0-] = psi0+ psi0-' - psi0+' psi0-`` at x."""
    p, dp = sol_plus.values(x)
    m, dm = sol_minus.values(x)
    return p * dm - dp * m


# -- generic coefficients --------------------------------------------------

class _GenericSide:
    """a_n^{R-} (side '-') or a_n^{L+} (side '+') for the derived potential."""

    def __init__(self, sol: ZeroEnergySolution):
        self.sol = sol
        self.per = sol.periodic_part()
        c = sol.tail_constants
        self.V0, self.L0, self.P, self.M = c.V0, c.L0, c.P, c.M
        self._B_ref: float | None = None

    def ev(self, x: float) -> float:
        """``e^{V(x) - V0}``."""
        return math.exp(-self.V0) / self.sol(x) ** 2

    def _delta_integral(self, a: float, b: float) -> float:
        """``int_a^b D`` with ``D = e^{V0} Delta^- - e^{-V0} Delta^+``."""
        if b <= a:
            return 0.0
        s2, si = self.sol.integrals(a, b)
        p2, pi = self.per.integrals(a, b)
        return math.exp(self.V0) * (s2 - p2) - math.exp(-self.V0) * (si - pi)

    def _B_nested(self, x: float) -> float:
        """``p[+-] - p[-+]`` over ``[x - L, x]`` by nested quadrature."""
        per, L = self.per, self.per.period
        a = x - L
        nodes, weights = _GLN
        inner, total = 0.0, 0.0
        for lo, hi, _ in per.source.pieces(a, x):
            half, mid = (hi - lo) / 2, (hi + lo) / 2
            for t, w in zip(nodes, weights):
                z = mid + half * t
                _, iz = per.integrals(lo, z)
                total += w * half * per(z) ** 2 * (inner + iz)
            inner += per.integrals(lo, hi)[1]
        # p[+-] + p[-+] = P M
        return 2 * total - self.P * self.M

    def B(self, x: float) -> float:
        """``p[+-] - p[-+]`` over ``[x - L, x]`` for the periodic part.

        B is periodic with ``B' = 2 (P psi^2 - M psi^-2)``, so one nested
        quadrature at the anchor plus closed-form segment integrals suffice.
        """
        per, r = self.per, self.per.x_ref
        if self._B_ref is None:
            self._B_ref = self._B_nested(r)
        xr = per._reduce(x)
        if xr >= r:
            i2, im2 = per.integrals(r, xr)
            return self._B_ref + 2 * (self.P * i2 - self.M * im2)
        i2, im2 = per.integrals(xr, r)
        return self._B_ref - 2 * (self.P * i2 - self.M * im2)

    def a0(self, x: float) -> float:
        return -0.5 * self.ev(x)

    def a1(self, x: float) -> float:
        sol = self.sol
        if sol.side == "-":
            tail_integral = self._delta_integral(sol.x_ref, x)
            sgn = 1.0
        else:
            tail_integral = self._delta_integral(x, sol.x_ref)
            sgn = -1.0
        ev = self.ev(x)
        return sgn * ev * self.B(x) / (4 * self.L0) + 0.5 * ev * tail_integral


def _gl_composite(f: Callable[[float], float], cuts: list[float]) -> float:
    nodes, weights = _GLN
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        if b > a:
            half, mid = (b - a) / 2, (b + a) / 2
            total += half * sum(w * f(mid + half * t) for t, w in zip(nodes, weights))
    return total


def _check_generic(profile: SchrodingerProfile, sp: ZeroEnergySolution,
                   sm: ZeroEnergySolution) -> float:
    W = wronskian(sp, sm, profile.x_min)
    L = sp.period
    a = profile.x_min
    n_p = math.sqrt(sp.integrals(a, a + L)[0] / L)
    n_m = math.sqrt(sm.integrals(a, a + L)[0] / L)
    rel = abs(W) * L / (n_p * n_m)
    if rel < EXCEPTIONAL_TOL:
        raise ExceptionalCaseError(
            f"relative Wronskian {rel:.3g} below {EXCEPTIONAL_TOL:g}: psi0+ and psi0- are "
            "proportional; use the symmetric expansion with V = -2 log psi0")
    return W


def generic_green_coeffs(profile: SchrodingerProfile, x: float, y: float, N: int = 2,
                         solutions: tuple[ZeroEnergySolution, ZeroEnergySolution] | None = None
                         ) -> ExpansionResult:
    """g0..gN (N <= 2) of G_S = sum (ik)^n g_n in the generic case, x >= y.

    ``solutions`` may supply ``(psi0+, psi0-)`` with any positive scale.
    """
    if x < y:
        raise DomainError("generic_green_coeffs expects x >= y")
    if not 0 <= N <= 2:
        raise UnsupportedOrderError("generic g_n is available for 0 <= n <= 2")
    if solutions is None:
        sp, sm = zero_energy_solution(profile, "+"), zero_energy_solution(profile, "-")
    else:
        sp, sm = solutions
    W = _check_generic(profile, sp, sm)
    plus, minus = _GenericSide(sp), _GenericSide(sm)

    def s_m1(z):
        p, dp = sp.values(z)
        m, dm = sm.values(z)
        return 0.5 * (dm / m - dp / p)

    def s0(z):
        return minus.a0(z) + plus.a0(z)

    def s1(z):
        return minus.a1(z) + plus.a1(z)

    g0 = -sp(x) * sm(y) / W
    g = {0: g0}
    q = {0: -0.5 * (math.log(sm(x) / sm(y)) - math.log(sp(x) / sp(y)))}
    ax, ay = s_m1(x), s_m1(y)
    t_x, t_y = {}, {}
    if N >= 1:
        sx2, six = sm.integrals(y, x)
        px2, pix = sp.integrals(y, x)
        q[1] = 0.5 * (math.exp(-minus.V0) * six + math.exp(-plus.V0) * pix)
        t_x[0], t_y[0] = s0(x) / ax, s0(y) / ay
        g[1] = (q[1] - t_x[0] / 2 - t_y[0] / 2) * g0
    if N >= 2:
        cuts = sorted({y, x, *profile.shifted.breakpoints(y, x)}) if x > y else [y]
        q[2] = -float(_gl_composite(s1, cuts))
        t_x[1], t_y[1] = s1(x) / ax, s1(y) / ay
        q1, q2 = q[1], q[2]
        b0x, b0y = t_x[0], t_y[0]
        g[2] = float((q2 + q1 ** 2 / 2 - q1 / 2 * (b0x + b0y) - (t_x[1] + t_y[1]) / 2
                      + 3 / 8 * b0x ** 2 + 3 / 8 * b0y ** 2 + b0x * b0y / 4) * g0)
    prov = {"g0": "Wronskian", "g1": "closed-form segment integrals",
            "g2": "s_1 from a_1^{R-} + a_1^{L+}, nested Gauss-Legendre"}
    return ExpansionResult(x, y, g, q, t_x, t_y, prov)


# -- exact Green function --------------------------------------------------

def _bloch_state(m, decaying_forward: bool, probe):
    """Bloch vector of the period map m at energy k^2.

    ``decaying_forward`` selects ``|mu| < 1``.  On the real axis the choice
    follows ``probe`` (the same map at ``k + i eps``).
    """
    Y = (m[0] + m[3]) / 2
    r = cmath.sqrt(Y * Y - 1)
    mus = (Y + r, Y - r)
    a0, a1 = abs(mus[0]), abs(mus[1])
    if abs(a0 - a1) > 1e-12 * max(a0, a1):
        mu = mus[0] if (a0 < a1) == decaying_forward else mus[1]
    else:
        pm = probe()
        Yp = (pm[0] + pm[3]) / 2
        rp = cmath.sqrt(Yp * Yp - 1)
        cand = (Yp + rp, Yp - rp)
        want = min(cand, key=abs) if decaying_forward else max(cand, key=abs)
        mu = min(mus, key=lambda u: abs(u - want))
    v1 = (m[1], mu - m[0])
    v2 = (mu - m[3], m[2])
    return v1 if abs(v1[0]) + abs(v1[1]) >= abs(v2[0]) + abs(v2[1]) else v2


def schrodinger_green(profile: SchrodingerProfile, x: float, y: float, k: complex) -> complex:
    """Exact ``G_S(x, y; k)`` for x >= y, energy ``k^2`` above the band bottom."""
    if x < y:
        raise DomainError("schrodinger_green expects x >= y")
    k = complex(k)
    if k.imag < 0:
        raise DomainError("k must satisfy Im k >= 0")
    src = profile.shifted
    k2 = k * k
    Lr, Ll = src.right_tail.period, src.left_tail.period
    xr, xl = profile.x_max, profile.x_min
    eps = 1e-9 * max(1.0, abs(k))
    k2p = (k + 1j * eps) ** 2
    mr = _forward_matrix(src, k2, xr, xr + Lr)
    ml = _forward_matrix(src, k2, xl - Ll, xl)
    sr = _bloch_state(mr, True, lambda: _forward_matrix(src, k2p, xr, xr + Lr))
    sl = _bloch_state(ml, False, lambda: _forward_matrix(src, k2p, xl - Ll, xl))
    px = _walk(src, k2, xr, sr, x)
    mx = _walk(src, k2, xl, sl, x)
    my = _walk(src, k2, x, mx, y)
    W = px[0] * mx[1] - px[1] * mx[0]
    if W == 0:
        raise PoleError(f"Wronskian vanishes at k={k!r}")
    return -px[0] * my[0] / W
