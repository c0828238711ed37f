"""Exact finite-k scattering data for piecewise-constant Fokker-Planck potentials.

The state vector obeys ``d/dx u = [[-ik, f], [f, ik]] u`` with ``f = -V'/2``.
On a flat piece this is a pair of plane waves; a jump of V by ``J`` at a
point acts as the hyperbolic rotation ``[[c, -s], [-s, c]]`` with
``c = cosh(J/2)``, ``s = sinh(J/2)``.  ``U(x, x')`` applies the jumps at
points ``p`` with ``x' < p <= x`` (V is right-continuous).

Reflection off a semi-infinite periodic tail is read off the dominant Bloch
eigenvector of the period matrix and then carried to the point of interest
with the Moebius action of each piece, which never forms large products.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, PoleError, ResonancePoleError, SingularCombinationError
from .potential import PeriodicPotential, PotentialProfile

BAND_EDGE_TOL = 1e-10
_GL32 = np.polynomial.legendre.leggauss(32)


def _check_k(k: complex) -> complex:
    k = complex(k)
    if k.imag < 0:
        raise DomainError("Im k must be non-negative")
    return k


@dataclass(frozen=True)
class TransferMatrix:
    """``U = [[alpha, beta_m], [beta, alpha_m]]`` with ``*_m`` meaning ``(-k)``."""

    alpha: complex
    beta_m: complex
    beta: complex
    alpha_m: complex
    x: float
    xp: float
    k: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta_m], [self.beta, self.alpha_m]])

    @property
    def det(self) -> complex:
        return self.alpha * self.alpha_m - self.beta * self.beta_m

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        a, b = self.matrix, other.matrix
        m = a @ b
        return TransferMatrix(m[0, 0], m[0, 1], m[1, 0], m[1, 1], self.x, other.xp, self.k)

    def inverse(self) -> "TransferMatrix":
        # det is 1, so the inverse is the adjugate
        return TransferMatrix(self.alpha_m, -self.beta_m, -self.beta, self.alpha,
                              self.xp, self.x, self.k)


def _jump(J: float):
    c, s = math.cosh(J / 2), math.sinh(J / 2)
    return c, -s, -s, c


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h


def transfer_matrix(source, x: float, xp: float, k: complex) -> TransferMatrix:
    """U(x, x'; k) over a profile or a periodic tail."""
    k = _check_k(k)
    if x < xp:
        return transfer_matrix(source, xp, x, k).inverse()
    m = (1.0 + 0j, 0j, 0j, 1.0 + 0j)
    prev = None
    for lo, hi, v in source.pieces(xp, x):
        if prev is not None and v != prev:
            m = _mul(_jump(v - prev), m)
        d = hi - lo
        e = cmath.exp(-1j * k * d)
        ei = cmath.exp(1j * k * d)
        a, b, c, dd = m
        m = (a * e, b * e, c * ei, dd * ei)
        prev = v
    if prev is not None:
        vx = source(x)
        if vx != prev:
            m = _mul(_jump(vx - prev), m)
    return TransferMatrix(m[0], m[1], m[2], m[3], x, xp, k)


class Scattering(NamedTuple):
    tau: complex
    R_r: complex
    R_l: complex


class GeneralizedScattering(NamedTuple):
    tau: complex
    R_r: complex
    R_l: complex
    Q: complex
    alpha: complex
    beta_m: complex


def scattering_coeffs(U: TransferMatrix) -> Scattering:
    if U.alpha == 0:
        raise ResonancePoleError(f"alpha vanishes at k={U.k!r}")
    return Scattering(1 / U.alpha, U.beta / U.alpha, -U.beta_m / U.alpha)


def generalized_coeffs(U: TransferMatrix, W: float, Vx: float) -> GeneralizedScattering:
    """W-deformed coefficients plus the deformed matrix entries."""
    tau, Rr, Rl = scattering_coeffs(U)
    w = (W - Vx) / 2
    xi = math.tanh(w)
    den = 1 - xi * Rr
    if abs(den) < 1e-300:
        raise SingularCombinationError("1 - xi R_r vanishes")
    tb = math.sqrt(1 - xi * xi) * tau / den
    Rrb = (Rr - xi) / den
    Rlb = Rl + xi * tau * tau / den
    ch, sh = math.cosh(w), math.sinh(w)
    ab = ch * U.alpha - sh * U.beta
    bmb = ch * U.beta_m - sh * U.alpha_m
    return GeneralizedScattering(tb, Rrb, Rlb, tb * tb / (1 - Rlb * Rlb), ab, bmb)


# -- Bloch data ------------------------------------------------------------

@dataclass(frozen=True)
class BlochData:
    Y: complex
    lam: complex
    gamma: complex
    near_band_edge: bool
    period_matrix: TransferMatrix
    one_minus_Y2: complex
    # U_period - I, kept separately because its entries are O(k) near k = 0
    deviation: tuple[complex, complex, complex, complex]


def transfer_deviation(source, x: float, xp: float, k: complex):
    """``(U(k; x, x'), U(k) - U(0))`` as flat 4-tuples.

    The difference is accumulated through ``E <- M(k) E + (M(k) - M(0)) U0``
    so that it keeps full relative precision when k is small.
    """
    k = _check_k(k)
    if x < xp:
        raise DomainError("transfer_deviation expects x >= x'")
    U0 = (1.0, 0.0, 0.0, 1.0)
    E = (0j, 0j, 0j, 0j)
    Uk = (1.0 + 0j, 0j, 0j, 1.0 + 0j)
    prev = None

    def jump(J):
        nonlocal U0, E, Uk
        m = _jump(J)
        U0, E, Uk = _mul(m, U0), _mul(m, E), _mul(m, Uk)

    for lo, hi, v in source.pieces(xp, x):
        if prev is not None and v != prev:
            jump(v - prev)
        d = hi - lo
        em1, ep1 = cmath.exp(-1j * k * d) - 1, cmath.exp(1j * k * d) - 1
        if abs(k * d) < 1e-3:
            # expm1 for complex arguments
            em1 = _expm1(-1j * k * d)
            ep1 = _expm1(1j * k * d)
        a, b, c, dd = E
        E = (a + em1 * a + em1 * U0[0], b + em1 * b + em1 * U0[1],
             c + ep1 * c + ep1 * U0[2], dd + ep1 * dd + ep1 * U0[3])
        a, b, c, dd = Uk
        Uk = (a * (1 + em1), b * (1 + em1), c * (1 + ep1), dd * (1 + ep1))
        prev = v
    if prev is not None:
        vx = source(x)
        if vx != prev:
            jump(vx - prev)
    return Uk, E


def _expm1(z: complex) -> complex:
    # Taylor series; only used for |z| < 1e-3 where 8 terms are ample
    term, total = z, z
    for n in range(2, 9):
        term *= z / n
        total += term
    return total


def period_matrix(tail: PeriodicPotential, k: complex, x: float | None = None) -> TransferMatrix:
    if x is None:
        x = tail.phase_origin
    return transfer_matrix(tail, x, x - tail.period, k)


def _period_dev(tail: PeriodicPotential, k: complex, x: float):
    # over a full period the jumps cancel, so U(0) is exactly the identity
    _, E = transfer_deviation(tail, x, x - tail.period, k)
    return E


def _lambda_dev(E) -> tuple[complex, complex, complex, complex]:
    e00, e01, e10, e11 = E
    Y = 1 + (e00 + e11) / 2
    omy2 = -((e00 - e11) ** 2 + 4 * e01 * e10) / 4
    r = cmath.sqrt(omy2)
    return Y, Y - 1j * r, Y + 1j * r, omy2


def bloch(tail: PeriodicPotential, k: complex, x: float | None = None) -> BlochData:
    """Bloch eigenvalue with ``|lambda| >= 1``; ties on the real axis are
    resolved by continuity from ``k + i eps``."""
    k = _check_k(k)
    if x is None:
        x = tail.phase_origin
    E = _period_dev(tail, k, x)
    Y, l1, l2, omy2 = _lambda_dev(E)
    a1, a2 = abs(l1), abs(l2)
    if abs(a1 - a2) > 1e-12 * max(a1, a2):
        lam = l1 if a1 > a2 else l2
    else:
        eps = 1e-9 * max(1.0, abs(k))
        _, m1, m2, _ = _lambda_dev(_period_dev(tail, k + 1j * eps, x))
        probe = m1 if abs(m1) >= abs(m2) else m2
        lam = l1 if abs(l1 - probe) <= abs(l2 - probe) else l2
    U = TransferMatrix(1 + E[0], E[1], E[2], 1 + E[3], x, x - tail.period, k)
    return BlochData(Y, lam, lam ** -2, abs(omy2) < BAND_EDGE_TOL, U, omy2, E)


def band_edges(tail: PeriodicPotential, k_max: float, n_grid: int = 4000) -> list[float]:
    """Real k > 0 up to ``k_max`` where |Y| crosses 1."""
    from scipy.optimize import brentq

    def g(k):
        U = period_matrix(tail, k)
        return ((U.alpha + U.alpha_m) / 2).real ** 2 - 1

    ks = np.linspace(0.0, k_max, n_grid + 1)[1:]
    vals = [g(k) for k in ks]
    edges = []
    for k0, k1, g0, g1 in zip(ks, ks[1:], vals, vals[1:]):
        if g0 == 0:
            edges.append(float(k0))
        elif g0 * g1 < 0:
            edges.append(brentq(g, k0, k1, xtol=1e-14, rtol=1e-14))
    return edges


# -- semi-infinite reflection ---------------------------------------------

def _mobius_jump(R: complex, J: float) -> complex:
    t = math.tanh(J / 2)
    return (R - t) / (1 - t * R)


def _eigen_ratio(b: BlochData, left: bool) -> complex:
    """Ratio of Bloch-eigenvector components, from the period deviation.

    ``left=True``: second/first component of the right eigenvector.
    ``left=False``: the same for the left (row) eigenvector.
    """
    e00, e01, e10, e11 = b.deviation
    lam = b.lam
    # lam - alpha and lam - alpha_m without cancellation
    r = lam - b.Y
    lam_a = (e11 - e00) / 2 + r
    lam_am = (e00 - e11) / 2 + r
    if left:
        num1, d1, num2, d2 = lam_a, e01, e10, lam_am
    else:
        num1, d1, num2, d2 = lam_a, e10, e01, lam_am
    if abs(d1) >= abs(d2):
        return num1 / d1 if d1 != 0 else 0j
    return num2 / d2


def _tail_left_R0(tail: PeriodicPotential, xr: float, k: complex) -> complex:
    """R_r(x_r, -inf) of the pure tail, V taken as tail(x_r) at x_r."""
    return _eigen_ratio(bloch(tail, k, xr), left=True)


def _tail_right_rho(tail: PeriodicPotential, xq: float, k: complex) -> complex:
    return _eigen_ratio(bloch(tail, k, xq + tail.period), left=False)


def _transport_right(source, a: float, R: complex, b: float, k: complex) -> complex:
    """Carry R_r(a, -inf) to R_r(b, -inf), b >= a."""
    prev = source(a)
    for lo, hi, v in source.pieces(a, b):
        if v != prev:
            R = _mobius_jump(R, v - prev)
        R *= cmath.exp(2j * k * (hi - lo))
        prev = v
    vb = source(b)
    if vb != prev:
        R = _mobius_jump(R, vb - prev)
    return R


def _transport_left(source, b: float, ell: complex, a: float, k: complex) -> complex:
    """Carry R_l(inf, b) to R_l(inf, a), a <= b."""
    pcs = source.pieces(a, b)
    nxt = source(b)
    for lo, hi, v in reversed(pcs):
        if v != nxt:
            t = math.tanh((nxt - v) / 2)
            ell = (ell + t) / (1 + t * ell)
        ell *= cmath.exp(2j * k * (hi - lo))
        nxt = v
    return ell


def _as_profile(source) -> PotentialProfile:
    if isinstance(source, PeriodicPotential):
        return PotentialProfile.from_tail(source)
    return source


def semi_infinite_reflection(source, x: float, k: complex) -> complex:
    """R_r(x, -inf; k) for a profile (or a pure periodic tail)."""
    k = _check_k(k)
    prof = _as_profile(source)
    xr = min(x, prof.x_min)
    tail = prof.left_tail
    R = _tail_left_R0(tail, xr, k)
    J = prof(xr) - tail(xr)
    if J != 0:
        R = _mobius_jump(R, J)
    return _transport_right(prof, xr, R, x, k)


def right_semi_infinite_reflection(source, x: float, k: complex) -> complex:
    """R_l(inf, x; k)."""
    k = _check_k(k)
    prof = _as_profile(source)
    xq = max(x, prof.x_max)
    ell = -_tail_right_rho(prof.right_tail, xq, k)
    return _transport_left(prof, xq, ell, x, k)


# -- S and the Green function ---------------------------------------------

def s_functions(profile, x: float, k: complex) -> tuple[complex, complex, complex]:
    Rr = semi_infinite_reflection(profile, x, k)
    Rl = right_semi_infinite_reflection(profile, x, k)
    if 1 + Rr == 0 or 1 + Rl == 0:
        raise PoleError(f"1 + R vanishes at x={x!r}, k={k!r}")
    Sr, Sl = Rr / (1 + Rr), Rl / (1 + Rl)
    return Sr, Sl, Sr + Sl


def _integrate_S(profile, y: float, x: float, k: complex, tol: float = 1e-13) -> complex:
    # S is smooth on each piece but can swing sharply where 1 + R is small,
    # so each piece is bisected until the halves agree with the whole
    nodes, weights = _GL32
    prof = _as_profile(profile)

    def gl(lo, hi):
        half, mid = (hi - lo) / 2, (hi + lo) / 2
        return half * sum(w * s_functions(prof, mid + half * t, k)[2] for t, w in zip(nodes, weights))

    def adapt(lo, hi, whole, depth):
        m = (lo + hi) / 2
        left, right = gl(lo, m), gl(m, hi)
        if depth >= 12 or abs(left + right - whole) <= tol * max(abs(left) + abs(right), 1e-300):
            return left + right
        return adapt(lo, m, left, depth + 1) + adapt(m, hi, right, depth + 1)

    return sum((adapt(lo, hi, gl(lo, hi), 0) for lo, hi, _ in prof.pieces(y, x)), 0j)


def exact_green(profile, x: float, y: float, k: complex, route: str = "reflection") -> complex:
    """Exact G_S(x, y; k) for ``x >= y``.

    ``route="reflection"`` combines semi-infinite reflections with the
    transfer matrix between y and x; ``route="s"`` integrates S(z, k).
    """
    k = _check_k(k)
    if x < y:
        raise DomainError("exact_green expects x >= y")
    if k == 0:
        raise PoleError("G_S has a pole at k = 0")
    if route == "reflection":
        Rl_x = right_semi_infinite_reflection(profile, x, k)
        Rr_x = semi_infinite_reflection(profile, x, k)
        Rr_y = semi_infinite_reflection(profile, y, k)
        tau, _, Rl_xy = scattering_coeffs(transfer_matrix(_as_profile(profile), x, y, k))
        den = 2j * k * (1 - Rl_x * Rr_x) * (1 - Rl_xy * Rr_y)
        if den == 0:
            raise PoleError(f"vanishing denominator at k={k!r}")
        return (1 + Rl_x) * (1 + Rr_y) * tau / den
    if route == "s":
        Sx = s_functions(profile, x, k)[2]
        Sy = s_functions(profile, y, k)[2]
        integral = _integrate_S(profile, y, x, k) if x > y else 0j
        den = 2j * k * cmath.sqrt(1 - Sx) * cmath.sqrt(1 - Sy)
        if den == 0:
            raise PoleError(f"vanishing denominator at k={k!r}")
        return cmath.exp(1j * k * (x - y) - 1j * k * integral) / den
    raise DomainError(f"unknown route {route!r}")


def green_evaluator(profile, x: float, y: float, route: str = "reflection") -> Callable[[complex], complex]:
    return lambda k: exact_green(profile, x, y, k, route)


# -- closed-form oracles for the worked examples ---------------------------

def effective_well_green(params, x: float, y: float, k: complex) -> complex:
    """Square-well approximation to the Example-1 Green function.

    ``params`` needs attributes C, L, a, h (see :class:`Example1Params`).
    """
    from .periodic import period_constants
    if not 0 < y <= x < params.a:
        raise DomainError("need 0 < y <= x < a")
    V0 = period_constants(params.tail()).V0
    h = params.h
    r0 = math.tanh((V0 + h) / 2)
    if r0 == 0:
        return cmath.exp(1j * k * (x - y)) / (2j * k)
    delta = params.a * math.sinh(V0) / (2 * math.sinh(V0 + h))
    a = params.a
    num = (1 + r0 * cmath.exp(2j * k * (a - x - delta))) * (1 + r0 * cmath.exp(2j * k * (y - delta)))
    return num * cmath.exp(1j * k * (x - y)) / (2j * k * (1 - r0 ** 2 * cmath.exp(2j * k * (a - 2 * delta))))


def _ex2_lattice(C, L, a, E0, k):
    # lattice data on (a, L) and the two candidate C2 roots at k
    b = L - a
    k2 = k * k
    pk = cmath.sqrt(k2 + E0)
    qk = cmath.sqrt(C - k2 - E0)
    r = (qk * qk - pk * pk) / (2 * pk * qk)
    sa, ca = cmath.sin(pk * a), cmath.cos(pk * a)
    al = cmath.exp(qk * b) * (ca + r * sa)
    alp = cmath.exp(-qk * b) * (ca - r * sa)
    C1 = -C / (2 * pk * qk) * cmath.exp(-qk * b) * sa
    root = cmath.sqrt(4 - (al + alp) ** 2)

    def growth(C2):
        # psi on (a, L) is C1 e^{q(x-a)} + C2 e^{-q(x-a)}; propagate one period
        v0 = C1 + C2
        d0 = qk * (C1 - C2)
        ch, shq = cmath.cosh(qk * b), cmath.sinh(qk * b)
        v1 = v0 * ch + d0 * shq / qk
        d1 = v0 * qk * shq + d0 * ch
        v2 = v1 * ca + d1 * sa / pk
        d2 = -v1 * pk * sa + d1 * ca
        return (abs(v2) + abs(d2)) / (abs(v0) + abs(d0))

    cands = [(-al + alp + 1j * root) / 2, (-al + alp - 1j * root) / 2]
    return qk, C1, cands, [growth(c) for c in cands]


def example2_exact(params, x: float, y: float, k: complex) -> complex:
    """Closed-form G_S for the Kronig-Penney lattice with a barrier impurity.

    Energies are measured from the bottom of the lowest band.  The branch of
    the square root in C2 is fixed by requiring the right solution to decay
    along the lattice.  On the real axis inside a band both roots are
    neutral, so the choice is continued from just above the axis.
    """
    from .examples import example2_band_bottom
    C, L, a, h = params.C, params.L, params.a, params.h
    if not (0 < y <= x < a) or h <= 0:
        raise DomainError("need 0 < y <= x < a and h > 0")
    k = _check_k(k)
    E0 = example2_band_bottom(C, L, a)
    qk, C1, cands, ratios = _ex2_lattice(C, L, a, E0, k)
    if k.imag == 0:
        eps = 1e-7 * max(1.0, abs(k))
        _, _, pc, pr = _ex2_lattice(C, L, a, E0, k + 1j * eps)
        ref = pc[0] if pr[0] <= pr[1] else pc[1]
        C2 = min(cands, key=lambda c: abs(c - ref))
    else:
        C2 = cands[0] if ratios[0] <= ratios[1] else cands[1]
    sk = cmath.sqrt(h - k * k - E0)
    A, B = C1 + C2, (qk / sk) * (C1 - C2)
    psi_p = A * cmath.cosh(sk * (x - a)) + B * cmath.sinh(sk * (x - a))
    psi_m = A * cmath.cosh(sk * y) - B * cmath.sinh(sk * y)
    W = (A * A + B * B) * sk * cmath.sinh(sk * a) - 2 * qk * (C1 * C1 - C2 * C2) * cmath.cosh(sk * a)
    if W == 0:
        raise PoleError(f"Wronskian vanishes at k={k!r}")
    return -psi_p * psi_m / W
