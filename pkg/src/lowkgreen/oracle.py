"""Brute-force small-k Laurent coefficients from an exact Green function.

The function is sampled on a geometric grid along the ray arg k = pi/4 and
``(ik)^{-n0} G`` is fitted by ordinary least squares against powers of the
scaled variable ``u = ik / k_scale``.  A few orders beyond those requested
are included in the fit and discarded, which absorbs most of the truncation
error without widening the grid.

For the problems handled here every coefficient is real, and by default
the fit imposes that: real and imaginary parts of each sample become
separate rows.  Along the ray the powers of ``u`` have distinct phases, so
this cuts the condition number by several orders of magnitude.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConditioningError, DomainError

RAY = cmath.exp(0.25j * cmath.pi)
N_GRID = 12


@dataclass(frozen=True)
class LaurentFit:
    orders: tuple[int, ...]
    coefficients: dict[int, complex]
    residual: float
    k_grid: tuple[complex, ...]
    condition: float

    def real(self, n: int) -> float:
        return self.coefficients[n].real

    def __getitem__(self, n: int) -> complex:
        return self.coefficients[n]


def k_grid(k_scale: float, n: int = N_GRID) -> list[complex]:
    return [k_scale * 2.0 ** (-j) * RAY for j in range(n)]


PILOT_SCALE = 0.2
AUTO_FRACTION = 0.3
AUTO_RANGE = (0.02, 0.3)


def convergence_radius(green: Callable[[complex], complex], n0: int,
                       k_scale: float = PILOT_SCALE) -> float:
    """Rough radius of convergence of ``(ik)^{-n0} G`` from a pilot fit.

    A straight line is fitted to ``log|c_m|`` over the middle orders of a
    ten-term fit; the radius is ``exp(-slope)``.
    """
    pilot = extract_coeffs(green, range(n0, n0 + 10), k_scale, extra=1,
                           max_condition=1e14, check_residual=False)
    m = np.arange(2, 9)
    logs = np.log([abs(pilot.coefficients[n0 + j]) + 1e-300 for j in m])
    slope = np.polyfit(m, logs, 1)[0]
    return float(np.exp(-slope))


def extract_coeffs(green: Callable[[complex], complex], orders: Sequence[int] | range,
                   k_scale: float | None = None, extra: int = 6,
                   max_condition: float = 1e10, real: bool = True,
                   check_residual: bool = True) -> LaurentFit:
    """Fit ``G(k) = sum_n (ik)^n g_n`` for n in ``orders``.

    ``orders`` must be a contiguous range; ``extra`` higher orders enter the
    fit but are not reported.  With ``k_scale=None`` the scale is chosen as
    a fixed fraction of the radius estimated by :func:`convergence_radius`.
    """
    orders = tuple(orders)
    if not orders or list(orders) != list(range(orders[0], orders[-1] + 1)):
        raise DomainError("orders must be a nonempty contiguous range")
    if k_scale is None:
        rho = convergence_radius(green, orders[0])
        k_scale = min(max(AUTO_FRACTION * rho, AUTO_RANGE[0]), AUTO_RANGE[1])
    if k_scale <= 0:
        raise DomainError("k_scale must be positive")
    n0 = orders[0]
    ncol = len(orders) + extra
    if ncol > N_GRID:
        raise DomainError("too many orders for the sample grid")
    ks = k_grid(k_scale)
    u = np.array([1j * k / k_scale for k in ks])
    F = np.array([green(k) * (1j * k) ** (-n0) for k in ks])
    A = np.vander(u, ncol, increasing=True)
    if real:
        A = np.vstack([A.real, A.imag])
        F = np.concatenate([F.real, F.imag])
    Qm, R = np.linalg.qr(A)
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > max_condition:
        raise ConditioningError(
            f"fit condition number {cond:.3g} too large; try k_scale={k_scale / 2:g}")
    c = np.linalg.solve(R, Qm.conj().T @ F)
    resid = float(np.linalg.norm(A @ c - F))
    scale = float(np.max(np.abs(F)))
    coeffs = {n: complex(c[m] / (k_scale ** m)) for m, n in enumerate(orders)}
    if check_residual and resid > 1e-6 * max(scale, 1e-300):
        raise ConditioningError(
            f"fit residual {resid:.3g} too large relative to {scale:.3g}; "
            f"try k_scale={k_scale / 2:g}")
    return LaurentFit(orders, coeffs, resid, tuple(ks), float(cond))
