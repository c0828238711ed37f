"""Piecewise-constant asymptotically periodic potentials.

A :class:`PotentialProfile` is a finite window ``[x_min, x_max)`` on which the
potential is given explicitly, glued to a periodic tail on each side.  All
functions use a right-continuous convention: at a breakpoint the value of the
piece that starts there is returned.

Everything downstream only needs :meth:`pieces`, which decomposes an interval
into maximal constant runs ``(left, right, value)``.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError

# Pieces narrower than this (relative to the coordinate scale) are rounding
# artefacts of period arithmetic and are dropped.
_SNAP = 1e-13

Piece = tuple[float, float, float]


def _snap_eq(a: float, b: float) -> bool:
    return abs(a - b) <= _SNAP * max(1.0, abs(a), abs(b))


def _merge(pieces: Iterable[Piece]) -> list[Piece]:
    out: list[Piece] = []
    for lo, hi, v in pieces:
        if hi - lo <= _SNAP * max(1.0, abs(lo), abs(hi)):
            continue
        if out and out[-1][2] == v and _snap_eq(out[-1][1], lo):
            out[-1] = (out[-1][0], hi, v)
        elif out:
            # close any snapped gap so the pieces tile [a, b) exactly
            out.append((out[-1][1], hi, v))
        else:
            out.append((lo, hi, v))
    return out


@dataclass(frozen=True)
class PeriodicPotential:
    """Periodic piecewise-constant function.

    ``segments`` lists ``(width, value)`` pairs covering one period that
    starts at ``phase_origin``.
    """

    period: float
    segments: tuple[tuple[float, float], ...]
    phase_origin: float = 0.0

    def __post_init__(self):
        segs = tuple((float(w), float(v)) for w, v in self.segments)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "phase_origin", float(self.phase_origin))
        if not segs:
            raise DomainError("a periodic potential needs at least one segment")
        if self.period <= 0:
            raise DomainError("period must be positive")
        if any(w <= 0 for w, _ in segs):
            raise DomainError("segment widths must be strictly positive")
        total = sum(w for w, _ in segs)
        if abs(total - self.period) > 1e-12 * self.period:
            raise DomainError(
                f"segment widths sum to {total!r}, expected period {self.period!r}")

    @classmethod
    def constant(cls, value: float = 0.0, period: float = 1.0) -> "PeriodicPotential":
        return cls(period, ((period, value),))

    @property
    def _offsets(self) -> list[float]:
        offs = [0.0]
        for w, _ in self.segments[:-1]:
            offs.append(offs[-1] + w)
        return offs

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.segments]

    def _locate(self, x: float) -> tuple[int, int, float]:
        """Return (period index, segment index, local coordinate) of x."""
        L = self.period
        n = math.floor((x - self.phase_origin) / L)
        local = x - self.phase_origin - n * L
        if local >= L:  # rounding
            n += 1
            local -= L
        offs = self._offsets
        i = max(bisect_right(offs, local) - 1, 0)
        # a point that rounds just below a segment start belongs to that segment
        nxt = offs[i + 1] if i + 1 < len(offs) else L
        if nxt - local <= _SNAP * max(1.0, abs(x)):
            local = nxt
            i += 1
            if i == len(offs):
                n, i, local = n + 1, 0, 0.0
        return n, i, local

    def __call__(self, x: float) -> float:
        _, i, _ = self._locate(x)
        return self.segments[i][1]

    def pieces(self, a: float, b: float) -> list[Piece]:
        if b < a:
            raise DomainError("pieces() needs a <= b")
        if b == a:
            return []
        offs = self._offsets
        n, i, _ = self._locate(a)
        out = []
        start = self.phase_origin + n * self.period
        lo = a
        while lo < b:
            hi = start + offs[i] + self.segments[i][0]
            if i == len(self.segments) - 1:
                hi = start + self.period
            hi = min(hi, b)
            out.append((lo, hi, self.segments[i][1]))
            lo = hi
            i += 1
            if i == len(self.segments):
                i = 0
                n += 1
                start = self.phase_origin + n * self.period
        return _merge(out)

    def breakpoints(self, a: float, b: float) -> list[float]:
        """Jump locations strictly inside (a, b)."""
        return [p[0] for p in self.pieces(a, b)[1:]]

    def is_constant(self) -> bool:
        return len({v for _, v in self.segments}) == 1

    def shifted(self, dv: float) -> "PeriodicPotential":
        return PeriodicPotential(self.period, tuple((w, v + dv) for w, v in self.segments),
                                 self.phase_origin)

    def negated(self) -> "PeriodicPotential":
        return PeriodicPotential(self.period, tuple((w, -v) for w, v in self.segments),
                                 self.phase_origin)


@dataclass(frozen=True)
class PiecewiseConstant:
    """Plain piecewise-constant function on ``[breakpoints[0], breakpoints[-1])``.

    Values outside the span are continued by the end values.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) != len(vals) + 1 or not vals:
            raise DomainError("need len(breakpoints) == len(values) + 1 >= 2")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError("breakpoints must be strictly increasing")

    def __call__(self, x: float) -> float:
        i = bisect_right(self.breakpoints, x) - 1
        return self.values[min(max(i, 0), len(self.values) - 1)]

    def __neg__(self) -> "PiecewiseConstant":
        return PiecewiseConstant(self.breakpoints, tuple(-v for v in self.values))

    def pieces(self, a: float, b: float) -> list[Piece]:
        if b < a:
            raise DomainError("pieces() needs a <= b")
        cuts = [a] + [p for p in self.breakpoints[1:-1] if a < p < b] + [b]
        return _merge((lo, hi, self(lo)) for lo, hi in zip(cuts, cuts[1:]))


@dataclass(frozen=True)
class PotentialProfile:
    """Asymptotically periodic piecewise-constant potential.

    ``core`` is a list of ``(breakpoint, value)``: the value holds from its
    breakpoint up to the next one (or ``x_max``).  For ``x < x_min`` the
    left tail applies, for ``x >= x_max`` the right tail.
    """

    left_tail: PeriodicPotential
    right_tail: PeriodicPotential
    core: tuple[tuple[float, float], ...]
    x_min: float
    x_max: float

    def __post_init__(self):
        core = tuple((float(b), float(v)) for b, v in self.core)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        if not self.x_min < self.x_max:
            raise DomainError("need x_min < x_max")
        if not core:
            raise DomainError("core must contain at least one (breakpoint, value)")
        if not _snap_eq(core[0][0], self.x_min):
            raise DomainError("first core breakpoint must equal x_min")
        bps = [b for b, _ in core]
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError("core breakpoints must be strictly increasing")
        if bps[-1] >= self.x_max:
            raise DomainError("core breakpoints must lie below x_max")

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_tail(cls, tail: PeriodicPotential, x_min: float | None = None,
                  x_max: float | None = None) -> "PotentialProfile":
        """Purely periodic profile (V_Delta identically zero)."""
        if x_min is None:
            x_min = tail.phase_origin
        if x_max is None:
            x_max = x_min + tail.period
        core = tuple((lo, v) for lo, _, v in tail.pieces(x_min, x_max))
        return cls(tail, tail, core, x_min, x_max)

    @classmethod
    def free(cls, period: float = 1.0) -> "PotentialProfile":
        return cls.from_tail(PeriodicPotential.constant(0.0, period))

    @classmethod
    def with_core(cls, tail: PeriodicPotential, core: Sequence[tuple[float, float]],
                  x_min: float, x_max: float,
                  right_tail: PeriodicPotential | None = None) -> "PotentialProfile":
        return cls(tail, right_tail if right_tail is not None else tail,
                   tuple(core), x_min, x_max)

    # -- evaluation -------------------------------------------------------
    @property
    def is_symmetric(self) -> bool:
        return self.left_tail == self.right_tail

    def tail(self, side: str) -> PeriodicPotential:
        if side in ("left", "R", "-"):
            return self.left_tail
        if side in ("right", "L", "+"):
            return self.right_tail
        raise DomainError(f"unknown side {side!r}")

    def __call__(self, x: float) -> float:
        if x < self.x_min:
            return self.left_tail(x)
        if x >= self.x_max:
            return self.right_tail(x)
        i = bisect_right([b for b, _ in self.core], x) - 1
        return self.core[i][1]

    def _core_pieces(self, a: float, b: float) -> list[Piece]:
        out = []
        bps = [c[0] for c in self.core] + [self.x_max]
        for (lo, v), hi in zip(self.core, bps[1:]):
            lo2, hi2 = max(lo, a), min(hi, b)
            if hi2 > lo2:
                out.append((lo2, hi2, v))
        return out

    def pieces(self, a: float, b: float) -> list[Piece]:
        if b < a:
            raise DomainError("pieces() needs a <= b")
        out: list[Piece] = []
        if a < self.x_min:
            out += self.left_tail.pieces(a, min(b, self.x_min))
        if b > self.x_min and a < self.x_max:
            out += self._core_pieces(a, b)
        if b > self.x_max:
            out += self.right_tail.pieces(max(a, self.x_max), b)
        return _merge(out)

    def breakpoints(self, a: float, b: float) -> list[float]:
        return [p[0] for p in self.pieces(a, b)[1:]]

    def shifted(self, dv: float) -> "PotentialProfile":
        return PotentialProfile(self.left_tail.shifted(dv), self.right_tail.shifted(dv),
                                tuple((b, v + dv) for b, v in self.core),
                                self.x_min, self.x_max)


def evaluate(profile: PotentialProfile, x: float) -> float:
    """V(x), right-continuous at breakpoints."""
    return profile(x)


def delta_parts(profile: PotentialProfile, x: float, side: str = "left") -> tuple[float, float]:
    """Return ``(e^{V} - e^{V_tail}, e^{-V} - e^{-V_tail})`` at x.

    ``side`` picks the tail the perturbation is measured against.
    """
    v = profile(x)
    vp = profile.tail(side)(x)
    if v == vp:
        return 0.0, 0.0
    return math.exp(v) - math.exp(vp), math.exp(-v) - math.exp(-vp)


def validate_decay(profile: PotentialProfile, n: int) -> bool:
    """Whether V_Delta has a finite n-th absolute moment.

    Compactly supported perturbations always do; the hook exists for
    representations with non-compact perturbations.
    """
    if n < 0:
        raise DomainError("moment order must be non-negative")
    return math.isfinite(profile.x_min) and math.isfinite(profile.x_max)


def example1_profile(C: float = 1.0, L: float = 1.0, a: float = 0.6,
                     h: float = 1.0) -> PotentialProfile:
    """Square-well impurity in a two-step periodic lattice.

    Tail: 0 on (0, a), C on (a, L); perturbation -h on (0, a).
    """
    if not 0 < a < L:
        raise DomainError("need 0 < a < L")
    tail = PeriodicPotential(L, ((a, 0.0), (L - a, C)), 0.0)
    return PotentialProfile(tail, tail, ((0.0, -h),), 0.0, a)


def example2_schrodinger_profile(C: float = 1.0, L: float = 1.0, a: float = 0.6,
                                 h: float = 0.5) -> PotentialProfile:
    """Kronig-Penney Schroedinger potential with a barrier impurity (unshifted).

    Tail: 0 on (0, a), C on (a, L); core: h on (0, a).
    """
    if not 0 < a < L:
        raise DomainError("need 0 < a < L")
    tail = PeriodicPotential(L, ((a, 0.0), (L - a, C)), 0.0)
    return PotentialProfile(tail, tail, ((0.0, h),), 0.0, a)
