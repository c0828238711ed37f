"""One-period invariants of a periodic tail."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .brackets import periodic_bracket
from .potential import PeriodicPotential


@dataclass(frozen=True)
class PeriodConstants:
    P: float
    M: float
    L0: float
    V0: float
    Q: float


@lru_cache(maxsize=256)
def period_constants(tail: PeriodicPotential) -> PeriodConstants:
    """P, M, L0, V0 and Q of a tail, evaluated at its phase origin.

    The values do not depend on the reference point; the phase origin is
    used only to make the output deterministic.
    """
    x = tail.phase_origin
    P = periodic_bracket("+", x, tail)
    M = periodic_bracket("-", x, tail)
    # the alternating pair is the x-independent combination
    Q = periodic_bracket("+-+-", x, tail) + periodic_bracket("-+-+", x, tail)
    return PeriodConstants(P=P, M=M, L0=math.sqrt(P * M), V0=0.5 * math.log(P / M), Q=Q)


def one_period_brackets(tail: PeriodicPotential, x: float) -> tuple[float, float, float, float]:
    """``(p[+-], p[-+], p[+-+], p[-+-])`` over ``[x - L, x]``."""
    return (periodic_bracket("+-", x, tail), periodic_bracket("-+", x, tail),
            periodic_bracket("+-+", x, tail), periodic_bracket("-+-", x, tail))
