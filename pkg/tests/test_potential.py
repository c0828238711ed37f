import math
import random

import pytest
from hypothesis import given, strategies as st

from lowkgreen.errors import DomainError
from lowkgreen.potential import (PeriodicPotential, PiecewiseConstant, PotentialProfile,
                                 delta_parts, evaluate, example1_profile,
                                 example2_schrodinger_profile, validate_decay)
from helpers import random_profile, random_tail


def test_example1_values():
    prof = example1_profile()
    assert evaluate(prof, 0.3) == -1.0
    # previous period's C segment
    assert evaluate(prof, -0.2) == 1.0
    assert evaluate(prof, 0.8) == 1.0
    assert evaluate(prof, 1.3) == 0.0


def test_zero_profile():
    prof = PotentialProfile.free()
    for x in (-3.7, 0.0, 0.5, 12.25):
        assert evaluate(prof, x) == 0.0
        assert delta_parts(prof, x) == (0.0, 0.0)


def test_right_continuous_breakpoints():
    prof = example1_profile()
    assert evaluate(prof, 0.0) == -1.0
    assert evaluate(prof, 0.6) == 1.0
    assert evaluate(prof, -0.4) == 1.0
    assert evaluate(prof, -1.0) == 0.0
    assert evaluate(prof, 1.6) == 1.0


def test_delta_parts_example1():
    prof = example1_profile(h=1.0)
    dp, dm = delta_parts(prof, 0.3, "left")
    assert dp == pytest.approx(math.exp(-1) - 1, rel=1e-15)
    assert dm == pytest.approx(math.e - 1, rel=1e-15)
    assert delta_parts(prof, 0.8) == (0.0, 0.0)
    assert delta_parts(prof, -0.1) == (0.0, 0.0)


def test_validate_decay():
    assert validate_decay(example1_profile(), 5)
    assert validate_decay(PotentialProfile.free(), 0)
    assert validate_decay(example2_schrodinger_profile(), 3)
    with pytest.raises(DomainError):
        validate_decay(example1_profile(), -1)


def test_tail_periodicity_exact():
    rng = random.Random(11)
    checked = 0
    while checked < 1000:
        tail = random_tail(rng)
        x = rng.uniform(-20, 20)
        # x + L may round across a breakpoint only within a few ulps of it
        if tail.breakpoints(x - 1e-9, x + 1e-9):
            continue
        assert tail(x) == tail(x + tail.period) == tail(x - tail.period)
        checked += 1


@given(st.floats(-50, 50), st.integers(-5, 5))
def test_periodicity_example_tail(x, n):
    tail = PeriodicPotential(1.0, ((0.5, 0.0), (0.5, 2.0)), 0.0)
    # dyadic widths keep x + n exact away from breakpoints
    frac = x - math.floor(x)
    if min(frac, abs(frac - 0.5), 1 - frac) < 1e-9:
        return
    assert tail(x) == tail(x + n)


def test_compactness_and_reconstruction():
    rng = random.Random(12)
    for _ in range(40):
        prof = random_profile(rng, symmetric=False)
        for _ in range(30):
            x = rng.uniform(prof.x_min - 5, prof.x_max + 5)
            side = "left" if x < prof.x_min or rng.random() < 0.5 else "right"
            dp, dm = delta_parts(prof, x, side)
            if x < prof.x_min and side == "left" or x >= prof.x_max and side == "right":
                assert (dp, dm) == (0.0, 0.0)
            v, vt = evaluate(prof, x), prof.tail(side)(x)
            assert dp == pytest.approx(math.exp(v) - math.exp(vt), rel=1e-14, abs=0)
            assert dm == pytest.approx(math.exp(-v) - math.exp(-vt), rel=1e-14, abs=0)


def test_pieces_tile_interval():
    rng = random.Random(13)
    for _ in range(50):
        prof = random_profile(rng, symmetric=False)
        a = rng.uniform(-6, 2)
        b = a + rng.uniform(0, 8)
        ps = prof.pieces(a, b)
        if b > a:
            assert ps[0][0] == a and ps[-1][1] == pytest.approx(b, abs=1e-12)
        for (l1, h1, v1), (l2, h2, v2) in zip(ps, ps[1:]):
            assert h1 == l2 and v1 != v2
        for lo, hi, v in ps:
            assert evaluate(prof, 0.5 * (lo + hi)) == v


def test_pieces_snap_period_rounding():
    # 0.1 + 0.2 style rounding at a period boundary must not leave a sliver
    tail = PeriodicPotential(0.3, ((0.1, 1.0), (0.2, -1.0)), 0.0)
    ps = tail.pieces(0.0, 3.0)
    assert len(ps) == 20
    assert all(hi - lo > 0.05 for lo, hi, _ in ps)


def test_periodic_potential_validation():
    with pytest.raises(DomainError):
        PeriodicPotential(1.0, ())
    with pytest.raises(DomainError):
        PeriodicPotential(1.0, ((0.5, 0.0), (0.4, 1.0)))
    with pytest.raises(DomainError):
        PeriodicPotential(1.0, ((1.2, 0.0), (-0.2, 1.0)))
    with pytest.raises(DomainError):
        PeriodicPotential(-1.0, ((-1.0, 0.0),))


def test_profile_validation():
    t = PeriodicPotential.constant()
    with pytest.raises(DomainError):
        PotentialProfile(t, t, ((0.0, 1.0),), 1.0, 0.0)
    with pytest.raises(DomainError):
        PotentialProfile(t, t, ((0.1, 1.0),), 0.0, 1.0)
    with pytest.raises(DomainError):
        PotentialProfile(t, t, ((0.0, 1.0), (0.0, 2.0)), 0.0, 1.0)
    with pytest.raises(DomainError):
        PotentialProfile(t, t, ((0.0, 1.0), (1.5, 2.0)), 0.0, 1.0)


def test_symmetric_flag():
    assert example1_profile().is_symmetric
    rng = random.Random(3)
    assert not random_profile(rng, symmetric=False).is_symmetric


def test_piecewise_constant_extends_ends():
    f = PiecewiseConstant((0.0, 1.0, 2.0), (3.0, 4.0))
    assert f(-1) == 3.0 and f(1.0) == 4.0 and f(5) == 4.0
    assert (-f)(0.5) == -3.0
    with pytest.raises(DomainError):
        PiecewiseConstant((0.0, 0.0), (1.0,))
