import math
import random

import pytest

from lowkgreen.brackets import periodic_bracket
from lowkgreen.errors import DomainError, UnsupportedOrderError
from lowkgreen.examples import Example1Params, ex1_constants, ex1_green_leading, ex1_rbar, ex1_s
from lowkgreen.expansion import (a_coeffs, assemble_green, green_coeffs, rbar,
                                 reflection_series, s_coeffs, s_coeffs_two_sided)
from lowkgreen.oracle import extract_coeffs
from lowkgreen.periodic import period_constants
from lowkgreen.potential import PeriodicPotential, PotentialProfile
from lowkgreen.scattering import exact_green, s_functions, semi_infinite_reflection
from helpers import random_profile, random_tail

# r_2 of R_r(x, -inf; k) at x = 0.4 (C=1, a=0.6, h=1), from a Laurent fit of
# the exact reflection coefficient along the complex ray
R2_FIT_AT_04 = 0.12930617244392614


def two_sided_profile():
    left = PeriodicPotential(1.0, ((0.6, 0.0), (0.4, 1.0)), 0.0)
    right = PeriodicPotential(0.8, ((0.3, -0.5), (0.5, 0.4)), 0.0)
    return PotentialProfile(left, right, ((0.0, -0.7), (0.5, 0.2)), 0.0, 0.9)


def test_rbar_example1():
    p = Example1Params()
    prof = p.profile()
    V0 = ex1_constants(p)["V0"]
    for W in (-1.0, 0.3, 2.0):
        for x in (0.1, 0.4):
            r0, r1 = ex1_rbar(p, x, W)
            assert rbar(0, x, W, prof) == pytest.approx(math.tanh((V0 - W) / 2), rel=1e-15)
            assert rbar(1, x, W, prof) == pytest.approx(r1, rel=1e-12)


def test_rbar_free_first_order_vanishes():
    prof = PotentialProfile.free()
    for x in (-1.0, 0.3, 4.0):
        assert rbar(1, x, 0.0, prof) == pytest.approx(0.0, abs=1e-15)
        assert reflection_series(x, prof) == pytest.approx([0.0, 0.0, 0.0], abs=1e-15)
    with pytest.raises(UnsupportedOrderError):
        rbar(3, 0.0, 0.0, prof)


def test_reflection_series_example1():
    p = Example1Params()
    prof = p.profile()
    V0 = ex1_constants(p)["V0"]
    r0 = math.tanh((V0 + p.h) / 2)
    delta = p.a * math.sinh(V0) / (2 * math.sinh(V0 + p.h))
    for x in (0.05, 0.3, 0.55):
        r = reflection_series(x, prof, 1)
        assert r[0] == pytest.approx(r0, rel=1e-14)
        assert r[1] == pytest.approx(2 * (x - delta) * r0, rel=1e-12)
    assert reflection_series(0.4, prof)[2] == pytest.approx(R2_FIT_AT_04, rel=1e-8)


def test_reflection_series_against_fit():
    rng = random.Random(31)
    for _ in range(4):
        prof = random_profile(rng)
        x = rng.uniform(prof.x_min - 0.5, prof.x_max + 0.5)
        if prof.breakpoints(x - 1e-6, x + 1e-6):
            continue
        fit = extract_coeffs(lambda k: semi_infinite_reflection(prof, x, k), range(0, 4))
        r = reflection_series(x, prof)
        for n in range(3):
            assert r[n] == pytest.approx(fit.real(n), rel=1e-6, abs=1e-9)


def test_a_coeffs_against_s_function_fit():
    # S_r = 1/2 + sum (ik)^n a_n^R and likewise S_l with a_n^L
    prof = Example1Params().profile()
    x = 0.4
    for side, idx in (("R", 0), ("L", 1)):
        fit = extract_coeffs(lambda k: s_functions(prof, x, k)[idx], range(0, 4))
        assert a_coeffs(x, prof, side, 0) == pytest.approx(fit.real(0) - 0.5, rel=1e-10)
        assert a_coeffs(x, prof, side, 1) == pytest.approx(fit.real(1), rel=1e-8)
        assert a_coeffs(x, prof, side, 2) == pytest.approx(fit.real(2), rel=1e-6)


def test_a0_closed_form():
    rng = random.Random(32)
    for _ in range(20):
        prof = random_profile(rng, symmetric=False)
        x = rng.uniform(-3, 3)
        V0 = period_constants(prof.left_tail).V0
        assert a_coeffs(x, prof, "R", 0) == pytest.approx(-0.5 * math.exp(prof(x) - V0), rel=1e-15)


def test_a1_cancels_without_perturbation():
    rng = random.Random(33)
    for _ in range(20):
        prof = PotentialProfile.from_tail(random_tail(rng))
        x = rng.uniform(-3, 3)
        total = a_coeffs(x, prof, "R", 1) + a_coeffs(x, prof, "L", 1)
        assert total == pytest.approx(0.0, abs=1e-13 * abs(a_coeffs(x, prof, "R", 1)) + 1e-15)
    with pytest.raises(DomainError):
        a_coeffs(0.0, prof, "X", 1)
    with pytest.raises(UnsupportedOrderError):
        a_coeffs(0.0, prof, "R", 3)


def test_s_coeffs_example1_all_orders():
    for h in (0.3, 1.0):
        p = Example1Params(h=h)
        sc = s_coeffs(p.profile())
        for x in (0.01, 0.2, 0.4, 0.59):
            ref = ex1_s(p, x)
            for n in range(4):
                assert sc(n, x) == pytest.approx(ref[n], rel=1e-12)


def test_s_sum_of_a_coeffs():
    # the reduced s_n agree with a_n^R + a_n^L
    rng = random.Random(34)
    for _ in range(15):
        prof = random_profile(rng)
        sc = s_coeffs(prof, 2)
        x = rng.uniform(prof.x_min - 1, prof.x_max + 1)
        for n in range(3):
            two = a_coeffs(x, prof, "R", n) + a_coeffs(x, prof, "L", n)
            assert sc(n, x) == pytest.approx(two, rel=1e-11, abs=1e-13)


def test_s0_negative():
    rng = random.Random(35)
    for _ in range(20):
        prof = random_profile(rng)
        sc = s_coeffs(prof, 0)
        for _ in range(10):
            assert sc(0, rng.uniform(-5, 5)) < 0


def test_two_sided_reduces_to_symmetric():
    rng = random.Random(36)
    for _ in range(10):
        prof = random_profile(rng)
        a, b = s_coeffs(prof, 2), s_coeffs_two_sided(prof, 2)
        for _ in range(4):
            x = rng.uniform(-3, 3)
            for n in range(3):
                assert b(n, x) == pytest.approx(a(n, x), rel=1e-13, abs=1e-14)


def test_two_sided_leading_terms():
    prof = two_sided_profile()
    V01 = period_constants(prof.left_tail).V0
    V02 = period_constants(prof.right_tail).V0
    sc = s_coeffs_two_sided(prof, 1)
    for x in (-0.5, 0.3, 0.7, 1.4):
        want = -0.5 * math.exp(prof(x)) * (math.exp(-V01) + math.exp(-V02))
        assert sc(0, x) == pytest.approx(want, rel=1e-15)
        assert sc.t1(x) == pytest.approx(sc(1, x) / sc(0, x), rel=1e-15)
    x, y = 0.7, 0.1
    g = green_coeffs(prof, x, y, N=-1).g[-1]
    assert g == pytest.approx(math.exp(-(prof(x) + prof(y)) / 2) / (math.exp(-V01) + math.exp(-V02)), rel=1e-14)


def test_two_sided_against_oracle():
    prof = two_sided_profile()
    x, y = 0.7, 0.1
    res = green_coeffs(prof, x, y, N=1)
    fit = extract_coeffs(lambda k: exact_green(prof, x, y, k), range(-1, 3))
    for n in (-1, 0, 1):
        assert res.g[n] == pytest.approx(fit.real(n), rel=1e-6)
    with pytest.raises(UnsupportedOrderError):
        green_coeffs(prof, x, y, N=2)


def test_two_sided_without_perturbation_t1():
    # with V equal to each tail on its own side, t1 keeps only the
    # periodic-bracket terms; the Delta integrals vanish
    left = PeriodicPotential(1.0, ((0.5, 0.0), (0.5, 1.0)), 0.0)
    right = PeriodicPotential(1.0, ((0.5, 0.0), (0.5, 2.0)), 0.0)
    prof = PotentialProfile(left, right, ((0.0, 0.0),), 0.0, 0.5)
    sc = s_coeffs_two_sided(prof, 1)
    c1, c2 = period_constants(left), period_constants(right)
    x = 0.25
    B1 = periodic_bracket("+-", x, left) - periodic_bracket("-+", x, left)
    B2 = periodic_bracket("+-", x, right) - periodic_bracket("-+", x, right)
    want = -(math.exp(-c1.V0) * B1 / (4 * c1.L0) - math.exp(-c2.V0) * B2 / (4 * c2.L0)) / (
        0.5 * (math.exp(-c1.V0) + math.exp(-c2.V0)))
    assert sc.t1(x) == pytest.approx(want, rel=1e-13)


def test_free_green_coefficients():
    prof = PotentialProfile.free()
    for x, y in ((0.5, 0.1), (2.0, -1.0), (0.3, 0.3)):
        g = green_coeffs(prof, x, y).g
        d = x - y
        assert g[-1] == pytest.approx(0.5, rel=1e-15)
        assert g[0] == pytest.approx(d / 2, abs=1e-15)
        assert g[1] == pytest.approx(d * d / 4, abs=1e-15)
        assert g[2] == pytest.approx(d ** 3 / 12, abs=1e-14)


def test_example1_leading_green():
    p = Example1Params()
    gm1, g0 = ex1_green_leading(p, 0.4, 0.1)
    assert gm1 == pytest.approx(2.0425, abs=5e-5)
    res = green_coeffs(p.profile(), 0.4, 0.1)
    assert res.g[-1] == pytest.approx(gm1, rel=1e-14)
    assert res.g[0] == pytest.approx(g0, rel=1e-12)


def test_symmetry_and_consistency():
    rng = random.Random(37)
    for _ in range(100):
        prof = random_profile(rng)
        a, b = sorted(rng.uniform(prof.x_min - 1, prof.x_max + 1) for _ in range(2))
        res = green_coeffs(prof, b, a, N=0)
        sc = s_coeffs(prof, 0)
        via_s0 = 1 / (2 * math.sqrt(sc(0, a) * sc(0, b)))
        assert res.g[-1] == pytest.approx(via_s0, rel=1e-13)
        assert res.g[-1] > 0


def test_swap_symmetry():
    rng = random.Random(38)
    for _ in range(3):
        prof = random_profile(rng)
        x, y = sorted((rng.uniform(-2, 2), rng.uniform(-2, 2)), reverse=True)
        r = green_coeffs(prof, x, y)
        # exchanging the endpoint data must leave every order unchanged
        g2 = assemble_green(r.q, r.t_y, r.t_x, r.g[-1], 2)
        for n in range(-1, 3):
            assert g2[n] == pytest.approx(r.g[n], rel=1e-13, abs=1e-15)


def test_q_vanishes_on_diagonal():
    prof = Example1Params().profile()
    res = green_coeffs(prof, 0.3, 0.3)
    assert all(v == 0.0 for v in res.q.values())


def test_domain_errors():
    prof = Example1Params().profile()
    with pytest.raises(DomainError):
        green_coeffs(prof, 0.1, 0.4)
    with pytest.raises(UnsupportedOrderError):
        green_coeffs(prof, 0.4, 0.1, N=3)
    with pytest.raises(UnsupportedOrderError):
        s_coeffs(prof, 4)
    with pytest.raises(DomainError):
        s_coeffs(two_sided_profile())
