"""Shared random generators and comparison helpers for the test suite."""
import math

from lowkgreen.examples import Example1Params
from lowkgreen.potential import PeriodicPotential, PotentialProfile


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def random_tail(rng, n_seg=None, vrange=(-1.5, 1.5)):
    n = n_seg or rng.randint(1, 4)
    widths = [rng.uniform(0.1, 1.0) for _ in range(n)]
    L = sum(widths)
    segs = tuple((w, rng.uniform(*vrange)) for w in widths)
    return PeriodicPotential(L, segs, rng.uniform(-1, 1))


def random_profile(rng, symmetric=True):
    left = random_tail(rng)
    right = left if symmetric else random_tail(rng)
    x0 = rng.uniform(-1, 1)
    width = rng.uniform(0.3, 2.0)
    n = rng.randint(1, 3)
    bps = sorted(rng.uniform(x0, x0 + width) for _ in range(n))
    bps[0] = x0
    core = tuple((b, rng.uniform(-1.5, 1.5)) for b in bps)
    return PotentialProfile(left, right, core, x0, x0 + width)


def random_schrodinger(rng):
    """Random generic-case lattice: a barrier core above the tail maximum
    rules out bound states."""
    L = rng.uniform(0.5, 2.0)
    a = rng.uniform(0.2, 0.8) * L
    tail = PeriodicPotential(L, ((a, rng.uniform(-1, 1)), (L - a, rng.uniform(-1, 2))),
                             rng.uniform(-1, 1))
    top = max(v for _, v in tail.segments)
    x0 = rng.uniform(-1, 1)
    n = rng.randint(1, 3)
    bps = sorted(rng.uniform(x0, x0 + 2) for _ in range(n))
    bps[0] = x0
    core = tuple((b, top + rng.uniform(0.1, 2.0)) for b in bps)
    return PotentialProfile(tail, tail, core, x0, x0 + 2.5)


def random_ex1(rng):
    return Example1Params(C=rng.uniform(0.5, 2.0), L=1.0, a=rng.uniform(0.3, 0.7),
                          h=rng.uniform(0.1, 2.0))


def upper_k(rng, re_max=5.0, im_max=0.5):
    """Random k in the closed upper half plane, kept near the real axis so
    that transfer-matrix entries stay O(1)."""
    return complex(rng.uniform(-re_max, re_max), rng.uniform(0.0, im_max))
