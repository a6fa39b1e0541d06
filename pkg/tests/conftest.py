from fractions import Fraction as F
from functools import lru_cache
from math import gcd

import pytest
from hypothesis import strategies as st

from plrot.flows import example42, gen_random
from plrot.plmap import from_intervals, rotation


def make_t0():
    # [0,1/2] -> [0,1/4], [1/2,3/4] -> [1/4,1/2], [3/4,1] -> [1/2,1]
    return from_intervals(
        2,
        [
            (0, F(1, 2), 0, F(1, 4)),
            (F(1, 2), F(3, 4), F(1, 4), F(1, 2)),
            (F(3, 4), 1, F(1, 2), 1),
        ],
    )


@pytest.fixture
def t0():
    return make_t0()


EXAMPLE42_PARAMS = [(1, 1), (2, 0), (2, 2), (3, 6)]


@lru_cache(maxsize=None)
def rotation_maps(q_max=50):
    return tuple(
        (f"rotation_{p}_{q}", rotation(F(p, q)))
        for q in range(1, q_max + 1)
        for p in range(q)
        if gcd(p, q) == 1
    )


@lru_cache(maxsize=None)
def random_t2(count=240):
    return tuple((f"random_n2_L{1 + j % 9}_s{j}", gen_random(2, 1 + j % 9, j)) for j in range(count))


@lru_cache(maxsize=None)
def random_t3(count=60):
    return tuple((f"random_n3_L{1 + 2 * (j % 5)}_s{j}", gen_random(3, 1 + 2 * (j % 5), j)) for j in range(count))


@lru_cache(maxsize=None)
def corpus():
    maps = [("t0", make_t0())]
    maps += [(f"example42_k{k}_s{s}", example42(k, s)) for k, s in EXAMPLE42_PARAMS]
    maps += list(rotation_maps())
    maps += list(random_t2())
    maps += list(random_t3())
    return tuple(maps)


@st.composite
def pl_maps(draw, bases=(2, 3), max_leaves=7):
    n = draw(st.sampled_from(bases))
    leaves = draw(st.sampled_from([L for L in range(1, max_leaves + 1) if (L - 1) % (n - 1) == 0]))
    seed = draw(st.integers(0, 10**6))
    return gen_random(n, leaves, seed)


@st.composite
def rationals(draw, lo=-3, hi=3, max_den=64):
    den = draw(st.integers(1, max_den))
    num = draw(st.integers(lo * den, hi * den))
    return F(num, den)
