import math
import random

import pytest

from astower.gf2m import make_field
from astower.series import InsufficientPrecision, LaurentSeries

F = make_field(2)


def naive_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] ^= F.mul(x, y)
    return out


def rand_poly(rng, n, unit=False):
    c = [rng.randrange(F.size) for _ in range(n)]
    if unit and c[0] == 0:
        c[0] = 1
    return c


def series(c, val=0, prec=math.inf):
    return LaurentSeries(F, val, c, prec)


def test_normalisation():
    s = series([0, 0, 3, 0], val=-1)
    assert s.val == 1 and s.coeffs.tolist() == [3]
    z = series([0, 0], prec=5)
    assert z.is_zero() and z.val == 5


@pytest.mark.parametrize("seed", range(10))
def test_mul_matches_naive(seed):
    rng = random.Random(seed)
    a, b = rand_poly(rng, 7, unit=True), rand_poly(rng, 5, unit=True)
    prod = series(a, -2) * series(b, 3)
    assert prod.val == 1
    assert prod.padded(11).tolist() == naive_mul(a, b)


def test_precision_propagates():
    a = series([1, 2, 3], prec=3)
    b = series([1, 1], val=-1)
    assert (a * b).prec == 2
    assert (a + b).prec == 3
    assert a.square().prec == 6


@pytest.mark.parametrize("seed", range(10))
def test_inverse(seed):
    rng = random.Random(seed)
    a = series(rand_poly(rng, 6, unit=True), -3)
    inv = a.inv(20)
    one = (a * inv).truncate_rel(20)
    assert one.val == 0 and one.coeff(0) == 1
    assert all(one.coeff(i) == 0 for i in range(1, 17))


def test_inverse_of_zero_raises():
    with pytest.raises(InsufficientPrecision):
        series([], prec=4).inv(10)


def test_square_is_frobenius():
    rng = random.Random(4)
    a = series(rand_poly(rng, 6), 1)
    assert a.square() == a * a


@pytest.mark.parametrize("seed", range(5))
def test_compose_against_horner(seed):
    rng = random.Random(seed)
    p = rand_poly(rng, 5)
    s = series(rand_poly(rng, 4, unit=True), 1)
    got = series(p).compose(s, 30)
    ref = LaurentSeries.zero(F)
    for c in reversed(p):
        ref = ref * s + LaurentSeries.const(F, c)
    for i in range(25):
        assert got.coeff(i) == ref.coeff(i)


def test_compose_negative_valuation():
    s = series([1, 1], 1)  # t + t^2
    inv_t = series([1], -1)
    got = inv_t.compose(s, 20)
    one = got * s
    assert one.val == 0 and one.coeff(0) == 1
    assert all(one.coeff(i) == 0 for i in range(1, 15))
    with pytest.raises(ValueError):
        inv_t.compose(series([1]), 10)
