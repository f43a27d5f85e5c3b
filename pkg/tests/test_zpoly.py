import pytest
import sympy
from hypothesis import given, settings, strategies as st

from astower.zpoly import (
    LPoly,
    NonExactDivision,
    NonIntegralCoefficient,
    add_poly,
    complete_functional_equation,
    degree,
    divmod_poly,
    exact_div,
    format_poly,
    from_power_sums,
    isqrt_poly,
    mod2_degree,
    mul_poly,
    norm,
    pow_poly,
    power_sums,
)

T = sympy.Symbol("T")
polys = st.lists(st.integers(-50, 50), max_size=8).map(norm)
nonzero = polys.filter(bool)


def to_sym(p):
    return sum(c * T**i for i, c in enumerate(p))


@settings(max_examples=200, deadline=None)
@given(polys, polys)
def test_mul_matches_sympy(a, b):
    assert sympy.expand(to_sym(mul_poly(a, b)) - to_sym(a) * to_sym(b)) == 0


@settings(max_examples=200, deadline=None)
@given(polys, st.lists(st.integers(-50, 50), max_size=5), st.sampled_from([1, -1]))
def test_divmod_monic_divisor(n, body, lead):
    d = tuple(body) + (lead,)
    q, r = divmod_poly(n, d)
    assert degree(r) < degree(d)
    assert add_poly(mul_poly(q, d), r) == norm(n)


@settings(max_examples=100, deadline=None)
@given(nonzero, nonzero)
def test_exact_div_roundtrip(a, b):
    assert exact_div(mul_poly(a, b), b) == a


def test_non_exact_division():
    with pytest.raises(NonExactDivision):
        exact_div((1, 0, 1), (1, 1))
    with pytest.raises(NonExactDivision):
        divmod_poly((1, 1), (1, 2))
    with pytest.raises(ZeroDivisionError):
        divmod_poly((1,), ())


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6).map(lambda c: (1,) + tuple(c)))
def test_isqrt_of_square(p):
    p = norm(p)
    assert isqrt_poly(mul_poly(p, p)) == p


def test_isqrt_rejects_non_square():
    for p in [(1, 3, 4), (2, 0, 2), (1, 2, 2)]:
        with pytest.raises(NonExactDivision):
            isqrt_poly(p)


def test_power_sums_t2():
    # S_1 = -3, S_2 = 9 - 8 = 1
    assert power_sums((1, 3, 4), 3) == [-3, 1, 9]
    L = LPoly((1, 3, 4))
    assert L.point_counts(3) == [8, 16, 56]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.lists(st.integers(-6, 6), min_size=5, max_size=5))
def test_power_sum_roundtrip(g, head):
    L = LPoly(complete_functional_equation([1] + head[:g], g))
    assert from_power_sums(L.power_sums(g), g) == L
    assert L.satisfies_functional_equation()
    assert LPoly.from_json(L.to_json()) == L


def test_from_power_sums_non_integral():
    with pytest.raises(NonIntegralCoefficient):
        from_power_sums([0, 1], 2)


def test_lpoly_invariants_and_arith():
    A, B = LPoly((1, 3, 4)), LPoly((1, -1, 4))
    assert (A**3 * B).g == 4
    assert (A**3 * B) / B == A**3
    assert A(1) == 8
    with pytest.raises(ValueError):
        LPoly((4, 2, 1, 8, 16))
    with pytest.raises(ValueError):
        LPoly((1, 2))
    with pytest.raises(ValueError):
        LPoly.from_json({"g": 2, "coeffs": ["1", "3", "4"]})


def test_json_big_integers_as_strings():
    L = LPoly((1, 3, 4)) ** 40
    obj = L.to_json()
    assert all(isinstance(c, str) for c in obj["coeffs"])
    assert obj["coeffs"][-1] == str(4**40)
    assert LPoly.from_json(obj) == L


def test_mod2_degree():
    assert mod2_degree((1, 3, 4)) == 1
    assert mod2_degree(pow_poly((1, 3, 4), 3)) == 3
    assert mod2_degree((2, 4)) == float("-inf")


def test_format_poly():
    assert format_poly((1, -1, 4)) == "1-T+4T^2"
    assert format_poly((1, 2, 1, 8, 16)) == "1+2T+T^2+8T^3+16T^4"
    assert format_poly(()) == "0"
    assert format_poly((-2, 0, -1)) == "-2-T^2"
