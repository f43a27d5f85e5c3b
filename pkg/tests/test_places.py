import pytest

from astower.curves import curve_from_id
from astower.gf2m import make_field
from astower.places import (
    INERT,
    RAMIFIED,
    SPLIT,
    as_reduce,
    bad_points,
    ram_profile,
    resolve_bad,
    resolve_fibers,
)
from astower.pointcount import _bad_count, bad_field_degree
from astower.series import InsufficientPrecision, LaurentSeries

F4 = make_field(1)


def test_as_reduce_classes():
    # t^-2 is killed by y -> y + t^-1, leaving the pole t^-1: ramified
    r = as_reduce(LaurentSeries.monomial(F4, 1, -2))
    assert r.cls == RAMIFIED and r.reduced.val == -1
    assert as_reduce(LaurentSeries.const(F4, 1)).cls == SPLIT  # tr_{F4}(1) = 0
    assert as_reduce(LaurentSeries.const(F4, 2)).cls == INERT
    assert as_reduce(LaurentSeries.monomial(F4, 3, 2)).cls == SPLIT


def test_as_reduce_needs_precision():
    with pytest.raises(InsufficientPrecision):
        as_reduce(LaurentSeries.zero(F4, prec=0))


@pytest.mark.parametrize("cid,expected", [("T1", ["inf"]), ("T3", ["0", "1", "inf"]),
                                          ("Q3u0", ["0", "1", "g1", "inf"]), ("Q3u1", ["0", "1", "g", "inf"]),
                                          ("Q4u0", ["0", "1", "g", "g1", "inf"])])
def test_bad_points(cid, expected):
    assert bad_points(curve_from_id(cid)) == expected


@pytest.mark.parametrize("cid,count", [("T1", 1), ("T2", 4), ("T3", 6), ("T4", 8)])
def test_resolve_bad_over_f4(cid, count):
    assert resolve_bad(curve_from_id(cid), F4) == count


def test_ramification_profiles():
    assert ram_profile(curve_from_id("T2"), F4) == [(1, 2), (2, 2)]
    assert ram_profile(curve_from_id("T3"), F4) == [(1, 4), (4, 2)]


@pytest.mark.parametrize("cid", ["T2", "T3", "T4", "Q4u1", "Q5u0s1"])
@pytest.mark.parametrize("k", [2, 4])
def test_degree_mass(cid, k):
    c = curve_from_id(cid)
    for fr in resolve_fibers(c, make_field(k)):
        assert fr.degree_mass() == 2 ** len(c.layers)


@pytest.mark.parametrize("cid", ["T3", "Q4u0"])
def test_precision_stability(cid):
    c = curve_from_id(cid)
    assert resolve_bad(c, F4, precision=12) == resolve_bad(c, F4, precision=64)


def test_bad_field_degree():
    assert [bad_field_degree(k) for k in (1, 2, 3, 4, 6, 12)] == [1, 2, 1, 4, 2, 4]


@pytest.mark.parametrize("cid", ["T3", "Q4u0"])
@pytest.mark.parametrize("k", [3, 5, 6])
def test_bad_count_2adic_reduction(cid, k):
    c = curve_from_id(cid)
    assert _bad_count(c, k) == resolve_bad(c, make_field(k))


def test_infinity_is_total_ramification_on_t1():
    (fr,) = resolve_fibers(curve_from_id("T1"), F4)
    assert fr.point == "inf" and fr.degree_mass() == 1
