import itertools
import math

import pytest

from astower.curves import curve_from_id, curve_genus, eval_scalar
from astower.gf2m import make_field
from astower.places import bad_points
from astower.pointcount import (
    CountRow,
    CountTable,
    affine_count,
    count_places,
    count_range,
    point_cost,
)
from astower.published import published_poly
from astower.zpoly import LPoly


def brute_affine(curve, k):
    """Enumerate whole tuples (x_1, ..., x_L) and test each layer equation."""
    f = make_field(k)
    excluded = {f.from_f4(s) for s in bad_points(curve) if s != "inf"}
    names = [curve.base_var] + [n for n, _ in curve.layers]
    count = 0
    for tup in itertools.product(range(f.size), repeat=len(names)):
        if tup[0] in excluded:
            continue
        env = dict(zip(names, tup))
        ok = True
        for name, rhs in curve.layers:
            v = eval_scalar(rhs, env, f)
            assert v is not None
            if f.square(env[name]) ^ env[name] != v:
                ok = False
                break
        count += ok
    return count


def test_t2_first_row():
    row = count_places(curve_from_id("T2"), 1)
    assert (row.affine, row.bad, row.total) == (4, 4, 8)


def test_projective_line():
    t = count_range(curve_from_id("T1"), 5)
    assert [r.total for r in t.rows] == [4**k + 1 for k in range(1, 6)]


@pytest.mark.parametrize("cid,k", [("T2", 1), ("T2", 2), ("T3", 1), ("T3", 2), ("Q3u0", 2), ("Q4u1", 1)])
def test_scan_matches_tuple_enumeration(cid, k):
    c = curve_from_id(cid)
    assert affine_count(c, k) == brute_affine(c, k)


@pytest.mark.parametrize("cid,k_max", [("T2", 8), ("T3", 8), ("T4", 9)])
def test_counts_match_published(cid, k_max):
    t = count_range(curve_from_id(cid), k_max)
    assert [r.total for r in t.rows] == LPoly(published_poly(cid)).point_counts(k_max)


def test_parallel_and_chunking_agree():
    c = curve_from_id("T3")
    serial = affine_count(c, 6)
    assert affine_count(c, 6, chunk=1000) == serial
    assert affine_count(c, 6, workers=2, chunk=1 << 10) == serial


def test_budget():
    c = curve_from_id("T3")
    assert count_range(c, 5, budget=0).rows == []
    t = count_range(c, 8, budget=point_cost(c, 4))
    assert t.k_max == 4


def test_equal_zeta_variants():
    a = count_range(curve_from_id("Q4u0"), 4)
    b = count_range(curve_from_id("Q4u1"), 4)
    assert a.totals() == b.totals()


@pytest.mark.parametrize("cid", ["T3", "Q4u0"])
def test_weil_bound(cid):
    g = curve_genus(cid)
    for r in count_range(curve_from_id(cid), 6).rows:
        assert abs(4**r.k + 1 - r.total) <= 2 * g * 2**r.k


def test_row_and_table_validation():
    with pytest.raises(ValueError):
        CountRow(1, 4, 4, 9)
    t = CountTable("T2")
    t.add(CountRow(1, 4, 4, 8))
    with pytest.raises(ValueError):
        t.add(CountRow(1, 4, 4, 8))
    t.add(CountRow(3, 50, 6, 56))
    assert t.k_max == 1
    assert CountTable.from_json(t.to_json()) == t


def test_point_cost_grows_with_layers():
    assert point_cost(curve_from_id("T4"), 3) == 4**3 * 8
    assert math.log2(point_cost(curve_from_id("T6"), 1)) == 2 + 5
