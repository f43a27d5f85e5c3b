import pytest

from astower.curves import curve_from_id, curve_genus
from astower.pointcount import CountRow, CountTable, count_range
from astower.published import published_poly
from astower.zeta import (
    CountInconsistency,
    is_ordinary,
    lpoly_from_counts,
    power_sums_from_table,
    prank,
    rows_needed,
    verify_excess,
)
from astower.zpoly import LPoly


def table_from(L: LPoly, k_max, curve="X"):
    t = CountTable(curve)
    for k, n in enumerate(L.point_counts(k_max), start=1):
        t.add(CountRow(k, n, 0, n))
    return t


def test_genus_one_example():
    t = table_from(LPoly((1, 3, 4)), 3)
    assert power_sums_from_table(t, 2) == [-3, 1]
    assert lpoly_from_counts(t, 1) == LPoly((1, 3, 4))


def test_corrupted_row_is_caught():
    t = CountTable("X")
    for r in [(1, 9), (2, 16), (3, 56)]:
        t.add(CountRow(r[0], r[1], 0, r[1]))
    assert not verify_excess(LPoly((1, 3, 4)), t)
    with pytest.raises(CountInconsistency):
        lpoly_from_counts(t, 1)


def test_wrong_genus_is_caught():
    t = table_from(LPoly((1, 3, 4)) ** 3, 6)
    with pytest.raises(CountInconsistency):
        lpoly_from_counts(t, 2)


def test_missing_rows():
    t = table_from(LPoly((1, 3, 4)), 1)
    with pytest.raises(CountInconsistency):
        lpoly_from_counts(t, 3)


@pytest.mark.parametrize("cid", ["T2", "T3", "T4"])
def test_reconstruct_from_counts(cid):
    g = curve_genus(cid)
    L = lpoly_from_counts(count_range(curve_from_id(cid), g + 2), g)
    assert L == LPoly(published_poly(cid))
    assert is_ordinary(L)


def test_known_divisor_agrees_with_plain():
    t4 = LPoly(published_poly("T4"))
    t3 = LPoly(published_poly("T3"))
    table = table_from(t4, 11)
    assert rows_needed(9, t3) == 6
    assert lpoly_from_counts(table, 9, divisor=t3) == lpoly_from_counts(table, 9) == t4
    # a divisor that does not divide leads to an inconsistency
    with pytest.raises(CountInconsistency):
        lpoly_from_counts(table, 9, divisor=LPoly((1, 1, 4)))


def test_prank():
    assert prank(LPoly((1, 3, 4))) == 1
    assert prank(LPoly((1, 2, 4))) == 0
    ss = LPoly((1, 0, 4)) * LPoly((1, 3, 4))
    assert prank(ss) == 1 and not is_ordinary(ss)
