"""The eight acceptance criteria, one test each, sharing one cold cache.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` and in
the summary via ``-rA``).  Order matters: the first check runs against an
empty cache so its timing is a cold-start timing.
"""

import pytest

from astower.cache import CacheFile
from astower.verification import (
    Context,
    check_deuring_shafarevich,
    check_level6,
    check_levels_up_to_5,
    check_ordinarity,
    check_pic_orders,
    check_properties,
    check_quotients,
    check_structure,
)

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def ctx(tmp_path_factory):
    cache = CacheFile(tmp_path_factory.mktemp("acceptance") / "cache.json")
    return Context(cache)


def _run(check, ctx, number):
    res = check(ctx)
    print(f"criterion {number} {res.line()}")
    assert res.passed, res.detail
    return res


def test_criterion_1_exact_levels_to_5(ctx):
    res = _run(check_levels_up_to_5, ctx, 1)
    assert res.data["seconds"] < 120


def test_criterion_2_quotients_direct(ctx):
    _run(check_quotients, ctx, 2)


def test_criterion_3_level_6(ctx):
    res = _run(check_level6, ctx, 3)
    assert len(res.data["L"]["coeffs"]) == 99


def test_criterion_4_ordinarity(ctx):
    _run(check_ordinarity, ctx, 4)


def test_criterion_5_deuring_shafarevich(ctx):
    _run(check_deuring_shafarevich, ctx, 5)


def test_criterion_6_structure(ctx):
    res = _run(check_structure, ctx, 6)
    assert res.data["new"] == {5: 6, 6: 16}


def test_criterion_7_pic_orders(ctx):
    _run(check_pic_orders, ctx, 7)


def test_criterion_8_properties(ctx):
    _run(check_properties, ctx, 8)
