"""From place counts to certified L-polynomials, plus p-rank."""

from __future__ import annotations

from .pointcount import CountTable
from .zpoly import LPoly, NonIntegralCoefficient, from_power_sums, mod2_degree


class CountInconsistency(ArithmeticError):
    pass


def power_sums_from_table(table: CountTable, upto: int) -> list[int]:
    totals = table.totals()
    missing = [k for k in range(1, upto + 1) if k not in totals]
    if missing:
        raise CountInconsistency(f"{table.curve}: missing rows {missing}")
    return [table.q**k + 1 - totals[k] for k in range(1, upto + 1)]


def rows_needed(g: int, divisor: LPoly | None = None) -> int:
    return g - (divisor.g if divisor is not None else 0)


def lpoly_from_counts(table: CountTable, g: int, divisor: LPoly | None = None) -> LPoly:
    """L-polynomial of genus ``g`` from the rows of ``table``.

    ``divisor`` is an L-polynomial already known to divide the answer (that of
    a subfield); only the cofactor of genus g - divisor.g is reconstructed, so
    fewer rows are needed.  Rows beyond the minimum are checked against the
    result and any disagreement raises CountInconsistency.
    """
    q = table.q
    if g == 0:
        result = LPoly((1,), q)
    else:
        g_rest = rows_needed(g, divisor)
        if g_rest < 0:
            raise CountInconsistency(f"divisor genus {divisor.g} exceeds g={g}")
        s = power_sums_from_table(table, max(g_rest, 0))
        if divisor is not None:
            s = [a - b for a, b in zip(s, divisor.power_sums(len(s)))]
        try:
            rest = from_power_sums(s, g_rest, q) if g_rest else LPoly((1,), q)
        except NonIntegralCoefficient as exc:
            raise CountInconsistency(f"{table.curve}: {exc}") from exc
        result = rest * divisor if divisor is not None else rest
    if not verify_excess(result, table):
        raise CountInconsistency(f"{table.curve}: counts disagree with the reconstructed L-polynomial (g={g})")
    return result


def verify_excess(L: LPoly, table: CountTable) -> bool:
    """True iff every row's total equals q^k + 1 - S_k(L)."""
    if not table.rows:
        return True
    predicted = L.point_counts(max(r.k for r in table.rows))
    return all(predicted[r.k - 1] == r.total for r in table.rows)


def prank(L: LPoly) -> int:
    d = mod2_degree(L.coeffs)
    return 0 if d == float("-inf") else int(d)


def is_ordinary(L: LPoly) -> bool:
    return prank(L) == L.g
