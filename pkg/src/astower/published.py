"""Previously published L-polynomials and group-order formula, kept verbatim.

Each value is a list of (factor, exponent) with factors as coefficient tuples
(lowest degree first).  Nothing here is used to compute anything; these are
the reference points that reports compare against, typos included.
"""

from __future__ import annotations

from .zpoly import pow_poly, prod_poly

A = (1, 3, 4)            # 1+3T+4T^2
B = (1, -1, 4)           # 1-T+4T^2
C = (1, 1, 4)            # 1+T+4T^2
QUARTIC = (1, 2, 1, 8, 16)
QUARTIC_MISPRINT = (4, 2, 1, 8, 16)
SEXTIC_A = (1, 1, 1, 3, 4, 16, 64)
SEXTIC_B = (1, 1, -1, 3, -4, 16, 64)

PUBLISHED_FACTORED: dict[str, list[tuple[tuple[int, ...], int]]] = {
    "T2": [(A, 1)],
    "T3": [(A, 3)],
    "T4": [(B, 2), (A, 7)],
    "T5": [(B, 4), (A, 11), (C, 2), (QUARTIC, 2)],
    "T6": [(A, 17), (B, 6), (C, 2), (QUARTIC_MISPRINT, 6), (SEXTIC_B, 2)],
    "Q4u0": [(A, 3), (B, 1)],
    "Q4u1": [(A, 3), (B, 1)],
    "Q5u0": [(B, 1), (C, 1), (A, 5), (QUARTIC, 1)],
    "Q5u1": [(B, 1), (C, 1), (A, 5), (QUARTIC, 1)],
    "Q6u0s1": [(C, 2), (A, 4), (QUARTIC_MISPRINT, 1), (SEXTIC_A, 1)],
    # printed under the label of the genus-9 field F_4(x_2,x_3,x_4,u_0), but of
    # degree 46: it can only be the genus-23 quotient one level up
    "Q6u0": [(C, 3), (A, 10), (QUARTIC_MISPRINT, 2), (B, 3), (SEXTIC_B, 1)],
}


def published_poly(curve_id: str, repair_quartic: bool = False) -> tuple[int, ...] | None:
    """Expanded published value; ``repair_quartic`` puts constant 1 back
    into the misprinted quartic."""
    fac = PUBLISHED_FACTORED.get(curve_id)
    if fac is None:
        return None
    if repair_quartic:
        fac = [(QUARTIC if f == QUARTIC_MISPRINT else f, e) for f, e in fac]
    return prod_poly(pow_poly(f, e) for f, e in fac)


def pic_formula_prefix(n: int) -> dict[int, int]:
    """Prime exponents of the closed-form part 2^{58n-243} 3^{2n-8} 5^{2n-10}."""
    return {2: 58 * n - 243, 3: 2 * n - 8, 5: 2 * n - 10}


def pic_formula_y_exponents(n: int) -> dict[int, int]:
    """Exponents of the trailing L_{Y_{j,1}}(1) factors, j = 5..n-2."""
    return {j: 2 * (n - j - 1) for j in range(5, n - 1)}
