"""Exact integer polynomials, with L-polynomials as the main client.

Polynomials are tuples of Python ints, lowest degree first, without trailing
zeros (the zero polynomial is ``()``).  Nothing here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Poly = tuple[int, ...]


class NonExactDivision(ArithmeticError):
    pass


class NonIntegralCoefficient(ArithmeticError):
    pass


def norm(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(norm(p)) - 1


def add_poly(a, b) -> Poly:
    n = max(len(a), len(b))
    return norm((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def sub_poly(a, b) -> Poly:
    return add_poly(a, tuple(-c for c in b))


def mul_poly(a, b) -> Poly:
    a, b = norm(a), norm(b)
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return norm(out)


def pow_poly(a, e: int) -> Poly:
    r: Poly = (1,)
    for _ in range(e):
        r = mul_poly(r, a)
    return r


def prod_poly(polys) -> Poly:
    r: Poly = (1,)
    for p in polys:
        r = mul_poly(r, p)
    return r


def divmod_poly(n, d) -> tuple[Poly, Poly]:
    """Quotient and remainder over Z; raises NonExactDivision if the leading
    coefficient of ``d`` does not divide a partial remainder."""
    n, d = list(norm(n)), norm(d)
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    dd = len(d) - 1
    if len(n) - 1 < dd:
        return (), norm(n)
    q = [0] * (len(n) - dd)
    for i in range(len(n) - 1, dd - 1, -1):
        c = n[i]
        if c == 0:
            continue
        if c % d[-1]:
            raise NonExactDivision(f"leading coefficient {d[-1]} does not divide {c}")
        f = c // d[-1]
        q[i - dd] = f
        for j, y in enumerate(d):
            n[i - dd + j] -= f * y
    return norm(q), norm(n)


def exact_div(n, d) -> Poly:
    q, r = divmod_poly(n, d)
    if r:
        raise NonExactDivision(f"nonzero remainder {r}")
    return q


def divides(d, n) -> bool:
    try:
        exact_div(n, d)
    except NonExactDivision:
        return False
    return True


def eval_at(p, t: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * t + c
    return acc


def mod2_degree(p) -> int | float:
    """Degree of p reduced mod 2; -inf for a polynomial that vanishes mod 2."""
    d = degree(tuple(c & 1 for c in p))
    return d if d >= 0 else float("-inf")


def isqrt_poly(p) -> Poly:
    """Exact square root of an integer polynomial with positive constant term."""
    p = norm(p)
    if not p or p[0] <= 0 or degree(p) % 2:
        raise NonExactDivision("not a square")
    r0 = math.isqrt(p[0])
    if r0 * r0 != p[0]:
        raise NonExactDivision("constant term is not a square")
    n = degree(p) // 2
    r = [r0]
    for i in range(1, n + 1):
        s = p[i] - sum(r[j] * r[i - j] for j in range(1, i))
        if s % (2 * r0):
            raise NonExactDivision("not a square")
        r.append(s // (2 * r0))
    root = norm(r)
    if mul_poly(root, root) != p:
        raise NonExactDivision("not a square")
    return root


# -- power sums and L-polynomials -------------------------------------------


def power_sums(p, count: int) -> list[int]:
    """S_1..S_count, the power sums of the inverse roots of p (p[0] = 1)."""
    if not p or p[0] != 1:
        raise ValueError("power sums need constant term 1")
    s: list[int] = []
    for k in range(1, count + 1):
        ak = p[k] if k < len(p) else 0
        v = -k * ak - sum(s[j - 1] * (p[k - j] if k - j < len(p) else 0) for j in range(1, k))
        s.append(v)
    return s


def complete_functional_equation(head, g: int, q: int = 4) -> Poly:
    """Fill a_{g+1}..a_{2g} from a_0..a_g via a_{2g-i} = q^{g-i} a_i."""
    head = list(head)[: g + 1]
    head += [0] * (g + 1 - len(head))
    tail = [q ** (g - i) * head[i] for i in range(g - 1, -1, -1)]
    return tuple(head + tail)


def from_power_sums(s, g: int, q: int = 4) -> "LPoly":
    if len(s) < g:
        raise ValueError(f"need {g} power sums, got {len(s)}")
    a = [1]
    for i in range(1, g + 1):
        acc = -sum(s[j - 1] * a[i - j] for j in range(1, i + 1))
        if acc % i:
            raise NonIntegralCoefficient(f"a_{i} = {acc}/{i} is not an integer")
        a.append(acc // i)
    return LPoly(complete_functional_equation(a, g, q), q)


@dataclass(frozen=True)
class LPoly:
    """Numerator of a zeta function over F_q: degree 2g, a_0 = 1."""

    coeffs: Poly
    q: int = 4

    def __post_init__(self):
        object.__setattr__(self, "coeffs", norm(self.coeffs))
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("L-polynomial must have constant term 1")
        if len(self.coeffs) % 2 == 0:
            raise ValueError("L-polynomial must have even degree")

    @property
    def g(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def satisfies_functional_equation(self) -> bool:
        return complete_functional_equation(self.coeffs, self.g, self.q) == self.coeffs

    def power_sums(self, count: int) -> list[int]:
        return power_sums(self.coeffs, count)

    def point_counts(self, count: int) -> list[int]:
        """N_1..N_count of a curve with this L-polynomial."""
        return [self.q**k + 1 - s for k, s in enumerate(self.power_sums(count), start=1)]

    def __call__(self, t: int) -> int:
        return eval_at(self.coeffs, t)

    def __mul__(self, other: "LPoly") -> "LPoly":
        return LPoly(mul_poly(self.coeffs, other.coeffs), self.q)

    def __pow__(self, e: int) -> "LPoly":
        return LPoly(pow_poly(self.coeffs, e), self.q)

    def __truediv__(self, other: "LPoly") -> "LPoly":
        return LPoly(exact_div(self.coeffs, other.coeffs), self.q)

    def to_json(self) -> dict:
        return {"g": self.g, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict, q: int = 4) -> "LPoly":
        lp = cls(tuple(int(c) for c in obj["coeffs"]), q)
        if lp.g != obj["g"]:
            raise ValueError(f"genus field {obj['g']} disagrees with degree {lp.degree}")
        return lp


def format_poly(p, var: str = "T") -> str:
    """Compact text form, e.g. '1-T+4T^2'."""
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            coef = "" if mag == 1 else str(mag)
            body = coef + (var if i == 1 else f"{var}^{i}")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += sign + body
    return out
