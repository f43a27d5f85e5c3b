"""Curve descriptors for the tower, its Klein-four quotients and their shifts,
plus the closed-form genus/dimension bookkeeping.

Every curve here is a chain of Artin-Schreier layers ``v^2 + v = rhs`` over a
rational base variable.  Right-hand sides are small expression trees that can
be evaluated over scalars, numpy arrays or Laurent series through an
"algebra" object (see ``ScalarAlgebra`` and ``astower.pointcount`` /
``astower.places``).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .gf2m import FieldSpec, make_field

F4_SYMBOLS = ("0", "1", "g", "g1")


# -- expression trees -------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    """Node of a rational expression: op in var/const/add/mul/inv/sq."""

    op: str
    args: tuple = ()
    name: str = ""

    def __add__(self, other):
        return Expr("add", (self, _lift(other)))

    __radd__ = __add__

    def __mul__(self, other):
        return Expr("mul", (self, _lift(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Expr("mul", (self, Expr("inv", (_lift(other),))))

    def __rtruediv__(self, other):
        return Expr("mul", (_lift(other), Expr("inv", (self,))))

    def sq(self):
        return Expr("sq", (self,))

    def variables(self) -> set[str]:
        if self.op == "var":
            return {self.name}
        return set().union(*(a.variables() for a in self.args)) if self.args else set()

    def to_json(self):
        if self.op in ("var", "const"):
            return [self.op, self.name]
        return [self.op] + [a.to_json() for a in self.args]

    @classmethod
    def from_json(cls, obj) -> "Expr":
        op = obj[0]
        if op == "var":
            return var(obj[1])
        if op == "const":
            return const(obj[1])
        if op not in ("add", "mul", "inv", "sq"):
            raise ValueError(f"unknown expression op {op!r}")
        return cls(op, tuple(cls.from_json(a) for a in obj[1:]))

    def __str__(self):
        if self.op == "var":
            return self.name
        if self.op == "const":
            return {"g": "γ", "g1": "(γ+1)"}.get(self.name, self.name)
        if self.op == "add":
            return f"({self.args[0]} + {self.args[1]})"
        if self.op == "mul":
            return f"{self.args[0]}*{self.args[1]}"
        if self.op == "inv":
            return f"1/{self.args[0]}"
        return f"{self.args[0]}^2"


def var(name: str) -> Expr:
    return Expr("var", name=name)


def const(sym: str) -> Expr:
    if sym not in F4_SYMBOLS:
        raise ValueError(f"F4 constant must be one of {F4_SYMBOLS}")
    return Expr("const", name=sym)


def _lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if x in (0, 1):
        return const(str(x))
    raise TypeError(f"cannot use {x!r} in an expression")


def evaluate(expr: Expr, env: dict, alg):
    """Evaluate ``expr`` with variable values from ``env`` in algebra ``alg``.

    ``alg`` supplies const(sym), add, mul, inv, square.
    """
    op = expr.op
    if op == "var":
        return env[expr.name]
    if op == "const":
        return alg.const(expr.name)
    if op == "add":
        return alg.add(evaluate(expr.args[0], env, alg), evaluate(expr.args[1], env, alg))
    if op == "mul":
        return alg.mul(evaluate(expr.args[0], env, alg), evaluate(expr.args[1], env, alg))
    if op == "inv":
        return alg.inv(evaluate(expr.args[0], env, alg))
    return alg.square(evaluate(expr.args[0], env, alg))


class Pole(ZeroDivisionError):
    pass


class ScalarAlgebra:
    """Field elements as Python ints; division by zero raises ``Pole``."""

    def __init__(self, field: FieldSpec):
        self.field = field

    def const(self, sym):
        return self.field.from_f4(sym)

    def add(self, a, b):
        return a ^ b

    def mul(self, a, b):
        return self.field.mul(a, b)

    def square(self, a):
        return self.field.mul(a, a)

    def inv(self, a):
        if a == 0:
            raise Pole
        return self.field.inv(a)


def eval_scalar(expr: Expr, env: dict, field: FieldSpec):
    """Scalar evaluation; returns None at a pole."""
    try:
        return evaluate(expr, env, ScalarAlgebra(field))
    except Pole:
        return None


# -- the standard right-hand sides -------------------------------------------


def tower_rhs(x: Expr) -> Expr:
    # x^3/(x^2+x) with the removable singularity at x=0 cancelled
    return x.sq() / (x + 1)


def quotient_rhs(x: Expr, variant: str) -> Expr:
    g2 = const("g").sq()
    if variant == "u0":
        den = 1 + g2 * x.sq()
    elif variant == "u1":
        den = 1 + g2 * x.sq() + x.sq()
    else:
        raise ValueError(f"variant must be 'u0' or 'u1', got {variant!r}")
    return tower_rhs(x) * (x.sq() / den)


def shift_term(x: Expr) -> Expr:
    """(1/w)^2 + 1/w rewritten through the layer below: 1/(x^2+x)."""
    return 1 / (x.sq() + x)


# -- curve descriptors --------------------------------------------------------


@dataclass(frozen=True)
class CurveSpec:
    id: str
    base_var: str
    layers: tuple[tuple[str, Expr], ...]

    def __post_init__(self):
        seen = {self.base_var}
        for name, rhs in self.layers:
            extra = rhs.variables() - seen
            if extra:
                raise ValueError(f"layer {name} references later/unknown variables {sorted(extra)}")
            if name in seen:
                raise ValueError(f"duplicate variable {name}")
            seen.add(name)

    @property
    def variables(self) -> list[str]:
        return [self.base_var] + [name for name, _ in self.layers]

    @property
    def degree(self) -> int:
        """Degree over the rational base field."""
        return 2 ** len(self.layers)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "base_var": self.base_var,
            "layers": [[name, rhs.to_json()] for name, rhs in self.layers],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CurveSpec":
        return cls(
            obj["id"],
            obj["base_var"],
            tuple((name, Expr.from_json(rhs)) for name, rhs in obj["layers"]),
        )


def tower_level(n: int) -> CurveSpec:
    """T_n = F_4(x_1, ..., x_n)."""
    if n < 1:
        raise ValueError("tower level must be >= 1")
    xs = [var(f"x{i}") for i in range(1, n + 1)]
    layers = tuple((f"x{j + 1}", tower_rhs(xs[j - 1])) for j in range(1, n))
    return CurveSpec(f"T{n}", "x1", layers)


def quotient_curve(n: int, variant: str = "u0") -> CurveSpec:
    """C_n/<tau> (u0) or C_n/<sigma tau> (u1): F_4(x_1..x_{n-2}, u)."""
    if n < 3:
        raise ValueError("quotient curves need n >= 3")
    top = n - 2
    xs = [var(f"x{i}") for i in range(1, top + 1)]
    layers = [(f"x{j + 1}", tower_rhs(xs[j - 1])) for j in range(1, top)]
    layers.append(("u", quotient_rhs(xs[-1], variant)))
    return CurveSpec(f"Q{n}{variant}", "x1", tuple(layers))


def shifted_quotient(n: int, shifts) -> CurveSpec:
    """F_4(x_{d+1}, ..., x_{n-2}, u_0 + sum_{j in shifts} 1/x_j) with d = max(shifts).

    The generator u_0 + 1/x_j satisfies an Artin-Schreier equation whose
    right-hand side gains 1/(x_{j+1}^2 + x_{j+1}).  Variables are re-based so
    the result is a tower over x1; its id is the canonical one of the
    isomorphism class, so F_4(x_3, x_4, u_0 + 1/x_2) and F_4(x_2, x_3, u_0 + 1/x_1)
    share an id.
    """
    raw = list(shifts)
    shifts = sorted(set(raw))
    if len(shifts) != len(raw):
        raise ValueError("duplicate shift indices")
    if not shifts:
        return quotient_curve(n, "u0")
    top = n - 2
    d = shifts[-1]
    for j in shifts:
        if j < 1 or j + 1 > top:
            raise ValueError(f"shift index {j} out of range for n={n}")
        if j + 1 <= d:
            raise ValueError(f"shift 1/x_{j} needs x_{j + 1}, which is dropped by shifting out x_{d}")
    # re-base: x_{d+1} -> x1
    nvars = top - d
    xs = [var(f"x{i}") for i in range(1, nvars + 1)]
    layers = [(f"x{j + 1}", tower_rhs(xs[j - 1])) for j in range(1, nvars)]
    rhs = quotient_rhs(xs[-1], "u0")
    for j in shifts:
        rhs = shift_term(xs[j + 1 - d - 1]) + rhs
    layers.append(("u", rhs))
    return CurveSpec(f"Q{nvars + 3}u0s1", "x1", tuple(layers))


def curve_from_id(curve_id: str) -> CurveSpec:
    """Inverse of the canonical ids: T<n>, Q<n>u0, Q<n>u1, Q<n>u0s1."""
    m = re.fullmatch(r"T(\d+)", curve_id)
    if m:
        return tower_level(int(m.group(1)))
    m = re.fullmatch(r"Q(\d+)(u[01])", curve_id)
    if m:
        return quotient_curve(int(m.group(1)), m.group(2))
    m = re.fullmatch(r"Q(\d+)u0s1", curve_id)
    if m:
        return shifted_quotient(int(m.group(1)), [1])
    raise ValueError(f"unknown curve id {curve_id!r}")


# -- closed forms ---------------------------------------------------------------


def genus_formula(n: int) -> int:
    if n < 1:
        raise ValueError("n >= 1")
    if n % 2 == 0:
        return (2 ** (n // 2) - 1) ** 2
    return (2 ** ((n + 1) // 2) - 1) * (2 ** ((n - 1) // 2) - 1)


def dim_y(n: int) -> int:
    if n < 3:
        raise ValueError("n >= 3")
    if n % 2 == 0:
        return 2 ** (n - 1)
    return 2 ** (n - 1) - 2 ** ((n - 3) // 2)


def deg_ly(n: int) -> int:
    if n < 3:
        raise ValueError("n >= 3")
    if n % 2 == 0:
        return 2**n
    return 2**n - 2 ** ((n - 1) // 2)


@dataclass(frozen=True)
class DimChain:
    dimX: int
    dimX1: int
    dimY: int


def dim_x(n: int) -> int:
    """dim of the Jacobian of F_n = F_4(x_1..x_n, u), i.e. genus of Q_{n+2}."""
    g = genus_formula
    twice = g(n + 2) + 2 * g(n) - g(n + 1)
    if twice % 2:
        raise ArithmeticError(f"dim X_{n} is not an integer")
    return twice // 2


def dim_chain(n: int) -> DimChain:
    if n < 2:
        raise ValueError("n >= 2")
    g = genus_formula
    dx = dim_x(n)
    dx1 = dx + 2 * g(n - 1) - dim_x(n - 1) - g(n)
    return DimChain(dx, dx1, dx1 - g(n - 1))


def curve_genus(curve_id: str) -> int:
    """Genus from the dimension ledger, never from counts."""
    m = re.fullmatch(r"T(\d+)", curve_id)
    if m:
        n = int(m.group(1))
        return genus_formula(n) if n > 1 else 0
    m = re.fullmatch(r"Q(\d+)u[01]", curve_id)
    if m:
        return dim_x(int(m.group(1)) - 2)
    m = re.fullmatch(r"Q(\d+)u0s1", curve_id)
    if m:
        return dim_chain(int(m.group(1)) - 2).dimX1
    raise ValueError(f"unknown curve id {curve_id!r}")


# -- checks ------------------------------------------------------------------------


def minpoly_x3(field: FieldSpec, x1: int, t: int, squared_constant: bool = False) -> int:
    """T^4 + (1/x1^2+1/x1) T^2 + (1/x1^2+1/x1+1) T + x1^2/(x1+1) at T=t.

    Eliminating x2 from the two layer equations gives this constant term.
    ``squared_constant`` swaps in (x1^2/(x1+1))^2, the form that circulates in
    print; it does not vanish on the curve and is kept only to show that.
    """
    f = field
    i1 = f.inv(x1)
    c2 = f.mul(i1, i1) ^ i1
    c1 = c2 ^ 1
    c0 = f.mul(f.square(x1), f.inv(x1 ^ 1))
    if squared_constant:
        c0 = f.square(c0)
    t2 = f.square(t)
    return f.square(t2) ^ f.mul(c2, t2) ^ f.mul(c1, t) ^ c0


def sample_t3_points(field: FieldSpec, count: int, rng: random.Random):
    """Random affine points (x1, x2, x3) on T_3 with x1 not in {0, 1}."""
    out = []
    while len(out) < count:
        x1 = rng.randrange(2, field.size)
        r2 = field.mul(field.square(x1), field.inv(x1 ^ 1))
        x2 = field.solve_as(r2)
        if x2 is None:
            continue
        x2 ^= rng.getrandbits(1)
        if x2 == 1:
            continue
        r3 = field.mul(field.square(x2), field.inv(x2 ^ 1))
        x3 = field.solve_as(r3)
        if x3 is None:
            continue
        out.append((x1, x2, x3 ^ rng.getrandbits(1)))
    return out


def verify_minpoly(samples: int, seed: int = 0, squared_constant: bool = False) -> bool:
    """Check the quartic relation between x1 and x3 on random points of T_3."""
    rng = random.Random(seed)
    for k in (2, 3):
        field = make_field(k)
        for x1, _, x3 in sample_t3_points(field, samples, rng):
            if minpoly_x3(field, x1, x3, squared_constant) != 0:
                return False
    return True


def ds_prank(n: int, d, p: int = 2):
    """p-rank of the Galois closure of T_n from the Deuring-Shafarevich sum.

    ``d`` is the degree over T_1, an int or a sympy symbol.  For numeric ``d``
    the divisibility p^{n-1} | d is required and the result is an int; the
    closed form d(p - p^{3-n} - p^{2-n}) + 1 is checked to agree exactly.
    """
    if n < 3:
        raise ValueError("n >= 3")
    if isinstance(d, int):
        if d % p ** (n - 1):
            raise ValueError(f"degree {d} is not divisible by {p}^{n - 1}")
        d = Fraction(d)
        rp = ds_sum(n, d, p) + 1
        closed = ds_closed_form(n, d, p)
        if rp != closed:
            raise ArithmeticError(f"Deuring-Shafarevich sum {rp} != closed form {closed}")
        if rp.denominator != 1:
            raise ArithmeticError("non-integral p-rank")
        return int(rp)
    import sympy

    rp = ds_sum(n, d, p) + 1
    if sympy.simplify(rp - ds_closed_form(n, d, p)) != 0:
        raise ArithmeticError("Deuring-Shafarevich identity fails symbolically")
    return sympy.expand(rp)


def _pow(p, e):
    # exact p**e for possibly negative e, staying rational
    return Fraction(p) ** e if e < 0 else p**e


def ds_sum(n: int, d, p: int = 2):
    """Right-hand side r_p - 1 from the ramification data (one place with
    d/p^{n-3} places of index p^{n-3} above it, p places with d/p^{n-1}
    places of index p^{n-1} above each)."""
    a = _pow(p, n - 3)
    b = _pow(p, n - 1)
    return -d + (d / a) * (a - 1) + p * (d / b) * (b - 1)


def ds_closed_form(n: int, d, p: int = 2):
    return d * (p - _pow(p, 3 - n) - _pow(p, 2 - n)) + 1
