"""Rational places of a curve over the bad part of its base line.

The affine scan in ``astower.pointcount`` skips a few base values where the
Artin-Schreier right-hand sides have poles (or may acquire them further up
the tower).  Over each such base point we expand the tower variables as
Laurent series in a local parameter, reduce every layer ``y^2 + y = f`` to
Artin-Schreier normal form, and follow the resulting split / inert /
ramified branches.  Branches that survive every layer are exactly the
degree-one places above that point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from .curves import CurveSpec, eval_scalar, evaluate
from .gf2m import FieldSpec, make_field
from .series import InsufficientPrecision, LaurentSeries

log = logging.getLogger(__name__)

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"
INFINITY = "inf"
MAX_DOUBLINGS = 6


class PrecisionExhausted(RuntimeError):
    pass


class SeriesAlgebra:
    def __init__(self, field: FieldSpec, max_rel: int):
        self.field = field
        self.max_rel = max_rel

    def const(self, sym):
        return LaurentSeries.const(self.field, self.field.from_f4(sym))

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return (a * b).truncate_rel(self.max_rel)

    def square(self, a):
        return a.square().truncate_rel(self.max_rel)

    def inv(self, a):
        return a.inv(self.max_rel)


@dataclass
class ASReduction:
    reduced: LaurentSeries
    cls: str
    shift: LaurentSeries


def as_reduce(f: LaurentSeries) -> ASReduction:
    """Artin-Schreier normal form of y^2 + y = f at t = 0.

    Even-order poles are cancelled by substituting y -> y + h with
    h = sqrt(lead) t^{v/2}; ``shift`` accumulates the h's, so a solution of
    the reduced equation plus ``shift`` solves the original one.
    """
    field = f.field
    shift = LaurentSeries.zero(field)
    while True:
        if f.is_zero():
            if f.prec >= 1:
                return ASReduction(f, SPLIT, shift)
            raise InsufficientPrecision("cannot decide the principal part")
        v = f.val
        if v < 0 and v % 2 == 0:
            h = LaurentSeries.monomial(field, field.sqrt(f.lead()), v // 2)
            f = f + h.square() + h
            shift = shift + h
            continue
        if v < 0:
            return ASReduction(f, RAMIFIED, shift)
        c0 = f.coeff(0)
        return ASReduction(f, SPLIT if field.trace(c0) == 0 else INERT, shift)


def as_solve_regular(g: LaurentSeries) -> LaurentSeries:
    """The root z of z^2 + z = g with z(0) = 0, for g with g(0) = 0."""
    z = LaurentSeries.zero(g.field, g.prec)
    term = g
    while not term.is_zero() and term.val < g.prec:
        z = z + term
        term = term.square()
    return z


def reparametrize(unit: LaurentSeries, m: int, max_rel: int):
    """Uniformizer change at a ramified layer y'^2 + y' = s^{-m} unit(s), m odd.

    With sigma = s^{-(m-1)/2} / y' the new place has uniformizer sigma, and s
    satisfies s = unit(s) sigma^2 + s^{(m+1)/2} sigma.  Returns (s(sigma),
    y'(sigma)).
    """
    f = unit.field
    sigma = LaurentSeries.monomial(f, 1, 1)
    sigma2 = LaurentSeries.monomial(f, 1, 2)
    s = LaurentSeries.monomial(f, unit.lead(), 2, prec=3)
    if m == 1:
        damp = (LaurentSeries.const(f, 1) + sigma).inv(max_rel)
    for _ in range(4 * max_rel + 8):
        us = unit.compose(s, max_rel)
        if m == 1:
            new = (us * sigma2 * damp).truncate_rel(max_rel)
        else:
            new = (us * sigma2 + (s ** ((m + 1) // 2)) * sigma).truncate_rel(max_rel)
        if new.prec <= s.prec:
            s = new
            break
        s = new
    y = (s ** ((m - 1) // 2)).inv(max_rel) * LaurentSeries.monomial(f, 1, -1)
    return s, y.truncate_rel(max_rel)


@dataclass
class Branch:
    env: dict
    e: int = 1
    steps: list = dc_field(default_factory=list)


@dataclass
class FiberResult:
    """Places above one base point: surviving branches plus the degree mass
    (sum of e*f over the whole fibre) carried by pruned inert branches."""

    point: str
    places: list
    pruned_mass: int
    layers: int

    def degree_mass(self) -> int:
        return sum(b.e for b in self.places) + self.pruned_mass


def _lift(branch: Branch, name: str, rhs, alg: SeriesAlgebra):
    f = evaluate(rhs, branch.env, alg)
    red = as_reduce(f)
    field = alg.field
    if red.cls == INERT:
        return [], red.cls
    if red.cls == SPLIT:
        c0 = 0 if red.reduced.is_zero() else red.reduced.coeff(0)
        r = field.solve_as(c0)
        g = red.reduced + LaurentSeries.const(field, c0)
        y = red.shift + LaurentSeries.const(field, r) + as_solve_regular(g)
        out = []
        for root in (y, y + LaurentSeries.const(field, 1)):
            env = dict(branch.env)
            env[name] = root
            out.append(Branch(env, branch.e, branch.steps + [SPLIT]))
        return out, red.cls
    m = -red.reduced.val
    unit = red.reduced.shift(m)
    s, y_prime = reparametrize(unit, m, alg.max_rel)
    env = {k: v.compose(s, alg.max_rel) for k, v in branch.env.items()}
    env[name] = red.shift.compose(s, alg.max_rel) + y_prime if not red.shift.is_zero() else y_prime
    return [Branch(env, 2 * branch.e, branch.steps + [RAMIFIED])], red.cls


def _seed(field: FieldSpec, point: str) -> LaurentSeries:
    t = LaurentSeries.monomial(field, 1, 1)
    if point == INFINITY:
        return LaurentSeries.monomial(field, 1, -1)
    return t + LaurentSeries.const(field, field.from_f4(point))


def resolve_fiber(curve: CurveSpec, field: FieldSpec, point: str, max_rel: int) -> FiberResult:
    alg = SeriesAlgebra(field, max_rel)
    branches = [Branch({curve.base_var: _seed(field, point)})]
    pruned = 0
    nlayers = len(curve.layers)
    for j, (name, rhs) in enumerate(curve.layers, start=1):
        nxt = []
        for b in branches:
            out, cls = _lift(b, name, rhs, alg)
            if cls == INERT:
                # residue degree 2 here; the rest of the tower has degree 2^(L-j)
                pruned += b.e * 2 * 2 ** (nlayers - j)
            nxt.extend(out)
        branches = nxt
    return FiberResult(point, branches, pruned, nlayers)


def bad_points(curve: CurveSpec) -> list[str]:
    """Base points resolved locally: infinity, 0 and 1 for any layered curve,
    plus every F_4 value over which some right-hand side has a pole.

    Poles can only sit over F_4: a layer value lies in F_4 or at infinity only
    when the value below it does, so it is enough to follow the branches
    whose roots stay in F_4.
    """
    if not curve.layers:
        return [INFINITY]
    f4 = make_field(1)
    bad = {"0", "1"}
    for sym in ("0", "1", "g", "g1"):
        stack = [({curve.base_var: f4.from_f4(sym)}, 0)]
        while stack and sym not in bad:
            env, j = stack.pop()
            if j == len(curve.layers):
                continue
            name, rhs = curve.layers[j]
            v = eval_scalar(rhs, env, f4)
            if v is None:
                bad.add(sym)
                break
            r = f4.solve_as(v)
            if r is not None:
                for root in (r, r ^ 1):
                    stack.append(({**env, name: root}, j + 1))
    return sorted(bad) + [INFINITY]


def default_precision(curve: CurveSpec) -> int:
    return 8 * len(curve.layers) + 16


def resolve_fibers(curve: CurveSpec, field: FieldSpec, precision: int | None = None) -> list[FiberResult]:
    """All bad fibres, doubling the working precision until it suffices."""
    n = precision or default_precision(curve)
    for attempt in range(MAX_DOUBLINGS + 1):
        try:
            return [resolve_fiber(curve, field, p, n) for p in bad_points(curve)]
        except InsufficientPrecision as exc:
            log.debug("precision %d insufficient for %s over %r: %s", n, curve.id, field, exc)
            n *= 2
    raise PrecisionExhausted(f"{curve.id}: local expansion failed at precision {n // 2}")


def resolve_bad(curve: CurveSpec, field: FieldSpec, precision: int | None = None) -> int:
    """Number of degree-one places over the bad base points."""
    return sum(len(fr.places) for fr in resolve_fibers(curve, field, precision))


def ram_profile(curve: CurveSpec, field: FieldSpec, precision: int | None = None) -> list[tuple[int, int]]:
    """Multiset of ramification indices of the degree-one bad places, as (e, count)."""
    counts: dict[int, int] = {}
    for fr in resolve_fibers(curve, field, precision):
        for b in fr.places:
            counts[b.e] = counts.get(b.e, 0) + 1
    return sorted(counts.items())
