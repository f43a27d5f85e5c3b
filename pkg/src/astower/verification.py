"""End-to-end checks against the published tower data.

Each check returns a ``CheckResult``; ``run_all`` runs them in order and
shares counts through one cache so the expensive tower computations are done
once.  Used by ``astower verify-paper`` and by the acceptance tests.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .curves import (
    curve_from_id,
    curve_genus,
    deg_ly,
    dim_chain,
    dim_y,
    ds_prank,
    genus_formula,
    quotient_curve,
    tower_level,
)
from .gf2m import FieldSpec, is_irreducible, make_field
from .kanirosen import compute_tower, template_degree, trial_factor
from .places import default_precision, resolve_fibers
from .pointcount import affine_count, count_places, count_range
from .published import published_poly
from .zeta import lpoly_from_counts, prank
from .zpoly import LPoly, format_poly, from_power_sums, isqrt_poly, mod2_degree, mul_poly

LEVEL5_LIMIT_S = 120
LEVEL6_LIMIT_S = 30 * 60


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    data: dict = dc_field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


class Context:
    """Shared state: cache, worker count and the memoised tower reports."""

    def __init__(self, cache=None, workers: int = 1, g_max_leaf: int = 12):
        self.cache = cache
        self.workers = workers
        self.g_max_leaf = g_max_leaf
        self._reports = None

    def tower6(self):
        if self._reports is None:
            t0 = time.perf_counter()
            self._reports = compute_tower(6, cache=self.cache, workers=self.workers,
                                          g_max_leaf=self.g_max_leaf, verify_budget=4**10 * 32)
            self.tower6_seconds = time.perf_counter() - t0
        return self._reports


def _published_lpoly(curve_id: str) -> LPoly:
    return LPoly(published_poly(curve_id))


def check_levels_up_to_5(ctx: Context) -> CheckResult:
    t0 = time.perf_counter()
    reports = compute_tower(5, cache=ctx.cache, workers=ctx.workers, g_max_leaf=ctx.g_max_leaf)
    elapsed = time.perf_counter() - t0
    bad = [r.n for r in reports if r.L.coeffs != published_poly(f"T{r.n}")]
    ok = not bad and elapsed < LEVEL5_LIMIT_S
    detail = f"T2..T5 coefficient-exact, {elapsed:.1f}s" if not bad else f"levels {bad} differ"
    if elapsed >= LEVEL5_LIMIT_S:
        detail += f" (over {LEVEL5_LIMIT_S}s)"
    return CheckResult("exact levels n<=5", ok, detail, {"seconds": elapsed})


def check_quotients(ctx: Context) -> CheckResult:
    problems = []
    for n in (4, 5):
        tables = {}
        for variant in ("u0", "u1"):
            curve = quotient_curve(n, variant)
            g = curve_genus(curve.id)
            tables[variant] = count_range(curve, g + 2, cache=ctx.cache, workers=ctx.workers)
            L = lpoly_from_counts(tables[variant], g)
            if L.coeffs != published_poly(curve.id):
                problems.append(f"{curve.id}: {format_poly(L.coeffs)}")
        if tables["u0"].totals() != tables["u1"].totals():
            problems.append(f"Q{n} u0/u1 counts differ")
    return CheckResult("quotients by direct counting", not problems,
                       "; ".join(problems) or "Q4, Q5 exact for u0 and u1, identical count tables")


def check_level6(ctx: Context) -> CheckResult:
    reports = ctx.tower6()
    r5, r6 = reports[-2], reports[-1]
    L6 = r6.L
    failures = []
    if L6.degree != 2 * genus_formula(6):
        failures.append(f"degree {L6.degree}")
    if not all(e["source"] == "relation" for e in r6.relations) or not r6.relations:
        failures.append("no solved relation recorded")
    if not r6.divisible_by_previous or L6.coeffs == r5.L.coeffs:
        failures.append("T5 does not divide T6")
    if not L6.satisfies_functional_equation():
        failures.append("functional equation")
    if r6.verified_rows < 10:
        failures.append(f"only {r6.verified_rows} direct rows verified")
    if r6.published.status != "mismatch" or r6.published.diff.get("printed_degree") != 86:
        failures.append(f"unexpected comparison {r6.published.status}")
    detail = (
        f"deg {L6.degree}, N_1..N_{r6.verified_rows} verified by enumeration, "
        f"printed degree {r6.published.diff.get('printed_degree')} reported as mismatch"
    )
    seconds = getattr(ctx, "tower6_seconds", 0.0)
    if seconds > LEVEL6_LIMIT_S:
        failures.append(f"{seconds:.0f}s")
    return CheckResult("level 6", not failures, "; ".join(failures) or detail, {"L": L6.to_json()})


def check_ordinarity(ctx: Context) -> CheckResult:
    reports = ctx.tower6()
    bad = [r.n for r in reports if mod2_degree(r.L.coeffs) != genus_formula(r.n) or prank(r.L) != r.L.g]
    return CheckResult("ordinarity n=2..6", not bad, f"failing levels {bad}" if bad else "deg(L mod 2) = g")


def check_deuring_shafarevich(ctx: Context) -> CheckResult:
    import sympy

    d = sympy.Symbol("d")
    forms = {}
    try:
        for n in range(3, 9):
            forms[n] = str(ds_prank(n, d))
        numeric = ds_prank(3, 4)
    except ArithmeticError as exc:
        return CheckResult("Deuring-Shafarevich identity", False, str(exc))
    ok = numeric == 3 == genus_formula(3)
    return CheckResult("Deuring-Shafarevich identity", ok, f"n=3..8 symbolic agree; r_p(n=3,d=4) = {numeric}", forms)


def check_structure(ctx: Context) -> CheckResult:
    failures = [f"dimY n={n}" for n in range(3, 11) if dim_chain(n).dimY != dim_y(n)]
    failures += [f"template n={n}" for n in range(5, 13) if template_degree(n) != 2 * genus_formula(n)]
    reports = {r.n: r for r in ctx.tower6()}
    new = {}
    for n in (5, 6):
        new[n] = reports[n].new_factor_degree
        if new[n] != deg_ly(n - 2):
            failures.append(f"new factor n={n} degree {new[n]} != {deg_ly(n - 2)}")
        if not reports[n].template_match:
            failures.append(f"template factors n={n}")
    return CheckResult("structure formulas", not failures,
                       "; ".join(failures) or f"new factor degrees {new[5]}, {new[6]}", {"new": new})


def check_pic_orders(ctx: Context) -> CheckResult:
    p4 = _published_lpoly("T4")(1)
    p5 = _published_lpoly("T5")(1)
    failures = []
    if p4 != 33554432 or p4 != 2**25:
        failures.append(f"L_T4(1) = {p4}")
    if p5 != 2**47 * 3**2 * 7**2 or trial_factor(p5)[0] != {2: 47, 3: 2, 7: 2}:
        failures.append(f"L_T5(1) = {p5}")
    reports = {r.n: r for r in ctx.tower6()}
    if reports[4].pic.order != p4 or reports[5].pic.order != p5:
        failures.append("computed orders differ from published polynomials")
    if reports[5].pic.formula_status != "inconsistent":
        failures.append("closed-form order not flagged at n=5")
    return CheckResult("Pic orders", not failures, "; ".join(failures) or
                       "2^25 and 2^47*3^2*7^2; closed form flagged: " + reports[5].pic.formula_detail)


def _field_properties(rng: random.Random) -> list[str]:
    out = []
    for m in range(2, 17, 2):
        f = FieldSpec(m)
        allv = np.arange(f.size, dtype=f.dtype)
        if int(np.count_nonzero(f.vtrace(allv) == 0)) != f.size // 2:
            out.append(f"trace kernel m={m}")
        nz = allv[1:]
        if not np.all(f.vmul(nz, f.vinv(nz)) == 1):
            out.append(f"inverse m={m}")
        a, b, c = (allv[np.array([rng.randrange(f.size) for _ in range(256)])] for _ in range(3))
        if not np.array_equal(f.vmul(a, b ^ c), f.vmul(a, b) ^ f.vmul(a, c)):
            out.append(f"distributivity m={m}")
        if not np.array_equal(f.vmul(f.vmul(a, b), c), f.vmul(a, f.vmul(b, c))):
            out.append(f"associativity m={m}")
        if not is_irreducible(f.reduction):
            out.append(f"reduction m={m}")
    return out


def check_properties(ctx: Context) -> CheckResult:
    rng = random.Random(7)
    failures = _field_properties(rng)
    # zpoly round trips
    for cid in ("T4", "T5", "Q5u0"):
        L = _published_lpoly(cid)
        if from_power_sums(L.power_sums(L.g), L.g) != L or LPoly.from_json(L.to_json()) != L:
            failures.append(f"round trip {cid}")
        if isqrt_poly(mul_poly(L.coeffs, L.coeffs)) != L.coeffs:
            failures.append(f"isqrt {cid}")
    # degree bookkeeping and precision stability of the bad fibres
    for cid in ("T3", "T4", "Q5u0"):
        curve = curve_from_id(cid)
        for k in (1, 2):
            field = make_field(k)
            fibres = resolve_fibers(curve, field)
            if any(fr.degree_mass() != curve.degree for fr in fibres):
                failures.append(f"degree mass {cid} k={k}")
            deeper = resolve_fibers(curve, field, 2 * default_precision(curve))
            if [len(f.places) for f in fibres] != [len(f.places) for f in deeper]:
                failures.append(f"precision {cid} k={k}")
    # parallel scan equals serial scan
    t4 = tower_level(4)
    if affine_count(t4, 6, workers=2, chunk=1 << 9) != affine_count(t4, 6):
        failures.append("parallel != serial")
    # oracle equivalence for T2, T3
    for n in (2, 3):
        L = _published_lpoly(f"T{n}")
        expected = L.point_counts(3)
        got = [count_places(tower_level(n), k).total for k in (1, 2, 3)]
        if got != expected:
            failures.append(f"T{n} counts {got} != {expected}")
    return CheckResult("property suites", not failures, "; ".join(failures) or "all properties hold")


CHECKS = [
    check_levels_up_to_5,
    check_quotients,
    check_level6,
    check_ordinarity,
    check_deuring_shafarevich,
    check_structure,
    check_pic_orders,
    check_properties,
]


def run_all(ctx: Context, emit=print) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            res = check(ctx)
        except Exception as exc:  # a crashing check is a failed check
            res = CheckResult(check.__name__.removeprefix("check_"), False, f"{type(exc).__name__}: {exc}")
        results.append(res)
        if emit is not None:
            emit(res.line())
    return results
