"""Counting degree-one places of tower curves over F_{4^k}.

The affine part is a vectorised branching scan: base values are processed in
chunks, each Artin-Schreier layer keeps the values whose right-hand side has
trace zero and doubles them into the two roots.  The final layer only needs
the trace test.  The few base points where a right-hand side can have a pole
are handed to ``astower.places``.
"""

from __future__ import annotations

import logging
import multiprocessing as mp
from functools import lru_cache
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .curves import CurveSpec, evaluate
from .gf2m import FieldSpec, make_field
from .places import INFINITY, bad_points, resolve_bad

log = logging.getLogger(__name__)

DEFAULT_CHUNK = 1 << 18


class PoleOutsideBadLocus(AssertionError):
    """An affine point off the bad locus hit a zero denominator."""


@dataclass(frozen=True)
class CountRow:
    k: int
    affine: int
    bad: int
    total: int

    def __post_init__(self):
        if self.total != self.affine + self.bad:
            raise ValueError(f"row k={self.k}: total {self.total} != affine + bad")

    def to_json(self) -> dict:
        return {"k": self.k, "affine": self.affine, "bad": self.bad, "total": self.total}

    @classmethod
    def from_json(cls, obj) -> "CountRow":
        return cls(int(obj["k"]), int(obj["affine"]), int(obj["bad"]), int(obj["total"]))


@dataclass
class CountTable:
    curve: str
    q: int = 4
    rows: list = dc_field(default_factory=list)

    def add(self, row: CountRow):
        if any(r.k == row.k for r in self.rows):
            raise ValueError(f"duplicate row k={row.k} for {self.curve}")
        self.rows.append(row)
        self.rows.sort(key=lambda r: r.k)

    def totals(self) -> dict[int, int]:
        return {r.k: r.total for r in self.rows}

    @property
    def k_max(self) -> int:
        """Largest k such that rows 1..k are all present."""
        ks = {r.k for r in self.rows}
        k = 0
        while k + 1 in ks:
            k += 1
        return k

    def to_json(self) -> dict:
        return {"curve": self.curve, "q": self.q, "rows": [r.to_json() for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "CountTable":
        t = cls(obj["curve"], int(obj.get("q", 4)))
        for r in obj["rows"]:
            t.add(CountRow.from_json(r))
        return t


class ArrayAlgebra:
    """numpy arrays of field elements; a zero denominator is an error here."""

    def __init__(self, field: FieldSpec):
        self.field = field

    def const(self, sym):
        return self.field.dtype(self.field.from_f4(sym))

    def add(self, a, b):
        return np.bitwise_xor(a, b)

    def mul(self, a, b):
        return self.field.vmul(a, b)

    def square(self, a):
        return self.field.vsquare(a)

    def inv(self, a):
        if not np.all(a):
            raise PoleOutsideBadLocus("zero denominator at an affine point outside the bad locus")
        return self.field.vinv(a)


def _excluded_bases(curve: CurveSpec, field: FieldSpec) -> np.ndarray:
    return np.array(
        sorted(field.from_f4(p) for p in bad_points(curve) if p != INFINITY),
        dtype=field.dtype,
    )


def _scan_chunk(curve: CurveSpec, field: FieldSpec, lo: int, hi: int) -> int:
    alg = ArrayAlgebra(field)
    base = np.arange(lo, hi, dtype=field.dtype)
    excluded = _excluded_bases(curve, field)
    if len(excluded):
        base = base[~np.isin(base, excluded)]
    if not curve.layers:
        return int(len(base))
    env = {curve.base_var: base}
    last = len(curve.layers) - 1
    for j, (name, rhs) in enumerate(curve.layers):
        v = evaluate(rhs, env, alg)
        if np.ndim(v) == 0:
            v = np.full(len(env[curve.base_var]), v, dtype=field.dtype)
        ok = field.vtrace(v) == 0
        if j == last:
            return 2 * int(np.count_nonzero(ok))
        v = v[ok]
        if len(v) == 0:
            return 0
        r = field.vsolve_as(v)
        env = {key: np.concatenate([arr[ok], arr[ok]]) for key, arr in env.items()}
        env[name] = np.concatenate([r, r ^ field.dtype(1)])
    raise AssertionError("unreachable")


def _scan_job(args):
    curve_json, k, lo, hi = args
    return _scan_chunk(CurveSpec.from_json(curve_json), make_field(k), lo, hi)


def affine_count(curve: CurveSpec, k: int, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> int:
    """Affine solutions over F_{4^k} with x_1 off the bad locus.

    Each base value contributes 2 per layer while the right-hand side has
    trace zero; the sum is independent of ``chunk`` and ``workers``.
    """
    field = make_field(k)
    q = field.size
    bounds = [(lo, min(lo + chunk, q)) for lo in range(0, q, chunk)]
    if workers <= 1 or len(bounds) == 1:
        return sum(_scan_chunk(curve, field, lo, hi) for lo, hi in bounds)
    field._get_tables()  # build once before forking so children inherit them
    field.vsolve_as(np.zeros(1, dtype=field.dtype))
    jobs = [(curve.to_json(), k, lo, hi) for lo, hi in bounds]
    with ProcessPoolExecutor(workers, mp_context=mp.get_context("fork")) as pool:
        return sum(pool.map(_scan_job, jobs))


def bad_field_degree(k: int) -> int:
    """Smallest k' with the same bad-place count over F_{4^k'} as over F_{4^k}.

    Bad places are defined over F_4-extensions of 2-power degree (each split
    layer at most doubles the field of definition), and such a place is
    rational over F_{4^k} iff its degree divides k.  Only the 2-part of k
    matters.
    """
    return k & -k


@lru_cache(maxsize=None)
def _bad_count(curve: CurveSpec, k: int) -> int:
    return resolve_bad(curve, make_field(k))


def count_places(curve: CurveSpec, k: int, workers: int = 1) -> CountRow:
    affine = affine_count(curve, k, workers)
    bad = _bad_count(curve, bad_field_degree(k))
    return CountRow(k, affine, bad, affine + bad)


def point_cost(curve: CurveSpec, k: int) -> int:
    """Projected work for one row: base points times branch width."""
    return 4**k * 2 ** len(curve.layers)


def count_range(curve: CurveSpec, k_max: int, budget: int | None = None, cache=None,
                workers: int = 1) -> CountTable:
    """Rows k = 1..k_max, stopping before the first row whose projected cost
    exceeds ``budget``.  A partial table is a valid result.

    ``cache`` (optional) provides ``lookup(curve_id, k, fingerprint)`` and
    ``store(curve_id, row, fingerprint)``.
    """
    table = CountTable(curve.id)
    for k in range(1, k_max + 1):
        fp = make_field(k).fingerprint
        row = cache.lookup(curve.id, k, fp) if cache is not None else None
        if row is None:
            if budget is not None and point_cost(curve, k) > budget:
                log.info("%s: budget %s stops the table before k=%d", curve.id, budget, k)
                break
            row = count_places(curve, k, workers)
            log.debug("%s k=%d: %s", curve.id, k, row)
            if cache is not None:
                cache.store(curve.id, row, fp)
        table.add(row)
    return table
