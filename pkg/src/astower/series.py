"""Truncated Laurent series with coefficients in F_{2^m}.

A series is ``t^val * (c_0 + c_1 t + ...)`` known modulo ``t^prec`` (the
absolute precision; ``math.inf`` for exact polynomials).  Arithmetic tracks
precision conservatively, so a coefficient is only ever read once it is
determined.
"""

from __future__ import annotations

import math

import numpy as np

from .gf2m import FieldSpec


class InsufficientPrecision(ArithmeticError):
    pass


class LaurentSeries:
    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field: FieldSpec, val: int, coeffs, prec=math.inf):
        coeffs = np.asarray(coeffs, dtype=field.dtype).ravel()
        if prec != math.inf:
            keep = max(0, int(prec) - val)
            coeffs = coeffs[:keep]
        nz = np.flatnonzero(coeffs)
        if len(nz) == 0:
            if prec == math.inf:
                # exact zero: keep a finite sentinel valuation
                val, coeffs = 0, coeffs[:0]
            else:
                val, coeffs = int(prec), coeffs[:0]
        else:
            val += int(nz[0])
            coeffs = coeffs[nz[0]: nz[-1] + 1]
        self.field = field
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # -- constructors --------------------------------------------------------

    @classmethod
    def monomial(cls, field, c: int, e: int, prec=math.inf):
        return cls(field, e, [c], prec)

    @classmethod
    def const(cls, field, c: int):
        return cls(field, 0, [c])

    @classmethod
    def zero(cls, field, prec=math.inf):
        return cls(field, 0, [], prec)

    # -- inspection ------------------------------------------------------------

    def is_zero(self) -> bool:
        """True if no nonzero coefficient is known (zero to known precision)."""
        return len(self.coeffs) == 0

    @property
    def exact(self) -> bool:
        return self.prec == math.inf

    @property
    def rel_prec(self):
        return self.prec - self.val

    def lead(self) -> int:
        if self.is_zero():
            raise InsufficientPrecision("leading coefficient of a series that is zero to known precision")
        return int(self.coeffs[0])

    def coeff(self, i: int) -> int:
        if i >= self.prec:
            raise InsufficientPrecision(f"coefficient {i} beyond precision {self.prec}")
        j = i - self.val
        if 0 <= j < len(self.coeffs):
            return int(self.coeffs[j])
        return 0

    def padded(self, n: int) -> np.ndarray:
        """First n coefficients starting at ``val`` (zero-padded)."""
        out = np.zeros(n, dtype=self.field.dtype)
        c = self.coeffs[:n]
        out[: len(c)] = c
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.val == other.val
            and self.prec == other.prec
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __repr__(self):
        terms = [f"{int(c):#x}*t^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        tail = "" if self.exact else f" + O(t^{self.prec})"
        return "LaurentSeries(" + (" + ".join(terms) or "0") + tail + ")"

    # -- arithmetic ------------------------------------------------------------

    def with_prec(self, prec) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        return LaurentSeries(self.field, self.val, self.coeffs, prec)

    def truncate_rel(self, n: int) -> "LaurentSeries":
        return self.with_prec(self.val + n)

    def shift(self, e: int) -> "LaurentSeries":
        """Multiply by t^e."""
        return LaurentSeries(self.field, self.val + e, self.coeffs, self.prec + e)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return other.with_prec(prec)
        if other.is_zero():
            return self.with_prec(prec)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        if prec != math.inf:
            hi = min(hi, int(prec))
        if hi <= lo:
            return LaurentSeries.zero(self.field, prec)
        out = np.zeros(hi - lo, dtype=self.field.dtype)
        for s in (self, other):
            c = s.coeffs[: max(0, hi - s.val)]
            out[s.val - lo: s.val - lo + len(c)] ^= c
        return LaurentSeries(self.field, lo, out, prec)

    __sub__ = __add__

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        prec = min(self.prec + other.val, other.prec + self.val)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(self.field, prec)
        val = self.val + other.val
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec != math.inf:
            n = min(n, int(prec) - val)
        if n <= 0:
            return LaurentSeries.zero(self.field, prec)
        a, b = self.coeffs[:n], other.coeffs[:n]
        if len(a) > len(b):
            a, b = b, a
        prods = self.field.vmul(a[:, None], b[None, :])
        out = np.zeros(len(a) + len(b) - 1, dtype=self.field.dtype)
        for i in range(len(a)):
            out[i: i + len(b)] ^= prods[i]
        return LaurentSeries(self.field, val, out[:n], prec)

    def scale(self, c: int) -> "LaurentSeries":
        if c == 0:
            return LaurentSeries.zero(self.field, math.inf if self.exact else self.prec)
        return LaurentSeries(self.field, self.val, self.field.vmul(self.coeffs, c), self.prec)

    def square(self) -> "LaurentSeries":
        # Frobenius: (A + O(t^p))^2 = A^2 + O(t^{2p}) in characteristic 2
        prec = 2 * self.prec
        if self.is_zero():
            return LaurentSeries.zero(self.field, prec)
        out = np.zeros(2 * len(self.coeffs) - 1, dtype=self.field.dtype)
        out[::2] = self.field.vsquare(self.coeffs)
        return LaurentSeries(self.field, 2 * self.val, out, prec)

    def inv(self, max_rel: int) -> "LaurentSeries":
        """Inverse, with relative precision capped at ``max_rel`` terms."""
        if self.is_zero():
            raise InsufficientPrecision("inverting a series that is zero to known precision")
        r = self.rel_prec
        r = max_rel if r == math.inf else min(int(r), max_rel)
        f = self.field
        a = LaurentSeries(f, 0, self.padded(r), r)
        b = LaurentSeries(f, 0, [f.inv(int(self.coeffs[0]))], 1)
        # Newton step b <- 2b - a b^2 = a b^2 in characteristic 2
        while b.prec < r:
            target = min(2 * int(b.prec), r)
            b = (a.with_prec(target) * b.square()).with_prec(target)
        return LaurentSeries(f, -self.val + b.val, b.coeffs, -self.val + r)

    def __pow__(self, e: int) -> "LaurentSeries":
        if e < 0:
            raise ValueError("use inv() for negative powers")
        result = LaurentSeries.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base.square()
            e >>= 1
        return result

    def compose(self, s: "LaurentSeries", max_rel: int) -> "LaurentSeries":
        """Substitute t = s(sigma) where s has positive valuation."""
        if s.is_zero() or s.val < 1:
            raise ValueError("substituted series must have positive valuation")
        r = self.rel_prec
        n = len(self.coeffs) if r == math.inf else min(int(r), max_rel)
        f = self.field
        acc = LaurentSeries.zero(f)
        cs = self.padded(n)
        for c in reversed(cs):
            acc = (acc * s + LaurentSeries.const(f, int(c))).truncate_rel(max_rel) if not acc.is_zero() or c else acc
        if r != math.inf:
            acc = acc.with_prec(n * s.val)
        if self.val >= 0:
            factor = s**self.val
        else:
            factor = s.inv(max_rel) ** (-self.val)
        return (acc * factor).truncate_rel(max_rel)
