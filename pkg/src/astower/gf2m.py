"""Binary extension fields F_{2^m} (m even) with bit-packed elements.

Elements are plain Python ints (scalar API) or numpy integer arrays (the
``v*`` vectorised API used by the enumeration hot loop).  Bit ``i`` of an
element is the coefficient of ``t^i`` in the polynomial basis.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Lowest-weight irreducible polynomials over F_2: trinomials (m, a, 0) where
# one exists, otherwise pentanomials (m, a, b, c, 0).  Smallest a, then b, c.
REDUCTION_POLYS: dict[int, tuple[int, ...]] = {
    2: (2, 1, 0), 3: (3, 1, 0), 4: (4, 1, 0), 5: (5, 2, 0),
    6: (6, 1, 0), 7: (7, 1, 0), 8: (8, 4, 3, 1, 0), 9: (9, 1, 0),
    10: (10, 3, 0), 11: (11, 2, 0), 12: (12, 3, 0), 13: (13, 4, 3, 1, 0),
    14: (14, 5, 0), 15: (15, 1, 0), 16: (16, 5, 3, 1, 0), 17: (17, 3, 0),
    18: (18, 3, 0), 19: (19, 5, 2, 1, 0), 20: (20, 3, 0), 21: (21, 2, 0),
    22: (22, 1, 0), 23: (23, 5, 0), 24: (24, 4, 3, 1, 0), 25: (25, 3, 0),
    26: (26, 4, 3, 1, 0), 27: (27, 5, 2, 1, 0), 28: (28, 1, 0), 29: (29, 2, 0),
    30: (30, 1, 0), 31: (31, 3, 0), 32: (32, 7, 3, 2, 0), 33: (33, 10, 0),
    34: (34, 7, 0), 35: (35, 2, 0), 36: (36, 9, 0), 37: (37, 6, 4, 1, 0),
    38: (38, 6, 5, 1, 0), 39: (39, 4, 0), 40: (40, 5, 4, 3, 0), 41: (41, 3, 0),
    42: (42, 7, 0), 43: (43, 6, 4, 3, 0), 44: (44, 5, 0), 45: (45, 4, 3, 1, 0),
    46: (46, 1, 0), 47: (47, 5, 0), 48: (48, 5, 3, 2, 0), 49: (49, 9, 0),
    50: (50, 4, 3, 2, 0), 51: (51, 6, 3, 1, 0), 52: (52, 3, 0),
    53: (53, 6, 2, 1, 0), 54: (54, 9, 0), 55: (55, 7, 0), 56: (56, 7, 4, 2, 0),
    57: (57, 4, 0), 58: (58, 19, 0), 59: (59, 7, 4, 2, 0), 60: (60, 1, 0),
    61: (61, 5, 2, 1, 0), 62: (62, 29, 0), 63: (63, 1, 0), 64: (64, 4, 3, 1, 0),
}

# log/antilog tables are built only up to this degree (2^24 entries, ~200MB peak)
TABLE_MAX_M = 24
# vectorised carry-less products must fit in 64 bits
VECTOR_MAX_M = 32


class FieldError(ValueError):
    pass


def poly_from_exponents(exps) -> int:
    f = 0
    for e in exps:
        f |= 1 << e
    return f


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-packed F_2[t] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return r


def polymod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def polygcd(a: int, b: int) -> int:
    while b:
        a, b = b, polymod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's test for a bit-packed polynomial over F_2."""
    m = f.bit_length() - 1
    if m < 1:
        return False

    def frob(k):
        y = 2
        for _ in range(k):
            y = polymod(clmul(y, y), f)
        return y

    if frob(m) != 2:
        return False
    return all(polygcd(f, frob(m // p) ^ 2) == 1 for p in _prime_factors(m))


def _solve_gf2(rows: list[int], ncols: int, rhs: int) -> int | None:
    """Solve A y = rhs over F_2.  ``rows[i]`` is row i of A as a bitmask over
    the columns; ``rhs`` bit i is the right-hand side of row i.  Free
    variables are set to zero.  Returns ``None`` if inconsistent."""
    aug = [(rows[i], (rhs >> i) & 1) for i in range(len(rows))]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][0] >> c & 1), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(len(aug)):
            if i != r and aug[i][0] >> c & 1:
                aug[i] = (aug[i][0] ^ aug[r][0], aug[i][1] ^ aug[r][1])
        pivots.append(c)
        r += 1
    if any(row == 0 and b for row, b in aug[r:]):
        return None
    y = 0
    for i, c in enumerate(pivots):
        if aug[i][1]:
            y |= 1 << c
    return y


class FieldSpec:
    """The field F_{2^m} = F_2[t]/(reduction), with m even so that F_4 embeds.

    ``gamma`` is the root of t^2+t+1 with the smaller bit pattern.  Instances
    are immutable after construction; the lookup tables used by the
    vectorised API are built lazily on first use.
    """

    def __init__(self, m: int, reduction: int | None = None):
        if m < 2 or m > 64 or m % 2:
            raise FieldError(f"extension degree must be even and in [2, 64], got {m}")
        if reduction is None:
            reduction = poly_from_exponents(REDUCTION_POLYS[m])
        elif not is_irreducible(reduction):
            raise FieldError(f"reduction polynomial {reduction:#x} is reducible")
        if reduction.bit_length() - 1 != m:
            raise FieldError("reduction polynomial has wrong degree")
        self.m = m
        self.reduction = reduction
        self.size = 1 << m
        self.mask = self.size - 1
        self.trace_mask = self._build_trace_mask()
        self._solve_cols = self._build_as_solver()
        self._solve_luts = None
        self._tables = None
        r = self.solve_as(1)
        if r is None:
            raise FieldError("t^2+t+1 has no root; m must be even")
        self.gamma = min(r, r ^ 1)

    # -- scalar arithmetic ---------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return polymod(clmul(a, b), self.reduction) if a and b else 0

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_2^m")
        return self.pow(a, self.size - 2)

    def sqrt(self, a: int) -> int:
        for _ in range(self.m - 1):
            a = self.mul(a, a)
        return a

    def trace(self, a: int) -> int:
        """Absolute trace to F_2 (0 or 1)."""
        return (a & self.trace_mask).bit_count() & 1

    def solve_as(self, a: int) -> int | None:
        """A root y of y^2 + y = a, or None if trace(a) = 1.

        The other root is y ^ 1; the returned one has constant coefficient 0.
        """
        if self.trace(a):
            return None
        y = 0
        i = 0
        while a:
            if a & 1:
                y ^= self._solve_cols[i]
            a >>= 1
            i += 1
        return y

    def from_f4(self, sym: str) -> int:
        """Embed an F_4 constant named '0', '1', 'g' (gamma) or 'g1' (gamma+1)."""
        return {"0": 0, "1": 1, "g": self.gamma, "g1": self.gamma ^ 1}[sym]

    @property
    def fingerprint(self) -> str:
        return f"m={self.m};f={self.reduction:#x};g={self.gamma:#x}"

    def __repr__(self):
        return f"FieldSpec(m={self.m}, reduction={self.reduction:#x}, gamma={self.gamma:#x})"

    # -- construction helpers ------------------------------------------------

    def _build_trace_mask(self) -> int:
        mask = 0
        for i in range(self.m):
            x = 1 << i
            acc, y = 0, x
            for _ in range(self.m):
                acc ^= y
                y = self.mul(y, y)
            if acc & 1:
                mask |= 1 << i
        return mask

    def _build_as_solver(self) -> list[int]:
        # Columns of an F_2-linear L with L(a)^2 + L(a) = a whenever trace(a) = 0.
        m = self.m
        images = [self.mul(1 << j, 1 << j) ^ (1 << j) for j in range(m)]
        # drop column 0: y=1 spans the kernel of y -> y^2+y
        rows = [sum(((images[j] >> i) & 1) << (j - 1) for j in range(1, m)) for i in range(m)]
        w = next(1 << i for i in range(m) if self.trace_mask >> i & 1)
        cols = []
        for i in range(m):
            target = 1 << i
            if self.trace(target):
                target ^= w
            y = _solve_gf2(rows, m - 1, target)
            if y is None:
                raise FieldError("Artin-Schreier solver construction failed")
            cols.append(y << 1)
        return cols

    # -- vectorised arithmetic -------------------------------------------------

    def _check_vector(self):
        if self.m > VECTOR_MAX_M:
            raise FieldError(f"vectorised arithmetic supports m <= {VECTOR_MAX_M}")

    @property
    def dtype(self):
        return np.uint32 if self.m <= 32 else np.uint64

    def _get_tables(self):
        if self._tables is None and self.m <= TABLE_MAX_M:
            self._tables = _build_tables(self)
        return self._tables

    def vclmul_reduce(self, a, b):
        """Vectorised product via carry-less multiplication (no tables)."""
        self._check_vector()
        a = np.asarray(a, dtype=np.uint64)
        b = np.asarray(b, dtype=np.uint64)
        a, b = np.broadcast_arrays(a, b)
        r = np.zeros(a.shape, dtype=np.uint64)
        one = np.uint64(1)
        for i in range(self.m):
            bit = (b >> np.uint64(i)) & one
            r ^= (a << np.uint64(i)) * bit
        f = np.uint64(self.reduction)
        for i in range(2 * self.m - 2, self.m - 1, -1):
            bit = (r >> np.uint64(i)) & one
            r ^= (f << np.uint64(i - self.m)) * bit
        return r.astype(self.dtype)

    def vmul(self, a, b):
        tabs = self._get_tables()
        if tabs is None:
            return self.vclmul_reduce(a, b)
        log, exp = tabs
        a = np.asarray(a)
        b = np.asarray(b)
        r = exp[log[a].astype(np.int64) + log[b]]
        return np.where((a == 0) | (b == 0), r.dtype.type(0), r)

    def vsquare(self, a):
        tabs = self._get_tables()
        if tabs is None:
            return self.vclmul_reduce(a, a)
        log, exp = tabs
        a = np.asarray(a)
        r = exp[2 * log[a].astype(np.int64)]
        return np.where(a == 0, r.dtype.type(0), r)

    def vinv(self, a):
        """Elementwise inverse; raises ZeroDivisionError if any entry is 0."""
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in F_2^m")
        tabs = self._get_tables()
        if tabs is None:
            r = a.astype(np.uint64)
            acc = np.ones_like(r)
            e = self.size - 2
            while e:
                if e & 1:
                    acc = self.vclmul_reduce(acc, r).astype(np.uint64)
                r = self.vclmul_reduce(r, r).astype(np.uint64)
                e >>= 1
            return acc.astype(self.dtype)
        log, exp = tabs
        order = self.size - 1
        return exp[order - log[a].astype(np.int64)]

    def vtrace(self, a):
        a = np.asarray(a)
        return np.bitwise_count(a & a.dtype.type(self.trace_mask)) & 1

    def vsolve_as(self, a):
        """Particular roots of y^2+y=a (meaningful only where vtrace(a) == 0)."""
        if self._solve_luts is None:
            self._solve_luts = _build_solve_luts(self)
        a = np.asarray(a)
        r = np.zeros(a.shape, dtype=self.dtype)
        for i, lut in enumerate(self._solve_luts):
            r ^= lut[(a >> (8 * i)) & 0xFF]
        return r


def _build_solve_luts(field: FieldSpec) -> list[np.ndarray]:
    luts = []
    for byte in range((field.m + 7) // 8):
        lut = np.zeros(256, dtype=field.dtype)
        for v in range(256):
            y = 0
            for j in range(8):
                if v >> j & 1 and 8 * byte + j < field.m:
                    y ^= field._solve_cols[8 * byte + j]
            lut[v] = y
        luts.append(lut)
    return luts


def _primitive_element(field: FieldSpec) -> int:
    order = field.size - 1
    ps = _prime_factors(order)
    for g in range(2, field.size):
        if all(field.pow(g, order // p) != 1 for p in ps):
            return g
    raise FieldError("no primitive element")  # unreachable for a field


def _build_tables(field: FieldSpec):
    order = field.size - 1
    g = _primitive_element(field)
    block = 1
    while block * block < order:
        block <<= 1
    lo = [1]
    for _ in range(block - 1):
        lo.append(field.mul(lo[-1], g))
    step = field.mul(lo[-1], g)
    nhi = -(-order // block)
    hi = [1]
    for _ in range(nhi - 1):
        hi.append(field.mul(hi[-1], step))
    lo_a = np.array(lo, dtype=np.uint64)
    exp = np.empty(nhi * block, dtype=field.dtype)
    rows_per = max(1, (1 << 20) // block)
    for start in range(0, nhi, rows_per):
        h = np.array(hi[start:start + rows_per], dtype=np.uint64)
        exp[start * block:(start + len(h)) * block] = field.vclmul_reduce(h[:, None], lo_a[None, :]).ravel()
    exp = exp[:order]
    log = np.zeros(field.size, dtype=np.int64 if order >= 2**31 else np.int32)
    log[exp] = np.arange(order, dtype=log.dtype)
    # doubled so that log a + log b never needs a modulo
    exp2 = np.concatenate([exp, exp, exp[:1]])
    return log, exp2


@lru_cache(maxsize=None)
def make_field(k: int) -> FieldSpec:
    """The field F_{4^k} = F_{2^{2k}} with the built-in reduction polynomial."""
    if not 1 <= k <= 32:
        raise FieldError(f"k must be in [1, 32], got {k}")
    return FieldSpec(2 * k)
