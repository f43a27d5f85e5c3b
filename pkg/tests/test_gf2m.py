import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from astower.gf2m import (
    REDUCTION_POLYS,
    FieldError,
    FieldSpec,
    clmul,
    is_irreducible,
    make_field,
    poly_from_exponents,
    polymod,
)

EVEN_M = list(range(2, 65, 2))


def naive_mul(a, b, f, m):
    # shift-and-add reference, independent of clmul/polymod
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= f
    return r


@pytest.mark.parametrize("m", range(2, 65))
def test_reduction_table_irreducible(m):
    assert is_irreducible(poly_from_exponents(REDUCTION_POLYS[m]))


def test_is_irreducible_rejects_reducible():
    assert not is_irreducible(0b101)  # x^2 + 1 = (x+1)^2
    assert not is_irreducible(clmul(0b111, 0b1011))
    assert is_irreducible(0b111)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
def test_gamma_matches_exhaustive_search(m):
    f = FieldSpec(m)
    roots = [x for x in range(f.size) if f.mul(x, x) ^ x == 1]
    assert f.gamma == min(roots)
    assert f.mul(f.gamma, f.gamma) ^ f.gamma ^ 1 == 0


def test_f4_gamma():
    f = make_field(1)
    assert f.gamma == 2 and f.mul(2, 2) == 3
    assert [f.from_f4(s) for s in ("0", "1", "g", "g1")] == [0, 1, 2, 3]


def test_field_bounds():
    with pytest.raises(FieldError):
        FieldSpec(3)
    with pytest.raises(FieldError):
        FieldSpec(66)
    with pytest.raises(ValueError):
        make_field(0)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
def test_axioms_exhaustive_small(m):
    f = FieldSpec(m)
    els = np.arange(f.size, dtype=f.dtype)
    a, b = np.meshgrid(els, els)
    prod = f.vmul(a, b)
    assert np.array_equal(prod, prod.T)  # commutative
    assert np.all(f.vmul(els, np.ones_like(els)) == els)
    for x in range(0, f.size, max(1, f.size // 16)):
        for y in range(f.size):
            assert prod[y, x] == naive_mul(x, y, f.reduction, m)
    c = els[::-1]
    assert np.array_equal(f.vmul(a, b ^ c[:, None]), prod ^ f.vmul(a, np.broadcast_to(c[:, None], a.shape)))


@pytest.mark.parametrize("m", range(2, 17, 2))
def test_trace_kernel_and_inverse_exhaustive(m):
    f = FieldSpec(m)
    els = np.arange(f.size, dtype=f.dtype)
    tr = f.vtrace(els)
    assert int(np.count_nonzero(tr == 0)) == f.size // 2
    # trace is additive and lands in F_2
    assert set(np.unique(tr).tolist()) == {0, 1}
    nz = els[1:]
    assert np.all(f.vmul(nz, f.vinv(nz)) == 1)
    # Artin-Schreier solutions exactly on the trace-0 kernel
    ok = els[tr == 0]
    r = f.vsolve_as(ok)
    assert np.array_equal(f.vsquare(r) ^ r, ok)
    assert np.all((r & 1) == 0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(EVEN_M), st.data())
def test_scalar_axioms(m, data):
    f = FieldSpec(m)
    a, b, c = (data.draw(st.integers(0, f.size - 1)) for _ in range(3))
    assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
    assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)
    assert f.mul(a, b) == polymod(clmul(a, b), f.reduction)
    assert f.square(a) == f.mul(a, a)
    assert f.square(f.sqrt(a)) == a
    assert f.trace(a ^ b) == f.trace(a) ^ f.trace(b)
    assert f.trace(f.square(a)) == f.trace(a)
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.size - 1) == 1
    y = f.solve_as(a)
    if f.trace(a):
        assert y is None
    else:
        assert f.mul(y, y) ^ y == a


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([26, 28, 32]), st.lists(st.integers(0, 2**26 - 1), min_size=1, max_size=20))
def test_untabled_vector_ops_match_scalar(m, xs):
    f = FieldSpec(m)
    a = np.array(xs, dtype=f.dtype)
    b = a[::-1].copy()
    assert f.vmul(a, b).tolist() == [f.mul(x, y) for x, y in zip(xs, reversed(xs))]
    nz = a[a != 0]
    if len(nz):
        assert f.vinv(nz).tolist() == [f.inv(int(x)) for x in nz]


@pytest.mark.parametrize("k", [2, 3, 5, 8, 11])
def test_table_and_clmul_paths_agree(k):
    f = make_field(k)
    rng = np.random.default_rng(k)
    a = rng.integers(0, f.size, 5000).astype(f.dtype)
    b = rng.integers(0, f.size, 5000).astype(f.dtype)
    assert np.array_equal(f.vmul(a, b), f.vclmul_reduce(a, b))


def test_vinv_zero_raises():
    with pytest.raises(ZeroDivisionError):
        make_field(2).vinv(np.array([1, 0], dtype=np.uint32))


def test_fingerprint_distinguishes_reduction():
    alt = FieldSpec(4, 0b11001)  # x^4+x^3+1, also irreducible
    assert alt.fingerprint != FieldSpec(4).fingerprint
    with pytest.raises(FieldError):
        FieldSpec(4, 0b10101)
