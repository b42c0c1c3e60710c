from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from carnotkit.catalog import vandermonde
from carnotkit.ratlin import (
    DimensionError,
    Mat,
    complement_in,
    det,
    full_space,
    intersect,
    inverse,
    kernel,
    q,
    rank,
    rref,
    solve_linear,
    span,
    subspace_sum,
    unit_vec,
    zero_space,
)

small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def e(n, i):
    return unit_vec(n, i)


def test_rref_rank_one():
    m, piv = rref(Mat([[2, 4], [1, 2]]))
    assert m == Mat([[1, 2], [0, 0]]) and piv == [0]


def test_rref_identity():
    m, piv = rref(Mat.identity(3))
    assert m == Mat.identity(3) and piv == [0, 1, 2]


def test_rref_vandermonde_pair():
    m, piv = rref(Mat([[1, 1], [1, -1]]))
    assert m == Mat.identity(2) and piv == [0, 1]


def test_sum_and_intersect_examples():
    assert subspace_sum(span([e(2, 0)], 2), span([e(2, 1)], 2)) == full_space(2)
    a = span([e(3, 0), e(3, 1)], 3)
    b = span([e(3, 1), e(3, 2)], 3)
    assert intersect(a, b) == span([e(3, 1)], 3)


def test_complement_example():
    c = complement_in(span([e(2, 0)], 2), full_space(2))
    assert c == span([e(2, 1)], 2)


def test_complement_requires_containment():
    with pytest.raises(ValueError):
        complement_in(span([e(2, 0)], 2), span([e(2, 1)], 2))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        subspace_sum(zero_space(2), zero_space(3))


def test_solve_homogeneous_line():
    sol = solve_linear(Mat([[1, 1]]), [0])
    assert sol.particular == (0, 0)
    assert span(sol.kernel, 2) == span([(1, -1)], 2)


def test_solve_inconsistent():
    assert solve_linear(Mat([[1, 1], [1, 1]]), [0, 1]) is None


def test_vandermonde_012_transpose_kernel():
    v = vandermonde([0, 1, 2])
    assert det(v) == 2
    assert kernel(v.T) == []


def test_floats_rejected():
    with pytest.raises(TypeError):
        q(0.5)


@given(small, st.integers(1, 5), small, st.integers(1, 5))
def test_fraction_round_trip(p, qq, r, s):
    a, b = Fraction(p, qq), Fraction(r, s)
    assert (a + b) - b == a


@given(matrices())
def test_rref_idempotent_and_row_space(rows):
    m = Mat(rows)
    r1, piv = rref(m)
    r2, piv2 = rref(r1)
    assert r1 == r2 and piv == piv2
    assert span(m.entries, m.cols) == span(r1.entries, m.cols)


@given(matrices(), st.randoms(use_true_random=False))
def test_equal_spans_have_identical_bases(rows, rnd):
    m = Mat(rows)
    base = span(m.entries, m.cols)
    # random invertible row operations keep the span
    mixed = [list(r) for r in m.entries]
    for _ in range(4):
        i, j = rnd.randrange(len(mixed)), rnd.randrange(len(mixed))
        if i != j:
            c = Fraction(rnd.randint(-2, 2), rnd.randint(1, 3))
            mixed[i] = [x + c * y for x, y in zip(mixed[i], mixed[j])]
    assert span(mixed, m.cols).basis == base.basis


@given(matrices(4, 5), matrices(4, 5))
def test_dimension_formula(r1, r2):
    n = 5
    a = span([row + [0] * (n - len(row)) for row in r1], n)
    b = span([row + [0] * (n - len(row)) for row in r2], n)
    assert subspace_sum(a, b).dim + intersect(a, b).dim == a.dim + b.dim
    assert intersect(a, b) <= a and a <= subspace_sum(a, b)


@given(matrices())
def test_rank_nullity(rows):
    m = Mat(rows)
    ker = kernel(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(matrices(4, 4), matrices(4, 4))
def test_complement_is_direct(r1, r2):
    n = 4
    a = span([row + [0] * (n - len(row)) for row in r1], n)
    b = subspace_sum(a, span([row + [0] * (n - len(row)) for row in r2], n))
    c = complement_in(a, b)
    assert intersect(a, c).dim == 0 and subspace_sum(a, c) == b


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_when_invertible(rows):
    m = Mat(rows)
    if det(m) == 0:
        assert rank(m) < m.rows
        with pytest.raises(ZeroDivisionError):
            inverse(m)
    else:
        assert m @ inverse(m) == Mat.identity(m.rows)
