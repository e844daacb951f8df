from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from periodmotives.numfield import (
    Lattice,
    Matrix,
    NumberField,
    FieldError,
    DimensionError,
    exact_solve,
    hnf,
    inverse,
    rank,
    saturate,
    snf,
)


def M(rows):
    return Matrix(rows, len(rows), len(rows[0]) if rows else 0)


def small_matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    ).map(M)


# -- examples ----------------------------------------------------------------


def test_hnf_examples():
    assert hnf(M([[2, 4], [0, 0]])) == M([[2, 0], [0, 0]])
    assert hnf(Matrix.identity(3)) == Matrix.identity(3)
    assert hnf(M([[0]])) == M([[0]])


def test_snf_examples():
    _, D, _ = snf(M([[2, 0], [0, 3]]))
    assert D == M([[1, 0], [0, 6]])
    _, D, _ = snf(M([[0, 0], [0, 0]]))
    assert D.is_zero()
    _, D, _ = snf(M([[6]]))
    assert D == M([[6]])


def test_exact_solve_examples():
    sol = exact_solve(Matrix.identity(2), M([[1], [2]]))
    assert sol.particular == M([[1], [2]]) and sol.kernel == []
    sol = exact_solve(M([[1, 1]]), M([[0]]))
    (k,) = sol.kernel
    assert k[0] == -k[1] != 0
    sol = exact_solve(M([[2, 4], [1, 2]]), M([[2], [1]]))
    assert sol.particular == M([[1], [0]])
    (k,) = sol.kernel
    assert Fraction(k[0]) / Fraction(k[1]) == -2


def test_exact_solve_inconsistent_and_mismatch():
    sol = exact_solve(M([[1, 1], [1, 1]]), M([[0], [1]]))
    assert not sol.consistent
    with pytest.raises(DimensionError):
        exact_solve(M([[1, 1]]), M([[0], [1]]))


def test_saturate_examples():
    L = saturate([(Fraction(1, 2), Fraction(1, 2))], 2)
    assert L.vectors() == [(1, 1)]
    assert saturate([(1, 0), (0, 1)], 2) == Lattice.standard(2)
    assert saturate([], 2).rank == 0


def test_inverse_singular():
    with pytest.raises(ZeroDivisionError):
        inverse(M([[1, 2], [2, 4]]))


def test_lattice_membership_and_index():
    L = Lattice([(2, 0), (0, 3)], 2)
    assert L.contains((4, -3)) and not L.contains((1, 0))
    assert not L.is_saturated() and L.index_in_saturation() == 6


def test_number_field_arithmetic():
    K = NumberField([-2, 0, 1], name="s")
    s = K.gen()
    assert s * s == K(2)
    assert (1 + s) * (s - 1) == K(1)
    assert (1 + s).inverse() == s - 1


def test_reducible_minpoly_rejected():
    with pytest.raises(FieldError):
        NumberField([-4, 0, 1])
    with pytest.raises(FieldError):
        NumberField([1, 0, 2, 0, 1])  # (x^2+1)^2


# -- properties --------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(small_matrices())
def test_hnf_idempotent_same_span(A):
    H = hnf(A)
    assert hnf(H) == H
    assert H.shape == A.shape
    LA = Lattice([c for c in A.columns() if any(c)], A.nrows)
    LH = Lattice([c for c in H.columns() if any(c)], A.nrows)
    assert LA == LH


@settings(max_examples=100, deadline=None)
@given(small_matrices())
def test_snf_chain_and_transform(A):
    U, D, V = snf(A)
    assert U @ A @ V == D
    diag = [D[i, i] for i in range(min(D.shape))]
    assert all(d >= 0 for d in diag)
    for i in range(D.nrows):
        for j in range(D.ncols):
            if i != j:
                assert D[i, j] == 0
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    assert snf(D)[1] == D


@settings(max_examples=200, deadline=None)
@given(small_matrices(5, 5, -4, 4))
def test_kernel_dimension_plus_rank(A):
    sol = exact_solve(A, Matrix.zeros(A.nrows, 1))
    assert len(sol.kernel) + rank(A) == A.ncols
    for k in sol.kernel:
        assert all(sum(A[i, j] * k[j] for j in range(A.ncols)) == 0 for i in range(A.nrows))


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(fractions, min_size=n, max_size=n), max_size=3)))
def test_saturate_span_equality(vectors):
    n = len(vectors[0]) if vectors else 1
    L = saturate(vectors, n)
    assert L.is_saturated()
    W = [v for v in vectors]
    rank_W = rank(Matrix(W, len(W), n)) if W else 0
    assert L.rank == rank_W
    if W:
        # every lattice vector lies in span(W), so stacking does not raise the rank
        stacked = W + [tuple(map(Fraction, v)) for v in L.vectors()]
        assert rank(Matrix(stacked, len(stacked), n)) == rank_W
