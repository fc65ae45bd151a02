from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from symphodge.exact_linalg import (
    DimensionMismatch,
    Eliminator,
    NotASubspace,
    RatMatrix,
    Subspace,
    coset_representatives,
    determinant,
    image,
    kernel,
    membership,
    quotient_dim,
    rank,
    solve,
    to_dense,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    sparse = draw(st.booleans())
    entry = st.one_of(st.just(Fraction(0)), small) if sparse else small
    return [[draw(entry) for _ in range(c)] for _ in range(r)]


def sym(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])


def test_kernel_of_rank_one():
    K = kernel(RatMatrix.from_rows([[1, 2], [2, 4]]))
    assert K.dim == 1
    (v,) = K.dense_basis()
    assert v[0] + 2 * v[1] == 0 and v != [0, 0]


def test_solve_examples():
    assert solve(RatMatrix.from_rows([[1, 1], [0, 1]]), [3, 1]) == [2, 1]
    assert solve(RatMatrix.zero(2, 2), [1, 0]) is None
    assert solve(RatMatrix.zero(2, 2), [0, 0]) == [0, 0]
    with pytest.raises(DimensionMismatch):
        solve(RatMatrix.identity(2), [1, 2, 3])


def test_full_rank_kernel_is_zero():
    assert kernel(RatMatrix.identity(4)).dim == 0


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_and_kernel_against_sympy(rows):
    M = RatMatrix.from_rows(rows)
    S = sym(rows)
    assert rank(M) == S.rank()
    K = kernel(M)
    assert K.dim == M.cols - S.rank()
    for v in K.dense_basis():
        assert all(x == 0 for x in M.matvec(v))
    assert kernel(M, pivot="last").dim == K.dim
    assert image(M).dim == S.rank()


@settings(max_examples=80, deadline=None)
@given(matrices(), st.data())
def test_solve_against_sympy(rows, data):
    M = RatMatrix.from_rows(rows)
    b = [data.draw(small) for _ in range(M.rows)]
    x = solve(M, b)
    consistent = sym(rows).rank() == sym([row + [bi] for row, bi in zip(rows, b)]).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert M.matvec(x) == b


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_against_sympy(rows):
    assert determinant(rows) == Fraction(str(sym(rows).det()))


def test_membership_and_quotient():
    B = Subspace.span(3, [[1, 0, 0], [0, 1, 0]])
    A = Subspace.span(3, [[1, 1, 0]])
    assert membership(B, [2, -3, 0]) and not membership(B, [0, 0, 1])
    assert quotient_dim(A, B) == 1
    with pytest.raises(NotASubspace):
        quotient_dim(Subspace.span(3, [[0, 0, 1]]), B)
    with pytest.raises(DimensionMismatch):
        membership(B, [1, 2])


def test_coset_representatives():
    reps = coset_representatives([[1, 1, 0]], [[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    assert len(reps) == 1


def test_eliminator_relations_and_express():
    el = Eliminator()
    assert el.add({"a": 1, "b": 2}, "u") is None
    assert el.add({"b": 1}, "v") is None
    rel = el.add({"a": 2, "b": 7}, "w")
    # 2u + 3v - w = 0 up to scale
    assert rel == {"u": -2, "v": -3, "w": 1} or rel == {"u": 2, "v": 3, "w": -1}
    c = el.express({"a": 1, "b": 3})
    assert c == {"u": 1, "v": 1}
    assert el.express({"c": 1}) is None
    assert el.rank == 2
    assert el.residual({"a": 1, "b": 2}) == {}


def test_eliminator_pivot_strategies_agree_on_span():
    vecs = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}]
    for pivot in ("first", "last"):
        el = Eliminator(pivot)
        rels = [el.add(v, i) for i, v in enumerate(vecs)]
        assert el.rank == 2 and rels[2] is not None
    with pytest.raises(ValueError):
        Eliminator("middle")


def test_ratmatrix_roundtrip():
    rows = [[Fraction(1, 2), 0], [0, 3]]
    M = RatMatrix.from_rows(rows)
    assert M.to_dense() == rows
    assert to_dense(M.column(1), 2) == [0, 3]
    with pytest.raises(IndexError):
        RatMatrix(1, 1, {(2, 0): 1})
