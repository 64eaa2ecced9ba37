from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from intdiffops.linalg import (
    BlockSystem,
    Mat,
    column_space_basis,
    complete_basis,
    det,
    in_span,
    invert,
    kernel_basis,
    kron,
    rank,
    rref,
    solve_linear,
    unvec,
    vec,
)
from intdiffops.scalars import ONE, ZERO, Scalar

entries = st.fractions(min_value=-20, max_value=20, max_denominator=6).map(Scalar)


def mats(rows, cols):
    return st.lists(
        st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows
    ).map(lambda d: Mat(rows, cols, d))


square = st.integers(1, 4).flatmap(lambda n: mats(n, n))
rect = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: mats(s[0], s[1])
)


@given(rect)
@settings(max_examples=60)
def test_rref_idempotent_and_rank(A):
    R, piv = rref(A)
    R2, piv2 = rref(R)
    assert R == R2 and piv == piv2
    assert len(piv) == rank(A)


@given(rect)
@settings(max_examples=60)
def test_kernel_annihilated(A):
    for v in kernel_basis(A):
        assert (A @ v).is_zero()
    assert len(kernel_basis(A)) == A.cols - rank(A)


@given(rect)
@settings(max_examples=60)
def test_solve_consistency(A):
    # A times a fixed vector must be solvable, and the solution must work
    x = Mat.col_vector([Scalar(j + 1) for j in range(A.cols)])
    b = A @ x
    sol = solve_linear(A, b)
    assert sol is not None
    assert (A @ sol.particular) == b
    for k in sol.kernel:
        assert (A @ k).is_zero()


@given(square)
@settings(max_examples=60)
def test_invert_det(A):
    inv = invert(A)
    d = det(A)
    if inv is None:
        assert d.is_zero()
    else:
        assert not d.is_zero()
        assert (A @ inv).is_identity()
        assert (inv @ A).is_identity()


@given(mats(3, 2), mats(2, 4))
@settings(max_examples=40)
def test_vec_kron(A, B):
    X = Mat(2, 2, [[Scalar(1), Scalar(2)], [Scalar(-1), Scalar(3)]])
    lhs = vec(A @ X @ B)
    rhs = kron(B.transpose(), A) @ vec(X)
    assert lhs == rhs
    assert unvec(vec(X), 2, 2) == X


def test_column_space_and_span():
    cols = [Mat.col_vector([Scalar(1), Scalar(0)]), Mat.col_vector([Scalar(2), Scalar(0)])]
    basis = column_space_basis(cols, 2)
    assert len(basis) == 1
    assert in_span(Mat.col_vector([Scalar(5), Scalar(0)]), basis)
    assert not in_span(Mat.col_vector([Scalar(0), Scalar(1)]), basis)


def test_complete_basis():
    B = Mat(3, 1, [[Scalar(1)], [Scalar(1)], [Scalar(0)]])
    extra = complete_basis(B)
    assert extra.cols == 2
    assert rank(B.hstack(extra)) == 3


def test_block_system_sylvester():
    # X with A X = X A for A a Jordan cell: polynomials in A (dim 2)
    A = Mat(2, 2, [[Scalar(3), Scalar(1)], [Scalar(0), Scalar(3)]])
    sys = BlockSystem()
    sys.add_unknown("X", 2, 2)
    sys.add_equation([("X", A, None, 1), ("X", None, A, -1)])
    sol = sys.solve()
    assert sol is not None
    _, kern = sol
    assert len(kern) == 2
    for k in kern:
        X = k["X"]
        assert (A @ X) == (X @ A)


def test_block_system_inhomogeneous():
    A = Mat(2, 2, [[Scalar(1), Scalar(2)], [Scalar(0), Scalar(1)]])
    sys = BlockSystem()
    sys.add_unknown("X", 2, 2)
    sys.add_equation([("X", A, None, 1)], Mat.identity(2))
    part, _ = sys.solve()
    assert (A @ part["X"]).is_identity()


def test_block_system_inconsistent():
    Z = Mat.zero(2, 2)
    sys = BlockSystem()
    sys.add_unknown("X", 2, 2)
    sys.add_equation([("X", Z, None, 1)], Mat.identity(2))
    assert sys.solve() is None
