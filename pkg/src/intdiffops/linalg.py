"""Exact dense linear algebra over Q / Q(i).

Matrices carry explicit (rows, cols) so zero-dimensional spaces (which occur
as weight spaces outside a module's support) are handled uniformly.

Elimination uses a fixed pivot rule -- leftmost nonzero column, then smallest
row index -- so every reduction is reproducible.  The forward pass clears row
denominators and runs fraction-free (Bareiss) condensation to keep
intermediate entries integral.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .scalars import ONE, ZERO, Scalar


class Mat:
    """Immutable-by-convention dense matrix of Scalars."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[ZERO] * cols for _ in range(rows)]
        else:
            if len(data) != rows:
                raise ValueError("row count mismatch")
            self.data = [[Scalar.of(x) for x in row] for row in data]
            for row in self.data:
                if len(row) != cols:
                    raise ValueError("column count mismatch")

    @staticmethod
    def identity(n: int) -> "Mat":
        m = Mat(n, n)
        for i in range(n):
            m.data[i][i] = ONE
        return m

    @staticmethod
    def zero(rows: int, cols: int) -> "Mat":
        return Mat(rows, cols)

    @staticmethod
    def from_rows(rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of empty matrix")
            cols = len(rows[0])
        return Mat(len(rows), cols, rows)

    @staticmethod
    def col_vector(entries: Sequence) -> "Mat":
        return Mat(len(entries), 1, [[x] for x in entries])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> List[Scalar]:
        return list(self.data[i])

    def col(self, j: int) -> List[Scalar]:
        return [self.data[i][j] for i in range(self.rows)]

    def copy(self) -> "Mat":
        return Mat(self.rows, self.cols, [row[:] for row in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = Mat(self.rows, other.cols)
        for i in range(self.rows):
            arow = self.data[i]
            orow = out.data[i]
            for k in range(self.cols):
                a = arow[k]
                if a.is_zero():
                    continue
                brow = other.data[k]
                for j in range(other.cols):
                    if not brow[j].is_zero():
                        orow[j] = orow[j] + a * brow[j]
        return out

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(
            self.rows,
            self.cols,
            [
                [self.data[i][j] + other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(
            self.rows,
            self.cols,
            [
                [self.data[i][j] - other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __neg__(self) -> "Mat":
        return self.scale(Scalar(-1))

    def scale(self, c) -> "Mat":
        c = Scalar.of(c)
        return Mat(
            self.rows,
            self.cols,
            [[c * x for x in row] for row in self.data],
        )

    def transpose(self) -> "Mat":
        return Mat(
            self.cols,
            self.rows,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.data for x in row)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.data[i][j] == (ONE if i == j else ZERO)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.shape == other.shape
            and all(
                self.data[i][j] == other.data[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        if self.rows == 0 or self.cols == 0:
            return f"Mat({self.rows}x{self.cols})"
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Mat[{body}]"

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        t = ZERO
        for i in range(self.rows):
            t = t + self.data[i][i]
        return t

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise ValueError("hstack row mismatch")
        return Mat(
            self.rows,
            self.cols + other.cols,
            [self.data[i] + other.data[i] for i in range(self.rows)],
        )

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError("vstack column mismatch")
        return Mat(self.rows + other.rows, self.cols, self.data + other.data)

    def _same_shape(self, other: "Mat"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


def _clear_row_denominators(row: List[Scalar]) -> List[Scalar]:
    lcm = 1
    for x in row:
        for part in (x.re, x.im):
            d = part.denominator
            if d != 1:
                lcm = lcm * d // _gcd(lcm, d)
    if lcm == 1:
        return row
    c = Scalar(lcm)
    return [c * x for x in row]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _echelon_int(rows: List[List[int]], ncols: int):
    """Integer forward elimination with content reduction.

    Row scales are irrelevant to the row space, so each eliminated row is
    divided by the gcd of its entries; that gcd always contains the usual
    fraction-free divisor, and untouched rows keep their sparsity.  Pivot
    rows are chosen sparsest-first, which does not change the (unique)
    reduced echelon form computed from the output.
    """
    from math import gcd

    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        pr = None
        best = None
        for i in range(r, nrows):
            if rows[i][c]:
                nz = sum(1 for v in rows[i] if v)
                if best is None or nz < best:
                    best, pr = nz, i
                    if nz == 1:
                        break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        piv = prow[c]
        for i in range(r + 1, nrows):
            head = rows[i][c]
            if not head:
                continue
            row = rows[i]
            new = [piv * row[j] - head * prow[j] for j in range(ncols)]
            g = 0
            for v in new:
                if v:
                    g = gcd(g, v)
                    if g == 1:
                        break
            if g > 1:
                new = [v // g for v in new]
            rows[i] = new
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    return rows, pivots


def _echelon(rows: List[List[Scalar]], ncols: int):
    """Fraction-free forward elimination; returns (rows, pivots).

    pivots is a list of (row, col) in elimination order.  Input rows are
    modified in place (pass copies).
    """
    rows = [_clear_row_denominators(r) for r in rows]
    if all(x.im == 0 for row in rows for x in row):
        int_rows = [[x.re.numerator for x in row] for row in rows]
        out, pivots = _echelon_int(int_rows, ncols)
        return [[Scalar(v) for v in row] for row in out], pivots
    pivots = []
    r = 0
    prev = ONE
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, len(rows)):
            head = rows[i][c]
            if head.is_zero() and prev.is_one():
                continue
            rows[i] = [
                (piv * rows[i][j] - head * rows[r][j]) / prev for j in range(ncols)
            ]
        pivots.append((r, c))
        prev = piv
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _rref_int(rows: List[List[int]], ncols: int):
    """Reduced echelon form over the integers (rows scaled, pivots last)."""
    from fractions import Fraction
    from math import gcd

    rows, pivots = _echelon_int(rows, ncols)
    for r, c in reversed(pivots):
        prow = rows[r]
        piv = prow[c]
        for i in range(r):
            f = rows[i][c]
            if not f:
                continue
            row = rows[i]
            new = [piv * row[j] - f * prow[j] for j in range(ncols)]
            g = 0
            for v in new:
                if v:
                    g = gcd(g, v)
                    if g == 1:
                        break
            if g > 1:
                new = [v // g for v in new]
            rows[i] = new
    out = []
    piv_iter = dict(pivots)
    for r, row in enumerate(rows):
        piv = row[piv_iter[r]] if r in piv_iter else None
        if piv is None:
            out.append([Scalar(v) for v in row])
        else:
            out.append([Scalar(Fraction(v, piv)) for v in row])
    return out, pivots


def rref(matrix: Mat):
    """Reduced row echelon form; returns (Mat, pivot_columns)."""
    rows = [_clear_row_denominators(row[:]) for row in matrix.data]
    if all(x.im == 0 for row in rows for x in row):
        int_rows = [[x.re.numerator for x in row] for row in rows]
        out, pivots = _rref_int(int_rows, matrix.cols)
        return Mat(matrix.rows, matrix.cols, out), [c for _, c in pivots]
    rows, pivots = _echelon(rows, matrix.cols)
    # normalize pivots to 1 and back-eliminate
    for r, c in pivots:
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
    for r, c in reversed(pivots):
        for i in range(r):
            f = rows[i][c]
            if not f.is_zero():
                rows[i] = [rows[i][j] - f * rows[r][j] for j in range(matrix.cols)]
    return Mat(matrix.rows, matrix.cols, rows), [c for _, c in pivots]


def rank(matrix: Mat) -> int:
    _, pivots = _echelon([row[:] for row in matrix.data], matrix.cols)
    return len(pivots)


def kernel_basis(matrix: Mat) -> List[Mat]:
    """Basis of {x : A x = 0} as column vectors, deterministic order."""
    R, piv_cols = rref(matrix)
    piv_set = set(piv_cols)
    free = [c for c in range(matrix.cols) if c not in piv_set]
    basis = []
    for fc in free:
        v = [ZERO] * matrix.cols
        v[fc] = ONE
        for r, c in zip(range(len(piv_cols)), piv_cols):
            v[c] = -R.data[r][fc]
        basis.append(Mat.col_vector(_normalize_content(v)))
    return basis


def _normalize_content(v: List[Scalar]) -> List[Scalar]:
    """Scale a rational vector to coprime integers; vectors with complex
    entries are left as they are."""
    if any(x.im != 0 for x in v):
        return v
    lcm = 1
    for x in v:
        d = x.re.denominator
        if d != 1:
            lcm = lcm * d // _gcd(lcm, d)
    ints = [int(x.re * lcm) for x in v]
    g = 0
    for u in ints:
        if u:
            g = _gcd(g, abs(u))
            if g == 1:
                break
    if g > 1:
        ints = [u // g for u in ints]
    return [Scalar(u) for u in ints]


class LinearSolution:
    """Solution set of A x = b: a particular solution plus kernel basis."""

    def __init__(self, particular: Mat, kernel: List[Mat]):
        self.particular = particular
        self.kernel = kernel

    @property
    def unique(self) -> bool:
        return not self.kernel


def solve_linear(A: Mat, b: Mat) -> Optional[LinearSolution]:
    """Solve A x = b exactly; None when inconsistent.

    b must be a column vector with A.rows entries.
    """
    if b.rows != A.rows or b.cols != 1:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b is {b.shape}")
    aug = A.hstack(b)
    R, piv_cols = rref(aug)
    if A.cols in piv_cols:
        return None
    x = [ZERO] * A.cols
    for r, c in zip(range(len(piv_cols)), piv_cols):
        x[c] = R.data[r][A.cols]
    return LinearSolution(Mat.col_vector(x), kernel_basis(A))


def column_space_basis(columns: Iterable[Mat], dim: int) -> List[Mat]:
    """Deterministic basis of the span of the given column vectors."""
    cols = list(columns)
    if not cols:
        return []
    stacked = Mat(dim, len(cols), [[c.data[i][0] for c in cols] for i in range(dim)])
    _, piv = rref(stacked)
    return [cols[j] for j in piv]


def in_span(vec: Mat, basis: List[Mat]) -> bool:
    if not basis:
        return vec.is_zero()
    dim = vec.rows
    A = Mat(dim, len(basis), [[b.data[i][0] for b in basis] for i in range(dim)])
    return solve_linear(A, vec) is not None


def invert(matrix: Mat) -> Optional[Mat]:
    """Exact inverse, or None if singular."""
    if matrix.rows != matrix.cols:
        return None
    n = matrix.rows
    R, piv = rref(matrix.hstack(Mat.identity(n)))
    if piv[: n] != list(range(n)) if len(piv) >= n else True:
        if len(piv) < n or piv[:n] != list(range(n)):
            return None
    return Mat(n, n, [row[n:] for row in R.data])


def kron(A: Mat, B: Mat) -> Mat:
    """Kronecker product A (x) B."""
    out = Mat(A.rows * B.rows, A.cols * B.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            a = A.data[i][j]
            if a.is_zero():
                continue
            for p in range(B.rows):
                for q in range(B.cols):
                    b = B.data[p][q]
                    if not b.is_zero():
                        out.data[i * B.rows + p][j * B.cols + q] = a * b
    return out


def vec(M: Mat) -> Mat:
    """Column-major vectorization."""
    return Mat.col_vector([M.data[i][j] for j in range(M.cols) for i in range(M.rows)])


def unvec(v: Mat, rows: int, cols: int) -> Mat:
    if v.rows != rows * cols or v.cols != 1:
        raise ValueError("unvec shape mismatch")
    out = Mat(rows, cols)
    for j in range(cols):
        for i in range(rows):
            out.data[i][j] = v.data[j * rows + i][0]
    return out


class BlockSystem:
    """Linear system over several unknown matrices.

    Equations are sums of terms A @ X_name @ B = RHS, vectorized with
    vec(A X B) = (B^T (x) A) vec(X).  Unknown blocks may appear in several
    equations; solve() returns (particular, kernel) as dicts name -> Mat.
    """

    def __init__(self):
        self.shapes: Dict[str, Tuple[int, int]] = {}
        self.offsets: Dict[str, int] = {}
        self.total = 0
        self.rows: List[List[Scalar]] = []
        self.rhs: List[Scalar] = []

    def add_unknown(self, name: str, rows: int, cols: int):
        if name in self.shapes:
            if self.shapes[name] != (rows, cols):
                raise ValueError(f"unknown {name!r} redeclared with a new shape")
            return
        self.shapes[name] = (rows, cols)
        self.offsets[name] = self.total
        self.total += rows * cols

    def add_equation(self, terms, rhs: Mat | None = None):
        """terms: iterable of (name, A or None, B or None, sign)."""
        eq_shape = None
        built = []
        for name, A, B, sign in terms:
            r, c = self.shapes[name]
            if A is None:
                A = Mat.identity(r)
            if B is None:
                B = Mat.identity(c)
            if A.cols != r or B.rows != c:
                raise ValueError(f"term shape mismatch for {name!r}")
            shape = (A.rows, B.cols)
            if eq_shape is None:
                eq_shape = shape
            elif eq_shape != shape:
                raise ValueError("equation terms have mismatched shapes")
            coeff = kron(B.transpose(), A)
            if sign < 0:
                coeff = -coeff
            built.append((name, coeff))
        if eq_shape is None:
            return
        m = eq_shape[0] * eq_shape[1]
        if rhs is None:
            rvec = [ZERO] * m
        else:
            if rhs.shape != eq_shape:
                raise ValueError("rhs shape mismatch")
            rvec = [x[0] for x in vec(rhs).data]
        for row_i in range(m):
            row = [ZERO] * self.total
            for name, coeff in built:
                off = self.offsets[name]
                crow = coeff.data[row_i]
                w = self.shapes[name][0] * self.shapes[name][1]
                for j in range(w):
                    if not crow[j].is_zero():
                        row[off + j] = row[off + j] + crow[j]
            self.rows.append(row)
            self.rhs.append(rvec[row_i])

    def _unpack(self, flat: Mat) -> Dict[str, Mat]:
        out = {}
        for name, (r, c) in self.shapes.items():
            off = self.offsets[name]
            out[name] = unvec(
                Mat.col_vector([flat.data[off + j][0] for j in range(r * c)]), r, c
            )
        return out

    def solve(self):
        """Returns (particular, kernel_list) or None if inconsistent."""
        if self.total == 0:
            if any(not x.is_zero() for x in self.rhs):
                return None
            return {}, []
        if not self.rows:
            A = Mat.zero(1, self.total)
            b = Mat.zero(1, 1)
        else:
            A = Mat.from_rows(self.rows, self.total)
            b = Mat.col_vector(self.rhs)
        sol = solve_linear(A, b)
        if sol is None:
            return None
        return self._unpack(sol.particular), [self._unpack(k) for k in sol.kernel]


def complete_basis(B: Mat) -> Mat:
    """Standard basis columns extending the columns of B to a full basis."""
    n = B.rows
    cols = [Mat.col_vector([ONE if i == r else ZERO for i in range(n)]) for r in range(n)]
    chosen = []
    current = [Mat.col_vector(B.col(j)) for j in range(B.cols)]
    for c in cols:
        if len(current) == n:
            break
        if not in_span(c, current):
            current.append(c)
            chosen.append(c)
    if len(current) != n:
        raise ValueError("input columns were dependent")
    if not chosen:
        return Mat(n, 0)
    return Mat(n, len(chosen), [[v.data[i][0] for v in chosen] for i in range(n)])


def det(matrix: Mat) -> Scalar:
    if matrix.rows != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    if n == 0:
        return ONE
    rows = [row[:] for row in matrix.data]
    sign = ONE
    prev = ONE
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, n):
            if not rows[i][c].is_zero():
                pr = i
                break
        if pr is None:
            return ZERO
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
            sign = -sign
        piv = rows[r][c]
        for i in range(r + 1, n):
            head = rows[i][c]
            rows[i] = [(piv * rows[i][j] - head * rows[r][j]) / prev for j in range(n)]
        prev = piv
        r += 1
    return sign * prev
