"""Exact dense linear algebra over QQi: rref, rank, kernels, solving.

Matrices are small (symbol maps, delta maps, Gram matrices), so plain
fraction-free-ish Gaussian elimination on Fraction pairs is fast enough and
keeps every rank and dimension claim exact.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import QQi


class ExactMatrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols=None):
        self.data = [[QQi.of(x) for x in row] for row in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
            if any(len(r) != self.cols for r in self.data):
                raise ValueError("ragged matrix")
        else:
            self.cols = 0 if cols is None else cols

    @classmethod
    def zero(cls, rows, cols):
        return cls([[QQi(0)] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n):
        return cls([[QQi(1 if i == j else 0) for j in range(n)] for i in range(n)])

    def copy_data(self):
        return [row[:] for row in self.data]

    def transpose(self):
        return ExactMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                s = QQi(0)
                for k in range(self.cols):
                    a = self.data[i][k]
                    if a:
                        s = s + a * other.data[k][j]
                row.append(s)
            out.append(row)
        return ExactMatrix(out, cols=other.cols)

    def is_zero(self):
        return all(not x for row in self.data for x in row)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"

    # -- elimination -----------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (rows, pivot column list)."""
        m = self.copy_data()
        pivots = []
        r = 0
        for c in range(self.cols):
            pr = None
            for i in range(r, self.rows):
                if m[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = QQi(1) / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel {v : A v = 0}; count = cols - rank."""
        m, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [QQi(0)] * self.cols
            v[fc] = QQi(1)
            for r, pc in enumerate(pivots):
                v[pc] = -m[r][fc]
            basis.append(v)
        return basis

    def row_space_basis(self):
        m, pivots = self.rref()
        return [m[i] for i in range(len(pivots))]

    def solve_right(self, b):
        """One solution of A x = b, or None if inconsistent."""
        aug = [row[:] + [QQi.of(bv)] for row, bv in zip(self.data, b)]
        m, pivots = ExactMatrix(aug, cols=self.cols + 1).rref()
        for row in m:
            if not any(row[:-1]) and row[-1]:
                return None
        x = [QQi(0)] * self.cols
        for r, pc in enumerate(pivots):
            if pc == self.cols:
                return None
            x[pc] = m[r][-1]
        return x

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        m = self.copy_data()
        n = self.rows
        det = QQi(1)
        for c in range(n):
            pr = None
            for i in range(c, n):
                if m[i][c]:
                    pr = i
                    break
            if pr is None:
                return QQi(0)
            if pr != c:
                m[c], m[pr] = m[pr], m[c]
                det = -det
            det = det * m[c][c]
            inv = QQi(1) / m[c][c]
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det


def solve_in_span(basis_rows, target):
    """Coordinates of target in span(basis_rows), or None.

    basis_rows: list of coefficient vectors (rows); target: vector.
    """
    if not basis_rows:
        return [] if not any(QQi.of(t) for t in target) else None
    a = ExactMatrix(basis_rows).transpose()
    return a.solve_right(target)


class SpanSolver:
    """Repeated coordinate solves against one fixed independent basis.

    Precomputes rref([B | I]) so each solve is a single reduction pass.
    """

    def __init__(self, basis_rows):
        self.k = len(basis_rows)
        if self.k == 0:
            self.dim = None
            return
        self.dim = len(basis_rows[0])
        aug = [
            [QQi.of(x) for x in row]
            + [QQi(1 if i == j else 0) for j in range(self.k)]
            for i, row in enumerate(basis_rows)
        ]
        m, pivots = ExactMatrix(aug, cols=self.dim + self.k).rref()
        if len(pivots) != self.k or any(p >= self.dim for p in pivots):
            raise ValueError("basis rows are not independent")
        self.reduced = m[: self.k]
        self.pivots = pivots

    def coords(self, target):
        """Coefficients c with sum c_i * basis_i = target, or None."""
        if self.k == 0:
            return [] if not any(QQi.of(t) for t in target) else None
        resid = [QQi.of(t) for t in target]
        c_reduced = [QQi(0)] * self.k
        for i, p in enumerate(self.pivots):
            c = resid[p]
            if c:
                c_reduced[i] = c
                row = self.reduced[i]
                for j in range(self.dim):
                    if row[j]:
                        resid[j] = resid[j] - c * row[j]
        if any(resid):
            return None
        out = [QQi(0)] * self.k
        for i, c in enumerate(c_reduced):
            if c:
                row = self.reduced[i]
                for j in range(self.k):
                    t = row[self.dim + j]
                    if t:
                        out[j] = out[j] + c * t
        return out


def annihilator_basis(basis_rows, dim):
    """Basis of functionals vanishing on span(basis_rows) inside QQi^dim."""
    if not basis_rows:
        return [[QQi(1 if i == j else 0) for j in range(dim)] for i in range(dim)]
    return ExactMatrix(basis_rows).kernel_basis()


def gram_is_positive_definite(gram):
    """Sylvester criterion on an exact symmetric matrix (real entries)."""
    n = gram.rows
    for k in range(1, n + 1):
        minor = ExactMatrix([row[:k] for row in gram.data[:k]])
        d = minor.det()
        if not d.is_real or d.re <= 0:
            return False
    return True


def fraction_matrix(rows):
    return ExactMatrix([[Fraction(x) for x in row] for row in rows])
