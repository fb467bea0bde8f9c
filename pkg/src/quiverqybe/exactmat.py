"""Dense exact matrices over Q(q) and the Kronecker/braid algebra on them.

Rational matrices are stored as a numpy object array of Python ints over a
single positive common denominator; anything involving ``q`` falls back to
an object array of :class:`~quiverqybe.scalarring.Scalar`.  Both layouts
are kept in reduced form, so ``==`` is exact structural equality.

Tensor factors are flattened row-major: the pair ``(i, j)`` of a base of
dimension ``n`` sits at position ``i*n + j`` (0-based).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .scalarring import ONE, ZERO, PoleError, Scalar, as_scalar, evaluate_at

__all__ = [
    "ExactMatrix",
    "ShapeError",
    "ProportionalityError",
    "pair_index",
    "multiply",
    "kron",
    "tl_scalar",
    "rank_one_factor",
    "kron_proportionality",
    "braid_defect",
    "triple_kron_defect",
    "four_cycle_holds",
    "row_reduce",
    "vec",
]


class ShapeError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class ProportionalityError(ValueError):
    """The hypotheses of the Kronecker proportionality lemma fail."""


def pair_index(i: int, j: int, n: int) -> int:
    """0-based flat position of the tensor basis vector e_i (x) e_j."""
    return i * n + j


def _int_grid(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=object)
    return arr if shape is None else arr.reshape(shape)


class ExactMatrix:
    """Immutable dense matrix with exact entries in Q(q)."""

    __slots__ = ("_ints", "_den", "_cells")

    def __init__(self, rows: Sequence[Sequence] = ()):
        rows = [list(r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise ShapeError("ragged rows")
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cells = np.empty((nrows, ncols), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                cells[i, j] = as_scalar(v)
        self._set_cells(cells)

    # -- construction helpers ---------------------------------------------

    def _set_cells(self, cells: np.ndarray) -> None:
        if all(c.is_constant() for c in cells.flat):
            fracs = [c.to_fraction() for c in cells.flat]
            den = math.lcm(1, *(f.denominator for f in fracs))
            ints = _int_grid([f.numerator * (den // f.denominator) for f in fracs], cells.shape)
            self._set_ints(ints, den)
        else:
            self._ints = None
            self._den = None
            self._cells = cells

    def _set_ints(self, ints: np.ndarray, den: int) -> None:
        if ints.size:
            g = math.gcd(den, *ints.flat)
        else:
            g = den
        if g == 0:
            g = 1
        if g != 1:
            ints = ints // g
            den //= g
        if ints.size and not any(ints.flat):
            den = 1
        self._ints = ints
        self._den = den
        self._cells = None

    @classmethod
    def _from_ints(cls, ints: np.ndarray, den: int = 1) -> "ExactMatrix":
        m = object.__new__(cls)
        m._set_ints(ints, den)
        return m

    @classmethod
    def _from_cells(cls, cells: np.ndarray) -> "ExactMatrix":
        m = object.__new__(cls)
        m._set_cells(cells)
        return m

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return cls._from_ints(_int_grid(np.zeros((rows, cols), dtype=int).tolist()), 1)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._from_ints(_int_grid(np.eye(n, dtype=int).tolist()), 1)

    @classmethod
    def column(cls, values: Iterable) -> "ExactMatrix":
        return cls([[v] for v in values])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "ExactMatrix":
        """Matrix unit E_ij (0-based) of size n."""
        g = np.zeros((n, n), dtype=int)
        g[i, j] = 1
        return cls._from_ints(_int_grid(g.tolist()), 1)

    # -- shape and access ---------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self._ints if self._cells is None else self._cells).shape

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def is_rational(self) -> bool:
        return self._cells is None

    def __getitem__(self, key) -> Scalar:
        i, j = key
        if self._cells is None:
            return Scalar.from_fraction(Fraction(self._ints[i, j], self._den))
        return self._cells[i, j]

    def cells(self) -> np.ndarray:
        """Object array of Scalars (a fresh copy)."""
        if self._cells is not None:
            return self._cells.copy()
        out = np.empty(self.shape, dtype=object)
        den = self._den
        for idx, v in np.ndenumerate(self._ints):
            out[idx] = Scalar.from_fraction(Fraction(v, den)) if v else ZERO
        return out

    def tolist(self) -> list[list[Scalar]]:
        return self.cells().tolist()

    def fractions(self) -> list[list[Fraction]]:
        """Entries as Fractions; only valid for rational matrices."""
        if self._cells is not None:
            raise ValueError("matrix has entries involving q")
        den = self._den
        return [[Fraction(v, den) for v in row] for row in self._ints.tolist()]

    def is_zero(self) -> bool:
        if self._cells is None:
            return not any(self._ints.flat)
        return not any(c for c in self._cells.flat)

    def nonzero_positions(self) -> list[tuple[int, int]]:
        grid = self._ints if self._cells is None else self._cells
        return [idx for idx, v in np.ndenumerate(grid) if v]

    def first_nonzero(self) -> Optional[tuple[int, int]]:
        grid = self._ints if self._cells is None else self._cells
        for idx, v in np.ndenumerate(grid):
            if v:
                return tuple(int(k) for k in idx)
        return None

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    # -- equality -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self._cells is None and other._cells is None:
            return self._den == other._den and bool(np.all(self._ints == other._ints))
        if (self._cells is None) != (other._cells is None):
            return False
        return all(a == b for a, b in zip(self._cells.flat, other._cells.flat))

    def __hash__(self) -> int:
        return hash((self.shape, tuple(str(c) for c in self.cells().flat)))

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self) -> "ExactMatrix":
        if self._cells is None:
            return ExactMatrix._from_ints(-self._ints, self._den)
        return ExactMatrix._from_cells(-self._cells)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        if self._cells is None and other._cells is None:
            d = math.lcm(self._den, other._den)
            ints = self._ints * (d // self._den) + other._ints * (d // other._den)
            return ExactMatrix._from_ints(ints, d)
        return ExactMatrix._from_cells(self.cells() + other.cells())

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = as_scalar(c)
        if self._cells is None and c.is_constant():
            f = c.to_fraction()
            return ExactMatrix._from_ints(self._ints * f.numerator, self._den * f.denominator)
        cells = self.cells()
        out = np.empty(cells.shape, dtype=object)
        for idx, v in np.ndenumerate(cells):
            out[idx] = c * v if v else ZERO
        return ExactMatrix._from_cells(out)

    def __mul__(self, c) -> "ExactMatrix":
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "ExactMatrix":
        return self.scale(as_scalar(c).inverse())

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return multiply(self, other)

    def __pow__(self, k: int) -> "ExactMatrix":
        if not self.is_square() or k < 0:
            raise ShapeError("matrix powers need a square matrix and k >= 0")
        result = ExactMatrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    @property
    def T(self) -> "ExactMatrix":
        if self._cells is None:
            return ExactMatrix._from_ints(self._ints.T.copy(), self._den)
        return ExactMatrix._from_cells(self._cells.T.copy())

    def trace(self) -> Scalar:
        total = ZERO
        for i in range(min(self.shape)):
            total = total + self[i, i]
        return total

    def submatrix(self, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        if self._cells is None:
            return ExactMatrix._from_ints(self._ints[np.ix_(rows, cols)].copy(), self._den)
        return ExactMatrix._from_cells(self._cells[np.ix_(rows, cols)].copy())

    def evaluate_at(self, q0) -> "ExactMatrix":
        """Entrywise substitution q -> q0; raises PoleError at a pole."""
        if self._cells is None:
            return self
        out = np.empty(self.shape, dtype=object)
        for idx, v in np.ndenumerate(self._cells):
            out[idx] = Scalar.from_fraction(evaluate_at(v, q0))
        return ExactMatrix._from_cells(out)

    def rank(self) -> int:
        _, pivots = row_reduce(self._field_rows())
        return len(pivots)

    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise ShapeError("only square matrices are invertible")
        n = self.rows
        rows = self._field_rows()
        one, zero = (Fraction(1), Fraction(0)) if self._cells is None else (ONE, ZERO)
        aug = [r + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
        red, pivots = row_reduce(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix([r[n:] for r in red[:n]])

    def _field_rows(self) -> list[list]:
        if self._cells is None:
            return self.fractions()
        return [list(r) for r in self._cells.tolist()]

    # -- I/O ----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(c) for c in row] for row in self.tolist()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExactMatrix":
        entries = data["entries"]
        m = cls([[str(v) if not isinstance(v, str) else v for v in row] for row in entries])
        rows = data.get("rows", m.rows)
        cols = data.get("cols", m.cols)
        if (rows, cols) != m.shape and not (rows == 0 or cols == 0):
            raise ShapeError(f"declared shape {(rows, cols)} but entries give {m.shape}")
        return m

    def __repr__(self) -> str:
        return f"ExactMatrix({[[str(c) for c in row] for row in self.tolist()]})"

    def __str__(self) -> str:
        rows = [[str(c) for c in row] for row in self.tolist()]
        if not rows:
            return "[]"
        width = max(len(s) for row in rows for s in row)
        return "\n".join("[" + "  ".join(s.rjust(width) for s in row) + "]" for row in rows)


def row_reduce(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over any exact field.

    Works for Fractions and Scalars alike.  Returns the nonzero reduced rows
    (pivot entries equal to one) and the list of pivot columns.
    """
    work = [list(r) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(work)) if work[k][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        lead = work[r][col]
        if lead != 1:
            inv = 1 / lead
            work[r] = [x * inv if x else x for x in work[r]]
        prow = work[r]
        for k in range(len(work)):
            if k != r:
                f = work[k][col]
                if f:
                    work[k] = [x - f * y if y else x for x, y in zip(work[k], prow)]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def multiply(m1: ExactMatrix, m2: ExactMatrix) -> ExactMatrix:
    """Exact matrix product."""
    if m1.cols != m2.rows:
        raise ShapeError(f"cannot multiply {m1.shape} by {m2.shape}")
    if m1.is_rational() and m2.is_rational():
        if m1.cols == 0:
            return ExactMatrix.zeros(m1.rows, m2.cols)
        ints = _int_grid(np.dot(m1._ints, m2._ints), (m1.rows, m2.cols))
        return ExactMatrix._from_ints(ints, m1._den * m2._den)
    a, b = m1.cells(), m2.cells()
    b_rows = [[(j, v) for j, v in enumerate(row) if v] for row in b.tolist()]
    out = np.empty((m1.rows, m2.cols), dtype=object)
    out[...] = ZERO
    for i, row in enumerate(a.tolist()):
        acc: dict[int, Scalar] = {}
        for k, x in enumerate(row):
            if not x:
                continue
            for j, y in b_rows[k]:
                acc[j] = acc[j] + x * y if j in acc else x * y
        for j, v in acc.items():
            out[i, j] = v
    return ExactMatrix._from_cells(out)


def kron(m1: ExactMatrix, m2: ExactMatrix) -> ExactMatrix:
    """Kronecker product: the block matrix [m1[i, j] * m2]."""
    if m1.is_rational() and m2.is_rational():
        return ExactMatrix._from_ints(_int_grid(np.kron(m1._ints, m2._ints)), m1._den * m2._den)
    a, b = m1.cells(), m2.cells()
    r2, c2 = b.shape
    out = np.empty((a.shape[0] * r2, a.shape[1] * c2), dtype=object)
    out[...] = ZERO
    for (i, j), x in np.ndenumerate(a):
        if not x:
            continue
        for (k, l), y in np.ndenumerate(b):
            if y:
                out[i * r2 + k, j * c2 + l] = x * y
    return ExactMatrix._from_cells(out)


def vec(b: ExactMatrix) -> ExactMatrix:
    """Row-major vectorisation of ``b`` as a column."""
    return ExactMatrix.column([b[i, j] for i in range(b.rows) for j in range(b.cols)])


def tl_scalar(m: ExactMatrix) -> Optional[Scalar]:
    """The scalar mu with m @ m == mu * m, or None when there is none.

    mu is read off at the first nonzero entry and then checked everywhere.
    The zero matrix gives mu = 0.
    """
    if not m.is_square():
        raise ShapeError("tl_scalar needs a square matrix")
    pos = m.first_nonzero()
    if pos is None:
        return ZERO
    sq = m @ m
    mu = sq[pos] / m[pos]
    return mu if sq == m.scale(mu) else None


def _rational_sqrt(f: Fraction) -> Optional[Fraction]:
    if f < 0:
        return None
    n, d = math.isqrt(f.numerator), math.isqrt(f.denominator)
    if n * n == f.numerator and d * d == f.denominator:
        return Fraction(n, d)
    return None


def rank_one_factor(m: ExactMatrix) -> Optional[tuple[ExactMatrix, ExactMatrix]]:
    """Columns (u, v) with u @ v.T == m when m has rank one, else None.

    u is normalised to have first nonzero entry 1.  When m is symmetric with a
    positive rational square on the pivot, the symmetric form u == v is
    returned instead.
    """
    pos = m.first_nonzero()
    if pos is None:
        return None
    r0, j0 = pos
    pivot = m[r0, j0]
    u = ExactMatrix.column([m[i, j0] / pivot for i in range(m.rows)])
    v = ExactMatrix.column([m[r0, j] for j in range(m.cols)])
    if u @ v.T != m:
        return None
    if m.is_symmetric():
        c = m[r0, r0]
        if c.is_constant():
            s = _rational_sqrt(c.to_fraction())
            if s:
                a = u.scale(s)
                return a, a
    return u, v


def kron_proportionality(x: ExactMatrix, y: ExactMatrix,
                         u: ExactMatrix, v: ExactMatrix) -> Scalar:
    """lambda with x == lambda*u and y == v/lambda, given kron(x,y) == kron(u,v)."""
    if any(m.is_zero() for m in (x, y, u, v)):
        raise ProportionalityError("all four matrices must be nonzero")
    if not (x.shape == y.shape == u.shape == v.shape):
        raise ProportionalityError("matrices must share one shape")
    if kron(x, y) != kron(u, v):
        raise ProportionalityError("kron(x, y) != kron(u, v)")
    pos = u.first_nonzero()
    lam = x[pos] / u[pos]
    if x != u.scale(lam) or y != v.scale(lam.inverse()):
        raise ProportionalityError("no proportionality witness")
    return lam


def braid_defect(x: ExactMatrix, n: int) -> ExactMatrix:
    """(X (x) I)(I (x) X)(X (x) I) - (I (x) X)(X (x) I)(I (x) X) for X of size n^2."""
    if x.shape != (n * n, n * n):
        raise ShapeError(f"expected a {n * n}x{n * n} matrix, got {x.shape}")
    eye = ExactMatrix.identity(n)
    x12 = kron(x, eye)
    x23 = kron(eye, x)
    return (x12 @ x23) @ x12 - (x23 @ x12) @ x23


def triple_kron_defect(a: ExactMatrix) -> ExactMatrix:
    """A^2 (x) A^3 (x) A - A (x) A^3 (x) A^2, computed literally."""
    if not a.is_square():
        raise ShapeError("triple_kron_defect needs a square matrix")
    a2 = a @ a
    a3 = a2 @ a
    return kron(kron(a2, a3), a) - kron(kron(a, a3), a2)


def four_cycle_holds(m: ExactMatrix) -> bool:
    """Check m[r,c]*m[r2,c2] == m[r,c2]*m[r2,c] over all row and column pairs."""
    grid = m.cells().tolist()
    nr, nc = m.shape
    for r in range(nr):
        for r2 in range(r + 1, nr):
            for c in range(nc):
                for c2 in range(c + 1, nc):
                    if grid[r][c] * grid[r2][c2] != grid[r][c2] * grid[r2][c]:
                        return False
    return True
