"""Exact rational matrices and the linear-algebra primitives used everywhere else.

All arithmetic is over `fractions.Fraction`; there is no floating point
anywhere in this package.  Pivoting rules are fixed (leftmost pivot, unit
vectors in increasing index order) so that every basis chosen downstream is
reproducible run to run.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class DependentColumnsError(ValueError):
    """Input columns were required to be linearly independent but are not."""


class InconsistentSystemError(ValueError):
    """A linear system that was expected to be solvable has no solution."""


_F0 = Fraction(0)
_F1 = Fraction(1)


class QMatrix:
    """Immutable dense matrix over Q, stored row-major as Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable] | None = None):
        self.rows = rows
        self.cols = cols
        if entries is None:
            zrow = (_F0,) * cols
            self.data = (zrow,) * rows
        else:
            data = tuple(tuple(Fraction(x) for x in row) for row in entries)
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("entry grid does not match declared shape")
            self.data = data

    @classmethod
    def _raw(cls, rows: int, cols: int, data: tuple) -> "QMatrix":
        """Trusted constructor: data is already a tuple of tuples of Fractions."""
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m.data = data
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls(r, c, rows)

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "QMatrix":
        if cols:
            nrows = len(cols[0])
        elif nrows is None:
            nrows = 0
        return cls(nrows, len(cols), [[col[i] for col in cols] for i in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls._raw(n, n, tuple(
            tuple(_F1 if i == j else _F0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    def __eq__(self, other):
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, {[[str(x) for x in row] for row in self.data]})"

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "QMatrix":
        return QMatrix._raw(self.cols, self.rows,
                            tuple(self.col(j) for j in range(self.cols)))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        assert self.rows == other.rows and self.cols == other.cols
        return QMatrix._raw(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            ),
        )

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "QMatrix":
        c = Fraction(c)
        return QMatrix._raw(self.rows, self.cols,
                            tuple(tuple(c * x for x in row) for row in self.data))

    def __neg__(self) -> "QMatrix":
        return self.scale(-1)

    def __mul__(self, other: "QMatrix") -> "QMatrix":
        assert self.cols == other.rows, f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}"
        zrow = (_F0,) * other.cols
        out = []
        for row in self.data:
            acc = None
            for a, orow in zip(row, other.data):
                if a:
                    if acc is None:
                        acc = [a * b if b else _F0 for b in orow]
                    else:
                        for j, b in enumerate(orow):
                            if b:
                                acc[j] += a * b
            out.append(zrow if acc is None else tuple(acc))
        return QMatrix._raw(self.rows, other.cols, tuple(out))

    def mul_vec(self, v: Sequence) -> tuple:
        assert len(v) == self.cols
        v = [Fraction(b) for b in v]
        return tuple(sum((a * b for a, b in zip(row, v) if a and b), _F0)
                     for row in self.data)

    def hstack(self, other: "QMatrix") -> "QMatrix":
        assert self.rows == other.rows
        return QMatrix._raw(
            self.rows,
            self.cols + other.cols,
            tuple(ra + rb for ra, rb in zip(self.data, other.data)),
        )

    def submatrix_cols(self, idx: Sequence[int]) -> "QMatrix":
        return QMatrix._raw(self.rows, len(idx),
                            tuple(tuple(row[j] for j in idx) for row in self.data))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for row in self.data for x in row)


def _rref(m: QMatrix):
    """Reduced row echelon form; returns (rref rows as lists, pivot column list)."""
    a = [list(row) for row in m.data]
    pivots = []
    prow = 0
    for col in range(m.cols):
        pr = None
        for i in range(prow, m.rows):
            if a[i][col] != 0:
                pr = i
                break
        if pr is None:
            continue
        a[prow], a[pr] = a[pr], a[prow]
        pv = a[prow][col]
        if pv != 1:
            a[prow] = [x / pv if x else x for x in a[prow]]
        prow_vals = a[prow]
        for i in range(m.rows):
            if i != prow and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], prow_vals)]
        pivots.append(col)
        prow += 1
        if prow == m.rows:
            break
    return a, pivots


def decompose(m: QMatrix):
    """Rank, exact kernel basis and image basis of a rational matrix.

    Returns (rank, kernel_basis, image_basis).  Kernel columns are the
    standard RREF null-space basis (one per free column, leftmost-pivot rule);
    image basis is the set of original columns at the pivot indices.
    """
    a, pivots = _rref(m)
    rank = len(pivots)
    free = [j for j in range(m.cols) if j not in pivots]
    kernel_cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -a[i][f]
        kernel_cols.append(v)
    kernel = QMatrix.from_cols(kernel_cols, nrows=m.cols)
    image = m.submatrix_cols(pivots)
    return rank, kernel, image


def rank(m: QMatrix) -> int:
    return decompose(m)[0]


def solve(a: QMatrix, b: QMatrix) -> QMatrix:
    """Solve a X = b column-wise; raises InconsistentSystemError if unsolvable.

    When the system is underdetermined the particular solution with zero free
    variables is returned (deterministic).
    """
    aug = a.hstack(b)
    red, pivots = _rref(aug)
    for i in range(len(red)):
        if all(red[i][j] == 0 for j in range(a.cols)) and any(
            red[i][j] != 0 for j in range(a.cols, aug.cols)
        ):
            raise InconsistentSystemError("no solution")
    x = [[Fraction(0)] * b.cols for _ in range(a.cols)]
    row = 0
    for p in pivots:
        if p >= a.cols:
            break
        for j in range(b.cols):
            x[p][j] = red[row][a.cols + j]
        row += 1
    return QMatrix(a.cols, b.cols, x)


def extend_basis(sub: QMatrix, ambient_dim: int) -> QMatrix:
    """Complete independent columns to a basis of Q^ambient_dim.

    The complement is chosen from the standard unit vectors in increasing
    index order, skipping any that would be dependent.
    """
    if sub.rows not in (ambient_dim, 0) and sub.cols > 0:
        raise ValueError("sub must live in Q^ambient_dim")
    if sub.cols and rank(sub) != sub.cols:
        raise DependentColumnsError("input columns are dependent")
    cols = sub.columns() if sub.cols else []
    current = QMatrix.from_cols(cols, nrows=ambient_dim)
    r = current.cols
    extra = []
    for i in range(ambient_dim):
        if r == ambient_dim:
            break
        e = [Fraction(1) if k == i else Fraction(0) for k in range(ambient_dim)]
        cand = QMatrix.from_cols(cols + extra + [e], nrows=ambient_dim)
        if rank(cand) == r + 1:
            extra.append(e)
            r += 1
    return QMatrix.from_cols(extra, nrows=ambient_dim)


def det(m: QMatrix) -> Fraction:
    assert m.rows == m.cols
    a = [list(row) for row in m.data]
    n = m.rows
    d = Fraction(1)
    for col in range(n):
        pr = None
        for i in range(col, n):
            if a[i][col] != 0:
                pr = i
                break
        if pr is None:
            return Fraction(0)
        if pr != col:
            a[col], a[pr] = a[pr], a[col]
            d = -d
        d *= a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            if a[i][col] != 0:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return d


# ---------------------------------------------------------------------------
# Integer lattice routines


def _vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive(v) -> tuple:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    iv = [int(x) for x in v]
    g = _vec_gcd(iv)
    if g == 0:
        return tuple(iv)
    return tuple(x // g for x in iv)


def _column_hnf(cols: list) -> list:
    """Canonical column-style Hermite normal form of independent integer columns.

    Returns columns in echelon order: pivot rows strictly increasing, pivot
    entries positive, and entries to the left of each pivot reduced into
    [0, pivot).
    """
    cols = [list(map(int, c)) for c in cols]
    if not cols:
        return []
    nrows = len(cols[0])
    k = len(cols)
    work = [c[:] for c in cols]
    placed = 0
    for row in range(nrows):
        if placed == k:
            break
        # gcd elimination on entries of `row` across columns placed..k-1
        while True:
            nz = [j for j in range(placed, k) if work[j][row] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(work[j][row]))
            for j in nz:
                if j != j0:
                    q = work[j][row] // work[j0][row]
                    work[j] = [a - q * b for a, b in zip(work[j], work[j0])]
        nz = [j for j in range(placed, k) if work[j][row] != 0]
        if not nz:
            continue
        j0 = nz[0]
        work[placed], work[j0] = work[j0], work[placed]
        if work[placed][row] < 0:
            work[placed] = [-a for a in work[placed]]
        # reduce already-placed columns at this pivot row into [0, pivot)
        for j in range(placed):
            q = work[j][row] // work[placed][row]
            if q:
                work[j] = [a - q * b for a, b in zip(work[j], work[placed])]
        placed += 1
    return work[:placed]


def integer_kernel(m: QMatrix) -> QMatrix:
    """Canonical Z-basis of {x in Z^cols : m x = 0}.

    Works by unimodular column reduction of [m; I]: integer column operations
    bring the top block to column echelon form, after which the identity-block
    parts of the zeroed columns are a Z-basis of the full kernel lattice (not
    merely a finite-index sublattice, as naive denominator clearing would give).
    """
    # scaling rows does not change the kernel; clear denominators row-wise
    int_rows = []
    for row in m.data:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
        int_rows.append([int(x * lcm) for x in row])
    n = m.cols
    work = [
        [int_rows[i][j] for i in range(m.rows)]
        + [1 if t == j else 0 for t in range(n)]
        for j in range(n)
    ]
    placed = 0
    for row in range(m.rows):
        if placed == n:
            break
        while True:
            nz = [j for j in range(placed, n) if work[j][row] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(work[j][row]))
            for j in nz:
                if j != j0:
                    q = work[j][row] // work[j0][row]
                    work[j] = [a - q * b for a, b in zip(work[j], work[j0])]
        nz = [j for j in range(placed, n) if work[j][row] != 0]
        if nz:
            j0 = nz[0]
            work[placed], work[j0] = work[j0], work[placed]
            placed += 1
    kernel_cols = [w[m.rows:] for w in work[placed:]]
    hnf = _column_hnf(kernel_cols)
    return QMatrix.from_cols(hnf, nrows=n)


def hnf_lattice_basis(gens: QMatrix) -> QMatrix:
    """Canonical Z-basis (column HNF) of the saturation N ∩ span_Q(gens).

    Input columns must be integer vectors; the result spans the same rational
    subspace but is a basis of the full lattice of integer points in it.
    """
    if not gens.is_integer():
        raise ValueError("generators must be integer vectors")
    r = gens.rows
    if gens.cols == 0 or gens.is_zero():
        return QMatrix.zeros(r, 0)
    # span constraints: rows spanning the left null space of gens
    _, lker, _ = decompose(gens.transpose())
    if lker.cols == 0:
        constraints = QMatrix.zeros(0, r)
        basis = QMatrix.from_cols(_column_hnf([tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]), nrows=r)
        return basis
    rows = []
    for j in range(lker.cols):
        c = lker.col(j)
        lcm = 1
        for x in c:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
        rows.append([int(x * lcm) for x in c])
    constraints = QMatrix.from_rows(rows)
    return integer_kernel(constraints)


def ext_gcd_vector(w: Sequence[int]):
    """Find integer u with sum(w_i * u_i) = gcd(w); returns (g, u)."""
    g = 0
    u = [0] * len(w)
    for i, x in enumerate(w):
        x = int(x)
        if x == 0:
            continue
        if g == 0:
            g = abs(x)
            u[i] = 1 if x > 0 else -1
            continue
        # extended gcd of (g, x)
        a, b = g, x
        s0, s1 = 1, 0
        t0, t1 = 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        # a = s0*g + t0*x; keep the gcd positive
        if a < 0:
            a, s0, t0 = -a, -s0, -t0
        u = [s0 * c for c in u]
        u[i] = t0
        g = a
    return g, u
