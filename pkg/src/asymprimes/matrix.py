"""Dense matrices over a :class:`BaseRing` and Smith normal form.

Matrices are row-major lists of :class:`RingElem` and are treated as
immutable once built.  The Smith routine works over any Euclidean base
supported by :mod:`asymprimes.base_ring` and can track the left and right
transforms together with their inverses, so callers pay only for what they
need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .base_ring import BaseRing, RingElem, xgcd


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: BaseRing, rows: Sequence[Sequence[RingElem]], ncols: int | None = None):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, ring: BaseRing, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero
        return cls(ring, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring: BaseRing, n: int) -> "Matrix":
        m = cls.zeros(ring, n, n)
        for i in range(n):
            m.rows[i][i] = ring.one
        return m

    @classmethod
    def from_columns(cls, ring: BaseRing, nrows: int, cols: Iterable[Sequence[RingElem]]) -> "Matrix":
        cols = list(cols)
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls(ring, rows, len(cols))

    @classmethod
    def parse(cls, ring: BaseRing, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        return cls(ring, [[ring(x) for x in r] for r in rows], ncols)

    @classmethod
    def diagonal(cls, ring: BaseRing, nrows: int, entries: Sequence[RingElem]) -> "Matrix":
        m = cls.zeros(ring, nrows, len(entries))
        for i, d in enumerate(entries):
            m.rows[i][i] = d
        return m

    # -- basic access ----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list[RingElem]:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list[RingElem]]:
        return [self.column(j) for j in range(self.ncols)]

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Matrix":
        rows = range(self.nrows) if rows is None else rows
        cols = range(self.ncols) if cols is None else list(cols)
        return Matrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    __hash__ = None

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ring, [self.column(j) for j in range(self.ncols)], self.nrows)

    # -- arithmetic ----------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = self.ring.zero
        n = other.ncols
        out = []
        orows = other.rows
        for r in self.rows:
            acc = [z] * n
            for k, a in enumerate(r):
                if not a:
                    continue
                brow = orows[k]
                if a.is_one():
                    for j, b in enumerate(brow):
                        if b.c:
                            acc[j] = acc[j] + b
                else:
                    for j, b in enumerate(brow):
                        if b.c:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.ring, out, n)

    def apply(self, v: Sequence[RingElem]) -> list[RingElem]:
        """Matrix-vector product."""
        z = self.ring.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, v):
                if a.c and b.c:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, [[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c: RingElem) -> "Matrix":
        return Matrix(self.ring, [[c * a for a in r] for r in self.rows], self.ncols)

    # -- assembly --------------------------------------------------------------

    def hstack(self, *others: "Matrix") -> "Matrix":
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            if o.nrows != self.nrows:
                raise ValueError("hstack row mismatch")
            for r, s in zip(rows, o.rows):
                r.extend(s)
            ncols += o.ncols
        return Matrix(self.ring, rows, ncols)

    def vstack(self, *others: "Matrix") -> "Matrix":
        rows = [list(r) for r in self.rows]
        for o in others:
            if o.ncols != self.ncols:
                raise ValueError("vstack column mismatch")
            rows.extend(list(r) for r in o.rows)
        return Matrix(self.ring, rows, self.ncols)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(f'"{a}"' for a in r) + "]" for r in self.rows) + "]"

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.ring}: {self})"

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]


def block_diag(ring: BaseRing, blocks: Sequence[Matrix]) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out = Matrix.zeros(ring, nr, nc)
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            out.rows[r0 + i][c0 : c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return out


def kron(a: Matrix, b: Matrix) -> Matrix:
    ring = a.ring
    out = Matrix.zeros(ring, a.nrows * b.nrows, a.ncols * b.ncols)
    for i, ra in enumerate(a.rows):
        for j, x in enumerate(ra):
            if not x:
                continue
            for k, rb in enumerate(b.rows):
                orow = out.rows[i * b.nrows + k]
                for l, y in enumerate(rb):
                    if y.c:
                        orow[j * b.ncols + l] = x * y
    return out


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass
class SmithForm:
    """Result of :func:`smith`: ``U @ mat @ V == D`` with ``D`` diagonal.

    ``diag`` holds the nonzero diagonal entries d_1 | d_2 | ... (monic);
    transforms that were not requested are ``None``.
    """

    ring: BaseRing
    nrows: int
    ncols: int
    diag: list[RingElem]
    U: Matrix | None
    U_inv: Matrix | None
    V: Matrix | None
    V_inv: Matrix | None

    @property
    def rank(self) -> int:
        return len(self.diag)

    @property
    def D(self) -> Matrix:
        return Matrix.diagonal(self.ring, self.nrows, self.diag).hstack(
            Matrix.zeros(self.ring, self.nrows, self.ncols - self.rank)
        )

    def kernel_basis(self) -> list[list[RingElem]]:
        """Columns of V spanning the kernel of the original matrix."""
        if self.V is None:
            raise ValueError("kernel needs the right transform")
        return [self.V.column(j) for j in range(self.rank, self.ncols)]

    def solve(self, b: Sequence[RingElem]) -> list[RingElem] | None:
        """A solution x of ``mat @ x == b`` or ``None`` when there is none."""
        if self.U is None or self.V is None:
            raise ValueError("solve needs both transforms")
        z = self.U.apply(b)
        r = self.rank
        if any(z[r:]):
            return None
        y = []
        for zi, d in zip(z, self.diag):
            q, rem = divmod(zi, d)
            if rem:
                return None
            y.append(q)
        zero = self.ring.zero
        x = [zero] * self.ncols
        for i in range(self.ncols):
            acc = zero
            row = self.V.rows[i]
            for k in range(r):
                if row[k].c and y[k].c:
                    acc = acc + row[k] * y[k]
            x[i] = acc
        return x


def smith(
    mat: Matrix,
    *,
    left: bool = False,
    left_inv: bool = False,
    right: bool = False,
    right_inv: bool = False,
) -> SmithForm:
    """Smith normal form by alternating row/column Euclidean elimination."""
    ring = mat.ring
    m, n = mat.nrows, mat.ncols
    A = [list(r) for r in mat.rows]
    U = Matrix.identity(ring, m).rows if left else None
    Ui = Matrix.identity(ring, m).rows if left_inv else None
    V = Matrix.identity(ring, n).rows if right else None
    Vi = Matrix.identity(ring, n).rows if right_inv else None

    def row_axpy(i, t, c, start):
        # row_i += c * row_t
        rt, ri = A[t], A[i]
        for k in range(start, n):
            x = rt[k]
            if x.c:
                ri[k] = ri[k] + c * x
        if U is not None:
            ut, ui = U[t], U[i]
            for k, x in enumerate(ut):
                if x.c:
                    ui[k] = ui[k] + c * x
        if Ui is not None:
            # Ui col_t -= c * col_i
            for row in Ui:
                if row[i].c:
                    row[t] = row[t] - c * row[i]

    def col_axpy(j, t, c, start):
        # col_j += c * col_t
        for r in range(start, m):
            row = A[r]
            if row[t].c:
                row[j] = row[j] + c * row[t]
        if V is not None:
            for row in V:
                if row[t].c:
                    row[j] = row[j] + c * row[t]
        if Vi is not None:
            # Vi row_t -= c * row_j
            vt, vj = Vi[t], Vi[j]
            for k, x in enumerate(vj):
                if x.c:
                    vt[k] = vt[k] - c * x

    def row_bezout(t, i, s, tt, a1, b1):
        for rows in (A, U):
            if rows is None:
                continue
            rt, ri = rows[t], rows[i]
            for k in range(len(rt)):
                x, y = rt[k], ri[k]
                if x.c or y.c:
                    rt[k] = s * x + tt * y
                    ri[k] = a1 * y - b1 * x
        if Ui is not None:
            for row in Ui:
                x, y = row[t], row[i]
                if x.c or y.c:
                    row[t] = a1 * x + b1 * y
                    row[i] = s * y - tt * x

    def col_bezout(t, j, s, tt, a1, b1):
        for rows in (A, V):
            if rows is None:
                continue
            for row in rows:
                x, y = row[t], row[j]
                if x.c or y.c:
                    row[t] = s * x + tt * y
                    row[j] = a1 * y - b1 * x
        if Vi is not None:
            vt, vj = Vi[t], Vi[j]
            for k in range(len(vt)):
                x, y = vt[k], vj[k]
                if x.c or y.c:
                    vt[k] = a1 * x + b1 * y
                    vj[k] = s * y - tt * x

    def swap_rows(t, i):
        A[t], A[i] = A[i], A[t]
        if U is not None:
            U[t], U[i] = U[i], U[t]
        if Ui is not None:
            for row in Ui:
                row[t], row[i] = row[i], row[t]

    def swap_cols(t, j):
        for rows in (A, V):
            if rows is None:
                continue
            for row in rows:
                row[t], row[j] = row[j], row[t]
        if Vi is not None:
            Vi[t], Vi[j] = Vi[j], Vi[t]

    diag = []
    t = 0
    while t < m and t < n:
        piv = _choose_pivot(A, t, m, n)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            for i in range(t + 1, m):
                b = A[i][t]
                if not b:
                    continue
                a = A[t][t]
                q, r = divmod(b, a)
                if not r:
                    row_axpy(i, t, -q, t)
                else:
                    g, s, tt = xgcd(a, b)
                    row_bezout(t, i, s, tt, a.exact_div(g), b.exact_div(g))
            dirty = False
            for j in range(t + 1, n):
                b = A[t][j]
                if not b:
                    continue
                a = A[t][t]
                q, r = divmod(b, a)
                if not r:
                    col_axpy(j, t, -q, t)
                else:
                    g, s, tt = xgcd(a, b)
                    col_bezout(t, j, s, tt, a.exact_div(g), b.exact_div(g))
                    dirty = True
            if dirty and any(A[i][t] for i in range(t + 1, m)):
                continue
            a = A[t][t]
            if not a.is_unit():
                bad = _nondivisible_row(A, a, t, m, n)
                if bad is not None:
                    row_axpy(t, bad, ring.one, t)
                    continue
            break
        a = A[t][t]
        if a.lc != 1:
            c = ring(a.lc).inverse()
            ci = ring(a.lc)
            A[t] = [c * x for x in A[t]]
            if U is not None:
                U[t] = [c * x for x in U[t]]
            if Ui is not None:
                for row in Ui:
                    row[t] = ci * row[t]
        diag.append(A[t][t])
        t += 1

    def wrap(rows, k):
        return None if rows is None else Matrix(ring, rows, k)

    return SmithForm(ring, m, n, diag, wrap(U, m), wrap(Ui, m), wrap(V, n), wrap(Vi, n))


def _choose_pivot(A, t, m, n):
    best = None
    best_deg = None
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            x = row[j]
            if x.c:
                d = len(x.c)
                if d == 1:
                    return i, j
                if best_deg is None or d < best_deg:
                    best, best_deg = (i, j), d
    return best


def _nondivisible_row(A, a, t, m, n):
    b = a.c
    db = len(b) - 1
    p = a.ring.p
    inv = pow(b[-1], -1, p)
    for i in range(t + 1, m):
        row = A[i]
        for j in range(t + 1, n):
            x = row[j].c
            if x and _leaves_remainder(x, b, db, inv, p):
                return i
    return None


def _leaves_remainder(x, b, db, inv, p):
    # plain-tuple long division; only the remainder's vanishing matters
    if len(x) <= db:
        return True
    r = list(x)
    for k in range(len(r) - 1, db - 1, -1):
        coef = r[k] * inv % p
        if coef:
            off = k - db
            for i, y in enumerate(b):
                r[off + i] = (r[off + i] - coef * y) % p
    return any(r[:db])


def smith_normal_form(mat: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ mat @ V == D`` and U, V unimodular."""
    sf = smith(mat, left=True, right=True)
    return sf.U, sf.D, sf.V


def determinant(mat: Matrix) -> RingElem:
    """Determinant by fraction-free cofactor expansion (small matrices only)."""
    n = mat.nrows
    if n != mat.ncols:
        raise ValueError("determinant of a non-square matrix")
    ring = mat.ring
    if n == 0:
        return ring.one
    if n == 1:
        return mat.rows[0][0]
    return _det([list(r) for r in mat.rows], ring)


def _det(rows, ring) -> RingElem:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ring.zero
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = a * _det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total
