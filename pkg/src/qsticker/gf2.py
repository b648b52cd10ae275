"""Dense exact linear algebra over GF(2).

Matrices are stored row-major with each row bit-packed into a Python
integer (bit j = column j), so row operations are word-parallel XORs.
Zero-row and zero-column matrices are representable.  All elimination
routines pivot on the leftmost column and the lowest row index, and all
basis outputs are in reduced row-echelon form, so identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class Gf2Matrix:
    """Immutable dense matrix over GF(2) with bit-packed rows."""

    __slots__ = ("rows", "cols", "bits")

    def __init__(self, bits: Sequence[int], cols: int):
        if cols < 0:
            raise ValueError("cols must be nonnegative")
        mask = (1 << cols) - 1
        for r in bits:
            if r < 0 or r & ~mask:
                raise ValueError("row has bits outside the column range")
        object.__setattr__(self, "rows", len(bits))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "bits", tuple(bits))

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Matrix is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "Gf2Matrix":
        return Gf2Matrix([0] * rows, cols)

    @staticmethod
    def identity(n: int) -> "Gf2Matrix":
        return Gf2Matrix([1 << i for i in range(n)], n)

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]], cols: int | None = None) -> "Gf2Matrix":
        """Build from an iterable of 0/1 row iterables."""
        packed = []
        width = cols
        for row in rows:
            row = list(row)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError("ragged rows")
            bits = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                bits |= v << j
            packed.append(bits)
        if width is None:
            raise ValueError("cannot infer cols from an empty iterable; pass cols=")
        return Gf2Matrix(packed, width)

    @staticmethod
    def from_dense(array) -> "Gf2Matrix":
        """Build from a 2-D numpy array or nested sequence of 0/1 ints."""
        rows = [list(map(int, r)) for r in array]
        if not rows:
            raise ValueError("cannot infer cols from an empty array; use zeros()")
        return Gf2Matrix.from_rows(rows)

    # -- accessors ----------------------------------------------------

    def __getitem__(self, key) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError("matrix index out of range")
        return (self.bits[i] >> j) & 1

    def row(self, i: int) -> int:
        return self.bits[i]

    def row_list(self, i: int) -> list[int]:
        r = self.bits[i]
        return [(r >> j) & 1 for j in range(self.cols)]

    def to_lists(self) -> list[list[int]]:
        return [self.row_list(i) for i in range(self.rows)]

    def to_array(self):
        import numpy as np

        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.bits):
            for j in range(self.cols):
                out[i, j] = (r >> j) & 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Gf2Matrix)
            and self.cols == other.cols
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.bits))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}x{self.cols})"

    def __str__(self) -> str:
        return "\n".join(
            "".join(str((r >> j) & 1) for j in range(self.cols)) for r in self.bits
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.bits)

    # -- weights ------------------------------------------------------

    def row_weight(self, i: int) -> int:
        return self.bits[i].bit_count()

    def col_weight(self, j: int) -> int:
        m = 1 << j
        return sum(1 for r in self.bits if r & m)

    def max_row_weight(self) -> int:
        return max((r.bit_count() for r in self.bits), default=0)

    def max_col_weight(self) -> int:
        counts = [0] * self.cols
        for r in self.bits:
            while r:
                low = r & -r
                counts[low.bit_length() - 1] += 1
                r ^= low
        return max(counts, default=0)

    def wmax(self) -> int:
        """Maximum nonzero count over all rows and columns."""
        return max(self.max_row_weight(), self.max_col_weight())

    def total_weight(self) -> int:
        return sum(r.bit_count() for r in self.bits)

    # -- algebra ------------------------------------------------------

    def transpose(self) -> "Gf2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.bits):
            bit = 1 << i
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= bit
                r ^= low
        return Gf2Matrix(out, self.rows)

    def add(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in add")
        return Gf2Matrix([a ^ b for a, b in zip(self.bits, other.bits)], self.cols)

    def mul(self, other: "Gf2Matrix") -> "Gf2Matrix":
        """Matrix product self @ other over GF(2)."""
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch in mul: {self.shape} @ {other.shape}"
            )
        orows = other.bits
        out = []
        for r in self.bits:
            acc = 0
            while r:
                low = r & -r
                acc ^= orows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return Gf2Matrix(out, other.cols)

    def mul_transpose(self, other: "Gf2Matrix") -> "Gf2Matrix":
        """self @ other^T without materializing the transpose."""
        if self.cols != other.cols:
            raise ValueError(
                f"shape mismatch in mul_transpose: {self.shape} vs {other.shape}"
            )
        out = []
        for a in self.bits:
            acc = 0
            for j, b in enumerate(other.bits):
                acc |= ((a & b).bit_count() & 1) << j
            out.append(acc)
        return Gf2Matrix(out, other.rows)

    def mul_vec(self, v: int) -> int:
        """self @ v^T for a bit-packed vector v; returns a bit-packed vector."""
        acc = 0
        for i, r in enumerate(self.bits):
            acc |= ((r & v).bit_count() & 1) << i
        return acc

    def vstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return Gf2Matrix(self.bits + other.bits, self.cols)

    def hstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        sh = self.cols
        return Gf2Matrix(
            [a | (b << sh) for a, b in zip(self.bits, other.bits)],
            self.cols + other.cols,
        )

    def take_rows(self, idx: Sequence[int]) -> "Gf2Matrix":
        return Gf2Matrix([self.bits[i] for i in idx], self.cols)

    def take_cols(self, idx: Sequence[int]) -> "Gf2Matrix":
        out = []
        for r in self.bits:
            acc = 0
            for jj, j in enumerate(idx):
                acc |= ((r >> j) & 1) << jj
            out.append(acc)
        return Gf2Matrix(out, len(idx))

    def kron(self, other: "Gf2Matrix") -> "Gf2Matrix":
        """Kronecker product self ⊗ other."""
        oc, orows = other.cols, other.bits
        out = []
        for a in self.bits:
            for b in orows:
                acc = 0
                aa = a
                while aa:
                    low = aa & -aa
                    acc |= b << ((low.bit_length() - 1) * oc)
                    aa ^= low
                out.append(acc)
        return Gf2Matrix(out, self.cols * other.cols)

    def permute_cols(self, perm: Sequence[int]) -> "Gf2Matrix":
        """Column permutation: new column j = old column perm[j]."""
        if len(perm) != self.cols:
            raise ValueError("permutation length mismatch")
        return self.take_cols(perm)


class Canvas:
    """Mutable scratch grid for assembling block matrices."""

    def __init__(self, rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        self.bits = [0] * rows

    def put(self, r0: int, c0: int, m: Gf2Matrix) -> None:
        if r0 < 0 or c0 < 0 or r0 + m.rows > self.rows or c0 + m.cols > self.cols:
            raise ValueError("block does not fit on the canvas")
        for i, r in enumerate(m.bits):
            self.bits[r0 + i] |= r << c0

    def to_matrix(self) -> Gf2Matrix:
        return Gf2Matrix(self.bits, self.cols)


# -- elimination -----------------------------------------------------


def rref(m: Gf2Matrix) -> tuple[Gf2Matrix, list[int]]:
    """Reduced row echelon form and its pivot columns.

    Leftmost-pivot, lowest-row-index tie-breaking; zero rows sink to
    the bottom and are kept (the shape is preserved).
    """
    work = list(m.bits)
    nrows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r >= nrows:
            break
        mask = 1 << c
        p = -1
        for i in range(r, nrows):
            if work[i] & mask:
                p = i
                break
        if p < 0:
            continue
        work[r], work[p] = work[p], work[r]
        wr = work[r]
        for i in range(nrows):
            if i != r and work[i] & mask:
                work[i] ^= wr
        pivots.append(c)
        r += 1
    return Gf2Matrix(work, m.cols), pivots


def rank(m: Gf2Matrix) -> int:
    """GF(2) rank."""
    return len(rref(m)[1])


def row_basis(m: Gf2Matrix) -> Gf2Matrix:
    """RREF basis of the row space (zero rows dropped)."""
    red, piv = rref(m)
    return Gf2Matrix(red.bits[: len(piv)], m.cols)


def kernel_basis(m: Gf2Matrix) -> Gf2Matrix:
    """RREF basis of {v : m @ v^T = 0}, one basis vector per row.

    The row count is always cols - rank(m) (rank-nullity).
    """
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    rows = []
    for f in free:
        v = 1 << f
        fm = 1 << f
        for i, c in enumerate(pivots):
            if red.bits[i] & fm:
                v |= 1 << c
        rows.append(v)
    basis = Gf2Matrix(rows, m.cols)
    red2, piv2 = rref(basis)
    return Gf2Matrix(red2.bits[: len(piv2)], m.cols)


def solve_left(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix | None:
    """Find X with X @ a = b, or None if some row of b is outside rs(a).

    Returns the particular solution with free coefficients zero
    (canonical for regression tests).
    """
    if a.cols != b.cols:
        raise ValueError("solve_left: column mismatch")
    # Reduce (a | E) so each reduced row records its combination of a-rows.
    aug = a.hstack(Gf2Matrix.identity(a.rows)) if a.rows else Gf2Matrix.zeros(0, a.cols)
    work = list(aug.bits)
    pivots: list[int] = []
    r = 0
    for c in range(a.cols):
        if r >= len(work):
            break
        mask = 1 << c
        p = -1
        for i in range(r, len(work)):
            if work[i] & mask:
                p = i
                break
        if p < 0:
            continue
        work[r], work[p] = work[p], work[r]
        wr = work[r]
        for i in range(len(work)):
            if i != r and work[i] & mask:
                work[i] ^= wr
        pivots.append(c)
        r += 1
    colmask = (1 << a.cols) - 1
    xrows = []
    for brow in b.bits:
        residual = brow
        combo = 0
        for i, c in enumerate(pivots):
            if residual & (1 << c):
                residual ^= work[i] & colmask
                combo ^= work[i] >> a.cols
        if residual:
            return None
        xrows.append(combo)
    return Gf2Matrix(xrows, a.rows)


def in_row_space(a: Gf2Matrix, v: int) -> bool:
    """Membership of the bit-packed vector v in rs(a)."""
    return solve_left(a, Gf2Matrix([v], a.cols)) is not None


def right_inverse(u: Gf2Matrix) -> Gf2Matrix:
    """Some R with u @ R = E; raises if u is not row full rank."""
    x = solve_left(u.transpose(), Gf2Matrix.identity(u.rows))
    if x is None:
        raise ValueError("right_inverse: matrix is row-rank-deficient")
    return x.transpose()


def inverse(m: Gf2Matrix) -> Gf2Matrix:
    """Inverse of a square invertible matrix."""
    if m.rows != m.cols:
        raise ValueError("inverse: matrix is not square")
    x = solve_left(m, Gf2Matrix.identity(m.rows))
    if x is None:
        raise ValueError("inverse: matrix is singular")
    return x


def subspace_intersect(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """RREF basis of rs(a) ∩ rs(b)."""
    if a.cols != b.cols:
        raise ValueError("subspace_intersect: column mismatch")
    ra = row_basis(a)
    rb = row_basis(b)
    if ra.rows == 0 or rb.rows == 0:
        return Gf2Matrix.zeros(0, a.cols)
    stacked = ra.vstack(rb)
    # (u|v) with u@ra + v@rb = 0  =>  u@ra lies in both row spaces.
    left_null = kernel_basis(stacked.transpose())
    rows = []
    for lr in left_null.bits:
        u = lr & ((1 << ra.rows) - 1)
        acc = 0
        while u:
            low = u & -u
            acc ^= ra.bits[low.bit_length() - 1]
            u ^= low
        rows.append(acc)
    red, piv = rref(Gf2Matrix(rows, a.cols))
    return Gf2Matrix(red.bits[: len(piv)], a.cols)


def standard_form(j: Gf2Matrix) -> tuple[Gf2Matrix, tuple[int, ...], Gf2Matrix]:
    """Standard form (r, pi, js) with r @ j permuted by pi equal to (E | J').

    pi maps new column position -> old column index (pivot columns
    first, then the rest in ascending order).  r is invertible.
    Raises on row-rank-deficient input.
    """
    aug = j.hstack(Gf2Matrix.identity(j.rows)) if j.rows else Gf2Matrix.zeros(0, 0)
    red, pivots = rref(Gf2Matrix(aug.bits, j.cols + j.rows))
    real_pivots = [c for c in pivots if c < j.cols]
    if len(real_pivots) != j.rows:
        raise ValueError("standard_form: matrix is row-rank-deficient")
    colmask = (1 << j.cols) - 1
    r = Gf2Matrix([row >> j.cols for row in red.bits], j.rows)
    reduced = Gf2Matrix([row & colmask for row in red.bits], j.cols)
    pivot_set = set(real_pivots)
    pi = tuple(real_pivots + [c for c in range(j.cols) if c not in pivot_set])
    js = reduced.permute_cols(pi)
    return r, pi, js


class RowReducer:
    """Incremental independence testing against an accumulating row set."""

    def __init__(self):
        self.pivots: dict[int, int] = {}  # pivot column -> reduced row

    def reduce(self, row: int) -> int:
        while row:
            c = (row & -row).bit_length() - 1
            piv = self.pivots.get(c)
            if piv is None:
                return row
            row ^= piv
        return 0

    def add(self, row: int) -> bool:
        """Insert a row; True iff it was independent of the set so far."""
        red = self.reduce(row)
        if red == 0:
            return False
        self.pivots[(red & -red).bit_length() - 1] = red
        return True


def complete_basis(span_rows: Gf2Matrix, inside: Gf2Matrix) -> Gf2Matrix:
    """Extend rs(span_rows) to rs(inside) with rows of `inside`.

    Picks completion rows in `inside`'s row order (lexicographic
    echelon choice when `inside` is an RREF kernel basis).  Requires
    rs(span_rows) ⊆ rs(inside).
    """
    reducer = RowReducer()
    for row in span_rows.bits:
        reducer.add(row)
    picked = [row for row in inside.bits if reducer.add(row)]
    return Gf2Matrix(picked, span_rows.cols)
