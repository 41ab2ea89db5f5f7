"""Sparse exact linear algebra: elimination, rank, kernels, solving.

Matrices are stored as dicts of sparse rows (column -> nonzero entry).
All elimination is exact Gaussian elimination with deterministic pivoting
(lowest column first, then fewest nonzeros, then lowest row index), so
identical inputs always produce identical echelon data.  Over GF(2) rows
are packed into Python ints and reduced with xor, which is dramatically
faster for the larger bar-complex blocks.
"""

from __future__ import annotations

from .field import Field

Vec = dict[int, object]  # sparse vector: index -> nonzero field element


# ---------------------------------------------------------------------------
# sparse vectors


def vec_axpy(field: Field, target: Vec, coeff, src: Vec) -> None:
    """target += coeff * src, dropping entries that cancel to zero."""
    if coeff == field.zero():
        return
    for j, v in src.items():
        w = field.add(target.get(j, field.zero()), field.mul(coeff, v))
        if w == field.zero():
            target.pop(j, None)
        else:
            target[j] = w


def vec_scale(field: Field, coeff, src: Vec) -> Vec:
    if coeff == field.zero():
        return {}
    return {j: field.mul(coeff, v) for j, v in src.items()}


def vec_sub(field: Field, a: Vec, b: Vec) -> Vec:
    out = dict(a)
    vec_axpy(field, out, field.neg(field.one()), b)
    return out


# ---------------------------------------------------------------------------
# matrices


class SparseMatrix:
    """Immutable-by-convention sparse matrix over an exact field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows: dict[int, Vec] | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else {}

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries) -> "SparseMatrix":
        """entries: iterable of (row, col, value)."""
        rows: dict[int, Vec] = {}
        zero = field.zero()
        for i, j, v in entries:
            if v == zero:
                continue
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i},{j}) outside {nrows}x{ncols}")
            row = rows.setdefault(i, {})
            w = field.add(row.get(j, zero), v)
            if w == zero:
                row.pop(j, None)
            else:
                row[j] = w
        for i in [i for i, r in rows.items() if not r]:
            del rows[i]
        return cls(field, nrows, ncols, rows)

    @classmethod
    def zero(cls, field, nrows, ncols) -> "SparseMatrix":
        return cls(field, nrows, ncols, {})

    @classmethod
    def identity(cls, field, n) -> "SparseMatrix":
        one = field.one()
        return cls(field, n, n, {i: {i: one} for i in range(n)})

    def entry(self, i, j):
        return self.rows.get(i, {}).get(j, self.field.zero())

    def iter_entries(self):
        for i, row in self.rows.items():
            for j, v in row.items():
                yield i, j, v

    def is_zero(self) -> bool:
        return not self.rows

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def column(self, j) -> Vec:
        out = {}
        for i, row in self.rows.items():
            v = row.get(j)
            if v is not None:
                out[i] = v
        return out

    def mul_vec(self, vec: Vec) -> Vec:
        """Matrix times sparse coordinate vector."""
        field = self.field
        zero = field.zero()
        out: Vec = {}
        for i, row in self.rows.items():
            acc = zero
            if len(row) <= len(vec):
                for j, a in row.items():
                    b = vec.get(j)
                    if b is not None:
                        acc = field.add(acc, field.mul(a, b))
            else:
                for j, b in vec.items():
                    a = row.get(j)
                    if a is not None:
                        acc = field.add(acc, field.mul(a, b))
            if acc != zero:
                out[i] = acc
        return out

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """self @ other (apply other first)."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in compose")
        field = self.field
        zero = field.zero()
        cols: dict[int, Vec] = {}
        for k, row in other.rows.items():
            for j, v in row.items():
                cols.setdefault(j, {})[k] = v
        rows: dict[int, Vec] = {}
        for i, row in self.rows.items():
            acc: Vec = {}
            for k, a in row.items():
                # entry (i, k) of self combines with row k of other
                orow = other.rows.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    w = field.add(acc.get(j, zero), field.mul(a, b))
                    if w == zero:
                        acc.pop(j, None)
                    else:
                        acc[j] = w
            if acc:
                rows[i] = acc
        return SparseMatrix(field, self.nrows, other.ncols, rows)

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in add")
        field = self.field
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            vec_axpy(field, tgt, field.one(), r)
            if not tgt:
                del rows[i]
        return SparseMatrix(field, self.nrows, self.ncols, rows)

    def scale(self, coeff) -> "SparseMatrix":
        field = self.field
        if coeff == field.zero():
            return SparseMatrix.zero(field, self.nrows, self.ncols)
        rows = {i: {j: field.mul(coeff, v) for j, v in r.items()} for i, r in self.rows.items()}
        return SparseMatrix(field, self.nrows, self.ncols, rows)

    def neg(self) -> "SparseMatrix":
        return self.scale(self.field.neg(self.field.one()))

    def transpose(self) -> "SparseMatrix":
        rows: dict[int, Vec] = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                rows.setdefault(j, {})[i] = v
        return SparseMatrix(self.field, self.ncols, self.nrows, rows)

    def eq(self, other: "SparseMatrix") -> bool:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return self.rows == other.rows

    def to_dense(self):
        zero = self.field.zero()
        return [
            [self.rows.get(i, {}).get(j, zero) for j in range(self.ncols)]
            for i in range(self.nrows)
        ]

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# ---------------------------------------------------------------------------
# echelon row spaces


class RowBasis:
    """A row space kept in reduced echelon form; supports add / reduce / dim.

    Pivot columns are the smallest column of each stored row; every stored
    row is normalized to pivot 1 and fully reduced against the others, so
    `reduce` is a canonical normal form modulo the span.
    """

    __slots__ = ("field", "ncols", "pivots")

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivots: dict[int, Vec] = {}  # pivot column -> normalized row

    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Vec) -> Vec:
        """Normal form of vec modulo the span (input not mutated)."""
        field = self.field
        out = dict(vec)
        # repeatedly clear the smallest reducible coordinate
        while True:
            hit = None
            for j in out:
                if j in self.pivots:
                    if hit is None or j < hit:
                        hit = j
            if hit is None:
                return out
            coeff = field.neg(out[hit])
            vec_axpy(field, out, coeff, self.pivots[hit])
            out.pop(hit, None)

    def add(self, vec: Vec) -> bool:
        """Insert vec's residue; returns True when the dimension grew."""
        field = self.field
        res = self.reduce(vec)
        if not res:
            return False
        piv = min(res)
        coeff = field.inv(res[piv])
        row = vec_scale(field, coeff, res)
        # keep reduced form: clear the new pivot from existing rows
        for p, existing in self.pivots.items():
            v = existing.get(piv)
            if v is not None:
                vec_axpy(field, existing, field.neg(v), row)
        self.pivots[piv] = row
        return True

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def basis_rows(self) -> list[Vec]:
        return [dict(self.pivots[p]) for p in sorted(self.pivots)]


class Gf2RowBasis:
    """RowBasis specialised to GF(2): rows are int bitmasks."""

    __slots__ = ("field", "ncols", "pivots")

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivots: dict[int, int] = {}

    @staticmethod
    def pack(vec: Vec) -> int:
        mask = 0
        for j, v in vec.items():
            if v & 1:
                mask |= 1 << j
        return mask

    @staticmethod
    def unpack(mask: int) -> Vec:
        out: Vec = {}
        j = 0
        while mask:
            if mask & 1:
                out[j] = 1
            mask >>= 1
            j += 1
        return out

    def dim(self) -> int:
        return len(self.pivots)

    def _reduce_mask(self, mask: int) -> int:
        """Full reduction: clear every pivot position, keep the rest.

        XORing a pivot row clears its (lowest) bit and only toggles higher
        bits, so scanning bits in increasing order terminates.
        """
        pivots = self.pivots
        out = 0
        while mask:
            low_bit = mask & -mask
            row = pivots.get(low_bit.bit_length() - 1)
            if row is None:
                out |= low_bit
                mask ^= low_bit
            else:
                mask ^= row
        return out

    def reduce(self, vec: Vec) -> Vec:
        return self.unpack(self._reduce_mask(self.pack(vec)))

    def add(self, vec: Vec) -> bool:
        return self.add_mask(self.pack(vec))

    def add_mask(self, mask: int) -> bool:
        mask = self._reduce_mask(mask)
        if not mask:
            return False
        low = (mask & -mask).bit_length() - 1
        for p, row in self.pivots.items():
            if row >> low & 1:
                self.pivots[p] = row ^ mask
        self.pivots[low] = mask
        return True

    def contains(self, vec: Vec) -> bool:
        return self._reduce_mask(self.pack(vec)) == 0

    def basis_rows(self) -> list[Vec]:
        return [self.unpack(self.pivots[p]) for p in sorted(self.pivots)]


def row_basis(field: Field, ncols: int):
    if field.kind == "prime-field" and field.characteristic == 2:
        return Gf2RowBasis(field, ncols)
    return RowBasis(field, ncols)


# ---------------------------------------------------------------------------
# derived computations


def rank(A: SparseMatrix) -> int:
    rb = row_basis(A.field, A.ncols)
    # insert shortest rows first; keeps fill-in low on the block matrices
    for i in sorted(A.rows, key=lambda i: (len(A.rows[i]), i)):
        rb.add(A.rows[i])
    return rb.dim()


def row_space(A: SparseMatrix):
    rb = row_basis(A.field, A.ncols)
    for i in sorted(A.rows, key=lambda i: (len(A.rows[i]), i)):
        rb.add(A.rows[i])
    return rb


def column_space(A: SparseMatrix):
    return row_space(A.transpose())


def rref(A: SparseMatrix):
    """Reduced row echelon data: (pivot_cols sorted, rows keyed by pivot)."""
    rb = row_basis(A.field, A.ncols)
    for i in range(A.nrows):
        row = A.rows.get(i)
        if row:
            rb.add(row)
    if isinstance(rb, Gf2RowBasis):
        pivots = {p: Gf2RowBasis.unpack(m) for p, m in rb.pivots.items()}
    else:
        pivots = rb.pivots
    return sorted(pivots), pivots


def nullspace(A: SparseMatrix) -> list[Vec]:
    """Deterministic kernel basis, one vector per free column."""
    field = A.field
    pivot_cols, pivot_rows = rref(A)
    pivot_set = set(pivot_cols)
    one = field.one()
    basis = []
    for j in range(A.ncols):
        if j in pivot_set:
            continue
        vec: Vec = {j: one}
        for p in pivot_cols:
            v = pivot_rows[p].get(j)
            if v is not None:
                vec[p] = field.neg(v)
        basis.append(vec)
    return basis


def solve(A: SparseMatrix, b: Vec) -> Vec | None:
    """One solution x of A x = b, or None when inconsistent."""
    field = A.field
    n = A.ncols
    # eliminate rows of [A | b]; the augmented column gets index n, which is
    # the largest index, so it can only become a pivot in an inconsistent row
    aug = row_basis(field, n + 1)
    for i in range(A.nrows):
        row = dict(A.rows.get(i, {}))
        v = b.get(i)
        if v is not None and v != field.zero():
            row[n] = v
        if row:
            aug.add(row)
    x: Vec = {}
    # rows are fully reduced: with free variables set to 0, x_pivot = rhs
    for row in aug.basis_rows():
        piv = min(row)
        if piv == n:
            return None
        v = row.get(n)
        if v is not None and v != field.zero():
            x[piv] = v
    return x


def quotient_dim(field: Field, ncols: int, sub_vectors, ambient_vectors) -> int:
    """dim(span(ambient) / span(sub)); both given as vector iterables."""
    rb = row_basis(field, ncols)
    for v in sub_vectors:
        rb.add(v)
    base = rb.dim()
    for v in ambient_vectors:
        rb.add(v)
    return rb.dim() - base


def quotient_representatives(field: Field, ncols: int, sub_vectors, ambient_vectors) -> list[Vec]:
    """Ambient vectors whose classes form a basis of ambient/sub, in order."""
    rb = row_basis(field, ncols)
    for v in sub_vectors:
        rb.add(v)
    reps = []
    for v in ambient_vectors:
        if rb.add(v):
            reps.append(dict(v))
    return reps
