"""
Dense exact matrices over a single FieldTag and the Gauss-Jordan routines the
subspace layer is built on.

Vectors are plain tuples of Scalars. Matrices act on column vectors, so the
image of a vector v under A is ``A @ v``.
"""

from .scalars import FieldMismatchError, ScalarParseError, FieldTag, parse_scalar


class SingularMatrixError(Exception):
    """Custom exception for inverting a singular matrix."""


class DimensionMismatchError(ValueError):
    """Custom exception for incompatible matrix or vector shapes."""


def _check_field(values, field):
    for value in values:
        if value.field != field:
            raise FieldMismatchError(f"Entry {value} is not in {field}")


def dot(x, y):
    """Bilinear pairing sum x_i * y_i (no conjugation)."""
    if len(x) != len(y):
        raise DimensionMismatchError("Vectors of different length")
    total = x[0].field.zero() if x else None
    for a, b in zip(x, y):
        total = total + a * b
    return total


def conj_vector(v):
    """Entrywise involution of a vector."""
    return tuple(value.conj() for value in v)


def _add_vectors(x, y):
    """Entrywise sum."""
    return tuple(a + b for a, b in zip(x, y))


def _scale_vector(c, v):
    """Scalar multiple c*v."""
    return tuple(c * value for value in v)


def unit_vector(n, i, field):
    """The i-th standard basis vector, 0-based."""
    zero, one = field.zero(), field.one()
    return tuple(one if j == i else zero for j in range(n))


def is_zero_vector(v):
    """True when every entry vanishes."""
    return all(value.is_zero() for value in v)


class Matrix:
    """
    Immutable rows x cols matrix of Scalars from one field.

    Attributes:
        rows (int): number of rows (may be 0).
        cols (int): number of columns.
        field (FieldTag): coefficient field.
        entries (tuple): row-major tuple of row tuples.
    """

    __slots__ = ("rows", "cols", "field", "entries")

    def __init__(self, entries, field, cols=None):
        entries = tuple(tuple(row) for row in entries)
        if cols is None:
            if not entries:
                raise DimensionMismatchError("Empty matrix needs a column count")
            cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise DimensionMismatchError("Ragged matrix rows")
            _check_field(row, field)
        self.rows = len(entries)
        self.cols = cols
        self.field = field
        self.entries = entries

    @classmethod
    def identity(cls, n, field):
        """n x n identity."""
        return cls((unit_vector(n, i, field) for i in range(n)), field, n)

    @classmethod
    def zeros(cls, rows, cols, field):
        """rows x cols zero matrix."""
        zero = field.zero()
        return cls(((zero,) * cols for _ in range(rows)), field, cols)

    @classmethod
    def from_columns(cls, columns, field):
        """Build a matrix whose j-th column is ``columns[j]`` (at least one column)."""
        columns = [tuple(column) for column in columns]
        if not columns:
            raise DimensionMismatchError("from_columns needs at least one column")
        return cls(zip(*columns), field, len(columns))

    @classmethod
    def from_ints(cls, rows, field):
        """Convenience constructor from nested integer lists."""
        return cls(([field.from_int(value) for value in row] for row in rows), field)

    @property
    def shape(self):
        """(rows, cols)."""
        return (self.rows, self.cols)

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def row(self, i):
        """The i-th row as a vector."""
        return self.entries[i]

    def column(self, j):
        """The j-th column as a vector."""
        return tuple(row[j] for row in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(value) for value in row) for row in self.entries)
        return f"Matrix[{self.field}]({self.rows}x{self.cols}: {body})"

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatchError(
                f"Shape {self.shape} does not match {other.shape}"
            )
        if self.field != other.field:
            raise FieldMismatchError(f"Cannot combine {self.field} with {other.field}")

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(
            (_add_vectors(a, b) for a, b in zip(self.entries, other.entries)),
            self.field,
            self.cols,
        )

    def __neg__(self):
        return Matrix(
            (tuple(-value for value in row) for row in self.entries),
            self.field,
            self.cols,
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Scalar multiple c*A."""
        return Matrix(
            (_scale_vector(c, row) for row in self.entries), self.field, self.cols
        )

    def apply(self, v):
        """Matrix-vector product A v."""
        if len(v) != self.cols:
            raise DimensionMismatchError(
                f"Vector of length {len(v)} for {self.rows}x{self.cols}"
            )
        _check_field(v, self.field)
        zero = self.field.zero()
        out = []
        for row in self.entries:
            total = zero
            for a, b in zip(row, v):
                if not a.is_zero() and not b.is_zero():
                    total = total + a * b
            out.append(total)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, tuple):
            return self.apply(other)
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"Cannot multiply {self.shape} by {other.shape}"
            )
        if self.field != other.field:
            raise FieldMismatchError(f"Cannot combine {self.field} with {other.field}")
        columns = [other.column(j) for j in range(other.cols)]
        return Matrix(
            (tuple(dot(row, column) if row else self.field.zero() for column in columns)
             for row in self.entries),
            self.field,
            other.cols,
        )

    def transpose(self):
        """A^T."""
        return Matrix((self.column(j) for j in range(self.cols)), self.field, self.rows)

    def conj(self):
        """Entrywise involution."""
        return Matrix((conj_vector(row) for row in self.entries), self.field, self.cols)

    def conj_transpose(self):
        """
        The adjoint A* = conj(A)^T.

        Raises:
            FieldMismatchError: over GF(p), where the form is not positive definite.
        """
        if self.field.is_finite:
            raise FieldMismatchError("Adjoint is only defined over Q and Q(i)")
        return self.conj().transpose()

    def is_zero(self):
        """True when all entries vanish."""
        return all(is_zero_vector(row) for row in self.entries)

    def is_square(self):
        """True for n x n matrices."""
        return self.rows == self.cols

    def rref(self):
        """
        Reduced row echelon form with zero rows dropped.

        The pivot of each row is its first nonzero entry, scaled to 1, and
        every other entry of a pivot column is 0.

        Returns:
            tuple: (Matrix of nonzero RREF rows, tuple of pivot columns).
        """
        work = [list(row) for row in self.entries]
        pivots = []
        lead = 0
        for col in range(self.cols):
            pivot_row = None
            for r in range(lead, len(work)):
                if not work[r][col].is_zero():
                    pivot_row = r
                    break
            if pivot_row is None:
                continue
            work[lead], work[pivot_row] = work[pivot_row], work[lead]
            inv = work[lead][col].inverse()
            work[lead] = [value * inv for value in work[lead]]
            for r in range(len(work)):
                if r != lead and not work[r][col].is_zero():
                    factor = work[r][col]
                    work[r] = [a - factor * b for a, b in zip(work[r], work[lead])]
            pivots.append(col)
            lead += 1
            if lead == len(work):
                break
        return Matrix(work[:lead], self.field, self.cols), tuple(pivots)

    def rank(self):
        """Number of RREF pivots."""
        return len(self.rref()[1])

    def nullspace_basis(self):
        """
        Basis of {v : A v = 0} read off the RREF, one vector per free column.
        """
        reduced, pivots = self.rref()
        zero, one = self.field.zero(), self.field.one()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            vector = [zero] * self.cols
            vector[free] = one
            for r, pivot in enumerate(pivots):
                vector[pivot] = -reduced[r, free]
            basis.append(tuple(vector))
        return basis

    def inverse(self):
        """
        Gauss-Jordan inverse.

        Raises:
            DimensionMismatchError: for non-square matrices.
            SingularMatrixError: if the matrix is not invertible.
        """
        if not self.is_square():
            raise DimensionMismatchError("Only square matrices have inverses")
        n = self.rows
        identity = Matrix.identity(n, self.field)
        augmented = Matrix(
            (row + identity.row(i) for i, row in enumerate(self.entries)),
            self.field,
            2 * n,
        )
        reduced, pivots = augmented.rref()
        if pivots[:n] != tuple(range(n)) or len(reduced.entries) < n:
            raise SingularMatrixError("Matrix is singular")
        return Matrix((row[n:] for row in reduced.entries), self.field, n)

    def is_invertible(self):
        """True for square matrices of full rank."""
        return self.is_square() and self.rank() == self.rows

    def determinant(self):
        """Determinant by Gaussian elimination."""
        if not self.is_square():
            raise DimensionMismatchError("Only square matrices have determinants")
        work = [list(row) for row in self.entries]
        det = self.field.one()
        for col in range(self.rows):
            pivot_row = next(
                (r for r in range(col, self.rows) if not work[r][col].is_zero()), None
            )
            if pivot_row is None:
                return self.field.zero()
            if pivot_row != col:
                work[col], work[pivot_row] = work[pivot_row], work[col]
                det = -det
            det = det * work[col][col]
            inv = work[col][col].inverse()
            for r in range(col + 1, self.rows):
                if not work[r][col].is_zero():
                    factor = work[r][col] * inv
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return det

    def scalar_multiple_of_identity(self):
        """Return c if A == c*Id, else None."""
        if not self.is_square():
            return None
        c = self.entries[0][0] if self.rows else self.field.one()
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                if value != (c if i == j else self.field.zero()):
                    return None
        return c

    def to_json(self):
        """JSON-ready dict with exact textual entries."""
        return {
            "field": str(self.field),
            "cols": self.cols,
            "rows": [[str(value) for value in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, payload):
        """
        Inverse of ``to_json``.

        Raises:
            ScalarParseError: for malformed entries or a missing field.
        """
        try:
            field = FieldTag.parse(payload["field"])
            rows = payload["rows"]
        except (KeyError, TypeError) as error:
            raise ScalarParseError(f"Malformed matrix payload: {error}") from error
        cols = payload.get("cols", len(rows[0]) if rows else 0)
        return cls(
            ([parse_scalar(str(value), field) for value in row] for row in rows),
            field,
            cols,
        )


def stack(top, bottom):
    """Vertical concatenation of two matrices with equal column counts."""
    if top.cols != bottom.cols:
        raise DimensionMismatchError("Cannot stack matrices of different widths")
    if top.field != bottom.field:
        raise FieldMismatchError(f"Cannot combine {top.field} with {bottom.field}")
    return Matrix(top.entries + bottom.entries, top.field, top.cols)
