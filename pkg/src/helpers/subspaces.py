"""
Canonical subspaces of F^n and the lattice operations on them.

A Subspace is stored as its RREF basis rows, so two subspaces are equal
exactly when their bases are equal. Sums stack and reduce; intersections go
through annihilators, so no operation here needs an inner product.
"""

import itertools
import logging
from functools import lru_cache

from .linalg import DimensionMismatchError, Matrix, is_zero_vector, stack
from .scalars import FieldMismatchError, FieldTag, PrimeFieldElement, ScalarParseError

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10 ** 6


class SizeCapExceededError(Exception):
    """Custom exception for enumerations larger than the configured cap."""


class SubspaceEncodingError(ScalarParseError):
    """Custom exception for malformed subspace JSON payloads."""


class Subspace:
    """
    A subspace of F^n in canonical form.

    Attributes:
        ambient_dim (int): n.
        field (FieldTag): coefficient field.
        rows (tuple): RREF basis rows, one tuple of Scalars per row.
        pivots (tuple): pivot column of each row.
    """

    __slots__ = ("ambient_dim", "field", "rows", "pivots", "_hash")

    def __init__(self, rows, pivots, ambient_dim, field):
        self.ambient_dim = ambient_dim
        self.field = field
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)
        self._hash = hash((ambient_dim, field, self.rows))

    @classmethod
    def from_matrix(cls, matrix):
        """Row space of ``matrix``, reduced to canonical form."""
        reduced, pivots = matrix.rref()
        return cls(reduced.entries, pivots, matrix.cols, matrix.field)

    @classmethod
    def zero(cls, n, field):
        """The zero subspace of F^n."""
        return cls((), (), n, field)

    @classmethod
    def full(cls, n, field):
        """F^n itself."""
        identity = Matrix.identity(n, field)
        return cls(identity.entries, tuple(range(n)), n, field)

    @property
    def dim(self):
        """Dimension."""
        return len(self.rows)

    @property
    def basis(self):
        """The canonical basis as a dim x n Matrix."""
        return Matrix(self.rows, self.field, self.ambient_dim)

    def is_zero(self):
        """True for the zero subspace."""
        return not self.rows

    def is_full(self):
        """True for the whole ambient space."""
        return len(self.rows) == self.ambient_dim

    def residual(self, v):
        """Reduce v against the RREF basis; the result is 0 iff v lies in self."""
        v = list(v)
        for row, pivot in zip(self.rows, self.pivots):
            coeff = v[pivot]
            if not coeff.is_zero():
                v = [a - coeff * b for a, b in zip(v, row)]
        return tuple(v)

    def contains_vector(self, v):
        """Membership test for a single vector."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("Vector length differs from ambient dimension")
        return is_zero_vector(self.residual(v))

    def sort_key(self):
        """Deterministic total order: dimension, pivots, then entries."""
        return (
            self.dim,
            self.pivots,
            tuple(value.sort_key() for row in self.rows for value in row),
        )

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self._hash == other._hash
            and self.ambient_dim == other.ambient_dim
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        return subspace_sum(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __le__(self, other):
        return contains(other, self)

    def __ge__(self, other):
        return contains(self, other)

    def __repr__(self):
        rows = "; ".join(" ".join(str(value) for value in row) for row in self.rows)
        return f"Subspace[{self.field}^{self.ambient_dim}, dim {self.dim}]({rows})"

    def to_json(self):
        """Canonical JSON form used for report witnesses."""
        return {
            "ambient_dim": self.ambient_dim,
            "field": str(self.field),
            "rows": [[str(value) for value in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, payload):
        """
        Rebuild (and re-canonicalise) a subspace from ``to_json`` output.

        Raises:
            SubspaceEncodingError: on malformed payloads.
        """
        try:
            n = int(payload["ambient_dim"])
            rows = payload["rows"]
            field = FieldTag.parse(payload["field"])
        except (KeyError, TypeError, ValueError) as error:
            raise SubspaceEncodingError(f"Malformed subspace: {error}") from error
        if not rows:
            return cls.zero(n, field)
        return cls.from_matrix(
            Matrix.from_json({"field": payload["field"], "cols": n, "rows": rows})
        )


def _check_compatible(x, y):
    if x.ambient_dim != y.ambient_dim:
        raise DimensionMismatchError(
            f"Ambient dimensions {x.ambient_dim} and {y.ambient_dim} differ"
        )
    if x.field != y.field:
        raise FieldMismatchError(f"Cannot combine {x.field} with {y.field}")


def span(vectors, ambient_dim, field):
    """
    Canonical subspace spanned by ``vectors`` (possibly none).

    Raises:
        DimensionMismatchError: if a vector has the wrong length.
    """
    vectors = [tuple(v) for v in vectors]
    for v in vectors:
        if len(v) != ambient_dim:
            raise DimensionMismatchError("Vector length differs from ambient dimension")
    if not vectors:
        return Subspace.zero(ambient_dim, field)
    return Subspace.from_matrix(Matrix(vectors, field, ambient_dim))


def kernel(matrix):
    """{v : M v = 0} as a canonical subspace of F^cols."""
    return span(matrix.nullspace_basis(), matrix.cols, matrix.field)


def subspace_sum(x, y):
    """X + Y."""
    _check_compatible(x, y)
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    return Subspace.from_matrix(stack(x.basis, y.basis))


@lru_cache(maxsize=8192)
def annihilator(x):
    """
    X^0 = {v : <v, x> = 0 for all x in X} under the bilinear pairing,
    i.e. the kernel of the basis matrix.
    """
    if x.is_zero():
        return Subspace.full(x.ambient_dim, x.field)
    return kernel(x.basis)


def intersect(x, y):
    """X cap Y, computed as the annihilator of X^0 + Y^0."""
    _check_compatible(x, y)
    if x.is_full():
        return y
    if y.is_full():
        return x
    if x.is_zero() or y.is_zero():
        return Subspace.zero(x.ambient_dim, x.field)
    constraints = subspace_sum(annihilator(x), annihilator(y))
    return kernel(constraints.basis)


def contains(x, y):
    """True when Y is a subspace of X."""
    _check_compatible(x, y)
    if y.dim > x.dim:
        return False
    return all(is_zero_vector(x.residual(row)) for row in y.rows)


def meet_dim(x, y):
    """dim(X cap Y) via dim X + dim Y - dim(X + Y)."""
    return x.dim + y.dim - subspace_sum(x, y).dim


def gaussian_binomial(n, k, q):
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    numerator, denominator = 1, 1
    for i in range(k):
        numerator *= q ** (n - i) - 1
        denominator *= q ** (i + 1) - 1
    return numerator // denominator


def enumerate_subspaces(n, k, p, cap=DEFAULT_ENUMERATION_CAP):
    """
    All k-dimensional subspaces of GF(p)^n in lexicographic RREF order:
    pivot sets in combination order, then free entries as an odometer.

    Raises:
        SizeCapExceededError: if the Gaussian binomial exceeds ``cap``.
        DimensionMismatchError: if k is outside [0, n].
    """
    if k < 0 or k > n:
        raise DimensionMismatchError(f"No {k}-dimensional subspaces in dimension {n}")
    field = FieldTag("GF", p)
    total = gaussian_binomial(n, k, p)
    if total > cap:
        raise SizeCapExceededError(
            f"{total} subspaces of dimension {k} in GF({p})^{n} exceed cap {cap}"
        )
    logger.debug("Enumerating %d %d-subspaces of GF(%d)^%d", total, k, p, n)

    elements = [PrimeFieldElement(r, p) for r in range(p)]
    zero, one = elements[0], elements[1]
    result = []
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free_slots = [
            (r, c)
            for r, pivot in enumerate(pivots)
            for c in range(pivot + 1, n)
            if c not in pivot_set
        ]
        for values in itertools.product(elements, repeat=len(free_slots)):
            rows = [[zero] * n for _ in pivots]
            for r, pivot in enumerate(pivots):
                rows[r][pivot] = one
            for (r, c), value in zip(free_slots, values):
                rows[r][c] = value
            result.append(Subspace((tuple(row) for row in rows), pivots, n, field))
    return result
