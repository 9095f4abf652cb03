"""
The Hermitian structure on Q(i)^n: inner product, orthocomplements,
projections, the logic axioms, compatibility and the double commutant of a
compatible pair.

The inner product is <x, y> = sum x_i * conj(y_i), conjugate-linear in the
second argument. Q^n is accepted too (the involution is then trivial); prime
fields are refused because the form is not positive definite there.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .generators import random_invertible_matrix, random_subspace_within
from .linalg import DimensionMismatchError, Matrix, is_zero_vector
from .reports import CheckResult, witness_of
from .scalars import GAUSSIAN, FieldMismatchError
from .subspaces import Subspace, contains, intersect, kernel, span, subspace_sum

logger = logging.getLogger(__name__)


class NotCompatibleError(Exception):
    """Custom exception for operations that need a compatible pair."""


class DegeneratePairError(Exception):
    """Custom exception for pairs with X or Y in {0, H} or X == Y."""


class NotCompatibleSetError(Exception):
    """Custom exception for families that are not pairwise compatible."""


class ZeroProjectionError(ValueError):
    """Custom exception for asking the involution of the zero projection."""


class CriterionDisagreementError(Exception):
    """Custom exception raised when the two compatibility criteria disagree."""

    def __init__(self, x, y, by_decomposition, by_projections):
        super().__init__(
            f"Compatibility criteria disagree: decomposition={by_decomposition}, "
            f"projections={by_projections}"
        )
        self.x = x
        self.y = y


def _require_hermitian(field_tag):
    if field_tag.is_finite:
        raise FieldMismatchError(f"No positive definite form over {field_tag}")


def inner(x, y):
    """
    <x, y> = sum x_i * conj(y_i).

    Raises:
        DimensionMismatchError: if the vectors differ in length.
    """
    if len(x) != len(y):
        raise DimensionMismatchError("Vectors of different length")
    if not x:
        raise DimensionMismatchError("Inner product of empty vectors")
    _require_hermitian(x[0].field)
    total = x[0].field.zero()
    for a, b in zip(x, y):
        total = total + a * b.conj()
    return total


def is_positive(value):
    """True for a positive rational, read in Q or Q(i)."""
    if value.field.has_conjugation:
        return value.is_positive_real()
    return value.value > 0


@lru_cache(maxsize=8192)
def orthocomplement(x):
    """X^perp: the kernel of the conjugated basis rows."""
    _require_hermitian(x.field)
    if x.is_zero():
        return Subspace.full(x.ambient_dim, x.field)
    return kernel(x.basis.conj())


@dataclass(frozen=True)
class Projection:
    """
    Orthogonal projection onto ``image``.

    Attributes:
        matrix (Matrix): P acting on column vectors.
        image (Subspace): X = P(H).
    """

    matrix: Matrix
    image: Subspace

    def kernel(self):
        """ker P, which equals image^perp."""
        return kernel(self.matrix)

    def is_idempotent(self):
        """P^2 == P."""
        return self.matrix @ self.matrix == self.matrix

    def is_self_adjoint(self):
        """P* == P."""
        return self.matrix.conj_transpose() == self.matrix


def column_space(matrix):
    """Span of the columns of ``matrix``."""
    return span(matrix.transpose().entries, matrix.rows, matrix.field)


@lru_cache(maxsize=4096)
def projection_of(x):
    """
    The projection P_X.

    With C the n x k matrix whose columns are the basis of X,
    P = C (C* C)^-1 C*; C* C is the Gram matrix, invertible because the form
    is positive definite.
    """
    _require_hermitian(x.field)
    n = x.ambient_dim
    if x.is_zero():
        return Projection(Matrix.zeros(n, n, x.field), x)
    columns = x.basis.transpose()
    adjoint = columns.conj_transpose()
    gram_inverse = (adjoint @ columns).inverse()
    return Projection(columns @ gram_inverse @ adjoint, x)


def involution_of(projection):
    """
    S = Id - 2P.

    Raises:
        ZeroProjectionError: for P = 0, whose S would be the identity.
    """
    matrix = projection.matrix
    if matrix.is_zero():
        raise ZeroProjectionError("The zero projection has no proper involution")
    identity = Matrix.identity(matrix.rows, matrix.field)
    return identity - matrix.scale(matrix.field.from_int(2))


def projection_from_involution(involution):
    """The inverse map P = (Id - S) / 2."""
    identity = Matrix.identity(involution.rows, involution.field)
    half = involution.field.from_fraction(Fraction(1, 2))
    matrix = (identity - involution).scale(half)
    return Projection(matrix, column_space(matrix))


def is_orthogonal(x, y):
    """X is contained in Y^perp."""
    return contains(orthocomplement(y), x)


def projections_annihilate(x, y):
    """P_X P_Y == 0, the projection route to orthogonality."""
    return (projection_of(x).matrix @ projection_of(y).matrix).is_zero()


def compatible_by_decomposition(x, y):
    """(X cap Y)^perp cap X is orthogonal to (X cap Y)^perp cap Y."""
    rest = orthocomplement(intersect(x, y))
    return is_orthogonal(intersect(rest, x), intersect(rest, y))


def compatible_by_projections(x, y):
    """P_X and P_Y commute."""
    px, py = projection_of(x).matrix, projection_of(y).matrix
    return px @ py == py @ px


def is_compatible(x, y):
    """
    Compatibility of X and Y, evaluated by both criteria.

    Raises:
        CriterionDisagreementError: if the two criteria disagree.
    """
    by_decomposition = compatible_by_decomposition(x, y)
    by_projections = compatible_by_projections(x, y)
    if by_decomposition != by_projections:
        logger.error("Compatibility criteria disagree on %r and %r", x, y)
        raise CriterionDisagreementError(x, y, by_decomposition, by_projections)
    return by_decomposition


@dataclass(frozen=True)
class CompatDecomposition:
    """The pieces X cap Y, X^perp cap Y, X cap Y^perp and X^perp cap Y^perp."""

    z1: Subspace
    z2: Subspace
    z3: Subspace
    z4: Subspace

    def pieces(self):
        """(Z1, Z2, Z3, Z4)."""
        return (self.z1, self.z2, self.z3, self.z4)

    def dims(self):
        """Dimensions of the four pieces."""
        return tuple(piece.dim for piece in self.pieces())

    def nonzero_count(self):
        """Number of nonzero pieces."""
        return sum(1 for piece in self.pieces() if not piece.is_zero())


def decompose(x, y):
    """The four intersections of X, X^perp with Y, Y^perp."""
    x_perp, y_perp = orthocomplement(x), orthocomplement(y)
    return CompatDecomposition(
        intersect(x, y),
        intersect(x_perp, y),
        intersect(x, y_perp),
        intersect(x_perp, y_perp),
    )


def _check_nondegenerate(x, y):
    if x == y:
        raise DegeneratePairError("X and Y coincide")
    for member in (x, y):
        if member.is_zero() or member.is_full():
            raise DegeneratePairError(f"{member!r} is 0 or the whole space")


def _sum_all(subspaces, n, field_tag):
    total = Subspace.zero(n, field_tag)
    for member in subspaces:
        total = subspace_sum(total, member)
    return total


def double_commutant_set(x, y):
    """
    {X, Y}^cc as the set of sums of subsets of the pieces Z1..Z4.

    Raises:
        DegeneratePairError: if X or Y is 0 or H, or X == Y.
        NotCompatibleError: if X and Y are not compatible.
    """
    _check_nondegenerate(x, y)
    if not is_compatible(x, y):
        raise NotCompatibleError("{X, Y}^cc is only computed for compatible pairs")
    pieces = decompose(x, y).pieces()
    members = {
        _sum_all(choice, x.ambient_dim, x.field)
        for size in range(len(pieces) + 1)
        for choice in itertools.combinations(pieces, size)
    }
    return frozenset(members)


def cc_grassmann_members(x, y, k):
    """
    The k-dimensional members of {X, Y}^cc.

    Raises:
        DimensionMismatchError: if X or Y is not k-dimensional.
        NotCompatibleError: if X and Y are not compatible.
    """
    if x.dim != k or y.dim != k:
        raise DimensionMismatchError(f"Both subspaces must have dimension {k}")
    return frozenset(m for m in double_commutant_set(x, y) if m.dim == k)


def sorted_subspaces(subspaces):
    """Deterministic ordering for reports and tests."""
    return sorted(subspaces, key=Subspace.sort_key)


def is_compatible_set(family):
    """Pairwise compatibility of the distinct members of ``family``."""
    members = list(dict.fromkeys(family))
    return all(is_compatible(a, b) for a, b in itertools.combinations(members, 2))


def gram_schmidt(vectors):
    """
    Conjugation-aware Gram-Schmidt without normalisation.

    Dependent inputs are dropped, so the output is an orthogonal basis of
    the span of ``vectors``.
    """
    basis = []
    for v in vectors:
        for u in basis:
            coeff = inner(v, u) / inner(u, u)
            v = tuple(a - coeff * b for a, b in zip(v, u))
        if not is_zero_vector(v):
            basis.append(tuple(v))
    return basis


def extend_to_orthogonal_frame(family, n=None, field_tag=GAUSSIAN):
    """
    Orthogonal basis of H such that each member of ``family`` is spanned by a
    subset of it.

    The ambient space is refined by every member X into X and X^perp pieces,
    dropping empty pieces, and Gram-Schmidt runs inside each final piece.

    Args:
        family (iterable): compatible subspaces of one ambient space.
        n (int, optional): ambient dimension, needed only for an empty family.
        field_tag (FieldTag): field used for an empty family.

    Returns:
        list: orthogonal vectors (tuples of Scalars), one per dimension.

    Raises:
        NotCompatibleSetError: if the family is not pairwise compatible.
    """
    family = list(family)
    if family:
        n, field_tag = family[0].ambient_dim, family[0].field
    elif n is None:
        raise DimensionMismatchError("An empty family needs an ambient dimension")
    if not is_compatible_set(family):
        raise NotCompatibleSetError("Family is not pairwise compatible")

    pieces = [Subspace.full(n, field_tag)]
    for member in family:
        member_perp = orthocomplement(member)
        refined = []
        for piece in pieces:
            for part in (intersect(piece, member), intersect(piece, member_perp)):
                if not part.is_zero():
                    refined.append(part)
        pieces = refined
    if sum(piece.dim for piece in pieces) != n:
        raise NotCompatibleSetError("Refinement does not cover the ambient space")

    frame = []
    for piece in pieces:
        frame.extend(gram_schmidt(piece.rows))
    return frame


def is_orthogonal_frame(vectors):
    """Nonzero and pairwise orthogonal."""
    if any(is_zero_vector(v) for v in vectors):
        return False
    return all(inner(u, v).is_zero() for u, v in itertools.combinations(vectors, 2))


def spanned_by_subset(frame, x):
    """True when the frame vectors lying in X span X."""
    inside = [v for v in frame if x.contains_vector(v)]
    return span(inside, x.ambient_dim, x.field) == x


def random_orthogonal_frame(n, rng, field_tag=GAUSSIAN):
    """Gram-Schmidt applied to the rows of a random invertible integer matrix."""
    matrix = random_invertible_matrix(n, field_tag, rng)
    return gram_schmidt(matrix.entries)


def adapted_frame(x):
    """Orthogonal frame whose first dim X vectors span X and the rest X^perp."""
    return gram_schmidt(x.rows) + gram_schmidt(orthocomplement(x).rows)


def frame_span(frame, indices):
    """Span of the frame vectors at the given 0-based positions."""
    n = len(frame[0])
    return span((frame[i] for i in indices), n, frame[0][0].field)


def random_compatible_pair(n, rng, field_tag=GAUSSIAN):
    """Two random subspaces spanned by subsets of one random orthogonal frame."""
    frame = random_orthogonal_frame(n, rng, field_tag)
    first = [i for i in range(n) if rng.randbelow(2)]
    second = [i for i in range(n) if rng.randbelow(2)]
    return frame_span(frame, first), frame_span(frame, second)


@dataclass
class LogicSample:
    """Inputs for ``verify_logic_axioms``."""

    singles: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    nested_pairs: list = field(default_factory=list)
    triples: list = field(default_factory=list)


AXIOM_ANCHORS = {
    "order_reversing": "X <= Y implies Y^perp <= X^perp",
    "double_complement": "X^perp^perp = X",
    "noncontradiction": "X cap X^perp = 0 and X + X^perp = H",
    "orthomodularity": "X <= Y implies Y = X + (X^perp cap Y)",
    "de_morgan": "(X cap Y)^perp = X^perp + Y^perp, dually for sums",
    "lattice_laws": "sum and meet are commutative, associative and absorptive",
    "modularity": "X <= Z implies X + (Y cap Z) = (X + Y) cap Z",
}


def verify_logic_axioms(sample):
    """
    Check the orthocomplemented-lattice axioms, orthomodularity, the De
    Morgan laws and modularity on a sample.

    Args:
        sample (LogicSample): single subspaces, arbitrary pairs and nested
            pairs (X, Y) with X contained in Y, plus triples for the
            lattice laws and modularity.

    Returns:
        list[CheckResult]: one entry per axiom; failures carry witnesses.
    """
    results = {name: CheckResult(name, text) for name, text in AXIOM_ANCHORS.items()}

    for x in sample.singles:
        x_perp = orthocomplement(x)
        results["double_complement"].record(
            orthocomplement(x_perp) == x, witness_of(x=x)
        )
        results["noncontradiction"].record(
            intersect(x, x_perp).is_zero() and subspace_sum(x, x_perp).is_full(),
            witness_of(x=x),
        )

    for x, y in sample.nested_pairs:
        results["order_reversing"].record(
            contains(orthocomplement(x), orthocomplement(y)), witness_of(x=x, y=y)
        )
        results["orthomodularity"].record(
            subspace_sum(x, intersect(orthocomplement(x), y)) == y,
            witness_of(x=x, y=y),
        )

    for x, y in sample.pairs:
        x_perp, y_perp = orthocomplement(x), orthocomplement(y)
        meet_rule = orthocomplement(intersect(x, y)) == subspace_sum(x_perp, y_perp)
        join_rule = orthocomplement(subspace_sum(x, y)) == intersect(x_perp, y_perp)
        results["de_morgan"].record(meet_rule and join_rule, witness_of(x=x, y=y))

    for x, y, z in sample.triples:
        results["lattice_laws"].record(
            _lattice_laws_hold(x, y, z), witness_of(x=x, y=y, z=z)
        )
        # X cap Z is the part of X below Z
        low = intersect(x, z)
        results["modularity"].record(
            subspace_sum(low, intersect(y, z)) == intersect(subspace_sum(low, y), z),
            witness_of(x=low, y=y, z=z),
        )

    return list(results.values())


def _lattice_laws_hold(x, y, z):
    return (
        subspace_sum(x, y) == subspace_sum(y, x)
        and intersect(x, y) == intersect(y, x)
        and subspace_sum(subspace_sum(x, y), z) == subspace_sum(x, subspace_sum(y, z))
        and intersect(intersect(x, y), z) == intersect(x, intersect(y, z))
        and subspace_sum(x, intersect(x, y)) == x
        and intersect(x, subspace_sum(x, y)) == x
    )


def pieces_commute_check(x, y):
    """For a compatible pair, P_{X cap Y} == P_X P_Y."""
    product = projection_of(x).matrix @ projection_of(y).matrix
    return projection_of(intersect(x, y)).matrix == product


def falsify_double_commutant(x, y, rng, samples):
    """
    Sampled check of {X, Y}^cc against its definition.

    Random Z built piece by piece inside Z1..Z4 lie in {X, Y}^c; every member
    of the computed {X, Y}^cc must then be compatible with each such Z.

    Returns:
        CheckResult: one sample per random Z.
    """
    pieces = decompose(x, y).pieces()
    members = sorted_subspaces(double_commutant_set(x, y))
    result = CheckResult(
        "double_commutant_sampled", "members of {X,Y}^cc commute with {X,Y}^c"
    )
    for _ in range(samples):
        parts = [random_subspace_within(piece, rng) for piece in pieces]
        z = _sum_all(parts, x.ambient_dim, x.field)
        if not (is_compatible(z, x) and is_compatible(z, y)):
            result.record(False, witness_of(x=x, y=y, z=z))
            continue
        offender = next((m for m in members if not is_compatible(m, z)), None)
        result.record(offender is None, witness_of(x=x, y=y, z=z, member=offender))
    return result
