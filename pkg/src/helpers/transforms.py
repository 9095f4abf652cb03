"""
Semilinear maps on Q(i)^n and finite maps on families of subspaces, with
checkers for the relations a logic automorphism must preserve.

Every preservation verdict here is scoped to the listed family or pairs; the
reports say so in their notes.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .generators import random_invertible_matrix
from .hilbert_logic import (
    is_compatible,
    is_orthogonal,
    is_positive,
    orthocomplement,
)
from .linalg import (
    DimensionMismatchError,
    Matrix,
    SingularMatrixError,
    conj_vector,
    unit_vector,
)
from .reports import CheckResult, witness_of
from .scalars import GAUSSIAN, FieldMismatchError, GaussianRational
from .subspaces import contains, intersect, span

logger = logging.getLogger(__name__)

SAMPLE_SCOPE_NOTE = "verdict covers the listed pairs only"
PLANE_NOTE = "n = 2: treated exactly like n >= 3"


class NotInvertibleError(Exception):
    """Custom exception for semilinear maps with a singular matrix."""


class NotComplementClosedError(Exception):
    """Custom exception for pi-families missing an orthocomplement."""


class NotLogicAutomorphismError(Exception):
    """Custom exception for maps that are not multiples of (anti-)unitaries."""


class Sigma(Enum):
    IDENTITY = "identity"
    CONJUGATION = "conjugation"


@dataclass(frozen=True)
class SemilinearMap:
    """
    x -> A sigma(x) with sigma applied coordinatewise.

    Raises:
        FieldMismatchError: for conjugation outside Q(i).
        NotInvertibleError: if A is singular.
    """

    matrix: Matrix
    sigma: Sigma = Sigma.IDENTITY

    def __post_init__(self):
        conjugating = self.sigma is Sigma.CONJUGATION
        if conjugating and not self.matrix.field.has_conjugation:
            raise FieldMismatchError("Conjugation-linear maps need Q(i)")
        if not self.matrix.is_invertible():
            raise NotInvertibleError("Semilinear maps need an invertible matrix")

    @property
    def n(self):
        return self.matrix.rows

    @property
    def field(self):
        return self.matrix.field

    def apply_vector(self, v):
        """A sigma(v)."""
        if self.sigma is Sigma.CONJUGATION:
            v = conj_vector(v)
        return self.matrix @ tuple(v)

    def to_json(self):
        return {"matrix": self.matrix.to_json(), "sigma": self.sigma.value}


def apply(semilinear, x):
    """L(X) as the span of the images of the basis rows."""
    images = (semilinear.apply_vector(row) for row in x.rows)
    return span(images, x.ambient_dim, x.field)


def gram_matrix(semilinear):
    """A* A."""
    return semilinear.matrix.conj_transpose() @ semilinear.matrix


def unitary_up_to_scalar(semilinear):
    """
    The positive rational c with A* A = c Id, or None.

    The square root of c is never formed; the equation itself certifies that
    L / sqrt(c) is unitary or anti-unitary.
    """
    c = gram_matrix(semilinear).scalar_multiple_of_identity()
    if c is None or not is_positive(c):
        return None
    return c.re if isinstance(c, GaussianRational) else c.value


def is_unitary(semilinear):
    """sigma = identity and A* A = Id."""
    return (
        semilinear.sigma is Sigma.IDENTITY and unitary_up_to_scalar(semilinear) == 1
    )


def is_antiunitary(semilinear):
    """sigma = conjugation and A* A = Id."""
    return (
        semilinear.sigma is Sigma.CONJUGATION and unitary_up_to_scalar(semilinear) == 1
    )


def _line(v):
    return span([v], len(v), v[0].field)


def orthogonality_violation(semilinear):
    """
    An orthogonal pair of lines whose images are not orthogonal, or None.

    Standard-basis pairs expose a nonzero off-diagonal entry of A* A; pairs
    e_i + e_j, e_i - e_j expose unequal diagonal entries. Together they
    find a witness whenever A* A is not a scalar matrix.
    """
    n, field_tag = semilinear.n, semilinear.field
    basis = [unit_vector(n, i, field_tag) for i in range(n)]
    candidates = [(basis[i], basis[j]) for i in range(n) for j in range(i + 1, n)]
    candidates += [
        (
            tuple(a + b for a, b in zip(basis[i], basis[j])),
            tuple(a - b for a, b in zip(basis[i], basis[j])),
        )
        for i in range(n)
        for j in range(i + 1, n)
    ]
    for u, v in candidates:
        x, y = _line(u), _line(v)
        if not is_orthogonal(apply(semilinear, x), apply(semilinear, y)):
            return x, y
    return None


def dual_action_check(matrix, subspaces):
    """
    (A^-1)* == (A*)^-1, and A(X^perp)^perp == (A*)^-1 (X) on every sample.

    Returns:
        list[CheckResult]: the matrix identity and the per-subspace equality.
    """
    try:
        inverse = matrix.inverse()
    except SingularMatrixError as error:
        raise NotInvertibleError("Dual action needs an invertible matrix") from error
    adjoint_inverse = matrix.conj_transpose().inverse()

    identity_check = CheckResult("adjoint_inverse", "(A^-1)* = (A*)^-1")
    identity_check.record(
        inverse.conj_transpose() == adjoint_inverse, witness_of(matrix=matrix)
    )

    forward = SemilinearMap(matrix)
    dual = SemilinearMap(adjoint_inverse)
    action_check = CheckResult("dual_action", "A(X^perp)^perp = (A*)^-1 X")
    for x in subspaces:
        left = orthocomplement(apply(forward, orthocomplement(x)))
        right = apply(dual, x)
        action_check.record(left == right, witness_of(matrix=matrix, x=x))
    return [identity_check, action_check]


class SubspaceMap:
    """A finite explicit map on a listed family of subspaces."""

    def __init__(self, table):
        self.table = dict(table)

    @classmethod
    def from_function(cls, func, domain):
        """Tabulate ``func`` on ``domain``."""
        return cls({x: func(x) for x in domain})

    @property
    def domain(self):
        return list(self.table)

    def __call__(self, x):
        return self.table[x]

    def __len__(self):
        return len(self.table)

    def compose(self, inner_map):
        """self after inner_map, on inner_map's domain."""
        return SubspaceMap({x: self(inner_map(x)) for x in inner_map.domain})

    def is_injective(self):
        return len(set(self.table.values())) == len(self.table)


def induced_map(semilinear, domain):
    """X -> L(X) on ``domain``."""
    return SubspaceMap.from_function(lambda x: apply(semilinear, x), domain)


def orthocomplement_map(domain):
    """X -> X^perp on ``domain``."""
    return SubspaceMap.from_function(orthocomplement, domain)


def pi_transform(family, domain):
    """
    X -> X^perp for X in ``family`` and X -> X otherwise, on ``family`` and
    ``domain``.

    Raises:
        NotComplementClosedError: if the family misses an orthocomplement.
    """
    family = set(family)
    for x in family:
        if orthocomplement(x) not in family:
            raise NotComplementClosedError(
                f"Family misses the orthocomplement of {x!r}"
            )
    listed = sorted(family, key=lambda s: s.sort_key())
    everything = list(dict.fromkeys(list(domain) + listed))
    return SubspaceMap.from_function(
        lambda x: orthocomplement(x) if x in family else x, everything
    )


def _adjacent(x, y):
    return x.dim == y.dim and x != y and intersect(x, y).dim == x.dim - 1


class Relation(Enum):
    ORTHOGONALITY = "orthogonality"
    COMPATIBILITY = "compatibility"
    INCLUSION = "inclusion"
    ADJACENCY = "adjacency"

    def holds(self, x, y):
        """Evaluate the relation on (X, Y); inclusion reads X <= Y."""
        if self is Relation.ORTHOGONALITY:
            return is_orthogonal(x, y)
        if self is Relation.COMPATIBILITY:
            return is_compatible(x, y)
        if self is Relation.INCLUSION:
            return contains(y, x)
        return _adjacent(x, y)


def preserves(relation, mapping, pairs):
    """
    For each pair, the relation before and after ``mapping``; a pair fails
    when the two differ, so the verdict covers both directions.
    """
    relation = Relation(relation)
    result = CheckResult(
        f"preserves_{relation.value}", f"{relation.value} is preserved"
    )
    result.notes.append(SAMPLE_SCOPE_NOTE)
    for x, y in pairs:
        before = relation.holds(x, y)
        after = relation.holds(mapping(x), mapping(y))
        result.record(
            before == after, witness_of(x=x, y=y, before=before, after=after)
        )
    return result


class FactorVerdict(Enum):
    AS_IS = "as_is"
    FLIPPED = "flipped"
    NEITHER = "neither"


def factor_flip_check(mapping, semilinear):
    """
    Compare f(X) with g(X) and g(X)^perp on f's domain.

    Returns:
        tuple: (CheckResult failing on every NEITHER, Counter of verdicts).

    Raises:
        NotLogicAutomorphismError: if g is not a scalar multiple of a unitary
            or anti-unitary map.
    """
    if unitary_up_to_scalar(semilinear) is None:
        raise NotLogicAutomorphismError(
            "g must be a multiple of an (anti-)unitary map"
        )
    result = CheckResult("factor_flip", "f(X) = g(X) or f(X) = g(X)^perp")
    verdicts = Counter()
    for x in mapping.domain:
        image = apply(semilinear, x)
        if mapping(x) == image:
            verdict = FactorVerdict.AS_IS
        elif mapping(x) == orthocomplement(image):
            verdict = FactorVerdict.FLIPPED
        else:
            verdict = FactorVerdict.NEITHER
        verdicts[verdict] += 1
        result.record(verdict is not FactorVerdict.NEITHER, witness_of(x=x))
    if semilinear.n == 2:
        result.notes.append(PLANE_NOTE)
    return result, verdicts


def pair_permutation_map(lines, rng):
    """
    For n = 2: permute the pairs {P, P^perp} of the given lines at random
    and send each pair onto its image pair in a random orientation.
    """
    pairs = []
    seen = set()
    for line in lines:
        if line.ambient_dim != 2 or line.dim != 1:
            raise DimensionMismatchError("Pair permutations act on lines of a plane")
        if line in seen:
            continue
        partner = orthocomplement(line)
        seen.update((line, partner))
        pairs.append((line, partner))
    targets = list(pairs)
    rng.shuffle(targets)
    table = {}
    for (p, p_perp), (q, q_perp) in zip(pairs, targets):
        if rng.randbelow(2):
            q, q_perp = q_perp, q
        table[p] = q
        table[p_perp] = q_perp
    logger.warning(PLANE_NOTE)
    return SubspaceMap(table)


def random_scaled_unitary(n, rng, sigma=Sigma.IDENTITY, rotations=None):
    """
    A semilinear map with A* A = c Id for some integer c > 0.

    A is a monomial matrix with unit phases times a few plane rotations
    [[a, -b], [b, a]] (on two coordinates, a + bi on the others), each
    contributing a^2 + b^2 to c. Its rows form an orthogonal frame.
    """
    phases = [
        GaussianRational(1, 0),
        GaussianRational(0, 1),
        GaussianRational(-1, 0),
        GaussianRational(0, -1),
    ]
    zero = GAUSSIAN.zero()
    order = list(range(n))
    rng.shuffle(order)
    rows = [[zero] * n for _ in range(n)]
    for i, j in enumerate(order):
        rows[i][j] = rng.choice(phases)
    matrix = Matrix(rows, GAUSSIAN, n)
    if rotations is None:
        rotations = rng.randint(0, 2)
    for _ in range(rotations if n > 1 else 0):
        a, b = rng.randint(-2, 2), rng.randint(1, 2)
        i, j = rng.sample(range(n), 2)
        diagonal = GaussianRational(a, b)
        rotation = [
            [diagonal if r == c else zero for c in range(n)] for r in range(n)
        ]
        rotation[i][i] = GaussianRational(a)
        rotation[j][j] = GaussianRational(a)
        rotation[i][j] = GaussianRational(-b)
        rotation[j][i] = GaussianRational(b)
        matrix = Matrix(rotation, GAUSSIAN, n) @ matrix
    return SemilinearMap(matrix, sigma)


def random_non_unitary(n, rng, sigma=Sigma.IDENTITY):
    """A random invertible integer matrix whose A* A is not a scalar."""
    while True:
        matrix = random_invertible_matrix(n, GAUSSIAN, rng)
        candidate = SemilinearMap(matrix, sigma)
        if unitary_up_to_scalar(candidate) is None:
            return candidate
