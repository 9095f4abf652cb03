"""
Seeded random scalars, vectors, subspaces and matrices.

Entries are small integers (|re|, |im| <= bound over Q(i)) so that exact
elimination stays cheap; every draw goes through a SplitMix64 stream.
"""

from .linalg import Matrix, is_zero_vector
from .scalars import GaussianRational, PrimeFieldElement, Rational
from .subspaces import Subspace, span, subspace_sum

DEFAULT_BOUND = 4


def random_scalar(field, rng, bound=DEFAULT_BOUND):
    """Uniform small scalar of ``field``."""
    if field.is_finite:
        return PrimeFieldElement(rng.randbelow(field.modulus), field.modulus)
    if field.has_conjugation:
        return GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound))
    return Rational(rng.randint(-bound, bound))


def random_vector(n, field, rng, bound=DEFAULT_BOUND, nonzero=False):
    """Random vector of length n, redrawn until nonzero when asked."""
    while True:
        vector = tuple(random_scalar(field, rng, bound) for _ in range(n))
        if not nonzero or not is_zero_vector(vector):
            return vector


def random_subspace(n, field, rng, dim=None, bound=DEFAULT_BOUND):
    """
    Random subspace of F^n.

    Args:
        n (int): ambient dimension.
        field (FieldTag): coefficient field.
        rng (SplitMix64): random stream.
        dim (int, optional): target dimension, uniform in [0, n] when omitted.
        bound (int): entry bound.

    Returns:
        Subspace: a subspace of exactly the requested dimension.
    """
    if dim is None:
        dim = rng.randint(0, n)
    current = Subspace.zero(n, field)
    while current.dim < dim:
        line = span([random_vector(n, field, rng, bound)], n, field)
        current = subspace_sum(current, line)
    return current


def random_subspace_within(container, rng, dim=None, bound=DEFAULT_BOUND):
    """Random subspace of ``container`` built from combinations of its basis."""
    if dim is None:
        dim = rng.randint(0, container.dim)
    n, field = container.ambient_dim, container.field
    current = Subspace.zero(n, field)
    while current.dim < dim:
        coefficients = random_vector(container.dim, field, rng, bound)
        vector = tuple(
            sum(
                (c * row[j] for c, row in zip(coefficients, container.rows)),
                field.zero(),
            )
            for j in range(n)
        )
        current = subspace_sum(current, span([vector], n, field))
    return current


def random_nested_pair(n, field, rng, bound=DEFAULT_BOUND):
    """A pair (X, X + W) with X and W independent random subspaces."""
    x = random_subspace(n, field, rng, bound=bound)
    w = random_subspace(n, field, rng, bound=bound)
    return x, subspace_sum(x, w)


def random_invertible_matrix(n, field, rng, bound=DEFAULT_BOUND):
    """Random n x n matrix, redrawn until it has full rank."""
    while True:
        matrix = Matrix(
            (random_vector(n, field, rng, bound) for _ in range(n)), field, n
        )
        if matrix.is_invertible():
            return matrix
