"""Testing suite for apartments, inexactness certificates and counts"""

import tempfile
import unittest

from src.helpers.apartments import (
    Apartment,
    AssumptionViolatedError,
    ContainmentCounts,
    IndexOutOfRangeError,
    NotMembersError,
    NotOrthoApartmentError,
    Verdict,
    apartment_of_pair,
    complementary_count,
    count_containing,
    enumerate_apartments,
    exhaustive_inexact_analysis,
    inexactness_certificate_linear,
    inexactness_certificate_ortho,
    johnson_adjacency_check,
    max_complementary_count,
    maximal_inexact_subsets_linear,
    maximality_check,
    noncollinear_check,
    opposite_via_complementary,
    rotated_pair_apartment,
    selectors,
    shared_members,
    standard_apartment,
    verify_maximal_inexact_linear,
)
from src.helpers.cache import DiskCache
from src.helpers.hilbert_logic import is_orthogonal_frame, random_compatible_pair
from src.helpers.rng import SplitMix64
from src.helpers.scalars import GAUSSIAN, RATIONAL, prime_field
from src.helpers.subspaces import span


class TestApartment(unittest.TestCase):
    """Unit tests for apartments and selectors."""

    def setUp(self):
        """Set up the standard apartment of planes in Q^4."""
        self.apartment = standard_apartment(4, 2, RATIONAL)

    def test_members(self):
        """Test that there are C(4, 2) members of dimension 2"""
        members = self.apartment.members()
        self.assertEqual(len(members), 6)
        self.assertTrue(all(member.dim == 2 for member in members))
        self.assertEqual(self.apartment.index_of(members[0]), frozenset({1, 2}))

    def test_identity_ignores_order_and_scale(self):
        """Test that reordering and rescaling the frame gives the same apartment"""
        frame = [tuple(RATIONAL.from_int(3 if i == j else 0) for j in range(4))
                 for i in reversed(range(4))]
        self.assertEqual(Apartment(frame, 2), self.apartment)

    def test_selectors(self):
        """Test |A(+1,-2)| = 2"""
        chosen = selectors(self.apartment, "+1,-2")
        self.assertEqual(set(chosen), {frozenset({1, 3}), frozenset({1, 4})})
        self.assertEqual(len(selectors(self.apartment, (-1,))), 3)

    def test_selector_errors(self):
        """Test out-of-range, repeated and malformed selectors"""
        for selector in ("+5", "+1,-1", "a,b"):
            with self.assertRaises(IndexOutOfRangeError):
                selectors(self.apartment, selector)

    def test_dependent_frame(self):
        """Test that a dependent frame is rejected"""
        one, zero = RATIONAL.one(), RATIONAL.zero()
        with self.assertRaises(AssumptionViolatedError):
            Apartment([(one, zero), (one, zero)], 1)
        gf2 = prime_field(2)
        rows = ((1, 1, 0), (0, 1, 1), (1, 0, 1))
        frame = [tuple(gf2.from_int(value) for value in row) for row in rows]
        with self.assertRaisesRegex(AssumptionViolatedError, "not independent"):
            Apartment(frame, 1)

    def test_non_orthogonal_frame(self):
        """Test that ortho=True needs an orthogonal frame"""
        one, zero = GAUSSIAN.one(), GAUSSIAN.zero()
        with self.assertRaises(NotOrthoApartmentError):
            Apartment([(one, zero), (one, one)], 1, ortho=True)

    def test_johnson_adjacency(self):
        """Test that members form the Johnson graph"""
        self.assertTrue(johnson_adjacency_check(self.apartment).passed)


class TestLinearCertificates(unittest.TestCase):
    """Unit tests for the linear inexactness certificate."""

    def setUp(self):
        """Set up the standard apartment of planes in GF(2)^4."""
        self.apartment = standard_apartment(4, 2, prime_field(2))

    def test_all_members_exact(self):
        """Test that the whole apartment is exact"""
        certificate = inexactness_certificate_linear(
            self.apartment, self.apartment.index_sets
        )
        self.assertEqual(certificate.verdict, Verdict.EXACT)
        self.assertEqual(certificate.s_dims, (1, 1, 1, 1))

    def test_single_member_inexact(self):
        """Test that one member lies in another apartment"""
        certificate = inexactness_certificate_linear(self.apartment, [{1, 2}])
        self.assertFalse(certificate.is_exact)
        self.assertEqual((certificate.index, certificate.partner), (1, 2))
        self.assertNotEqual(certificate.witness, self.apartment)
        self.assertTrue(certificate.witness.contains(self.apartment.member({1, 2})))

    def test_empty_subset_inexact(self):
        """Test that the empty subset is inexact"""
        self.assertFalse(inexactness_certificate_linear(self.apartment, []).is_exact)

    def test_not_members(self):
        """Test that a foreign subspace is rejected"""
        field = prime_field(2)
        foreign = span(
            [tuple(field.from_int(v) for v in row)
             for row in ([1, 1, 0, 0], [0, 0, 1, 0])],
            4,
            field,
        )
        with self.assertRaises(NotMembersError):
            inexactness_certificate_linear(self.apartment, [foreign])

    def test_maximal_inexact_subsets(self):
        """Test the 12 maximal inexact subsets and their maximality"""
        entries = maximal_inexact_subsets_linear(self.apartment)
        self.assertEqual(len(entries), 12)
        self.assertTrue(all(len(entry.index_sets) == 4 for entry in entries))
        self.assertTrue(verify_maximal_inexact_linear(self.apartment).passed)

    def test_standing_assumption(self):
        """Test that n < 2k is rejected"""
        with self.assertRaises(AssumptionViolatedError):
            maximal_inexact_subsets_linear(standard_apartment(4, 3, prime_field(2)))

    def test_shared_members_of_replacement(self):
        """Test shared members with the e1 -> e1 + e2 apartment"""
        witness = inexactness_certificate_linear(self.apartment, [{1, 2}]).witness
        shared = shared_members(self.apartment, witness)
        self.assertIn(frozenset({1, 2}), shared)
        self.assertNotIn(frozenset({1, 3}), shared)


class TestComplementaryCounts(unittest.TestCase):
    """Unit tests for complementary and orthocomplementary subsets."""

    def setUp(self):
        """Set up standard apartments in dimensions 4 and 6."""
        self.small = standard_apartment(4, 2, prime_field(3))
        self.large = standard_apartment(6, 2, GAUSSIAN)

    def test_opposite_via_complementary(self):
        """Test opposite and non-opposite pairs"""
        self.assertTrue(opposite_via_complementary(self.small, {1, 2}, {3, 4}))
        self.assertFalse(opposite_via_complementary(self.small, {1, 2}, {1, 3}))

    def test_complementary_count(self):
        """Test the closed form for adjacent members"""
        count = complementary_count(self.small, {1, 2}, {1, 3})
        self.assertEqual(count, 1)
        self.assertEqual(count, max_complementary_count(self.small))

    def test_containment_counts(self):
        """Test the type counts (4, 0) and (1, 3)"""
        self.assertEqual(
            count_containing(self.large, {1, 2}, {3, 4}), ContainmentCounts(4, 0)
        )
        self.assertEqual(
            count_containing(self.large, {1, 2}, {1, 3}), ContainmentCounts(1, 3)
        )

    def test_containment_counts_need_distinct_members(self):
        """Test X == Y"""
        with self.assertRaises(AssumptionViolatedError):
            count_containing(self.large, {1, 2}, {1, 2})


class TestOrthogonalApartments(unittest.TestCase):
    """Unit tests for apartments built from orthogonal frames."""

    def setUp(self):
        """Set up the standard orthogonal apartment of lines in Q(i)^3."""
        self.apartment = standard_apartment(3, 1, GAUSSIAN)

    def test_all_members_exact(self):
        """Test that every S_i is a line for the whole apartment"""
        certificate = inexactness_certificate_ortho(
            self.apartment, self.apartment.index_sets
        )
        self.assertTrue(certificate.is_exact)

    def test_empty_subset_rotates(self):
        """Test that the empty subset is certified by a rotated pair"""
        certificate = inexactness_certificate_ortho(self.apartment, [])
        self.assertFalse(certificate.is_exact)
        self.assertTrue(certificate.witness.ortho)

    def test_rotated_pair_is_orthogonal(self):
        """Test rotated_pair_apartment keeps orthogonality"""
        rotated = rotated_pair_apartment(self.apartment, 1, 2)
        self.assertTrue(is_orthogonal_frame(rotated.frame))
        self.assertEqual(shared_members(self.apartment, rotated), {frozenset({3})})

    def test_rotation_needs_orthogonal_apartment(self):
        """Test the linear apartment is rejected"""
        with self.assertRaises(NotOrthoApartmentError):
            rotated_pair_apartment(standard_apartment(3, 1, prime_field(2)), 1, 2)

    def test_maximality_check(self):
        """Test that the diagonal line breaks compatibility"""
        one, zero = GAUSSIAN.one(), GAUSSIAN.zero()
        diagonal = span([(one, one, zero)], 3, GAUSSIAN)
        candidates = [diagonal, self.apartment.member({1})]
        result = maximality_check(self.apartment, candidates)
        self.assertEqual(result.samples, 1)
        self.assertTrue(result.passed)

    def test_apartment_of_compatible_pair(self):
        """Test that a compatible pair lies in one orthogonal apartment"""
        rng = SplitMix64(17)
        x, y = random_compatible_pair(4, rng)
        while x.dim != y.dim or x.dim in (0, 4):
            x, y = random_compatible_pair(4, rng)
        apartment = apartment_of_pair(x, y, ortho=True)
        self.assertTrue(apartment.contains(x))
        self.assertTrue(apartment.contains(y))


class TestEnumeration(unittest.TestCase):
    """Unit tests for apartment enumeration over GF(2)."""

    def test_linear_apartment_of_pair(self):
        """Test apartment_of_pair over a prime field"""
        apartment = standard_apartment(4, 2, prime_field(2))
        x = apartment.member({1, 2})
        y = inexactness_certificate_linear(apartment, [{3, 4}]).witness.member({1, 3})
        pair_apartment = apartment_of_pair(x, y)
        self.assertTrue(pair_apartment.contains(x) and pair_apartment.contains(y))

    def test_enumeration_uses_cache(self):
        """Test 840 apartments and the disk cache round trip"""
        with tempfile.TemporaryDirectory() as directory:
            cache = DiskCache(directory)
            first = enumerate_apartments(4, 2, 2, cache=cache)
            self.assertTrue(cache.path_for("apartments-n4-p2").exists())
            second = enumerate_apartments(4, 2, 2, cache=cache)
        self.assertEqual(len(first), 840)
        self.assertEqual(first, second)

    def test_exhaustive_analysis(self):
        """Test the certificate against the enumeration"""
        report = exhaustive_inexact_analysis(4, 2, 2)
        self.assertEqual(report.apartment_count, 840)
        self.assertEqual(report.maximal_found, report.maximal_expected)
        self.assertTrue(all(check.passed for check in report.checks))

    def test_noncollinear_points(self):
        """Test that three points share an apartment iff not collinear"""
        result = noncollinear_check(3, 2)
        self.assertEqual(result.samples, 35)
        self.assertTrue(result.passed)


if __name__ == "__main__":
    unittest.main()
