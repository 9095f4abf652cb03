"""Testing suite for the exact scalar fields"""

import unittest
from fractions import Fraction

from src.helpers.generators import random_scalar
from src.helpers.rng import SplitMix64
from src.helpers.scalars import (
    GAUSSIAN,
    RATIONAL,
    DivisionByZeroError,
    FieldMismatchError,
    FieldTag,
    GaussianRational,
    PrimeFieldElement,
    Rational,
    ScalarParseError,
    conj,
    parse_scalar,
    prime_field,
)


class TestFieldTag(unittest.TestCase):
    """Unit tests for FieldTag parsing and embedding."""

    def test_parse_known_fields(self):
        """Test parse for the three supported spellings"""
        self.assertEqual(FieldTag.parse("Q"), RATIONAL)
        self.assertEqual(FieldTag.parse(" Q(i) "), GAUSSIAN)
        self.assertEqual(FieldTag.parse("GF(7)"), prime_field(7))
        self.assertEqual(str(prime_field(7)), "GF(7)")

    def test_parse_rejects_composite_and_large_primes(self):
        """Test that GF(p) needs a prime p <= 97"""
        for text in ("GF(4)", "GF(101)", "GF(1)"):
            with self.assertRaises(ScalarParseError):
                FieldTag.parse(text)

    def test_parse_rejects_garbage(self):
        """Test parse with an unknown name"""
        with self.assertRaisesRegex(ScalarParseError, "Invalid field"):
            FieldTag.parse("R")

    def test_from_fraction_mod_p(self):
        """Test that 1/2 embeds as the inverse of 2 in GF(5)"""
        half = prime_field(5).from_fraction(Fraction(1, 2))
        self.assertEqual(half, PrimeFieldElement(3, 5))

    def test_from_fraction_denominator_divisible_by_p(self):
        """Test that 1/5 has no image in GF(5)"""
        with self.assertRaises(DivisionByZeroError):
            prime_field(5).from_fraction(Fraction(1, 5))

    def test_conjugation_flags(self):
        """Test has_conjugation and is_finite"""
        self.assertTrue(GAUSSIAN.has_conjugation)
        self.assertFalse(RATIONAL.has_conjugation)
        self.assertTrue(prime_field(3).is_finite)
        self.assertFalse(GAUSSIAN.is_finite)


class TestArithmetic(unittest.TestCase):
    """Unit tests for field arithmetic."""

    def setUp(self):
        """Set up a few scalars in each field."""
        self.half = Rational(Fraction(1, 2))
        self.z = GaussianRational(1, 2)
        self.three_mod_seven = PrimeFieldElement(3, 7)

    def test_rational_operations(self):
        """Test rational sums, products and inverses"""
        self.assertEqual(self.half + self.half, Rational(1))
        self.assertEqual(self.half * 4, Rational(2))
        self.assertEqual(1 - self.half, self.half)
        self.assertEqual(self.half.inverse(), Rational(2))

    def test_gaussian_product_and_inverse(self):
        """Test (1+2i)(1-2i) = 5 and the inverse"""
        self.assertEqual(self.z * conj(self.z), GaussianRational(5))
        self.assertEqual(self.z * self.z.inverse(), GAUSSIAN.one())
        self.assertEqual(self.z.abs_squared(), 5)

    def test_prime_field_inverse(self):
        """Test that 3 * 5 = 1 mod 7"""
        self.assertEqual(self.three_mod_seven.inverse(), PrimeFieldElement(5, 7))
        self.assertEqual(self.three_mod_seven.conj(), self.three_mod_seven)

    def test_division_by_zero(self):
        """Test division by zero in every field"""
        for zero in (RATIONAL.zero(), GAUSSIAN.zero(), prime_field(7).zero()):
            with self.assertRaises(DivisionByZeroError):
                zero.inverse()

    def test_field_mismatch(self):
        """Test that mixing fields raises"""
        with self.assertRaises(FieldMismatchError):
            _ = self.half + self.z
        with self.assertRaises(FieldMismatchError):
            _ = PrimeFieldElement(1, 5) * self.three_mod_seven

    def test_positive_real(self):
        """Test is_positive_real on Q(i)"""
        self.assertTrue(GaussianRational(2).is_positive_real())
        self.assertFalse(GaussianRational(-2).is_positive_real())
        self.assertFalse(self.z.is_positive_real())


class TestParseScalar(unittest.TestCase):
    """Unit tests for parse_scalar and the textual syntax."""

    def test_parse_rational(self):
        """Test parse_scalar with "3/4" """
        self.assertEqual(parse_scalar("3/4"), Rational(Fraction(3, 4)))
        self.assertEqual(parse_scalar("-2"), Rational(-2))

    def test_parse_gaussian(self):
        """Test the a+bi forms"""
        self.assertEqual(
            parse_scalar("3/4+1/2i"),
            GaussianRational(Fraction(3, 4), Fraction(1, 2)),
        )
        self.assertEqual(parse_scalar("i"), GaussianRational(0, 1))
        self.assertEqual(parse_scalar("-i"), GaussianRational(0, -1))
        self.assertEqual(parse_scalar("2-3i"), GaussianRational(2, -3))

    def test_parse_prime(self):
        """Test the "r mod p" form"""
        self.assertEqual(parse_scalar("12 mod 7"), PrimeFieldElement(5, 7))

    def test_parse_embeds_into_target_field(self):
        """Test rational text embedded into GF(5) and Q(i)"""
        self.assertEqual(parse_scalar("1/2", prime_field(5)), PrimeFieldElement(3, 5))
        self.assertEqual(parse_scalar("2", GAUSSIAN), GaussianRational(2))

    def test_parse_rejects_wrong_field(self):
        """Test that "i" is not an element of Q"""
        with self.assertRaises(FieldMismatchError):
            parse_scalar("i", RATIONAL)

    def test_parse_malformed(self):
        """Test malformed text and zero denominators"""
        for text in ("3//4", "abc", "1/0"):
            with self.assertRaises(ScalarParseError):
                parse_scalar(text)

    def test_str_round_trip_spellings(self):
        """Test the printed form of each field"""
        self.assertEqual(str(GaussianRational(0, 1)), "i")
        self.assertEqual(str(GaussianRational(Fraction(3, 4), Fraction(1, 2))),
                         "3/4+1/2i")
        self.assertEqual(str(PrimeFieldElement(5, 7)), "5 mod 7")
        self.assertEqual(str(Rational(Fraction(-3, 6))), "-1/2")


def _random_quotient(field, rng):
    denominator = random_scalar(field, rng)
    while denominator.is_zero():
        denominator = random_scalar(field, rng)
    return random_scalar(field, rng) / denominator


class TestFieldAxioms(unittest.TestCase):
    """Property tests for the field axioms and the involution."""

    FIELDS = (RATIONAL, GAUSSIAN, prime_field(2), prime_field(7), prime_field(97))

    def setUp(self):
        """Set up a seeded stream."""
        self.rng = SplitMix64(17)

    def _triples(self, field, count=40):
        for _ in range(count):
            yield tuple(_random_quotient(field, self.rng) for _ in range(3))

    def test_ring_laws(self):
        """Test associativity, commutativity and distributivity exactly"""
        for field in self.FIELDS:
            for a, b, c in self._triples(field):
                with self.subTest(field=str(field), a=str(a), b=str(b), c=str(c)):
                    self.assertEqual((a + b) + c, a + (b + c))
                    self.assertEqual((a * b) * c, a * (b * c))
                    self.assertEqual(a + b, b + a)
                    self.assertEqual(a * b, b * a)
                    self.assertEqual(a * (b + c), a * b + a * c)

    def test_identities_and_inverses(self):
        """Test zero, one, negatives and multiplicative inverses"""
        for field in self.FIELDS:
            zero, one = field.zero(), field.one()
            for a, _, _ in self._triples(field):
                self.assertEqual(a + zero, a)
                self.assertEqual(a * one, a)
                self.assertTrue((a + (-a)).is_zero())
                if not a.is_zero():
                    self.assertEqual(a * a.inverse(), one)
                    self.assertEqual(a / a, one)

    def test_conjugation_is_an_involutive_automorphism(self):
        """Test conj(a + b), conj(a b) and conj(conj(a))"""
        for field in self.FIELDS:
            for a, b, _ in self._triples(field):
                self.assertEqual(conj(a + b), conj(a) + conj(b))
                self.assertEqual(conj(a * b), conj(a) * conj(b))
                self.assertEqual(conj(conj(a)), a)
            self.assertEqual(conj(field.one()), field.one())
        i = GaussianRational(0, 1)
        self.assertEqual(conj(i), -i)
        self.assertEqual(i * conj(i), GAUSSIAN.one())


if __name__ == "__main__":
    unittest.main()
