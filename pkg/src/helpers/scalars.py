"""
Exact scalar fields with an involution: rationals, Gaussian rationals and
prime fields GF(p), p <= 97.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import isprime

MAX_PRIME = 97

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_PRIME_RE = re.compile(r"^([+-]?\d+)\s+mod\s+(\d+)$")
_FIELD_RE = re.compile(r"^GF\((\d+)\)$")


class FieldMismatchError(Exception):
    """Custom exception for mixing scalars from different fields."""


class DivisionByZeroError(ZeroDivisionError):
    """Custom exception for division by a zero scalar."""


class ScalarParseError(ValueError):
    """Custom exception for malformed scalar or field text."""


@dataclass(frozen=True)
class FieldTag:
    """
    Discriminant naming the coefficient field of a scalar, matrix or subspace.

    Attributes:
        kind (str): one of "Q", "Q(i)" or "GF".
        modulus (int): the prime p for "GF", 0 otherwise.
    """

    kind: str
    modulus: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "Q(i)", "GF"):
            raise ScalarParseError(f"Unknown field kind: {self.kind}")
        if self.kind == "GF":
            if not isprime(self.modulus) or self.modulus > MAX_PRIME:
                raise ScalarParseError(
                    f"GF(p) needs a prime p <= {MAX_PRIME}, got {self.modulus}"
                )
        elif self.modulus:
            raise ScalarParseError(f"Field {self.kind} takes no modulus")

    @property
    def is_finite(self):
        """True for prime fields."""
        return self.kind == "GF"

    @property
    def has_conjugation(self):
        """True when the involution is not the identity."""
        return self.kind == "Q(i)"

    def from_int(self, value):
        """Embed an integer into this field."""
        return self.from_fraction(Fraction(value))

    def from_fraction(self, value):
        """
        Embed a rational number into this field.

        Args:
            value (Fraction): the rational to embed.

        Returns:
            Scalar: the image of ``value``.

        Raises:
            DivisionByZeroError: if the denominator vanishes mod p.
        """
        value = Fraction(value)
        if self.kind == "Q":
            return Rational(value)
        if self.kind == "Q(i)":
            return GaussianRational(value, 0)
        p = self.modulus
        if value.denominator % p == 0:
            raise DivisionByZeroError(f"{value} has no image in GF({p})")
        return PrimeFieldElement(
            value.numerator * pow(value.denominator, -1, p), p
        )

    def zero(self):
        """Additive identity."""
        return self.from_int(0)

    def one(self):
        """Multiplicative identity."""
        return self.from_int(1)

    def __str__(self):
        if self.kind == "GF":
            return f"GF({self.modulus})"
        return self.kind

    @classmethod
    def parse(cls, text):
        """
        Parse "Q", "Q(i)" or "GF(p)".

        Raises:
            ScalarParseError: for anything else.
        """
        text = text.strip()
        if text in ("Q", "Q(i)"):
            return cls(text)
        match = _FIELD_RE.match(text)
        if match is None:
            raise ScalarParseError(f"Invalid field: {text!r}")
        return cls("GF", int(match.group(1)))


RATIONAL = FieldTag("Q")
GAUSSIAN = FieldTag("Q(i)")


@lru_cache(maxsize=None)
def prime_field(p):
    """Return the tag of GF(p)."""
    return FieldTag("GF", p)


def _format_fraction(value):
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Scalar:
    """Common arithmetic plumbing; concrete fields override the hooks."""

    __slots__ = ()

    @property
    def field(self):
        """The FieldTag of this scalar."""
        raise NotImplementedError

    def _coerce(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"Cannot combine {self.field} with {other.field}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._mul(self.inverse())

    def __bool__(self):
        return not self.is_zero()

    def _add(self, other):
        raise NotImplementedError

    def _mul(self, other):
        raise NotImplementedError

    def __neg__(self):
        raise NotImplementedError

    def inverse(self):
        """Multiplicative inverse."""
        raise NotImplementedError

    def is_zero(self):
        """True for the additive identity."""
        raise NotImplementedError

    def conj(self):
        """The field involution."""
        raise NotImplementedError

    def sort_key(self):
        """Total order used for deterministic output."""
        raise NotImplementedError


class Rational(Scalar):
    """An element of Q in lowest terms (delegates to Fraction)."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)

    @property
    def field(self):
        return RATIONAL

    @property
    def numerator(self):
        """Numerator of the reduced fraction."""
        return self.value.numerator

    @property
    def denominator(self):
        """Positive denominator of the reduced fraction."""
        return self.value.denominator

    def _add(self, other):
        return Rational(self.value + other.value)

    def _mul(self, other):
        return Rational(self.value * other.value)

    def __neg__(self):
        return Rational(-self.value)

    def inverse(self):
        if self.value == 0:
            raise DivisionByZeroError("Division by zero in Q")
        return Rational(1 / self.value)

    def is_zero(self):
        return self.value == 0

    def conj(self):
        return self

    def sort_key(self):
        return (self.value,)

    def __eq__(self, other):
        return isinstance(other, Rational) and self.value == other.value

    def __hash__(self):
        return hash(("Q", self.value))

    def __str__(self):
        return _format_fraction(self.value)

    def __repr__(self):
        return f"Rational({self})"


class GaussianRational(Scalar):
    """An element a+bi of Q(i); conj(a+bi) = a-bi."""

    __slots__ = ("re", "im")

    def __init__(self, re_part, im_part=0):
        self.re = Fraction(re_part)
        self.im = Fraction(im_part)

    @property
    def field(self):
        return GAUSSIAN

    def _add(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def _mul(self, other):
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def abs_squared(self):
        """|a+bi|^2 = a^2 + b^2 as a Fraction."""
        return self.re * self.re + self.im * self.im

    def inverse(self):
        norm = self.abs_squared()
        if norm == 0:
            raise DivisionByZeroError("Division by zero in Q(i)")
        return GaussianRational(self.re / norm, -self.im / norm)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def is_real(self):
        """True when the imaginary part vanishes."""
        return self.im == 0

    def is_positive_real(self):
        """True for a positive rational."""
        return self.im == 0 and self.re > 0

    def conj(self):
        return GaussianRational(self.re, -self.im)

    def sort_key(self):
        return (self.re, self.im)

    def __eq__(self, other):
        return (
            isinstance(other, GaussianRational)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash(("Q(i)", self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return _format_fraction(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = _format_fraction(self.im) + "i"
        if self.re == 0:
            return imag
        if not imag.startswith("-"):
            imag = "+" + imag
        return _format_fraction(self.re) + imag

    def __repr__(self):
        return f"GaussianRational({self})"


class PrimeFieldElement(Scalar):
    """A residue mod a prime p <= 97; the involution is the identity."""

    __slots__ = ("residue", "modulus")

    def __init__(self, residue, modulus):
        self.residue = residue % modulus
        self.modulus = modulus

    @property
    def field(self):
        return prime_field(self.modulus)

    def _add(self, other):
        return PrimeFieldElement(self.residue + other.residue, self.modulus)

    def _mul(self, other):
        return PrimeFieldElement(self.residue * other.residue, self.modulus)

    def __neg__(self):
        return PrimeFieldElement(-self.residue, self.modulus)

    def inverse(self):
        if self.residue == 0:
            raise DivisionByZeroError(f"Division by zero in GF({self.modulus})")
        return PrimeFieldElement(pow(self.residue, -1, self.modulus), self.modulus)

    def is_zero(self):
        return self.residue == 0

    def conj(self):
        return self

    def sort_key(self):
        return (self.residue,)

    def __eq__(self, other):
        return (
            isinstance(other, PrimeFieldElement)
            and self.modulus == other.modulus
            and self.residue == other.residue
        )

    def __hash__(self):
        return hash(("GF", self.modulus, self.residue))

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"

    def __repr__(self):
        return f"PrimeFieldElement({self})"


def conj(value):
    """The involution of the scalar's field."""
    return value.conj()


def _parse_fraction(text):
    if not _RATIONAL_RE.match(text):
        raise ScalarParseError(f"Invalid rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as error:
        raise ScalarParseError(f"Zero denominator in {text!r}") from error


def _parse_gaussian(text):
    body = text[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split > 0:
        re_text, im_text = body[:split], body[split:]
    else:
        re_text, im_text = "0", body
    if im_text in ("", "+"):
        im_value = Fraction(1)
    elif im_text == "-":
        im_value = Fraction(-1)
    else:
        im_value = _parse_fraction(im_text)
    return GaussianRational(_parse_fraction(re_text), im_value)


def parse_scalar(text, field=None):
    """
    Parse the textual scalar syntax: "3/4", "3/4+1/2i" or "5 mod 7".

    Args:
        text (str): the scalar text.
        field (FieldTag, optional): target field. Rational text is embedded
            into Q(i) or GF(p) when a field is given.

    Returns:
        Scalar: the parsed value.

    Raises:
        ScalarParseError: if the text is malformed.
        FieldMismatchError: if the text names another field than ``field``.
    """
    cleaned = text.strip()
    prime_match = _PRIME_RE.match(cleaned)
    if prime_match:
        modulus = prime_field(int(prime_match.group(2))).modulus
        value = PrimeFieldElement(int(prime_match.group(1)), modulus)
    elif cleaned.endswith("i"):
        value = _parse_gaussian(cleaned.replace(" ", ""))
    else:
        value = Rational(_parse_fraction(cleaned.replace(" ", "")))

    if field is None or value.field == field:
        return value
    if isinstance(value, Rational):
        return field.from_fraction(value.value)
    if isinstance(value, GaussianRational) and value.is_real():
        return field.from_fraction(value.re)
    raise FieldMismatchError(f"{text!r} is not an element of {field}")
