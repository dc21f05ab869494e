"""Arbitrary-precision scaffolding: exact rationals, fixed-precision reals,
generalized binomial coefficients, and the Hölder-conjugate exponent pair.

Exact rational arithmetic rides on ``fractions.Fraction`` (always stored
reduced, positive denominator).  High-precision real arithmetic rides on
mpmath (round-to-nearest), wrapped in :class:`PrecReal` so that every value
carries its working precision and values of different precisions never get
compared silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

# Exact coefficient ring used throughout: arbitrary-precision rationals,
# stored reduced with positive denominator (Fraction guarantees both).
BigRational = Fraction

# Decimal-digit requests above this are rejected rather than silently
# truncated; the mpfr backend would accept them but desk-scale use never
# needs more, and a typo should fail loudly.
MAX_TARGET_DIGITS = 1_000_000

_LOG2_10 = math.log2(10)


class PrecisionMismatchError(ValueError):
    """Two PrecReal values of different working precision were combined."""


class PrecisionInfeasibleError(ValueError):
    """A precision request the numeric backend will not honor."""


def rational_to_str(value: Fraction) -> str:
    """Serialize a rational as ``"num/den"`` (``"5/64"``, integers as ``"2"``)."""
    return str(value)


def rational_from_str(text: str) -> Fraction:
    """Parse ``"a/b"`` or a (finite) decimal string into an exact rational."""
    return Fraction(text.strip())


@dataclass(frozen=True)
class PrecReal:
    """A real number tagged with the binary precision it was computed at.

    Arithmetic and comparisons are only defined between values of equal
    precision; mixing precisions raises :class:`PrecisionMismatchError`.
    All operations round to nearest at the declared precision.
    """

    value: mpf
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits <= 0:
            raise PrecisionInfeasibleError(
                f"precision_bits must be positive, got {self.precision_bits}")

    def _check(self, other: "PrecReal") -> None:
        if not isinstance(other, PrecReal):
            raise TypeError(f"expected PrecReal, got {type(other).__name__}")
        if other.precision_bits != self.precision_bits:
            raise PrecisionMismatchError(
                f"cannot combine PrecReal at {self.precision_bits} bits with "
                f"PrecReal at {other.precision_bits} bits")

    def _wrap(self, raw) -> "PrecReal":
        with mp.workprec(self.precision_bits):
            return PrecReal(+raw, self.precision_bits)

    def __add__(self, other):
        self._check(other)
        with mp.workprec(self.precision_bits):
            return PrecReal(self.value + other.value, self.precision_bits)

    def __sub__(self, other):
        self._check(other)
        with mp.workprec(self.precision_bits):
            return PrecReal(self.value - other.value, self.precision_bits)

    def __mul__(self, other):
        self._check(other)
        with mp.workprec(self.precision_bits):
            return PrecReal(self.value * other.value, self.precision_bits)

    def __truediv__(self, other):
        self._check(other)
        with mp.workprec(self.precision_bits):
            return PrecReal(self.value / other.value, self.precision_bits)

    def __neg__(self):
        return PrecReal(-self.value, self.precision_bits)

    def __lt__(self, other):
        self._check(other)
        return self.value < other.value

    def __le__(self, other):
        self._check(other)
        return self.value <= other.value

    def __gt__(self, other):
        self._check(other)
        return self.value > other.value

    def __ge__(self, other):
        self._check(other)
        return self.value >= other.value

    def __float__(self) -> float:
        return float(self.value)

    def to_decimal(self, digits: int) -> str:
        """Decimal string with exactly ``digits`` significant digits."""
        with mp.workprec(self.precision_bits):
            return mp.nstr(self.value, digits, strip_zeros=False)

    @staticmethod
    def from_rational(value: Fraction | int, precision_bits: int) -> "PrecReal":
        value = Fraction(value)
        with mp.workprec(precision_bits):
            raw = mpf(value.numerator) / value.denominator
        return PrecReal(raw, precision_bits)

    @staticmethod
    def from_str(text: str, precision_bits: int) -> "PrecReal":
        with mp.workprec(precision_bits):
            raw = mpf(text)
        return PrecReal(raw, precision_bits)


def _as_fraction(p) -> Fraction:
    # float input is converted exactly (every float is a binary rational);
    # strings accept both "a/b" and finite decimals.
    return Fraction(p)


class ExponentPair:
    """The Hölder-conjugate pair (p, q) with 1/p + 1/q = 1, p > 1.

    Everything downstream is parameterized by this pair.  When ``p`` is given
    as an int, Fraction, str, or float it is stored as an exact rational and
    all derived quantities (q, 1/q) are exact; an mpf input selects the
    real-valued path at that value's precision.
    """

    def __init__(self, p, precision_bits: int = 128):
        if isinstance(p, mpf):
            self.is_rational = False
            self.p_exact = None
            self._p_real = p
            self.precision_bits = precision_bits
            if not p > 1:
                raise ValueError(f"p must exceed 1, got {p}")
        else:
            p_frac = _as_fraction(p)
            if not p_frac > 1:
                raise ValueError(f"p must exceed 1, got {p_frac}")
            self.is_rational = True
            self.p_exact = p_frac
            self._p_real = None
            self.precision_bits = precision_bits

    # -- exact accessors (rational path only) --------------------------------

    @property
    def q_exact(self) -> Fraction:
        """q = p/(p-1), exact; only on the rational path."""
        if not self.is_rational:
            raise ValueError("q_exact requires a rational p")
        return self.p_exact / (self.p_exact - 1)

    @property
    def inv_q_exact(self) -> Fraction:
        """1/q = (p-1)/p, exact; only on the rational path."""
        if not self.is_rational:
            raise ValueError("inv_q_exact requires a rational p")
        return (self.p_exact - 1) / self.p_exact

    # -- real accessors (both paths) ------------------------------------------

    def p_mpf(self, precision_bits: int) -> mpf:
        with mp.workprec(precision_bits):
            if self.is_rational:
                return mpf(self.p_exact.numerator) / self.p_exact.denominator
            return +self._p_real

    def q_mpf(self, precision_bits: int) -> mpf:
        with mp.workprec(precision_bits):
            p = self.p_mpf(precision_bits)
            return p / (p - 1)

    def inv_q_mpf(self, precision_bits: int) -> mpf:
        with mp.workprec(precision_bits):
            p = self.p_mpf(precision_bits)
            return (p - 1) / p

    def p_float(self) -> float:
        return float(self.p_exact) if self.is_rational else float(self._p_real)

    def q_float(self) -> float:
        pf = self.p_float()
        return pf / (pf - 1.0)

    def __repr__(self):
        if self.is_rational:
            return f"ExponentPair({self.p_exact})"
        return f"ExponentPair({self._p_real}, precision_bits={self.precision_bits})"

    def __eq__(self, other):
        if not isinstance(other, ExponentPair):
            return NotImplemented
        if self.is_rational != other.is_rational:
            return False
        if self.is_rational:
            return self.p_exact == other.p_exact
        return self._p_real == other._p_real

    def __hash__(self):
        return hash(self.p_exact if self.is_rational else self._p_real)

    @staticmethod
    def parse(text: str, precision_bits: int = 128) -> "ExponentPair":
        """Parse ``"a/b"`` or a decimal string; decimals become exact rationals."""
        return ExponentPair(rational_from_str(text), precision_bits)


def binom_general_rational(alpha: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient binom(alpha, k), exact.

    Falling-factorial product alpha(alpha-1)...(alpha-k+1)/k! with
    binom(alpha, 0) = 1.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    alpha = Fraction(alpha)
    num = Fraction(1)
    for j in range(k):
        num *= alpha - j
    return num / math.factorial(k)


def binom_general_real(alpha, k: int, precision_bits: int) -> mpf:
    """binom(alpha, k) via the falling-factorial product at fixed precision.

    Agrees with :func:`binom_general_rational` to working precision when
    alpha is rational.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if precision_bits < 16:
        raise PrecisionInfeasibleError(
            f"precision_bits must be at least 16, got {precision_bits}")
    with mp.workprec(precision_bits):
        a = mpf(alpha) if not isinstance(alpha, Fraction) \
            else mpf(alpha.numerator) / alpha.denominator
        acc = mpf(1)
        for j in range(k):
            acc *= a - j
        return acc / mp.factorial(k)


def required_precision(pair: ExponentPair, n: int, target_decimal_digits: int) -> int:
    """Working precision (bits) sufficient for cancellation-safe weight
    evaluation at index n.

    The two bracketed terms of the weight at n agree to about log2(n) leading
    bits and their difference is of order n^-p, so the budget is the decimal
    target plus p*log2(n) cancellation headroom plus 32 guard bits.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 1 <= target_decimal_digits <= MAX_TARGET_DIGITS:
        raise PrecisionInfeasibleError(
            f"target_decimal_digits must be in [1, {MAX_TARGET_DIGITS}], "
            f"got {target_decimal_digits}")
    digit_bits = math.ceil(target_decimal_digits * _LOG2_10)
    cancel_bits = math.ceil(pair.p_float() * math.log2(n)) if n > 1 else 0
    return digit_bits + cancel_bits + 32
