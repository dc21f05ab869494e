"""Truncated formal power series in x (x standing for 1/n) and the exact
expansion machinery for the improved Hardy weight.

Coefficients live either in the exact rational ring (Fraction) or in a
fixed-precision real ring (mpf at a declared bit count).  Exactness is the
point: the integer-p weight expansion and the correction series reproduce
published coefficient tables as rational identities, with zero tolerance.
"""

from __future__ import annotations

import csv
import io
import json
from contextlib import nullcontext
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from mpmath import mp, mpf

from .numerics import (
    ExponentPair,
    binom_general_rational,
    binom_general_real,
    rational_to_str,
)

DEFAULT_ORDER = 40


class InvariantViolation(RuntimeError):
    """A structural invariant of the expansion failed.

    This signals an implementation bug, never a data condition: the parity
    cancellation and positivity of the integer-p expansion are theorems.
    """


class RingMismatchError(ValueError):
    """Operands of a series operation live in different coefficient rings."""


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series sum_{k=0}^{order} coeffs[k] * x^k.

    ``precision_bits is None`` marks the exact rational ring; otherwise all
    coefficients are mpf values computed at that precision.
    """

    coeffs: tuple
    precision_bits: int | None = None

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a PowerSeries needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return self.precision_bits is None

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def truncate(self, order: int) -> "PowerSeries":
        if order >= self.order:
            return self
        return PowerSeries(self.coeffs[:order + 1], self.precision_bits)

    def _check_ring(self, other: "PowerSeries") -> None:
        if self.precision_bits != other.precision_bits:
            raise RingMismatchError(
                f"ring mismatch: {self.precision_bits!r} vs {other.precision_bits!r}")

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self._check_ring(other)
        n = min(self.order, other.order)
        with _ring_context(self.precision_bits):
            return PowerSeries(
                tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)),
                self.precision_bits)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        self._check_ring(other)
        n = min(self.order, other.order)
        with _ring_context(self.precision_bits):
            return PowerSeries(
                tuple(self.coeffs[k] - other.coeffs[k] for k in range(n + 1)),
                self.precision_bits)

    def scale(self, factor) -> "PowerSeries":
        with _ring_context(self.precision_bits):
            return PowerSeries(tuple(c * factor for c in self.coeffs),
                               self.precision_bits)

    @staticmethod
    def one(order: int, precision_bits: int | None = None) -> "PowerSeries":
        zero, one = _ring_constants(precision_bits)
        return PowerSeries((one,) + (zero,) * order, precision_bits)

    @staticmethod
    def zero(order: int, precision_bits: int | None = None) -> "PowerSeries":
        zero, _ = _ring_constants(precision_bits)
        return PowerSeries((zero,) * (order + 1), precision_bits)


def _ring_constants(precision_bits):
    if precision_bits is None:
        return Fraction(0), Fraction(1)
    with mp.workprec(precision_bits):
        return mpf(0), mpf(1)


def _ring_context(precision_bits):
    # All real-ring arithmetic must run at the ring's declared precision,
    # never at whatever the ambient mpmath context happens to be.
    return mp.workprec(precision_bits) if precision_bits else nullcontext()


def binomial_series(alpha, sign: int, order: int,
                    precision_bits: int | None = None) -> PowerSeries:
    """Series of (1 + sign*x)^alpha: coeffs[k] = binom(alpha, k) * sign^k."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    if precision_bits is None:
        alpha = Fraction(alpha)
        coeffs = tuple(binom_general_rational(alpha, k) * sign**k
                       for k in range(order + 1))
    else:
        coeffs = tuple(binom_general_real(alpha, k, precision_bits) * sign**k
                       for k in range(order + 1))
    return PowerSeries(coeffs, precision_bits)


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated to the smaller of the two orders."""
    a._check_ring(b)
    n = min(a.order, b.order)
    zero, _ = _ring_constants(a.precision_bits)
    out = [zero] * (n + 1)
    with _ring_context(a.precision_bits):
        for i, ai in enumerate(a.coeffs[:n + 1]):
            if ai == 0:
                continue
            for j in range(n + 1 - i):
                bj = b.coeffs[j]
                if bj != 0:
                    out[i + j] += ai * bj
    return PowerSeries(tuple(out), a.precision_bits)


def series_pow_binomial(h: PowerSeries, alpha, order: int) -> PowerSeries:
    """(1 + h)^alpha as sum_k binom(alpha, k) h^k, for h with zero constant term.

    Because h has no constant term, h^k contributes nothing below x^k and the
    sum over k <= order is the full truncation.  Exact in the exact ring.
    """
    if h.coeffs[0] != 0:
        raise ValueError("series_pow_binomial requires a zero constant term")
    h = h.truncate(order)
    if h.order < order:
        raise ValueError(
            f"h must carry coefficients up to the requested order {order}")
    result = PowerSeries.one(order, h.precision_bits)
    if h.precision_bits is None:
        binom = lambda k: binom_general_rational(Fraction(alpha), k)
    else:
        binom = lambda k: binom_general_real(alpha, k, h.precision_bits)
    h_pow = PowerSeries.one(order, h.precision_bits)
    for k in range(1, order + 1):
        h_pow = series_mul(h_pow, h)
        bk = binom(k)
        if bk != 0:
            result = result + h_pow.scale(bk)
    return result


class SeriesValue(NamedTuple):
    value: object
    tail_bound: object


def series_eval(s: PowerSeries, x, precision_bits: int = 53) -> SeriesValue:
    """Horner evaluation on the convergence window 0 <= x <= 1/2.

    The reported tail bound is the crude geometric majorant
    |c_order| * x^(order+1) / (1 - x) plus a rounding allowance at the
    evaluation precision; it is validated empirically against closed-form
    oracles, not proven.
    """
    xf = float(x)
    if not 0 <= xf <= 0.5:
        raise ValueError(f"x must lie in [0, 1/2], got {x}")
    with mp.workprec(precision_bits):
        xm = _to_mpf(x)
        acc = mpf(0)
        c_max = mpf(0)
        for c in reversed(s.coeffs):
            cm = _to_mpf(c)
            acc = acc * xm + cm
            c_max = max(c_max, abs(cm))
        if xf == 0 or s.order == 0:
            # A bare constant evaluated at an exact point has no tail.
            tail = mpf(0)
        else:
            last = abs(_to_mpf(s.coeffs[-1]))
            tail = last * xm**(s.order + 1) / (1 - xm)
            tail += (8 * (s.order + 2) * mpf(2) ** (1 - precision_bits)
                     * (abs(acc) + c_max))
        return SeriesValue(+acc, +tail)


def _to_mpf(c):
    if isinstance(c, Fraction):
        return mpf(c.numerator) / c.denominator
    return mpf(c)


@dataclass(frozen=True)
class WeightExpansion:
    """Exact expansion of the improved weight for integer p >= 2:
    weight(n) = sum_k c[k] n^(-p-k), with c[k] = 0 for odd k and c[k] > 0
    for even k up to the computed order.
    """

    p: int
    c: list = field(default_factory=list)

    @property
    def leading_power(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def to_series(self) -> PowerSeries:
        """The c-series in x = 1/n (without the x^p prefactor)."""
        return PowerSeries(tuple(self.c), None)

    def eval_at(self, x, precision_bits: int = 53) -> SeriesValue:
        """Evaluate x^p * (c-series)(x); tail bound scaled the same way."""
        inner = series_eval(self.to_series(), x, precision_bits)
        with mp.workprec(precision_bits):
            xp = _to_mpf(x) ** self.p
            return SeriesValue(+(inner.value * xp), +(inner.tail_bound * xp))

    def to_json(self) -> str:
        payload = {
            "p": self.p,
            "leading_power": self.leading_power,
            "coefficients": [rational_to_str(ck) for ck in self.c],
        }
        return json.dumps(payload)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "c_k"])
        for k, ck in enumerate(self.c):
            writer.writerow([k, rational_to_str(ck)])
        return buf.getvalue()


def expand_w_integer_p(p: int, order: int) -> WeightExpansion:
    """Exact coefficients of the improved-weight expansion for integer p >= 2.

    Both brackets of the weight are expanded with the integer binomial
    theorem over the exponent p-1, each term a generalized binomial series
    at exponent j*(p-1)/p; the difference's first p coefficients cancel,
    which is asserted rather than assumed, and the x^p division becomes an
    index shift.
    """
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p!r}")
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    inv_q = Fraction(p - 1, p)
    total = p + order
    w = PowerSeries.zero(total)
    for j in range(p):
        coeff = binom_general_rational(Fraction(p - 1), j)
        plus = binomial_series(j * inv_q, -1, total)    # (1-x)^(j/q)
        minus = binomial_series(j * inv_q, +1, total)   # (1+x)^(j/q)
        sign_plus = (-1) ** j
        sign_minus = (-1) ** (p - 1 - j)
        w = w + plus.scale(coeff * sign_plus) - minus.scale(coeff * sign_minus)

    for k in range(p):
        if w[k] != 0:
            raise InvariantViolation(
                f"coefficient of x^{k} should cancel below x^{p}, got {w[k]}")
    c = [w[p + k] for k in range(order + 1)]
    for k, ck in enumerate(c):
        if k % 2 == 1 and ck != 0:
            raise InvariantViolation(
                f"odd-offset coefficient c[{k}] must vanish, got {ck}")
        if k % 2 == 0 and not ck > 0:
            raise InvariantViolation(
                f"even-offset coefficient c[{k}] must be positive, got {ck}")
    return WeightExpansion(p=p, c=c)


def plus_bracket_series(p: int, order: int) -> PowerSeries:
    """Series of the increasing bracket (1 - (1-x)^((p-1)/p))^(p-1), integer p.

    Witness for absolute monotonicity: all coefficients are positive.
    """
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p!r}")
    inv_q = Fraction(p - 1, p)
    out = PowerSeries.zero(order)
    for j in range(p):
        coeff = binom_general_rational(Fraction(p - 1), j) * (-1) ** j
        out = out + binomial_series(j * inv_q, -1, order).scale(coeff)
    return out


def _g_argument_series(pair: ExponentPair, sign: int, order: int,
                       precision_bits: int | None) -> PowerSeries:
    """Series of g(sign*x) = q * sum_{k>=1} binom(1/q, k+1) (sign*x)^k."""
    if precision_bits is None:
        q = pair.q_exact
        inv_q = pair.inv_q_exact
        coeffs = [Fraction(0)]
        coeffs += [q * binom_general_rational(inv_q, k + 1) * sign**k
                   for k in range(1, order + 1)]
    else:
        with mp.workprec(precision_bits):
            q = pair.q_mpf(precision_bits)
            inv_q = pair.inv_q_mpf(precision_bits)
            coeffs = [mpf(0)]
            coeffs += [q * binom_general_real(inv_q, k + 1, precision_bits)
                       * sign**k for k in range(1, order + 1)]
    return PowerSeries(tuple(coeffs), precision_bits)


def expand_correction(pair: ExponentPair, order: int) -> PowerSeries:
    """Series of the relative correction a(x): weight * (q/x)^p - 1.

    Computed from the bracket difference D = (1+g(-x))^(p-1) - (1+g(x))^(p-1)
    via the generalized binomial series; a(x) = (q/x) * D(x) - 1.  Exact ring
    when p is rational.  Odd positions vanish.
    """
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    bits = None if pair.is_rational else pair.precision_bits
    inner_order = order + 1
    if pair.is_rational:
        alpha = pair.p_exact - 1
    else:
        with mp.workprec(bits):
            alpha = pair.p_mpf(bits) - 1
    g_minus = _g_argument_series(pair, -1, inner_order, bits)
    g_plus = _g_argument_series(pair, +1, inner_order, bits)
    d = series_pow_binomial(g_minus, alpha, inner_order) \
        - series_pow_binomial(g_plus, alpha, inner_order)
    if bits is None:
        q = pair.q_exact
        out = [q * d[1] - 1] + [q * d[k + 1] for k in range(1, order + 1)]
        if out[0] != 0:
            raise InvariantViolation(
                f"constant term of the correction must vanish, got {out[0]}")
        for k in range(1, order + 1, 2):
            if out[k] != 0:
                raise InvariantViolation(
                    f"odd coefficient a[{k}] must vanish, got {out[k]}")
    else:
        with mp.workprec(bits):
            q = pair.q_mpf(bits)
            out = [q * d[1] - 1] + [q * d[k + 1] for k in range(1, order + 1)]
            # Odd slots cancel analytically; snap rounding residue to zero,
            # but a residue above noise level is a bug.
            noise = mpf(2) ** (-(bits // 2))
            for k in range(1, order + 1, 2):
                if abs(out[k]) > noise:
                    raise InvariantViolation(
                        f"odd coefficient a[{k}] = {out[k]} exceeds noise")
                out[k] = mpf(0)
            if abs(out[0]) > noise:
                raise InvariantViolation(
                    f"constant term of the correction must vanish, got {out[0]}")
            out[0] = mpf(0)
    return PowerSeries(tuple(out), bits)


def correction_positivity_report(pair: ExponentPair, order: int) -> dict:
    """Sign pattern of the even correction coefficients, as data.

    For non-integer p the positivity of these coefficients is an open
    conjecture; this reports, it never asserts.
    """
    series = expand_correction(pair, order)
    even = {k: series[k] for k in range(2, order + 1, 2)}
    negatives = {k: v for k, v in even.items() if not v > 0}
    return {
        "p": rational_to_str(pair.p_exact) if pair.is_rational
        else mp.nstr(pair.p_mpf(pair.precision_bits), 20),
        "order": order,
        "even_coefficients": {k: rational_to_str(v) if isinstance(v, Fraction)
                              else mp.nstr(v, 20) for k, v in even.items()},
        "all_even_positive": not negatives,
        "nonpositive_positions": sorted(negatives),
    }
