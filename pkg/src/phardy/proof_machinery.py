"""Grid-checkable form of the weight-improvement proof apparatus.

The bracket difference of the weight factors as

    w(x) = (x/q)^(p-1) * ( x/q + E(x) + F(x) ),

where g(x) = q * sum_{k>=1} binom(1/q, k+1) x^k collects the higher binomial
terms, E is the odd part extracted from the first-order bracket term, and F
is the remainder sum over bracket powers n >= 2.  Every lemma bound feeding
the positivity of E + F is implemented here as a predicate over (p, x)
grids, reporting worst margins rather than bare booleans.

Strictness semantics: a strict inequality is certified as "exceeds the
combined truncation-plus-rounding tolerance", never as "compares greater in
floating arithmetic".  Non-strict lemma bounds are allowed the same
tolerance on the other side.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpf

from .numerics import (
    ExponentPair,
    binom_general_rational,
    binom_general_real,
)
from .series import SeriesValue
from .weights import eval_w1_closed, eval_w_classical, eval_w_closed_x

DEFAULT_ORDER = 40
DEFAULT_OUTER_TERMS = 60

# p-grid for the lemma suite: the low-p corner plus quarter points up to 3/2,
# then half-integer steps through 10 (integer and half-integer points are the
# case boundaries of the proof's case analysis).
DEFAULT_P_GRID = tuple(
    [Fraction("1.01"), Fraction("1.1"), Fraction("1.25")]
    + [Fraction(k, 2) for k in range(3, 21)]
)

DEFAULT_X_GRID = tuple(j / 1000 for j in range(1, 501))

# p-grid for the n = 1 special-value check: (1, 20], open at the left.
N1_P_GRID = tuple([Fraction("1.001")] + [1 + Fraction(k, 20) for k in range(1, 381)])


class AgreementError(RuntimeError):
    """Two supposedly-identical internal formulas disagreed beyond tolerance."""


# ---------------------------------------------------------------------------
# Coefficient tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GSeries:
    """Positive coefficients a_k of g(-x) = sum_{k>=1} a_k x^k.

    a_k = q * |binom(1/q, k+1)|; exact rationals on the rational-p path.
    Index 0 is a structural zero (the series has no constant term).
    """

    pair: ExponentPair
    a: tuple
    order: int

    def coeff(self, k: int):
        return self.a[k]


def g_series(pair: ExponentPair, order: int) -> GSeries:
    if order < 1:
        raise ValueError(f"order must be at least 1, got {order}")
    if pair.is_rational:
        coeffs = _a_exact(pair, order)
    else:
        bits = pair.precision_bits
        with mp.workprec(bits):
            q = pair.q_mpf(bits)
            inv_q = pair.inv_q_mpf(bits)
            coeffs = tuple([mpf(0)] + [
                q * abs(binom_general_real(inv_q, k + 1, bits))
                for k in range(1, order + 1)])
    for k in range(1, order + 1):
        if not coeffs[k] > 0:
            raise AgreementError(f"a_{k} must be positive, got {coeffs[k]}")
        if k >= 2 and coeffs[k] > coeffs[k - 1]:
            raise AgreementError(
                f"a_k must decay weakly: a_{k}={coeffs[k]} > a_{k-1}={coeffs[k-1]}")
    return GSeries(pair=pair, a=coeffs, order=order)


@lru_cache(maxsize=None)
def _a_exact(pair: ExponentPair, order: int) -> tuple:
    q = pair.q_exact
    inv_q = pair.inv_q_exact
    return tuple([Fraction(0)] + [
        q * abs(binom_general_rational(inv_q, k + 1))
        for k in range(1, order + 1)])


@lru_cache(maxsize=None)
def _a_floats(pair: ExponentPair, order: int) -> tuple:
    if pair.is_rational:
        return tuple(float(c) for c in _a_exact(pair, order))
    return tuple(float(c) for c in g_series(pair, order).a)


@lru_cache(maxsize=None)
def _a_mpfs(pair: ExponentPair, order: int, precision_bits: int) -> tuple:
    with mp.workprec(precision_bits):
        if pair.is_rational:
            return tuple(mpf(c.numerator) / c.denominator
                         for c in _a_exact(pair, order))
        return tuple(+c for c in g_series(pair, order).a)


@lru_cache(maxsize=None)
def _e_binom_floats(pair: ExponentPair, order: int) -> tuple:
    """Independent route to E's coefficients: -2p * binom(1/q, k+1), odd k."""
    out = [0.0] * (order + 1)
    if pair.is_rational:
        p = pair.p_exact
        inv_q = pair.inv_q_exact
        for k in range(3, order + 1, 2):
            out[k] = float(-2 * p * binom_general_rational(inv_q, k + 1))
    else:
        bits = pair.precision_bits
        with mp.workprec(bits):
            p = pair.p_mpf(bits)
            inv_q = pair.inv_q_mpf(bits)
            for k in range(3, order + 1, 2):
                out[k] = float(-2 * p * binom_general_real(inv_q, k + 1, bits))
    return tuple(out)


# ---------------------------------------------------------------------------
# Point evaluations with tail bounds
# ---------------------------------------------------------------------------

def _check_x(x) -> float:
    xf = float(x)
    if not 0 < xf <= 0.5:
        raise ValueError(f"x must lie in (0, 1/2], got {x}")
    return xf


def eval_g(pair: ExponentPair, x, sign: int, order: int = DEFAULT_ORDER,
           precision_bits: int = 53) -> SeriesValue:
    """Truncated g(sign*x) with a geometric tail bound.

    The tail bound a_order * x^(order+1)/(1-x) is rigorous here because the
    coefficients decay weakly; a rounding allowance is folded in.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    xf = _check_x(x)
    if precision_bits <= 53:
        a = _a_floats(pair, order)
        acc = 0.0
        for k in range(order, 0, -1):
            c = a[k] if (sign < 0 or k % 2 == 0) else -a[k]
            acc = acc * xf + c
        value = acc * xf
        tail = a[order] * xf ** (order + 1) / (1 - xf)
        # Horner partials stay below 1 + |acc|; the final multiply scales
        # everything by x, so the rounding allowance carries the same factor.
        tail += 8 * (order + 1) * 2.0 ** (-precision_bits) * (1 + abs(acc)) * xf
        return SeriesValue(value, tail)
    a = _a_mpfs(pair, order, precision_bits)
    with mp.workprec(precision_bits):
        xm = mpf(x) if not isinstance(x, Fraction) else mpf(x.numerator) / x.denominator
        acc = mpf(0)
        for k in range(order, 0, -1):
            c = a[k] if (sign < 0 or k % 2 == 0) else -a[k]
            acc = acc * xm + c
        value = acc * xm
        tail = a[order] * xm ** (order + 1) / (1 - xm)
        tail += (8 * (order + 1) * mpf(2) ** (1 - precision_bits)
                 * (1 + abs(acc)) * xm)
        return SeriesValue(+value, +tail)


def eval_E(pair: ExponentPair, x, order: int = DEFAULT_ORDER,
           precision_bits: int = 53) -> SeriesValue:
    """The odd correction term E(x) = 2(p-1) * sum_{odd k>=3} a_k x^k.

    Evaluated both from the a_k table and from the directly computed
    binomial coefficients; disagreement beyond tolerance is a hard error.
    The returned value is the a_k form.
    """
    xf = _check_x(x)
    if precision_bits <= 53:
        a = _a_floats(pair, order)
        pf = pair.p_float()
        x2 = xf * xf
        acc = 0.0
        top = order if order % 2 == 1 else order - 1
        for k in range(top, 2, -2):
            acc = acc * x2 + a[k]
        value = 2 * (pf - 1) * acc * xf ** 3
        tail = 2 * (pf - 1) * a[order] * xf ** (order + 1) / (1 - xf)
        eps = 2.0 ** (-precision_bits)
        # Everything is scaled by x^3 at the end, so rounding is too.
        round_slack = (8 * (order + 2) * eps * (1 + abs(acc))
                       * max(1.0, 2 * (pf - 1)) * xf ** 3)
        e_bin = _e_binom_floats(pair, order)
        acc_b = 0.0
        for k in range(top, 2, -2):
            acc_b = acc_b * x2 + e_bin[k]
        value_b = acc_b * xf ** 3
        agree_tol = (64 * (order + 2) * eps * (1 + abs(acc) + abs(acc_b))
                     * xf ** 3 + 1e-12 * abs(value))
        if abs(value - value_b) > agree_tol:
            raise AgreementError(
                f"E formulas disagree at p={pf}, x={xf}: {value} vs {value_b}")
        return SeriesValue(value, tail + round_slack)
    a = _a_mpfs(pair, order, precision_bits)
    with mp.workprec(precision_bits):
        xm = mpf(x) if not isinstance(x, Fraction) else mpf(x.numerator) / x.denominator
        pm = pair.p_mpf(precision_bits)
        x2 = xm * xm
        acc = mpf(0)
        top = order if order % 2 == 1 else order - 1
        for k in range(top, 2, -2):
            acc = acc * x2 + a[k]
        value = 2 * (pm - 1) * acc * xm ** 3
        tail = 2 * (pm - 1) * a[order] * xm ** (order + 1) / (1 - xm)
        tail += (8 * (order + 2) * mpf(2) ** (1 - precision_bits)
                 * (1 + abs(acc)) * max(mpf(1), 2 * (pm - 1)) * xm ** 3)
        return SeriesValue(+value, +tail)


def eval_F(pair: ExponentPair, x, outer_terms: int = DEFAULT_OUTER_TERMS,
           series_order: int = DEFAULT_ORDER,
           precision_bits: int = 53) -> SeriesValue:
    """The remainder F(x) = sum_{n>=2} binom(p-1, n) (g(-x)^n - g(x)^n).

    Doubly truncated: each g at series_order, the outer sum cut adaptively
    once past p when the generic-coefficient bound (q-1)/4 * g(-x)^n drops
    below 2^(-precision).  The reported tail combines the geometric outer
    bound (valid past p by the binomial-coefficient lemma) with the
    propagated inner truncation error.
    """
    if outer_terms < 2:
        raise ValueError(f"outer_terms must be at least 2, got {outer_terms}")
    xf = _check_x(x)
    if precision_bits > 53:
        return _eval_F_mpf(pair, x, outer_terms, series_order, precision_bits)
    pf = pair.p_float()
    qf = pair.q_float()
    g_minus = eval_g(pair, x, -1, series_order, precision_bits)
    g_plus = eval_g(pair, x, +1, series_order, precision_bits)
    gm_hi = min(g_minus.value + g_minus.tail_bound, 0.999999)
    inner_tau = g_minus.tail_bound + g_plus.tail_bound
    eps = 2.0 ** (-precision_bits)
    cut_threshold = 2.0 ** (-precision_bits)
    cap = max(outer_terms, math.ceil(pf) + 1)
    acc = 0.0
    round_slack = 0.0
    inner_err = 0.0
    binom = (pf - 1) * (pf - 2) / 2  # binom(p-1, 2)
    pow_m = g_minus.value * g_minus.value
    pow_p = g_plus.value * g_plus.value
    pow_hi = gm_hi * gm_hi
    n = 2
    while n <= cap:
        term = binom * (pow_m - pow_p)
        acc += term
        round_slack += (n + 4) * eps * (abs(binom) * (abs(pow_m) + abs(pow_p)))
        inner_err += abs(binom) * n * pow_hi / gm_hi * inner_tau
        if n > pf and (qf - 1) / 4 * pow_hi < cut_threshold:
            break
        n += 1
        binom *= (pf - n) / n  # binom(p-1, n)
        pow_m *= g_minus.value
        pow_p *= g_plus.value
        pow_hi *= gm_hi
    n_stop = n
    outer_tail = (qf - 1) / 2 * gm_hi ** (n_stop + 1) / (1 - gm_hi)
    round_slack += 8 * eps * abs(acc)
    return SeriesValue(acc, outer_tail + inner_err + round_slack)


def _eval_F_mpf(pair, x, outer_terms, series_order, precision_bits):
    with mp.workprec(precision_bits):
        xm = mpf(x) if not isinstance(x, Fraction) else mpf(x.numerator) / x.denominator
        pm = pair.p_mpf(precision_bits)
        qm = pair.q_mpf(precision_bits)
        g_minus = eval_g(pair, xm, -1, series_order, precision_bits)
        g_plus = eval_g(pair, xm, +1, series_order, precision_bits)
        gm_hi = g_minus.value + g_minus.tail_bound
        inner_tau = g_minus.tail_bound + g_plus.tail_bound
        eps = mpf(2) ** (1 - precision_bits)
        cut_threshold = mpf(2) ** (-precision_bits)
        cap = max(outer_terms, math.ceil(float(pm)) + 1)
        acc = mpf(0)
        round_slack = mpf(0)
        inner_err = mpf(0)
        binom = (pm - 1) * (pm - 2) / 2
        pow_m = g_minus.value ** 2
        pow_p = g_plus.value ** 2
        pow_hi = gm_hi ** 2
        n = 2
        while n <= cap:
            term = binom * (pow_m - pow_p)
            acc += term
            round_slack += (n + 4) * eps * (abs(binom) * (abs(pow_m) + abs(pow_p)))
            inner_err += abs(binom) * n * pow_hi / gm_hi * inner_tau
            if n > pm and (qm - 1) / 4 * pow_hi < cut_threshold:
                break
            n += 1
            binom *= (pm - n) / n
            pow_m *= g_minus.value
            pow_p *= g_plus.value
            pow_hi *= gm_hi
        outer_tail = (qm - 1) / 2 * pow_hi * gm_hi / (1 - gm_hi)
        round_slack += 8 * eps * abs(acc)
        return SeriesValue(+acc, +(outer_tail + inner_err + round_slack))


# ---------------------------------------------------------------------------
# Grid check reports
# ---------------------------------------------------------------------------

@dataclass
class GridCheckReport:
    """Outcome of one predicate over a (p, x) grid.

    The margin at each point is the checked quantity minus its tolerance
    threshold, so pass == (worst margin > 0) == (no failures).
    """

    description: str
    grid: dict
    worst_margin: float
    passed: bool
    failures: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "description": self.description,
            "grid": self.grid,
            "worst_margin": self.worst_margin,
            "pass": self.passed,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _x_grid_spec(x_grid) -> dict:
    xs = [float(x) for x in x_grid]
    return {"x_min": min(xs), "x_max": max(xs), "points": len(xs)}


def _build_report(description, grid, points) -> GridCheckReport:
    """points: iterable of (margin, p, x, lhs, rhs)."""
    worst = math.inf
    failures = []
    for margin, p, x, lhs, rhs in points:
        if margin < worst:
            worst = margin
        if not margin > 0:
            failures.append({"p": p, "x": x, "lhs": lhs, "rhs": rhs})
    return GridCheckReport(description=description, grid=grid,
                           worst_margin=worst, passed=not failures,
                           failures=failures)


def check_g_bounds(pair: ExponentPair, x_grid=DEFAULT_X_GRID,
                   order: int = DEFAULT_ORDER,
                   precision_bits: int = 53) -> GridCheckReport:
    """The sign-and-size chain -1 < g(x) < 0 < -g(x) < g(-x) < 1, strictly."""
    pf = pair.p_float()
    points = []
    for x in x_grid:
        xf = float(x)
        gm, tm = eval_g(pair, x, -1, order, precision_bits)
        gp, tp = eval_g(pair, x, +1, order, precision_bits)
        candidates = [
            (gp + 1 - tp, gp, -1.0),          # g(x) > -1
            (-gp - tp, 0.0, gp),              # g(x) < 0
            (gm + gp - tm - tp, gm, -gp),     # -g(x) < g(-x)
            (1 - gm - tm, 1.0, gm),           # g(-x) < 1
        ]
        margin, lhs, rhs = min(candidates, key=lambda c: c[0])
        points.append((margin, pf, xf, lhs, rhs))
    return _build_report(
        "g-bound chain: -1 < g(x) < 0 < -g(x) < g(-x) < 1 (strict beyond tolerance)",
        {"p": [pf], **_x_grid_spec(x_grid)}, points)


def check_lemma_gpm(pair: ExponentPair, x_grid=DEFAULT_X_GRID,
                    order: int = DEFAULT_ORDER,
                    precision_bits: int = 53) -> GridCheckReport:
    """Even-part bound g(-x) + g(x) <= (p+1)/(9 p^2)."""
    pf = pair.p_float()
    bound = (pf + 1) / (9 * pf * pf)
    points = []
    for x in x_grid:
        gm, tm = eval_g(pair, x, -1, order, precision_bits)
        gp, tp = eval_g(pair, x, +1, order, precision_bits)
        margin = bound - (gm + gp) - (tm + tp)
        points.append((margin, pf, float(x), gm + gp, bound))
    return _build_report(
        "even-part bound: g(-x) + g(x) <= (p+1)/(9p^2)",
        {"p": [pf], **_x_grid_spec(x_grid)}, points)


def check_lemma_ak_lower(pair: ExponentPair, k_max: int = DEFAULT_ORDER) -> GridCheckReport:
    """Coefficient floor a_k >= 1/(p k (k+1)) for k >= 2, strict for finite k.

    Exact rational comparison on the rational path.
    """
    points = []
    if pair.is_rational:
        a = _a_exact(pair, k_max)
        p = pair.p_exact
        for k in range(2, k_max + 1):
            bound = Fraction(1, 1) / (p * k * (k + 1))
            margin = a[k] - bound
            points.append((float(margin), float(p), float(k),
                           float(a[k]), float(bound)))
    else:
        bits = pair.precision_bits
        a = g_series(pair, k_max).a
        with mp.workprec(bits):
            p = pair.p_mpf(bits)
            for k in range(2, k_max + 1):
                bound = 1 / (p * k * (k + 1))
                points.append((float(a[k] - bound), float(p), float(k),
                               float(a[k]), float(bound)))
    return _build_report(
        "coefficient floor: a_k >= 1/(p k (k+1)) for 2 <= k <= k_max (exact)",
        {"p": [pair.p_float()], "k_min": 2, "k_max": k_max}, points)


def check_lemma_binom_upper(pair: ExponentPair, k_range=range(2, 41)) -> GridCheckReport:
    """|binom(p-1, k)| <= (q-1)/4 for integer k > p; exact on the rational path."""
    points = []
    pf = pair.p_float()
    if pair.is_rational:
        p = pair.p_exact
        bound = (p / (p - 1) - 1) / 4    # (q-1)/4 = 1/(4(p-1))
        for k in k_range:
            if not k > p:
                continue
            value = abs(binom_general_rational(p - 1, k))
            points.append((float(bound - value), pf, float(k),
                           float(value), float(bound)))
    else:
        bits = pair.precision_bits
        with mp.workprec(bits):
            p = pair.p_mpf(bits)
            bound = 1 / (4 * (p - 1))
            for k in k_range:
                if not k > p:
                    continue
                value = abs(binom_general_real(p - 1, k, bits))
                points.append((float(bound - value), pf, float(k),
                               float(value), float(bound)))
    if not points:
        raise ValueError(f"k_range contains no k > p for p={pf}")
    return _build_report(
        "binomial-coefficient cap: |binom(p-1, k)| <= (q-1)/4 for k > p (exact)",
        {"p": [pf], "k": [int(k) for k in k_range]}, points)


def check_lemma_g_linear(pair: ExponentPair, x_grid=DEFAULT_X_GRID,
                         order: int = DEFAULT_ORDER,
                         precision_bits: int = 53) -> GridCheckReport:
    """Linear cap g(-x) <= (q-1)(5q-1)/(6 q^2) * x on (0, 1/2]."""
    pf = pair.p_float()
    qf = pair.q_float()
    slope = (qf - 1) * (5 * qf - 1) / (6 * qf * qf)
    points = []
    for x in x_grid:
        xf = float(x)
        gm, tm = eval_g(pair, x, -1, order, precision_bits)
        margin = slope * xf - gm - tm
        points.append((margin, pf, xf, gm, slope * xf))
    return _build_report(
        "linear cap: g(-x) <= (q-1)(5q-1)/(6q^2) x",
        {"p": [pf], **_x_grid_spec(x_grid)}, points)


def check_pairwise_positivity(pair: ExponentPair, x_grid=DEFAULT_X_GRID,
                              n_max: int = 15, order: int = DEFAULT_ORDER,
                              precision_bits: int = 53) -> GridCheckReport:
    """Paired bracket-power terms are nonnegative for p in an odd-to-even window.

    For odd n: binom(p-1,n)(g^n(-x) - g^n(x)) + binom(p-1,n+1)(g^(n+1)(-x)
    - g^(n+1)(x)) >= 0.  Nonnegativity is checked up to the evaluation
    tolerance (the quantity vanishes identically for integer p and n > p).
    """
    pf = pair.p_float()
    k = math.ceil(pf / 2)
    if not (2 * k - 1 <= pf <= 2 * k):
        raise ValueError(
            f"p={pf} does not lie between an odd and an even integer")
    if n_max % 2 == 0:
        raise ValueError(f"n_max must be odd, got {n_max}")
    eps = 2.0 ** (-precision_bits)
    points = []
    for x in x_grid:
        xf = float(x)
        gm, tm = eval_g(pair, x, -1, order, precision_bits)
        gp, tp = eval_g(pair, x, +1, order, precision_bits)
        gm_hi = min(gm + tm, 0.999999)
        tau = tm + tp
        worst_here = None
        for n in range(1, n_max + 1, 2):
            b_n = _binom_float(pf - 1, n)
            b_n1 = _binom_float(pf - 1, n + 1)
            value = b_n * (gm ** n - gp ** n) + b_n1 * (gm ** (n + 1) - gp ** (n + 1))
            allow = (abs(b_n) * n * gm_hi ** (n - 1)
                     + abs(b_n1) * (n + 1) * gm_hi ** n) * tau
            allow += 16 * eps * (abs(b_n) + abs(b_n1) + 1)
            margin = value + allow
            if worst_here is None or margin < worst_here[0]:
                worst_here = (margin, pf, xf, value, -allow)
        points.append(worst_here)
    return _build_report(
        "paired positivity: consecutive odd/even bracket-power terms sum >= 0 "
        f"(odd n <= {n_max})",
        {"p": [pf], "n_max": n_max, **_x_grid_spec(x_grid)}, points)


def _binom_float(alpha: float, k: int) -> float:
    acc = 1.0
    for j in range(k):
        acc *= (alpha - j) / (j + 1)
    return acc


def check_EF_positive(pair: ExponentPair, x_grid=DEFAULT_X_GRID,
                      order: int = DEFAULT_ORDER,
                      outer_terms: int = DEFAULT_OUTER_TERMS,
                      precision_bits: int = 53) -> GridCheckReport:
    """Strict positivity of E(x) + F(x), the heart of the improvement proof."""
    pf = pair.p_float()
    points = []
    for x in x_grid:
        xf = float(x)
        e = eval_E(pair, x, order, precision_bits)
        f = eval_F(pair, x, outer_terms, order, precision_bits)
        value = e.value + f.value
        tol = e.tail_bound + f.tail_bound
        points.append((value - tol, pf, xf, value, tol))
    return _build_report(
        "positivity of E + F on (0, 1/2] (margin = value - combined tolerance)",
        {"p": [pf], **_x_grid_spec(x_grid)}, points)


def check_decomposition_identity(pair: ExponentPair, x_grid=DEFAULT_X_GRID,
                                 precision_bits: int = 113,
                                 order: int = DEFAULT_ORDER,
                                 outer_terms: int = DEFAULT_OUTER_TERMS) -> GridCheckReport:
    """Closed-form weight equals (x/q)^(p-1) (x/q + E + F) within tolerance."""
    pf = pair.p_float()
    points = []
    with mp.workprec(precision_bits):
        eps = mpf(2) ** (1 - precision_bits)
        q = pair.q_mpf(precision_bits)
        pm1 = pair.p_mpf(precision_bits) - 1
        s = pair.inv_q_mpf(precision_bits)
        for x in x_grid:
            xm = mpf(x) if not isinstance(x, Fraction) else \
                mpf(x.numerator) / x.denominator
            lhs = eval_w_closed_x(pair, xm, precision_bits)
            e = eval_E(pair, xm, order, precision_bits)
            f = eval_F(pair, xm, outer_terms, order, precision_bits)
            prefactor = (xm / q) ** pm1
            rhs = prefactor * (xm / q + e.value + f.value)
            residual = abs(lhs - rhs)
            # Rounding allowance: bracket powers amplify by (p-1)/v near the
            # fractional-power branch, v the inner bracket value.
            v_plus = 1 - (1 - xm) ** s
            v_minus = (1 + xm) ** s - 1
            slack = 64 * eps * (abs(pm1) + 1) * (
                v_plus ** pm1 / v_plus + v_minus ** pm1 / v_minus)
            slack += 64 * eps * (abs(lhs) + abs(rhs) + 1)
            tol = prefactor * (e.tail_bound + f.tail_bound) + slack
            points.append((float(tol - residual), pf, float(x),
                           float(residual), float(tol)))
    return _build_report(
        "bracket decomposition: |w(x) - (x/q)^(p-1)(x/q + E + F)| <= tolerance",
        {"p": [pf], "precision_bits": precision_bits, **_x_grid_spec(x_grid)},
        points)


def check_n1_case(p_grid=N1_P_GRID, target_digits: int = 30) -> GridCheckReport:
    """Strict improvement at the boundary index: w_p(1) > w_p^H(1) on (1, 20]."""
    points = []
    threshold = 10.0 ** (-(target_digits - 2))
    for p in p_grid:
        pair = ExponentPair(p)
        w1 = eval_w1_closed(pair, target_digits)
        wc = eval_w_classical(pair, 1, target_digits)
        margin = float((w1 - wc).value) - threshold
        points.append((margin, float(pair.p_float()), 1.0,
                       float(w1.value), float(wc.value)))
    return _build_report(
        "n = 1 special value: w_p(1) > w_p^H(1) for p on a grid over (1, 20]",
        {"p_min": float(min(float(p) for p in p_grid)),
         "p_max": float(max(float(p) for p in p_grid)),
         "points": len(list(p_grid)), "target_digits": target_digits}, points)


def check_fs08_pointwise(a: float, t: float, p: float) -> bool:
    """Pointwise inequality |a-t|^p >= (1-t)^(p-1) (|a|^p - t) for t in [0, 1]."""
    if not 0 <= t <= 1:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    lhs = abs(a - t) ** p
    rhs = (1 - t) ** (p - 1) * (abs(a) ** p - t) if t < 1 else 0.0
    return lhs >= rhs - 1e-12 * max(1.0, abs(lhs), abs(rhs))


# ---------------------------------------------------------------------------
# Suite driver
# ---------------------------------------------------------------------------

def merge_reports(description: str, reports) -> GridCheckReport:
    """Fold per-p reports of one predicate into a single grid report."""
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    p_values = sorted({p for r in reports for p in r.grid.get("p", [])})
    grid = dict(reports[0].grid)
    grid["p"] = p_values
    failures = [f for r in reports for f in r.failures]
    return GridCheckReport(
        description=description,
        grid=grid,
        worst_margin=min(r.worst_margin for r in reports),
        passed=not failures,
        failures=failures)


def _between_odd_and_even(p: Fraction | float) -> bool:
    pf = float(p)
    k = math.ceil(pf / 2)
    return 2 * k - 1 <= pf <= 2 * k


def run_default_suite(p_grid=DEFAULT_P_GRID, x_grid=DEFAULT_X_GRID,
                      order: int = DEFAULT_ORDER,
                      precision_bits: int = 53) -> dict:
    """All lemma and identity checks over the default grids.

    Returns a mapping of check name to merged GridCheckReport.  The paired
    positivity check only applies where its hypothesis (p between an odd and
    an even integer) holds, so its grid is the qualifying subset.
    """
    pairs = [ExponentPair(p) for p in p_grid]
    suite = {}
    suite["g_bounds"] = merge_reports(
        "g-bound chain over the default grid",
        (check_g_bounds(pair, x_grid, order, precision_bits) for pair in pairs))
    suite["gpm"] = merge_reports(
        "even-part bound over the default grid",
        (check_lemma_gpm(pair, x_grid, order, precision_bits) for pair in pairs))
    suite["ak_lower"] = merge_reports(
        "coefficient floor over the default grid",
        (check_lemma_ak_lower(pair, order) for pair in pairs))
    suite["binom_upper"] = merge_reports(
        "binomial-coefficient cap over the default grid",
        (check_lemma_binom_upper(pair) for pair in pairs))
    suite["g_linear"] = merge_reports(
        "linear cap over the default grid",
        (check_lemma_g_linear(pair, x_grid, order, precision_bits) for pair in pairs))
    suite["pairwise"] = merge_reports(
        "paired positivity over the qualifying subset of the default grid",
        (check_pairwise_positivity(pair, x_grid, 15, order, precision_bits)
         for pair in pairs if _between_odd_and_even(pair.p_float())))
    suite["ef_positive"] = merge_reports(
        "positivity of E + F over the default grid",
        (check_EF_positive(pair, x_grid, order, DEFAULT_OUTER_TERMS,
                           precision_bits) for pair in pairs))
    suite["decomposition"] = merge_reports(
        "bracket decomposition over the default grid",
        (check_decomposition_identity(pair, x_grid) for pair in pairs))
    suite["n1_case"] = check_n1_case()
    return suite
