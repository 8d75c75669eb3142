"""Cutoff-regularized mode summation and the finite Casimir force.

Summing the plate stress over all cavity modes diverges; an exponential
cutoff exp(-lambda k) on the mode wave number makes the sum finite and the
divergence reappears as the cutoff is removed.  In the large-L limit the
transverse sum becomes a radial integral and the regularized force per unit
plate area is

    F(a, lambda) = -(hbar c / (2 pi a)) * sum_n (n pi / a)^2 * R_n,
    R_n = integral over kappa of kappa (kappa^2 + (n pi/a)^2)^(-1/2)
          * exp(-lambda sqrt(kappa^2 + (n pi/a)^2))

with n the plate-normal mode number.  Four independent evaluation routes
are implemented:

  numeric     the n-sum with each R_n integrated numerically,
  per-n       R_n replaced by its exact value (1/lambda) e^(-lambda n pi/a),
  closed form the per-n geometric series summed exactly,
  series      an asymptotic expansion in lambda via Bernoulli numbers.

The series exposes the small-lambda structure: a lambda^-4 pole whose
coefficient -hbar c / pi^2 does not depend on the plate separation, a
finite lambda^0 piece pi^2 hbar c / (240 a^4), and terms that vanish with
lambda.  Only the separation-dependent finite piece is physical; the force
between the plates is its derivative signature, attraction of magnitude
pi^2 hbar c / (240 a^4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .numerics import (
    QuadratureResult,
    fit_linear_basis,
    integrate_semi_infinite,
    sum_until_tail_bound,
)
from .units import NATURAL, UnitSystem

__all__ = [
    "Regulator",
    "RegularizedForce",
    "BernoulliTable",
    "SeriesTerm",
    "AsymptoticParts",
    "ExtractedForce",
    "PrecisionLossError",
    "ROUTES",
    "BASIS_EXPONENTS",
    "bernoulli_numbers",
    "per_n_term",
    "force_sum_numeric",
    "force_per_n_sum",
    "force_closed_form",
    "series_terms",
    "series_value",
    "asymptotic_parts",
    "extract_finite_part",
    "casimir_closed_form",
    "evaluate_route",
    "decompose",
]

#: Evaluation routes selectable from the command line.
ROUTES = ("closed_form", "numeric_sum", "series")

#: Exponents of the regulator powers present in F(a, lambda) for small
#: lambda: the pole, the finite part, and the two leading vanishing terms.
BASIS_EXPONENTS = (-4.0, 0.0, 1.0, 2.0)

#: Below this value of lambda*pi/a the closed form loses all significant
#: digits to cancellation in (1 - q)^3.
_MIN_CUTOFF_RATIO = 1e-8

#: extract_finite_part only accepts grids inside this window of
#: lambda*pi/a: small enough that the four-term expansion represents
#: F(a, lambda) to better than the fit tolerances, large enough that the
#: lambda^-4 column does not swamp the rest.
_EXTRACT_RATIO_WINDOW = (0.01, 0.5)


class PrecisionLossError(ValueError):
    """Closed-form evaluation requested in a catastrophic-cancellation regime."""


@dataclass(frozen=True)
class Regulator:
    """Exponential cutoff exp(-lambda k); lam is the cutoff length."""

    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise ValueError(f"lam must be positive and finite, got {self.lam!r}")


@dataclass(frozen=True)
class RegularizedForce:
    """A regularized force value split against its small-lambda asymptotics.

    total = divergent_coefficient * lam**-4 + finite_part + remainder,
    with remainder -> 0 as lam -> 0 (it is O(lam^2); the lam^1 series term
    carries a vanishing Bernoulli number).
    """

    lam: float
    total: float
    divergent_coefficient: float
    finite_part: float
    remainder: float


@dataclass(frozen=True)
class BernoulliTable:
    """Bernoulli numbers B_0..B_n as exact fractions, B_1 = -1/2 convention."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        v = self.values
        if len(v) < 1 or v[0] != 1:
            raise ValueError("table must start with B_0 = 1")
        for i in range(3, len(v), 2):
            if v[i] != 0:
                raise ValueError(f"odd-index B_{i} must vanish")

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]


@dataclass(frozen=True)
class SeriesTerm:
    """One term of the asymptotic expansion of F(a, lambda).

    The order-h term equals coefficient * hbar c * pi^(h-2) * a^-h *
    lam^(h-4); ``value`` is that number, ``coefficient`` the exact rational
    -(1/2) (B_h / h!) (-1)^h (h-1)(h-2).
    """

    h: int
    coefficient: Fraction
    value: float

    @property
    def lambda_power(self) -> int:
        return self.h - 4


@dataclass(frozen=True)
class AsymptoticParts:
    """Small-lambda split of the regularized force per unit area.

    ``divergent_coefficient`` multiplies lam**-4 and is independent of the
    plate separation; ``finite_part`` is the lambda-independent piece
    pi^2 hbar c / (240 a^4), whose magnitude is the Casimir pressure.
    """

    divergent_coefficient: float
    finite_part: float


@dataclass(frozen=True)
class ExtractedForce:
    """Finite part recovered from force samples by a least-squares fit."""

    divergent_coefficient: float
    finite_part: float
    coefficients: tuple[float, ...]
    exponents: tuple[float, ...]
    residual_norm: float
    condition_estimate: float


def bernoulli_numbers(h_max: int) -> BernoulliTable:
    """Bernoulli numbers B_0..B_h_max by the defining recurrence.

    Uses sum_{j<=m} C(m+1, j) B_j = 0 for m >= 1, solved for B_m with exact
    rational arithmetic.  The B_1 = -1/2 convention matches the generating
    function x / (e^x - 1).
    """
    if h_max < 4:
        raise ValueError("h_max must be at least 4")
    values = [Fraction(1)]
    for m in range(1, h_max + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * values[j]
        values.append(-acc / (m + 1))
    return BernoulliTable(values=tuple(values))


def _prefactor(a: float, units: UnitSystem) -> float:
    """Common factor -(hbar c / (2 pi a)) (pi / a)^2 of the summation routes."""
    return -(units.hbar_c / (2.0 * math.pi * a)) * (math.pi / a) ** 2


def per_n_term(a: float, reg: Regulator, n: int,
               units: UnitSystem = NATURAL) -> float:
    """Exact contribution of plate-normal mode number n to F(a, lambda).

    The radial integral has the closed value R_n = (1/lambda)
    exp(-lambda n pi / a), so the term is
    -(hbar c / (2 pi a)) (n pi / a)^2 (1/lambda) exp(-lambda n pi / a).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = reg.lam
    return (_prefactor(a, units) * n * n / lam) * math.exp(-lam * n * math.pi / a)


def _geometric_tail(n: int, q: float, one_minus_q: float) -> float:
    """Exact value of sum_{m>n} m^2 q^m for 0 < q < 1."""
    return q**n * (n * n * q / one_minus_q
                   + 2.0 * n * q / one_minus_q**2
                   + q * (1.0 + q) / one_minus_q**3)


def _tail_bound_factory(a: float, lam: float, units: UnitSystem):
    """Bound on the absolute tail of either n-sum route past term n.

    Both routes have |term(m)| = |pref| m^2 (1/lambda) q^m with
    q = exp(-lambda pi / a) (for the numeric route, because R_m <=
    (1/lambda) e^(-lambda m pi/a) bounds the integral), so the geometric
    tail sum is an honest bound.
    """
    q = math.exp(-lam * math.pi / a)
    one_minus_q = -math.expm1(-lam * math.pi / a)
    scale = abs(_prefactor(a, units)) / lam
    return lambda n: scale * _geometric_tail(n, q, one_minus_q)


def _radial_integral(a: float, lam: float, n: int, tol: float) -> QuadratureResult:
    """R_n by quadrature, via the substitution kappa^2 = (n pi / a)^2 z.

    That substitution turns R_n into (M/2) * K(lam M) with M = n pi / a and
    K(beta) = integral_0^inf (z+1)^(-1/2) exp(-beta sqrt(z+1)) dz.  The
    integrand of K peaks near z = 0 for large beta and decays like
    exp(-beta sqrt(z)); hint points around z ~ (3/beta)^2 scale guide the
    subdivision.
    """
    big_m = n * math.pi / a
    beta = lam * big_m

    def integrand(z: float) -> float:
        root = math.sqrt(z + 1.0)
        return math.exp(-beta * root) / root

    u_star = (beta / 3.0) ** 2
    hints = [1.0 / (f * u_star) - 1.0
             for f in (0.1, 1.0, 10.0)
             if 0.0 < f * u_star < 1.0]
    kernel = integrate_semi_infinite(integrand, tol, interior_points=hints)
    return QuadratureResult(value=0.5 * big_m * kernel.value,
                            error_estimate=0.5 * big_m * kernel.error_estimate,
                            evaluations=kernel.evaluations)


def force_sum_numeric(a: float, reg: Regulator, units: UnitSystem = NATURAL,
                      *, tol: float = 1e-10, n_max: int = 4000) -> float:
    """Regularized force per unit area by numerical n-sum and quadrature.

    Each radial integral is evaluated by adaptive quadrature at a tolerance
    one decade below ``tol``; the n-sum stops once the exact geometric tail
    bound falls below tol * |partial sum|.  No closed-form knowledge of the
    radial integral or of the summed series enters this route.

    Raises TailBoundError if n_max terms never meet the bound (lambda too
    small for the given n_max) and QuadratureError if an integral fails.
    """
    lam = reg.lam
    pref = _prefactor(a, units)

    def term(n: int) -> float:
        return pref * n * n * _radial_integral(a, lam, n, 0.1 * tol).value

    return sum_until_tail_bound(term, _tail_bound_factory(a, lam, units),
                                tol, max_terms=n_max)


def force_per_n_sum(a: float, reg: Regulator, units: UnitSystem = NATURAL,
                    *, tol: float = 1e-12, n_max: int = 200_000) -> float:
    """Regularized force per unit area by summing the exact per-n terms."""
    lam = reg.lam

    def term(n: int) -> float:
        return per_n_term(a, reg, n, units)

    return sum_until_tail_bound(term, _tail_bound_factory(a, lam, units),
                                tol, max_terms=n_max)


def force_closed_form(a: float, reg: Regulator,
                      units: UnitSystem = NATURAL) -> float:
    """Regularized force per unit area in closed form.

    Summing the per-n terms as a geometric series in q = exp(-lambda pi / a)
    gives

        F = -(hbar c / (2 pi a)) (pi/a)^2 (1/lambda) q (1 + q) / (1 - q)^3.

    1 - q is computed with expm1 so the q -> 1 cancellation costs no
    accuracy.  For lambda pi / a below 1e-8 even that does not help, since
    the (1-q)^3 denominator has lost half the mantissa; such calls raise
    PrecisionLossError rather than return garbage.
    """
    lam = reg.lam
    x = lam * math.pi / a
    if x < _MIN_CUTOFF_RATIO:
        raise PrecisionLossError(
            f"lambda*pi/a = {x:.3e} below {_MIN_CUTOFF_RATIO:.0e}; closed form "
            "would lose all significant digits (use the series route instead)")
    q = math.exp(-x)
    one_minus_q = -math.expm1(-x)
    return (_prefactor(a, units) / lam) * q * (1.0 + q) / one_minus_q**3


def _series_coefficient(h: int, table: BernoulliTable) -> Fraction:
    """Exact rational coefficient -(1/2) (B_h / h!) (-1)^h (h-1)(h-2)."""
    sign = -1 if h % 2 else 1
    return Fraction(-sign * (h - 1) * (h - 2), 2) * table[h] / math.factorial(h)


def series_terms(a: float, reg: Regulator, h_max: int,
                 units: UnitSystem = NATURAL) -> list[SeriesTerm]:
    """Terms of the asymptotic expansion of F(a, lambda) through order h_max.

    Expanding q (1+q) / (1-q)^3 = sum_h B_h (-x)^h (h-1)(h-2) / (2 h!) in
    x = lambda pi / a term by term gives order-h contribution

        term_h = -(1/2) (B_h / h!) (-1)^h (h-1)(h-2)
                 * hbar c * pi^(h-2) * a^-h * lam^(h-4).

    h = 1 and h = 2 vanish through the (h-1)(h-2) factor and odd h >= 3
    through B_h; vanishing terms are omitted from the returned list.  The
    expansion is asymptotic in lam, so h_max is a truncation order, not a
    convergence knob.
    """
    if h_max < 5:
        raise ValueError("h_max must be at least 5 to reach past the "
                         "finite part")
    table = bernoulli_numbers(h_max)
    lam = reg.lam
    terms = []
    for h in range(h_max + 1):
        coeff = _series_coefficient(h, table)
        if coeff == 0:
            continue
        value = (float(coeff) * units.hbar_c * math.pi ** (h - 2)
                 * a ** (-h) * lam ** (h - 4))
        terms.append(SeriesTerm(h=h, coefficient=coeff, value=value))
    return terms


def series_value(a: float, reg: Regulator, units: UnitSystem = NATURAL,
                 *, h_max: int = 8) -> tuple[float, float]:
    """Truncated asymptotic series for F(a, lambda) and a truncation estimate.

    Returns (value, estimate) where the estimate is the magnitude of the
    first omitted nonvanishing term, the usual heuristic for an asymptotic
    series.
    """
    total = sum(t.value for t in series_terms(a, reg, h_max, units))
    next_terms = [t for t in series_terms(a, reg, h_max + 2, units)
                  if t.h > h_max]
    estimate = abs(next_terms[0].value) if next_terms else 0.0
    return total, estimate


def asymptotic_parts(a: float, units: UnitSystem = NATURAL) -> AsymptoticParts:
    """Divergent coefficient and finite part of F(a, lambda) as lambda -> 0.

    The h = 0 series term gives divergent_coefficient = -hbar c / pi^2,
    carrying no dependence on the plate separation, which is what marks the
    divergence as a regularization artifact rather than a force.  The h = 4
    term gives finite_part = + hbar c pi^2 / (240 a^4).
    """
    table = bernoulli_numbers(4)
    div = float(_series_coefficient(0, table)) * units.hbar_c / math.pi**2
    fin = (float(_series_coefficient(4, table)) * units.hbar_c
           * math.pi**2 / a**4)
    return AsymptoticParts(divergent_coefficient=div, finite_part=fin)


def casimir_closed_form(a: float, units: UnitSystem = NATURAL) -> float:
    """Magnitude pi^2 hbar c / (240 a^4) of the attractive Casimir pressure."""
    return math.pi**2 * units.hbar_c / (240.0 * a**4)


def extract_finite_part(a: float,
                        lambda_grid: Iterable[Regulator | float],
                        units: UnitSystem = NATURAL) -> ExtractedForce:
    """Recover the finite part of F(a, lambda) numerically, without the series.

    Samples the closed-form force on the given regulator grid and fits
    F ~ c * lam^-4 + c0 + c1 lam + c2 lam^2 by least squares; c0 estimates
    the finite part and c the divergent coefficient.  The grid must contain
    at least four distinct values with lambda pi / a in [0.01, 0.5], the
    window where the four-term model represents F to fit accuracy.

    Raises IllConditionedFitError for grids (clustered points, say) on
    which the basis functions become collinear.
    """
    lams = sorted({reg.lam if isinstance(reg, Regulator) else float(reg)
                   for reg in lambda_grid})
    if len(lams) < len(BASIS_EXPONENTS):
        raise ValueError(
            f"need at least {len(BASIS_EXPONENTS)} distinct lambda values, "
            f"got {len(lams)}")
    lo, hi = _EXTRACT_RATIO_WINDOW
    for lam in lams:
        ratio = lam * math.pi / a
        if not (lo <= ratio <= hi):
            raise ValueError(
                f"lambda = {lam:g} gives lambda*pi/a = {ratio:.3g} outside "
                f"the supported window [{lo:g}, {hi:g}]")
    samples = [(lam, force_closed_form(a, Regulator(lam), units))
               for lam in lams]
    fit = fit_linear_basis(samples, BASIS_EXPONENTS)
    c = fit.coefficients
    return ExtractedForce(
        divergent_coefficient=float(c[0]),
        finite_part=float(c[1]),
        coefficients=tuple(float(v) for v in c),
        exponents=BASIS_EXPONENTS,
        residual_norm=fit.residual_norm,
        condition_estimate=fit.condition_estimate,
    )


def evaluate_route(a: float, reg: Regulator, units: UnitSystem, route: str,
                   *, tol: float = 1e-10) -> tuple[float, float]:
    """Evaluate F(a, lambda) by the named route; returns (value, error estimate).

    Routes: 'closed_form' (error at rounding level), 'numeric_sum' (error
    from the summation tolerance), 'series' (error from the first omitted
    term).
    """
    if route == "closed_form":
        value = force_closed_form(a, reg, units)
        return value, 1e-14 * abs(value)
    if route == "numeric_sum":
        value = force_sum_numeric(a, reg, units, tol=tol)
        return value, tol * abs(value)
    if route == "series":
        return series_value(a, reg, units)
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


def decompose(a: float, reg: Regulator, units: UnitSystem = NATURAL,
              route: str = "closed_form", *,
              tol: float = 1e-10) -> RegularizedForce:
    """Split a route's force value against the small-lambda asymptotics."""
    total, _ = evaluate_route(a, reg, units, route, tol=tol)
    parts = asymptotic_parts(a, units)
    remainder = (total - parts.divergent_coefficient / reg.lam**4
                 - parts.finite_part)
    return RegularizedForce(
        lam=reg.lam,
        total=total,
        divergent_coefficient=parts.divergent_coefficient,
        finite_part=parts.finite_part,
        remainder=remainder,
    )
