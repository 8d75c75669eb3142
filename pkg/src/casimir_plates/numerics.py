"""Shared numerical kernels: quadrature, tail-bounded sums, basis fits, stencils.

Every routine here is deterministic (same inputs give bit-identical outputs)
and reports an explicit error measure, either in its result type or in the
exception it raises.  Nothing keeps internal state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import quad

__all__ = [
    "NumericsError",
    "QuadratureError",
    "TailBoundError",
    "IllConditionedFitError",
    "QuadratureResult",
    "FitResult",
    "integrate_semi_infinite",
    "sum_until_tail_bound",
    "fit_linear_basis",
    "central_difference",
    "curl_fd",
    "mean_over_rectangle",
    "mean_over_box",
]

#: Absolute error floor for quadrature convergence tests.  Relative tolerances
#: are meaningless when the true value is zero; below this magnitude an
#: integral is accepted as converged.
ABS_FLOOR = 1e-30


class NumericsError(Exception):
    """Base class for failures of the numerical kernels."""


class QuadratureError(NumericsError):
    """Quadrature did not reach the requested tolerance.

    Carries the best value obtained and its achieved error estimate so
    callers can decide whether the partial answer is still usable.
    """

    def __init__(self, message: str, value: float, error_estimate: float,
                 evaluations: int):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class TailBoundError(NumericsError):
    """A truncated sum's tail bound never dropped below tolerance."""

    def __init__(self, message: str, partial_sum: float, bound: float):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.bound = bound


class IllConditionedFitError(NumericsError):
    """Least-squares design matrix too ill-conditioned to trust."""

    def __init__(self, message: str, condition_estimate: float):
        super().__init__(message)
        self.condition_estimate = condition_estimate


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class FitResult:
    coefficients: np.ndarray
    residual_norm: float
    condition_estimate: float


def integrate_semi_infinite(
    integrand: Callable[[float], float],
    tol: float,
    *,
    interior_points: Sequence[float] | None = None,
    limit: int = 200,
) -> QuadratureResult:
    """Integrate a continuous, decaying function over [0, infinity).

    The half line is folded onto (0, 1] with u = 1/(1+x), then adaptive
    Gauss-Kronrod subdivision runs on the finite interval.  The integrand
    must decay fast enough that f(x)*x^2 -> 0, which holds for anything with
    an exponential factor.  ``interior_points`` may list x locations of
    known sharp features (an exponential's turnover, say) so subdivision
    starts there instead of discovering them.

    Raises QuadratureError, carrying the achieved estimate, if the adaptive
    pass reports trouble.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    def folded(u: float) -> float:
        if u <= 0.0:
            return 0.0
        x = (1.0 - u) / u
        return integrand(x) / (u * u)

    pts = None
    if interior_points:
        folded_pts = sorted({1.0 / (1.0 + x) for x in interior_points if x > 0.0})
        pts = [p for p in folded_pts if 0.0 < p < 1.0] or None

    out = quad(folded, 0.0, 1.0, epsabs=ABS_FLOOR, epsrel=tol,
               limit=limit, points=pts, full_output=True)
    value, abserr, info = out[0], out[1], out[2]
    evaluations = int(info["neval"])
    if len(out) > 3:
        raise QuadratureError(
            f"semi-infinite quadrature did not converge: {out[3]}",
            value=value, error_estimate=abserr, evaluations=evaluations)
    return QuadratureResult(value=value, error_estimate=abserr,
                            evaluations=evaluations)


def sum_until_tail_bound(
    term: Callable[[int], float],
    tail_bound: Callable[[int], float],
    tol: float,
    *,
    max_terms: int = 200_000,
) -> float:
    """Sum term(1) + term(2) + ... until the tail is provably negligible.

    ``tail_bound(n)`` must bound abs(sum of term(m) for m > n); supplying a
    valid bound is the caller's contract.  Terms are added in increasing n
    until tail_bound(n) <= tol * abs(partial sum), so the returned value
    differs from the full sum by at most that amount.

    Raises TailBoundError (carrying the partial sum and last bound) if
    ``max_terms`` terms never satisfy the criterion.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    total = 0.0
    bound = math.inf
    for n in range(1, max_terms + 1):
        total += term(n)
        bound = tail_bound(n)
        if bound <= tol * abs(total):
            return total
    raise TailBoundError(
        f"tail bound {bound:.3e} still above tol*|sum| after {max_terms} terms",
        partial_sum=total, bound=bound)


def fit_linear_basis(
    samples: Iterable[tuple[float, float]],
    basis_exponents: Sequence[float],
    *,
    cond_max: float = 1e6,
) -> FitResult:
    """Least-squares fit of y ~ sum_i c_i * x**e_i over (x, y) samples.

    The design matrix is column-equilibrated (each column scaled to unit
    norm) before the SVD solve, so the reported condition number measures
    genuine collinearity of the basis functions on the sample points rather
    than raw column scale; with exponents like -4 the unscaled matrix is
    numerically useless.  Coefficients are mapped back to the original
    scale before returning.

    Raises IllConditionedFitError when the equilibrated condition number
    exceeds ``cond_max`` or the matrix is rank deficient.
    """
    pts = np.asarray(list(samples), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("samples must be (x, y) pairs")
    exps = np.asarray(basis_exponents, dtype=float)
    if exps.size == 0:
        raise ValueError("need at least one basis exponent")
    x, y = pts[:, 0], pts[:, 1]
    if x.size < exps.size:
        raise ValueError("need at least as many samples as basis functions")
    if np.any(exps < 0) and np.any(x <= 0.0):
        raise ValueError("negative exponents require strictly positive x")

    design = np.power.outer(x, exps)
    scale = np.linalg.norm(design, axis=0)
    if not np.all(np.isfinite(scale)) or np.any(scale == 0.0):
        raise IllConditionedFitError(
            "degenerate design column", condition_estimate=math.inf)
    scaled = design / scale
    coeffs_scaled, _, rank, singular = np.linalg.lstsq(scaled, y, rcond=None)
    if singular[-1] <= 0.0 or rank < exps.size:
        raise IllConditionedFitError(
            "rank-deficient design matrix", condition_estimate=math.inf)
    cond = float(singular[0] / singular[-1])
    if cond > cond_max:
        raise IllConditionedFitError(
            f"condition estimate {cond:.3e} exceeds limit {cond_max:.3e}",
            condition_estimate=cond)
    coefficients = coeffs_scaled / scale
    residual_norm = float(np.linalg.norm(y - design @ coefficients))
    return FitResult(coefficients=coefficients, residual_norm=residual_norm,
                     condition_estimate=cond)


def central_difference(
    f: Callable[[np.ndarray], float],
    point: Sequence[float],
    axis: int,
    step: float,
) -> float:
    """Two-sided first derivative of a scalar field along one axis.

    Second-order accurate: the truncation error is (step**2 / 6) times the
    third derivative along ``axis``.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    p = np.asarray(point, dtype=float)
    offset = np.zeros_like(p)
    offset[axis] = step
    return (f(p + offset) - f(p - offset)) / (2.0 * step)


def curl_fd(
    field: Callable[[np.ndarray], np.ndarray],
    point: Sequence[float],
    step: float,
) -> np.ndarray:
    """Finite-difference curl of a 3-vector field, error O(step^2)."""

    def component(i: int) -> Callable[[np.ndarray], float]:
        return lambda p: float(field(p)[i])

    d = lambda i, axis: central_difference(component(i), point, axis, step)
    return np.array([
        d(2, 1) - d(1, 2),
        d(0, 2) - d(2, 0),
        d(1, 0) - d(0, 1),
    ])


_GL_LEVELS = (8, 16, 32, 64, 128, 256)


def _gl_nodes(n: int, length: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    # map [-1, 1] -> [0, length]
    return 0.5 * length * (x + 1.0), 0.5 * length * w


def mean_over_rectangle(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lx: float,
    ly: float,
    tol: float,
) -> QuadratureResult:
    """Mean of f over [0,lx] x [0,ly] by node-doubling Gauss-Legendre.

    ``f`` must accept meshgrid arrays and return an array of the same shape.
    Convergence is declared when successive levels agree to ``tol``
    relatively (or both fall below the absolute floor); the error estimate
    is the last inter-level difference.
    """
    prev = None
    evaluations = 0
    estimate = math.inf
    for n in _GL_LEVELS:
        xs, wx = _gl_nodes(n, lx)
        ys, wy = _gl_nodes(n, ly)
        vals = f(xs[:, None], ys[None, :])
        integral = float(np.einsum("i,j,ij->", wx, wy, vals))
        mean = integral / (lx * ly)
        evaluations += n * n
        if prev is not None:
            estimate = abs(mean - prev)
            if estimate <= max(tol * abs(mean), ABS_FLOOR):
                return QuadratureResult(mean, estimate, evaluations)
        prev = mean
    raise QuadratureError(
        f"rectangle mean did not converge below tol={tol:g}",
        value=prev, error_estimate=estimate, evaluations=evaluations)


def mean_over_box(
    f: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    lx: float,
    ly: float,
    lz: float,
    tol: float,
) -> QuadratureResult:
    """Mean of f over the box [0,lx] x [0,ly] x [0,lz]; see mean_over_rectangle."""
    prev = None
    evaluations = 0
    estimate = math.inf
    for n in _GL_LEVELS[:5]:  # 128^3 points is the practical ceiling
        xs, wx = _gl_nodes(n, lx)
        ys, wy = _gl_nodes(n, ly)
        zs, wz = _gl_nodes(n, lz)
        vals = f(xs[:, None, None], ys[None, :, None], zs[None, None, :])
        integral = float(np.einsum("i,j,k,ijk->", wx, wy, wz, vals))
        mean = integral / (lx * ly * lz)
        evaluations += n**3
        if prev is not None:
            estimate = abs(mean - prev)
            if estimate <= max(tol * abs(mean), ABS_FLOOR):
                return QuadratureResult(mean, estimate, evaluations)
        prev = mean
    raise QuadratureError(
        f"box mean did not converge below tol={tol:g}",
        value=prev, error_estimate=estimate, evaluations=evaluations)
