"""Named self-checks tying the field, stress, and summation layers together.

Each check computes a residual with an explicit bound and never consults
the code path it is checking for its expected value.  run_all returns the
results in a fixed order so command-line output is stable.

The ``sigma_factor`` argument is a fault-injection hook: it multiplies the
closed-form mode stress inside the oracle comparison, so any value other
than 1.0 must make that check fail.  It exists to prove the comparison can
fail; nothing else reads it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import modes, regsum, stress
from .numerics import curl_fd, mean_over_box, mean_over_rectangle
from .units import NATURAL, UnitSystem

__all__ = ["CheckResult", "run_all", "PROFILES"]

# Strict mode tightens the bounds that sit far above observed residuals
# (quadrature and algebraic identities, typically satisfied to 1e-13 or
# better).  Exact-zero checks and fit-quality windows are already as tight
# as they can meaningfully be and keep their default bounds.
PROFILES = ("default", "strict")

_GEOMS = (modes.CavityGeometry(a=1.0, L=1.0), modes.CavityGeometry(a=0.7, L=2.0))


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    bound: float
    passed: bool
    detail: str = ""


def _result(name: str, residual: float, bound: float, detail: str = "") -> CheckResult:
    return CheckResult(name=name, residual=float(residual), bound=float(bound),
                       passed=bool(residual <= bound), detail=detail)


def _mode_grid(n_max: int):
    for nx in range(1, n_max + 1):
        for ny in range(1, n_max + 1):
            for nz in range(1, n_max + 1):
                yield modes.ModeIndex(nx, ny, nz)


def check_boundary_zeros(units: UnitSystem = NATURAL) -> CheckResult:
    """Tangential E and normal B vanish exactly on both plates."""
    worst = 0.0
    for geom in _GEOMS:
        for mode in _mode_grid(3):
            wv = modes.wave_vector(mode, geom)
            amp = modes.mode_amplitudes(mode, geom, units, 0.4)
            omega = units.omega(wv.k)
            xs = np.array([0.137, 0.5, 0.891]) * geom.L
            ys = np.array([0.222, 0.77, 0.993]) * geom.L
            for z in (0.0, geom.a):
                pts = np.stack([*np.meshgrid(xs, ys, indexing="ij"),
                                np.full((3, 3), z)], axis=-1)
                e = modes.electric_mode_at(pts, wv, amp)
                b = modes.magnetic_mode_at(pts, wv, amp, omega)
                worst = max(worst,
                            float(np.max(np.abs(e[..., 0]))),
                            float(np.max(np.abs(e[..., 1]))),
                            float(np.max(np.abs(b[..., 2]))))
    return _result("boundary_zeros_exact", worst, 0.0,
                   "tangential E and B_z on both plates")


def check_transversality(units: UnitSystem = NATURAL) -> CheckResult:
    """Generated amplitudes are orthogonal to the wave vector."""
    worst = 0.0
    for geom in _GEOMS:
        for mode in _mode_grid(4):
            wv = modes.wave_vector(mode, geom)
            for angle in (0.0, 0.35, 1.2, math.pi / 2):
                amp = modes.mode_amplitudes(mode, geom, units, angle)
                worst = max(worst, modes.transversality_residual(amp, wv))
    return _result("generator_transversality", worst, 1e-12)


def check_fd_divergence(units: UnitSystem = NATURAL, scale: float = 1.0) -> CheckResult:
    """Finite-difference div E is numerically zero for transverse amplitudes.

    Uses modes with all wave-number components equal, for which the
    stencil's O(step^2) truncation term cancels along with the divergence
    itself and only rounding noise remains.  The truncation behaviour on
    general modes is what check_fd_divergence_rate measures.
    """
    worst = 0.0
    geom = _GEOMS[0]
    for mode in (modes.ModeIndex(1, 1, 1), modes.ModeIndex(2, 2, 2)):
        wv = modes.wave_vector(mode, geom)
        for angle in (0.0, 0.9):
            amp = modes.mode_amplitudes(mode, geom, units, angle)
            for pt in ((0.23, 0.17, 0.31), (0.61, 0.43, 0.52)):
                res = modes.divergence_residual(pt, wv, amp, step=1e-4)
                # normalize by the field scale |A| k so the bound is
                # geometry independent
                worst = max(worst, abs(res) / (math.sqrt(amp.norm_squared) * wv.k))
    return _result("fd_divergence_zero", worst, 1e-8 * scale,
                   "relative to |A| k, step 1e-4")


def check_fd_divergence_rate(units: UnitSystem = NATURAL) -> CheckResult:
    """The divergence stencil's residual shrinks at second order.

    On a mode with unequal wave-number components the stencil truncation
    term survives even though the true divergence vanishes, so halving the
    step must cut the residual by a factor of four.
    """
    geom = modes.CavityGeometry(a=1.0, L=1.0)
    mode = modes.ModeIndex(1, 2, 1)
    wv = modes.wave_vector(mode, geom)
    amp = modes.mode_amplitudes(mode, geom, units, 0.0)
    pt = (0.23, 0.17, 0.31)
    r_h = abs(modes.divergence_residual(pt, wv, amp, step=1e-3))
    r_h2 = abs(modes.divergence_residual(pt, wv, amp, step=5e-4))
    ratio = r_h / r_h2
    deviation = abs(ratio - 4.0)
    return _result("fd_divergence_second_order", deviation, 0.7,
                   f"halving ratio {ratio:.3f}, expected 4")


def check_bulk_mean_square(units: UnitSystem = NATURAL, scale: float = 1.0) -> CheckResult:
    """Box mean of |E|^2 equals A^2/8 for all modes with n <= 3."""
    worst = 0.0
    for geom in _GEOMS:
        for mode in _mode_grid(3):
            wv = modes.wave_vector(mode, geom)
            amp = modes.mode_amplitudes(mode, geom, units, 0.6)
            expected = modes.mean_square_E(wv, amp, "bulk")

            def e_squared(xs, ys, zs):
                x, y, z = np.broadcast_arrays(xs, ys, zs)
                pts = np.stack([x, y, z], axis=-1)
                e = modes.electric_mode_at(pts, wv, amp)
                return np.sum(e * e, axis=-1)

            got = mean_over_box(e_squared, geom.L, geom.L, geom.a, 1e-11).value
            worst = max(worst, abs(got - expected) / expected)
    return _result("bulk_mean_square_E", worst, 1e-9 * scale,
                   "3-D quadrature vs A^2/8, modes n <= 3")


def _plate_mean(f: Callable[[np.ndarray], np.ndarray], geom, z: float,
                tol: float = 1e-12) -> float:
    def on_plane(xs, ys):
        x, y = np.broadcast_arrays(xs, ys)
        pts = np.stack([x, y, np.full_like(x, z)], axis=-1)
        return f(pts)

    return mean_over_rectangle(on_plane, geom.L, geom.L, tol).value


def check_boundary_mean_squares(units: UnitSystem = NATURAL,
                                scale: float = 1.0) -> CheckResult:
    """Plate means of E^2 and B^2 match their amplitude-level closed forms."""
    worst = 0.0
    for geom in _GEOMS:
        for mode in (modes.ModeIndex(1, 1, 1), modes.ModeIndex(2, 3, 1),
                     modes.ModeIndex(3, 1, 2)):
            wv = modes.wave_vector(mode, geom)
            amp = modes.mode_amplitudes(mode, geom, units, 0.8)
            omega = units.omega(wv.k)

            got_e = _plate_mean(
                lambda pts: np.sum(modes.electric_mode_at(pts, wv, amp)**2, axis=-1),
                geom, 0.0)
            want_e = modes.mean_square_E(wv, amp, "boundary")
            got_b = _plate_mean(
                lambda pts: np.sum(modes.magnetic_mode_at(pts, wv, amp, omega)**2,
                                   axis=-1),
                geom, 0.0)
            want_b = modes.mean_square_B_boundary(wv, amp, units)
            norm = modes.amplitude_norm_squared(mode, geom, units)
            worst = max(worst, abs(got_e - want_e) / norm,
                        abs(got_b - want_b) * units.c**2 / norm)
    return _result("boundary_mean_squares", worst, 1e-9 * scale,
                   "2-D quadrature vs A_z^2/4 and (A_z^2 + A^2 k_z^2/k^2)/4c^2")


def check_curl_consistency(units: UnitSystem = NATURAL) -> CheckResult:
    """magnetic_mode_at agrees with a finite-difference curl of the E field."""
    worst = 0.0
    for geom, mode in ((modes.CavityGeometry(a=0.9, L=1.3), modes.ModeIndex(1, 2, 2)),
                       (_GEOMS[0], modes.ModeIndex(3, 1, 2))):
        wv = modes.wave_vector(mode, geom)
        amp = modes.mode_amplitudes(mode, geom, units, 0.7)
        omega = units.omega(wv.k)
        h = 1e-3 * (2.0 * math.pi / wv.k)
        amp_scale = math.sqrt(amp.norm_squared)
        bound = 2.0 * h * h * amp_scale * wv.k**4 / omega
        for pt in ((0.31, 0.27, 0.41), (0.12, 0.55, 0.2)):
            point = np.array(pt) * np.array([geom.L, geom.L, geom.a])
            b_fd = curl_fd(lambda p: modes.electric_mode_at(p, wv, amp),
                           point, h) / omega
            b = modes.magnetic_mode_at(point, wv, amp, omega)
            worst = max(worst, float(np.linalg.norm(b_fd - b)) / bound)
    return _result("curl_matches_fd", worst, 1.0,
                   "relative to the second-order stencil error bound")


def check_sigma_negative(units: UnitSystem = NATURAL) -> CheckResult:
    """Every mode's averaged normal stress is strictly negative."""
    worst = -math.inf
    for geom in _GEOMS:
        for mode in _mode_grid(5):
            worst = max(worst, stress.sigma_zz_mode(mode, geom, units).sigma_zz)
    return _result("sigma_zz_negative", worst, 0.0,
                   "largest sigma_zz over modes n <= 5")


def check_sigma_oracle(units: UnitSystem = NATURAL, *,
                       sigma_factor: float = 1.0,
                       n_max: int = 2, scale: float = 1.0) -> CheckResult:
    """Plate quadrature of the stress tensor reproduces the closed form."""
    worst = 0.0
    for geom in _GEOMS:
        for mode in _mode_grid(n_max):
            want = stress.sigma_zz_mode(mode, geom, units).sigma_zz * sigma_factor
            got = stress.sigma_zz_direct(mode, geom, units, tol=1e-12,
                                         polarization_angle=0.5).sigma_zz
            worst = max(worst, abs(got - want) / abs(want))
    return _result("sigma_oracle_agreement", worst, 1e-8 * scale,
                   "direct tensor quadrature vs closed form")


def check_sigma_direction_independence(units: UnitSystem = NATURAL,
                                       scale: float = 1.0) -> CheckResult:
    """The averaged stress does not depend on the polarization angle."""
    geom = _GEOMS[1]
    mode = modes.ModeIndex(2, 1, 3)
    values = [stress.sigma_zz_direct(mode, geom, units, tol=1e-12,
                                     polarization_angle=ang).sigma_zz
              for ang in (0.0, 0.8, math.pi / 2)]
    spread = (max(values) - min(values)) / abs(values[0])
    return _result("sigma_direction_independence", spread, 1e-10 * scale)


def check_sigma_plate_symmetry(units: UnitSystem = NATURAL,
                               scale: float = 1.0) -> CheckResult:
    """Both plates see the same averaged stress."""
    worst = 0.0
    for geom in _GEOMS:
        mode = modes.ModeIndex(1, 2, 2)
        bottom = stress.sigma_zz_direct(mode, geom, units, tol=1e-12).sigma_zz
        top = stress.sigma_zz_direct(mode, geom, units, tol=1e-12,
                                     plate="top").sigma_zz
        worst = max(worst, abs(top - bottom) / abs(bottom))
    return _result("sigma_plate_symmetry", worst, 1e-10 * scale,
                   "z = a plate vs z = 0 plate")


def check_az_cancellation(units: UnitSystem = NATURAL) -> CheckResult:
    """The A_z^2 terms cancel in the reduced-average stress assembly.

    Polarizations with wildly different A_z at the same |A|^2 must give the
    same assembled sigma_zz, and it must match -eps0 A^2 k_z^2 / (8 k^2).
    """
    worst = 0.0
    geom = _GEOMS[0]
    for mode in (modes.ModeIndex(1, 1, 2), modes.ModeIndex(3, 2, 1)):
        wv = modes.wave_vector(mode, geom)
        vals = []
        for angle in (0.0, math.pi / 2, 0.3):
            amp = modes.mode_amplitudes(mode, geom, units, angle)
            got = stress.sigma_zz_from_boundary_averages(wv, amp, units)
            want = -(units.epsilon_0 * amp.norm_squared * wv.k_z**2
                     / (8.0 * wv.k**2))
            vals.append(got)
            worst = max(worst, abs(got - want) / abs(want))
        worst = max(worst, (max(vals) - min(vals)) / abs(vals[0]))
    return _result("sigma_az_cancellation", worst, 1e-13)


def check_bernoulli_generating_function() -> CheckResult:
    """The Bernoulli table reproduces partial sums of x / (e^x - 1)."""
    table = regsum.bernoulli_numbers(20)
    worst = 0.0
    for x in (0.1, 0.5, 1.0):
        partial = sum(float(table[h]) * x**h / math.factorial(h)
                      for h in range(21))
        exact = x / math.expm1(x)
        worst = max(worst, abs(partial - exact) / abs(exact))
    return _result("bernoulli_generating_function", worst, 1e-12)


def check_route_agreement(units: UnitSystem = NATURAL,
                          scale: float = 1.0) -> CheckResult:
    """Numeric, per-n, and closed-form routes agree pairwise."""
    worst = 0.0
    a = 1.0
    for ratio in (0.1, 1.0):
        reg = regsum.Regulator(ratio * a / math.pi)
        values = [
            regsum.force_sum_numeric(a, reg, units, tol=1e-10),
            regsum.force_per_n_sum(a, reg, units),
            regsum.force_closed_form(a, reg, units),
        ]
        scale_abs = abs(values[2])
        for i in range(3):
            for j in range(i + 1, 3):
                worst = max(worst, abs(values[i] - values[j]) / scale_abs)
    return _result("route_agreement", worst, 1e-8 * scale,
                   "pairwise at lambda pi / a in {0.1, 1}")


def check_asymptotic_split(units: UnitSystem = NATURAL) -> CheckResult:
    """F minus pole minus finite part is bounded by twice the lambda^2 term."""
    worst = 0.0
    for a in (0.8, 1.0):
        for ratio in (0.05, 0.1):
            reg = regsum.Regulator(ratio * a / math.pi)
            dec = regsum.decompose(a, reg, units)
            terms = {t.h: t.value for t in regsum.series_terms(a, reg, 6, units)}
            allowance = 2.0 * abs(terms[6])
            worst = max(worst, abs(dec.remainder) / allowance)
    return _result("asymptotic_split", worst, 1.0,
                   "|remainder| vs 2x the first vanishing term")


def check_divergent_coefficient_stability(units: UnitSystem = NATURAL) -> CheckResult:
    """Fitted pole coefficients do not move when the separation does."""
    fits = []
    for a in (0.5, 1.0, 2.0):
        grid = [regsum.Regulator(r * a / math.pi)
                for r in (0.05, 0.08, 0.12, 0.2, 0.3, 0.5)]
        fits.append(regsum.extract_finite_part(a, grid, units).divergent_coefficient)
    ref = regsum.asymptotic_parts(1.0, units).divergent_coefficient
    spread = (max(fits) - min(fits)) / abs(ref)
    return _result("divergent_coefficient_stability", spread, 1e-6,
                   "fits at a in {0.5, 1, 2}")


def check_finite_part_scaling(units: UnitSystem = NATURAL) -> CheckResult:
    """The fitted finite part falls off as the fourth power of separation."""
    seps = np.array([0.5, 0.75, 1.0, 1.5, 2.0])
    fitted = []
    for a in seps:
        grid = [regsum.Regulator(r * a / math.pi)
                for r in (0.05, 0.08, 0.12, 0.2, 0.3, 0.5)]
        fitted.append(regsum.extract_finite_part(a, grid, units).finite_part)
    slope = np.polyfit(np.log(seps), np.log(np.abs(fitted)), 1)[0]
    return _result("finite_part_scaling", abs(slope + 4.0), 1e-3,
                   f"log-log slope {slope:.6f} from fits")


def run_all(profile: str = "default", *, units: UnitSystem = NATURAL,
            sigma_factor: float = 1.0) -> list[CheckResult]:
    """Run every check; see module docstring for the fault-injection hook."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    s = 0.1 if profile == "strict" else 1.0
    return [
        check_boundary_zeros(units),
        check_transversality(units),
        check_fd_divergence(units, scale=s),
        check_fd_divergence_rate(units),
        check_bulk_mean_square(units, scale=s),
        check_boundary_mean_squares(units, scale=s),
        check_curl_consistency(units),
        check_sigma_negative(units),
        check_sigma_oracle(units, sigma_factor=sigma_factor, scale=s),
        check_sigma_direction_independence(units, scale=s),
        check_sigma_plate_symmetry(units, scale=s),
        check_az_cancellation(units),
        check_bernoulli_generating_function(),
        check_route_agreement(units, scale=s),
        check_asymptotic_split(units),
        check_divergent_coefficient_stability(units),
        check_finite_part_scaling(units),
    ]
