"""Standing-wave electromagnetic modes of a conducting box cavity.

The cavity is a box of transverse side L with plates at z = 0 and z = a.
Mode (n_x, n_y, n_z), all indices >= 1, has wave vector
k = (pi n_x / L, pi n_y / L, pi n_z / a) and electric field pattern

    E_x = A_x cos(k_x x) sin(k_y y) sin(k_z z)
    E_y = A_y sin(k_x x) cos(k_y y) sin(k_z z)
    E_z = A_z sin(k_x x) sin(k_y y) cos(k_z z)

The tangential electric components vanish on both plates by construction,
and the interior is charge free exactly when the amplitude vector is
orthogonal to k.  The magnetic evaluator returns the amplitude profile
curl(E)/omega; the field actually oscillates a quarter period out of phase
with E, but only squares of B enter the stress and energy averages, so the
phase factor is documented here rather than carried in code.

Trigonometric factors are computed through reduced phases t = n * (x / L)
with sin(pi t) evaluated after subtracting the nearest integer.  Where the
physics says a field component vanishes on a plate, the evaluator then
returns exactly 0.0 rather than sin(n pi) of order machine epsilon, which
keeps boundary statements in downstream checks exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import central_difference
from .units import UnitSystem

__all__ = [
    "ModeIndex",
    "CavityGeometry",
    "WaveVector",
    "ModeAmplitudes",
    "TransversalityError",
    "wave_vector",
    "mode_amplitudes",
    "electric_mode_at",
    "magnetic_mode_at",
    "transversality_residual",
    "divergence_residual",
    "amplitude_norm_squared",
    "mean_square_E",
    "mean_square_B_boundary",
    "default_fd_step",
]


class TransversalityError(ValueError):
    """Amplitude vector not orthogonal to the wave vector."""


def _sinpi(t):
    """sin(pi * t) with exact zeros at integer t."""
    t = np.asarray(t, dtype=float)
    nearest = np.round(t)
    sign = np.where(nearest.astype(np.int64) % 2 == 0, 1.0, -1.0)
    return sign * np.sin(np.pi * (t - nearest))


def _cospi(t):
    """cos(pi * t) with exact zeros at half-integer t."""
    return _sinpi(0.5 - np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ModeIndex:
    """Positive integer mode numbers along x, y, z."""

    n_x: int
    n_y: int
    n_z: int

    def __post_init__(self):
        for label, n in (("n_x", self.n_x), ("n_y", self.n_y), ("n_z", self.n_z)):
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
                raise ValueError(f"{label} must be an integer, got {n!r}")
            if n < 1:
                raise ValueError(f"{label} must be >= 1, got {n}")


@dataclass(frozen=True)
class CavityGeometry:
    """Plate separation a (plates at z = 0 and z = a) and transverse side L."""

    a: float
    L: float

    def __post_init__(self):
        for label, v in (("a", self.a), ("L", self.L)):
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{label} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class WaveVector:
    """Cartesian wave vector, optionally carrying its mode and geometry.

    When ``mode`` and ``geom`` are present, phase arguments are formed from
    the exact rationals n * (coordinate / length), which is what makes the
    boundary zeros of the field evaluators exact.  A bare WaveVector still
    works everywhere, just without that guarantee.
    """

    k_x: float
    k_y: float
    k_z: float
    mode: ModeIndex | None = None
    geom: CavityGeometry | None = None

    @property
    def kappa(self) -> float:
        """Transverse wave number sqrt(k_x^2 + k_y^2)."""
        return math.hypot(self.k_x, self.k_y)

    @property
    def k(self) -> float:
        """Total wave number |k| = sqrt(kappa^2 + k_z^2)."""
        return math.sqrt(self.k_x**2 + self.k_y**2 + self.k_z**2)

    def phases(self, x, y, z):
        """Return (t_x, t_y, t_z) such that k_i * coord = pi * t_i."""
        if self.mode is not None and self.geom is not None:
            return (
                self.mode.n_x * (np.asarray(x, dtype=float) / self.geom.L),
                self.mode.n_y * (np.asarray(y, dtype=float) / self.geom.L),
                self.mode.n_z * (np.asarray(z, dtype=float) / self.geom.a),
            )
        return (
            self.k_x * np.asarray(x, dtype=float) / np.pi,
            self.k_y * np.asarray(y, dtype=float) / np.pi,
            self.k_z * np.asarray(z, dtype=float) / np.pi,
        )


@dataclass(frozen=True)
class ModeAmplitudes:
    """Electric amplitude vector (A_x, A_y, A_z)."""

    a_x: float
    a_y: float
    a_z: float

    @property
    def norm_squared(self) -> float:
        return self.a_x**2 + self.a_y**2 + self.a_z**2

    def as_array(self) -> np.ndarray:
        return np.array([self.a_x, self.a_y, self.a_z])


def wave_vector(mode: ModeIndex, geom: CavityGeometry) -> WaveVector:
    """Wave vector (pi n_x / L, pi n_y / L, pi n_z / a) of a cavity mode."""
    return WaveVector(
        k_x=math.pi * mode.n_x / geom.L,
        k_y=math.pi * mode.n_y / geom.L,
        k_z=math.pi * mode.n_z / geom.a,
        mode=mode,
        geom=geom,
    )


def amplitude_norm_squared(mode: ModeIndex, geom: CavityGeometry,
                           units: UnitSystem) -> float:
    """Squared amplitude A^2 = 2 hbar omega / (eps0 L^2 a).

    This is the per-mode field scale of the vacuum state; every average and
    stress formula downstream is linear in it and uses the same
    profile-square convention (see the module docstring of stress.py).
    """
    k = wave_vector(mode, geom).k
    return 2.0 * units.hbar_c * k / (units.epsilon_0 * geom.L**2 * geom.a)


def mode_amplitudes(mode: ModeIndex, geom: CavityGeometry, units: UnitSystem,
                    polarization_angle: float = 0.0) -> ModeAmplitudes:
    """Construct a transverse amplitude vector of the correct magnitude.

    The two-dimensional polarization space orthogonal to k is spanned by

        e1 = (k_y, -k_x, 0) / kappa          (no z component)
        e2 = (k_x k_z, k_y k_z, -kappa^2) / (kappa k)

    and ``polarization_angle`` selects cos(angle) e1 + sin(angle) e2.  The
    returned vector satisfies A . k = 0 identically and |A|^2 equals
    amplitude_norm_squared.
    """
    wv = wave_vector(mode, geom)
    kap, k = wv.kappa, wv.k
    e1 = np.array([wv.k_y, -wv.k_x, 0.0]) / kap
    e2 = np.array([wv.k_x * wv.k_z, wv.k_y * wv.k_z, -kap * kap]) / (kap * k)
    direction = math.cos(polarization_angle) * e1 + math.sin(polarization_angle) * e2
    amp = math.sqrt(amplitude_norm_squared(mode, geom, units)) * direction
    return ModeAmplitudes(a_x=float(amp[0]), a_y=float(amp[1]), a_z=float(amp[2]))


def electric_mode_at(point, wv: WaveVector, amp: ModeAmplitudes) -> np.ndarray:
    """Electric field of the mode at one point or a batch of points.

    ``point`` is an array-like of shape (..., 3) with coordinates inside the
    closed box [0, L]^2 x [0, a]; the result has the same shape.  Tangential
    components are exactly 0.0 on the plates z = 0 and z = a.
    """
    p = np.asarray(point, dtype=float)
    tx, ty, tz = wv.phases(p[..., 0], p[..., 1], p[..., 2])
    e_x = amp.a_x * _cospi(tx) * _sinpi(ty) * _sinpi(tz)
    e_y = amp.a_y * _sinpi(tx) * _cospi(ty) * _sinpi(tz)
    e_z = amp.a_z * _sinpi(tx) * _sinpi(ty) * _cospi(tz)
    return np.stack([e_x, e_y, e_z], axis=-1)


def magnetic_mode_at(point, wv: WaveVector, amp: ModeAmplitudes,
                     omega: float) -> np.ndarray:
    """Magnetic amplitude profile curl(E)/omega at one point or a batch.

    The normal component B_z is exactly 0.0 on both plates.  See the module
    docstring for the dropped quarter-period phase.
    """
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    p = np.asarray(point, dtype=float)
    tx, ty, tz = wv.phases(p[..., 0], p[..., 1], p[..., 2])
    b_x = (amp.a_z * wv.k_y - amp.a_y * wv.k_z) * _sinpi(tx) * _cospi(ty) * _cospi(tz)
    b_y = -(amp.a_z * wv.k_x - amp.a_x * wv.k_z) * _cospi(tx) * _sinpi(ty) * _cospi(tz)
    b_z = (amp.a_y * wv.k_x - amp.a_x * wv.k_y) * _cospi(tx) * _cospi(ty) * _sinpi(tz)
    return np.stack([b_x, b_y, b_z], axis=-1) / omega


def transversality_residual(amp: ModeAmplitudes, wv: WaveVector) -> float:
    """|A . k| / (|A| |k|), zero for a physical (charge-free) mode."""
    dot = amp.a_x * wv.k_x + amp.a_y * wv.k_y + amp.a_z * wv.k_z
    norm = math.sqrt(amp.norm_squared) * wv.k
    if norm == 0.0:
        raise ValueError("amplitude and wave vector must be nonzero")
    return abs(dot) / norm


def default_fd_step(wv: WaveVector) -> float:
    """Stencil step of 1e-4 of the mode's shortest spatial period."""
    return 1e-4 * (2.0 * math.pi / wv.k)


def divergence_residual(point, wv: WaveVector, amp: ModeAmplitudes,
                        step: float | None = None) -> float:
    """Central-finite-difference estimate of div E at a point.

    Vanishes to O(step^2) for transverse amplitudes.  ``step`` defaults to
    default_fd_step(wv).
    """
    if step is None:
        step = default_fd_step(wv)
    if step <= 0.0:
        raise ValueError("step must be positive")

    def component(i: int):
        return lambda p: float(electric_mode_at(p, wv, amp)[i])

    return sum(central_difference(component(i), point, i, step) for i in range(3))


def mean_square_E(wv: WaveVector, amp: ModeAmplitudes, region: str) -> float:
    """Spatial mean of |E|^2, over the box bulk or over a plate.

    Each separable trig factor averages to 1/2 over a whole number of half
    periods, so the bulk mean is A^2/8.  On a plate only E_z survives and
    its cos(k_z z) factor is 1 there, leaving A_z^2/4.
    """
    if region == "bulk":
        return amp.norm_squared / 8.0
    if region == "boundary":
        return amp.a_z**2 / 4.0
    raise ValueError(f"region must be 'bulk' or 'boundary', got {region!r}")


def mean_square_B_boundary(wv: WaveVector, amp: ModeAmplitudes,
                           units: UnitSystem, *,
                           transversality_tol: float = 1e-9) -> float:
    """Plate-averaged |B|^2, reduced to amplitudes via transversality.

    On a plate the two tangential components contribute

        <B^2> = (A_z^2 + A^2 k_z^2 / k^2) / (4 c^2),

    a closed form that uses A . k = 0 to eliminate the cross terms.  Since
    that assumption is load-bearing, amplitudes violating it beyond
    ``transversality_tol`` are rejected with TransversalityError.
    """
    residual = transversality_residual(amp, wv)
    if residual > transversality_tol:
        raise TransversalityError(
            f"relative transversality residual {residual:.3e} exceeds "
            f"{transversality_tol:.1e}")
    k = wv.k
    return (amp.a_z**2 + amp.norm_squared * wv.k_z**2 / k**2) / (4.0 * units.c**2)
