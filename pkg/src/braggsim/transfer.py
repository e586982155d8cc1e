"""Transfer-matrix model of layered effective-index structures.

Conventions
-----------
State vectors hold (forward, backward) amplitudes and matrices map the state
on the RIGHT of a section to the state on its LEFT: v_left = M @ v_right.
The ambient medium on both sides of a structure is the unperturbed waveguide
(index n_hi), so a grating with zero-length leads reduces exactly to the
N-th power of its unit-cell matrix. z = 0 sits at the left facet.

For lossless index steps the scattering amplitudes follow from the matrix
entries as t = 1/m00 and r = m10/m00, with |t|^2 + |r|^2 = 1 and det M = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import SPEED_OF_LIGHT as C0
from .model import (
    FrequencyGrid,
    GratingSpec,
    InvalidArgument,
    OutOfDomain,
    SweepResult,
)

__all__ = [
    "TransferMatrix",
    "FieldDirection",
    "FieldSegment",
    "PiecewiseField",
    "StopbandReport",
    "layer_stack",
    "unit_cell_matrix",
    "structure_matrix",
    "cascade",
    "matrix_power",
    "transmission_spectrum",
    "stopband_report",
    "rejection_estimate_db",
    "design_periods",
    "internal_fields",
]


def wavenumber(n_eff: float, omega) -> np.ndarray:
    """Propagation constant n_eff * omega / c."""
    return n_eff * np.asarray(omega) / C0


# --------------------------------------------------------------------------
# stacked 2x2 primitives (leading axes broadcast over frequency)


def _prop_stack(k, length: float) -> np.ndarray:
    k = np.asarray(k, dtype=complex)
    out = np.zeros(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(-1j * k * length)
    out[..., 1, 1] = np.exp(1j * k * length)
    return out

def _iface_stack(k1, k2) -> np.ndarray:
    k1 = np.asarray(k1, dtype=complex)
    k2 = np.asarray(k2, dtype=complex)
    out = np.empty(np.broadcast(k1, k2).shape + (2, 2), dtype=complex)
    s = (k1 + k2) / (2.0 * k1)
    d = (k1 - k2) / (2.0 * k1)
    out[..., 0, 0] = s
    out[..., 0, 1] = d
    out[..., 1, 0] = d
    out[..., 1, 1] = s
    return out

def _matmul_power(m: np.ndarray, count: int) -> np.ndarray:
    """m^count by binary exponentiation on stacked 2x2 arrays."""
    result = np.zeros_like(m)
    result[..., 0, 0] = 1.0
    result[..., 1, 1] = 1.0
    base = m
    n = count
    while n:
        if n & 1:
            result = result @ base
        n >>= 1
        if n:
            base = base @ base
    return result


# --------------------------------------------------------------------------
# public matrix type


@dataclass(frozen=True)
class TransferMatrix:
    """A single 2x2 transfer matrix with scattering-amplitude accessors."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidArgument("transfer matrix must be 2x2")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(np.eye(2, dtype=complex))

    @classmethod
    def propagation(cls, k: complex, length: float) -> "TransferMatrix":
        """Uniform section of propagation constant k and given length."""
        if length < 0:
            raise InvalidArgument("section length must be >= 0")
        return cls(_prop_stack(k, length))

    @classmethod
    def interface(cls, k1: complex, k2: complex) -> "TransferMatrix":
        """Step from a medium with k1 (left) to one with k2 (right)."""
        if k1 == 0:
            raise InvalidArgument("left propagation constant must be nonzero")
        return cls(_iface_stack(k1, k2))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(self.m @ other.m)

    @property
    def determinant(self) -> complex:
        return complex(self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0])

    @property
    def transmission_amplitude(self) -> complex:
        return complex(1.0 / self.m[0, 0])

    @property
    def reflection_amplitude(self) -> complex:
        return complex(self.m[1, 0] / self.m[0, 0])

    @property
    def transmission(self) -> float:
        return abs(self.transmission_amplitude) ** 2

    @property
    def reflection(self) -> float:
        return abs(self.reflection_amplitude) ** 2


def cascade(matrices) -> TransferMatrix:
    """Product of transfer matrices ordered left to right along the structure."""
    mats = list(matrices)
    if not mats:
        raise InvalidArgument("cascade of zero sections is undefined")
    m = mats[0].m
    for tm in mats[1:]:
        m = m @ tm.m
    return TransferMatrix(m)


def matrix_power(matrix: TransferMatrix, count: int, naive: bool = False) -> TransferMatrix:
    """matrix^count; binary exponentiation unless naive=True (reference path)."""
    if count < 0 or int(count) != count:
        raise InvalidArgument("count must be a non-negative integer")
    if naive:
        m = np.eye(2, dtype=complex)
        for _ in range(int(count)):
            m = m @ matrix.m
        return TransferMatrix(m)
    return TransferMatrix(_matmul_power(matrix.m, int(count)))


# --------------------------------------------------------------------------
# structures


def layer_stack(spec: GratingSpec):
    """(n_eff, length) tuples left to right, zero-length leads omitted.

    Each period contributes its low-index segment (duty_cycle * period) then
    its unperturbed segment; the leads share the unperturbed index.
    """
    layers = []
    if spec.lead_in_length > 0:
        layers.append((spec.n_hi, spec.lead_in_length))
    d_lo = spec.duty_cycle * spec.period
    d_hi = spec.period - d_lo
    for _ in range(spec.n_periods):
        layers.append((spec.n_lo, d_lo))
        layers.append((spec.n_hi, d_hi))
    if spec.lead_out_length > 0:
        layers.append((spec.n_hi, spec.lead_out_length))
    return tuple(layers)


def unit_cell_matrix(spec: GratingSpec, omega: float) -> TransferMatrix:
    """One period as entered from the unperturbed medium."""
    return TransferMatrix(_unit_cell_stack(spec, np.asarray(float(omega))))


def _unit_cell_stack(spec: GratingSpec, omegas: np.ndarray) -> np.ndarray:
    k_lo = wavenumber(spec.n_lo, omegas)
    k_hi = wavenumber(spec.n_hi, omegas)
    d_lo = spec.duty_cycle * spec.period
    d_hi = spec.period - d_lo
    m = _iface_stack(k_hi, k_lo) @ _prop_stack(k_lo, d_lo)
    m = m @ _iface_stack(k_lo, k_hi) @ _prop_stack(k_hi, d_hi)
    return m


def _structure_stack(spec: GratingSpec, omegas: np.ndarray) -> np.ndarray:
    """Stacked structure matrices for an array of angular frequencies."""
    omegas = np.asarray(omegas, dtype=float)
    k_hi = wavenumber(spec.n_hi, omegas)
    m = _matmul_power(_unit_cell_stack(spec, omegas), spec.n_periods)
    if spec.lead_in_length > 0:
        m = _prop_stack(k_hi, spec.lead_in_length) @ m
    if spec.lead_out_length > 0:
        m = m @ _prop_stack(k_hi, spec.lead_out_length)
    return m


def structure_matrix(spec: GratingSpec, omega: float) -> TransferMatrix:
    """Full structure (leads + grating) between unperturbed ambient media."""
    return TransferMatrix(_structure_stack(spec, np.asarray(float(omega))))


def transmission_spectrum(spec: GratingSpec, grid: FrequencyGrid) -> SweepResult:
    """Power transmission over the grid, tabulated by ascending wavelength."""
    m = _structure_stack(spec, grid.points)
    trans = 1.0 / np.abs(m[..., 0, 0]) ** 2
    lam_nm = grid.wavelengths * 1e9
    order = np.argsort(lam_nm)
    trans = trans[order]
    return SweepResult(
        x_name="wavelength_nm",
        x=lam_nm[order],
        columns={
            "transmission": trans,
            "transmission_db": 10.0 * np.log10(trans),
        },
    )


# --------------------------------------------------------------------------
# stopband characterization


@dataclass(frozen=True)
class StopbandReport:
    """Location and depth of the transmission minimum, plus the band over
    which transmission stays below the threshold (None when the band is not
    bracketed inside the grid)."""

    center_wavelength: float
    min_transmission: float
    rejection_db: float
    threshold_db: float
    band_start: float | None
    band_stop: float | None

    @property
    def band_width(self) -> float | None:
        if self.band_start is None or self.band_stop is None:
            return None
        return self.band_stop - self.band_start


def _crossing(lam: np.ndarray, db: np.ndarray, i0: int, i1: int, level: float) -> float:
    """Linear interpolation of the wavelength where db crosses level."""
    f = (level - db[i0]) / (db[i1] - db[i0])
    return lam[i0] + f * (lam[i1] - lam[i0])


def stopband_report(spec: GratingSpec, grid: FrequencyGrid,
                    threshold_db: float = 10.0) -> StopbandReport:
    """Characterize the stopband on the given grid.

    The center is the sampled transmission minimum; the band edges are
    interpolated crossings of -threshold_db on either side of it.
    """
    if threshold_db <= 0:
        raise InvalidArgument("threshold_db must be > 0")
    sweep = transmission_spectrum(spec, grid)
    lam = sweep.x * 1e-9
    trans = sweep.column("transmission")
    db = sweep.column("transmission_db")
    imin = int(np.argmin(trans))
    level = -threshold_db

    left = None
    for i in range(imin, 0, -1):
        if db[i - 1] > level >= db[i]:
            left = _crossing(lam, db, i - 1, i, level)
            break
    right = None
    for i in range(imin, lam.size - 1):
        if db[i + 1] > level >= db[i]:
            right = _crossing(lam, db, i + 1, i, level)
            break

    return StopbandReport(
        center_wavelength=float(lam[imin]),
        min_transmission=float(trans[imin]),
        rejection_db=float(-db[imin]),
        threshold_db=threshold_db,
        band_start=left,
        band_stop=right,
    )


# --------------------------------------------------------------------------
# period-count design rule


def rejection_estimate_db(n_periods: int, n_lo: float, delta_n: float) -> float:
    """Closed-form deep-grating rejection 10*log10(exp(2 N ln(1+dn/n)) / 4)."""
    if n_periods < 1:
        raise InvalidArgument("n_periods must be >= 1")
    if n_lo <= 0 or delta_n <= 0:
        raise InvalidArgument("n_lo and delta_n must be > 0")
    return 10.0 * (2.0 * n_periods * math.log1p(delta_n / n_lo) - math.log(4.0)) / math.log(10.0)


def design_periods(target_rejection_db: float, n_lo: float, delta_n: float) -> int:
    """Smallest period count whose estimated rejection meets the target.

    The estimate caps below 10*log10(4) dB as N -> 0, so targets at or below
    that floor are rejected as out of domain.
    """
    if n_lo <= 0 or delta_n <= 0:
        raise InvalidArgument("n_lo and delta_n must be > 0")
    floor_db = 10.0 * math.log10(4.0)
    if target_rejection_db <= floor_db:
        raise OutOfDomain(
            f"target rejection must exceed {floor_db:.2f} dB for this design rule")
    exact = (math.log(4.0) + target_rejection_db * math.log(10.0) / 10.0) / (
        2.0 * math.log1p(delta_n / n_lo))
    n = math.ceil(exact)
    # guard against ceil landing one high on exact integer solutions
    if n > 1 and rejection_estimate_db(n - 1, n_lo, delta_n) >= target_rejection_db:
        n -= 1
    return n


# --------------------------------------------------------------------------
# internal fields


class FieldDirection(Enum):
    """Boundary condition for the internal field solve."""

    IN_FROM_LEFT = "in_from_left"    # unit amplitude incident on the left facet
    OUT_TO_RIGHT = "out_to_right"    # unit amplitude exiting the right facet


@dataclass(frozen=True)
class FieldSegment:
    """One uniform section; amplitudes are referenced to z_start, so the
    field inside is a_fwd*exp(ik(z-z_start)) + a_bwd*exp(-ik(z-z_start))."""

    z_start: float
    z_end: float
    n_eff: float
    a_fwd: complex
    a_bwd: complex


@dataclass(frozen=True)
class PiecewiseField:
    """Piecewise-uniform field solution across a structure at one frequency."""

    omega: float
    direction: FieldDirection
    segments: tuple

    def at(self, z: float) -> complex:
        """Field value at absolute position z inside the structure."""
        for seg in self.segments:
            if seg.z_start <= z <= seg.z_end:
                k = wavenumber(seg.n_eff, self.omega)
                return (seg.a_fwd * np.exp(1j * k * (z - seg.z_start))
                        + seg.a_bwd * np.exp(-1j * k * (z - seg.z_start)))
        raise InvalidArgument("z lies outside the structure")


def _segment_amplitudes(spec: GratingSpec, omegas: np.ndarray, side: str):
    """Per-segment (forward, backward) amplitudes at each segment's left edge.

    side='left'  : unit amplitude incident from the left ambient.
    side='right' : unit amplitude incident from the right ambient.

    Returns (z_starts, lengths, n_effs, A, B) where A and B have shape
    (n_segments, n_frequencies).
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    layers = layer_stack(spec)
    n_effs = np.array([n for n, _ in layers])
    lengths = np.array([l for _, l in layers])
    z_starts = np.concatenate(([0.0], np.cumsum(lengths)[:-1]))

    m = _structure_stack(spec, omegas)
    k_amb = wavenumber(spec.n_hi, omegas)
    if side == "left":
        v = np.stack([np.ones_like(omegas, dtype=complex),
                      m[..., 1, 0] / m[..., 0, 0]])
    elif side == "right":
        v = np.stack([np.zeros_like(omegas, dtype=complex),
                      1.0 / m[..., 0, 0]])
    else:
        raise InvalidArgument("side must be 'left' or 'right'")

    A = np.empty((len(layers), omegas.size), dtype=complex)
    B = np.empty_like(A)
    n_prev = spec.n_hi
    k_prev = k_amb
    # cache interface matrices between the only index values that occur
    iface_cache = {}
    for j, (n_eff, length) in enumerate(layers):
        k = wavenumber(n_eff, omegas)
        key_in = (n_prev, n_eff)
        if key_in not in iface_cache:
            iface_cache[key_in] = _iface_stack(k, k_prev)
        step = iface_cache[key_in]
        v = np.stack([step[..., 0, 0] * v[0] + step[..., 0, 1] * v[1],
                      step[..., 1, 0] * v[0] + step[..., 1, 1] * v[1]])
        A[j] = v[0]
        B[j] = v[1]
        phase = np.exp(1j * k * length)
        v = np.stack([v[0] * phase, v[1] / phase])
        n_prev, k_prev = n_eff, k
    return z_starts, lengths, n_effs, A, B


def internal_fields(spec: GratingSpec, omega: float,
                    direction: FieldDirection) -> PiecewiseField:
    """Solve the internal field for one frequency and boundary condition.

    The OUT_TO_RIGHT mode is the phase conjugate of the field launched from
    the right ambient, so its amplitudes are the conjugate-swapped pair of
    that solution.
    """
    side = "left" if direction is FieldDirection.IN_FROM_LEFT else "right"
    z0, lengths, n_effs, A, B = _segment_amplitudes(spec, np.asarray([float(omega)]), side)
    segs = []
    for j in range(z0.size):
        a, b = complex(A[j, 0]), complex(B[j, 0])
        if direction is FieldDirection.OUT_TO_RIGHT:
            a, b = np.conj(b), np.conj(a)
        segs.append(FieldSegment(
            z_start=float(z0[j]),
            z_end=float(z0[j] + lengths[j]),
            n_eff=float(n_effs[j]),
            a_fwd=a,
            a_bwd=b,
        ))
    return PiecewiseField(omega=float(omega), direction=direction, segments=tuple(segs))
