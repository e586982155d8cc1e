"""Degenerate-pump four-wave mixing in layered structures.

The central object is the phase-matching overlap

    J = integral over the structure of  f_p(z)^2 f_s(z)* f_i(z)* dz

where f_p and f_s are the fields launched from the left facet at the pump and
signal frequencies and f_i is the idler mode that exits to the right (whose
conjugate equals the field launched from the right facet). J has units of
length and reduces exactly to the structure length for a uniform waveguide at
perfect phase matching.

Stimulated idler power follows the undepleted-pump result
P_i = (gamma P_p)^2 P_s |J|^2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, SPEED_OF_LIGHT as C0
from .model import (
    GratingSpec,
    InvalidArgument,
    NonlinearParams,
    OutOfDomain,
    SweepResult,
    omega_from_wavelength,
    wavelength_from_omega,
)
from .transfer import _segment_amplitudes

__all__ = [
    "WAVELENGTH_DOMAIN",
    "idler_omega",
    "idler_wavelength",
    "segment_exp_integral",
    "FwmOverlap",
    "overlap_integral",
    "overlap_elements",
    "StimulatedResult",
    "stimulated_idler",
    "pump_sweep",
    "dip_report",
]

# validity window of the constant-effective-index dispersion model
WAVELENGTH_DOMAIN = (1500e-9, 1600e-9)


def idler_omega(omega_p: float, omega_s: float) -> float:
    """Idler frequency from energy conservation, 2*omega_p = omega_s + omega_i."""
    w = 2.0 * omega_p - omega_s
    if w <= 0:
        raise InvalidArgument("signal frequency exceeds twice the pump frequency")
    return w


def idler_wavelength(lambda_p: float, lambda_s: float) -> float:
    return wavelength_from_omega(
        idler_omega(omega_from_wavelength(lambda_p), omega_from_wavelength(lambda_s)))


def _check_domain(omega, label: str) -> None:
    lam = 2.0 * math.pi * C0 / np.asarray(omega, dtype=float)
    lo, hi = WAVELENGTH_DOMAIN
    if np.any(lam < lo * (1 - 1e-12)) or np.any(lam > hi * (1 + 1e-12)):
        raise OutOfDomain(
            f"{label} wavelength outside the {lo * 1e9:.0f}-{hi * 1e9:.0f} nm model domain")


def segment_exp_integral(kappa, length):
    """integral_0^length exp(i kappa u) du, stable for kappa -> 0.

    Written as length * exp(i kappa length / 2) * sinc(kappa length / (2 pi))
    so the phase is explicit and the modulus never suffers cancellation.
    """
    kappa = np.asarray(kappa)
    return length * np.exp(0.5j * kappa * length) * np.sinc(
        kappa * length / (2.0 * math.pi))


# plane-wave expansion of the integrand: (coefficient index, wavenumber sign)
_PUMP_SIGNS = (2.0, 0.0, -2.0)
_SIGNAL_SIGNS = (-1.0, 1.0)
_IDLER_SIGNS = (1.0, -1.0)


def overlap_elements(spec: GratingSpec, omega_p, omega_s, omega_i) -> np.ndarray:
    """J evaluated element-wise for equal-length frequency arrays.

    The three fields are solved once per frequency set; the z-integral is
    closed-form per uniform segment (three pump plane waves times two each
    for signal and idler, twelve terms in total).
    """
    omega_p = np.atleast_1d(np.asarray(omega_p, dtype=float))
    omega_s = np.atleast_1d(np.asarray(omega_s, dtype=float))
    omega_i = np.atleast_1d(np.asarray(omega_i, dtype=float))
    if not omega_p.shape == omega_s.shape == omega_i.shape:
        raise InvalidArgument("frequency arrays must have matching shapes")
    for w, label in ((omega_p, "pump"), (omega_s, "signal"), (omega_i, "idler")):
        _check_domain(w, label)

    _, lengths, n_effs, Ap, Bp = _segment_amplitudes(spec, omega_p, "left")
    _, _, _, As, Bs = _segment_amplitudes(spec, omega_s, "left")
    _, _, _, Ai, Bi = _segment_amplitudes(spec, omega_i, "right")

    kp = np.outer(n_effs, omega_p) / C0
    ks = np.outer(n_effs, omega_s) / C0
    ki = np.outer(n_effs, omega_i) / C0
    ell = lengths[:, None]

    pump_coeffs = (Ap * Ap, 2.0 * Ap * Bp, Bp * Bp)
    signal_coeffs = (np.conj(As), np.conj(Bs))
    idler_coeffs = (Ai, Bi)

    total = np.zeros(omega_p.shape, dtype=complex)
    for cp, sp in zip(pump_coeffs, _PUMP_SIGNS):
        for cs, ss in zip(signal_coeffs, _SIGNAL_SIGNS):
            for ci, si in zip(idler_coeffs, _IDLER_SIGNS):
                kappa = sp * kp + ss * ks + si * ki
                total += np.sum(cp * cs * ci * segment_exp_integral(kappa, ell), axis=0)
    return total


@dataclass(frozen=True)
class FwmOverlap:
    """One overlap-integral evaluation."""

    omega_p: float
    omega_s: float
    omega_i: float
    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def overlap_integral(spec: GratingSpec, omega_p: float, omega_s: float,
                     omega_i: float | None = None) -> FwmOverlap:
    """Single-point overlap; the idler defaults to 2*omega_p - omega_s."""
    if omega_i is None:
        omega_i = idler_omega(omega_p, omega_s)
    value = overlap_elements(spec, [omega_p], [omega_s], [omega_i])[0]
    return FwmOverlap(omega_p=float(omega_p), omega_s=float(omega_s),
                      omega_i=float(omega_i), value=complex(value))


# --------------------------------------------------------------------------
# stimulated four-wave mixing


@dataclass(frozen=True)
class StimulatedResult:
    """Stimulated idler generation at one pump/signal setting.

    idler_power and idler_rate are internal (inside the waveguide).
    rate_per_mw2 normalizes the rate by the squared internal pump power in
    milliwatts; rate_per_mw2_external re-expresses it per squared pump power
    quoted before the input facet (None when no coupling loss is configured).
    """

    overlap: FwmOverlap
    idler_power: float
    idler_rate: float
    rate_per_mw2: float
    rate_per_mw2_external: float | None


def stimulated_idler(spec: GratingSpec, params: NonlinearParams, omega_p: float,
                     omega_s: float, omega_i: float | None = None) -> StimulatedResult:
    ov = overlap_integral(spec, omega_p, omega_s, omega_i)
    if params.gamma * params.coupled_pump_power * spec.total_length >= 0.1:
        warnings.warn("nonlinear phase is not small; the undepleted-pump "
                      "result may be inaccurate", stacklevel=2)
    power = (params.gamma * params.coupled_pump_power) ** 2 \
        * params.coupled_signal_power * ov.magnitude ** 2
    rate = power / (HBAR * ov.omega_i)
    pump_mw = params.coupled_pump_power / 1e-3
    per_mw2 = rate / pump_mw ** 2 if pump_mw > 0 else 0.0
    external = None
    if params.coupling_loss_db is not None:
        external = per_mw2 * params.facet_transmission ** 2
    return StimulatedResult(
        overlap=ov,
        idler_power=power,
        idler_rate=rate,
        rate_per_mw2=per_mw2,
        rate_per_mw2_external=external,
    )


def pump_sweep(spec: GratingSpec, params: NonlinearParams, pump_wavelengths,
               signal_wavelength: float) -> SweepResult:
    """Stimulated idler response against pump wavelength at a fixed signal.

    The idler frequency tracks energy conservation point by point. Columns:
    pump_wavelength_nm, idler_rate_per_s_per_mw2 (internal), idler_power_w.
    """
    lam_p = np.asarray(pump_wavelengths, dtype=float)
    if lam_p.ndim != 1 or lam_p.size < 1:
        raise InvalidArgument("pump_wavelengths must be a 1-D array")
    w_p = 2.0 * math.pi * C0 / lam_p
    w_s = np.full_like(w_p, omega_from_wavelength(signal_wavelength))
    w_i = 2.0 * w_p - w_s
    j = overlap_elements(spec, w_p, w_s, w_i)
    power = (params.gamma * params.coupled_pump_power) ** 2 \
        * params.coupled_signal_power * np.abs(j) ** 2
    rate = power / (HBAR * w_i)
    pump_mw = params.coupled_pump_power / 1e-3
    per_mw2 = rate / pump_mw ** 2 if pump_mw > 0 else np.zeros_like(rate)
    order = np.argsort(lam_p)
    return SweepResult(
        x_name="pump_wavelength_nm",
        x=lam_p[order] * 1e9,
        columns={
            "idler_rate_per_s_per_mw2": per_mw2[order],
            "idler_power_w": power[order],
        },
    )


@dataclass(frozen=True)
class DipReport:
    """Location and contrast of the deepest minimum of a swept column."""

    center_x: float
    min_value: float
    baseline_median: float
    suppression_db: float


def dip_report(sweep: SweepResult, column: str = "idler_rate_per_s_per_mw2",
               exclude_halfwidth: float = 1.0) -> DipReport:
    """Characterize the deepest dip of sweep[column].

    The baseline is the median of points farther than exclude_halfwidth
    (in the sweep's x units) from the minimum.
    """
    y = sweep.column(column)
    x = sweep.x
    imin = int(np.argmin(y))
    off = np.abs(x - x[imin]) > exclude_halfwidth
    if not np.any(off):
        raise InvalidArgument("no baseline points outside the excluded band")
    baseline = float(np.median(y[off]))
    if y[imin] <= 0 or baseline <= 0:
        raise InvalidArgument("dip contrast undefined for non-positive values")
    return DipReport(
        center_x=float(x[imin]),
        min_value=float(y[imin]),
        baseline_median=baseline,
        suppression_db=10.0 * math.log10(baseline / y[imin]),
    )
