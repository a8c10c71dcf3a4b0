"""Circuit-parameter mapping for a flux-modulated transmon.

Connects the circuit quantities (charging energy E_C, total Josephson
energy E_J_sum, SQUID asymmetry d, dc flux bias, square-pulse flux
amplitude, readout resonator, photon number) to the effective two-level
model used elsewhere:

* qubit frequency  w0 = wp - E_C  with plasma frequency
  wp = sqrt(8 E_C E_J_sum cos(pi Phi_dc / Phi_0));
* latching amplitude delta from the flux-pulse modulation of the
  Josephson term, via the zero-point phase spread
  phi_zpf = [2 E_C / (E_J_sum cos(pi Phi_dc/Phi_0))]^(1/4);
* transverse drive g = 2 g0 sqrt(n_r) for a coherently populated
  resonator.

The perturbative ladder is cross-checked by numerically exact
diagonalization of 4 E_C (n - n_g)^2 - E_J(Phi) cos(phi) in the charge
basis, which is also what the flux-spectrum fit uses.  Energies are
stored as angular frequencies (rad/s = E / hbar); fluxes are in units
of the flux quantum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class TransmonParams:
    """Circuit parameters; energies as angular frequencies (rad/s).

    ``flux_dc`` and ``flux_sq`` are in units of the flux quantum; the
    working point must keep cos(pi * flux_dc) > 0 (real plasma
    frequency) and phi_zpf < 1 (transmon regime).
    """

    e_c: float
    e_j_sum: float
    asym: float = 0.0
    flux_dc: float = 0.0
    flux_sq: float = 0.0
    omega_r: float = 0.0
    g0: float = 0.0
    n_r: float = 0.0
    n_g: float = 0.0
    n_levels: int = 5

    def __post_init__(self):
        if self.e_c <= 0.0 or self.e_j_sum <= 0.0:
            raise ValueError("E_C and E_J_sum must be positive")
        if not 0.0 <= self.asym < 1.0:
            raise ValueError("asymmetry d must lie in [0, 1)")
        if self.n_r < 0.0:
            raise ValueError("photon number must be non-negative")
        if np.cos(np.pi * self.flux_dc) <= 0.0:
            raise ValueError("working point requires cos(pi * flux_dc) > 0")
        if phi_zpf(self) >= 1.0:
            raise ValueError("phi_zpf >= 1: outside the transmon regime")


def phi_zpf(tp: TransmonParams) -> float:
    """Zero-point phase spread [2 E_C / (E_J_sum cos(pi flux_dc))]^(1/4)."""
    return float(
        (2.0 * tp.e_c / (tp.e_j_sum * np.cos(np.pi * tp.flux_dc))) ** 0.25
    )


def plasma_frequency(tp: TransmonParams) -> float:
    """wp = sqrt(8 E_C E_J_sum cos(pi flux_dc)) in rad/s."""
    c = np.cos(np.pi * tp.flux_dc)
    if c <= 0.0:
        raise ValueError("flux bias beyond the half-quantum point")
    return float(np.sqrt(8.0 * tp.e_c * tp.e_j_sum * c))


def qubit_frequency(tp: TransmonParams) -> float:
    """Ground-to-first transition w0 = wp - E_C (rad/s)."""
    return plasma_frequency(tp) - tp.e_c


def flux_for_qubit_frequency(tp: TransmonParams, omega0: float) -> float:
    """Invert w0(flux_dc) = omega0 on the positive-flux branch.

    cos(pi flux_dc) = (omega0 + E_C)^2 / (8 E_C E_J_sum).
    """
    c = (omega0 + tp.e_c) ** 2 / (8.0 * tp.e_c * tp.e_j_sum)
    if not 0.0 < c <= 1.0:
        raise ValueError("requested frequency unreachable at this E_C, E_J_sum")
    return float(np.arccos(c) / np.pi)


def latching_amplitude(tp: TransmonParams, half_prefactor: bool = True) -> float:
    """Magnitude of the square-pulse latching amplitude delta (rad/s).

    delta = |E_J_sum/2 * sin(pi flux_dc) * (phi_zpf^4 - 2 phi_zpf^2)
             * sin(pi flux_sq)|.

    ``half_prefactor=False`` drops the 1/2 (the two prefactor
    conventions differ by exactly that factor; the default keeps the
    derivation-endpoint form).  The sign of the underlying expression is
    available from :func:`latching_amplitude_sign`; within the transmon
    regime phi_zpf < 1 makes (phi_zpf^4 - 2 phi_zpf^2) negative, so the
    signed value is negative at positive fluxes.
    """
    pref = 0.5 if half_prefactor else 1.0
    z = phi_zpf(tp)
    val = (
        pref
        * tp.e_j_sum
        * np.sin(np.pi * tp.flux_dc)
        * (z**4 - 2.0 * z**2)
        * np.sin(np.pi * tp.flux_sq)
    )
    return float(abs(val))


def latching_amplitude_sign(tp: TransmonParams) -> int:
    """Sign of the raw latching-amplitude expression (0 when it vanishes)."""
    z = phi_zpf(tp)
    val = np.sin(np.pi * tp.flux_dc) * (z**4 - 2.0 * z**2) * np.sin(np.pi * tp.flux_sq)
    return int(np.sign(val))


def drive_coupling(tp: TransmonParams) -> float:
    """Effective transverse drive g = 2 g0 sqrt(n_r) (rad/s)."""
    return float(2.0 * tp.g0 * np.sqrt(tp.n_r))


def transmon_level_freqs(tp: TransmonParams, n_levels: int | None = None) -> np.ndarray:
    """Perturbative ladder w_i = i [w0 + (1 - i) E_C / 2], ground at zero."""
    n = tp.n_levels if n_levels is None else n_levels
    w0 = qubit_frequency(tp)
    i = np.arange(n, dtype=float)
    return i * (w0 + (1.0 - i) * tp.e_c / 2.0)


def effective_josephson_energy(tp: TransmonParams, flux: float) -> float:
    """Two-junction SQUID reduction E_J_sum sqrt(cos^2 + d^2 sin^2) (rad/s)."""
    c = np.cos(np.pi * flux)
    s = np.sin(np.pi * flux)
    return float(tp.e_j_sum * np.sqrt(c * c + tp.asym**2 * s * s))


def charge_basis_levels(tp: TransmonParams, flux: float,
                        n_charge_cutoff: int = 30) -> np.ndarray:
    """Numerically exact transition frequencies from charge-basis diagonalization.

    Diagonalizes 4 E_C (n - n_g)^2 - E_J(flux) cos(phi) with charge
    states |n| <= n_charge_cutoff and returns the lowest ``n_levels``
    eigenfrequencies relative to the ground state (rad/s).  The result
    must be stable to 1e-9 relative under cutoff doubling, otherwise the
    cutoff is too small and an error is raised.
    """
    if n_charge_cutoff < 10:
        raise ValueError("n_charge_cutoff must be >= 10")
    first = _charge_levels(tp, flux, n_charge_cutoff)
    second = _charge_levels(tp, flux, 2 * n_charge_cutoff)
    scale = max(np.max(np.abs(second)), tp.e_c)
    if np.max(np.abs(first - second)) > 1e-9 * scale:
        raise ValueError(
            "charge-basis diagonalization unstable under cutoff doubling; "
            "increase n_charge_cutoff"
        )
    return second


def _charge_levels(tp: TransmonParams, flux: float, cutoff: int) -> np.ndarray:
    n = np.arange(-cutoff, cutoff + 1, dtype=float)
    ej = effective_josephson_energy(tp, flux)
    h = np.diag(4.0 * tp.e_c * (n - tp.n_g) ** 2)
    off = -0.5 * ej * np.ones(n.size - 1)
    h += np.diag(off, 1) + np.diag(off, -1)
    evals = np.linalg.eigvalsh(h)
    return evals[: tp.n_levels] - evals[0]


def fit_flux_spectrum(flux: np.ndarray, omega01: np.ndarray,
                      initial: TransmonParams, n_charge_cutoff: int = 30):
    """Least-squares fit of (E_C, E_J_sum, d) to a measured flux spectrum.

    ``flux`` in flux quanta, ``omega01`` the measured 0-1 transitions in
    rad/s.  Derivative-free Nelder-Mead on the squared residuals,
    relative convergence tolerance 1e-6.  Returns ``(params, rms)``
    with the fitted parameters substituted into ``initial``.
    """
    flux = np.asarray(flux, dtype=float)
    omega01 = np.asarray(omega01, dtype=float)
    if flux.shape != omega01.shape or flux.size < 3:
        raise ValueError("need matching flux/frequency arrays with >= 3 points")

    scale = np.array([initial.e_c, initial.e_j_sum, max(initial.asym, 0.05)])

    def objective(x):
        e_c, e_j, d = x * scale
        if e_c <= 0 or e_j <= 0 or not 0.0 <= d < 1.0:
            return np.inf
        trial = replace(initial, e_c=e_c, e_j_sum=e_j, asym=d)
        resid = 0.0
        for f, wm in zip(flux, omega01):
            w01 = _charge_levels(trial, f, n_charge_cutoff)[1]
            resid += (w01 - wm) ** 2
        return resid / omega01.size

    res = minimize(
        objective,
        np.array([1.0, 1.0, 1.0]),
        method="Nelder-Mead",
        options={"xatol": 1e-6, "fatol": 1e-6 * float(np.mean(omega01) ** 2),
                 "maxiter": 2000},
    )
    e_c, e_j, d = res.x * scale
    fitted = replace(initial, e_c=float(e_c), e_j_sum=float(e_j), asym=float(d))
    rms = float(np.sqrt(res.fun))
    return fitted, rms
