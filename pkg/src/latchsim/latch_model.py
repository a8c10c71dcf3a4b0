"""Exact adiabatic-impulse algebra for ideal square-wave (latching) modulation.

A driven two-level system with detuning nu = omega0 - omega, transverse
coupling g and latching modulation of amplitude delta alternates between
two time-independent Hamiltonians ("right" latch at detuning nu + delta,
"left" latch at nu - delta).  Because the Hamiltonian is piecewise
constant, one period of evolution factorizes exactly into adiabatic
phase accumulation inside each latch and instantaneous basis-change
matrices at the switches:

    U(period) = U_{phi/2}^(r) . U_switch^T . U_phi^(l) . U_switch . U_{phi/2}^(r)

with per-latch adiabatic phases phi = pi * sqrt((nu +- delta)^2 + g^2) / (2 Omega)
and the sudden-switch probability p_s = sin^2[(theta_l - theta_r)/2]
built from the latch mixing angles theta = atan2(g, nu +- delta).  The
period unitary is parametrized by two complex numbers (alpha, gamma)
with |alpha|^2 + |gamma|^2 = 1, from which single-period, n-period and
time-averaged excited-state populations follow in closed form, as do
the analytic resonance and antiresonance curve families.

Unlike conventional continuous (sinusoidal or triangular) driving,
p_s does not depend on the modulation frequency and no Stokes phase is
collected at the switches: the algebra below is exact for the ideal
square wave, not an asymptotic approximation.

Internal basis convention: index 0 = qubit ground state, index 1 =
excited state, sigma_z = |1><1| - |0><0|.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .grids import GridSpec, SpectrumGrid

#: |sin(Floquet phase)| below which the n-period population switches to
#: its analytic degenerate limit |gamma|^2 n^2 (removable singularity).
DEGENERATE_PHASE_TOL = 1e-9


class DegenerateCrossingError(ValueError):
    """Latch eigenbasis undefined: g = 0 with a latch point at/through the crossing."""


@dataclass(frozen=True)
class QubitParams:
    """Effective two-level parameters in the frame rotating at the drive.

    All rates and frequencies are angular (rad/s); ``t_bath`` is in
    kelvin.  The derived detuning is ``nu = omega0 - omega`` and the
    total decoherence rate ``gamma2 = gamma1/2 + gamma_phi``.
    """

    omega0: float
    omega: float
    g: float
    gamma1: float = 0.0
    gamma_phi: float = 0.0
    t_bath: float = 0.0

    def __post_init__(self):
        if self.g < 0.0:
            raise ValueError("coupling g must be non-negative")
        if self.gamma1 < 0.0 or self.gamma_phi < 0.0:
            raise ValueError("rates must be non-negative")
        if self.t_bath < 0.0:
            raise ValueError("bath temperature must be non-negative")

    @property
    def nu(self) -> float:
        return self.omega0 - self.omega

    @property
    def gamma2(self) -> float:
        return self.gamma1 / 2.0 + self.gamma_phi


@dataclass(frozen=True)
class LatchFrame:
    """Per-latch eigensystem data for one (nu, delta, Omega) working point.

    ``theta_r``/``theta_l`` are the latch mixing angles in (0, pi),
    ``eps_r``/``eps_l`` the eigenenergy gaps sqrt((nu +- delta)^2 + g^2)
    (rad/s), ``phi_r``/``phi_l`` the half-latch adiabatic phases and
    ``p_s`` the sudden-switch probability.
    """

    theta_r: float
    theta_l: float
    eps_r: float
    eps_l: float
    phi_r: float
    phi_l: float
    p_s: float


@dataclass(frozen=True)
class PeriodUnitary:
    """One-period propagator in the (alpha, gamma) parametrization.

    ``alpha`` is the diagonal element, ``gamma`` the off-diagonal one
    (|alpha|^2 + |gamma|^2 = 1) and ``phi = arccos(Re alpha)`` the
    Floquet phase per period.
    """

    alpha: complex
    gamma: complex
    phi: float


class StartLatch(enum.Enum):
    RIGHT_START = "right"
    LEFT_START = "left"
    PHASE_AVERAGED = "phase-averaged"


class ResonanceFamily(enum.Enum):
    DIFF_RES = "diff"            # phi_l - phi_r = m * pi
    SUM_RES = "sum"              # phi_l + phi_r = m * pi
    SINGLE_PERIOD_RES = "single" # phi_l = (2n+1) * pi / 2
    ANTI_RES = "anti"            # phi_l = n * pi


def latch_frame(q: QubitParams, delta: float, omega_mod: float) -> LatchFrame:
    """Diagonalize both latches and assemble the adiabatic-impulse inputs.

    Raises :class:`DegenerateCrossingError` when g = 0 and |nu| <= delta
    (a latch point sits at, or the switch jumps across, the degenerate
    crossing, where the mixing angle is undefined).
    """
    if omega_mod <= 0.0:
        raise ValueError("omega_mod must be positive")
    if delta < 0.0:
        raise ValueError("delta must be non-negative")
    nu = q.nu
    if q.g == 0.0 and abs(nu) <= delta:
        raise DegenerateCrossingError(
            "g = 0 with |nu| <= delta: latch eigenbasis undefined at the crossing"
        )
    theta_r = float(np.arctan2(q.g, nu + delta))
    theta_l = float(np.arctan2(q.g, nu - delta))
    eps_r = float(np.hypot(nu + delta, q.g))
    eps_l = float(np.hypot(nu - delta, q.g))
    phi_r = np.pi * eps_r / (2.0 * omega_mod)
    phi_l = np.pi * eps_l / (2.0 * omega_mod)
    # half-angle form, stable for nearly identical and nearly opposite latches
    p_s = float(np.sin(0.5 * (theta_l - theta_r)) ** 2)
    return LatchFrame(theta_r, theta_l, eps_r, eps_l, phi_r, phi_l, p_s)


def swap_latches(lf: LatchFrame) -> LatchFrame:
    """The same working point viewed with the period starting in the left latch."""
    return LatchFrame(
        theta_r=lf.theta_l,
        theta_l=lf.theta_r,
        eps_r=lf.eps_l,
        eps_l=lf.eps_r,
        phi_r=lf.phi_l,
        phi_l=lf.phi_r,
        p_s=lf.p_s,
    )


def latch_eigenstates(q: QubitParams, delta: float, side: str = "r"):
    """Lab-basis eigenvectors (psi_minus, psi_plus) of one latch Hamiltonian.

    ``side`` is ``"r"`` (detuning nu + delta) or ``"l"`` (nu - delta).
    Basis ordering: (ground, excited).
    """
    nu = q.nu + delta if side == "r" else q.nu - delta
    theta = np.arctan2(q.g, nu)
    psi_minus = np.array([np.cos(theta / 2.0), -np.sin(theta / 2.0)], dtype=complex)
    psi_plus = np.array([np.sin(theta / 2.0), np.cos(theta / 2.0)], dtype=complex)
    return psi_minus, psi_plus


def period_unitary(lf: LatchFrame) -> PeriodUnitary:
    """Closed-form (alpha, gamma) of the one-period propagator, right-latch start.

    alpha = (1 - p_s) e^{-i(phi_r + phi_l)} + p_s e^{-i(phi_r - phi_l)}
    gamma = -2i sqrt(p_s (1 - p_s)) sin(phi_l)
    """
    ps = lf.p_s
    alpha = (1.0 - ps) * np.exp(-1j * (lf.phi_r + lf.phi_l)) + ps * np.exp(
        -1j * (lf.phi_r - lf.phi_l)
    )
    gamma = -2j * np.sqrt(ps * (1.0 - ps)) * np.sin(lf.phi_l)
    # Re(alpha) can exceed [-1, 1] by rounding only; clamp before arccos.
    phi = float(np.arccos(np.clip(alpha.real, -1.0, 1.0)))
    return PeriodUnitary(complex(alpha), complex(gamma), phi)


def period_unitary_matrix(pu: PeriodUnitary) -> np.ndarray:
    """The 2x2 propagator [[alpha, -conj(gamma)], [gamma, conj(alpha)]].

    Acts on adiabatic-basis coefficient vectors ordered (plus, minus):
    starting from the latch ground state (0, 1), the excited-state
    amplitude after one period is -conj(gamma).
    """
    return np.array(
        [[pu.alpha, -np.conj(pu.gamma)], [pu.gamma, np.conj(pu.alpha)]], dtype=complex
    )


def single_period_population(lf: LatchFrame) -> float:
    """Excited-state probability after one period from the right-latch ground state.

    P = 4 p_s (1 - p_s) sin^2(phi_l); vanishes at the antiresonances
    phi_l = n*pi (coherent destruction of tunneling) and at p_s in {0, 1}
    where only a single evolutionary path exists.
    """
    return float(4.0 * lf.p_s * (1.0 - lf.p_s) * np.sin(lf.phi_l) ** 2)


def n_period_population(pu: PeriodUnitary, n: int) -> float:
    """Excited-state probability after n periods: |gamma|^2 sin^2(n phi)/sin^2(phi).

    At the degenerate Floquet phase (|sin phi| < 1e-9) the removable
    singularity is replaced by its analytic limit |gamma|^2 n^2; naive
    division there would lose all significant digits.  n = 0 returns 0
    (identity propagator).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0.0
    g2 = abs(pu.gamma) ** 2
    s = np.sin(pu.phi)
    if abs(s) < DEGENERATE_PHASE_TOL:
        return float(g2 * n**2)
    return float(g2 * np.sin(n * pu.phi) ** 2 / s**2)


def averaged_population(arg, start: StartLatch = StartLatch.PHASE_AVERAGED) -> float:
    """Time-averaged excited-state population over many periods.

    ``arg`` is a :class:`LatchFrame` (any ``start``) or a
    :class:`PeriodUnitary` (RIGHT_START/LEFT_START only; for LEFT_START
    it must already be the left-start unitary).  Per starting latch the
    average is

        Pbar = 1/2 |gamma|^2 / (|gamma|^2 + Im(alpha)^2)  <= 1/2,

    and PHASE_AVERAGED is the mean of the right- and left-start values.
    For the ideal 50% square wave every intermediate starting phase
    re-partitions the same two adiabatic segments, so the two-point
    average captures the full phase average's resonance structure.
    When gamma = 0 and Im(alpha) = 0 simultaneously, no excitation is
    generated from the ground state and 0 is returned.
    """
    if isinstance(arg, LatchFrame):
        if start is StartLatch.RIGHT_START:
            return _averaged_from_unitary(period_unitary(arg))
        if start is StartLatch.LEFT_START:
            return _averaged_from_unitary(period_unitary(swap_latches(arg)))
        right = _averaged_from_unitary(period_unitary(arg))
        left = _averaged_from_unitary(period_unitary(swap_latches(arg)))
        return 0.5 * (right + left)
    if start is StartLatch.PHASE_AVERAGED:
        raise TypeError("PHASE_AVERAGED needs a LatchFrame, not a PeriodUnitary")
    return _averaged_from_unitary(arg)


def _averaged_from_unitary(pu: PeriodUnitary) -> float:
    g2 = abs(pu.gamma) ** 2
    denom = g2 + pu.alpha.imag**2
    if denom == 0.0:
        return 0.0
    return float(0.5 * g2 / denom)


def resonance_curves(
    q: QubitParams,
    delta: float,
    family: ResonanceFamily,
    index: int,
    omega_mod_range,
) -> np.ndarray:
    """Analytic (Omega, nu) points of one resonance/antiresonance curve.

    For each Omega in ``omega_mod_range`` the defining phase condition is
    solved for nu; real solutions are emitted as rows (Omega, nu) and
    Omega values with no solution are omitted.  The cyclic-evolution
    families (DIFF_RES, SUM_RES) are even in nu and are mirrored to
    -nu; the single-period families involve only the left latch and are
    not symmetric.

    DIFF_RES:          sqrt((nu+d)^2+g^2) - sqrt((nu-d)^2+g^2) = 2|m| Omega
    SUM_RES:           sqrt((nu-d)^2+g^2) + sqrt((nu+d)^2+g^2) = 2 m Omega
    SINGLE_PERIOD_RES: sqrt((nu-d)^2+g^2) = (2n+1) Omega
    ANTI_RES:          sqrt((nu-d)^2+g^2) = 2 n Omega
    """
    if family is ResonanceFamily.DIFF_RES:
        if index == 0:
            raise ValueError("DIFF_RES index must be a nonzero integer")
    elif family is ResonanceFamily.SINGLE_PERIOD_RES:
        if index < 0:
            raise ValueError("SINGLE_PERIOD_RES index must be >= 0")
    elif index < 1:
        raise ValueError(f"{family.name} index must be >= 1")

    g = q.g
    pts: list[tuple[float, float]] = []
    for om in np.atleast_1d(np.asarray(omega_mod_range, dtype=float)):
        if om <= 0.0:
            continue
        if family is ResonanceFamily.DIFF_RES:
            target = 2.0 * abs(index) * om
            nu = _solve_diff(delta, g, target, om)
            if nu is not None:
                pts.append((om, nu))
                if nu > 0.0:
                    pts.append((om, -nu))
        elif family is ResonanceFamily.SUM_RES:
            target = 2.0 * index * om
            nu = _solve_sum(delta, g, target, om)
            if nu is not None:
                pts.append((om, nu))
                if nu > 0.0:
                    pts.append((om, -nu))
        else:
            k = 2 * index + 1 if family is ResonanceFamily.SINGLE_PERIOD_RES else 2 * index
            rad = (k * om) ** 2 - g**2
            if rad < 0.0:
                continue
            s = np.sqrt(rad)
            pts.append((om, delta - s))
            if s > 0.0:
                pts.append((om, delta + s))
    return np.array(sorted(pts), dtype=float).reshape(-1, 2)


def _solve_diff(delta, g, target, omega_mod):
    """Root of sqrt((nu+d)^2+g^2) - sqrt((nu-d)^2+g^2) = target on nu >= 0.

    The left side rises monotonically from 0 to the asymptote 2*delta,
    so a root exists iff 0 < target < 2*delta; bisection is
    unconditionally convergent on the expanding bracket.
    """
    if target <= 0.0 or target >= 2.0 * delta:
        return None
    f = lambda nu: np.hypot(nu + delta, g) - np.hypot(nu - delta, g) - target
    lo, hi = 0.0, delta + g + target
    for _ in range(200):
        if f(hi) >= 0.0:
            break
        hi *= 2.0
    else:
        return None
    return _bisect(f, lo, hi, 1e-6 * omega_mod)


def _solve_sum(delta, g, target, omega_mod):
    """Root of sqrt((nu-d)^2+g^2) + sqrt((nu+d)^2+g^2) = target on nu >= 0.

    The sum of distances has its minimum 2*sqrt(delta^2+g^2) at nu = 0
    and rises monotonically; solvable iff target >= that minimum.
    """
    gmin = 2.0 * np.hypot(delta, g)
    if target < gmin:
        return None
    if target == gmin:
        return 0.0
    f = lambda nu: np.hypot(nu - delta, g) + np.hypot(nu + delta, g) - target
    hi = 0.5 * target + delta + g
    return _bisect(f, 0.0, hi, 1e-6 * omega_mod)


def _bisect(f, lo, hi, atol):
    flo = f(lo)
    if flo > 0.0:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= atol:
            return mid
        if f(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def latch_spectrum(q: QubitParams, grid: GridSpec) -> SpectrumGrid:
    """Phase-averaged adiabatic-impulse population over a 2-D parameter grid.

    The x axis sweeps the detuning nu; the y axis sweeps either the
    modulation frequency (``y_kind='omega_mod'``, fixed ``grid.delta``)
    or the modulation amplitude (``y_kind='delta'``, fixed
    ``grid.omega_mod``).  Cells where the latch eigenbasis is undefined
    are masked as NaN and counted in the metadata.  Every cell is an
    independent pure-function evaluation, so the fill order (or any
    parallelization) cannot change the result.
    """
    values = np.empty((grid.y.size, grid.nu.size))
    nan_count = 0
    for j, yv in enumerate(grid.y):
        delta, omega_mod = grid.resolve(yv)
        for i, nu in enumerate(grid.nu):
            qp = replace(q, omega=q.omega0 - nu)
            try:
                lf = latch_frame(qp, delta, omega_mod)
                values[j, i] = averaged_population(lf, StartLatch.PHASE_AVERAGED)
            except DegenerateCrossingError:
                values[j, i] = np.nan
                nan_count += 1
    meta = {
        "layer": "adiabatic_impulse",
        "nan_cells": nan_count,
        "qubit": {
            "omega0_hz": q.omega0 / (2 * np.pi),
            "g_hz": q.g / (2 * np.pi),
        },
        "fixed": grid.fixed_meta(),
    }
    return SpectrumGrid(
        x_hz=grid.nu / (2 * np.pi),
        y_hz=grid.y / (2 * np.pi),
        values=values,
        observable="population",
        layer="adiabatic_impulse",
        meta=meta,
    )
