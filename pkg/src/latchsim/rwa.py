"""Rotating-wave-approximation layer: sideband amplitudes and steady state.

Transforming to a frame co-rotating with the longitudinal modulation
turns the transverse drive g into an effective drive g * A(t) with
A(t) = exp[i * integral of f].  Expanding the periodic A(t) in a Fourier
series A(t) = sum_m D_m exp(i m Omega t) splits the response into
sidebands at detunings nu = -m Omega with amplitudes D_m that depend
only on the ratio x = delta / Omega:

* sinusoidal modulation: D_m = J_m(x), Bessel functions of the first
  kind (Jacobi-Anger expansion);
* latching (square) modulation, in closed form:

      D_m = (2/pi) * x / (m^2 - x^2) * sin(pi*m/2 - pi*x/2),

  with the removable singularity |m| = x != 0 taking the value
  |D_m| = 1/2 -- every sideband has the same amplitude where it crosses
  x = |m|, a signature specific to latching modulation.

Both families obey the parity rule D_{-m} = (-1)^m D_m and Parseval's
identity sum_m D_m^2 = 1 (|A| = 1).  For m != 0 the amplitudes vanish
as x -> 0: modulation much faster than the amplitude washes out the
sidebands (motional averaging), leaving only the saturated carrier
D_0 -> 1.

With relaxation Gamma_1 and total decoherence Gamma_2 the steady-state
excited population is a sum of power-broadened Lorentzians, one per
sideband.  The RWA is reliable for Omega >~ g; callers can consult
:func:`rwa_valid` to tag extrapolated results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .latch_model import QubitParams
from .waveforms import ModulationWaveform, WaveformKind, phase_integral

#: |ratio - |m|| below which the square-wave amplitude switches to its
#: analytic limit at the removable singularity.
SINGULARITY_TOL = 1e-8

#: Default Parseval-defect target for adaptive truncation.
DEFECT_TARGET = 1e-6

#: Hard ceiling for adaptive truncation.  The square-wave amplitudes
#: decay only like 1/m^2, so reaching a 1e-6 defect at ratio 20 already
#: needs m_max ~ 400; the ceiling exists to bound pathological inputs,
#: not normal use.
M_MAX_CEILING = 2048


@dataclass(frozen=True)
class SidebandSet:
    """Truncated sideband amplitudes D_m, |m| <= m_max, for one ratio delta/Omega."""

    waveform_kind: WaveformKind
    ratio: float
    m_max: int
    amps: np.ndarray = field(repr=False)  # index m + m_max
    parseval_defect: float

    def amp(self, m: int) -> float:
        if abs(m) > self.m_max:
            raise IndexError(f"|m| must be <= m_max = {self.m_max}")
        return float(self.amps[m + self.m_max])

    def orders(self):
        return range(-self.m_max, self.m_max + 1)


def bessel_j(m: int, x: float) -> float:
    """Bessel function of the first kind J_m(x) for integer m, x >= 0.

    Ascending power series for small argument (no cancellation there),
    Miller's backward recurrence with even-order normalization
    J_0 + 2*(J_2 + J_4 + ...) = 1 otherwise.  Good to ~1e-13 relative
    for x <= 50 away from the zeros of J_m.
    """
    m = int(m)
    if x < 0.0:
        raise ValueError("bessel_j requires x >= 0")
    n = abs(m)
    sign = -1.0 if (m < 0 and n % 2 == 1) else 1.0
    if x == 0.0:
        return sign * (1.0 if n == 0 else 0.0)
    if x <= 2.0:
        return sign * _bessel_series(n, x)
    return sign * _bessel_miller(n, x)


def _bessel_series(n: int, x: float) -> float:
    """sum_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!); converges fast for x <= 2."""
    half = 0.5 * x
    try:
        term = half**n / math.factorial(n)
    except OverflowError:
        return 0.0
    if term == 0.0:
        return 0.0
    total = term
    for k in range(1, 60):
        term *= -(half * half) / (k * (n + k))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def _bessel_miller(n: int, x: float) -> float:
    """Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalized."""
    start = max(n, int(x)) + 1
    start += int(math.ceil(math.sqrt(160.0 * start)))
    if start % 2:
        start += 1  # even start keeps the normalization sum aligned
    jp, jc = 0.0, 1e-30
    norm = 0.0
    target = 0.0
    for k in range(start, 0, -1):
        jm = (2.0 * k / x) * jc - jp
        jp, jc = jc, jm
        if k - 1 == n:
            target = jc
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * jc
        if abs(jc) > 1e250:  # rescale to dodge overflow
            jp *= 1e-250
            jc *= 1e-250
            norm *= 1e-250
            target *= 1e-250
    norm += jc  # J_0 term
    return target / norm


def square_sideband(m: int, ratio: float) -> float:
    """Closed-form latching-modulation sideband amplitude D_m^sq(ratio).

    Stable branches: the carrier m = 0 uses (2/(pi x)) sin(pi x / 2)
    (limit 1 as x -> 0); the removable singularity at ratio = |m| != 0
    returns the continuity limit, whose magnitude is exactly 1/2.
    """
    m = int(m)
    x = float(ratio)
    if x < 0.0:
        raise ValueError("ratio must be >= 0")
    if m == 0:
        if x < 1e-8:
            return 1.0
        return (2.0 / (np.pi * x)) * np.sin(np.pi * x / 2.0)
    if x == 0.0:
        return 0.0
    if abs(x - abs(m)) < SINGULARITY_TOL:
        # limit approaching x = |m| is +1/2 for m > 0; parity fixes m < 0
        return 0.5 if m > 0 else 0.5 * (-1.0) ** abs(m)
    # sin(pi m / 2 - pi x / 2) with the integer part reduced exactly
    y = np.pi * x / 2.0
    r = m % 4
    if r == 0:
        s = -np.sin(y)
    elif r == 1:
        s = np.cos(y)
    elif r == 2:
        s = np.sin(y)
    else:
        s = -np.cos(y)
    return float((2.0 / np.pi) * x / (m * m - x * x) * s)


def sideband_amplitude(kind: WaveformKind, m: int, ratio: float) -> float:
    """Sideband amplitude D_m for the given waveform kind at ratio = delta/Omega."""
    if kind is WaveformKind.SINE:
        return bessel_j(m, ratio)
    if kind is WaveformKind.SQUARE:
        return square_sideband(m, ratio)
    raise ValueError("sidebands are defined for ideal SQUARE or SINE waveforms")


def sideband_set(kind: WaveformKind, ratio: float, m_max: int | None = None) -> SidebandSet:
    """All amplitudes |m| <= m_max plus the recorded Parseval defect.

    When ``m_max`` is None the truncation adapts: the smallest order
    whose Parseval defect drops below 1e-6 (hard ceiling
    ``M_MAX_CEILING``).
    """
    if m_max is None:
        m_max = adaptive_m_max(kind, ratio)
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    amps = np.array(
        [sideband_amplitude(kind, m, ratio) for m in range(-m_max, m_max + 1)]
    )
    defect = float(1.0 - np.sum(amps**2))
    return SidebandSet(kind, float(ratio), int(m_max), amps, defect)


def adaptive_m_max(kind: WaveformKind, ratio: float, target: float = DEFECT_TARGET,
                   ceiling: int = M_MAX_CEILING) -> int:
    """Smallest m_max with Parseval defect below ``target`` (capped)."""
    total = sideband_amplitude(kind, 0, ratio) ** 2
    m = 0
    while m < ceiling:
        m += 1
        a = sideband_amplitude(kind, m, ratio)
        b = sideband_amplitude(kind, -m, ratio)
        total += a * a + b * b
        if m >= 1 and 1.0 - total < target:
            return max(m, 1)
    return ceiling


def fft_sidebands(w: ModulationWaveform, m_max: int) -> SidebandSet:
    """Sideband amplitudes by direct quadrature of A(t) = exp[i integral f].

    Independent numerical route used to cross-check the closed forms:
    D_m = (Omega / 2 pi) * integral over one period of e^{-i m Omega t} A(t).
    Composite Gauss-Legendre panels, subdivided at the waveform's
    switching instants and sized to the integrand's oscillation, keep
    the quadrature error far below 1e-9.  Only ideal (phase = 0) SQUARE
    and SINE waveforms have the closed-form A(t) this is meant to check.
    """
    if w.kind is WaveformKind.RAMPED_SQUARE:
        raise ValueError("fft_sidebands supports ideal SQUARE or SINE waveforms only")
    if w.phase != 0.0:
        raise ValueError("fft_sidebands requires phase = 0")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    ratio = w.delta / w.omega
    period = w.period
    # panel boundaries at the square-wave switches (smooth pieces)
    if w.kind is WaveformKind.SQUARE:
        edges = [0.0, 0.25 * period, 0.75 * period, period]
    else:
        edges = [0.0, 0.5 * period, period]
    nodes, weights = np.polynomial.legendre.leggauss(16)
    amps = np.empty(2 * m_max + 1)
    for m in range(-m_max, m_max + 1):
        # phase turns at rate |m*Omega| + |f| <= (|m| + ratio)*Omega
        subdiv = max(4, int(np.ceil((abs(m) + ratio))))
        val = 0.0 + 0.0j
        for a, b in zip(edges[:-1], edges[1:]):
            for k in range(subdiv):
                lo = a + (b - a) * k / subdiv
                hi = a + (b - a) * (k + 1) / subdiv
                mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
                t = mid + half * nodes
                phases = np.array([phase_integral(w, 0.0, tt) for tt in t])
                integrand = np.exp(1j * (phases - m * w.omega * t))
                val += half * np.sum(weights * integrand)
        amps[m + m_max] = (val / period).real
    defect = float(1.0 - np.sum(amps**2))
    return SidebandSet(w.kind, float(ratio), int(m_max), amps, defect)


def rwa_population(q: QubitParams, sb: SidebandSet, omega_mod: float, nu: float) -> float:
    """Multi-sideband steady-state excited population with decoherence.

    P_e = sum_m [ (G2 / 2 G1) (g D_m)^2 ]
                / [ G2^2 + (nu + m Omega)^2 + (G2 / G1) (g D_m)^2 ]

    Each term is a power-broadened Lorentzian centred at nu = -m Omega
    that saturates at 1/2 for strong drive.  Requires Gamma_1 > 0 (the
    undamped steady state is undefined).
    """
    if q.gamma1 <= 0.0:
        raise ValueError("rwa_population requires gamma1 > 0")
    g1, g2 = q.gamma1, q.gamma2
    total = 0.0
    for m in sb.orders():
        gd2 = (q.g * sb.amp(m)) ** 2
        total += (0.5 * g2 / g1) * gd2 / (g2**2 + (nu + m * omega_mod) ** 2 + (g2 / g1) * gd2)
    return float(total)


def resonant_sideband_population(q: QubitParams, kind: WaveformKind, delta: float,
                                 m: int, omega_mod: float,
                                 nu: float | None = None) -> float:
    """Steady-state contribution of one sideband, evaluated at detuning nu.

    The single-Lorentzian term of :func:`rwa_population` for the followed
    sideband m (nu defaults to the sideband centre -m*Omega).  Traces
    "along sideband m" compare this quantity against the reference
    solver: near a sideband centre the analytic steady state derives
    from the resonant term alone, and adding the tails of neighbouring
    saturated resonances overestimates the population wherever they are
    not resolvable (the full sum can even exceed the steady-state
    ceiling 1/2 when sidebands overlap).
    """
    if q.gamma1 <= 0.0:
        raise ValueError("resonant_sideband_population requires gamma1 > 0")
    if nu is None:
        nu = -m * omega_mod
    amp = sideband_amplitude(kind, m, delta / omega_mod)
    g1, g2 = q.gamma1, q.gamma2
    gd2 = (q.g * amp) ** 2
    return float((0.5 * g2 / g1) * gd2
                 / (g2**2 + (nu + m * omega_mod) ** 2 + (g2 / g1) * gd2))


def rwa_linewidth(q: QubitParams, delta_m: float) -> float:
    """Half-width bound sqrt(G2^2 + (g D_m)^2 G2 / G1) used to judge resolvability."""
    if q.gamma1 <= 0.0:
        raise ValueError("rwa_linewidth requires gamma1 > 0")
    return float(np.sqrt(q.gamma2**2 + (q.g * delta_m) ** 2 * q.gamma2 / q.gamma1))


def rwa_valid(q: QubitParams, omega_mod: float) -> bool:
    """True where the RWA is trusted (Omega >= g); False marks extrapolation."""
    return omega_mod >= q.g
