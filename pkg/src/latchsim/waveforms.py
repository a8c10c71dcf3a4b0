"""Periodic frequency-modulation waveforms and their exact phase integrals.

The qubit level separation is modulated by a zero-mean periodic signal
f(t) with amplitude ``delta`` and angular frequency ``omega``.  Three
shapes are supported:

``SQUARE``
    Latching modulation: f(t) = delta * sgn[cos(omega*t + phase)].  The
    qubit sits ("latches") at a constant detuning between abrupt
    switches; 50% duty cycle.
``SINE``
    f(t) = delta * cos(omega*t + phase).
``RAMPED_SQUARE``
    Square wave whose switches are replaced by linear ramps of duration
    ``ramp`` centred on the ideal switching instants.  Used to quantify
    how abrupt a real pulse must be for the sudden-switch picture to
    hold (see :mod:`latchsim.sudden`).

All frequencies are angular (rad/s).  ``phase_integral`` evaluates the
antiderivative in closed form; the co-rotating transformation
A(t) = exp[i * integral(f)] used by the sideband analysis is built on
top of it, so exactness here matters.

Convention: sgn(0) = +1, which makes ``evaluate`` a total function.  The
switching instants form a measure-zero set and never contribute to any
integral.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class WaveformKind(enum.Enum):
    SQUARE = "square"
    SINE = "sine"
    RAMPED_SQUARE = "ramped-square"


@dataclass(frozen=True)
class ModulationWaveform:
    """Periodic drive f(t).

    Parameters
    ----------
    kind:
        Waveform shape.
    delta:
        Amplitude (rad/s), >= 0.
    omega:
        Modulation angular frequency (rad/s), > 0.
    phase:
        Phase offset in radians (omega * t0), reduced to [0, 2*pi).
    ramp:
        Ramp duration in seconds (RAMPED_SQUARE only); must be shorter
        than a half-period so adjacent ramps do not overlap.
    """

    kind: WaveformKind
    delta: float
    omega: float
    phase: float = 0.0
    ramp: float = 0.0

    def __post_init__(self):
        if self.omega <= 0.0:
            raise ValueError("modulation frequency omega must be positive")
        if self.delta < 0.0:
            raise ValueError("amplitude delta must be non-negative")
        if self.ramp < 0.0:
            raise ValueError("ramp duration must be non-negative")
        if self.kind is WaveformKind.RAMPED_SQUARE:
            if self.ramp >= np.pi / self.omega:
                raise ValueError("ramp must be shorter than a half-period")
        object.__setattr__(self, "phase", float(np.mod(self.phase, TWO_PI)))

    @property
    def period(self) -> float:
        return TWO_PI / self.omega


def evaluate(w: ModulationWaveform, t):
    """Instantaneous frequency offset f(t) in rad/s.

    Accepts scalar or array ``t``; total on its domain (no poles, no
    undefined points).
    """
    t = np.asarray(t, dtype=float)
    u = w.omega * t + w.phase
    if w.kind is WaveformKind.SINE:
        out = w.delta * np.cos(u)
    elif w.kind is WaveformKind.SQUARE:
        out = np.where(np.cos(u) >= 0.0, w.delta, -w.delta)
    else:
        out = w.delta * _ramped_square_shape(u, w.omega * w.ramp / 2.0)
    return out if out.ndim else float(out)


def _ramped_square_shape(u, h):
    """Unit-amplitude ramped square as a function of u = omega*t + phase.

    ``h`` is the half-width of the switch window in u units.  Down-switch
    at u = pi/2 (mod 2*pi), up-switch at u = 3*pi/2 (mod 2*pi).
    """
    v = np.mod(u - np.pi / 2.0, TWO_PI)  # down-switch at v=0, up at v=pi
    s_down = np.where(v > np.pi, v - TWO_PI, v)  # signed offset from down-switch
    s_up = v - np.pi  # signed offset from up-switch
    square = np.where((v >= np.pi) | (v == 0.0), 1.0, -1.0)  # == sgn(cos u), sgn(0)=+1
    if h == 0.0:
        return square
    out = np.where(np.abs(s_down) < h, -s_down / h, square)
    out = np.where(np.abs(s_up) < h, s_up / h, out)
    return out


def phase_integral(w: ModulationWaveform, t0: float, t1: float) -> float:
    """Exact integral of f(tau) over [t0, t1], in radians.

    Closed-form piecewise antiderivative; additivity over adjacent
    intervals holds to machine precision.  Raises on a reversed
    interval.
    """
    if t1 < t0:
        raise ValueError("phase_integral requires t1 >= t0")
    return float(_antiderivative(w, t1) - _antiderivative(w, t0))


def _antiderivative(w: ModulationWaveform, t):
    """Continuous periodic antiderivative F with F' = f (f is zero-mean)."""
    t = np.asarray(t, dtype=float)
    u = w.omega * t + w.phase
    if w.kind is WaveformKind.SINE:
        r = np.sin(u) - np.sin(w.phase)
    elif w.kind is WaveformKind.SQUARE:
        r = _square_antiderivative(u) - _square_antiderivative(w.phase)
    else:
        h = w.omega * w.ramp / 2.0
        r = _ramped_antiderivative(u, h) - _ramped_antiderivative(w.phase, h)
    return (w.delta / w.omega) * r


def _square_antiderivative(u):
    """Triangle wave S with S' = sgn(cos u), S(0) = 0, period 2*pi."""
    v = np.mod(u + np.pi / 2.0, TWO_PI)
    return np.where(v <= np.pi, v - np.pi / 2.0, 3.0 * np.pi / 2.0 - v)


def _ramped_antiderivative(u, h):
    """Antiderivative of the unit ramped square in u, continuous and periodic."""
    if h == 0.0:
        return _square_antiderivative(u)
    v = np.mod(u - np.pi / 2.0, TWO_PI)
    # Piecewise over [0, 2*pi): down-ramp, left latch, up-ramp, right
    # latch, tail of the next down-ramp.
    conds = [
        v <= h,
        (v > h) & (v <= np.pi - h),
        (v > np.pi - h) & (v <= np.pi + h),
        (v > np.pi + h) & (v <= TWO_PI - h),
        v > TWO_PI - h,
    ]
    vals = [
        -(v**2) / (2.0 * h),
        -h / 2.0 - (v - h),
        (-np.pi + 3.0 * h / 2.0) + ((v - np.pi) ** 2 - h**2) / (2.0 * h),
        (-np.pi + 3.0 * h / 2.0) + (v - np.pi - h),
        -h / 2.0 + (h**2 - (TWO_PI - v) ** 2) / (2.0 * h),
    ]
    r = np.select(conds, vals)
    # shift so the reference point u=0 (v=3*pi/2) maps to 0 like the
    # square-wave antiderivative; any constant works, this one keeps the
    # ramp->0 limit matching _square_antiderivative.
    return r - (-np.pi + 3.0 * h / 2.0 + (np.pi / 2.0 - h))
