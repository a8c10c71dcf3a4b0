"""Validity bound for treating a finite switch ramp as instantaneous.

Real flux pulses ramp linearly between the two latch values over a time
T instead of jumping.  Treating the ramp as sudden leaves an error
probability: starting from a latch eigenstate, the evolution during the
ramp can leak into the orthogonal eigenstate.  To second order in the
ramp Hamiltonian the leak depends only on the time-averaged Hamiltonian
during the ramp and takes a Lorentzian form,

    w_right(nu) = (T^2 delta^2 / 4) * g^2 / (g^2 + (nu + delta)^2),

peaked at nu = -delta with half-width g and maximum w_max =
(T delta)^2 / 4; the left-latch version replaces (nu + delta) with
(nu - delta).  The sudden approximation is good when T << 1/delta.

``ramp_transition_oracle`` integrates the time-dependent Schroedinger
equation across the ramp with a fourth-order scheme and Richardson
step-doubling so the closed forms can be tested against something that
does not share their perturbative expansion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._integrate import cf4_product
from .latch_model import QubitParams, latch_eigenstates

_ORACLE_TOL = 1e-10
_MAX_STEPS = 1 << 15


class RampSide(enum.Enum):
    RIGHT_START = "right"
    LEFT_START = "left"


@dataclass(frozen=True)
class RampSpec:
    """Linear ramp of duration ``t_ramp`` (seconds), projected in the given latch basis."""

    t_ramp: float
    side: RampSide = RampSide.RIGHT_START

    def __post_init__(self):
        if self.t_ramp < 0.0:
            raise ValueError("t_ramp must be non-negative")


def sudden_error(q: QubitParams, delta: float, ramp: RampSpec) -> float:
    """Second-order transition probability during one linear ramp.

    Lorentzian in the detuning: (T delta)^2/4 * g^2 / (g^2 + (nu +- delta)^2),
    with + for a right-basis projection and - for left.
    """
    shift = delta if ramp.side is RampSide.RIGHT_START else -delta
    lorentz = q.g**2 / (q.g**2 + (q.nu + shift) ** 2)
    return float(0.25 * (ramp.t_ramp * delta) ** 2 * lorentz)


def sudden_error_max(delta: float, t_ramp: float) -> float:
    """Peak of the ramp error, (T delta)^2 / 4, reached at nu = -+ delta."""
    return float(0.25 * (t_ramp * delta) ** 2)


def ramp_transition_oracle(q: QubitParams, delta: float, t_ramp: float) -> float:
    """Numerically exact |<psi_plus^(r)| U(ramp) |psi_minus^(r)>|^2.

    Integrates the lab-frame Schroedinger equation across the linear
    ramp f(t) = (2t/T - 1) delta with step count doubled until the
    result changes by less than 1e-10 (independent of the second-order
    expansion it is used to test).
    """
    if t_ramp < 0.0:
        raise ValueError("t_ramp must be non-negative")
    if t_ramp == 0.0:
        return 0.0
    psi_minus, psi_plus = latch_eigenstates(q, delta, "r")

    def gen(t):
        f = (2.0 * t / t_ramp - 1.0) * delta
        h = np.array(
            [[-0.5 * (q.nu + f), 0.5 * q.g], [0.5 * q.g, 0.5 * (q.nu + f)]],
            dtype=complex,
        )
        return -1j * h

    n = 16
    prev = _ramp_probability(gen, t_ramp, n, psi_minus, psi_plus)
    while n <= _MAX_STEPS:
        n *= 2
        cur = _ramp_probability(gen, t_ramp, n, psi_minus, psi_plus)
        if abs(cur - prev) <= _ORACLE_TOL:
            return cur
        prev = cur
    raise RuntimeError(f"ramp oracle not converged at {n} steps")


def _ramp_probability(gen, t_ramp, n_steps, psi_minus, psi_plus) -> float:
    u = cf4_product(gen, 0.0, t_ramp, n_steps)
    return float(abs(np.vdot(psi_plus, u @ psi_minus)) ** 2)
