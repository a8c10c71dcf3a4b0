"""Fourth-order commutator-free Magnus stepping for time-dependent generators.

Propagates dX/dt = G(t) X with two matrix exponentials per step,

    X(t+h) = exp(h (a G1 + b G2)) . exp(h (b G1 + a G2)) . X(t),

where G1, G2 are evaluated at the Gauss-Legendre nodes of the step and
a = 1/4 - sqrt(3)/6, b = 1/4 + sqrt(3)/6.  Global error is O(h^4),
which makes step-doubling (Richardson) convergence checks cheap.  Used
for the Lindblad period map with smooth waveforms and for the ramp
Schroedinger oracle; square waves never come through here (their
generators are piecewise constant and are exponentiated exactly).
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

_SQRT3_6 = np.sqrt(3.0) / 6.0
_A = 0.25 - _SQRT3_6
_B = 0.25 + _SQRT3_6


def cf4_product(gen, t0: float, t1: float, n_steps: int) -> np.ndarray:
    """Ordered product of CF4 step propagators over [t0, t1].

    ``gen(t)`` returns the (square-matrix) generator at time t.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    h = (t1 - t0) / n_steps
    dim = gen(t0).shape[0]
    out = np.eye(dim, dtype=complex)
    for k in range(n_steps):
        t = t0 + k * h
        g1 = gen(t + (0.5 - _SQRT3_6) * h)
        g2 = gen(t + (0.5 + _SQRT3_6) * h)
        step = expm(h * (_A * g1 + _B * g2)) @ expm(h * (_B * g1 + _A * g2))
        out = step @ out
    return out


def cf4_step_chain(gen, t0: float, t1: float, n_steps: int):
    """Yield (t_k, cumulative propagator up to t_k) for k = 0..n_steps."""
    h = (t1 - t0) / n_steps
    dim = gen(t0).shape[0]
    acc = np.eye(dim, dtype=complex)
    yield t0, acc
    for k in range(n_steps):
        t = t0 + k * h
        g1 = gen(t + (0.5 - _SQRT3_6) * h)
        g2 = gen(t + (0.5 + _SQRT3_6) * h)
        step = expm(h * (_A * g1 + _B * g2)) @ expm(h * (_B * g1 + _A * g2))
        acc = step @ acc
        yield t + h, acc
