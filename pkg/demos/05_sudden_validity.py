"""How abrupt must the switch be?  The finite-ramp error bound.

Replacing the instantaneous switch by a linear ramp of duration T leaks
probability into the orthogonal latch eigenstate.  To second order the
leak is a Lorentzian in detuning, peaked at nu = -delta with half-width
g and maximum (T * delta)^2 / 4; for the 1-2 ns ramps of a realistic
pulse generator at delta/2pi = 100 MHz that bound is 0.1-0.4 right at
the peak, and falls off fast away from it.  A direct Schroedinger
integration across the ramp confirms the formula (and shows where the
second-order expansion starts to overestimate).
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from latchsim import QubitParams, ramp_transition_oracle, sudden_error, sudden_error_max
from latchsim.sudden import RampSpec

TWO_PI = 2 * np.pi
DELTA = TWO_PI * 100e6
G = TWO_PI * 20e6

nu_mhz = np.linspace(-250, 50, 201)
fig, ax = plt.subplots(figsize=(8, 4.6))
for t_ns, style in ((1.0, "-"), (2.0, "--")):
    ramp = RampSpec(t_ns * 1e-9)
    formula = [sudden_error(QubitParams(omega0=TWO_PI * nu * 1e6, omega=0.0, g=G),
                            DELTA, ramp) for nu in nu_mhz]
    oracle = [ramp_transition_oracle(
        QubitParams(omega0=TWO_PI * nu * 1e6, omega=0.0, g=G), DELTA, t_ns * 1e-9)
        for nu in nu_mhz[::10]]
    ax.plot(nu_mhz, formula, "k" + style, label=f"second order, T = {t_ns:.0f} ns")
    ax.plot(nu_mhz[::10], oracle, "o", ms=4, mfc="none",
            label=f"Schroedinger oracle, T = {t_ns:.0f} ns")
    print(f"T = {t_ns:.0f} ns: peak bound = {sudden_error_max(DELTA, t_ns * 1e-9):.4f}")
ax.set_xlabel("detuning $\\nu/2\\pi$ (MHz)")
ax.set_ylabel("ramp transition probability")
ax.set_title("sudden-switch validity: Lorentzian peak at $\\nu = -\\delta$, width $g$")
ax.legend()
fig.tight_layout()
out = "demos/output/05_sudden_validity.png"
fig.savefig(out, dpi=160)
print(f"wrote {out}")
