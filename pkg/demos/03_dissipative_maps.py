"""Dissipative steady-state maps: two-level population and dispersive readout.

The reference layer solves the Lindblad master equation for the driven,
modulated system and extracts the periodic steady state from the
one-period Floquet superoperator.  Two observables:

* two-level time-averaged excited population over (nu, Omega) -- the
  quantity the analytic layers are judged against;
* five-level transmon dispersive shift Delta f_r = sum_i P_i chi_i / 2pi
  (referenced to the undriven transmon), the readout signal an
  experiment actually records.

Device parameters: qubit at 2.62 GHz, delta/2pi = 100 MHz, g/2pi = 20 MHz,
Gamma_1/2pi = 1.2 MHz, Gamma_2/2pi = 3.1 MHz, 50 mK bath.
"""

import time

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from latchsim import (
    GridSpec,
    QubitParams,
    TransmonParams,
    dissipative_spectrum,
    transmon_ladder_model,
    two_level_model,
)
from latchsim.waveforms import ModulationWaveform, WaveformKind

TWO_PI = 2 * np.pi

q = QubitParams(omega0=TWO_PI * 2.62e9, omega=TWO_PI * 2.62e9, g=TWO_PI * 20e6,
                gamma1=TWO_PI * 1.2e6, gamma_phi=TWO_PI * 2.5e6, t_bath=0.05)
delta = TWO_PI * 100e6
w = ModulationWaveform(WaveformKind.SQUARE, delta, TWO_PI * 50e6)
tp = TransmonParams(e_c=TWO_PI * 0.35e9, e_j_sum=TWO_PI * 8.4e9, asym=0.1,
                    flux_dc=0.37763, omega_r=TWO_PI * 3.795e9, g0=TWO_PI * 80e6)

grid2 = GridSpec(nu=TWO_PI * np.linspace(-300e6, 300e6, 101), y_kind="omega_mod",
                 y=TWO_PI * np.linspace(10e6, 120e6, 56), delta=delta)
t0 = time.time()
print("two-level Lindblad map ...")
pop = dissipative_spectrum(two_level_model(q), q, w, grid2)
print(f"  {pop.values.size} cells in {time.time() - t0:.1f} s")

grid5 = GridSpec(nu=TWO_PI * np.linspace(-300e6, 300e6, 41), y_kind="omega_mod",
                 y=TWO_PI * np.linspace(10e6, 120e6, 23), delta=delta)
t0 = time.time()
print("five-level dispersive map ...")
shift = dissipative_spectrum(transmon_ladder_model(q, tp.e_c, 5), q, w, grid5,
                             observable="dispersive_shift_hz", tp=tp)
print(f"  {shift.values.size} cells in {time.time() - t0:.1f} s")

fig, axes = plt.subplots(1, 2, figsize=(12, 4.6))
m0 = axes[0].pcolormesh(pop.x_hz / 1e6, pop.y_hz / 1e6, pop.values,
                        cmap="inferno", shading="auto")
fig.colorbar(m0, ax=axes[0], label="$\\bar P_1$")
axes[0].set_title("two-level steady-state population")
m1 = axes[1].pcolormesh(shift.x_hz / 1e6, shift.y_hz / 1e6, shift.values / 1e6,
                        cmap="RdBu_r", shading="auto")
fig.colorbar(m1, ax=axes[1], label="$\\Delta f_r$ (MHz)")
axes[1].set_title("five-level dispersive shift (vs undriven)")
for ax in axes:
    ax.set_xlabel("detuning $\\nu/2\\pi$ (MHz)")
    ax.set_ylabel("$\\Omega/2\\pi$ (MHz)")
fig.tight_layout()
out = "demos/output/03_dissipative_maps.png"
fig.savefig(out, dpi=160)
print(f"wrote {out}")
