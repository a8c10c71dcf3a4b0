"""From circuit parameters to the effective two-level model.

Walks the full parameter chain for the device values E_C/h = 0.35 GHz,
E_J_sum/h = 8.4 GHz, d = 0.1, g0/2pi = 80 MHz, resonator at 3.795 GHz:

1. flux dependence of the 0-1 transition, perturbative vs numerically
   exact charge-basis diagonalization (and a synthetic-spectrum fit that
   recovers E_C, E_J_sum, d);
2. the dc flux bias that parks the qubit at 2.62 GHz;
3. the square-pulse flux amplitude that realizes delta/2pi = 100 MHz;
4. the resonator photon number that realizes g/2pi = 20 MHz.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from latchsim.transmon import (
    TransmonParams,
    charge_basis_levels,
    drive_coupling,
    fit_flux_spectrum,
    flux_for_qubit_frequency,
    latching_amplitude,
    qubit_frequency,
)
from dataclasses import replace

TWO_PI = 2 * np.pi
tp = TransmonParams(e_c=TWO_PI * 0.35e9, e_j_sum=TWO_PI * 8.4e9, asym=0.1,
                    omega_r=TWO_PI * 3.795e9, g0=TWO_PI * 80e6)

# 1. flux spectrum, both routes, plus a fit from synthetic data
fluxes = np.linspace(-0.45, 0.45, 61)
exact = np.array([charge_basis_levels(tp, f)[1] for f in fluxes])
pert = np.array([qubit_frequency(replace(tp, flux_dc=f)) for f in fluxes])

rng = np.random.default_rng(1)
sample = fluxes[::4]
noisy = exact[::4] * (1 + rng.normal(0, 2e-4, sample.size))
guess = TransmonParams(e_c=TWO_PI * 0.3e9, e_j_sum=TWO_PI * 9.5e9, asym=0.05)
fitted, rms = fit_flux_spectrum(sample, noisy, guess)
print(f"fit from synthetic spectrum: E_C/h = {fitted.e_c / TWO_PI / 1e9:.4f} GHz, "
      f"E_J/h = {fitted.e_j_sum / TWO_PI / 1e9:.3f} GHz, d = {fitted.asym:.3f} "
      f"(rms {rms / TWO_PI / 1e6:.2f} MHz)")

fig, ax = plt.subplots(figsize=(8, 4.6))
ax.plot(fluxes, exact / TWO_PI / 1e9, "k-", label="charge-basis diagonalization")
ax.plot(fluxes, pert / TWO_PI / 1e9, "r--", label="$\\omega_p - E_C/\\hbar$")
ax.plot(sample, noisy / TWO_PI / 1e9, "o", ms=4, mfc="none", label="synthetic data")
ax.set_xlabel("flux bias $\\Phi_{dc}/\\Phi_0$")
ax.set_ylabel("$f_{01}$ (GHz)")
ax.set_title("transmon flux spectrum")
ax.legend()
fig.tight_layout()
out = "demos/output/06_transmon_mapping.png"
fig.savefig(out, dpi=160)
print(f"wrote {out}")

# 2.-4. the working point used by the interference maps
flux_dc = flux_for_qubit_frequency(tp, TWO_PI * 2.62e9)
print(f"flux bias for a 2.62 GHz qubit: {flux_dc:.5f} flux quanta")
work = replace(tp, flux_dc=flux_dc)
lo, hi = 0.0, 0.25
for _ in range(60):
    mid = 0.5 * (lo + hi)
    if latching_amplitude(replace(work, flux_sq=mid)) < TWO_PI * 100e6:
        lo = mid
    else:
        hi = mid
print(f"square-pulse amplitude for delta/2pi = 100 MHz: {0.5 * (lo + hi):.5f} flux quanta")
n_r = (TWO_PI * 20e6 / (2 * tp.g0)) ** 2
print(f"photon number for g/2pi = 20 MHz: n_r = {n_r:.4f} "
      f"(g = 2 g0 sqrt(n_r) = {drive_coupling(replace(tp, n_r=n_r)) / TWO_PI / 1e6:.1f} MHz)")
