"""Stueckelberg interference map from the exact adiabatic-impulse algebra.

Sweeps the drive detuning nu and the latching frequency Omega at fixed
modulation amplitude delta/2pi = 100 MHz and plots the phase-averaged
excited-state population, with the analytic resonance families overlaid:

* sum condition  (phi_l + phi_r = m pi)  -- explains ridges at |nu| > delta
* difference condition (phi_l - phi_r = m pi) -- ridges at |nu| < delta
* antiresonance  (phi_l = n pi)          -- coherent destruction of tunneling

The map is purely analytic (no differential equations), so the full
321 x 161 grid takes a few seconds.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from latchsim import (
    GridSpec,
    QubitParams,
    ResonanceFamily,
    latch_spectrum,
    resonance_curves,
)

TWO_PI = 2 * np.pi

q = QubitParams(omega0=TWO_PI * 2.62e9, omega=TWO_PI * 2.62e9, g=TWO_PI * 20e6)
delta = TWO_PI * 100e6

grid = GridSpec(
    nu=TWO_PI * np.linspace(-300e6, 300e6, 321),
    y_kind="omega_mod",
    y=TWO_PI * np.linspace(5e6, 120e6, 161),
    delta=delta,
)
print("filling the adiabatic-impulse map ...")
sg = latch_spectrum(q, grid)

fig, ax = plt.subplots(figsize=(9, 6))
mesh = ax.pcolormesh(sg.x_hz / 1e6, sg.y_hz / 1e6, sg.values,
                     cmap="inferno", shading="auto", vmin=0, vmax=0.5)
fig.colorbar(mesh, ax=ax, label="phase-averaged excited population")

styles = {
    ResonanceFamily.SUM_RES: dict(color="0.8", lw=0.9, label="sum condition"),
    ResonanceFamily.DIFF_RES: dict(color="gold", lw=0.9, label="difference condition"),
    ResonanceFamily.ANTI_RES: dict(color="red", lw=0.8, ls=":", label="antiresonance"),
}
for family, style in styles.items():
    label = style.pop("label")
    indices = range(1, 25) if family is not ResonanceFamily.DIFF_RES else range(1, 10)
    for idx in indices:
        pts = resonance_curves(q, delta, family, idx, grid.y)
        if pts.shape[0] == 0:
            continue
        for sign in (1, -1):
            sel = pts[pts[:, 1] * sign > 0]
            if sel.shape[0] < 2:
                continue
            ax.plot(sel[:, 1] / TWO_PI / 1e6, sel[:, 0] / TWO_PI / 1e6,
                    **style, label=label)
            label = None

ax.set_xlim(-300, 300)
ax.set_ylim(5, 120)
ax.set_xlabel("detuning  $\\nu/2\\pi$  (MHz)")
ax.set_ylabel("latching frequency  $\\Omega/2\\pi$  (MHz)")
ax.set_title("Latching-modulation interference map "
             "($\\delta/2\\pi$ = 100 MHz, $g/2\\pi$ = 20 MHz)")
ax.legend(loc="upper right", framealpha=0.9)
fig.tight_layout()
out = "demos/output/01_interference_map.png"
fig.savefig(out, dpi=160)
print(f"wrote {out}")
