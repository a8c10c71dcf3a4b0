"""Sideband amplitudes of the effective transverse drive, square vs sine.

In the frame co-rotating with the modulation, the drive acquires the
periodic factor A(t) = exp[i * integral(f)] whose Fourier coefficients
D_m set the strength of the m-photon-assisted resonance at
nu = -m * Omega.  For sinusoidal modulation D_m = J_m(delta/Omega); for
latching modulation there is a closed form with two signature features:

* every sideband crosses |D_m| = 1/2 exactly at delta/Omega = |m|
  (the "equal-amplitude" property; Bessel maxima instead decrease with m);
* as delta/Omega -> 0 (modulation much faster than its amplitude) all
  m != 0 sidebands die and the carrier saturates at 1 (motional
  averaging).

The closed forms are verified against direct quadrature of A(t).
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from latchsim import fft_sidebands, sideband_amplitude
from latchsim.waveforms import ModulationWaveform, WaveformKind

ratios = np.linspace(0.01, 8.0, 800)
orders = (0, 1, 2, 3)

fig, axes = plt.subplots(1, 2, figsize=(11, 4.2), sharey=True)
for ax, kind in zip(axes, (WaveformKind.SQUARE, WaveformKind.SINE)):
    for m in orders:
        vals = [sideband_amplitude(kind, m, x) for x in ratios]
        ax.plot(ratios, vals, label=f"m = {m}")
    if kind is WaveformKind.SQUARE:
        ax.scatter(orders[1:], [0.5] * 3, marker="o", color="k", zorder=5,
                   label="|D| = 1/2 at ratio = m")
    ax.axhline(0.0, color="0.8", lw=0.7)
    ax.set_title(f"{kind.value} modulation")
    ax.set_xlabel("ratio  $\\delta/\\Omega$")
    ax.legend()
axes[0].set_ylabel("sideband amplitude $D_m$")
fig.tight_layout()
out = "demos/output/02_sideband_amplitudes.png"
fig.savefig(out, dpi=160)
print(f"wrote {out}")

# cross-check the closed forms against the quadrature of A(t)
om = 2 * np.pi * 50e6
for kind in (WaveformKind.SQUARE, WaveformKind.SINE):
    worst = 0.0
    for ratio in (0.5, 2.0, 3.3):
        sb = fft_sidebands(ModulationWaveform(kind, ratio * om, om), 8)
        worst = max(worst, max(abs(sb.amp(m) - sideband_amplitude(kind, m, ratio))
                               for m in range(-8, 9)))
    print(f"{kind.value}: closed form vs quadrature, worst |difference| = {worst:.2e}")
