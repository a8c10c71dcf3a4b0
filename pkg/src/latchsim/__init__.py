"""Stueckelberg interference of a qubit under periodic latching modulation.

Three mutually cross-checking solver layers for a driven two-level
system whose detuning is modulated by a square wave (latching), a
sinusoid, or a finite-ramp square wave:

* :mod:`latchsim.latch_model` -- exact adiabatic-impulse algebra for
  ideal square waves (propagators, populations, resonance curves);
* :mod:`latchsim.rwa` -- rotating-wave sideband theory with closed-form
  sideband amplitudes and the analytic dissipative steady state;
* :mod:`latchsim.dynamics` -- Lindblad-Floquet reference solver for the
  two-level system and the five-level transmon ladder, with the
  dispersive-readout observable.

:mod:`latchsim.transmon` maps circuit parameters to the effective model,
:mod:`latchsim.sudden` bounds the error of treating switch ramps as
instantaneous, and :mod:`latchsim.cli` drives parameter sweeps from
config files.
"""

from .waveforms import ModulationWaveform, WaveformKind, evaluate, phase_integral
from .latch_model import (
    DegenerateCrossingError,
    LatchFrame,
    PeriodUnitary,
    QubitParams,
    ResonanceFamily,
    StartLatch,
    averaged_population,
    latch_eigenstates,
    latch_frame,
    latch_spectrum,
    n_period_population,
    period_unitary,
    period_unitary_matrix,
    resonance_curves,
    single_period_population,
    swap_latches,
)
from .rwa import (
    SidebandSet,
    adaptive_m_max,
    bessel_j,
    fft_sidebands,
    resonant_sideband_population,
    rwa_linewidth,
    rwa_population,
    rwa_valid,
    sideband_amplitude,
    sideband_set,
    square_sideband,
)
from .dynamics import (
    ConvergenceError,
    DensityMatrix,
    MultilevelModel,
    SteadyStateError,
    dispersive_shift,
    dissipative_spectrum,
    hamiltonian_at,
    lindblad_generator,
    period_map,
    steady_state,
    thermal_occupation,
    transmon_ladder_model,
    two_level_model,
    undriven_populations,
)
from .transmon import (
    TransmonParams,
    charge_basis_levels,
    drive_coupling,
    effective_josephson_energy,
    fit_flux_spectrum,
    flux_for_qubit_frequency,
    latching_amplitude,
    latching_amplitude_sign,
    phi_zpf,
    plasma_frequency,
    qubit_frequency,
    transmon_level_freqs,
)
from .sudden import RampSide, RampSpec, ramp_transition_oracle, sudden_error, sudden_error_max
from .grids import GridSpec, SpectrumGrid, grid_from_json, grid_to_csv, grid_to_json

__version__ = "0.1.0"
