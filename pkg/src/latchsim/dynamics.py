"""Dissipative reference solver: Lindblad dynamics and the Floquet steady state.

This is the layer the analytic models are checked against.  The
modulated, driven system (two-level, or a weakly anharmonic five-level
ladder with the drive restricted to the 0-1 transition) evolves under a
Lindblad master equation with energy relaxation, thermal excitation and
pure dephasing.  Because the drive is periodic, the density matrix
obeys a linear one-period map M (a Floquet superoperator); with
Gamma_1 > 0 its eigenvalue-1 fixed point is the unique periodic steady
state, and time-averaging that fixed point over one period gives the
observable populations.  For square-wave modulation the generator is
piecewise constant, so M is an exact product of superoperator
exponentials; smooth waveforms use fourth-order commutator-free Magnus
stepping with step-doubling control.

The five-level ladder feeds the dispersive-readout observable: each
populated transmon level pulls the resonator frequency by its
state-dependent dispersive shift chi_i, and the reported signal is the
population-weighted shift referenced to the undriven (thermal) value.

Conventions: basis index = excitation number (ground first);
vectorization is column-stacking, vec(A rho B) = kron(B.T, A) vec(rho);
all frequencies and rates angular (rad/s).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import hbar as HBAR, k as KBOLTZ
from scipy.linalg import expm

from ._integrate import cf4_product, cf4_step_chain
from .grids import GridSpec, SpectrumGrid
from .latch_model import QubitParams
from .transmon import TransmonParams, transmon_level_freqs
from .waveforms import ModulationWaveform, WaveformKind, evaluate

#: Max-norm change under step doubling accepted for smooth-waveform maps.
STEP_DOUBLING_TOL = 1e-8

_MAX_STEPS = 1 << 15


class ConvergenceError(RuntimeError):
    """Step-doubling failed to reach the requested tolerance."""


class SteadyStateError(RuntimeError):
    """No unique eigenvalue-1 fixed point of the period map."""


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix (Hermitian, unit trace, positive to tolerance)."""

    dim: int
    elements: np.ndarray = field(repr=False)

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=complex)
        if el.shape != (self.dim, self.dim):
            raise ValueError("elements must be dim x dim")
        if np.max(np.abs(el - el.conj().T)) > 1e-10:
            raise ValueError("density matrix not Hermitian within 1e-10")
        if abs(np.trace(el).real - 1.0) > 1e-10 or abs(np.trace(el).imag) > 1e-10:
            raise ValueError("density matrix trace differs from 1 by more than 1e-10")
        if np.min(np.linalg.eigvalsh(0.5 * (el + el.conj().T))) < -1e-8:
            raise ValueError("density matrix has eigenvalue below -1e-8")
        object.__setattr__(self, "elements", el)

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.elements))


@dataclass(frozen=True)
class MultilevelModel:
    """Ladder model: level frequencies, 0-1 drive, and dissipation rates.

    ``level_freqs[i]`` are the bare level frequencies (rad/s, ground at
    0); ``base_rates[i-1]`` is the zero-temperature downward rate of the
    (i-1) <-> i transition (harmonic matrix elements give i * Gamma_1);
    ``nbars[i-1]`` the thermal occupation of that transition; dephasing
    acts through the number operator so that two levels reproduce the
    sigma_z form at rate gamma_phi.
    """

    n_levels: int
    level_freqs: np.ndarray
    drive_coupling: float
    base_rates: np.ndarray
    nbars: np.ndarray
    gamma_phi: float

    def __post_init__(self):
        freqs = np.asarray(self.level_freqs, dtype=float)
        rates = np.asarray(self.base_rates, dtype=float)
        nbars = np.asarray(self.nbars, dtype=float)
        if self.n_levels not in (2, 5):
            raise ValueError("supported dimensions are 2 and 5")
        if freqs.shape != (self.n_levels,):
            raise ValueError("level_freqs must have length n_levels")
        if rates.shape != (self.n_levels - 1,) or nbars.shape != (self.n_levels - 1,):
            raise ValueError("need one rate and one nbar per ladder transition")
        if np.any(rates < 0.0) or np.any(nbars < 0.0) or self.gamma_phi < 0.0:
            raise ValueError("rates must be non-negative")
        object.__setattr__(self, "level_freqs", freqs)
        object.__setattr__(self, "base_rates", rates)
        object.__setattr__(self, "nbars", nbars)


def thermal_occupation(omega_transition: float, t_bath: float) -> float:
    """Bose factor 1/(exp(hbar w / kB T) - 1); zero for a cold bath."""
    if t_bath <= 0.0 or omega_transition <= 0.0:
        return 0.0
    return float(1.0 / np.expm1(HBAR * omega_transition / (KBOLTZ * t_bath)))


def two_level_model(q: QubitParams) -> MultilevelModel:
    """Two-level model with the thermal factor taken at the lab frequency omega0."""
    nbar = thermal_occupation(q.omega0, q.t_bath)
    return MultilevelModel(
        n_levels=2,
        level_freqs=np.array([0.0, q.omega0]),
        drive_coupling=q.g,
        base_rates=np.array([q.gamma1]),
        nbars=np.array([nbar]),
        gamma_phi=q.gamma_phi,
    )


def transmon_ladder_model(q: QubitParams, e_c: float, n_levels: int = 5) -> MultilevelModel:
    """Weakly anharmonic ladder w_i = i*[w0 + (1-i) E_C / 2] (angular E_C).

    Downward rate of transition (i-1) <-> i is i * Gamma_1 (harmonic
    sqrt(i) matrix elements); its thermal occupation is evaluated at the
    static transition frequency w0 - (i-1) E_C.
    """
    i = np.arange(n_levels, dtype=float)
    freqs = i * (q.omega0 + (1.0 - i) * e_c / 2.0)
    trans = np.arange(1, n_levels, dtype=float)
    base = trans * q.gamma1
    nbars = np.array(
        [thermal_occupation(q.omega0 - (k - 1.0) * e_c, q.t_bath) for k in trans]
    )
    return MultilevelModel(n_levels, freqs, q.g, base, nbars, q.gamma_phi)


def hamiltonian_at(model: MultilevelModel, q: QubitParams, w: ModulationWaveform,
                   t: float) -> np.ndarray:
    """Rotating-frame Hamiltonian (rad/s) at time t.

    Two levels: (1/2)[nu + f(t)] sigma_z + (g/2) sigma_x with
    sigma_z = |1><1| - |0><0|.  Five levels: diagonal
    w_i - i*omega + i*f(t) (each excitation rotates at the drive
    frequency and rides the modulation) with the drive g/2 on the
    |0><1| + h.c. block only.
    """
    f = evaluate(w, t)
    g = model.drive_coupling
    if model.n_levels == 2:
        nu = q.nu
        return np.array(
            [[-0.5 * (nu + f), 0.5 * g], [0.5 * g, 0.5 * (nu + f)]], dtype=complex
        )
    i = np.arange(model.n_levels, dtype=float)
    h = np.diag(model.level_freqs - i * q.omega + i * f).astype(complex)
    h[0, 1] += 0.5 * g
    h[1, 0] += 0.5 * g
    return h


def _collapse_operators(model: MultilevelModel):
    """(operator, rate) pairs: ladder relaxation/excitation plus number dephasing."""
    n = model.n_levels
    ops = []
    for i in range(1, n):
        down = np.zeros((n, n), dtype=complex)
        down[i - 1, i] = 1.0
        rate = model.base_rates[i - 1]
        nbar = model.nbars[i - 1]
        if rate > 0.0:
            ops.append((down, rate * (nbar + 1.0)))
            if nbar > 0.0:
                ops.append((down.conj().T, rate * nbar))
    if model.gamma_phi > 0.0:
        num = np.diag(np.arange(n, dtype=complex))
        # D[N] at rate 2*gamma_phi == -gamma_phi [N, [N, rho]]; reduces to
        # the sigma_z double commutator at rate gamma_phi/4 for two levels.
        ops.append((num, 2.0 * model.gamma_phi))
    return ops


def lindblad_generator(model: MultilevelModel, h: np.ndarray) -> np.ndarray:
    """Superoperator L with drho/dt = L vec(rho) (column-stacking convention)."""
    n = model.n_levels
    if h.shape != (n, n):
        raise ValueError("Hamiltonian dimension does not match the model")
    eye = np.eye(n, dtype=complex)
    gen = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for op, rate in _collapse_operators(model):
        anti = op.conj().T @ op
        gen += rate * (
            np.kron(op.conj(), op)
            - 0.5 * np.kron(eye, anti)
            - 0.5 * np.kron(anti.T, eye)
        )
    return gen


def _square_segments(w: ModulationWaveform, t0: float):
    """Constant-f segments of one square-wave period starting at t0."""
    period = w.period
    t1 = t0 + period
    # switch instants: omega*t + phase = pi/2 + k*pi
    k0 = int(np.floor((w.omega * t0 + w.phase - np.pi / 2.0) / np.pi))
    edges = [t0]
    for k in range(k0, k0 + 4):
        tsw = (np.pi / 2.0 + k * np.pi - w.phase) / w.omega
        if t0 < tsw < t1:
            edges.append(tsw)
    edges.append(t1)
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b - a > 0.0]


def period_map(model: MultilevelModel, q: QubitParams, w: ModulationWaveform,
               t0: float = 0.0) -> np.ndarray:
    """One-period Floquet superoperator M: vec(rho(t0)) -> vec(rho(t0 + T)).

    Square waves: exact ordered product of one exponential per constant
    latch segment.  Smooth waveforms: CF4 Magnus stepping, doubling the
    step count until the map changes by less than 1e-8 in max norm
    (raises :class:`ConvergenceError` with the achieved defect
    otherwise).
    """
    if w.kind is WaveformKind.SQUARE:
        out = None
        for a, b in _square_segments(w, t0):
            gen = lindblad_generator(model, hamiltonian_at(model, q, w, 0.5 * (a + b)))
            seg = expm(gen * (b - a))
            out = seg if out is None else seg @ out
        return out
    gen = lambda t: lindblad_generator(model, hamiltonian_at(model, q, w, t))
    t1 = t0 + w.period
    n = 64
    prev = cf4_product(gen, t0, t1, n)
    while n <= _MAX_STEPS:
        n *= 2
        cur = cf4_product(gen, t0, t1, n)
        defect = float(np.max(np.abs(cur - prev)))
        if defect <= STEP_DOUBLING_TOL:
            return cur
        prev = cur
    raise ConvergenceError(
        f"period map not converged at {n} steps (defect {defect:.3e})"
    )


def _fixed_point(m_map: np.ndarray, dim: int) -> np.ndarray:
    """Trace-one Hermitian fixed point of the period map; unique for Gamma_1 > 0."""
    evals, evecs = np.linalg.eig(m_map)
    order = np.argsort(np.abs(evals - 1.0))
    if abs(evals[order[0]] - 1.0) > 1e-6:
        raise SteadyStateError(
            f"no eigenvalue-1 fixed point (closest {evals[order[0]]:.6g})"
        )
    if len(order) > 1 and abs(evals[order[1]] - 1.0) < 1e-10:
        raise SteadyStateError("degenerate eigenvalue-1 subspace")
    rho = evecs[:, order[0]].reshape(dim, dim, order="F")
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise SteadyStateError("fixed point has vanishing trace")
    return rho / tr


def steady_state(model: MultilevelModel, q: QubitParams, w: ModulationWaveform,
                 t0: float = 0.0):
    """Periodic steady state and its time-averaged level populations.

    Returns ``(rho, pops)`` where ``rho`` is the fixed point of the
    period map at phase t0 and ``pops[i]`` the average of <i|rho(t)|i>
    over one period.  Time averages are invariant under the choice of
    t0.  Requires Gamma_1 > 0 for uniqueness.
    """
    if q.gamma1 <= 0.0:
        raise ValueError("steady_state requires gamma1 > 0")
    dim = model.n_levels
    if w.kind is WaveformKind.SQUARE:
        segments = []
        for a, b in _square_segments(w, t0):
            gen = lindblad_generator(model, hamiltonian_at(model, q, w, 0.5 * (a + b)))
            segments.append((b - a, *_expm_with_integral(gen, b - a)))
        m_map = None
        for _, seg, _ in segments:
            m_map = seg if m_map is None else seg @ m_map
        rho = _fixed_point(m_map, dim)
        vec = rho.reshape(-1, order="F")
        integral = np.zeros_like(vec)
        for _, seg, phi in segments:
            integral = integral + phi @ vec
            vec = seg @ vec
        avg = integral / w.period
        pops = np.real(avg.reshape(dim, dim, order="F").diagonal())
        return DensityMatrix(dim, rho), pops

    gen = lambda t: lindblad_generator(model, hamiltonian_at(model, q, w, t))
    t1 = t0 + w.period
    n = 64
    prev_map, prev_pops = _smooth_map_and_average(model, gen, t0, t1, n)
    while n <= _MAX_STEPS:
        n *= 2
        cur_map, cur_pops = _smooth_map_and_average(model, gen, t0, t1, n)
        defect = max(
            float(np.max(np.abs(cur_map - prev_map))),
            float(np.max(np.abs(cur_pops - prev_pops))),
        )
        if defect <= STEP_DOUBLING_TOL:
            rho = _fixed_point(cur_map, dim)
            _, pops = _smooth_average_for_rho(model, gen, t0, t1, n, rho)
            return DensityMatrix(dim, rho), pops
        prev_map, prev_pops = cur_map, cur_pops
    raise ConvergenceError(f"steady state not converged at {n} steps")


def _expm_with_integral(gen: np.ndarray, tau: float):
    """(exp(G tau), integral_0^tau exp(G s) ds) via one augmented exponential."""
    d2 = gen.shape[0]
    aug = np.zeros((2 * d2, 2 * d2), dtype=complex)
    aug[:d2, :d2] = gen
    aug[:d2, d2:] = np.eye(d2)
    e = expm(aug * tau)
    return e[:d2, :d2], e[:d2, d2:]


def _smooth_map_and_average(model, gen, t0, t1, n_steps):
    """Period map plus the period-averaged populations of its own fixed point."""
    chain = list(cf4_step_chain(gen, t0, t1, n_steps))
    m_map = chain[-1][1]
    try:
        rho = _fixed_point(m_map, model.n_levels)
    except SteadyStateError:
        # propagate anyway; caller's doubling loop may still converge
        rho = np.eye(model.n_levels, dtype=complex) / model.n_levels
    _, pops = _average_over_chain(model, chain, rho)
    return m_map, pops


def _smooth_average_for_rho(model, gen, t0, t1, n_steps, rho):
    chain = list(cf4_step_chain(gen, t0, t1, n_steps))
    return _average_over_chain(model, chain, rho)


def _average_over_chain(model, chain, rho):
    """Composite-Simpson average of the level populations along a step chain."""
    dim = model.n_levels
    vec0 = rho.reshape(-1, order="F")
    ts = np.array([t for t, _ in chain])
    pops_t = np.empty((len(chain), dim))
    for k, (_, acc) in enumerate(chain):
        rk = (acc @ vec0).reshape(dim, dim, order="F")
        pops_t[k] = np.real(np.diag(rk))
    n = len(chain) - 1
    weights = np.ones(n + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    h = (ts[-1] - ts[0]) / n
    avg = (h / 3.0) * weights @ pops_t / (ts[-1] - ts[0])
    return rho, avg


def dispersive_shift(tp: TransmonParams, populations) -> float:
    """Population-weighted resonator pull Delta w_r = sum_i P_i chi_i (rad/s).

    chi_i = g0^2 [ i / (w_i - w_{i-1} - w_r) - (i+1) / (w_{i+1} - w_i - w_r) ],
    with the ladder extended by one level so chi at the top is defined.
    Raises when a ladder transition collides with the resonator
    (denominator below 1e-6 * w_r).
    """
    pops = np.asarray(populations, dtype=float)
    if abs(pops.sum() - 1.0) > 1e-8:
        raise ValueError("populations must sum to 1")
    n = pops.size
    freqs = transmon_level_freqs(tp, n + 1)
    chis = np.array([_chi(tp, freqs, i) for i in range(n)])
    return float(np.dot(pops, chis))


def _chi(tp: TransmonParams, freqs: np.ndarray, i: int) -> float:
    g0sq = tp.g0**2
    chi = 0.0
    if i > 0:
        down = freqs[i] - freqs[i - 1] - tp.omega_r
        _check_collision(down, tp.omega_r)
        chi += g0sq * i / down
    up = freqs[i + 1] - freqs[i] - tp.omega_r
    _check_collision(up, tp.omega_r)
    chi -= g0sq * (i + 1) / up
    return chi


def _check_collision(denom: float, omega_r: float):
    if abs(denom) < 1e-6 * omega_r:
        raise ValueError("ladder transition degenerate with the resonator")


def undriven_populations(model: MultilevelModel, q: QubitParams) -> np.ndarray:
    """Thermal steady-state populations of the ladder without the drive.

    Diagonal dynamics make the result modulation-independent; the dummy
    period is tied to the relaxation time so the period exponential stays
    well conditioned.
    """
    bg_model = replace(model, drive_coupling=0.0)
    rate = max(float(np.max(model.base_rates)), model.gamma_phi, 1.0)
    w = ModulationWaveform(WaveformKind.SQUARE, 0.0, 100.0 * rate)
    _, pops = steady_state(bg_model, q, w)
    return pops


def dissipative_spectrum(model: MultilevelModel, q: QubitParams,
                         w: ModulationWaveform, grid: GridSpec,
                         observable: str = "population",
                         tp: TransmonParams | None = None,
                         threads: int = 1) -> SpectrumGrid:
    """Steady-state observable over a (nu, Omega) or (nu, delta) grid.

    ``observable='population'`` emits the time-averaged first excited
    state population; ``'dispersive_shift_hz'`` (five-level, needs
    ``tp``) emits the dispersive shift referenced to the undriven
    transmon, in Hz.  Failed cells become NaN and are counted in the
    metadata.  Cells are independent pure evaluations; any degree of
    parallelism reproduces the sequential result bit for bit.
    """
    if observable == "dispersive_shift_hz":
        if tp is None:
            raise ValueError("dispersive_shift_hz requires TransmonParams")
        background = dispersive_shift(tp, undriven_populations(model, q))
    else:
        background = 0.0
    jobs = [
        (model, q, w, grid, j, observable, tp, background)
        for j in range(grid.y.size)
    ]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_spectrum_row, jobs))
    else:
        rows = [_spectrum_row(job) for job in jobs]
    values = np.vstack([r[0] for r in rows])
    nan_count = int(sum(r[1] for r in rows))
    layer = "lindblad2" if model.n_levels == 2 else "lindblad5"
    meta = {
        "layer": layer,
        "nan_cells": nan_count,
        "waveform": w.kind.value,
        "qubit": {
            "omega0_hz": q.omega0 / (2 * np.pi),
            "g_hz": q.g / (2 * np.pi),
            "gamma1_hz": q.gamma1 / (2 * np.pi),
            "gamma_phi_hz": q.gamma_phi / (2 * np.pi),
            "t_bath_k": q.t_bath,
        },
        "fixed": grid.fixed_meta(),
    }
    return SpectrumGrid(
        x_hz=grid.nu / (2 * np.pi),
        y_hz=grid.y / (2 * np.pi),
        values=values,
        observable=observable,
        layer=layer,
        meta=meta,
    )


def _spectrum_row(job):
    model, q, w, grid, j, observable, tp, background = job
    delta, omega_mod = grid.resolve(grid.y[j])
    row = np.empty(grid.nu.size)
    failures = 0
    for i, nu in enumerate(grid.nu):
        qp = replace(q, omega=q.omega0 - nu)
        wp = ModulationWaveform(w.kind, delta, omega_mod, w.phase, w.ramp)
        try:
            _, pops = steady_state(model, qp, wp)
            if observable == "population":
                row[i] = pops[1]
            else:
                row[i] = (dispersive_shift(tp, pops) - background) / (2.0 * np.pi)
        except (ConvergenceError, SteadyStateError, ValueError):
            row[i] = np.nan
            failures += 1
    return row, failures
