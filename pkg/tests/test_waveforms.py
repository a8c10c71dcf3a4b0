import numpy as np
import pytest
from scipy.integrate import quad

from latchsim.waveforms import (
    ModulationWaveform,
    WaveformKind,
    evaluate,
    phase_integral,
)

TWO_PI = 2.0 * np.pi


def random_waveform(rng, kind):
    delta = rng.uniform(1e6, 1e9)
    omega = rng.uniform(1e6, 1e9)
    phase = rng.uniform(0.0, TWO_PI)
    ramp = rng.uniform(0.0, 0.9 * np.pi / omega) if kind is WaveformKind.RAMPED_SQUARE else 0.0
    return ModulationWaveform(kind, delta, omega, phase, ramp)


def switch_breakpoints(w, t0, t1):
    """Switch-window edges inside (t0, t1) where the integrand is non-smooth."""
    if w.kind is WaveformKind.SINE:
        return []
    pts = []
    half = w.ramp / 2.0
    k0 = int(np.floor((w.omega * t0 + w.phase - np.pi / 2) / np.pi)) - 1
    k1 = int(np.ceil((w.omega * t1 + w.phase - np.pi / 2) / np.pi)) + 1
    for k in range(k0, k1 + 1):
        tsw = (np.pi / 2 + k * np.pi - w.phase) / w.omega
        for tb in ((tsw - half, tsw + half) if half > 0 else (tsw,)):
            if t0 < tb < t1:
                pts.append(tb)
    return sorted(pts)


def quadrature_integral(w, t0, t1):
    """Adaptive quadrature split at the breakpoints (independent oracle)."""
    pts = [t0] + switch_breakpoints(w, t0, t1) + [t1]
    return sum(
        quad(lambda x: evaluate(w, x), a, b, limit=400)[0]
        for a, b in zip(pts[:-1], pts[1:])
    )


def test_square_spec_values():
    w = ModulationWaveform(WaveformKind.SQUARE, TWO_PI * 100e6, TWO_PI * 50e6)
    assert evaluate(w, 0.0) == TWO_PI * 100e6  # sgn(cos 0) = +1
    assert evaluate(w, np.pi / w.omega) == -w.delta  # second half-period
    # sgn(0) = +1 at the switching instant
    assert evaluate(w, np.pi / (2 * w.omega)) == w.delta


def test_sine_zero_at_quarter_period():
    w = ModulationWaveform(WaveformKind.SINE, 123.0, 7.0)
    assert abs(evaluate(w, np.pi / (2 * 7.0))) < 1e-12 * 123.0


def test_ramped_square_midpoint_zero():
    w = ModulationWaveform(WaveformKind.RAMPED_SQUARE, 1.0, 1.0, 0.0, 0.3)
    assert abs(evaluate(w, np.pi / 2)) < 1e-12


@pytest.mark.parametrize("kind", list(WaveformKind))
def test_periodicity(kind, rng):
    for _ in range(10):
        w = random_waveform(rng, kind)
        t = rng.uniform(-5 * w.period, 5 * w.period, 1000)
        np.testing.assert_allclose(
            evaluate(w, t), evaluate(w, t + w.period), rtol=0, atol=1e-12 * w.delta
        )


@pytest.mark.parametrize("kind", list(WaveformKind))
def test_zero_mean_over_period(kind, rng):
    for _ in range(5):
        w = random_waveform(rng, kind)
        val = quadrature_integral(w, 0.0, w.period)
        assert abs(val) <= 1e-10 * w.delta * w.period


@pytest.mark.parametrize("kind", list(WaveformKind))
def test_phase_integral_matches_quadrature(kind, rng):
    for _ in range(8):
        w = random_waveform(rng, kind)
        t0, t1 = np.sort(rng.uniform(-2 * w.period, 2 * w.period, 2))
        ref = quadrature_integral(w, t0, t1)
        got = phase_integral(w, t0, t1)
        assert abs(got - ref) <= 1e-9 * max(abs(ref), w.delta * w.period)


def test_phase_integral_square_closed_forms():
    w = ModulationWaveform(WaveformKind.SQUARE, TWO_PI * 100e6, TWO_PI * 50e6)
    assert abs(phase_integral(w, 0.0, w.period)) < 1e-12
    half = np.pi / (2 * w.omega)
    expected = w.delta * np.pi / w.omega
    assert np.isclose(phase_integral(w, -half, half), expected, rtol=1e-12)


def test_phase_integral_sine_full_period():
    w = ModulationWaveform(WaveformKind.SINE, TWO_PI * 70e6, TWO_PI * 31e6, phase=1.1)
    assert abs(phase_integral(w, 0.0, w.period)) < 1e-9


@pytest.mark.parametrize("kind", list(WaveformKind))
def test_phase_integral_additivity(kind, rng):
    for _ in range(20):
        w = random_waveform(rng, kind)
        a, b, c = np.sort(rng.uniform(-2 * w.period, 2 * w.period, 3))
        lhs = phase_integral(w, a, c)
        rhs = phase_integral(w, a, b) + phase_integral(w, b, c)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_phase_integral_rejects_reversed_interval():
    w = ModulationWaveform(WaveformKind.SQUARE, 1.0, 1.0)
    with pytest.raises(ValueError):
        phase_integral(w, 1.0, 0.0)


def test_ramped_square_converges_to_square(rng):
    wq = ModulationWaveform(WaveformKind.SQUARE, 1.0, 1.0, 1.234)
    for ramp in (1e-3, 1e-6):
        wr = ModulationWaveform(WaveformKind.RAMPED_SQUARE, 1.0, 1.0, 1.234, ramp)
        t = np.linspace(0.0, TWO_PI, 1001)
        v = np.mod(t + 1.234 - np.pi / 2, np.pi)
        outside = np.minimum(v, np.pi - v) > ramp  # away from the switch windows
        assert np.array_equal(evaluate(wr, t)[outside], evaluate(wq, t)[outside])


def test_waveform_validation():
    with pytest.raises(ValueError):
        ModulationWaveform(WaveformKind.SQUARE, 1.0, 0.0)
    with pytest.raises(ValueError):
        ModulationWaveform(WaveformKind.SQUARE, -1.0, 1.0)
    with pytest.raises(ValueError):
        ModulationWaveform(WaveformKind.RAMPED_SQUARE, 1.0, 1.0, 0.0, ramp=4.0)
