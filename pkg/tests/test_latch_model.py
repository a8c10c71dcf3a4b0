import numpy as np
import pytest
from scipy.linalg import expm

from latchsim import (
    DegenerateCrossingError,
    GridSpec,
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
from conftest import DELTA, G, OMEGA0, TWO_PI, device_qubit, random_working_point

SZ = np.diag([-1.0, 1.0])  # ground-first ordering
SX = np.array([[0.0, 1.0], [1.0, 0.0]])


def lab_h(nu_eff, g):
    return 0.5 * nu_eff * SZ + 0.5 * g * SX


def brute_period_matrix(q, delta, omega_mod, start="r"):
    """Product of exact segment propagators, expressed in the (plus, minus)
    eigenbasis of the starting latch -- the independent oracle for the
    adiabatic-impulse propagator."""
    period = TWO_PI / omega_mod
    h_start = lab_h(q.nu + delta if start == "r" else q.nu - delta, q.g)
    h_other = lab_h(q.nu - delta if start == "r" else q.nu + delta, q.g)
    u = (
        expm(-1j * h_start * period / 4)
        @ expm(-1j * h_other * period / 2)
        @ expm(-1j * h_start * period / 4)
    )
    pm, pp = latch_eigenstates(q, delta, start)
    basis = np.column_stack([pp, pm])
    return basis.conj().T @ u @ basis


def qubit_at(nu, g):
    return QubitParams(omega0=OMEGA0, omega=OMEGA0 - nu, g=g)


class TestLatchFrame:
    def test_symmetric_point_spec_value(self):
        # nu = 0: p_s = delta^2 / (delta^2 + g^2)
        lf = latch_frame(qubit_at(0.0, G), DELTA, TWO_PI * 50e6)
        assert abs(lf.p_s - 100.0**2 / (100.0**2 + 20.0**2)) < 1e-12

    def test_zero_delta_identical_latches(self):
        lf = latch_frame(qubit_at(TWO_PI * 37e6, G), 0.0, TWO_PI * 50e6)
        assert lf.p_s == 0.0

    def test_small_g_inside_crossing_saturates(self):
        # |nu| < delta: p_s -> 1 as g -> 0+
        prev = 0.0
        for g_hz in (1e6, 1e4, 1e2):
            lf = latch_frame(qubit_at(TWO_PI * 30e6, TWO_PI * g_hz), DELTA, TWO_PI * 50e6)
            assert lf.p_s > prev
            prev = lf.p_s
        assert prev > 1.0 - 1e-6

    def test_degenerate_crossing_error(self):
        with pytest.raises(DegenerateCrossingError):
            latch_frame(qubit_at(TWO_PI * 30e6, 0.0), DELTA, TWO_PI * 50e6)
        # |nu| > delta with g = 0 is fine (no crossing traversed)
        lf = latch_frame(qubit_at(TWO_PI * 150e6, 0.0), DELTA, TWO_PI * 50e6)
        assert lf.p_s == 0.0

    def test_p_s_matches_eigenvector_overlap(self, rng):
        for _ in range(50):
            nu, delta, g, om = random_working_point(rng)
            q = qubit_at(nu, g)
            lf = latch_frame(q, delta, om)
            _, pp_l = latch_eigenstates(q, delta, "l")
            pm_r, _ = latch_eigenstates(q, delta, "r")
            assert abs(lf.p_s - abs(np.vdot(pp_l, pm_r)) ** 2) < 1e-12

    def test_p_s_independent_of_omega(self, rng):
        nu, delta, g, _ = random_working_point(rng)
        q = qubit_at(nu, g)
        vals = {latch_frame(q, delta, om).p_s for om in TWO_PI * np.array([5e6, 50e6, 500e6])}
        assert len(vals) == 1

    def test_eigenstates_diagonalize_latch(self, rng):
        for _ in range(20):
            nu, delta, g, om = random_working_point(rng)
            q = qubit_at(nu, g)
            lf = latch_frame(q, delta, om)
            pm, pp = latch_eigenstates(q, delta, "r")
            h = lab_h(q.nu + delta, g)
            np.testing.assert_allclose(h @ pm, -0.5 * lf.eps_r * pm, atol=1e-6 * lf.eps_r)
            np.testing.assert_allclose(h @ pp, +0.5 * lf.eps_r * pp, atol=1e-6 * lf.eps_r)

    def test_lz_limit_large_delta(self):
        # p_s -> 1 monotonically once delta dominates |nu| and g
        q = qubit_at(TWO_PI * 50e6, G)
        ps = [latch_frame(q, TWO_PI * d, TWO_PI * 50e6).p_s for d in
              (200e6, 500e6, 2e9, 1e10)]
        assert all(b > a for a, b in zip(ps, ps[1:]))
        assert ps[-1] > 1.0 - 1e-4


class TestPeriodUnitary:
    def test_unitarity_random(self, rng):
        for _ in range(10_000):
            nu, delta, g, om = random_working_point(rng)
            pu = period_unitary(latch_frame(qubit_at(nu, g), delta, om))
            assert abs(abs(pu.alpha) ** 2 + abs(pu.gamma) ** 2 - 1.0) < 1e-12

    def test_no_switching_limits(self):
        lf = latch_frame(qubit_at(TWO_PI * 150e6, 0.0), DELTA, TWO_PI * 50e6)
        pu = period_unitary(lf)  # p_s = 0
        assert pu.gamma == 0.0
        assert abs(pu.alpha - np.exp(-1j * (lf.phi_r + lf.phi_l))) < 1e-12

    def test_matches_brute_force_product(self, rng):
        for _ in range(100):
            nu, delta, g, om = random_working_point(rng)
            q = qubit_at(nu, g)
            pu = period_unitary(latch_frame(q, delta, om))
            m = brute_period_matrix(q, delta, om)
            assert abs(m[0, 0] - pu.alpha) < 1e-10
            assert abs(m[1, 0] - pu.gamma) < 1e-10
            np.testing.assert_allclose(period_unitary_matrix(pu), m, atol=1e-10)

    def test_left_start_alpha_matches_brute_force(self, rng):
        # swapped frame gives the left-start period unitary (same alpha and
        # |gamma|; the literal matrix product flips gamma's sign)
        for _ in range(30):
            nu, delta, g, om = random_working_point(rng)
            q = qubit_at(nu, g)
            pu_l = period_unitary(swap_latches(latch_frame(q, delta, om)))
            m = brute_period_matrix(q, delta, om, start="l")
            assert abs(m[0, 0] - pu_l.alpha) < 1e-10
            assert abs(abs(m[1, 0]) - abs(pu_l.gamma)) < 1e-10

    def test_gamma_cross_identity(self, rng):
        nu, delta, g, om = random_working_point(rng)
        lf = latch_frame(qubit_at(nu, g), delta, om)
        pu = period_unitary(lf)
        assert abs(abs(pu.gamma) ** 2
                   - 4 * lf.p_s * (1 - lf.p_s) * np.sin(lf.phi_l) ** 2) < 1e-12


class TestPopulations:
    def test_single_period_consistency(self, rng):
        for _ in range(50):
            nu, delta, g, om = random_working_point(rng)
            lf = latch_frame(qubit_at(nu, g), delta, om)
            assert abs(single_period_population(lf)
                       - n_period_population(period_unitary(lf), 1)) < 1e-12

    def test_antiresonance_zero(self):
        # phi_l = n*pi exactly: choose Omega = pi*eps_l / (2*n*pi)
        q = qubit_at(TWO_PI * 60e6, G)
        lf0 = latch_frame(q, DELTA, TWO_PI * 50e6)
        for n in (1, 2, 3):
            om = lf0.eps_l / (2 * n)
            lf = latch_frame(q, DELTA, om)
            assert single_period_population(lf) < 1e-25

    def test_maximum_interference(self):
        # nu = 0, g = delta: theta_r = pi/4, theta_l = 3*pi/4 -> p_s = 1/2;
        # omega_mod = eps_l makes phi_l = pi/2, so P = 4*(1/4)*1 = 1
        lf = latch_frame(qubit_at(0.0, DELTA), DELTA, TWO_PI * 50e6)
        assert abs(lf.p_s - 0.5) < 1e-12
        lf2 = latch_frame(qubit_at(0.0, DELTA), DELTA, lf.eps_l)
        assert abs(single_period_population(lf2) - 1.0) < 1e-12

    def test_n_period_matches_matrix_power(self, rng):
        for _ in range(50):
            nu, delta, g, om = random_working_point(rng)
            q = qubit_at(nu, g)
            pu = period_unitary(latch_frame(q, delta, om))
            m = brute_period_matrix(q, delta, om)
            n = int(rng.integers(1, 101))
            mn = np.linalg.matrix_power(m, n)
            assert abs(n_period_population(pu, n) - abs(mn[1, 0]) ** 2) < 1e-10

    def test_n_period_degenerate_phase_limit(self):
        # engineered phi ~ 0: delta = 0 gives alpha = e^{-2i phi_r}; pick
        # omega so phi_r is a multiple of pi (sin phi = 0 exactly)
        q = qubit_at(TWO_PI * 100e6, G)
        lf0 = latch_frame(q, 0.0, TWO_PI * 50e6)
        om = lf0.eps_r / 2.0  # phi_r = phi_l = pi
        pu = period_unitary(latch_frame(q, 0.0, om))
        assert abs(np.sin(pu.phi)) < 1e-9
        for n in (1, 5, 50):
            assert n_period_population(pu, n) == abs(pu.gamma) ** 2 * n**2

    def test_n_zero_returns_zero(self):
        lf = latch_frame(qubit_at(0.0, G), DELTA, TWO_PI * 50e6)
        assert n_period_population(period_unitary(lf), 0) == 0.0


class TestAveragedPopulation:
    def test_resonance_ceiling_and_value(self, rng):
        for _ in range(300):
            nu, delta, g, om = random_working_point(rng)
            lf = latch_frame(qubit_at(nu, g), delta, om)
            for start in StartLatch:
                p = averaged_population(lf, start)
                assert 0.0 <= p <= 0.5 + 1e-12

    def test_resonance_maximum_half(self):
        # scan nu at fixed Omega; the peak of the right-start average is 1/2
        om = TWO_PI * 37e6
        nus = TWO_PI * np.linspace(-300e6, 300e6, 20001)
        best = 0.0
        for nu in nus:
            lf = latch_frame(qubit_at(nu, G), DELTA, om)
            best = max(best, averaged_population(lf, StartLatch.RIGHT_START))
        assert best > 0.5 - 1e-4

    def test_gamma_zero_gives_zero(self):
        lf = latch_frame(qubit_at(TWO_PI * 150e6, 0.0), DELTA, TWO_PI * 50e6)
        for start in StartLatch:
            assert averaged_population(lf, start) == 0.0

    def test_phase_average_is_mean_of_starts(self, rng):
        nu, delta, g, om = random_working_point(rng)
        lf = latch_frame(qubit_at(nu, g), delta, om)
        r = averaged_population(lf, StartLatch.RIGHT_START)
        l = averaged_population(lf, StartLatch.LEFT_START)
        assert averaged_population(lf, StartLatch.PHASE_AVERAGED) == 0.5 * (r + l)

    def test_unitary_argument_requires_start(self):
        lf = latch_frame(qubit_at(0.0, G), DELTA, TWO_PI * 50e6)
        pu = period_unitary(lf)
        with pytest.raises(TypeError):
            averaged_population(pu, StartLatch.PHASE_AVERAGED)
        assert averaged_population(pu, StartLatch.RIGHT_START) == averaged_population(
            lf, StartLatch.RIGHT_START)

    def test_peak_location_survives_averaging(self):
        # phase averaging reweights the peaks but keeps each on the same
        # resonance: the argmax moves by far less than the 2*Omega spacing
        # between neighbouring resonances (measured pulls are <~ 0.1*Omega)
        om = TWO_PI * 40e6
        q = qubit_at(0.0, G)
        for m in (3, 4, 5):
            pts = resonance_curves(q, DELTA, ResonanceFamily.SUM_RES, m, [om])
            center = pts[pts[:, 1] > 0][0, 1]
            nus = center + TWO_PI * np.linspace(-10e6, 10e6, 401)
            right = np.array([
                averaged_population(latch_frame(qubit_at(nu, G), DELTA, om),
                                    StartLatch.RIGHT_START) for nu in nus])
            avg = np.array([
                averaged_population(latch_frame(qubit_at(nu, G), DELTA, om),
                                    StartLatch.PHASE_AVERAGED) for nu in nus])
            shift = abs(nus[np.argmax(right)] - nus[np.argmax(avg)])
            assert shift <= 0.15 * om


class TestResonanceCurves:
    def test_antires_touches_nu_delta(self):
        q = qubit_at(0.0, G)
        for n in (1, 2, 4):
            pts = resonance_curves(q, DELTA, ResonanceFamily.ANTI_RES, n, [G / (2 * n)])
            assert any(abs(nu - DELTA) < 1e-3 for _, nu in pts)

    def test_sumres_existence_boundary(self):
        q = qubit_at(0.0, G)
        om_min = np.hypot(DELTA, G)
        for m in (1, 2, 3):
            below = resonance_curves(q, DELTA, ResonanceFamily.SUM_RES, m,
                                     [0.999 * om_min / m])
            at = resonance_curves(q, DELTA, ResonanceFamily.SUM_RES, m, [om_min / m])
            assert below.shape[0] == 0
            assert at.shape[0] >= 1 and abs(at[0, 1]) < 1e-3 * om_min

    def test_diffres_asymptote(self):
        # target 2|m|*Omega close to 2*delta pushes the root to large nu
        q = qubit_at(0.0, G)
        pts = resonance_curves(q, DELTA, ResonanceFamily.DIFF_RES, 1, [0.999 * DELTA])
        nus = pts[pts[:, 1] > 0, 1]
        assert nus.size == 1
        # expansion: nu ~ sqrt(g^2 delta / eps + delta^2) at eps = 2(delta - m Omega)
        eps = 2 * (DELTA - 0.999 * DELTA)
        expected = np.sqrt(G**2 * DELTA / eps + DELTA**2)
        assert abs(nus[0] - expected) < 0.05 * expected
        none = resonance_curves(q, DELTA, ResonanceFamily.DIFF_RES, 1, [1.001 * DELTA])
        assert none.shape[0] == 0

    @pytest.mark.parametrize("family,index", [
        (ResonanceFamily.DIFF_RES, 1), (ResonanceFamily.DIFF_RES, -2),
        (ResonanceFamily.SUM_RES, 2), (ResonanceFamily.SUM_RES, 7),
        (ResonanceFamily.SINGLE_PERIOD_RES, 0), (ResonanceFamily.SINGLE_PERIOD_RES, 2),
        (ResonanceFamily.ANTI_RES, 1), (ResonanceFamily.ANTI_RES, 3),
    ])
    def test_solutions_satisfy_condition(self, family, index, rng):
        q = qubit_at(0.0, G)
        omegas = TWO_PI * 1e6 * rng.uniform(5, 120, 30)
        for om, nu in resonance_curves(q, DELTA, family, index, omegas):
            el = np.hypot(nu - DELTA, G)
            er = np.hypot(nu + DELTA, G)
            if family is ResonanceFamily.DIFF_RES:
                resid = abs(abs(el - er) - 2 * abs(index) * om)
            elif family is ResonanceFamily.SUM_RES:
                resid = abs(el + er - 2 * index * om)
            elif family is ResonanceFamily.SINGLE_PERIOD_RES:
                resid = abs(el - (2 * index + 1) * om)
            else:
                resid = abs(el - 2 * index * om)
            assert resid < 3e-6 * om

    def test_even_families_mirrored(self):
        q = qubit_at(0.0, G)
        pts = resonance_curves(q, DELTA, ResonanceFamily.SUM_RES, 2,
                               [TWO_PI * 150e6])
        nus = sorted(pts[:, 1])
        assert len(nus) == 2 and abs(nus[0] + nus[1]) < 1e-6 * DELTA

    def test_invalid_indices(self):
        q = qubit_at(0.0, G)
        with pytest.raises(ValueError):
            resonance_curves(q, DELTA, ResonanceFamily.DIFF_RES, 0, [TWO_PI * 50e6])
        with pytest.raises(ValueError):
            resonance_curves(q, DELTA, ResonanceFamily.SUM_RES, 0, [TWO_PI * 50e6])
        with pytest.raises(ValueError):
            resonance_curves(q, DELTA, ResonanceFamily.ANTI_RES, 0, [TWO_PI * 50e6])

    def test_empty_range(self):
        q = qubit_at(0.0, G)
        pts = resonance_curves(q, DELTA, ResonanceFamily.SUM_RES, 2, [])
        assert pts.shape == (0, 2)


class TestLatchSpectrum:
    def test_single_cell_matches_direct_call(self):
        q = device_qubit()
        nu = TWO_PI * 37e6
        om = TWO_PI * 45e6
        grid = GridSpec(nu=np.array([nu]), y_kind="omega_mod", y=np.array([om]),
                        delta=DELTA)
        sg = latch_spectrum(q, grid)
        direct = averaged_population(
            latch_frame(qubit_at(nu, q.g), DELTA, om), StartLatch.PHASE_AVERAGED)
        assert sg.values[0, 0] == direct

    def test_degenerate_cells_masked(self):
        q = QubitParams(omega0=OMEGA0, omega=OMEGA0, g=0.0)
        grid = GridSpec(nu=TWO_PI * np.array([0.0, 200e6]), y_kind="omega_mod",
                        y=TWO_PI * np.array([50e6]), delta=DELTA)
        sg = latch_spectrum(q, grid)
        assert np.isnan(sg.values[0, 0]) and not np.isnan(sg.values[0, 1])
        assert sg.meta["nan_cells"] == 1

    def test_delta_sweep_axis(self):
        q = device_qubit()
        grid = GridSpec(nu=TWO_PI * np.linspace(-150e6, 150e6, 5), y_kind="delta",
                        y=TWO_PI * np.linspace(50e6, 150e6, 3), omega_mod=TWO_PI * 50e6)
        sg = latch_spectrum(q, grid)
        assert sg.values.shape == (3, 5)
        assert np.all((sg.values >= 0) & (sg.values <= 0.5))
