import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from lgtilt import ModelParams, OracleFailure, SpectralDensity, TwoLevelSpectrum, derive_spectrum, energy_shifts, transition_matrix_paper
from lgtilt.oracle import (
    damped_evolution,
    equivalence_report,
    lindblad_transition_matrix,
    run_verification,
    shift_quadrature,
    sinc2_kernel,
    sinc2_spectral_integral,
)


class TestDampedEvolution:
    @given(st.floats(0, 1), st.sampled_from("+-"), st.floats(0, 5), st.floats(0, 10), st.floats(0, 10))
    def test_trace_and_decay(self, s, well, g, w, t):
        start = damped_evolution(s, well, g, w, 0.0)
        ev = damped_evolution(s, well, g, w, t)
        assert ev.rho00 + ev.rho11 == pytest.approx(1.0, abs=1e-12)
        assert ev.rho11 == pytest.approx(start.rho11 * math.exp(-g * t), abs=1e-12)
        assert math.hypot(ev.coherence_re, ev.coherence_im) == pytest.approx(
            math.hypot(start.coherence_re, start.coherence_im) * math.exp(-g * t / 2), abs=1e-12
        )

    def test_symmetric_matches_both_conventions(self):
        sp = TwoLevelSpectrum.from_sin2theta(0.5)
        for g, w, t in [(0.3, 1.0, 2.0), (1.5, 0.7, 3.0)]:
            lind = lindblad_transition_matrix(0.5, g, w, t).as_array()
            for conv in ("paper", "physical"):
                assert np.allclose(lind, transition_matrix_paper(sp, g, w, t, conv).as_array(), atol=1e-12, rtol=0)

    def test_label_swap_example(self):
        tm = lindblad_transition_matrix(0.2, math.log(2.0), math.pi / 3, 1.0)
        assert tm.p_mp == pytest.approx(0.44686, abs=1e-5)
        assert tm.p_pm == pytest.approx(0.14686, abs=1e-5)

    @given(st.floats(0, 1), st.floats(0, 5), st.floats(0, 10), st.floats(0, 5))
    def test_rows_sum_to_one(self, s, g, w, t):
        for total in lindblad_transition_matrix(s, g, w, t).row_sums():
            assert total == pytest.approx(1.0, abs=1e-12)


class TestShiftQuadrature:
    def test_reference(self):
        dE0, dE1 = shift_quadrature(SpectralDensity(0.01, 10.0), 1.0, 1.0)
        assert dE0 == pytest.approx(0.0076334, abs=1e-6)
        assert dE1 == pytest.approx(-0.0069938, abs=1e-6)
        # closed-form logs for the same point
        assert dE0 == pytest.approx(0.01 / math.pi * math.log(11.0), abs=1e-8)
        assert dE1 == pytest.approx(-0.01 / math.pi * math.log(9.0), abs=1e-8)

    def test_no_bath(self):
        assert shift_quadrature(SpectralDensity(0.0, 10.0), 1.0, 1.0) == (0.0, 0.0)

    def test_cutoff_dependence(self):
        eta = 0.01
        low = shift_quadrature(SpectralDensity(eta, 2.0), 1.0, 1.0)[0]
        high = shift_quadrature(SpectralDensity(eta, 4.0), 1.0, 1.0)[0]
        assert high - low == pytest.approx(eta / math.pi * math.log(5.0 / 3.0), abs=1e-10)

    @pytest.mark.parametrize("eta", [1e-3, 1e-2])
    @pytest.mark.parametrize("ratio", [5.0, 10.0, 100.0])
    @pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
    def test_matches_closed_form(self, eta, ratio, omega):
        params = ModelParams(tunneling=omega, eta=eta, omega_c=ratio * omega)
        dE0, dE1, _ = energy_shifts(params, derive_spectrum(params))
        q0, q1 = shift_quadrature(SpectralDensity(eta, ratio * omega), omega, 1.0)
        assert q0 == pytest.approx(dE0, rel=1e-6)
        assert q1 == pytest.approx(dE1, rel=1e-6)

    def test_cutoff_below_gap(self):
        with pytest.raises(OracleFailure):
            shift_quadrature(SpectralDensity(0.01, 0.5), 1.0, 1.0)


class TestSinc2:
    def test_kernel_unit_area(self):
        t = 50.0
        x = np.linspace(-200, 200, 2_000_001)
        area = trapezoid(sinc2_kernel(x, t), x)
        assert area == pytest.approx(1.0, abs=2e-3)

    def test_concentration(self):
        J = SpectralDensity(0.01, 100.0)
        assert sinc2_spectral_integral(J, 1.0, 200.0) == pytest.approx(0.01, rel=0.05)

    def test_error_shrinks_with_time(self):
        J = SpectralDensity(0.01, 100.0)
        errors = [abs(sinc2_spectral_integral(J, 1.0, t) - 0.01) for t in (10.0, 50.0, 200.0, 1000.0)]
        assert all(b < a for a, b in zip(errors, errors[1:]))

    def test_zero_frequency_vanishes(self):
        J = SpectralDensity(0.01, 100.0)
        values = [sinc2_spectral_integral(J, 0.0, t) for t in (10.0, 100.0, 1000.0)]
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] < 1e-4


class TestReport:
    def test_default_report_passes(self):
        report = equivalence_report()
        assert report.passed, report.lines()

    def test_symmetric_subgrid(self):
        grid = [(0.5, g, p) for g in (0.0, 0.4, 1.7) for p in (0.0, 1.0, 2.5)]
        report = equivalence_report(grid)
        for check in report.checks:
            assert check.max_residual <= 1e-12, check.line()

    def test_unitary_subgrid(self):
        grid = [(s, 0.0, p) for s in np.linspace(0, 1, 7) for p in (0.0, 1.0, 2.5)]
        for check in equivalence_report(grid).checks:
            assert check.max_residual <= 1e-12, check.line()

    def test_offdiagonal_residual_is_leakage(self):
        report = equivalence_report([(0.2, math.log(2.0), math.pi / 3)])
        assert report["lindblad_vs_paper_offdiag_leakage"].passed
        assert report["assembly_minus_paper_p_mp"].max_residual == pytest.approx(0.3, abs=1e-12)
        assert report["lindblad_vs_physical"].max_residual <= 1e-12

    def test_full_verification(self):
        report = run_verification()
        assert report.passed, [c.line() for c in report.checks if not c.passed]
        assert len({c.name for c in report.checks}) == len(report.checks)
