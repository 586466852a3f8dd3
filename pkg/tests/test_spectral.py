import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from lgtilt import DomainError, ModelParams, TwoLevelSpectrum, derive_scales, derive_spectrum, isolated_tunneling_prob

tunneling = st.floats(1e-3, 10.0)
tilt = st.floats(-10.0, 10.0)


def spectrum(Delta, delta):
    return derive_spectrum(ModelParams(tunneling=Delta, tilt=delta))


class TestScales:
    def test_unit_normalization(self):
        sc = derive_scales(1.0, 1.0, 1.0, 0.1)
        assert sc.tau0 == 1.0 and sc.P0 == 1.0 and sc.htilde == 0.1

    def test_heavier_mass(self):
        sc = derive_scales(1.0, 1.0, 4.0, 0.1)
        assert sc.P0 == pytest.approx(2.0, abs=1e-12)
        assert sc.tau0 == pytest.approx(2.0, abs=1e-12)
        assert sc.htilde == pytest.approx(0.05, abs=1e-12)

    @given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10))
    def test_htilde_one_when_hbar_equals_action(self, R0, U0, M):
        P0 = math.sqrt(M * U0)
        sc = derive_scales(R0, U0, M, P0 * R0)
        assert sc.htilde == pytest.approx(1.0, abs=1e-12)
        assert sc.P0 == pytest.approx(M * R0 / sc.tau0, rel=1e-12)

    @pytest.mark.parametrize("args", [(0, 1, 1, 1), (1, -1, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)])
    def test_nonpositive_rejected(self, args):
        with pytest.raises(DomainError):
            derive_scales(*args)


class TestSpectrum:
    @pytest.mark.parametrize(
        "Delta, delta, omega, s2, c2t",
        [(0.8, -0.6, 1.0, 0.2, 0.6), (1.0, 0.0, 1.0, 0.5, 0.0), (0.6, 0.8, 1.0, 0.9, -0.8)],
    )
    def test_examples(self, Delta, delta, omega, s2, c2t):
        sp = spectrum(Delta, delta)
        assert sp.Omega10 == pytest.approx(omega, abs=1e-12)
        assert sp.sin2theta_sq == pytest.approx(s2, abs=1e-12)
        assert sp.cos_2theta == pytest.approx(c2t, abs=1e-12)

    def test_eigenvalues(self):
        assert spectrum(0.8, -0.6).eigenvalues(0.1) == pytest.approx((-0.05, 0.05), abs=1e-15)

    def test_nonpositive_tunneling_rejected(self):
        with pytest.raises(DomainError):
            ModelParams(tunneling=0.0)

    def test_strong_coupling_warns(self):
        with pytest.warns(RuntimeWarning):
            ModelParams(tunneling=1.0, htilde=0.1, eta=0.2)

    @given(tunneling, tilt)
    def test_invariants(self, Delta, delta):
        sp = spectrum(Delta, delta)
        a, b, a_, b_ = sp.coeffs
        assert sp.A * sp.B == pytest.approx(Delta**2, rel=1e-12)
        assert sp.sin2theta_sq + sp.cos2theta_sq == pytest.approx(1.0, abs=1e-12)
        assert sp.cos_2theta == pytest.approx(-delta / sp.Omega10, abs=1e-12)
        assert sp.sin_2theta == pytest.approx(Delta / sp.Omega10, abs=1e-12)
        assert a * a + b * b == pytest.approx(1.0, abs=1e-12)
        assert a_ * a_ + b_ * b_ == pytest.approx(1.0, abs=1e-12)
        assert a * a_ + b * b_ == pytest.approx(0.0, abs=1e-12)

    @given(tunneling, tilt)
    def test_amplitude_consistency(self, Delta, delta):
        sp = spectrum(Delta, delta)
        assert 4 * sp.sin2theta_sq * sp.cos2theta_sq == pytest.approx(Delta**2 / (Delta**2 + delta**2), abs=1e-12)

    @given(tunneling, st.floats(0.0, 10.0))
    def test_tilt_reversal_swaps_weights(self, Delta, delta):
        up, down = spectrum(Delta, delta), spectrum(Delta, -delta)
        assert up.sin2theta_sq == pytest.approx(down.cos2theta_sq, abs=1e-12)
        assert up.cos2theta_sq == pytest.approx(down.sin2theta_sq, abs=1e-12)

    def test_direct_entry_has_no_splitting(self):
        sp = TwoLevelSpectrum.from_sin2theta(0.2)
        assert sp.Omega10 is None and sp.cos_2theta == pytest.approx(0.6)
        with pytest.raises(DomainError):
            isolated_tunneling_prob(sp, 1.0)


class TestIsolatedTunneling:
    def test_examples(self):
        assert isolated_tunneling_prob(spectrum(0.8, -0.6), math.pi) == pytest.approx(0.64, abs=1e-12)
        assert isolated_tunneling_prob(spectrum(0.8, -0.6), 0.0) == 0.0
        assert isolated_tunneling_prob(spectrum(1.0, 0.0), math.pi) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=50)
    @given(tunneling, tilt, st.floats(0.0, 20.0))
    def test_matches_matrix_exponential(self, Delta, delta, t):
        # independent route: propagate the two-well Hamiltonian numerically
        H = 0.5 * np.array([[delta, Delta], [Delta, -delta]])
        psi = expm(-1j * H * t) @ np.array([0.0, 1.0])
        expected = abs(psi[0]) ** 2
        assert isolated_tunneling_prob(spectrum(Delta, delta), t) == pytest.approx(expected, abs=1e-10)

    def test_periodic(self):
        sp = spectrum(0.7, 0.3)
        period = 2 * math.pi / sp.Omega10
        for t in np.linspace(0.0, period, 17):
            for k in range(1, 11):
                assert isolated_tunneling_prob(sp, t + k * period) == pytest.approx(isolated_tunneling_prob(sp, t), abs=1e-9)
