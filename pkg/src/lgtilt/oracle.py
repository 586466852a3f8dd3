"""Independent numerical cross-checks for the kernel and the LGI engine.

* an exact amplitude-damping evolution of the 2x2 density matrix,
* principal-value quadrature of the level-shift integrals,
* the sinc² kernel integral that concentrates onto J(Ω) at long times,
* an equivalence report tabulating residuals between all routes.

None of these reuse the closed forms they are compared against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy import integrate

from . import kernel, lgi
from .errors import OracleFailure
from .kernel import SpectralDensity, TransitionMatrix
from .spectral import ModelParams, TwoLevelSpectrum, derive_spectrum


@dataclass(frozen=True)
class DampedEvolution:
    rho00: float
    rho11: float
    coherence_re: float
    coherence_im: float
    Gamma1: float
    Omega10_bar: float


def _well_vector(sin2theta_sq: float, well: str) -> np.ndarray:
    # eigenbasis components (<0|well>, <1|well>)
    s = math.sqrt(sin2theta_sq)
    c = math.sqrt(1.0 - sin2theta_sq)
    return np.array([-c, s]) if well == "+" else np.array([s, c])


def damp(rho0: np.ndarray, Gamma1: float, Omega10_bar: float, t: float) -> np.ndarray:
    """Zero-temperature amplitude damping toward |0> plus free rotation, in closed form."""
    decay = math.exp(-Gamma1 * t)
    rho = np.empty((2, 2), dtype=complex)
    rho[1, 1] = rho0[1, 1] * decay
    rho[0, 0] = 1.0 - rho[1, 1].real
    rho[0, 1] = rho0[0, 1] * math.exp(-0.5 * Gamma1 * t) * np.exp(1j * Omega10_bar * t)
    rho[1, 0] = np.conj(rho[0, 1])
    return rho


def damped_evolution(sin2theta_sq: float, well: str, Gamma1: float, Omega10_bar: float, t: float) -> DampedEvolution:
    v = _well_vector(sin2theta_sq, well)
    rho = damp(np.outer(v, v).astype(complex), Gamma1, Omega10_bar, t)
    return DampedEvolution(rho[0, 0].real, rho[1, 1].real, rho[0, 1].real, rho[0, 1].imag, Gamma1, Omega10_bar)


def lindblad_transition_matrix(sin2theta_sq: float, Gamma1: float, Omega10_bar: float, t: float) -> TransitionMatrix:
    p = {}
    for x in "+-":
        vx = _well_vector(sin2theta_sq, x)
        rho = damp(np.outer(vx, vx).astype(complex), Gamma1, Omega10_bar, t)
        for y in "+-":
            vy = _well_vector(sin2theta_sq, y)
            p[x, y] = float((vy @ rho @ vy).real)
    return TransitionMatrix(p["-", "-"], p["-", "+"], p["+", "-"], p["+", "+"], convention="physical")


def _quad(f, a: float, b: float) -> float:
    value, _ = integrate.quad(f, a, b, epsabs=1e-12, epsrel=1e-12, limit=500)
    return value


def _shift(J: SpectralDensity, omega_mn: float, f01: float, excision_floor: float) -> float:
    """(1/π) f² Ω_mn PV∫ dω J(ω)/(ω(ω+Ω_mn)) over the support of J."""
    top = J.omega_c
    pref = f01**2 * omega_mn / math.pi
    g = lambda w: J.over_omega(w) / (w + omega_mn)
    pole = -omega_mn
    if not 0.0 < pole < top:
        return pref * _quad(g, 0.0, top)
    eps = 0.1 * min(pole, top - pole)
    previous = None
    while eps >= excision_floor:
        value = _quad(g, 0.0, pole - eps) + _quad(g, pole + eps, top)
        if previous is not None and abs(value - previous) < 1e-10:
            return pref * value
        previous = value
        eps *= 0.1
    raise OracleFailure(f"principal value did not converge; excision floor {excision_floor:g} reached")


def shift_quadrature(J: SpectralDensity, Omega10: float, f01: float, excision_floor: float = 1e-9) -> tuple[float, float]:
    """Level shifts (dE0, dE1) by direct quadrature with symmetric pole excision."""
    if not J.omega_c > Omega10:
        raise OracleFailure(f"cutoff {J.omega_c} must exceed the level splitting {Omega10}")
    if J.eta == 0:
        return 0.0, 0.0
    floor = excision_floor * Omega10
    return _shift(J, Omega10, f01, floor), _shift(J, -Omega10, f01, floor)


def sinc2_kernel(x, t: float):
    """(1/2πt) [sin(xt/2)/(x/2)]², a unit-area kernel of width ~1/t."""
    return t / (2.0 * math.pi) * np.sinc(np.asarray(x) * t / (2.0 * math.pi)) ** 2


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def sinc2_spectral_integral(J: SpectralDensity, Omega: float, t: float) -> float:
    """∫₀^∞ J(ω) K(ω - Ω; t) dω with the unit-area sinc² kernel K.

    Gauss-Legendre on panels between consecutive zeros of the kernel, so
    each panel is a single smooth lobe.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    top = J.omega_c
    period = 2.0 * math.pi / t
    k = np.arange(math.ceil(-Omega / period), math.floor((top - Omega) / period) + 1)
    edges = np.unique(np.concatenate([[0.0], Omega + k * period, [top]]))
    edges = edges[(edges >= 0.0) & (edges <= top)]
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    w = (0.5 * (a + b))[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = J(w) * sinc2_kernel(w - Omega, t)
    return float(np.sum(half * (vals @ _GL_WEIGHTS)))


@dataclass
class Check:
    name: str
    max_residual: float
    threshold: Optional[float]
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.threshold is None or self.max_residual <= self.threshold

    def line(self) -> str:
        thr = "info" if self.threshold is None else f"{self.threshold:.1e}"
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name} max_residual={self.max_residual:.3e} threshold={thr} {status}"


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, threshold: Optional[float], detail: str = "") -> None:
        self.checks.append(Check(name, float(residual), threshold, detail))

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def default_grid() -> list[tuple[float, float, float]]:
    """(sin²θ, Γ₁t, Ω̄₁₀t) points, including the symmetric and unitary sub-grids."""
    s_values = np.linspace(0.0, 1.0, 11)
    decay_values = (0.0, 0.05, 0.3, math.log(2.0), 1.0, 2.0)
    phase_values = (0.0, math.pi / 3, 1.0, 2.0 * math.pi / 3, math.pi, 4.0)
    return [(float(s), g, p) for s in s_values for g in decay_values for p in phase_values]


def equivalence_report(grid: Optional[Iterable[tuple[float, float, float]]] = None, tol: float = 1e-12) -> Report:
    """Residuals between closed forms, the eigenbasis assembly and the damped evolution."""
    grid = default_grid() if grid is None else list(grid)
    keys = (
        "paper_column_sum_into_plus",
        "paper_column_sum_into_minus",
        "paper_row_leakage_from_minus",
        "paper_row_leakage_from_plus",
        "assembly_matches_plus_to_plus",
        "assembly_matches_minus_to_minus",
        "assembly_plus_to_minus_gap",
        "assembly_minus_to_plus_gap",
        "lindblad_vs_physical",
        "lindblad_vs_paper_offdiag_leakage",
        "lindblad_row_sums",
        "symmetric_conventions_agree",
        "unitary_conventions_agree",
    )
    worst = dict.fromkeys(keys, 0.0)
    entry_gap = dict.fromkeys(("p_mm", "p_mp", "p_pm", "p_pp"), 0.0)

    def bump(key, value):
        worst[key] = max(worst[key], abs(value))

    for s, gt, pt in grid:
        sp = TwoLevelSpectrum.from_sin2theta(s)
        c2 = sp.cos_2theta
        E = math.exp(-gt)
        loss = -math.expm1(-gt)
        paper = kernel.transition_matrix_paper(sp, gt, pt, 1.0, "paper")
        phys = kernel.transition_matrix_paper(sp, gt, pt, 1.0, "physical")
        asm = kernel.assembled_matrix(sp, gt, pt, 1.0)
        lind = lindblad_transition_matrix(s, gt, pt, 1.0)

        bump("paper_column_sum_into_plus", paper.p_mp + paper.p_pp - 1.0)
        bump("paper_column_sum_into_minus", paper.p_pm + paper.p_mm - 1.0)
        bump("paper_row_leakage_from_minus", paper.p_mp + paper.p_mm - (2 * s + c2 * E))
        bump("paper_row_leakage_from_plus", paper.p_pm + paper.p_pp - (2 * (1 - s) - c2 * E))
        bump("assembly_matches_plus_to_plus", asm.p_pp - paper.p_pp)
        bump("assembly_matches_minus_to_minus", asm.p_mm - paper.p_mm)
        bump("assembly_plus_to_minus_gap", paper.p_pm - asm.p_pm - c2 * loss)
        bump("assembly_minus_to_plus_gap", asm.p_mp - paper.p_mp - c2 * loss)
        for name in entry_gap:
            entry_gap[name] = max(entry_gap[name], abs(getattr(asm, name) - getattr(paper, name)))
        bump("lindblad_vs_physical", np.max(np.abs(lind.as_array() - phys.as_array())))
        off = abs(paper.p_mp - lind.p_mp)
        bump("lindblad_vs_paper_offdiag_leakage", off - abs(c2) * loss)
        bump("lindblad_vs_paper_offdiag_leakage", abs(paper.p_pm - lind.p_pm) - abs(c2) * loss)
        bump("lindblad_row_sums", np.max(np.abs(np.array(lind.row_sums()) - 1.0)))
        if s == 0.5:
            bump("symmetric_conventions_agree", np.max(np.abs(paper.as_array() - phys.as_array())))
            bump("symmetric_conventions_agree", np.max(np.abs(np.array(paper.row_sums()) - 1.0)))
        if gt == 0.0:
            bump("unitary_conventions_agree", np.max(np.abs(paper.as_array() - lind.as_array())))

    report = Report()
    for key in keys:
        report.add(key, worst[key], tol)
    for name, gap in entry_gap.items():
        report.add(f"assembly_minus_paper_{name}", gap, None, "informational")
    return report


def lgi_checks(report: Optional[Report] = None, tol: float = 1e-12) -> Report:
    """K₁-level consistency checks (agreement at z = 1, separation at z = 0.6, thresholds)."""
    report = Report() if report is None else report
    s_grid = np.linspace(0.0, 1.0, 21)
    at_one = max(
        abs(lgi.k1_assembly(lgi.Schedule.from_z(1.0), s, conv).k1 - lgi.k1_paper_closed_form(1.0, s).k1)
        for s in s_grid
        for conv in kernel.CONVENTIONS
    )
    report.add("k1_methods_agree_at_z1", at_one, tol)
    sep = abs(lgi.k1_assembly(lgi.Schedule.from_z(0.6), 0.2, "paper").k1 - lgi.k1_paper_closed_form(0.6, 0.2).k1)
    report.add("k1_methods_separate_at_z0.6", max(0.0, 0.05 - sep), 0.0, f"difference={sep:.6f}, required > 0.05")
    physical_vs_closed = max(
        abs(lgi.k1_assembly(lgi.Schedule.from_z(z), s, "physical").k1 - lgi.k1_paper_closed_form(z, s).k1)
        for s in s_grid
        for z in np.linspace(0.05, 1.0, 20)
    )
    report.add("k1_closed_form_matches_physical_assembly", physical_vs_closed, 1e-12)
    report.add("k1_symmetric_maximum", abs(lgi.k1_assembly(lgi.Schedule.from_z(1.0), 0.5).k1 - 1.5), tol)

    thr = lgi.violation_threshold(0.2, "paper_closed_form")
    report.add("threshold_closed_form_z", abs(thr.z_star - 0.5), 0.01, f"z*={thr.z_star:.9f}")
    report.add("threshold_closed_form_gamma", abs(thr.gamma_star - 0.66), 0.01, f"gamma*={thr.gamma_star:.9f}")
    thr = lgi.violation_threshold(0.2, "assembly", "paper")
    report.add("threshold_assembly_z_in_0.70_0.73", max(0.0, 0.70 - thr.z_star, thr.z_star - 0.73), 0.0, f"z*={thr.z_star:.9f}")
    return report


def kernel_checks(report: Optional[Report] = None) -> Report:
    report = Report() if report is None else report
    worst = 0.0
    for eta in (1e-3, 1e-2):
        for omega in (0.7, 1.0):
            for ratio in (5.0, 10.0, 100.0):
                wc = ratio * omega
                params = ModelParams(tunneling=omega, eta=eta, omega_c=wc)
                sp = derive_spectrum(params)
                dE0, dE1, _ = kernel.energy_shifts(params, sp)
                q0, q1 = shift_quadrature(SpectralDensity(eta, wc), omega, 1.0)
                worst = max(worst, abs(q0 - dE0) / abs(dE0), abs(q1 - dE1) / abs(dE1))
    report.add("shift_quadrature_relative", worst, 1e-6)

    J = SpectralDensity(0.01, 100.0)
    value = sinc2_spectral_integral(J, 1.0, 200.0)
    report.add("sinc2_concentration_t200", abs(value - J(1.0)) / J(1.0), 0.05, f"value={value:.6e}")
    zero = [sinc2_spectral_integral(J, 0.0, t) for t in (10.0, 100.0, 1000.0)]
    shrinking = all(b < a for a, b in zip(zero, zero[1:]))
    report.add(
        "sinc2_vanishes_at_zero_frequency",
        zero[-1] / J(1.0) if shrinking else math.inf,
        0.01,
        "values at t=10,100,1000: " + ", ".join(f"{v:.3e}" for v in zero),
    )
    return report


def run_verification() -> Report:
    report = equivalence_report()
    kernel_checks(report)
    lgi_checks(report)
    return report
