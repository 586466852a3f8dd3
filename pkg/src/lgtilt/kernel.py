"""Bath-induced rates, level shifts and the decohered transition probabilities.

The bath is a zero-temperature bosonic field with an ohmic spectral density
J(ω) = ηω cut off sharply at ω_c.  Second-order perturbation theory gives a
decay rate Γ₁ of the excited level (Γ₀ = 0), logarithmic energy shifts, and
the four well-to-well probabilities P_{x→y}(t).

Two label conventions are supported for the printed closed forms:

``"paper"``
    the four expressions exactly as they are usually quoted, with the one for
    |-> → |+> carrying the ``+ sin²θ cos2θ e^{-Γt}`` term.  This set is
    column-stochastic (P_{-→+} + P_{+→+} = 1) but leaks probability along rows.
``"physical"``
    the same four expressions with the two off-diagonal labels swapped, which
    is what amplitude damping toward |0> actually produces (row-stochastic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UsageError
from .spectral import ModelParams, TwoLevelSpectrum

CONVENTIONS = ("paper", "physical")


@dataclass(frozen=True)
class SpectralDensity:
    """Ohmic spectral density with a hard cutoff."""

    eta: float
    omega_c: float

    def __post_init__(self):
        if self.eta < 0:
            raise DomainError(f"eta must be non-negative, got {self.eta!r}")
        if not self.omega_c > 0:
            raise DomainError(f"omega_c must be positive, got {self.omega_c!r}")

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        out = np.where((w >= 0.0) & (w <= self.omega_c), self.eta * w, 0.0)
        return float(out) if out.ndim == 0 else out

    def over_omega(self, omega):
        """J(ω)/ω, continued to η at ω = 0."""
        w = np.asarray(omega, dtype=float)
        out = np.where((w >= 0.0) & (w <= self.omega_c), self.eta, 0.0)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DecoherenceRates:
    Gamma1: float
    dE0: float
    dE1: float
    Omega10_bar: float
    Gamma0: float = 0.0

    @property
    def gamma(self) -> float:
        return self.Gamma1 / self.Omega10_bar


@dataclass(frozen=True)
class PropagatorElements:
    """Squared vacuum/one-boson propagator elements in the energy eigenbasis.

    ``m00`` = |<0|U_vac|0>|², ``m11`` = |<1|U_vac|1>|², ``mdecay`` is the
    summed one-boson emission probability and ``cross_re`` the interference
    term Re <0|U_vac|0>* <1|U_vac|1>.
    """

    m00: float
    m11: float
    mdecay: float
    cross_re: float
    principal_domain_exceeded: bool = False


@dataclass(frozen=True)
class TransitionMatrix:
    """P_{x→y} for x, y in {-, +}; ``p_mp`` is P_{-→+}."""

    p_mm: float
    p_mp: float
    p_pm: float
    p_pp: float
    convention: str = "paper"
    principal_domain_exceeded: bool = field(default=False, compare=False)

    def prob(self, x: str, y: str) -> float:
        return getattr(self, _field_name(x, y))

    def row_sums(self) -> tuple[float, float]:
        """(P_{-→-} + P_{-→+}, P_{+→-} + P_{+→+})."""
        return (self.p_mm + self.p_mp, self.p_pm + self.p_pp)

    def as_array(self) -> np.ndarray:
        """Rows indexed by the initial well, columns by the final well, order (-, +)."""
        return np.array([[self.p_mm, self.p_mp], [self.p_pm, self.p_pp]])


def _field_name(x: str, y: str) -> str:
    names = {"-": "m", "+": "p"}
    try:
        return f"p_{names[x]}{names[y]}"
    except KeyError:
        raise UsageError(f"well labels must be '+' or '-', got {x!r}, {y!r}") from None


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise UsageError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _require_gap(spectrum: TwoLevelSpectrum) -> float:
    if spectrum.Omega10 is None:
        raise DomainError("rates need a level splitting; build the spectrum from (Delta, delta)")
    return spectrum.Omega10


def relaxation_rate(params: ModelParams, spectrum: TwoLevelSpectrum) -> float:
    """Γ₁ = (2/h̃)|f₀₁|² J(Ω₁₀), evaluated at the exact gap."""
    if not params.htilde > 0:
        raise DomainError(f"htilde must be positive, got {params.htilde!r}")
    omega10 = _require_gap(spectrum)
    J = SpectralDensity(params.eta, params.cutoff(omega10))
    return 2.0 / params.htilde * params.f01**2 * J(omega10)


def energy_shifts(params: ModelParams, spectrum: TwoLevelSpectrum) -> tuple[float, float, float]:
    """Second-order shifts (dE0, dE1) and the dressed splitting Ω̄₁₀.

    With J = ηω on [0, ω_c] the principal-value integrals are logarithms:
    dE0 = (η/π) f₀₁² Ω ln((ω_c+Ω)/Ω) and dE1 = -(η/π) f₀₁² Ω ln((ω_c-Ω)/Ω).
    """
    if not params.htilde > 0:
        raise DomainError(f"htilde must be positive, got {params.htilde!r}")
    omega = _require_gap(spectrum)
    wc = params.cutoff(omega)
    if not wc > omega:
        raise DomainError(f"cutoff omega_c={wc} must exceed the level splitting {omega}")
    pref = params.eta / math.pi * params.f01**2 * omega
    dE0 = pref * math.log((wc + omega) / omega)
    dE1 = -pref * math.log((wc - omega) / omega)
    return dE0, dE1, omega + (dE1 - dE0) / params.htilde


def decoherence_rates(params: ModelParams, spectrum: TwoLevelSpectrum) -> DecoherenceRates:
    Gamma1 = relaxation_rate(params, spectrum)
    dE0, dE1, omega_bar = energy_shifts(params, spectrum)
    if not omega_bar > 0:
        raise DomainError(
            f"dressed splitting {omega_bar} is not positive; the coupling is far outside the weak regime"
        )
    return DecoherenceRates(Gamma1, dE0, dE1, omega_bar)


def propagator_elements(Gamma1: float, Omega10_bar: float, t: float) -> PropagatorElements:
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t!r}")
    if Gamma1 < 0:
        raise DomainError(f"Gamma1 must be non-negative, got {Gamma1!r}")
    decay = math.exp(-Gamma1 * t)
    return PropagatorElements(
        m00=1.0,
        m11=decay,
        mdecay=-math.expm1(-Gamma1 * t),
        cross_re=math.exp(-0.5 * Gamma1 * t) * math.cos(Omega10_bar * t),
        principal_domain_exceeded=Gamma1 * t > 1.0,
    )


def assemble_transition(spectrum: TwoLevelSpectrum, elements: PropagatorElements, x: str, y: str) -> float:
    """P_{x→y} summed from eigenbasis overlaps and propagator elements.

    The emission term pairs the excited-state weight of the initial well with
    the ground-state weight of the final well.
    """
    _field_name(x, y)
    x0, x1 = spectrum.overlaps(x)
    y0, y1 = spectrum.overlaps(y)
    return (
        (y0 * x0) ** 2 * elements.m00
        + (y1 * x1) ** 2 * elements.m11
        + 2.0 * y0 * x0 * y1 * x1 * elements.cross_re
        + y0**2 * x1**2 * elements.mdecay
    )


def closed_form_probabilities(sin2theta_sq: float, decay: float, phase: float, convention: str = "paper") -> TransitionMatrix:
    """The four closed-form probabilities for decay = e^{-Γ₁t} and phase = Ω̄₁₀t."""
    _check_convention(convention)
    if decay == 1.0 and phase == 0.0:
        return TransitionMatrix(1.0, 0.0, 0.0, 1.0, convention)
    s = sin2theta_sq
    c = 1.0 - s
    c2 = c - s
    osc = 2.0 * s * c * math.cos(phase) * math.sqrt(decay)
    minus_to_plus = s + s * c2 * decay - osc
    plus_to_minus = c - c * c2 * decay - osc
    plus_to_plus = c - s * c2 * decay + osc
    minus_to_minus = s + c * c2 * decay + osc
    if convention == "physical":
        minus_to_plus, plus_to_minus = plus_to_minus, minus_to_plus
    return TransitionMatrix(
        p_mm=minus_to_minus,
        p_mp=minus_to_plus,
        p_pm=plus_to_minus,
        p_pp=plus_to_plus,
        convention=convention,
    )


def transition_matrix_paper(
    spectrum: TwoLevelSpectrum,
    Gamma1: float,
    Omega10_bar: float,
    t: float,
    convention: str = "paper",
) -> TransitionMatrix:
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t!r}")
    if Gamma1 < 0:
        raise DomainError(f"Gamma1 must be non-negative, got {Gamma1!r}")
    tm = closed_form_probabilities(spectrum.sin2theta_sq, math.exp(-Gamma1 * t), Omega10_bar * t, convention)
    if Gamma1 * t > 1.0:
        tm = TransitionMatrix(tm.p_mm, tm.p_mp, tm.p_pm, tm.p_pp, convention, principal_domain_exceeded=True)
    return tm


def assembled_matrix(spectrum: TwoLevelSpectrum, Gamma1: float, Omega10_bar: float, t: float) -> TransitionMatrix:
    el = propagator_elements(Gamma1, Omega10_bar, t)
    p = {(x, y): assemble_transition(spectrum, el, x, y) for x in "+-" for y in "+-"}
    return TransitionMatrix(
        p_mm=p["-", "-"],
        p_mp=p["-", "+"],
        p_pm=p["+", "-"],
        p_pp=p["+", "+"],
        convention="physical",
        principal_domain_exceeded=el.principal_domain_exceeded,
    )


def neglected_term_bound(params: ModelParams, spectrum: TwoLevelSpectrum, Gamma1: float, t: float) -> float:
    """Size of the dropped <0|U_vac|1> contribution, (Γ₁t/π)|f₀₀+f₁₁|/(|f₀₁|Ω₁₀)."""
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t!r}")
    if params.f01 == 0:
        raise DomainError("bound is undefined for f01 = 0")
    omega = _require_gap(spectrum)
    return Gamma1 * t / math.pi * abs(params.f00 + params.f11) / (abs(params.f01) * omega)
