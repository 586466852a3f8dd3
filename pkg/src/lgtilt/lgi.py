"""Two-time correlators and the Leggett-Garg quantity K₁ = |C₃₂ - C₃₁| + C₂₁.

Measurements happen at three equally spaced instants t₁ < t₂ < t₃ with
spacing τ/Ω̄₁₀, so each interval contributes a phase τ and a population decay
z = e^{-γτ} where γ = Γ₁/Ω̄₁₀.  Joint probabilities are chained with Bayes'
rule from single-time distributions and the closed-form transition
probabilities.

``k1_assembly`` is the canonical route.  ``k1_paper_closed_form`` evaluates
the fully expanded expression term by term and is only defined for τ = π/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, UsageError
from .kernel import TransitionMatrix, closed_form_probabilities, _check_convention

TAU_DEFAULT = math.pi / 3
VIOLATION_EPS = 1e-12
METHODS = ("assembly", "paper_closed_form")
PAIRS = ((2, 1), (3, 1), (3, 2))


def gamma_from_z(z: float, tau: float) -> float:
    if not 0.0 < z <= 1.0:
        raise DomainError(f"z must lie in (0, 1], got {z!r}")
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    return -math.log(z) / tau


def z_from_gamma(gamma: float, tau: float) -> float:
    if gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma!r}")
    if tau < 0:
        raise DomainError(f"tau must be non-negative, got {tau!r}")
    return math.exp(-gamma * tau)


@dataclass(frozen=True)
class Schedule:
    """Measurement schedule.

    ``initial`` is the single-time distribution (P₊, P₋) at t₁; the default
    starts in the left well.  ``tau = 0`` gives the degenerate schedule where
    all three instants coincide.
    """

    tau: float = TAU_DEFAULT
    gamma: float = 0.0
    initial: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.tau < 0:
            raise DomainError(f"tau must be non-negative, got {self.tau!r}")
        if self.gamma < 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma!r}")
        p_plus, p_minus = self.initial
        if min(p_plus, p_minus) < 0 or abs(p_plus + p_minus - 1.0) > 1e-12:
            raise DomainError(f"initial distribution must be a probability pair, got {self.initial!r}")

    @classmethod
    def from_z(cls, z: float, tau: float = TAU_DEFAULT, initial: tuple[float, float] = (0.0, 1.0)) -> "Schedule":
        return cls(tau, gamma_from_z(z, tau), initial)

    @property
    def z(self) -> float:
        return z_from_gamma(self.gamma, self.tau)

    def times(self, Omega10_bar: float = 1.0) -> tuple[float, float, float]:
        dt = self.tau / Omega10_bar
        return (0.0, dt, 2.0 * dt)


@dataclass(frozen=True)
class CorrelatorSet:
    c21: float
    c31: float
    c32: float


@dataclass(frozen=True)
class LgiResult:
    correlators: Optional[CorrelatorSet]
    k1: float
    method: str
    convention: Optional[str]
    schedule: Schedule
    sin2theta_sq: float
    violated: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "violated", self.k1 > 1.0 + VIOLATION_EPS)


def _transition(sin2theta_sq: float, schedule: Schedule, steps: int, convention: str) -> TransitionMatrix:
    # elapsed time is steps * tau / Omega10_bar: phase steps*tau, decay z**steps
    return closed_form_probabilities(
        sin2theta_sq,
        math.exp(-schedule.gamma * schedule.tau * steps),
        schedule.tau * steps,
        convention,
    )


def _two_time(dist: tuple[float, float], tm: TransitionMatrix) -> float:
    p_plus, p_minus = dist
    return p_plus * (tm.p_pp - tm.p_pm) + p_minus * (tm.p_mm - tm.p_mp)


def correlator(schedule: Schedule, sin2theta_sq: float, i: int, j: int, convention: str = "paper") -> float:
    """C_ij = Σ r q P(q at t_j) P(r at t_i | q at t_j)."""
    if (i, j) not in PAIRS:
        raise UsageError(f"unsupported correlator pair ({i}, {j}); expected one of {PAIRS}")
    _check_convention(convention)
    if not 0.0 <= sin2theta_sq <= 1.0:
        raise DomainError(f"sin^2(theta) must lie in [0, 1], got {sin2theta_sq!r}")
    dist = schedule.initial
    if j == 2:
        step = _transition(sin2theta_sq, schedule, 1, convention)
        p_plus, p_minus = dist
        dist = (p_plus * step.p_pp + p_minus * step.p_mp, p_plus * step.p_pm + p_minus * step.p_mm)
    return _two_time(dist, _transition(sin2theta_sq, schedule, i - j, convention))


def correlators(schedule: Schedule, sin2theta_sq: float, convention: str = "paper") -> CorrelatorSet:
    return CorrelatorSet(*(correlator(schedule, sin2theta_sq, i, j, convention) for i, j in PAIRS))


def k1_assembly(schedule: Schedule, sin2theta_sq: float, convention: str = "paper") -> LgiResult:
    cs = correlators(schedule, sin2theta_sq, convention)
    k1 = abs(cs.c32 - cs.c31) + cs.c21
    return LgiResult(cs, k1, "assembly", convention, schedule, sin2theta_sq)


def k1_paper_closed_form(z: float, sin2theta_sq: float) -> LgiResult:
    """Expanded K₁ with cos τ = 1/2 and cos 2τ = -1/2 already substituted."""
    if not 0.0 < z <= 1.0:
        raise DomainError(f"z must lie in (0, 1], got {z!r}")
    if not 0.0 <= sin2theta_sq <= 1.0:
        raise DomainError(f"sin^2(theta) must lie in [0, 1], got {sin2theta_sq!r}")
    s = sin2theta_sq
    c = 1.0 - s
    c2 = c - s
    rz = math.sqrt(z)
    c21 = s - c + 2 * c * c2 * z + 2 * s * c * rz
    k1 = (
        abs(
            (s - c + 2 * c * c2 * z + 2 * s * c * rz) * (s + c * c2 * z + s * c * rz)
            + (c - s - 2 * s * c2 * z + 2 * s * c * rz) * (c - c * c2 * z - s * c * rz)
            - (s - c + 2 * c * c2 * z**2 - 2 * s * c * z)
        )
        + c21
    )
    return LgiResult(None, k1, "paper_closed_form", None, Schedule.from_z(z, TAU_DEFAULT), s)


def k1(method: str, z: float, sin2theta_sq: float, convention: str = "paper", tau: float = TAU_DEFAULT) -> LgiResult:
    if method == "assembly":
        return k1_assembly(Schedule.from_z(z, tau), sin2theta_sq, convention)
    if method == "paper_closed_form":
        if not math.isclose(tau, TAU_DEFAULT, rel_tol=0, abs_tol=1e-12):
            raise DomainError("the expanded closed form is only defined for tau = pi/3")
        return k1_paper_closed_form(z, sin2theta_sq)
    raise UsageError(f"method must be one of {METHODS}, got {method!r}")


@dataclass(frozen=True)
class ThresholdResult:
    method: str
    convention: Optional[str]
    sin2theta_sq: float
    tau: float
    z_star: Optional[float]
    gamma_star: Optional[float]
    k1_at_z_star: Optional[float]
    iterations: int
    note: str = ""


Z_BRACKET = (1e-6, 1.0)
MAX_ITER = 200
MONOTONE_SAMPLES = 33


def violation_threshold(
    sin2theta_sq: float,
    method: str = "paper_closed_form",
    convention: str = "paper",
    tau: float = TAU_DEFAULT,
    tol: float = 1e-9,
) -> ThresholdResult:
    """Smallest z for which K₁ still exceeds 1, found by bisection.

    Returns a result with ``z_star=None`` when K₁ ≤ 1 on the whole bracket.
    Raises ``DomainError`` when K₁(z) is not increasing across the bracket.
    """
    conv = convention if method == "assembly" else None

    def f(z: float) -> float:
        return k1(method, z, sin2theta_sq, convention, tau).k1 - 1.0

    lo, hi = Z_BRACKET
    f_lo, f_hi = f(lo), f(hi)
    if f_hi <= 0.0:
        return ThresholdResult(method, conv, sin2theta_sq, tau, None, None, None, 0, "K1 <= 1 at z = 1; no violation")
    if f_lo > 0.0:
        return ThresholdResult(
            method, conv, sin2theta_sq, tau, None, None, None, 0, f"K1 > 1 already at z = {lo:g}; no threshold inside bracket"
        )
    samples = [f(z) for z in np.linspace(lo, hi, MONOTONE_SAMPLES)]
    if any(b <= a for a, b in zip(samples, samples[1:])):
        raise DomainError(f"K1(z) is not strictly increasing on [{lo:g}, {hi:g}] for sin^2(theta)={sin2theta_sq}")

    z = 0.5 * (lo + hi)
    for it in range(1, MAX_ITER + 1):
        z = 0.5 * (lo + hi)
        fz = f(z)
        if abs(fz) <= tol:
            break
        if fz > 0.0:
            hi = z
        else:
            lo = z
    else:
        raise DomainError(f"bisection did not reach |K1 - 1| <= {tol:g} in {MAX_ITER} iterations")
    return ThresholdResult(method, conv, sin2theta_sq, tau, z, gamma_from_z(z, tau), fz + 1.0, it)


@dataclass(frozen=True)
class SweepRow:
    fixed: float
    value: float
    k1_paper: Optional[float]
    k1_assembly: float
    violated_paper: Optional[bool]
    violated_assembly: bool


FIG1_SIN2THETA = 0.2
FIG2_Z_VALUES = (0.6, 0.5, 0.4)


def sweep(
    axis: str,
    fixed: Sequence[float],
    grid: Sequence[float],
    convention: str = "paper",
    tau: float = TAU_DEFAULT,
) -> list[SweepRow]:
    """K₁ by both methods along ``axis`` ("z" or "sin2theta") for each fixed value.

    Rows are ordered by fixed value first, then grid order.  The closed-form
    column is ``None`` when τ differs from π/3.
    """
    if axis not in ("z", "sin2theta"):
        raise UsageError(f"axis must be 'z' or 'sin2theta', got {axis!r}")
    grid = [float(g) for g in grid]
    if not grid:
        raise UsageError("sweep grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError("sweep grid must be strictly increasing")
    if not fixed:
        raise UsageError("sweep needs at least one fixed value")
    _check_convention(convention)
    closed = math.isclose(tau, TAU_DEFAULT, rel_tol=0, abs_tol=1e-12)

    rows = []
    for f in fixed:
        for g in grid:
            z, s = (g, f) if axis == "z" else (f, g)
            a = k1("assembly", z, s, convention, tau)
            p = k1_paper_closed_form(z, s) if closed else None
            rows.append(
                SweepRow(
                    fixed=float(f),
                    value=g,
                    k1_paper=None if p is None else p.k1,
                    k1_assembly=a.k1,
                    violated_paper=None if p is None else p.violated,
                    violated_assembly=a.violated,
                )
            )
    return rows
