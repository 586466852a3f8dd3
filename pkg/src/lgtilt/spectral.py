"""Isolated two-level model of a tilted double well.

The localized well states |+> (right) and |-> (left) are mixed by the
tunneling element into the energy eigenstates |0> and |1>.  Everything is
expressed in dimensionless units: energies in units of h̃, times in units of
the characteristic time tau0.

The mixing angle is never stored as an angle.  ``sin2theta_sq`` (sin²θ) and
``cos_2theta`` are the canonical quantities.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

WELLS = ("+", "-")


@dataclass(frozen=True)
class ScaleSet:
    R0: float
    U0: float
    M: float
    hbar: float
    tau0: float
    P0: float
    htilde: float


def derive_scales(R0: float, U0: float, M: float, hbar: float) -> ScaleSet:
    """Characteristic time, momentum and the dimensionless action h̃ = hbar/(P0 R0)."""
    for name, value in (("R0", R0), ("U0", U0), ("M", M), ("hbar", hbar)):
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")
    tau0 = R0 * math.sqrt(M / U0)
    P0 = M * R0 / tau0
    return ScaleSet(R0, U0, M, hbar, tau0, P0, hbar / (P0 * R0))


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs of the tilted double well coupled to an ohmic bath.

    ``tilt`` is δ (may be negative), ``tunneling`` is Δ.  ``omega_c=None``
    selects the default hard cutoff of 100 times the level splitting.
    """

    tunneling: float
    tilt: float = 0.0
    htilde: float = 0.1
    eta: float = 0.0
    f00: float = 0.0
    f01: float = 1.0
    f11: float = 0.0
    omega_c: Optional[float] = None

    def __post_init__(self):
        if not self.tunneling > 0:
            raise DomainError(f"tunneling strength must be positive, got {self.tunneling!r}")
        if self.eta < 0:
            raise DomainError(f"coupling eta must be non-negative, got {self.eta!r}")
        if self.omega_c is not None and not self.omega_c > 0:
            raise DomainError(f"cutoff omega_c must be positive, got {self.omega_c!r}")
        if self.htilde > 0 and self.eta >= self.htilde and self.eta > 0:
            warnings.warn(
                f"eta={self.eta} is not small compared to htilde={self.htilde}; "
                "weak-coupling results are outside their validity regime",
                RuntimeWarning,
                stacklevel=3,
            )

    def cutoff(self, omega10: float) -> float:
        return 100.0 * omega10 if self.omega_c is None else self.omega_c


@dataclass(frozen=True)
class TwoLevelSpectrum:
    """Level splitting and mixing of the well states.

    When built from sin²θ alone (``from_sin2theta``) the spectral fields
    ``Omega10``, ``A`` and ``B`` are ``None``.
    """

    sin2theta_sq: float
    Omega10: Optional[float] = None
    A: Optional[float] = None
    B: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.sin2theta_sq <= 1.0:
            raise DomainError(f"sin^2(theta) must lie in [0, 1], got {self.sin2theta_sq!r}")

    @classmethod
    def from_sin2theta(cls, sin2theta_sq: float) -> "TwoLevelSpectrum":
        return cls(float(sin2theta_sq))

    @property
    def cos2theta_sq(self) -> float:
        if self.A is not None:
            return self.A / (self.A + self.B)
        return 1.0 - self.sin2theta_sq

    @property
    def cos_2theta(self) -> float:
        return self.cos2theta_sq - self.sin2theta_sq

    @property
    def sin_2theta(self) -> float:
        return 2.0 * math.sqrt(self.sin2theta_sq * self.cos2theta_sq)

    @property
    def coeffs(self) -> tuple[float, float, float, float]:
        """(a, b, a', b') with |+> = a|0> + b|1> and |-> = a'|0> + b'|1>."""
        s = math.sqrt(self.sin2theta_sq)
        c = math.sqrt(self.cos2theta_sq)
        return (-c, s, s, c)

    def overlaps(self, well: str) -> tuple[float, float]:
        """Overlaps (<0|well>, <1|well>) of a well state with the eigenstates."""
        a, b, a_, b_ = self.coeffs
        if well == "+":
            return a, b
        if well == "-":
            return a_, b_
        raise DomainError(f"well label must be '+' or '-', got {well!r}")

    def eigenvalues(self, htilde: float) -> tuple[float, float]:
        if self.Omega10 is None:
            raise DomainError("spectrum built from sin^2(theta) alone carries no level splitting")
        half = 0.5 * htilde * self.Omega10
        return (-half, half)


def derive_spectrum(params: ModelParams) -> TwoLevelSpectrum:
    Delta, delta = params.tunneling, params.tilt
    if not Delta > 0:
        raise DomainError(f"tunneling strength must be positive, got {Delta!r}")
    omega10 = math.hypot(Delta, delta)
    A = omega10 - delta
    B = omega10 + delta
    return TwoLevelSpectrum(B / (A + B), omega10, A, B)


def isolated_tunneling_prob(spectrum: TwoLevelSpectrum, t: float) -> float:
    """Left-to-right tunneling probability without the bath, Δ²/Ω₁₀² sin²(Ω₁₀ t/2)."""
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t!r}")
    if spectrum.Omega10 is None:
        raise DomainError("spectrum built from sin^2(theta) alone carries no level splitting")
    amplitude = spectrum.A * spectrum.B / spectrum.Omega10**2
    return amplitude * math.sin(0.5 * spectrum.Omega10 * t) ** 2
