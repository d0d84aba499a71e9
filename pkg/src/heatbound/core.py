"""Problem parameters, the regularised bracket and regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

#: Potentials the grid lab knows how to sample.
POTENTIALS = ("canonical", "harmonic", "zero")


@dataclass(frozen=True)
class ProblemSpec:
    """Parameters of H = (-Delta)^m + V with V(x) <= c2 <x>^gamma.

    ``potential`` selects V: ``"canonical"`` is c2 <x>^gamma itself,
    ``"harmonic"`` is x^2 and ``"zero"`` is V = 0.
    """

    N: int = 1
    m: int = 2
    c1: float = 1.0
    c2: float = 1.0
    gamma: float = 2.0
    potential: str = "canonical"

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if 2 * self.m <= self.N:
            raise ValueError(f"2m > N is required (m={self.m}, N={self.N})")
        if not self.c1 >= 1.0:
            raise ValueError(f"c1 must be >= 1, got {self.c1}")
        if not self.c2 > 0.0:
            raise ValueError(f"c2 must be > 0, got {self.c2}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.potential not in POTENTIALS:
            raise ValueError(f"unknown potential {self.potential!r}; expected one of {POTENTIALS}")

    @property
    def rho(self) -> float:
        return rho(self)

    @property
    def order_ratio(self) -> float:
        """2m/N - 1, the quantity that keeps appearing in the beta optimisers."""
        return 2.0 * self.m / self.N - 1.0

    def potential_values(self, x):
        """Sample V at positions ``x``."""
        x = np.asarray(x, dtype=float)
        if self.potential == "canonical":
            return self.c2 * bracket(x, self.rho) ** self.gamma
        if self.potential == "harmonic":
            return x**2
        return np.zeros_like(x)

    def potential_bound(self, x):
        return self.c2 * bracket(x, self.rho) ** self.gamma


@dataclass(frozen=True)
class Hypothesis:
    """Envelope k(t, x, x) < sigma <x>^-mu t^-lambda assumed on the kernel."""

    sigma: float
    mu: float
    lam: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not self.mu > 0.0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {self.lam}")


class Regime(str, enum.Enum):
    LATE = "Late"
    EARLY = "Early"


def rho(spec: ProblemSpec) -> float:
    """Bracket regulariser max{1, (2m/N - 1)^(1/m)}."""
    if 2 * spec.m <= spec.N:
        raise ValueError(f"2m > N is required (m={spec.m}, N={spec.N})")
    return max(1.0, (2.0 * spec.m / spec.N - 1.0) ** (1.0 / spec.m))


def bracket(x, rho: float):
    """sqrt(|x|^2 + rho), elementwise.

    ``x`` is a scalar position or an array of them. For N > 1 pass |x|;
    only the norm enters.
    """
    if np.ndim(x) == 0:
        return math.sqrt(float(x) ** 2 + rho)
    x = np.asarray(x, dtype=float)
    return np.sqrt(x**2 + rho)


def classify_regime(t: float, x, spec: ProblemSpec) -> Regime:
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    # the boundary <x>^gamma t == 1 goes to Late
    if bracket(x, spec.rho) ** spec.gamma * t >= 1.0:
        return Regime.LATE
    return Regime.EARLY
