"""Numerical lower bounds for diagonal heat kernels of (-Delta)^m + V."""

from heatbound.core import Hypothesis, ProblemSpec, Regime, bracket, classify_regime, rho

__all__ = [
    "Hypothesis",
    "ProblemSpec",
    "Regime",
    "bracket",
    "classify_regime",
    "rho",
]

__version__ = "0.1.0"
