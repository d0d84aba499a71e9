"""Closed-form inequality engine.

Every function here is pure. Unnamed "some constant c" factors are never
guessed: :func:`green_form_value` returns constant-free structural values,
:func:`theorem_bound` takes ``c`` explicitly, and :func:`certified_delta`
tracks every constant it uses.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, optimize

from heatbound.core import Hypothesis, ProblemSpec, Regime, bracket, classify_regime

#: Upper clamp for test-function exponents, which must stay below 1.
BETA_MAX = 1.0 - 1e-9
ALPHA_RANGE = (0.01, 0.49)
QUAD_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class AboutConstant:
    value: float
    alpha: float
    lam: float


@dataclass(frozen=True)
class CertifiedDelta:
    delta_min: float
    exponent_arg: float
    C: float


class BetaChoice(NamedTuple):
    value: float
    raw: float
    clamped: bool
    degenerate: bool


def _check_open_unit(name, value):
    v = np.asarray(value, dtype=float)
    if np.any(~((v > 0.0) & (v < 1.0))):
        raise ValueError(f"{name} must lie in (0, 1), got {value}")


def interpolation_exponent(alpha, s):
    """Solve p + (1 - p) alpha s = s for p.

    Works elementwise on arrays.
    """
    _check_open_unit("alpha", alpha)
    sv = np.asarray(s, dtype=float)
    if np.any(~((sv > 0.0) & (sv <= 1.0))):
        raise ValueError(f"s must lie in (0, 1], got {s}")
    p = s * (1.0 - alpha) / (1.0 - alpha * s)
    return float(p) if np.ndim(p) == 0 else p


def gamma_lemma_pair(lam, delta):
    """Both sides of (1-lam)^(1-lam) e^(lam-1) (ln 1/delta)^(lam-1) > delta."""
    _check_open_unit("lambda", lam)
    _check_open_unit("delta", delta)
    lhs = (1.0 - lam) ** (1.0 - lam) * np.exp(lam - 1.0) * np.log(1.0 / np.asarray(delta)) ** (lam - 1.0)
    if np.ndim(lhs) == 0:
        return float(lhs), float(delta)
    return lhs, np.broadcast_to(np.asarray(delta, dtype=float), lhs.shape)


def about_constant(alpha: float, lam: float) -> AboutConstant:
    """Gamma(1-lam)/alpha + (1-lam)^(1-lam) e^(lam-2)."""
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    _check_open_unit("lambda", lam)
    value = math.gamma(1.0 - lam) / alpha + (1.0 - lam) ** (1.0 - lam) * math.exp(lam - 2.0)
    return AboutConstant(value=value, alpha=alpha, lam=lam)


def about_rhs(alpha: float, lam: float, delta: float) -> float:
    return about_constant(alpha, lam).value * math.log(1.0 / delta) ** (lam - 1.0)


def _interp_integral(alpha: float, lam: float, delta: float, tol: float = QUAD_TOL) -> float:
    """int_0^1 (alpha s)^-lam delta^p(s) ds.

    With s = tau^(1/(1-lam)) the s^-lam singularity cancels against the
    Jacobian, leaving a bounded integrand on [0, 1].
    """
    k = 1.0 / (1.0 - lam)
    log_delta = math.log(delta)

    def integrand(tau):
        if tau <= 0.0:
            return 1.0
        s = tau**k
        p = s * (1.0 - alpha) / (1.0 - alpha * s)
        return math.exp(p * log_delta)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=tol * 0.1, epsrel=0.0, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature failed for alpha={alpha}, lambda={lam}, delta={delta}: {exc}") from exc
    if not err <= tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds {tol:.3g}")
    return alpha ** (-lam) * k * val


def about_lhs(alpha: float, lam: float, delta: float) -> float:
    """int_0^1 (alpha s)^-lam delta^p(s) ds + delta/e.

    Raises :class:`QuadratureError` instead of returning an unconverged value.
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    _check_open_unit("lambda", lam)
    _check_open_unit("delta", delta)
    return _interp_integral(alpha, lam, delta) + delta / math.e


def green_form_value(t: float, x, beta: float, spec: ProblemSpec) -> float:
    """<x>^(beta N) (t <x>^(-2 m beta) + t <x>^gamma + 1)."""
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    b = bracket(x, spec.rho)
    return b ** (beta * spec.N) * (t * b ** (-2 * spec.m * beta) + t * b**spec.gamma + 1.0)


def _clamp(raw: float, floor: float, degenerate: bool = False) -> BetaChoice:
    value = min(max(raw, floor), BETA_MAX)
    return BetaChoice(value, raw, value != raw, degenerate)


def choose_beta_late(x, spec: ProblemSpec, floor: float = -math.inf) -> BetaChoice:
    ratio = spec.order_ratio
    if ratio <= 0.0:
        raise ValueError("2m = N makes the logarithm degenerate")
    log_ratio = math.log(ratio)
    log_b = math.log(bracket(x, spec.rho))
    if log_ratio == 0.0:
        return _clamp(-spec.gamma / (2 * spec.m), floor)
    if log_b == 0.0:
        return _clamp(math.copysign(math.inf, log_ratio), floor, degenerate=True)
    return _clamp((log_ratio / log_b - spec.gamma) / (2 * spec.m), floor)


def choose_beta_early(t: float, x, spec: ProblemSpec, floor: float = -math.inf) -> BetaChoice:
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    log_b = math.log(bracket(x, spec.rho))
    if log_b == 0.0:
        return BetaChoice(0.0, math.nan, False, True)
    return _clamp((math.log(spec.order_ratio) + math.log(t)) / (2 * spec.m * log_b), floor)


def choose_beta(t: float, x, spec: ProblemSpec, floor: float = -math.inf) -> tuple[Regime, BetaChoice]:
    regime = classify_regime(t, x, spec)
    if regime is Regime.LATE:
        return regime, choose_beta_late(x, spec, floor)
    return regime, choose_beta_early(t, x, spec, floor)


def beta_late(x, spec: ProblemSpec, floor: float = -math.inf) -> float:
    """Minimiser of <x>^(beta N) (<x>^(-2 m beta) + <x>^gamma) over beta < 1.

    The stationary point is (ln(2m/N - 1)/ln<x> - gamma)/(2m); it stays
    below 1 because 2m/N - 1 < <x>^(2m + gamma). Values are clamped to
    [floor, 1).
    """
    return choose_beta_late(x, spec, floor).value


def beta_early(t: float, x, spec: ProblemSpec, floor: float = -math.inf) -> float:
    """Minimiser of <x>^(beta N) (t <x>^(-2 m beta) + 1), clamped to [floor, 1).

    At <x> = 1 the formula divides by zero; 0 is returned and
    :func:`choose_beta_early` reports the degeneracy.
    """
    return choose_beta_early(t, x, spec, floor).value


def u_reference(t, x, hyp: Hypothesis, rho: float):
    """sigma <x>^-mu t^-lambda."""
    t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
    if np.any(np.asarray(t) <= 0.0):
        raise ValueError("t must be > 0")
    return hyp.sigma * bracket(x, rho) ** (-hyp.mu) * t ** (-hyp.lam)


def optimal_alpha(lam: float) -> float:
    """Minimise C(alpha, lam) over alpha in [0.01, 0.49]."""
    _check_open_unit("lambda", lam)
    res = optimize.minimize_scalar(
        lambda a: about_constant(a, lam).value,
        bounds=ALPHA_RANGE,
        method="bounded",
        options={"xatol": 1e-6},
    )
    return float(res.x)


def certified_delta(v_star: float, u_val: float, alpha: float, lam: float) -> CertifiedDelta:
    """Invert the inequality chain for a lower bound on k/u.

    If u majorises the kernel on (0, t], then
    k(t, x, x) >= u * exp(-(C u / v_star)^(1/(1-lam))).
    """
    if not v_star > 0.0:
        raise ValueError(f"v_star must be > 0, got {v_star}")
    if not u_val > 0.0:
        raise ValueError(f"u_val must be > 0, got {u_val}")
    C = about_constant(alpha, lam).value
    log_arg = math.log(C * u_val / v_star) / (1.0 - lam)
    arg = math.exp(log_arg) if log_arg < 709.0 else math.inf
    return CertifiedDelta(delta_min=math.exp(-arg), exponent_arg=arg, C=C)


def theorem_exponent_shape(t: float, x, hyp: Hypothesis, spec: ProblemSpec, regime: Regime | None = None) -> float:
    """The t, <x> dependence multiplying c in the exponent of the lower bound."""
    b = bracket(x, spec.rho)
    if regime is None:
        regime = classify_regime(t, x, spec)
    q = spec.N / (2 * spec.m)
    if regime is Regime.LATE:
        return b ** (((1.0 - q) * spec.gamma - hyp.mu) / (1.0 - hyp.lam)) * t
    return b ** (-hyp.mu / (1.0 - hyp.lam)) * t ** ((q - hyp.lam) / (1.0 - hyp.lam))


def theorem_bound(t: float, x, hyp: Hypothesis, spec: ProblemSpec, c: float) -> float:
    """u(t, x) exp(-c * shape) in the regime picked by :func:`classify_regime`."""
    if not c > 0.0:
        raise ValueError(f"c must be > 0, got {c}")
    u = u_reference(t, x, hyp, spec.rho)
    return u * math.exp(-c * theorem_exponent_shape(t, x, hyp, spec))
