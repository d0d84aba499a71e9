import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heatbound import bounds
from heatbound.core import Hypothesis, ProblemSpec, Regime, bracket

SPEC = ProblemSpec()  # N=1, m=2, gamma=2, rho=sqrt(3)
unit = st.floats(1e-3, 1 - 1e-3)


def x_with_bracket(b, spec=SPEC):
    return math.sqrt(b * b - spec.rho)


# -- interpolation exponent ---------------------------------------------------


def test_interpolation_exponent_examples():
    assert bounds.interpolation_exponent(0.5, 0.5) == pytest.approx(1 / 3, rel=1e-15)
    assert bounds.interpolation_exponent(1e-12, 0.3) == pytest.approx(0.3, rel=1e-10)
    assert bounds.interpolation_exponent(0.7, 1.0) == 1.0


def test_interpolation_exponent_defining_equation_on_grid():
    a, s = np.meshgrid(np.linspace(0.005, 0.995, 100), np.linspace(0.01, 1.0, 100), indexing="ij")
    p = bounds.interpolation_exponent(a, s)
    assert np.max(np.abs(p + (1 - p) * a * s - s)) < 1e-14
    assert np.all((p > 0) & (p <= 1))


def test_interpolation_exponent_dominates_alpha_s():
    # p(s) >= alpha s, which the substitution step in the integral lemma needs
    a, s = np.meshgrid(np.linspace(0.01, 0.49, 49), np.linspace(0.01, 1.0, 100), indexing="ij")
    assert np.all(bounds.interpolation_exponent(a, s) > a * s)


@pytest.mark.parametrize("alpha, s", [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.5)])
def test_interpolation_exponent_rejects_out_of_range(alpha, s):
    with pytest.raises(ValueError):
        bounds.interpolation_exponent(alpha, s)


# -- gamma lemma --------------------------------------------------------------


def test_gamma_lemma_pair_examples():
    lhs, rhs = bounds.gamma_lemma_pair(0.5, math.exp(-1))
    assert lhs == pytest.approx(0.428881942480353, rel=1e-12)
    assert rhs == pytest.approx(0.36787944117144233, rel=1e-15)
    # mpmath: 0.282637587120334503...
    lhs, rhs = bounds.gamma_lemma_pair(0.5, 0.1)
    assert lhs == pytest.approx(0.2826375871203345, rel=1e-12)
    assert rhs == 0.1
    lhs, _ = bounds.gamma_lemma_pair(0.5, 1 - 1e-12)
    assert lhs > 1e5


@pytest.mark.parametrize("delta", [0.0, 1.0])
def test_gamma_lemma_rejects_degenerate_delta(delta):
    with pytest.raises(ValueError):
        bounds.gamma_lemma_pair(0.5, delta)


@given(unit, unit)
def test_gamma_lemma_strict(lam, delta):
    lhs, rhs = bounds.gamma_lemma_pair(lam, delta)
    assert lhs > rhs


# -- integral lemma -----------------------------------------------------------


def test_about_constant_examples():
    # sqrt(pi)/0.25 + 0.5^0.5 e^-1.5, mpmath 7.24759225295025918...
    assert bounds.about_constant(0.25, 0.5).value == pytest.approx(7.247592252950259, rel=1e-12)
    assert bounds.about_constant(0.25, 1e-12).value == pytest.approx(4 + math.exp(-2), rel=1e-10)
    # mpmath 17.8823153583833553...
    assert bounds.about_constant(0.1, 0.5).value == pytest.approx(17.882315358383355, rel=1e-12)


def test_about_constant_rejects_alpha_half():
    with pytest.raises(ValueError):
        bounds.about_constant(0.5, 0.5)


def test_math_gamma_reflection_identity():
    for z in np.linspace(0.05, 0.95, 19):
        assert math.gamma(z) * math.gamma(1 - z) == pytest.approx(math.pi / math.sin(math.pi * z), rel=1e-13)


@pytest.mark.parametrize(
    "alpha, lam, delta, expected",
    [
        # mpmath quadrature, 30 digits
        (0.25, 0.5, math.exp(-1), 3.224114841361547),
        (0.1, 0.3, 0.01, 0.9313396428016518),
        (0.45, 0.9, 1e-4, 16.44728251394232),
        (0.05, 0.1, 0.9, 1.759246334485321),
    ],
)
def test_about_lhs_oracle(alpha, lam, delta, expected):
    assert bounds.about_lhs(alpha, lam, delta) == pytest.approx(expected, abs=1e-9)


def test_about_lhs_below_about_constant_example():
    assert bounds.about_lhs(0.25, 0.5, math.exp(-1)) < bounds.about_rhs(0.25, 0.5, math.exp(-1))


def test_about_lhs_delta_to_one_limit():
    # int_0^1 (alpha s)^-lam ds = alpha^-lam/(1-lam) = 4
    assert bounds.about_lhs(0.25, 0.5, 1 - 1e-12) == pytest.approx(4 + math.exp(-1), rel=1e-9)


def test_about_lhs_decreases_as_delta_shrinks():
    vals = [bounds.about_lhs(0.25, 0.5, d) for d in (1e-1, 1e-3, 1e-6, 1e-12, 1e-50)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@given(st.floats(0.02, 0.48), st.floats(0.05, 0.95), st.floats(1e-6, 0.99))
def test_integral_lemma_random(alpha, lam, delta):
    assert bounds.about_lhs(alpha, lam, delta) < bounds.about_rhs(alpha, lam, delta)


# -- beta selection -----------------------------------------------------------


def test_green_form_value_examples():
    x = x_with_bracket(math.e)
    assert bounds.green_form_value(1.0, x, 0.25, SPEC) == pytest.approx(math.exp(0.25) * (math.exp(-1) + math.exp(2) + 1), rel=1e-13)
    assert bounds.green_form_value(0.7, x, 0.0, SPEC) == pytest.approx(0.7 + 0.7 * math.e**2 + 1, rel=1e-13)
    assert bounds.green_form_value(1e-300, x, 0.4, SPEC) == pytest.approx(math.exp(0.4), rel=1e-13)


def test_beta_late_examples():
    assert bounds.beta_late(x_with_bracket(math.e), SPEC) == pytest.approx((math.log(3) - 2) / 4, rel=1e-13)
    spec1 = ProblemSpec(N=1, m=1, gamma=1.7)
    assert bounds.beta_late(3.0, spec1) == pytest.approx(-1.7 / 2, rel=1e-14)
    assert bounds.beta_late(1e150, SPEC) == pytest.approx(-0.5, abs=1e-2)


def test_beta_late_floor_and_flag():
    choice = bounds.choose_beta_late(x_with_bracket(math.e), SPEC, floor=0.0)
    assert choice.value == 0.0 and choice.clamped
    assert choice.raw == pytest.approx((math.log(3) - 2) / 4)


def test_beta_late_rejects_degenerate_order():
    spec = ProblemSpec(N=1, m=1)
    object.__setattr__(spec, "N", 2)  # bypass validation to reach the guard
    with pytest.raises(ValueError):
        bounds.beta_late(1.0, spec)


def test_beta_early_examples():
    xe = x_with_bracket(math.e)
    assert bounds.beta_early(1 / 3, xe, SPEC) == pytest.approx(0.0, abs=1e-15)
    assert bounds.beta_early(1.0, xe, SPEC) == pytest.approx(math.log(3) / 4, rel=1e-13)
    spec1 = ProblemSpec(N=1, m=1)
    assert bounds.beta_early(0.5, math.sqrt(math.e**2 - 1), spec1) == pytest.approx(math.log(0.5) / 2, rel=1e-13)
    clamped = bounds.choose_beta_early(0.5, math.sqrt(math.e**2 - 1), spec1, floor=0.0)
    assert clamped.value == 0.0 and clamped.clamped


def test_beta_early_degenerate_bracket():
    choice = bounds.choose_beta_early(0.1, 0.0, ProblemSpec(N=1, m=1))
    assert choice.degenerate and choice.value == 0.0


def test_beta_upper_clamp():
    # huge t pushes the Early formula past 1
    choice = bounds.choose_beta_early(1e30, 1.0, SPEC)
    assert choice.value == bounds.BETA_MAX and choice.clamped


admissible_spec = st.builds(
    lambda nm, g: ProblemSpec(N=nm[0], m=nm[1], gamma=g),
    st.tuples(st.integers(1, 3), st.integers(1, 4)).filter(lambda nm: 2 * nm[1] > nm[0]),
    st.floats(0.2, 4.0),
)


def late_reduced(beta, b, spec):
    return b ** (beta * spec.N) * (b ** (-2 * spec.m * beta) + b**spec.gamma)


def early_reduced(beta, t, b, spec):
    return b ** (beta * spec.N) * (t * b ** (-2 * spec.m * beta) + 1)


@given(admissible_spec, st.floats(0.5, 50))
def test_beta_late_first_order_optimal(spec, x):
    beta = bounds.beta_late(x, spec)
    b = bracket(x, spec.rho)
    assert beta < 1
    f0 = late_reduced(beta, b, spec)
    for d in (-0.05, 0.05):
        assert f0 <= late_reduced(beta + d, b, spec) * (1 + 1e-12)


@given(admissible_spec, st.floats(0.5, 50), st.floats(1e-4, 1.0))
def test_beta_early_first_order_optimal(spec, x, t):
    beta = bounds.beta_early(t, x, spec)
    b = bracket(x, spec.rho)
    f0 = early_reduced(beta, t, b, spec)
    for d in (-0.05, 0.05):
        assert f0 <= early_reduced(beta + d, t, b, spec) * (1 + 1e-12)


def test_choose_beta_dispatches_on_regime():
    regime, _ = bounds.choose_beta(10.0, 0.0, SPEC)
    assert regime is Regime.LATE
    regime, _ = bounds.choose_beta(0.01, 0.0, SPEC)
    assert regime is Regime.EARLY


# -- envelope and certificate -------------------------------------------------


def test_u_reference_examples():
    assert bounds.u_reference(4.0, math.sqrt(16 - 1), Hypothesis(2.0, 1.0, 0.5), 1.0) == pytest.approx(0.25, rel=1e-14)
    h = Hypothesis(1.0, 1e-12, 1e-12)
    assert bounds.u_reference(7.0, 3.0, h, 1.0) == pytest.approx(1.0, rel=1e-10)
    h = Hypothesis(1.3, 0.7, 0.5)
    assert bounds.u_reference(2.0, 1.0, h, 1.0) / bounds.u_reference(4.0, 1.0, h, 1.0) == pytest.approx(math.sqrt(2), rel=1e-14)


@given(st.floats(1e-3, 10), st.floats(1e-3, 10), st.floats(0, 10))
def test_u_reference_decreasing(t, dt, x):
    h = Hypothesis(1.0, 0.5, 0.4)
    assert bounds.u_reference(t + dt, x, h, 1.0) < bounds.u_reference(t, x, h, 1.0)
    assert bounds.u_reference(t, x + 1.0, h, 1.0) < bounds.u_reference(t, x, h, 1.0)


def test_certified_delta_examples():
    C = bounds.about_constant(0.25, 0.5).value
    cd = bounds.certified_delta(C / 4, 1.0, 0.25, 0.5)
    assert cd.exponent_arg == pytest.approx(16.0, rel=1e-14)
    assert cd.delta_min == pytest.approx(1.1253517471925912e-07, rel=1e-12)
    cd = bounds.certified_delta(C, 1.0, 0.25, 0.5)
    assert cd.delta_min == pytest.approx(math.exp(-1), rel=1e-14)
    cd = bounds.certified_delta(C / 2, 1.0, 0.25, 1 - 1e-3)
    assert cd.delta_min == 0.0


def test_certified_delta_rejects_zero_vstar():
    with pytest.raises(ValueError):
        bounds.certified_delta(0.0, 1.0, 0.25, 0.5)


@given(st.floats(1e-4, 10), st.floats(1e-3, 10), st.floats(0.02, 0.48), st.floats(0.05, 0.95))
def test_certified_delta_round_trip(v_star, u_val, alpha, lam):
    cd = bounds.certified_delta(v_star, u_val, alpha, lam)
    assert cd.exponent_arg ** (1 - lam) * v_star == pytest.approx(cd.C * u_val, rel=1e-12)


@given(st.floats(1e-3, 1.0), st.floats(1.0001, 2.0))
def test_certified_delta_monotone_in_vstar(v_star, factor):
    lo = bounds.certified_delta(v_star, 1.0, 0.3, 0.4).delta_min
    hi = bounds.certified_delta(v_star * factor, 1.0, 0.3, 0.4).delta_min
    assert hi >= lo


def test_optimal_alpha_minimises_constant():
    for lam in (0.1, 0.5, 0.9):
        a = bounds.optimal_alpha(lam)
        assert bounds.ALPHA_RANGE[0] <= a <= bounds.ALPHA_RANGE[1]
        grid = np.linspace(*bounds.ALPHA_RANGE, 200)
        best = min(bounds.about_constant(float(g), lam).value for g in grid)
        assert bounds.about_constant(a, lam).value <= best * (1 + 1e-6)


def test_theorem_bound_examples():
    spec = ProblemSpec(N=1, m=2, gamma=2.0)
    x2 = x_with_bracket(2.0, spec)
    h = Hypothesis(1.0, 1e-12, 0.5)
    # Late: exponent <x>^((3/2)/(1/2)) t = 8
    assert bounds.theorem_bound(1.0, x2, h, spec, 1.0) == pytest.approx(0.5**1e-12 * math.exp(-8), rel=1e-9)
    h = Hypothesis(1.0, 1.0, 1e-12)
    assert bounds.theorem_bound(0.0625, x2, h, spec, 1.0) == pytest.approx(0.5 * math.exp(-0.25), rel=1e-9)
    assert bounds.theorem_bound(0.0625, x2, h, spec, 1e-300) == pytest.approx(bounds.u_reference(0.0625, x2, h, spec.rho))


@given(st.floats(1e-3, 5), st.floats(0, 5), st.floats(0.01, 5), st.floats(1.01, 3))
def test_theorem_bound_monotone_in_c(t, x, c, factor):
    h = Hypothesis(1.0, 0.5, 0.4)
    lo = bounds.theorem_bound(t, x, h, SPEC, c * factor)
    hi = bounds.theorem_bound(t, x, h, SPEC, c)
    assert lo <= hi <= bounds.u_reference(t, x, h, SPEC.rho)


def test_theorem_bound_rejects_nonpositive_c():
    with pytest.raises(ValueError):
        bounds.theorem_bound(1.0, 0.0, Hypothesis(1, 1, 0.5), SPEC, 0.0)
