"""Envelope fitting, lemma checks and end-to-end certification.

Failures are data here: a certificate that cannot be computed still yields
a row, carrying a tag that says which stage broke.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from heatbound import bounds
from heatbound.bounds import QuadratureError
from heatbound.config import Config
from heatbound.core import Hypothesis, ProblemSpec, Regime, bracket
from heatbound.operator_lab import (
    MIN_TRANSITION_NODES,
    MAX_NODES,
    Grid1D,
    SpectralData,
    SpectralError,
    SupportError,
    assemble_operator,
    build_test_function,
    greens_diag,
    heat_kernel_diag,
    norm_sq,
    quadratic_form,
    spectral_decompose,
    variational_green,
)

log = logging.getLogger(__name__)

INTERP_SLACK = 1e-10
VARIATIONAL_SLACK = 1e-10
RESOLVENT_RTOL = 1e-8
LAMBDA_CAP = 1.0 - 1e-6
MU_FLOOR = 1e-9

TAGS_FAILURE = ("support", "degenerate-test-function", "numeric")


@dataclass(frozen=True)
class EnvelopeFit:
    hypothesis: Hypothesis
    raw_sigma: float
    raw_mu: float
    raw_lam: float
    inflation: float
    lam_clipped: bool
    mu_clipped: bool
    span_ok: bool
    n_samples: int


@dataclass
class CheckRecord:
    name: str
    lhs: float
    rhs: float
    passed: bool
    skipped: bool = False
    note: str = ""
    params: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        """rhs/lhs - 1 for the <= direction."""
        if self.lhs == 0.0:
            return math.inf
        return self.rhs / self.lhs - 1.0


@dataclass
class BoundCertificate:
    t: float
    x: float
    regime: str
    beta_used: float = math.nan
    clamped: bool = False
    alpha_used: float = math.nan
    v_star: float = math.nan
    u_val: float = math.nan
    C_const: float = math.nan
    delta_min: float = math.nan
    k_lower: float = math.nan
    k_numeric: float = math.nan
    satisfied: bool = False
    envelope_valid: bool = False
    tags: list[str] = field(default_factory=list)
    exponent_arg: float = math.nan
    greens: float = math.nan

    @property
    def failed(self) -> bool:
        return any(tag in TAGS_FAILURE for tag in self.tags)


@dataclass
class CampaignReport:
    config: Config
    grid_meta: dict
    fit: EnvelopeFit | None = None
    hypothesis: Hypothesis | None = None
    certificates: list[BoundCertificate] = field(default_factory=list)
    checks: list[CheckRecord] = field(default_factory=list)
    oracles: list[dict] = field(default_factory=list)
    empirical: dict = field(default_factory=dict)
    stage_failures: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def lemma_summary(self) -> list[dict]:
        out = {}
        for rec in self.checks:
            s = out.setdefault(rec.name, {"check": rec.name, "points": 0, "passed": 0, "failed": 0, "skipped": 0, "min_slack": math.inf})
            s["points"] += 1
            if rec.skipped:
                s["skipped"] += 1
                continue
            if rec.passed:
                s["passed"] += 1
            else:
                s["failed"] += 1
            s["min_slack"] = min(s["min_slack"], rec.slack)
        return list(out.values())

    @property
    def n_failed_checks(self) -> int:
        return sum(1 for r in self.checks if not r.passed and not r.skipped)

    @property
    def n_failed_certificates(self) -> int:
        return sum(1 for c in self.certificates if c.failed or (c.envelope_valid and not c.satisfied))

    @property
    def ok(self) -> bool:
        return not self.stage_failures and self.n_failed_checks == 0 and self.n_failed_certificates == 0


# -- envelope -----------------------------------------------------------------


def fit_envelope(
    samples: Iterable[tuple[float, float, float]],
    rho: float,
    majorize: Iterable[tuple[float, float, float]] = (),
) -> EnvelopeFit:
    """Fit sigma <x>^-mu t^-lambda above every sample (t, x, k).

    Least squares on ln k = ln sigma - mu ln<x> - lambda ln t, then clip
    lambda into (0, 1) and mu above 0, and raise sigma until the envelope
    majorises every sample. Points in ``majorize`` take part in the sigma
    inflation only.
    """
    arr = np.asarray(list(samples), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("samples must be (t, x, k) triples")
    if arr.shape[0] < 10:
        raise ValueError(f"need at least 10 samples, got {arr.shape[0]}")
    t, x, k = arr.T
    if np.any(t <= 0.0) or np.any(k <= 0.0):
        raise ValueError("samples need t > 0 and k > 0")
    lb = np.log(bracket(x, rho))
    design = np.column_stack([np.ones_like(t), -lb, -np.log(t)])
    if np.linalg.matrix_rank(design) < 3:
        raise ValueError("rank-deficient sample set: need several distinct t and <x> values")
    y = np.log(k)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    ln_sigma, mu, lam = (float(c) for c in coef)
    lam_c = min(max(lam, MU_FLOOR), LAMBDA_CAP)
    mu_c = max(mu, MU_FLOOR)
    resid = y - (ln_sigma - mu_c * lb - lam_c * np.log(t))
    extra = np.asarray(list(majorize), dtype=float).reshape(-1, 3)
    if extra.size:
        te, xe, ke = extra.T
        if np.any(te <= 0.0) or np.any(ke <= 0.0):
            raise ValueError("samples need t > 0 and k > 0")
        le = np.log(bracket(xe, rho))
        resid = np.concatenate([resid, np.log(ke) - (ln_sigma - mu_c * le - lam_c * np.log(te))])
    inflation = math.exp(max(0.0, float(resid.max())))
    sigma = math.exp(ln_sigma) * inflation
    # rounding in exp/log can leave a sample a few ulps above; re-check with
    # the exact evaluation order used by u_reference and nudge sigma up
    pts = arr if not extra.size else np.vstack([arr, extra])
    for _ in range(64):
        env = np.array([float(bounds.u_reference(tt, xx, Hypothesis(sigma, mu_c, lam_c), rho)) for tt, xx, _ in pts])
        worst = float(np.max(pts[:, 2] / env))
        if worst <= 1.0 and np.all(pts[:, 2] <= env):
            break
        sigma = math.nextafter(sigma * max(worst, 1.0), math.inf)
    span = lambda v: v.max() / v.min() >= 10.0
    return EnvelopeFit(
        hypothesis=Hypothesis(sigma, mu_c, lam_c),
        raw_sigma=math.exp(ln_sigma),
        raw_mu=mu,
        raw_lam=lam,
        inflation=inflation,
        lam_clipped=lam_c != lam,
        mu_clipped=mu_c != mu,
        span_ok=bool(span(t) and span(np.exp(lb))),
        n_samples=int(arr.shape[0]),
    )


def envelope_on_tau_grid(sd: SpectralData, node: int, t: float, hyp: Hypothesis, bx: float, n_tau: int = 32, depth: float = 1e-4):
    """(valid, worst k/u) over ``n_tau`` log-spaced times in [depth t, t]."""
    worst = 0.0
    for tau in np.geomspace(depth * t, t, n_tau):
        ratio = heat_kernel_diag(sd, float(tau), node) / (hyp.sigma * bx ** (-hyp.mu) * tau ** (-hyp.lam))
        worst = max(worst, ratio)
    return worst <= 1.0, worst


# -- lemma checks -------------------------------------------------------------


def check_interpolation(sd: SpectralData, node: int, t: float, alpha: float, s: float) -> CheckRecord:
    """k(ts) <= k(alpha t s)^(1-p) k(t)^p with p from the interpolation exponent."""
    if not (0.0 < alpha < 1.0 and 0.0 < s <= 1.0):
        raise ValueError("need 0 < alpha < 1 and 0 < s <= 1")
    p = bounds.interpolation_exponent(alpha, s)
    lhs = heat_kernel_diag(sd, t * s, node)
    rhs = heat_kernel_diag(sd, alpha * t * s, node) ** (1.0 - p) * heat_kernel_diag(sd, t, node) ** p
    return CheckRecord(
        "interpolation",
        lhs,
        rhs,
        lhs <= rhs * (1.0 + INTERP_SLACK),
        params={"node": node, "t": t, "alpha": alpha, "s": s, "p": p},
    )


def interpolation_ratios(weights, rates, t: float, alphas, ss) -> np.ndarray:
    """lhs/rhs of the interpolation inequality over an (alpha, s) mesh.

    Vectorised twin of :func:`check_interpolation` for synthetic spectral
    measures sum_j w_j delta_{rates_j}.
    """
    w = np.asarray(weights, dtype=float)
    r = np.asarray(rates, dtype=float)
    a, s = np.meshgrid(np.asarray(alphas, dtype=float), np.asarray(ss, dtype=float), indexing="ij")
    p = bounds.interpolation_exponent(a, s)
    k = lambda tau: np.exp(-np.multiply.outer(tau, r)) @ w
    lhs = k(t * s)
    rhs = k(a * t * s) ** (1.0 - p) * k(np.array(t)) ** p
    return lhs / rhs


def check_green_chain(
    sd: SpectralData,
    node: int,
    t: float,
    hyp: Hypothesis,
    alpha: float,
    bx: float,
    n_tau: int = 32,
    depth: float = 1e-4,
) -> CheckRecord:
    """G_t/u < int_0^1 (alpha s)^-lam delta^p(s) ds + delta/e at one point.

    ``bx`` is <x> at the node. Skipped, with a note, when the envelope fails
    somewhere on the tau grid of (0, t].
    """
    valid, worst = envelope_on_tau_grid(sd, node, t, hyp, bx, n_tau, depth)
    params = {"node": node, "t": t, "alpha": alpha, "worst_ratio": worst}
    if not valid:
        return CheckRecord("green_chain", math.nan, math.nan, False, skipped=True, note="envelope-violated", params=params)
    u = hyp.sigma * bx ** (-hyp.mu) * t ** (-hyp.lam)
    delta = heat_kernel_diag(sd, t, node) / u
    lhs = greens_diag(sd, t, node) / u
    rhs = bounds._interp_integral(alpha, hyp.lam, delta) + delta / math.e
    params["delta"] = delta
    return CheckRecord("green_chain", lhs, rhs, lhs < rhs, params=params)


def laplace_greens(sd: SpectralData, t: float, node: int) -> float:
    """int_0^inf e^-s k(ts, x, x) ds by adaptive quadrature on log-spaced panels."""
    w = sd.weights(node)
    lam = sd.eigenvalues

    def f(s):
        return math.exp(-s) * float(w @ np.exp(-lam * (t * s)))

    f0 = math.fsum(w.tolist())
    edges = [0.0] + [float(e) for e in np.geomspace(1e-12, 60.0, 49)]
    total = []
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
        total.append(val)
    # the k(ts) <= k(0) tail past s = 60 is below f0 e^-60
    total.append(0.0 if f0 * math.exp(-60.0) < 1e-300 else f(60.0))
    return math.fsum(total)


def check_resolvent(sd: SpectralData, t: float, node: int) -> CheckRecord:
    g = greens_diag(sd, t, node)
    q = laplace_greens(sd, t, node)
    rel = abs(g - q) / abs(q)
    return CheckRecord("resolvent", q, g, rel <= RESOLVENT_RTOL, params={"node": node, "t": t, "rel_err": rel})


def gamma_lemma_grid(lams=None, deltas=None) -> list[CheckRecord]:
    lams = np.round(np.arange(0.05, 0.951, 0.05), 10) if lams is None else lams
    deltas = np.geomspace(1e-6, 0.99, 100) if deltas is None else deltas
    out = []
    for lam in lams:
        lhs, rhs = bounds.gamma_lemma_pair(float(lam), np.asarray(deltas))
        for d, l, r in zip(deltas, lhs, rhs):
            out.append(CheckRecord("gamma_lemma", float(r), float(l), bool(l > r), params={"lambda": float(lam), "delta": float(d)}))
    return out


def integral_lemma_grid(alphas=None, lams=None, deltas=None) -> list[CheckRecord]:
    """about_lhs < about_constant (ln 1/delta)^(lam-1) on a grid; lhs is the integral side."""
    alphas = np.round(np.arange(0.05, 0.451, 0.05), 10) if alphas is None else alphas
    lams = np.round(np.arange(0.1, 0.901, 0.1), 10) if lams is None else lams
    if deltas is None:
        deltas = [1e-4, 1e-3, 1e-2] + [round(v, 10) for v in np.arange(0.1, 0.901, 0.1)]
    out = []
    for a in alphas:
        for lam in lams:
            for d in deltas:
                params = {"alpha": float(a), "lambda": float(lam), "delta": float(d)}
                try:
                    lhs = bounds.about_lhs(float(a), float(lam), float(d))
                except QuadratureError as exc:
                    out.append(CheckRecord("integral_lemma", math.nan, math.nan, False, note=str(exc), params=params))
                    continue
                rhs = bounds.about_rhs(float(a), float(lam), float(d))
                out.append(CheckRecord("integral_lemma", lhs, rhs, lhs < rhs, params=params))
    return out


def random_spectral_measure(rng: np.random.Generator, max_atoms: int = 50):
    n = int(rng.integers(1, max_atoms + 1))
    weights = rng.exponential(1.0, n)
    rates = np.sort(rng.exponential(1.0, n) * 10.0 ** rng.uniform(-1, 2, n))
    return weights, rates


def interpolation_measure_checks(rng: np.random.Generator, n_measures: int = 200, grid: int = 20) -> list[CheckRecord]:
    """Interpolation inequality on random nonnegative spectral measures."""
    alphas = (np.arange(grid) + 0.5) / grid
    ss = (np.arange(grid) + 1.0) / grid
    out = []
    for j in range(n_measures):
        w, r = random_spectral_measure(rng)
        t = float(10.0 ** rng.uniform(-1, 1))
        ratios = interpolation_ratios(w, r, t, alphas, ss)
        worst = float(ratios.max())
        out.append(CheckRecord("interpolation_measure", worst, 1.0, worst <= 1.0 + INTERP_SLACK, params={"measure": j, "atoms": len(w), "t": t}))
    return out


# -- certification ------------------------------------------------------------


def beta_floor(grid: Grid1D, bx: float) -> float:
    """Smallest beta whose transition band still holds enough grid nodes."""
    if bx <= 1.0:
        return 0.0
    return math.log(MIN_TRANSITION_NODES * grid.h * (1.0 + 1e-9)) / math.log(bx)


def certify_point(
    sd: SpectralData,
    grid: Grid1D,
    spec: ProblemSpec,
    hyp: Hypothesis,
    t: float,
    node: int,
    alpha: float | None = None,
    n_tau: int = 32,
    depth: float = 1e-4,
) -> BoundCertificate:
    """Run the certified lower-bound pipeline at one (t, node)."""
    x = float(grid.nodes[node])
    bx = bracket(x, spec.rho)
    regime, choice = bounds.choose_beta(t, x, spec, floor=beta_floor(grid, bx))
    cert = BoundCertificate(t=float(t), x=x, regime=regime.value, beta_used=choice.value, clamped=choice.clamped)
    if choice.degenerate:
        cert.tags.append("beta-degenerate")
    cert.k_numeric = heat_kernel_diag(sd, t, node)
    cert.greens = greens_diag(sd, t, node)
    cert.u_val = float(bounds.u_reference(t, x, hyp, spec.rho))
    cert.envelope_valid, _ = envelope_on_tau_grid(sd, node, t, hyp, bx, n_tau, depth)
    cert.alpha_used = bounds.optimal_alpha(hyp.lam) if alpha is None else float(alpha)
    try:
        g = build_test_function(x, choice.value, grid, spec.rho)
    except SupportError as exc:
        cert.tags.append("support")
        log.debug("support failure at t=%g x=%g: %s", t, x, exc)
        return cert
    q = quadratic_form(grid, spec, g)
    cert.v_star = variational_green(t, g, q, norm_sq(grid, g))
    if not cert.v_star > 0.0:
        cert.tags.append("degenerate-test-function")
        return cert
    cd = bounds.certified_delta(cert.v_star, cert.u_val, cert.alpha_used, hyp.lam)
    cert.C_const = cd.C
    cert.delta_min = cd.delta_min
    cert.exponent_arg = cd.exponent_arg
    cert.k_lower = cert.u_val * cd.delta_min
    cert.satisfied = bool(cert.k_lower <= cert.k_numeric)
    if cert.v_star > cert.greens * (1.0 + VARIATIONAL_SLACK):
        cert.tags.append("variational-violation")
    return cert


def empirical_constant(certs: Sequence[BoundCertificate], hyp: Hypothesis, spec: ProblemSpec) -> dict:
    """Per-regime regression of ln(u/k_lower) on the exponent shape.

    Ordinary least squares y = a + c P over usable rows; also reports the
    through-origin slope y = c0 P.
    """
    out = {}
    for regime in (Regime.LATE, Regime.EARLY):
        rows = [
            c
            for c in certs
            if c.regime == regime.value and c.envelope_valid and not c.failed and math.isfinite(c.exponent_arg)
        ]
        entry = {"regime": regime.value, "n": len(rows), "c": math.nan, "intercept": math.nan, "c_origin": math.nan, "r2": math.nan}
        if len(rows) >= 3:
            y = np.array([c.exponent_arg for c in rows])
            p = np.array([bounds.theorem_exponent_shape(c.t, c.x, hyp, spec, regime) for c in rows])
            design = np.column_stack([np.ones_like(p), p])
            (a, c_fit), *_ = np.linalg.lstsq(design, y, rcond=None)
            ss_res = float(np.sum((y - design @ [a, c_fit]) ** 2))
            ss_tot = float(np.sum((y - y.mean()) ** 2))
            entry.update(
                c=float(c_fit),
                intercept=float(a),
                c_origin=float(y @ p / (p @ p)),
                r2=1.0 - ss_res / ss_tot if ss_tot > 0 else math.nan,
            )
        out[regime.value] = entry
    return out


# -- campaign -----------------------------------------------------------------


def _campaign_nodes(cfg: Config) -> list[int]:
    grid = cfg.grid
    return sorted({grid.nearest_index(x) for x in cfg.campaign.x})


def fit_samples(sd: SpectralData, grid: Grid1D, nodes: Sequence[int], cfg: Config):
    """(design, check) samples for the envelope fit.

    The design is ``fit_t_count`` log-spaced times over the whole window the
    tau-grid checks visit; the check set is every tau-grid point, so the
    inflated envelope holds wherever validity is later tested.
    """
    c = cfg.campaign
    design_t = np.geomspace(min(c.t) * c.fit_depth, max(c.t), c.fit_t_count)
    check_t = np.unique(np.concatenate([np.geomspace(c.fit_depth * t, t, c.tau_count) for t in c.t]))
    design = [(float(tau), float(grid.nodes[i]), heat_kernel_diag(sd, float(tau), i)) for i in nodes for tau in design_t]
    check = [(float(tau), float(grid.nodes[i]), heat_kernel_diag(sd, float(tau), i)) for i in nodes for tau in check_t]
    return design, check


def oracle_rows(sd: SpectralData, grid: Grid1D, spec: ProblemSpec, times, nodes) -> list[dict]:
    """Closed-form comparisons available for the configured potential."""
    rows = []
    for t in times:
        for i in nodes:
            x = float(grid.nodes[i])
            if spec.potential == "zero":
                # (1/2pi) int exp(-t xi^(2m)) dxi
                ref = math.gamma(1.0 + 1.0 / (2 * spec.m)) / (math.pi * t ** (1.0 / (2 * spec.m)))
                name = "free"
            elif spec.potential == "harmonic" and spec.m == 1:
                ref = (2 * math.pi * math.sinh(2 * t)) ** -0.5 * math.exp(-(x**2) * math.tanh(t))
                name = "mehler"
            else:
                return rows
            k = heat_kernel_diag(sd, t, i)
            rows.append({"oracle": name, "t": float(t), "x": x, "k_numeric": k, "k_oracle": ref, "rel_err": abs(k / ref - 1.0)})
    return rows


def _boundary_compare(cfg: Config, nodes, times) -> dict[tuple[int, float], float]:
    grid, spec = cfg.grid, cfg.problem
    pad = min((grid.n - 1) // 2, (MAX_NODES - grid.n) // 2)
    if pad < 1:
        return {}
    big = grid.padded(pad)
    sd_big = spectral_decompose(assemble_operator(big, spec), big.h)
    return {(i, t): heat_kernel_diag(sd_big, t, i + pad) for i in nodes for t in times}


def run_campaign(cfg: Config, threads: int = 1) -> CampaignReport:
    """Assemble, decompose, fit, check and certify; always returns a report."""
    grid, spec, camp = cfg.grid, cfg.problem, cfg.campaign
    times = sorted(camp.t)
    report = CampaignReport(config=cfg, grid_meta={"L": grid.L, "n": grid.n, "h": grid.h})
    report.notes.append(
        "Discrete kernels are continuous and square integrable by construction, so the theorem's regularity hypotheses are not exercised."
    )
    nodes = _campaign_nodes(cfg)
    if len(nodes) < len(set(camp.x)):
        report.notes.append(f"{len(set(camp.x))} requested positions snap to {len(nodes)} distinct grid nodes; one row per node.")
    rng = np.random.default_rng(camp.seed)

    report.checks += gamma_lemma_grid()
    report.checks += integral_lemma_grid()

    try:
        sd = spectral_decompose(assemble_operator(grid, spec), grid.h)
    except (SpectralError, ValueError) as exc:
        report.stage_failures.append({"stage": "assemble", "error": str(exc)})
        for t in times:
            for i in nodes:
                report.certificates.append(BoundCertificate(t=t, x=float(grid.nodes[i]), regime=bounds.classify_regime(t, grid.nodes[i], spec).value, tags=["numeric"]))
        return report
    report.grid_meta["lambda_min"] = float(sd.eigenvalues[0])

    if cfg.hypothesis is not None:
        hyp = cfg.hypothesis
    else:
        try:
            design, check = fit_samples(sd, grid, nodes, cfg)
            report.fit = fit_envelope(design, spec.rho, majorize=check)
            hyp = report.fit.hypothesis
        except ValueError as exc:
            report.stage_failures.append({"stage": "fit", "error": str(exc)})
            for t in times:
                for i in nodes:
                    report.certificates.append(BoundCertificate(t=t, x=float(grid.nodes[i]), regime=bounds.classify_regime(t, grid.nodes[i], spec).value, tags=["numeric"]))
            return report
    report.hypothesis = hyp
    alpha = bounds.optimal_alpha(hyp.lam) if camp.alpha == "optimal" else float(camp.alpha)

    boundary = {}
    if camp.boundary_check:
        try:
            boundary = _boundary_compare(cfg, nodes, times)
        except (SpectralError, ValueError) as exc:
            report.stage_failures.append({"stage": "boundary", "error": str(exc)})

    points = [(t, i) for t in times for i in nodes]

    def work(point):
        t, i = point
        cert = certify_point(sd, grid, spec, hyp, t, i, alpha, camp.tau_count, camp.fit_depth)
        ref = boundary.get((i, t))
        if ref is not None and abs(cert.k_numeric - ref) > camp.boundary_tol * abs(ref):
            cert.tags.append("boundary-suspect")
        return cert

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            certs = list(pool.map(work, points))
    else:
        certs = [work(p) for p in points]
    report.certificates = sorted(certs, key=lambda c: (c.t, c.x))

    grid_pts = (np.arange(camp.interp_grid) + 0.5) / camp.interp_grid
    s_pts = (np.arange(camp.interp_grid) + 1.0) / camp.interp_grid
    for t, i in points:
        for a in grid_pts:
            for s in s_pts:
                report.checks.append(check_interpolation(sd, i, t, float(a), float(s)))
        report.checks.append(check_green_chain(sd, i, t, hyp, alpha, bracket(grid.nodes[i], spec.rho), camp.tau_count, camp.fit_depth))
    for i in nodes:
        for t in (times[0], times[-1]):
            report.checks.append(check_resolvent(sd, t, i))
    for c in report.certificates:
        if math.isfinite(c.v_star):
            report.checks.append(
                CheckRecord("variational", c.v_star, c.greens, c.v_star <= c.greens * (1.0 + VARIATIONAL_SLACK), params={"t": c.t, "x": c.x})
            )
    report.checks += interpolation_measure_checks(rng, n_measures=20, grid=10)

    report.oracles = oracle_rows(sd, grid, spec, times, nodes)
    report.empirical = empirical_constant(report.certificates, hyp, spec)
    return report
