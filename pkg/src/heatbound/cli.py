"""Command line entry point and report serialisation.

Exit statuses: 0 all checks passed, 1 configuration or input error,
2 a numerical stage failed, 3 some checks or certificates failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import logging
import math
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from heatbound import verify
from heatbound.config import Config, ConfigError, parse_config
from heatbound.operator_lab import SpectralError, assemble_operator, greens_diag, heat_kernel_diag, spectral_decompose


EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_FAILED = 0, 1, 2, 3
CSV_HEADER = "t,x,regime,beta,clamped,alpha,v_star,u,C,delta_min,k_lower,k_numeric,satisfied,envelope_valid,tags"
SCHEMA_VERSION = 1


def fmt(v) -> str:
    """Shortest round-trip decimal for numbers, lowercase for booleans."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _json_num(v):
    v = float(v)
    return v if math.isfinite(v) else None


def certificates_csv(certs) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for c in certs:
        fields = [
            c.t, c.x, c.regime, c.beta_used, c.clamped, c.alpha_used, c.v_star, c.u_val,
            c.C_const, c.delta_min, c.k_lower, c.k_numeric, c.satisfied, c.envelope_valid,
        ]
        row = [f if isinstance(f, str) else fmt(f) for f in fields]
        row.append(";".join(c.tags))
        out.write(",".join(row) + "\n")
    return out.getvalue()


def lemmas_csv(summary) -> str:
    lines = ["check,points,passed,failed,skipped,min_slack"]
    for s in summary:
        lines.append(",".join([s["check"]] + [fmt(s[k]) for k in ("points", "passed", "failed", "skipped", "min_slack")]))
    return "\n".join(lines) + "\n"


def _config_dict(cfg: Config) -> dict:
    p = cfg.problem
    return {
        "problem": {"N": p.N, "m": p.m, "c1": p.c1, "c2": p.c2, "gamma": p.gamma, "potential": p.potential},
        "grid": {"L": cfg.grid.L, "n": cfg.grid.n},
        "hypothesis": None
        if cfg.hypothesis is None
        else {"sigma": cfg.hypothesis.sigma, "mu": cfg.hypothesis.mu, "lambda": cfg.hypothesis.lam},
        "campaign": {k: list(v) if isinstance(v, tuple) else v for k, v in dataclasses.asdict(cfg.campaign).items()},
    }


def report_dict(report: verify.CampaignReport) -> dict:
    hyp = report.hypothesis
    fit = report.fit
    return {
        "schema_version": SCHEMA_VERSION,
        "config": _config_dict(report.config),
        "defaults_applied": list(report.config.defaults_applied),
        "grid": {k: _json_num(v) for k, v in report.grid_meta.items()},
        "hypothesis": None if hyp is None else {"sigma": hyp.sigma, "mu": hyp.mu, "lambda": hyp.lam},
        "fit": None
        if fit is None
        else {
            "raw_sigma": fit.raw_sigma,
            "raw_mu": fit.raw_mu,
            "raw_lambda": fit.raw_lam,
            "inflation": fit.inflation,
            "lambda_clipped": fit.lam_clipped,
            "mu_clipped": fit.mu_clipped,
            "span_ok": fit.span_ok,
            "n_samples": fit.n_samples,
        },
        "certificates": [
            {
                "t": c.t,
                "x": c.x,
                "regime": c.regime,
                "beta": _json_num(c.beta_used),
                "clamped": bool(c.clamped),
                "alpha": _json_num(c.alpha_used),
                "v_star": _json_num(c.v_star),
                "u": _json_num(c.u_val),
                "C": _json_num(c.C_const),
                "delta_min": _json_num(c.delta_min),
                "exponent_arg": _json_num(c.exponent_arg),
                "k_lower": _json_num(c.k_lower),
                "k_numeric": _json_num(c.k_numeric),
                "greens": _json_num(c.greens),
                "satisfied": bool(c.satisfied),
                "envelope_valid": bool(c.envelope_valid),
                "tags": list(c.tags),
            }
            for c in report.certificates
        ],
        "lemma_summary": [{**s, "min_slack": _json_num(s["min_slack"])} for s in report.lemma_summary()],
        "oracles": report.oracles,
        "empirical_constants": {k: {kk: (_json_num(vv) if isinstance(vv, float) else vv) for kk, vv in v.items()} for k, v in report.empirical.items()},
        "stage_failures": report.stage_failures,
        "notes": report.notes,
        "ok": report.ok,
    }


def load_schema() -> dict:
    return json.loads(resources.files("heatbound").joinpath("campaign.schema.json").read_text())


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, allow_nan=False) + "\n"


def plot_files(doc: dict) -> dict[str, str]:
    """Whitespace-separated tables: per x over t and per t over x."""
    certs = doc["certificates"]
    xs = sorted({c["x"] for c in certs})
    ts = sorted({c["t"] for c in certs})
    val = lambda v: "nan" if v is None else fmt(v)
    files = {}
    for j, x in enumerate(xs):
        rows = [c for c in certs if c["x"] == x]
        lines = [f"# x = {fmt(x)}", "# t k_numeric k_lower u"]
        lines += [" ".join(val(c[k]) for k in ("t", "k_numeric", "k_lower", "u")) for c in sorted(rows, key=lambda c: c["t"])]
        files[f"t_series_x{j:02d}.dat"] = "\n".join(lines) + "\n"
    for j, t in enumerate(ts):
        rows = [c for c in certs if c["t"] == t]
        lines = [f"# t = {fmt(t)}", "# x k_numeric k_lower u"]
        lines += [" ".join(val(c[k]) for k in ("x", "k_numeric", "k_lower", "u")) for c in sorted(rows, key=lambda c: c["x"])]
        files[f"x_series_t{j:02d}.dat"] = "\n".join(lines) + "\n"
    return files


def summary_text(doc: dict) -> str:
    certs = doc["certificates"]
    lines = [f"campaign: {len(certs)} certificates, ok = {str(doc['ok']).lower()}"]
    if doc["defaults_applied"]:
        lines.append("defaults applied: " + ", ".join(doc["defaults_applied"]))
    h = doc["hypothesis"]
    if h:
        lines.append(f"envelope: sigma={h['sigma']:.6g} mu={h['mu']:.6g} lambda={h['lambda']:.6g}")
    valid = [c for c in certs if c["envelope_valid"] and not c["tags"]]
    lines.append(f"certificates with valid envelope and no tag: {len(valid)}; satisfied: {sum(c['satisfied'] for c in valid)}")
    tagged = [c for c in certs if c["tags"]]
    if tagged:
        lines.append(f"tagged rows: {len(tagged)}")
    for s in doc["lemma_summary"]:
        lines.append(f"  {s['check']:<22} points={s['points']:<5} passed={s['passed']:<5} failed={s['failed']:<3} skipped={s['skipped']}")
    for name, e in doc["empirical_constants"].items():
        lines.append(f"  empirical c [{name}]: c={e['c']} intercept={e['intercept']} R2={e['r2']} (n={e['n']})")
    for f in doc["stage_failures"]:
        lines.append(f"  stage failure [{f['stage']}]: {f['error']}")
    for note in doc["notes"]:
        lines.append("note: " + note)
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_plots(out: Path, doc: dict):
    for name, body in plot_files(doc).items():
        _write(out / "plots" / name, body)


# -- commands -----------------------------------------------------------------


def cmd_lemmas(cfg: Config, out: Path, args) -> int:
    rng = np.random.default_rng(cfg.campaign.seed)
    records = verify.gamma_lemma_grid() + verify.integral_lemma_grid() + verify.interpolation_measure_checks(rng)
    report = verify.CampaignReport(config=cfg, grid_meta={}, checks=records)
    summary = report.lemma_summary()
    _write(out / "lemmas.csv", lemmas_csv(summary))
    for s in summary:
        print(f"{s['check']}: {s['passed']}/{s['points']} passed")
    return EXIT_OK if report.n_failed_checks == 0 else EXIT_FAILED


def _decompose(cfg: Config):
    return spectral_decompose(assemble_operator(cfg.grid, cfg.problem), cfg.grid.h)


def cmd_kernel(cfg: Config, out: Path, args) -> int:
    sd = _decompose(cfg)
    nodes = sorted({cfg.grid.nearest_index(x) for x in cfg.campaign.x})
    lines = ["t,x,k_numeric,greens"]
    for t in sorted(cfg.campaign.t):
        for i in nodes:
            lines.append(",".join(fmt(v) for v in (t, cfg.grid.nodes[i], heat_kernel_diag(sd, t, i), greens_diag(sd, t, i))))
    _write(out / "kernel.csv", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_fit(cfg: Config, out: Path, args) -> int:
    sd = _decompose(cfg)
    nodes = sorted({cfg.grid.nearest_index(x) for x in cfg.campaign.x})
    design, check = verify.fit_samples(sd, cfg.grid, nodes, cfg)
    fit = verify.fit_envelope(design, cfg.problem.rho, majorize=check)
    h = fit.hypothesis
    doc = {
        "sigma": h.sigma,
        "mu": h.mu,
        "lambda": h.lam,
        "raw_sigma": fit.raw_sigma,
        "raw_mu": fit.raw_mu,
        "raw_lambda": fit.raw_lam,
        "inflation": fit.inflation,
        "lambda_clipped": fit.lam_clipped,
        "mu_clipped": fit.mu_clipped,
        "span_ok": fit.span_ok,
        "n_samples": fit.n_samples,
    }
    _write(out / "envelope.json", dumps_json(doc))
    print(f"sigma={h.sigma:.6g} mu={h.mu:.6g} lambda={h.lam:.6g}")
    return EXIT_OK


def cmd_certify(cfg: Config, out: Path, args) -> int:
    report = verify.run_campaign(cfg, threads=args.threads)
    doc = report_dict(report)
    jsonschema.validate(doc, load_schema())
    if "csv" in cfg.output.formats:
        _write(out / "campaign.csv", certificates_csv(report.certificates))
    if "json" in cfg.output.formats:
        _write(out / "campaign.json", dumps_json(doc))
    _write(out / "lemmas.csv", lemmas_csv(report.lemma_summary()))
    write_plots(out, doc)
    sys.stdout.write(summary_text(doc))
    if report.stage_failures:
        return EXIT_NUMERIC
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_report(out: Path, args) -> int:
    path = Path(args.campaign) if args.campaign else out / "campaign.json"
    if not path.is_file():
        print(f"error: campaign file not found: {path}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        jsonschema.validate(doc, load_schema())
    except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
        print(f"error: {path} is not a valid campaign report: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = summary_text(doc)
    _write(out / "summary.txt", text)
    write_plots(out, doc)
    sys.stdout.write(text)
    if doc["stage_failures"]:
        return EXIT_NUMERIC
    return EXIT_OK if doc["ok"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heatbound", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=["lemmas", "kernel", "fit", "certify", "report"])
    parser.add_argument("--config", help="configuration file (TOML sections)")
    parser.add_argument("--out", help="output directory (default: [output] directory)")
    parser.add_argument("--seed", type=int, help="seed for randomised checks")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for certificates")
    parser.add_argument("--campaign", help="report: path to campaign.json (default: <out>/campaign.json)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def load_config(path: str | None) -> Config:
    if path is None:
        return parse_config("")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, campaign=dataclasses.replace(cfg.campaign, seed=args.seed))
    out = Path(args.out or cfg.output.directory)
    if args.command == "report":
        return cmd_report(out, args)
    handler = {"lemmas": cmd_lemmas, "kernel": cmd_kernel, "fit": cmd_fit, "certify": cmd_certify}[args.command]
    try:
        return handler(cfg, out, args)
    except (SpectralError, ValueError) as exc:
        print(f"error: numerical stage failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
