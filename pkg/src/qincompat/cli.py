"""Command-line frontend: one subcommand per experiment.

Every subcommand is seed-reproducible where randomness is involved and
emits CSV or JSON suitable for plotting.  Numeric output uses 17
significant digits so files are byte-stable across runs.  Errors derived
from :class:`qincompat.errors.QincompatError` exit with status 1 and the
error class name on stderr.

A ``--config FILE`` of ``key=value`` lines (keys match the long flag
names with dashes replaced by underscores) supplies defaults; explicit
flags win on conflict.  The only environment variable honored is
``QINCOMPAT_THREADS`` (default worker count for sweeps).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import estimation, gaussian, linalg, sampler, serialize
from .errors import QincompatError
from .models import bloch_qubit

THREADS_ENV = "QINCOMPAT_THREADS"

QUBIT_PARAM_NAMES = ("r", "theta", "phi")
GAUSSIAN_SUBSET_ALIASES = {"n": 4, "n_thermal": 4, "re_alpha": 0, "im_alpha": 1,
                           "r": 2, "phi": 3}


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _matrix_lines(name: str, m: np.ndarray) -> list[str]:
    lines = [f"{name}:"]
    for row in np.atleast_2d(m):
        lines.append("  " + "  ".join(f"{v: .12g}" for v in row))
    return lines


def _report_text(rep: estimation.EstimationReport, extra: list[str]) -> str:
    lines = list(extra)
    lines += _matrix_lines("Q (Fisher information)", rep.q)
    lines += _matrix_lines("U (Uhlmann curvature)", rep.u)
    lines.append("spectrum of i Q^-1 U: "
                 + "  ".join(f"{v: .12g}" for v in rep.i_spectrum))
    lines.append(f"R (AI measure) = {rep.r:.12g}")
    lines.append(f"delta (positive eigenvalues) = {rep.delta}")
    lines.append(f"compatible-parameter bound = {rep.compat_bound}")
    return "\n".join(lines) + "\n"


def cmd_qubit(args) -> int:
    model = bloch_qubit(args.r, args.theta, args.phi)
    rep = model.report(rank_tol=args.rank_tol, eigval_tol=args.eig_tol)
    mu = linalg.purity(model.rho())
    analytic = float(np.sqrt(2.0 * mu - 1.0))
    assert abs(rep.r - args.r) <= 1e-9 and abs(rep.r - analytic) <= 1e-9
    if args.format == "json":
        doc = serialize.dumps({
            "params": {"r": args.r, "theta": args.theta, "phi": args.phi},
            "purity": mu,
            **rep.to_json_dict(),
        }) + "\n"
    else:
        doc = _report_text(rep, [
            f"qubit Bloch model at r={args.r:.12g} theta={args.theta:.12g} phi={args.phi:.12g}",
            f"purity = {mu:.12g}   sqrt(2*purity - 1) = {analytic:.12g}",
        ])
    _write_output(doc, args.out)
    return 0


def cmd_gaussian(args) -> int:
    params = gaussian.GaussianParams(args.re_alpha, args.im_alpha, args.r,
                                     args.phi, args.n_thermal)
    state = gaussian.moments(params)
    rep = gaussian.gaussian_report(params, eigval_tol=args.eig_tol)
    mu = gaussian.purity_of(params)
    if args.format == "json":
        doc = serialize.dumps({
            "params": {name: getattr(params, name) for name in gaussian.PARAM_NAMES},
            "state": {"d": state.d, "sigma": state.sigma},
            "purity": mu,
            **rep.to_json_dict(),
        }) + "\n"
    else:
        doc = _report_text(rep, [
            "single-mode Gaussian model (re_alpha, im_alpha, r, phi, n_thermal)",
            f"first moments d = ({state.d[0]:.12g}, {state.d[1]:.12g})",
            *_matrix_lines("covariance sigma", state.sigma),
            f"purity = {mu:.12g}   2*mu/(1+mu^2) = {gaussian.ai_gaussian(mu):.12g}",
        ])
    _write_output(doc, args.out)
    return 0


def cmd_sweep(args) -> int:
    if args.d < 3:
        raise QincompatError(
            "sweep supports d >= 3; use the qubit command for d = 2")
    n_threads = int(os.environ.get(THREADS_ENV, "1"))
    records = sampler.sweep(args.d, args.n, args.seed,
                            rank_tol=args.rank_tol, n_threads=n_threads)
    if args.format == "json":
        doc = sampler.records_to_jsonl(records)
    else:
        doc = sampler.records_to_csv(records)
    _write_output(doc, args.out)
    max_res = max((r.residual for r in records), default=float("nan"))
    high = [r.purity for r in records if r.ai > 0.99]
    min_pur = f"{min(high):.17g}" if high else "n/a"
    summary = (f"samples={len(records)} max_residual={max_res:.3e} "
               f"min_purity_at_ai_above_0.99={min_pur}\n")
    (sys.stdout if args.out else sys.stderr).write(summary)
    return 0


def cmd_gibbs_curve(args) -> int:
    deltas = _parse_floats(args.deltas)
    betas = np.linspace(args.beta_min, args.beta_max, args.steps)
    curve = sampler.gibbs_curve(deltas, betas)
    rows = [(float(b), mu, ai) for b, (mu, ai) in zip(betas, curve)]
    if args.format == "json":
        doc = "\n".join(serialize.dumps({"beta": b, "mu": mu, "ai": ai})
                        for b, mu, ai in rows) + "\n"
    else:
        doc = serialize.csv_lines(["beta", "mu", "ai"], rows)
    _write_output(doc, args.out)
    return 0


def cmd_dynamics(args) -> int:
    init = gaussian.excitation_parametrization(args.n_mean, args.eta)
    state0 = gaussian.moments(init)
    times = np.linspace(args.t_max / args.steps, args.t_max, args.steps)
    rows = []
    for t in times:
        mu = gaussian.evolve_lossy(state0, args.omega, args.gamma, float(t)).purity
        r5 = gaussian.ai_gaussian(mu)
        try:
            r2 = gaussian.freq_loss_model(init, args.omega, args.gamma, float(t),
                                          h=args.fd_step).r
        except QincompatError:
            r2 = None
        if r2 is not None and r2 > r5 + 1e-8:
            raise QincompatError(
                f"submodel AI {r2} exceeds full-model AI {r5} at t={t}")
        rows.append((float(t), mu, r5, r2))
    if args.format == "json":
        doc = "\n".join(serialize.dumps({"t": t, "mu": mu, "r5": r5, "r2": r2})
                        for t, mu, r5, r2 in rows) + "\n"
    else:
        doc = serialize.csv_lines(["t", "mu", "r5", "r2"], rows)
    _write_output(doc, args.out)
    return 0


def _parse_subset(tokens: str, names) -> list[int]:
    idx = []
    lookup = GAUSSIAN_SUBSET_ALIASES if names == gaussian.PARAM_NAMES else {
        n: i for i, n in enumerate(names)}
    for tok in tokens.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.lstrip("-").isdigit():
            idx.append(int(tok))
        elif tok in lookup:
            idx.append(lookup[tok])
        else:
            raise QincompatError(f"unknown parameter {tok!r}; known: {names}")
    return idx


def cmd_submodel(args) -> int:
    if args.model == "qubit":
        model = bloch_qubit(args.r, args.theta, args.phi)
        rep = model.report(rank_tol=args.rank_tol, eigval_tol=args.eig_tol)
        names = QUBIT_PARAM_NAMES
    else:
        params = gaussian.GaussianParams(args.re_alpha, args.im_alpha, args.r,
                                         args.phi, args.n_thermal)
        rep = gaussian.gaussian_report(params, eigval_tol=args.eig_tol)
        names = gaussian.PARAM_NAMES
    subset = _parse_subset(args.subset, names)
    ix = np.ix_(subset, subset)
    sub = estimation.report_from_matrices(rep.q[ix], rep.u[ix],
                                          eigval_tol=args.eig_tol)
    dropped = rep.num_params - len(subset)
    lower = float(rep.i_spectrum[dropped])
    payload = {
        "model": args.model,
        "subset": [names[i] for i in subset],
        "r_sub": sub.r,
        "bracket_low": lower,
        "bracket_high": rep.r,
        "r_full": rep.r,
    }
    if args.format == "json":
        doc = serialize.dumps(payload) + "\n"
    else:
        doc = (f"submodel {payload['subset']} of {args.model}\n"
               f"R_sub = {sub.r:.12g}\n"
               f"bracket: [{lower:.12g}, {rep.r:.12g}]\n")
    _write_output(doc, args.out)
    return 0


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _add_common(p: argparse.ArgumentParser, fd_default: float = 1e-5) -> None:
    p.add_argument("--config", help="key=value file of flag defaults")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json", "text"), default=None,
                   help="output format")
    p.add_argument("--rank-tol", type=float, default=1e-10,
                   help="full-rank threshold on state eigenvalues")
    p.add_argument("--eig-tol", type=float, default=1e-8,
                   help="strict-positivity threshold for spectrum counting")
    p.add_argument("--fd-step", type=float, default=fd_default,
                   help="finite-difference step")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="qincompat",
        description="Asymptotic-incompatibility analysis of multiparameter "
                    "quantum statistical models.")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}

    p = sub.add_parser("qubit", help="qubit Bloch-model report")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_qubit, default_format="text")
    commands["qubit"] = p

    p = sub.add_parser("gaussian", help="single-mode Gaussian-model report")
    p.add_argument("--re-alpha", type=float, default=0.0)
    p.add_argument("--im-alpha", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.3)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--n-thermal", type=float, required=True)
    _add_common(p, fd_default=1e-6)
    p.set_defaults(func=cmd_gaussian, default_format="text")
    commands["gaussian"] = p

    p = sub.add_parser("sweep", help="random-state AI-vs-purity sweep")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_sweep, default_format="csv")
    commands["sweep"] = p

    p = sub.add_parser("gibbs-curve", help="AI curve for a fixed Hamiltonian spectrum")
    p.add_argument("--deltas", required=True,
                   help="comma-separated Hamiltonian eigenvalues, |delta| <= 1")
    p.add_argument("--beta-min", type=float, default=0.0)
    p.add_argument("--beta-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=101)
    _add_common(p)
    p.set_defaults(func=cmd_gibbs_curve, default_format="csv")
    commands["gibbs-curve"] = p

    p = sub.add_parser("dynamics", help="frequency/loss-rate AI under lossy rotation")
    p.add_argument("--n-mean", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=50)
    _add_common(p, fd_default=1e-6)
    p.set_defaults(func=cmd_dynamics, default_format="csv")
    commands["dynamics"] = p

    p = sub.add_parser("submodel", help="AI of a parameter subset with its bracket")
    p.add_argument("--model", choices=("qubit", "gaussian"), required=True)
    p.add_argument("--subset", required=True,
                   help="comma-separated parameter names or indices")
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--theta", type=float, default=np.pi / 2)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--re-alpha", type=float, default=0.0)
    p.add_argument("--im-alpha", type=float, default=0.0)
    p.add_argument("--n-thermal", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(func=cmd_submodel, default_format="text")
    commands["submodel"] = p

    return parser, commands


def _load_config(path: str) -> dict[str, str]:
    cfg = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise QincompatError(f"config line {raw!r} is not key=value")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _apply_config(subparser: argparse.ArgumentParser, cfg: dict[str, str]) -> None:
    types = {}
    for action in subparser._actions:
        if action.dest not in ("help",):
            types[action.dest] = action.type or str
    unknown = set(cfg) - set(types)
    if unknown:
        raise QincompatError(f"unknown config keys: {sorted(unknown)}")
    subparser.set_defaults(**{k: types[k](v) for k, v in cfg.items()})
    # required flags satisfied by the config no longer need the CLI
    for action in subparser._actions:
        if action.dest in cfg:
            action.required = False


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, commands = build_parser()
    try:
        command = next((tok for tok in argv if tok in commands), None)
        if command and "--config" in argv:
            cfg_path = argv[argv.index("--config") + 1]
            _apply_config(commands[command], _load_config(cfg_path))
        args = parser.parse_args(argv)
        if args.format is None:
            args.format = args.default_format
        return args.func(args)
    except QincompatError as err:
        sys.stderr.write(f"{type(err).__name__}: {err}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
