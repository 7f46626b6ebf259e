"""Command-line interface: solve instances, run sweeps, emit figure data,
and run oracle cross-checks.

Exit codes: 0 on success, 2 on input errors, 3 when a cross-check fails.
The ``VPS_SEED`` environment variable is reserved for future use; all
solvers are deterministic and ignore it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import closedform, lsolve, oracle, qsolve
from .accept import BinaryTypeEnv, phi_threshold, psi_cap
from .dist import FiniteAtoms, TypeDistribution, UniformInterval, from_literal, lr_tilt
from .errors import VetoPersuasionError
from .prefs import Exponential, Linear, Power, ProposerPreferences
from .prefs import from_literal as prefs_from_literal

_FMT = "%.12g"


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else _FMT % x


def _write_csv(rows: List[Sequence], header: Sequence[str], out: Optional[str]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(report: Dict, as_json: bool, out: Optional[str]) -> None:
    if as_json:
        text = json.dumps(report, sort_keys=True) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in report.items())
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _binary_env(d: TypeDistribution) -> BinaryTypeEnv:
    if not isinstance(d, FiniteAtoms) or len(d.points) != 2:
        raise VetoPersuasionError("linear2 takes exactly two atoms: atoms:l:p,h:q")
    (ell, _), (h, mu0) = d.points
    return BinaryTypeEnv(ell=ell, h=h, mu0=mu0)


def _three_prior(d: TypeDistribution) -> Tuple[Tuple[float, float], Tuple[float, float, float]]:
    if not isinstance(d, FiniteAtoms) or len(d.points) != 3:
        raise VetoPersuasionError("linear3 takes exactly three atoms")
    (t0, w0), (t1, w1), (t2, _) = d.points
    if t0 != 0.0:
        raise VetoPersuasionError("linear3 requires the lowest atom at 0")
    return (w0, w1), (t0, t1, t2)


def cmd_solve(args: argparse.Namespace) -> int:
    d = from_literal(args.dist)
    prefs = prefs_from_literal(args.loss)
    if args.model == "quad":
        solve = (
            qsolve.solve_persuasion_first
            if args.timing == "persuasion-first"
            else qsolve.solve_proposal_first
        )
        r = solve(d, prefs)
        report = {
            "regime": r.regime.value,
            "cutoffs": [] if r.s_star is None else [r.s_star],
            "proposals": [r.proposal],
            "value": r.value,
            "veto_prob": r.veto_prob,
        }
    elif args.model == "linear2":
        env = _binary_env(d)
        if args.timing == "persuasion-first":
            r = lsolve.solve_persuasion_first_binary(env, prefs)
            report = {
                "regime": r.regime,
                "cutoffs": [mu for mu, _, _ in r.posteriors],
                "proposals": [p for _, _, p in r.posteriors],
                "value": r.value,
                "veto_prob": 0.0,
            }
        else:
            p_opt, value, experiment = lsolve.solve_proposal_first_binary(env, prefs)
            veto = experiment[0][1] if experiment else 0.0
            report = {
                "regime": "Split" if experiment else "NoInfo",
                "cutoffs": [mu for mu, _ in experiment] if experiment else [env.mu0],
                "proposals": [p_opt],
                "value": value,
                "veto_prob": veto,
            }
    else:  # linear3
        prior, levels = _three_prior(d)
        r = lsolve.three_type_values(prior, levels, prefs)
        report = {
            "regime": f"BestBinary[{r.branch}]",
            "cutoffs": list(r.sigma_star),
            "proposals": [],
            "value": r.v_bestbinary,
            "veto_prob": None,
            "value_noinfo": r.v_noinfo,
            "value_fullinfo": r.v_fullinfo,
        }
    _emit(report, args.json, args.out)
    return 0


def _sweep_risk_row(alpha: float) -> Tuple[float, float, float, float, float]:
    d = UniformInterval(-1.0, 1.0)
    r = qsolve.solve_persuasion_first(d, Exponential(alpha))
    return alpha, r.s_star, r.s_upper, d.cdf(r.s_star), r.value


def _sweep_tilt_row(lam: float) -> Tuple[float, float, float, float, float]:
    # theta_hi = 0.8 keeps even strongly tilted priors below mean 1/2, so
    # every row stays in the cutoff regime and the columns are comparable.
    base = UniformInterval(-1.0, 0.8)
    d: TypeDistribution = lr_tilt(base, lam) if lam != 0.0 else base
    r = qsolve.solve_persuasion_first(d, Power(2.0))
    return lam, r.s_star, r.s_upper, d.cdf(r.s_star), r.value


def _sweep_hi_row(hi: float) -> Tuple[float, float, float, float, float]:
    d = UniformInterval(-1.0, hi)
    r = qsolve.solve_persuasion_first(d, Power(2.0))
    s = r.s_star if r.s_star is not None else d.mean()
    up = r.s_upper if r.s_upper is not None else d.mean()
    return hi, s, up, d.cdf(s), r.value


_SWEEPS = {
    "risk-aversion": (_sweep_risk_row, [0.5, 1.0, 2.0, 4.0], ("<=", "<=")),
    "tilt": (_sweep_tilt_row, [0.0, 0.5, 1.0, 2.0], ("<=", ">=")),
    "theta-hi": (_sweep_hi_row, list(np.linspace(0.55, 1.0, 10)), ("<=", ">=")),
}


def cmd_sweep(args: argparse.Namespace) -> int:
    worker, grid, (dir_s, dir_up) = _SWEEPS[args.kind]
    if args.values:
        grid = [float(v) for v in args.values.split(",")]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(worker, grid))
    else:
        rows = [worker(g) for g in grid]

    def ok(prev: float, cur: float, sense: str) -> bool:
        return cur <= prev + 1e-9 if sense == "<=" else cur >= prev - 1e-9

    out_rows: List[Sequence] = []
    for i, (p, s, up, fs, v) in enumerate(rows):
        verdict = "pass"
        if i > 0:
            _, s0, up0, _, _ = rows[i - 1]
            if not (ok(s0, s, dir_s) and ok(up0, up, dir_up)):
                verdict = "fail"
        out_rows.append([p, s, up, fs, v, verdict])
    _write_csv(
        out_rows, ["parameter", "s_star", "s_upper", "F_s_star", "value", "monotone"], args.out
    )
    return 0 if all(r[-1] == "pass" for r in out_rows) else 3


def _figure_rows(fig: int, n: int) -> Tuple[List[str], List[Sequence]]:
    if fig == 1:
        lo = np.linspace(-2.0, -0.01, n)
        return (
            ["theta_lo", "u_no", "u_fl1", "u_fl2", "u_bi"],
            [
                [t, closedform.u_no(t), closedform.u_fl1(t), closedform.u_fl2(t), closedform.u_bi(t)]
                for t in lo
            ],
        )
    if fig == 2:
        ss = np.linspace(-1.0, 1.0, n)
        prefs = Power(2.0)
        return ["s", "indirect_u"], [[s, qsolve.indirect_u(s, prefs)] for s in ss]
    if fig == 3:
        his = np.linspace(0.05, 1.0, n)
        return (
            ["theta_hi", "kappa", "proposal"],
            [[t, closedform.kappa(t), closedform.kappa(t) + t] for t in his],
        )
    if fig == 4:
        mus = np.linspace(0.0, 1.0, n)
        prefs = Linear()
        envs = [BinaryTypeEnv(0.1, 0.45, 0.5), BinaryTypeEnv(0.1, 0.7, 0.5)]
        return (
            ["mu", "uhat_h045", "uhat_h07"],
            [[m] + [lsolve.uhat(e, prefs, m) for e in envs] for m in mus],
        )
    if fig == 5:
        prefs = Linear()
        envs = [BinaryTypeEnv(0.15, 0.7, m) for m in (0.2, 0.3, 0.45)]
        ps = np.linspace(0.0, envs[0].p_bar, n)
        return (
            ["p", "utilde_mu02", "utilde_mu03", "utilde_mu045"],
            [[p] + [lsolve.utilde(e, prefs, p) for e in envs] for p in ps],
        )
    if fig == 6:
        prefs = Linear()
        mus = np.linspace(0.01, 0.99, n)
        rows = []
        for m in mus:
            env = BinaryTypeEnv(0.1, 0.7, m)
            pf = lsolve.solve_proposal_first_binary(env, prefs)[1]
            ef = lsolve.solve_persuasion_first_binary(env, prefs).value
            rows.append([m, pf, ef, lsolve.uhat(env, prefs, m)])
        return ["mu0", "proposal_first", "persuasion_first", "no_info"], rows
    raise VetoPersuasionError(f"unknown figure id {fig}")


def cmd_figure(args: argparse.Namespace) -> int:
    header, rows = _figure_rows(args.id, args.grid or 101)
    _write_csv(rows, header, args.out)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    d = from_literal(args.dist)
    prefs = prefs_from_literal(args.loss)
    tol = args.tol if args.tol is not None else 1e-6
    checks: List[Tuple[str, bool, str]] = []
    if args.model == "quad":
        r = qsolve.solve_persuasion_first(d, prefs)
        grid_n = min(args.grid or 400, 500)
        best, _ = oracle.partition_search(d, prefs, 3, grid_n)
        if r.regime is qsolve.Regime.BINARY_CUTOFF:
            ok, viol = oracle.verify_certificate(d, prefs, r.s_star, r.s_upper)
            checks.append(("price-certificate", ok, f"max violation {viol:.3g}"))
            checks.append(
                ("partition-search", best <= r.value + tol, f"oracle {best:.9g} vs {r.value:.9g}")
            )
        elif r.regime is qsolve.Regime.NO_INFO:
            ok, viol = oracle.verify_no_info_certificate(d, prefs)
            checks.append(("tangent-certificate", ok, f"max violation {viol:.3g}"))
            checks.append(
                (
                    "partition-search",
                    best <= r.value + tol,
                    "no improving partition found" if best <= r.value + tol else f"improved to {best:.9g}",
                )
            )
        else:
            checks.append(("regime", True, r.regime.value))
    elif args.model == "linear2":
        env = _binary_env(d)
        p_opt, value, _ = lsolve.solve_proposal_first_binary(env, prefs)
        p_g, v_g = oracle.proposal_first_grid(env, prefs, args.grid or 4001)
        checks.append(
            ("proposal-grid", abs(v_g - value) <= tol, f"grid {v_g:.9g} vs {value:.9g}")
        )
        pf = lsolve.solve_persuasion_first_binary(env, prefs)
        checks.append(
            ("timing-order", pf.value >= value - 1e-10, f"{pf.value:.9g} >= {value:.9g}")
        )
    else:
        prior, levels = _three_prior(d)
        r = lsolve.three_type_values(prior, levels, prefs)
        best, sigma = oracle.binary_signal_search_atoms(prior, levels, prefs, min(args.grid or 41, 101))
        checks.append(
            (
                "binary-signal-search",
                abs(best - r.v_bestbinary) <= 1e-4,
                f"oracle {best:.9g} (sigma={tuple(round(s, 6) for s in sigma)}) vs {r.v_bestbinary:.9g}",
            )
        )
    all_ok = all(ok for _, ok, _ in checks)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {msg}" for name, ok, msg in checks]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all_ok else 3


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        cfg = json.load(fh)
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            parser.error(f"unknown config key {key!r}")
        # Explicit CLI flags win over the config file; unset flags are None.
        if getattr(args, attr) is None:
            setattr(args, attr, val)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vps", description="Veto-bargaining persuasion solvers"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        # Defaults are None so a config file can tell "unset" from "explicit".
        p.add_argument("--json", action="store_true", default=None,
                       help="machine-readable output")
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
        p.add_argument("--grid", type=int, default=None, help="grid size override")
        p.add_argument("--tol", type=float, default=None, help="check tolerance")
        p.add_argument("--config", default=None, help="JSON config file mirroring flags")

    p = sub.add_parser("solve", help="solve a single instance")
    p.add_argument("model", choices=["quad", "linear2", "linear3"])
    p.add_argument("timing", choices=["persuasion-first", "proposal-first"])
    p.add_argument("dist", help="uniform:lo,hi | atoms:t:p,... | tilt:(base);lam")
    p.add_argument("loss", help="linear | power:gamma | exp:alpha")
    common(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("sweep", help="comparative-statics sweep to CSV")
    p.add_argument("kind", choices=sorted(_SWEEPS))
    p.add_argument("--values", default=None, help="comma-separated parameter values")
    common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("figure", help="emit figure data as CSV")
    p.add_argument("id", type=int, choices=[1, 2, 3, 4, 5, 6])
    common(p)
    p.set_defaults(fn=cmd_figure)

    p = sub.add_parser("oracle", help="cross-check an instance against brute force")
    p.add_argument("model", choices=["quad", "linear2", "linear3"])
    p.add_argument("dist")
    p.add_argument("loss")
    common(p)
    p.set_defaults(fn=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        return args.fn(args)
    except VetoPersuasionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
