"""``noether-lab`` command line.

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import integrate as integ
from . import poisson
from .config import DEFAULT_INTEGRATOR, INTEGRATOR_METHODS, MODELS, load_config, parse_config_dict
from .errors import ConfigError, NoetherLabError
from .phasespace import make_state
from .report import build_model, run

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def emit_csv(obj, path) -> None:
    """Write a trajectory (``t,q..,p..``) or wave state (``p,re,im``) to ``path``."""
    obj.to_csv(path)


def _params(text: str | None) -> dict:
    if not text:
        return {}
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--params is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("--params must be a JSON object")
    return data


def _bundle_for(model: str, params: dict):
    cfg = parse_config_dict({"model": model, "params": params, "suites": ["conservation"]})
    return cfg, build_model(cfg)


def _print_summary(report, out_dir):
    s = report.summary()
    for r in report.records:
        if not r.passed:
            print(f"FAIL {r.check_id}: residual {r.residual} >= {r.tolerance}")
    print(f"{s['passed']}/{s['total']} checks passed; report in {out_dir}")


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(output_dir=args.out, seed=args.seed)
    report = run(cfg)
    report.write(cfg.output_dir)
    _print_summary(report, cfg.output_dir)
    return report.exit_status


def cmd_qcheck(args) -> int:
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(output_dir=args.out, seed=args.seed, suites=[args.suite])
    report = run(cfg)
    report.write(cfg.output_dir)
    _print_summary(report, cfg.output_dir)
    return report.exit_status


def cmd_integrate(args) -> int:
    _, b = _bundle_for(args.model, _params(args.params))
    s0 = make_state(args.q0, args.p0, args.t0)
    if s0.dim != b.system.dim:
        raise ConfigError(f"model {args.model!r} has dimension {b.system.dim}, initial state has {s0.dim}")
    if not args.h > 0:
        raise ConfigError("--h must be positive")
    if args.n < 0:
        raise ConfigError("--n must be non-negative")
    traj = integ.integrate(args.method, b.system, s0, args.h, args.n)
    if args.out:
        emit_csv(traj, args.out)
    else:
        d = traj.dim
        print(",".join(["t"] + [f"q{i}" for i in range(d)] + [f"p{i}" for i in range(d)]))
        for t, q, p in zip(traj.times, traj.q, traj.p):
            print(",".join("%.17g" % x for x in (t, *q, *p)))
    return EXIT_OK


def cmd_table(args) -> int:
    _, b = _bundle_for(args.model, _params(args.params))
    names = [n.strip() for n in args.obs.split(",") if n.strip()]
    obs = []
    for n in names:
        if n not in b.charges:
            raise ConfigError(f"unknown observable {n!r}; available: {', '.join(sorted(b.charges))}")
        obs.append(b.charges[n])
    d = b.system.dim
    if args.state is not None:
        if len(args.state) != 2 * d + 1:
            raise ConfigError(f"--state takes q (d={d}), p (d={d}) and t: {2 * d + 1} numbers, got {len(args.state)}")
        s = make_state(args.state[:d], args.state[d : 2 * d], args.state[-1])
    else:
        q = args.q if args.q is not None else [0.0] * d
        p = args.p if args.p is not None else [0.0] * d
        s = make_state(q, p, args.t)
    if s.dim != d:
        raise ConfigError(f"state dimension {s.dim} does not match model dimension {d}")
    table = poisson.bracket_table(obs, s)
    print(json.dumps(table.to_dict(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="noether-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify", help="run verification suites from a config file")
    v.add_argument("--config", required=True)
    v.add_argument("--out", default=None, help="output directory (overrides config)")
    v.add_argument("--seed", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("integrate", help="integrate a built-in model and emit CSV")
    i.add_argument("--model", required=True, choices=MODELS)
    i.add_argument("--params", default=None, help="model parameters as a JSON object")
    i.add_argument("--method", default=DEFAULT_INTEGRATOR["method"], choices=INTEGRATOR_METHODS)
    i.add_argument("--h", type=float, required=True)
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--q0", type=float, nargs="+", required=True)
    i.add_argument("--p0", type=float, nargs="+", required=True)
    i.add_argument("--t0", type=float, default=0.0)
    i.add_argument("--out", default=None, help="CSV path (default: stdout)")
    i.set_defaults(func=cmd_integrate)

    t = sub.add_parser("table", help="print a Poisson-bracket table")
    t.add_argument("--model", required=True, choices=MODELS)
    t.add_argument("--params", default=None)
    t.add_argument("--obs", required=True, help="comma-separated charge names, e.g. T0,gamma0,H")
    t.add_argument("--state", type=float, nargs="+", default=None, help="q0..q{d-1} p0..p{d-1} t in one list")
    t.add_argument("--q", type=float, nargs="+", default=None)
    t.add_argument("--p", type=float, nargs="+", default=None)
    t.add_argument("--t", type=float, default=0.0)
    t.set_defaults(func=cmd_table)

    qc = sub.add_parser("qcheck", help="run one quantum suite")
    qc.add_argument("--suite", required=True, choices=("qfock", "qwave"))
    qc.add_argument("--config", required=True)
    qc.add_argument("--out", default=None)
    qc.add_argument("--seed", type=int, default=None)
    qc.set_defaults(func=cmd_qcheck)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"I/O error{where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except NoetherLabError as exc:
        # model-level input errors (bad frequency, zero mode, ...) are configuration problems
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
