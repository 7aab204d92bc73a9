"""Command line interface ``gfscalc``.

Reports are JSON (stdout or ``--out``); growth tables are CSV.  Exit codes:
0 success, 1 failed asserted checks or numerical errors, 2 input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import besov, calculus, gamma, gfs, powerbound, zoo
from .config import RunConfig
from .errors import GfsError, InvalidSpec
from .io import load_function, load_json, load_matrix, matrix_to_dict, write_json
from .linalg import AmbientSpace
from .verify import report_text, verify_all


def _grid(text):
    if text in (None, "default"):
        return None
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise InvalidSpec(f"bad radius grid {text!r}") from exc


def _space(args, T, default):
    return AmbientSpace.parse(args.space, T.shape[0]) if args.space else default


def _seed(args, cfg):
    return cfg.seed if args.seed is None else args.seed


def cmd_apply(args, cfg):
    T, _ = load_matrix(args.op)
    f = load_function(args.func)
    res = calculus.apply_function(f, T, args.m, args.method, args.rho)
    out = res.to_dict()
    if isinstance(res.value, np.ndarray):
        out["value"] = matrix_to_dict(res.value)
    return out


def cmd_gfs(args, cfg):
    T, space = load_matrix(args.op)
    est = gfs.gfs_constant(T, args.m, _grid(args.r_grid), args.samples or cfg.gfs_samples,
                           _seed(args, cfg), _space(args, T, space))
    return est.to_dict()


def cmd_dfc(args, cfg):
    T, space = load_matrix(args.op)
    est = gfs.dfc_constant(T, args.m, _grid(args.r_grid), args.samples or cfg.dfc_samples,
                           _seed(args, cfg), _space(args, T, space))
    return est.to_dict()


def cmd_powerbound(args, cfg):
    T, space = load_matrix(args.op)
    return powerbound.power_bound(T, args.horizon or cfg.horizon, _space(args, T, space)).to_dict()


def cmd_besov_norm(args, cfg):
    return besov.besov_norm(load_function(args.func)).to_dict()


def cmd_peller(args, cfg):
    T, space = load_matrix(args.op)
    est = besov.peller_type_constant(T, args.degree_max, args.samples, _seed(args, cfg),
                                     _space(args, T, space))
    return est.to_dict()


def _family(spec, T):
    kind, _, n = spec.partition(":")
    if kind != "powers" or not n.isdigit():
        raise InvalidSpec(f"family must look like powers:<n>, got {spec!r}")
    return gamma.power_family(T, int(n))


def cmd_gamma(args, cfg):
    data = load_json(args.op)
    T, space = load_matrix(args.op)
    seed = _seed(args, cfg)
    K = args.samples or cfg.gamma_K
    if not args.growth:
        est = gamma.gamma_bound_of_family(_family(args.family, T), _space(args, T, space), K, seed)
        return est.to_dict()
    if "kind" not in data or "d" not in data:
        raise InvalidSpec("--growth needs an operator spec with a dimension parameter d")
    rows = []
    for d in (int(v) for v in args.growth.split(",")):
        Td, sp = zoo.build({**data, "d": d})
        est = gamma.gamma_bound_of_family(_family(args.family, Td), _space(args, Td, sp), K, seed)
        rows.append({"d": d, "estimate": est.value, "bound_side": est.bound_side})
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["d", "estimate", "bound_side"])
            w.writeheader()
            w.writerows(rows)
    return {"family": args.family, "rows": rows}


def cmd_gamma_gfs(args, cfg):
    T, space = load_matrix(args.op)
    est = gamma.gamma_gfs_estimate(T, args.m, _space(args, T, space), _grid(args.r_grid),
                                   args.samples or cfg.gamma_K, _seed(args, cfg))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r_min", "estimate"])
            g = est.meta["growth"]
            w.writerows(zip(g["r_mins"], g["values"]))
    return est.to_dict()


def cmd_zoo(args, cfg):
    specs = zoo.default_zoo()
    if args.action == "list":
        return {name: spec.to_dict() for name, spec in specs.items()}
    if args.name not in specs:
        raise InvalidSpec(f"unknown zoo entry {args.name!r}")
    T, space = zoo.build(specs[args.name])
    return {**matrix_to_dict(T), "ambient": space.label(), "spec": specs[args.name].to_dict()}


def build_parser() -> argparse.ArgumentParser:
    # common options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="RunConfig JSON file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="override the configured seed")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="write the JSON report here instead of stdout")
    p = argparse.ArgumentParser(prog="gfscalc", description=__doc__.splitlines()[0],
                                parents=[common])
    p.set_defaults(config=None, seed=None, out=None)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def op_cmd(name, fn, **kw):
        s = sub.add_parser(name, **kw)
        s.add_argument("--op", required=True, help="matrix or operator-spec JSON")
        s.add_argument("--space", help="override the ambient space: hilbert or lp:<p>")
        s.set_defaults(fn=fn)
        return s

    s = sub.add_parser("apply", help="evaluate f^(m)(T)")
    s.add_argument("--op", required=True)
    s.add_argument("--func", required=True)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--method", choices=["horner", "rd", "ipp", "besov"], default="horner")
    s.add_argument("--rho", type=float)
    s.set_defaults(fn=cmd_apply)

    for name, fn, help_ in (("gfs", cmd_gfs, "estimate the GFS constant"),
                            ("dfc", cmd_dfc, "estimate the derivative calculus constant")):
        s = op_cmd(name, fn, help=help_)
        s.add_argument("--m", type=int, default=1)
        s.add_argument("--r-grid", default="default", help="comma separated radii")
        s.add_argument("--samples", type=int)

    s = op_cmd("powerbound", cmd_powerbound, help="measure sup ||T^n||")
    s.add_argument("--horizon", type=int)

    s = sub.add_parser("besov-norm", help="Besov algebra norm of a function")
    s.add_argument("--func", required=True)
    s.set_defaults(fn=cmd_besov_norm)

    s = op_cmd("peller", cmd_peller, help="sampled sup ||P(T)|| / ||P||_B")
    s.add_argument("--degree-max", type=int, default=30)
    s.add_argument("--samples", type=int, default=256)

    s = op_cmd("gamma", cmd_gamma, help="gamma-bound of an operator family")
    s.add_argument("--family", default="powers:16")
    s.add_argument("--samples", type=int, help="Monte Carlo draws")
    s.add_argument("--growth", help="comma separated dimensions for a growth table")
    s.add_argument("--csv", help="write the growth table as CSV")

    s = op_cmd("gamma-gfs", cmd_gamma_gfs, help="gamma-bound of the phase-averaged resolvent set")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--r-grid", default="default")
    s.add_argument("--samples", type=int, help="Monte Carlo draws")
    s.add_argument("--csv", help="write the floor table as CSV")

    s = sub.add_parser("verify-all", help="run the verification harness")
    s.add_argument("--quick", action="store_true", help="use the quick profile")
    s.set_defaults(fn=None)

    s = sub.add_parser("zoo", help="list or show the example operators")
    s.add_argument("action", choices=["list", "show"])
    s.add_argument("name", nargs="?")
    s.set_defaults(fn=cmd_zoo)
    return p


def _load_config(args) -> RunConfig:
    data = load_json(args.config) if args.config else {}
    if not isinstance(data, dict):
        raise InvalidSpec("configuration must be a JSON object")
    if getattr(args, "quick", False):
        data["profile"] = "quick"
    if args.seed is not None:
        data["seed"] = args.seed
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.command == "verify-all":
            code, report = verify_all(cfg)
            text = report_text(report)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return code
        write_json(args.fn(args, cfg), args.out)
        return 0
    except (InvalidSpec, OSError, json.JSONDecodeError) as exc:
        print(f"gfscalc: input error: {exc}", file=sys.stderr)
        return 2
    except GfsError as exc:
        print(f"gfscalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
