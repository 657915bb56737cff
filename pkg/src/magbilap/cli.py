"""
Command-line front-end
======================

``magbilap stats | check | verify | probe | apply | export``.

Data goes to stdout, diagnostics to stderr.  Every JSON report is wrapped
as ``{"manifest": ..., "report": ...}``; the manifest records the command,
resolved configuration, seed, tool version and SHA-256 digests of input
files.  Files are written below ``--out-dir``, which defaults to
``$MAGBILAP_OUTPUT_DIR`` or the current directory.

Exit codes: 0 success; ``check`` returns 2 when the verdict is not
``satisfied``; ``verify`` returns 1 when a check fails; malformed input
returns 64.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .deficiency import (ShootingConfig, consistency_probe, rectangular_residual, shoot,
                         shooting_probe)
from .errors import HorizonError, InputError, MagbilapError
from .families import build_example, growth_table
from .graph import loads_graph
from .lab import LAB_FAMILIES, SUITES, TrialConfig, run_suite
from .operators import (Amplitudes, Potential, apply_bilaplacian, apply_H, apply_laplacian,
                        apply_P, assemble_truncation, write_matrix_market)
from .theorem import EXAMPLE_INSTANCES, load_instance

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NOT_SATISFIED = 2
EXIT_USAGE = 64
OUTPUT_ENV = "MAGBILAP_OUTPUT_DIR"


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None = None
    tool_version: str = __version__
    input_digests: dict = field(default_factory=dict)

    def digest(self):
        body = json.dumps(self._body(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(body.encode()).hexdigest()

    def _body(self):
        return {"command": self.command, "config": self.config, "seed": self.seed,
                "tool_version": self.tool_version, "input_digests": self.input_digests}

    def to_json(self):
        out = {**self._body(), "digest": self.digest()}
        # the timestamp is outside the digest and only present when pinned
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        if epoch is not None:
            try:
                out["timestamp"] = datetime.fromtimestamp(int(epoch), timezone.utc).isoformat()
            except ValueError:
                pass
        return out


def _wrap(manifest, report):
    return json.dumps({"manifest": manifest.to_json(), "report": report}, sort_keys=True,
                      indent=1)


def _digest_file(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _out_dir(args):
    d = args.out_dir or os.environ.get(OUTPUT_ENV) or "."
    os.makedirs(d, exist_ok=True)
    return d


def _family_args(p, required=True):
    p.add_argument("--builder", required=required,
                   choices=["half_line_unit", "half_line_sqrt", "radial_tree"])
    p.add_argument("--kappa", type=float, help="tree branching exponent")
    p.add_argument("--alpha", type=float, help="tree potential exponent")
    p.add_argument("--phase", help="constant phase in [-pi, pi] or 'random'")
    p.add_argument("--phase-seed", type=int, default=0)


def _family(args):
    phase = args.phase
    if phase is not None and phase != "random":
        try:
            phase = float(phase)
        except ValueError:
            raise InputError(f"--phase must be a number or 'random', got {phase!r}") from None
    return build_example(args.builder, kappa=args.kappa, alpha=args.alpha, phase=phase,
                         phase_seed=args.phase_seed)


def _family_config(args):
    return {"builder": args.builder, "kappa": args.kappa, "alpha": args.alpha,
            "phase": args.phase, "phase_seed": args.phase_seed}


# -- stats --------------------------------------------------------------------

def cmd_stats(args):
    f = _family(args)
    rows = growth_table(f, args.n_max, args.mu_floor)
    table = [{**r.as_dict(), "d_n p_n / n": r.d_n * r.p_n / r.n} for r in rows]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d_n", "p_n", "beta_n", "d_n_p_n_over_n"])
        for r in table:
            w.writerow([r["n"], r["d_n"], repr(r["p_n"]), repr(r["beta_n"]),
                        repr(r["d_n p_n / n"])])
        sys.stdout.write(buf.getvalue())
    else:
        m = RunManifest("stats", {**_family_config(args), "n_max": args.n_max,
                                  "mu_floor": args.mu_floor or f.mu_floor})
        print(_wrap(m, {"family": f.description(), "rows": table}))
    return EXIT_OK


# -- check --------------------------------------------------------------------

def cmd_check(args):
    if (args.instance is None) == (args.example is None):
        raise InputError("give exactly one of an instance file or --example")
    digests = {}
    if args.example is not None:
        doc = EXAMPLE_INSTANCES[args.example]
    else:
        doc = _read_json(args.instance)
        digests[args.instance] = _digest_file(args.instance)
    inst = load_instance(doc)
    report = inst.check()
    m = RunManifest("check", {"instance": doc}, input_digests=digests)
    print(_wrap(m, report.to_json()))
    print(f"verdict: {report.verdict}", file=sys.stderr)
    return EXIT_OK if report.verdict == "satisfied" else EXIT_NOT_SATISFIED


# -- verify -------------------------------------------------------------------

def _n_range(text):
    try:
        if "-" in text:
            a, b = text.split("-", 1)
            return tuple(range(int(a), int(b) + 1))
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"bad n range {text!r}; use '1-10' or '1,2,5'") from None


def cmd_verify(args):
    if args.ci and args.seed is None:
        raise InputError("--ci requires an explicit --seed")
    seed = 0 if args.seed is None else args.seed
    families = tuple(args.families.split(",")) if args.families else LAB_FAMILIES
    cfg = TrialConfig(trials=args.trials, n_range=_n_range(args.n_range),
                      support_radius=args.support_radius, seed=seed,
                      tolerance=args.tolerance, families=families)
    report = run_suite(cfg, args.suite)
    m = RunManifest("verify", {"suite": args.suite, **cfg.to_json()}, seed=seed)
    if args.format == "table":
        print(report.table())
    else:
        print(_wrap(m, report.to_json()))
    print("all checks pass" if report.passed else "some checks FAIL", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# -- probe --------------------------------------------------------------------

def _horizons(text):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad horizon list {text!r}") from None


def cmd_probe(args):
    f = _family(args)
    W = f.potential_model
    cfg = ShootingConfig(divergent_factor=args.divergent_factor, decay_ratio=args.decay_ratio)
    horizons = _horizons(args.horizons)
    sign = 1 if args.sign == "+" else -1
    conf = {**_family_config(args), "method": args.method, "nu": args.nu, "sign": args.sign,
            "horizon": args.horizon, "horizons": horizons,
            "divergent_factor": cfg.divergent_factor, "decay_ratio": cfg.decay_ratio,
            "max_columns": args.max_columns}
    if args.method == "shooting":
        report = shooting_probe(f, W, args.nu, args.horizon, config=cfg)
    elif args.method == "rectangular":
        report = rectangular_residual(f, W, args.nu, sign, horizons,
                                      max_columns=args.max_columns)
    else:
        conf["nus"] = [0.5, 1.0, 2.0]
        report = consistency_probe(f, W, shooting_horizon=args.horizon, horizons=horizons,
                                   max_columns=args.max_columns)
    if args.csv and args.method == "shooting":
        d = _out_dir(args)
        for s in (1, -1):
            for sol in shoot(f, W, args.nu, s, args.horizon, cfg):
                name = f"shoot_{args.builder}_nu{args.nu:g}_{'p' if s > 0 else 'm'}_{sol.basis_index}.csv"
                path = os.path.join(d, name)
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(sol.to_csv())
                print(f"wrote {path}", file=sys.stderr)
    m = RunManifest("probe", conf)
    print(_wrap(m, report.to_json()))
    print(f"conclusion: {report.conclusion}", file=sys.stderr)
    return EXIT_OK


# -- apply --------------------------------------------------------------------

def _graph_for_apply(args):
    digests = {}
    if args.graph:
        with open(args.graph, encoding="utf-8") as fh:
            g = loads_graph(fh.read())
        digests[args.graph] = _digest_file(args.graph)
        return g, None, digests
    if not args.builder or args.horizon is None:
        raise InputError("apply needs --graph FILE or --builder with --horizon")
    f = _family(args)
    return f.generate(args.horizon), f, digests


def cmd_apply(args):
    g, f, digests = _graph_for_apply(args)
    amp = Amplitudes.from_json(g, _read_json(args.amplitudes))
    digests[args.amplitudes] = _digest_file(args.amplitudes)
    u = np.asarray(amp.values)
    magnetic = not args.no_magnetic
    if args.op == "laplacian":
        out = apply_laplacian(g, u, magnetic)
    elif args.op == "bilaplacian":
        out = apply_bilaplacian(g, u, magnetic)
    elif args.op == "H":
        if args.potential:
            W = Potential.from_table(_read_json(args.potential))
            digests[args.potential] = _digest_file(args.potential)
        elif f is not None:
            W = f.potential_model
        else:
            raise InputError("--op H on a graph file needs --potential FILE")
        out = apply_H(g, W, u)
    else:
        if not args.psi:
            raise InputError("--op P needs --psi FILE")
        psi = np.asarray(Amplitudes.from_json(g, _read_json(args.psi)).values)
        digests[args.psi] = _digest_file(args.psi)
        out = apply_P(g, psi, u)
    result = Amplitudes(g, out).to_json()
    text = json.dumps(result, sort_keys=True, indent=1)
    if args.output:
        path = os.path.join(_out_dir(args), args.output)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {path}", file=sys.stderr)
    print(text)
    return EXIT_OK


# -- export -------------------------------------------------------------------

def cmd_export(args):
    f = _family(args)
    op = assemble_truncation(f, f.potential_model, args.n, args.boundary)
    name = args.output or f"{args.builder}_N{args.n}_{args.boundary}.mtx"
    path = os.path.join(_out_dir(args), name)
    side = write_matrix_market(op, path)
    m = RunManifest("export", {**_family_config(args), "n": args.n,
                               "boundary": args.boundary})
    print(_wrap(m, {"matrix": path, "sidecar": side, "shape": list(op.shape),
                    "nnz": int(op.matrix.nnz)}))
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="magbilap",
                                description="Magnetic bi-Laplacians on weighted graphs.")
    p.add_argument("--version", action="version", version=f"magbilap {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir",
                        help=f"directory for written files (default ${OUTPUT_ENV} or .)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stats", parents=[common], help="growth statistics d_n, p_n, beta_n")
    _family_args(s)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--mu-floor", type=float)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.set_defaults(func=cmd_stats)

    c = sub.add_parser("check", parents=[common], help="check the hypotheses of the criterion")
    c.add_argument("instance", nargs="?", help="instance JSON file")
    c.add_argument("--example", choices=sorted(EXAMPLE_INSTANCES))
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", parents=[common], help="run the inequality lab")
    v.add_argument("--suite", default="all", choices=["all", *SUITES])
    v.add_argument("--seed", type=int)
    v.add_argument("--ci", action="store_true", help="require an explicit seed")
    v.add_argument("--trials", type=int, default=500)
    v.add_argument("--n-range", default="1-10")
    v.add_argument("--support-radius", type=int)
    v.add_argument("--tolerance", type=float, default=1e-10)
    v.add_argument("--families", help=f"comma list from {','.join(LAB_FAMILIES)}")
    v.add_argument("--format", choices=["json", "table"], default="json")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("probe", parents=[common], help="deficiency probes")
    _family_args(r)
    r.add_argument("--method", choices=["shooting", "rectangular", "consistency"],
                   default="shooting")
    r.add_argument("--nu", type=float, default=1.0)
    r.add_argument("--sign", choices=["+", "-"], default="+")
    r.add_argument("--horizon", type=int, default=200, help="shooting horizon")
    r.add_argument("--horizons", default="20,40,60,80", help="rectangular horizons")
    r.add_argument("--max-columns", type=int, default=4000)
    r.add_argument("--divergent-factor", type=float, default=10.0)
    r.add_argument("--decay-ratio", type=float, default=0.99)
    r.add_argument("--csv", action="store_true", help="write shooting CSV files")
    r.set_defaults(func=cmd_probe)

    a = sub.add_parser("apply", parents=[common], help="apply an operator to amplitudes")
    a.add_argument("--graph", help="graph JSON file")
    _family_args(a, required=False)
    a.add_argument("--horizon", type=int)
    a.add_argument("--op", choices=["laplacian", "bilaplacian", "H", "P"], required=True)
    a.add_argument("--amplitudes", required=True, help="JSON {id: [re, im]}")
    a.add_argument("--potential", help="JSON {id: W} for --op H")
    a.add_argument("--psi", help="JSON {id: value} for --op P")
    a.add_argument("--no-magnetic", action="store_true")
    a.add_argument("--output", "-o", help="also write the result to this file")
    a.set_defaults(func=cmd_apply)

    e = sub.add_parser("export", parents=[common], help="export a truncation as Matrix Market")
    _family_args(e)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--boundary", choices=["dirichlet", "interior_rows"], default="dirichlet")
    e.add_argument("--output", "-o")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (InputError, HorizonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MagbilapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
