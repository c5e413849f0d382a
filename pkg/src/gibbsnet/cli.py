"""Command-line entry point ``gibbsnet``.

Exit codes: 0 success, 1 oracle disagreement (some ``|z| > 5``), 2 invalid
config/data/dimensions or enumeration cap exceeded, 3 too few zero-error
networks within ``max_attempts``, 4 file I/O failure.  Tables go to stdout (or
``--out``); diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import ensemble as ens_mod
from .config import MIXED_ARCH, ZERO_ERROR, RunConfig, format_beta, load_config, parse_beta
from .data import holdout_split, load_dataset, load_points, save_dataset
from .errors import AcceptanceTooLow, ConfigError, GibbsNetError
from .oracle import GridSpec, exact_mixed_average, exact_zero_error_average

EXIT_OK = 0
EXIT_ORACLE = 1
EXIT_CONFIG = 2
EXIT_ACCEPTANCE = 3
EXIT_IO = 4


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_table(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _float_list(text):
    try:
        return [parse_beta(t) for t in text.split(",") if t.strip()]
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _xcols(n):
    return [f"x{i + 1}" for i in range(n)]


def cmd_build(args) -> int:
    cfg = _config(args)
    ts = load_dataset(args.data)
    ens = ens_mod.build(ts, cfg, threads=args.threads)
    ens_mod.save_ensemble(ens, args.out)
    summary = {
        "mode": ens.mode,
        "n": len(ens),
        "beta": format_beta(ens.beta),
        "acceptance_rate": ens.acceptance_rate,
        "attempts": ens.attempts,
        "energy_histogram": {str(k): v for k, v in ens_mod.energy_histogram(ens).items()},
        "mean_energy": ens_mod.mean_energy(ens),
        "training_accuracy": ens_mod.accuracy(ens, ts),
        "architecture_mass": ens_mod.architecture_mass(ens),
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_predict(args) -> int:
    ens = ens_mod.load_ensemble(args.artifact)
    X = load_points(args.data, ens.input_dim)
    value, se = ens_mod.evaluate_many(ens, X)
    rows = [list(x) + [v, s, int(v >= 0.5)] for x, v, s in zip(X, value, se)]
    _write_table(_xcols(ens.input_dim) + ["value", "std_error", "label_hat"], rows, args.out)
    return EXIT_OK


def cmd_sweep_beta(args) -> int:
    cfg = _config(args)
    if cfg.mode == ZERO_ERROR:
        raise ConfigError("sweep-beta needs a gibbs or mixed_arch config")
    ts = load_dataset(args.data)
    holdout = load_dataset(args.holdout) if args.holdout else None
    probes = load_points(args.probes, ts.input_dim) if args.probes else np.empty((0, ts.input_dim))
    base = ens_mod.build(ts, cfg, threads=args.threads)
    ids = [a.id for a in base.architectures]
    F = base.table.outputs(probes) if len(probes) else None
    header = ["beta", "training_accuracy", "holdout_accuracy", "mean_energy", "n_effective"]
    header += [f"mass_{i}" for i in ids] + [f"value_p{j}" for j in range(len(probes))]
    rows = []
    for beta in args.betas:
        e = ens_mod.reweight(base, beta)
        mass = ens_mod.architecture_mass(e)
        row = [
            format_beta(beta),
            ens_mod.accuracy(e, ts),
            ens_mod.accuracy(e, holdout) if holdout is not None else "",
            ens_mod.mean_energy(e),
            1.0 / float(np.sum(e.weights ** 2)),
        ]
        row += [mass[i] for i in ids]
        if F is not None:
            value, _ = ens_mod.weighted_estimate(e.weights, F)
            row += list(value)
        rows.append(row)
    _write_table(header, rows, args.out)
    return EXIT_OK


def cmd_convergence(args) -> int:
    cfg = _config(args)
    ts = load_dataset(args.data)
    probes = load_points(args.probes, ts.input_dim)
    table = ens_mod.convergence_curve(ts, cfg, args.schedule, probes, threads=args.threads)
    rows = []
    for n, j, value, se in table:
        note = "single_member" if n == 1 else ""
        rows.append([n, j] + list(probes[j]) + [value, se, note])
    _write_table(["n", "probe"] + _xcols(ts.input_dim) + ["value", "std_error", "note"],
                 rows, args.out)
    return EXIT_OK


def oracle_values(cfg: RunConfig, ts, probes, cap):
    """Exact averages at ``probes`` under the config's grid measure."""
    if cfg.distribution.kind != "grid":
        raise ConfigError("the oracle needs a grid distribution")
    grid = cfg.distribution.values
    specs = [GridSpec(e.arch, grid, cap) for e in cfg.pool.entries]
    p = cfg.pool.selection_weights
    if cfg.mode == ZERO_ERROR:
        return exact_zero_error_average(specs, p, ts, probes)
    ks = cfg.pool.complexities if cfg.mode == MIXED_ARCH else np.zeros(len(specs))
    return exact_mixed_average(list(zip(specs, ks)), p, ts, cfg.beta, probes,
                               cfg.exponent_variant)


def cmd_oracle(args) -> int:
    cfg = _config(args)
    ts = load_dataset(args.data)
    probes = load_points(args.probes, ts.input_dim)
    exact = oracle_values(cfg, ts, probes, args.cap)
    ens = ens_mod.build(ts, cfg, threads=args.threads)
    value, se = ens_mod.evaluate_many(ens, probes)
    rows = []
    status_code = EXIT_OK
    for j, (x, ex, v, s) in enumerate(zip(probes, exact, value, se)):
        diff = v - ex
        if s > 0:
            z = diff / s
        else:
            z = 0.0 if abs(diff) <= 1e-12 else math.copysign(math.inf, diff)
        status = "ok"
        if abs(z) > 5:
            status = "fail"
            status_code = EXIT_ORACLE
        elif abs(z) > 3:
            status = "warn"
            print(f"warning: probe {j} z-score {z:.2f}", file=sys.stderr)
        rows.append([j] + list(x) + [ex, v, s, z, status])
    grid_sizes = "+".join(str(len(cfg.distribution.values) ** e.arch.param_count)
                          for e in cfg.pool.entries)
    print(f"enumeration size {grid_sizes}, n = {len(ens)}", file=sys.stderr)
    _write_table(["probe"] + _xcols(ts.input_dim)
                 + ["exact", "mc_value", "std_error", "z", "status"], rows, args.out)
    if status_code:
        print("oracle disagreement: some |z| > 5", file=sys.stderr)
    return status_code


def cmd_split(args) -> int:
    ts = load_dataset(args.data)
    held, rest = holdout_split(ts, args.fraction, args.seed)
    os.makedirs(args.out, exist_ok=True)
    save_dataset(held, os.path.join(args.out, "holdout.csv"))
    save_dataset(rest, os.path.join(args.out, "train.csv"))
    print(json.dumps({"holdout": len(held), "train": len(rest)}))
    return EXIT_OK


def _parser():
    p = argparse.ArgumentParser(prog="gibbsnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True, data=True):
        if config:
            sp.add_argument("--config", required=True)
            sp.add_argument("--seed", type=int, help="override master_seed")
        if data:
            sp.add_argument("--data", required=True)
        sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("build", help="build and save an ensemble")
    common(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("predict", help="evaluate a saved ensemble at points")
    common(sp, config=False)
    sp.add_argument("--artifact", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("sweep-beta", help="reweight one member set at several beta")
    common(sp)
    sp.add_argument("--betas", type=_float_list, required=True, help="e.g. 0,1,10,inf")
    sp.add_argument("--holdout", help="labelled CSV for holdout accuracy")
    sp.add_argument("--probes", help="CSV of points to report values at")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep_beta)

    sp = sub.add_parser("convergence", help="estimates along a sample-size schedule")
    common(sp)
    sp.add_argument("--schedule", type=_int_list, required=True, help="e.g. 1000,4000,16000")
    sp.add_argument("--probes", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("oracle", help="compare Monte Carlo against exact enumeration")
    common(sp)
    sp.add_argument("--probes", required=True)
    sp.add_argument("--cap", type=int, default=10**7)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("split", help="deterministic holdout split of a dataset")
    common(sp, config=False)
    sp.add_argument("--fraction", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="directory for train.csv and holdout.csv")
    sp.set_defaults(func=cmd_split)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except AcceptanceTooLow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    except (GibbsNetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
