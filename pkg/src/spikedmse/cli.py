"""Command-line front end: ``spikedmse {ranks,mse,sweep,simulate,selfcheck}``.

Exit codes: 0 success, 1 selfcheck failure, 2 invalid input, 3 I/O error,
4 numerical backend failure.  Flags may also come from a TOML file given by
``--config`` (top-level keys, or a table named after the subcommand); explicit
flags win.  ``SPIKED_SEED`` supplies the default seed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import montecarlo, selfcheck, semicircle
from .errors import DomainError, EigensolverFailure, ValidationError
from .model import InferenceModel, SignalModel, rank_profile, validate
from .mse import mse
from .sweep import COLUMNS, SweepSpec, run_sweep

SCHEMA_VERSION = 1

EXIT_OK, EXIT_SELFCHECK, EXIT_VALIDATION, EXIT_IO, EXIT_NUMERICAL = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def float_list(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_IO)


def _models(args):
    signal = SignalModel(args.alpha, args.snr_true)
    inference = InferenceModel(args.beta, args.snr_inferred)
    validate(signal, inference)
    return signal, inference


def cmd_ranks(args):
    prof = rank_profile(*_models(args))
    payload = {"schema_version": SCHEMA_VERSION, "d": prof.d, "c": prof.c, "e": prof.e, "regime": prof.regime.value}
    _emit(_dump_json(payload), args.out)
    return EXIT_OK


def cmd_mse(args):
    result = mse(*_models(args), prior=args.model)
    prof = result.profile
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": args.model,
        "inference_term": _sig12(result.inference_term),
        "overfitting_term": _sig12(result.overfitting_term),
        "constant_term": _sig12(result.constant_term),
        "total": _sig12(result.total),
        "d": prof.d,
        "c": prof.c,
        "e": prof.e,
        "regime": prof.regime.value,
    }
    _emit(_dump_json(payload), args.out)
    return EXIT_OK


def cmd_sweep(args):
    spec = SweepSpec(
        start=args.start,
        stop=args.stop,
        points=args.points,
        signal=SignalModel(args.alpha, args.snr_true),
        inference=InferenceModel(args.beta, 1.0),
        scale=args.scale,
        snr_mode=args.snr_mode,
        model=args.model,
    )
    rows = run_sweep(spec)
    if args.format == "json":
        text = _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "model": spec.model.value,
                "snr_mode": spec.snr_mode.value,
                "alphas": list(spec.signal.alphas),
                "betas": list(spec.inference.betas),
                "columns": list(COLUMNS),
                "rows": rows,
            }
        )
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([repr(row[col]) for col in COLUMNS])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_simulate(args):
    if args.seed is None:
        raise CliError("simulate needs --seed (or SPIKED_SEED) for reproducibility", EXIT_VALIDATION)
    config = montecarlo.EnsembleConfig(
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        signal=SignalModel(args.alpha, args.snr_true),
        prior=args.prior,
    )
    try:
        report = montecarlo.spectral_report(config, workers=args.workers, solver=args.solver)
    except EigensolverFailure as exc:
        raise CliError(f"EigensolverFailure: {exc} (trial seed {exc.trial_seed})", EXIT_NUMERICAL)
    d = len(report.outlier_means)
    theta = config.signal.spike_strengths[:d]
    theory_loc = [float(x) for x in semicircle.outlier_location(theta)] if d else []
    theory_ovl = [float(x) for x in semicircle.outlier_overlap_sq(theta)] if d else []
    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "n": config.n,
            "trials": config.trials,
            "seed": config.seed,
            "prior": config.prior.value,
            "alphas": list(config.signal.alphas),
            "snr_true": config.signal.snr_true,
        },
        "effective_rank": d,
        "report": {
            "outlier_means": list(report.outlier_means),
            "overlap_sq_means": list(report.overlap_sq_means),
            "bulk_edge_mean": report.bulk_edge_mean,
            "esd_ks": report.esd_ks,
            "per_trial_seeds": list(report.per_trial_seeds),
        },
        "theory": {
            "outlier_location": theory_loc,
            "outlier_overlap_sq": theory_ovl,
            "bulk_edge": semicircle.EDGE,
        },
        "deviation": {
            "outlier_location": [abs(a - b) for a, b in zip(report.outlier_means, theory_loc)],
            "outlier_overlap_sq": [abs(a - b) for a, b in zip(report.overlap_sq_means, theory_ovl)],
            "bulk_edge": abs(report.bulk_edge_mean - semicircle.EDGE),
        },
    }
    _emit(_dump_json(payload), args.out)
    return EXIT_OK


def cmd_selfcheck(args):
    seed = 0 if args.seed is None else args.seed
    results = selfcheck.run_all(args.grid_size, seed)
    for res in results:
        print(res.line())
    failed = [res.name for res in results if not res.passed]
    if failed:
        print(f"selfcheck failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_SELFCHECK
    print(f"all {len(results)} suites passed")
    return EXIT_OK


def _env_seed():
    value = os.environ.get("SPIKED_SEED")
    if value is None or value == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise CliError(f"SPIKED_SEED must be an integer, got {value!r}", EXIT_VALIDATION)


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="spikedmse", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="TOML file whose keys mirror the command-line flags")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config", help=argparse.SUPPRESS, default=argparse.SUPPRESS)
        subs[name] = p
        return p

    def model_flags(p, inferred=True):
        p.add_argument("--alpha", type=float_list, default=(), help="true powers, e.g. 1,1,1")
        p.add_argument("--snr-true", type=float, default=None, dest="snr_true")
        if inferred:
            p.add_argument("--beta", type=float_list, default=(), help="inferred powers")
            p.add_argument("--snr-inferred", type=float, default=None, dest="snr_inferred")

    p = add("ranks", cmd_ranks, "effective, inference and overfitting ranks")
    model_flags(p)
    p.add_argument("--out")

    p = add("mse", cmd_mse, "limiting MSE breakdown")
    model_flags(p)
    p.add_argument("--model", choices=("sphere", "gaussian"), default="sphere")
    p.add_argument("--out")

    p = add("sweep", cmd_sweep, "MSE along an SNR grid")
    p.add_argument("--alpha", type=float_list, default=())
    p.add_argument("--beta", type=float_list, default=())
    p.add_argument("--snr-true", type=float, default=1.0, dest="snr_true", help="held fixed in fixed-true mode")
    p.add_argument("--start", type=float, default=0.1)
    p.add_argument("--stop", type=float, default=10.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--scale", choices=("linear", "log"), default="log")
    p.add_argument("--snr-mode", choices=("matched", "fixed-true"), default="matched", dest="snr_mode")
    p.add_argument("--model", choices=("sphere", "gaussian"), default="sphere")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")

    p = add("simulate", cmd_simulate, "Monte Carlo spiked-GOE spectral report")
    model_flags(p, inferred=False)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--trials", type=int, default=4)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--prior", choices=("sphere", "gaussian"), default="sphere")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--solver", choices=("auto", "dense", "lanczos"), default="auto")
    p.add_argument("--out")

    p = add("selfcheck", cmd_selfcheck, "run the numerical identity suites")
    p.add_argument("--grid-size", type=int, default=100, dest="grid_size")
    p.add_argument("--seed", type=int, default=None)
    return parser, subs


def _load_config(path, command):
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO)
    except tomllib.TOMLDecodeError as exc:
        raise CliError(f"invalid config {path}: {exc}", EXIT_VALIDATION)
    merged = {k: v for k, v in data.items() if not isinstance(v, dict)}
    merged.update(data.get(command, {}))
    defaults = {}
    for key, value in merged.items():
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        # String defaults go through each flag's ``type`` conversion.
        defaults[key.replace("-", "_")] = value if isinstance(value, str) else str(value)
    return defaults


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, subs = build_parser()
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        pre.add_argument("command", nargs="?")
        known, _ = pre.parse_known_args(argv)
        seed = _env_seed()
        for name in ("simulate", "selfcheck"):
            if seed is not None:
                subs[name].set_defaults(seed=seed)
        if known.config and known.command in subs:
            subs[known.command].set_defaults(**_load_config(known.config, known.command))
        args = parser.parse_args(argv)
        if getattr(args, "snr_true", 0.0) is None or getattr(args, "snr_inferred", 0.0) is None:
            raise CliError("--snr-true and --snr-inferred are required", EXIT_VALIDATION)
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except (ValidationError, DomainError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
