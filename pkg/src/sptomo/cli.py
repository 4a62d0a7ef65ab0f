"""Command-line experiment harness.

Subcommands::

    sptomo run --state SPEC --eps E --tau T [--p P] [--delta D]
               [--override k=3,m_clique=20] [--trials N] [--seed S] [--out FILE]
    sptomo distributions --state SPEC [--out FILE]
    sptomo oracle --state SPEC [--out FILE]

Exit codes: 0 success, 1 the learner missed its guarantee more often than
``delta`` allows, 2 usage error. Relative ``--out`` paths are resolved under
``$SPTOMO_OUTPUT_DIR`` when that variable is set.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .learner import BasisMeasurer, derive_params, run
from .oracle import FSP_QUBIT_LIMIT, brute_force_fsp, certify_run
from .pauli import PauliOp, format_pauli
from .sampler import build_sampler
from .states import TableCapExceeded, bell_diff_distribution, char_distribution, fidelity
from .statespec import StateSpecError, parse_state_spec

OUTPUT_DIR_ENV = "SPTOMO_OUTPUT_DIR"

EXIT_OK, EXIT_MISS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_overrides(text: str | None) -> dict[str, float]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad override {item!r}; expected key=value")
        try:
            out[key.strip()] = float(value) if key.strip() == "t" else int(value)
        except ValueError:
            raise UsageError(f"bad override value {item!r}") from None
    return out


def _resolve_out(path: str | None) -> Path | None:
    if path is None:
        return None
    out = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not out.is_absolute():
        out = Path(base) / out
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def _emit(text: str, path: str | None) -> None:
    out = _resolve_out(path)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _state(spec: str):
    try:
        return parse_state_spec(spec)
    except StateSpecError as exc:
        raise UsageError(str(exc)) from None


def cmd_run(args) -> int:
    rho = _state(args.state)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    try:
        params = derive_params(
            rho.n, args.eps, args.tau, args.p, args.delta, parse_overrides(args.override)
        )
        sampler = build_sampler(rho)
    except (ValueError, TableCapExceeded) as exc:
        raise UsageError(str(exc)) from None
    measurer = BasisMeasurer(rho)
    can_certify = rho.n <= FSP_QUBIT_LIMIT
    optimum = brute_force_fsp(rho) if can_certify else None

    start = time.perf_counter()
    trials = []
    successes = 0
    for i in range(args.trials):
        report = run(sampler, measurer, params, seed=args.seed + i)
        entry = report.to_dict()
        entry["trial"] = i
        entry["true_fidelity"] = fidelity(rho, report.output_state)
        if can_certify:
            cert = certify_run(rho, report.output_state, args.eps)
            entry["certification"] = {"passed": cert.passed, "margin": cert.margin}
            successes += cert.passed
        trials.append(entry)

    result = {
        "state": args.state,
        "n": rho.n,
        "params": params.to_dict(),
        "seed": args.seed,
        "trials": trials,
        "aggregate": {
            "trials": args.trials,
            "copies_consumed": sum(t["counters"]["copies_consumed"] for t in trials),
        },
        "meta": {"wall_time": time.perf_counter() - start, "version": __version__},
    }
    if optimum is not None:
        rate = successes / args.trials
        result["oracle"] = optimum.to_dict()
        result["aggregate"].update(successes=successes, success_rate=rate)
        code = EXIT_OK if rate >= 1 - args.delta else EXIT_MISS
    else:
        code = EXIT_OK
    _emit(json.dumps(result, indent=2, sort_keys=True) + "\n", args.out)
    return code


def cmd_distributions(args) -> int:
    rho = _state(args.state)
    try:
        p = char_distribution(rho).table
        q = bell_diff_distribution(rho).table
    except TableCapExceeded as exc:
        raise UsageError(str(exc)) from None
    order = sorted(range(q.shape[0]), key=lambda i: (-q[i], i))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pauli_string", "p_value", "q_value"])
    for i in order:
        writer.writerow([format_pauli(PauliOp.from_index(rho.n, i)), repr(float(p[i])), repr(float(q[i]))])
    writer.writerow(["sum_p", repr(float(p.sum())), ""])
    writer.writerow(["sum_q", "", repr(float(q.sum()))])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    rho = _state(args.state)
    try:
        result = brute_force_fsp(rho)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = result.to_dict()
    out["witness"] = str(result.best_state)
    out["state"] = args.state
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sptomo", description="Agnostic tomography of stabilizer product states."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the learner and certify against the oracle")
    p_run.add_argument("--state", required=True)
    p_run.add_argument("--eps", type=float, required=True)
    p_run.add_argument("--tau", type=float, required=True)
    p_run.add_argument("--p", type=float, default=2 / 3)
    p_run.add_argument("--delta", type=float, default=0.1)
    p_run.add_argument("--override", default=None, help="e.g. k=3,m_clique=20")
    p_run.add_argument("--trials", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(func=cmd_run)

    p_dist = sub.add_parser("distributions", help="write the p and q tables as CSV")
    p_dist.add_argument("--state", required=True)
    p_dist.add_argument("--out", default=None)
    p_dist.set_defaults(func=cmd_distributions)

    p_orc = sub.add_parser("oracle", help="exhaustive stabilizer product fidelity")
    p_orc.add_argument("--state", required=True)
    p_orc.add_argument("--out", default=None)
    p_orc.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sptomo {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
