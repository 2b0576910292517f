"""Command-line front-end: generate histories, score and fit them, run studies.

Subcommands:
  generate  write a simulated event-history CSV
  loglik    log-likelihood of a CSV at fixed parameters
  fit       maximum-likelihood fit of a CSV
  study     repeated generate-and-fit replications with a summary table
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .ce import CeConfig
from .estimator import EXTREME_THRESHOLD, FitResult, FitSpace, evaluate, fit_mle
from .io import read_history, write_history
from .model import (
    Event,
    EventHistory,
    EventKind,
    RestorationFactors,
    WeibullParams,
)
from .sampler import GenerationConfig, generate


def _add_weibull_flags(parser: argparse.ArgumentParser) -> None:
    scale = parser.add_mutually_exclusive_group(required=True)
    scale.add_argument("--theta", type=float, help="Weibull scale in time units")
    scale.add_argument("--a", type=float, help="Weibull scale parameter a (alternative to --theta)")
    parser.add_argument("--b", type=float, required=True, help="Weibull shape parameter")


def _add_factor_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--qpm", type=float, required=True, help="restoration factor after PM")
    parser.add_argument("--qcm", type=float, required=True, help="restoration factor after CM")


def _add_fit_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--starts", type=int, default=5, help="independent optimizer restarts")
    parser.add_argument("--population", type=int, default=1000, help="samples per optimizer iteration")
    parser.add_argument("--iterations", type=int, default=200, help="maximum optimizer iterations")
    parser.add_argument("--tol", type=float, default=1e-6, help="elite-spread convergence tolerance")
    parser.add_argument("--fit-seed", type=int, default=0, help="optimizer seed")


def _params_from_args(args: argparse.Namespace) -> WeibullParams:
    if args.a is not None:
        return WeibullParams(a=args.a, b=args.b)
    return WeibullParams.from_theta(args.theta, args.b)


def _flags(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _space_ce(args: argparse.Namespace) -> tuple[FitSpace, CeConfig]:
    space = FitSpace(starts=args.starts)
    ce = CeConfig(
        population=args.population,
        max_iterations=args.iterations,
        convergence_epsilon=args.tol,
        seed=args.fit_seed,
    )
    return space, ce


def _fit_payload(fit: FitResult) -> dict:
    return {
        "a": fit.params.a,
        "theta": fit.params.theta,
        "b": fit.params.b,
        "q_pm": fit.factors.q_pm,
        "q_cm": fit.factors.q_cm,
        "log_likelihood": fit.log_likelihood,
        "q_pm_extreme": fit.q_pm_extreme,
        "q_cm_extreme": fit.q_cm_extreme,
        "per_start": [{"point": list(point), "value": value} for point, value in fit.per_start],
    }


def cmd_generate(args: argparse.Namespace) -> int:
    config = GenerationConfig(
        params=_params_from_args(args),
        factors=RestorationFactors(q_pm=args.qpm, q_cm=args.qcm),
        k_cm=args.kcm,
        events_per_item=args.events,
        n_items=args.items,
        seed=args.seed,
    )
    history = generate(config)
    write_history(args.out, history)
    n_pm = sum(1 for item in history.items for e in item if e.kind is EventKind.PM)
    n_cm = history.n_events - n_pm
    print(f"wrote {history.n_events} events ({n_pm} PM, {n_cm} CM) to {args.out}")
    return 0


def cmd_loglik(args: argparse.Namespace) -> int:
    history = read_history(args.data)
    params = _params_from_args(args)
    factors = RestorationFactors(q_pm=args.qpm, q_cm=args.qcm)
    value = evaluate(history, params, factors)
    print(f"{value:.4f}")
    _emit_json({"log_likelihood": value, "flags": _flags(args)}, args.out)
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    history = read_history(args.data)
    if args.override_last_time is not None:
        if len(history.items) != 1:
            raise SystemExit("--override-last-time requires single-item data")
        events = list(history.items[0])
        events[-1] = Event(events[-1].kind, args.override_last_time)
        history = EventHistory.from_lists([events])
    space, ce = _space_ce(args)
    fit = fit_mle(history, space, ce)
    payload = _fit_payload(fit)
    payload["flags"] = _flags(args)
    _emit_json(payload, args.out)
    return 0


def cmd_study(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    factors = RestorationFactors(q_pm=args.qpm, q_cm=args.qcm)
    space, ce = _space_ce(args)

    rows = []
    failures = []
    for r in range(1, args.replications + 1):
        seed = args.seed + r
        config = GenerationConfig(
            params=params,
            factors=factors,
            k_cm=args.kcm,
            events_per_item=args.events,
            n_items=args.items,
            seed=seed,
        )
        try:
            fit = fit_mle(generate(config), space, replace(ce, seed=seed))
        except Exception as exc:  # record and continue with remaining seeds
            failures.append({"replication": r, "seed": seed, "error": str(exc)})
            continue
        rows.append(
            {
                "replication": r,
                "seed": seed,
                "b": fit.params.b,
                "theta": fit.params.theta,
                "q_pm": fit.factors.q_pm,
                "q_cm": fit.factors.q_cm,
                "log_likelihood": fit.log_likelihood,
                "q_pm_extreme": fit.q_pm_extreme,
                "q_cm_extreme": fit.q_cm_extreme,
            }
        )

    print("sample\tb\ttheta\tq_pm\tq_cm")
    for row in rows:
        print(
            f"{row['replication']}\t{row['b']:.1f}\t{row['theta']:.1f}"
            f"\t{row['q_pm']:.1f}\t{row['q_cm']:.1f}"
        )
    n = len(rows)
    summary = {
        "replications": n,
        "any_extreme_fraction": sum(r["q_pm_extreme"] or r["q_cm_extreme"] for r in rows) / n if n else 0.0,
        "q_pm_extreme_fraction": sum(r["q_pm_extreme"] for r in rows) / n if n else 0.0,
        "q_cm_extreme_fraction": sum(r["q_cm_extreme"] for r in rows) / n if n else 0.0,
        "extreme_threshold": EXTREME_THRESHOLD,
    }
    print(f"extreme (q_pm or q_cm): {summary['any_extreme_fraction']:.2f} of {n}")
    _emit_json({"rows": rows, "failures": failures, "summary": summary, "flags": _flags(args)}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grptools", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="simulate an event-history CSV")
    _add_weibull_flags(p)
    _add_factor_flags(p)
    p.add_argument("--kcm", type=float, default=1.0, help="CM frequency multiplier")
    p.add_argument("--events", type=int, required=True, help="events per item")
    p.add_argument("--items", type=int, default=1, help="number of independent items")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("loglik", help="log-likelihood of a CSV at fixed parameters")
    p.add_argument("data", help="event-history CSV")
    _add_weibull_flags(p)
    _add_factor_flags(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_loglik)

    p = sub.add_parser("fit", help="maximum-likelihood fit of a CSV")
    p.add_argument("data", help="event-history CSV")
    _add_fit_flags(p)
    p.add_argument(
        "--override-last-time",
        type=float,
        help="replace the final inter-arrival time before fitting (single-item data only)",
    )
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("study", help="replicated generate-and-fit study")
    _add_weibull_flags(p)
    _add_factor_flags(p)
    p.add_argument("--kcm", type=float, default=1.0)
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--items", type=int, default=1)
    p.add_argument("--replications", type=int, default=20)
    p.add_argument("--seed", type=int, default=0, help="base seed; replication r uses seed + r")
    _add_fit_flags(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_study)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
