"""Command-line interface.

Subcommands:
  predict     exact Born distribution of one context for the GHZ state
  simulate    run the lookup-table model and compare against the predictions
  verify      composite self-check: exact algebra, supports, assignment
              search and a short simulation
  sheet       sample and display one sheet of pre-assigned outcomes
  lhv-search  exhaustive search over the 64 per-photon assignments
  mermin      exact Mermin combination, optionally with a simulated estimate

Exit codes: 0 on success/pass, 1 when a model check fails, 2 on usage errors.
Results go to stdout, diagnostics to stderr. Output is deterministic for
fixed flags; ``--format json-like`` and ``--format csv`` are byte-stable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import __version__
from .core import (
    ALL_CONTEXTS,
    CONTEXT_TOKENS,
    Context,
    MERMIN_CONTEXTS,
    NORM_ATOL,
    Setting,
    born_distribution,
    born_support,
    context_expectation,
    expand,
    ghz_state,
    mermin_value,
    outcome_parity_product,
    single_photon_amplitude,
    OUTCOMES_FOR_SETTING,
)
from .lhv import summarize_search
from .rng import RandomStream
from .sheets import sample_sheet, validate_sheet
from .simulate import (
    RoundRobin,
    RunConfig,
    compare,
    estimate_mermin,
    policy_from_token,
    policy_token,
    run_contextual,
    simulation_csv_rows,
    simulation_document,
)

FORMATS = ("table", "json-like", "csv")


def _context_token(token: str) -> Context:
    try:
        context = Context.from_token(token)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid context {token!r}; valid tokens: {' '.join(CONTEXT_TOKENS)}"
        ) from None
    return context


def _positive_int(text: str):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return value


def _tolerance(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1), got {value}")
    return value


def _policy(text: str):
    try:
        return policy_from_token(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit_json(document: dict) -> None:
    print(json.dumps(document, indent=2))


def _emit_csv(rows: list[list[str]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    print(buffer.getvalue(), end="")


def _amplitude_text(value: complex) -> str:
    return f"{value.real:+.6f}{value.imag:+.6f}i"


def _cmd_predict(args: argparse.Namespace) -> int:
    context = args.context
    table = expand(ghz_state(), context)
    dist = born_distribution(table)
    if args.format == "json-like":
        _emit_json(
            {
                "context": context.token,
                "outcomes": [
                    {
                        "outcome": so.token,
                        "amplitude": {"re": table.amplitudes[so].real,
                                      "im": table.amplitudes[so].imag},
                        "probability": dist[so],
                    }
                    for so in context.outcomes()
                ],
            }
        )
    elif args.format == "csv":
        rows = [["context", "outcome", "re", "im", "probability"]]
        for so in context.outcomes():
            a = table.amplitudes[so]
            rows.append([context.token, so.token, repr(a.real), repr(a.imag), repr(dist[so])])
        _emit_csv(rows)
    else:
        print(f"Born distribution of the GHZ state for context {context.token}")
        print()
        print(f"{'outcome':<10} {'amplitude':<21} probability")
        for so in context.outcomes():
            print(f"{so.token:<10} {_amplitude_text(table.amplitudes[so]):<21} "
                  f"{dist[so]:.6f}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = RunConfig(runs=args.runs, seed=args.seed, policy=args.policy,
                       tolerance=args.tolerance)
    state = ghz_state()
    tally = run_contextual(config, state)
    report = compare(tally, state, config)
    if args.format == "json-like":
        _emit_json(simulation_document(config, state, tally, report))
    elif args.format == "csv":
        _emit_csv(simulation_csv_rows(config, state, tally, report))
    else:
        _print_simulation_table(config, tally, report)
    return 0 if report.overall_pass else 1


def _print_simulation_table(config, tally, report) -> None:
    print(f"Simulation: {config.runs} runs, seed {config.seed}, "
          f"policy {policy_token(config.policy)}, tolerance {config.tolerance:g}")
    print()
    print(f"{'context':<9} {'runs':>8} {'tv':>10} {'chisq':>10} {'df':>3} "
          f"{'outside':>8} result")
    for record in report.contexts:
        if record.passed is None:
            print(f"{record.context.token:<9} {record.runs:>8} {'-':>10} {'-':>10} "
                  f"{record.df:>3} {'-':>8} not evaluated")
        else:
            verdict = "pass" if record.passed else "FAIL"
            print(f"{record.context.token:<9} {record.runs:>8} {record.tv:>10.6f} "
                  f"{record.chisq:>10.4f} {record.df:>3} {record.out_of_support:>8} "
                  f"{verdict}")
    print()
    if report.mermin_estimate is not None:
        print(f"Mermin estimate: {report.mermin_estimate:g} "
              f"+/- {report.mermin_stderr:g}")
    print(f"overall: {'pass' if report.overall_pass else 'FAIL'}")


def _cmd_sheet(args: argparse.Namespace) -> int:
    state = ghz_state()
    sheet = sample_sheet(state, RandomStream(args.seed))
    validation = validate_sheet(sheet, state)
    valid_by_context = {check.context: check.passed for check in validation.checks}
    if args.format == "json-like":
        _emit_json(
            {
                "seed": args.seed,
                "entries": [
                    {
                        "context": c.token,
                        "outcome": sheet.entries[c].token,
                        "valid": valid_by_context[c],
                    }
                    for c in ALL_CONTEXTS
                ],
                "overall_valid": validation.passed,
            }
        )
    elif args.format == "csv":
        rows = [["context", "outcome", "valid"]]
        for c in ALL_CONTEXTS:
            rows.append([c.token, sheet.entries[c].token,
                         "true" if valid_by_context[c] else "false"])
        _emit_csv(rows)
    else:
        print(f"Pre-assigned outcomes for one run (seed {args.seed})")
        print()
        print(f"{'context':<9} {'entry':<10} status")
        for c in ALL_CONTEXTS:
            status = "valid" if valid_by_context[c] else "INVALID"
            print(f"{c.token:<9} {sheet.entries[c].token:<10} {status}")
        print()
        print(f"overall: {'valid' if validation.passed else 'INVALID'}")
    return 0


def _cmd_lhv_search(args: argparse.Namespace) -> int:
    summary = summarize_search()
    quantum = mermin_value(ghz_state())
    if args.format == "json-like":
        _emit_json(
            {
                "assignments": summary.num_assignments,
                "satisfying": summary.num_satisfying,
                "best_constraints_satisfied": summary.best_constraints_satisfied,
                "classical_mermin_max": summary.classical_mermin_max,
                "classical_mermin_min": summary.classical_mermin_min,
                "quantum_mermin": quantum,
            }
        )
    elif args.format == "csv":
        _emit_csv(
            [
                ["quantity", "value"],
                ["assignments", str(summary.num_assignments)],
                ["satisfying", str(summary.num_satisfying)],
                ["best_constraints_satisfied", str(summary.best_constraints_satisfied)],
                ["classical_mermin_max", str(summary.classical_mermin_max)],
                ["classical_mermin_min", str(summary.classical_mermin_min)],
                ["quantum_mermin", repr(quantum)],
            ]
        )
    else:
        print("Exhaustive search over per-photon assignments "
              f"({summary.num_assignments} total)")
        print()
        print("Parity constraints: xxx -> +1, xyy -> -1, yxy -> -1, yyx -> -1")
        print(f"satisfying: {summary.num_satisfying}/{summary.num_assignments}")
        print(f"best: {summary.best_constraints_satisfied} of 4 constraints")
        print(f"classical max: {summary.classical_mermin_max}, quantum: {quantum:.6g}")
    return 0


def _cmd_mermin(args: argparse.Namespace) -> int:
    state = ghz_state()
    expectations = {c.token: context_expectation(state, c) for c in MERMIN_CONTEXTS}
    quantum = mermin_value(state)
    estimate = None
    if args.runs is not None:
        config = RunConfig(runs=args.runs, seed=args.seed, policy=RoundRobin())
        value, stderr = estimate_mermin(run_contextual(config, state))
        estimate = {"runs": args.runs, "seed": args.seed, "value": value,
                    "stderr": stderr}
    if args.format == "json-like":
        _emit_json(
            {
                "expectations": expectations,
                "quantum_mermin": quantum,
                "classical_mermin_max": 2,
                "estimate": estimate,
            }
        )
    elif args.format == "csv":
        rows = [["quantity", "value"]]
        for token, value in expectations.items():
            rows.append([f"expectation_{token}", repr(value)])
        rows.append(["quantum_mermin", repr(quantum)])
        rows.append(["classical_mermin_max", "2"])
        if estimate is not None:
            rows.append(["estimate_value", repr(estimate["value"])])
            rows.append(["estimate_stderr", repr(estimate["stderr"])])
        _emit_csv(rows)
    else:
        print("Mermin combination E(xxx) - E(xyy) - E(yxy) - E(yyx)")
        print()
        print(f"{'context':<9} expectation")
        for token, value in expectations.items():
            print(f"{token:<9} {value:+.6f}")
        print()
        print(f"quantum value: {quantum:.6g}")
        print("classical bound: 2")
        if estimate is not None:
            print(f"simulated estimate: {estimate['value']:g} +/- "
                  f"{estimate['stderr']:g} (runs={estimate['runs']}, "
                  f"seed={estimate['seed']})")
    return 0


def _check_expansion() -> tuple[bool, str]:
    table = expand(ghz_state(), Context.from_token("yyx"))
    expected = {"R L H'", "L R H'", "R R V'", "L L V'"}
    worst = 0.0
    for so, amplitude in table.amplitudes.items():
        target = 0.5 if so.token in expected else 0.0
        worst = max(worst, abs(amplitude - target))
    return worst <= NORM_ATOL, f"max amplitude deviation {worst:.3e}"


def _check_supports() -> tuple[bool, str]:
    # Unitarity of the two 2x2 basis-change blocks.
    for setting in Setting:
        outcomes = OUTCOMES_FOR_SETTING[setting]
        gram_off = sum(
            single_photon_amplitude(setting, outcomes[0], hv).conjugate()
            * single_photon_amplitude(setting, outcomes[1], hv)
            for hv in ("H", "V")
        )
        norms = [
            sum(abs(single_photon_amplitude(setting, o, hv)) ** 2 for hv in ("H", "V"))
            for o in outcomes
        ]
        if abs(gram_off) > NORM_ATOL or any(abs(n - 1) > NORM_ATOL for n in norms):
            return False, f"basis for setting {setting.token} is not unitary"

    state = ghz_state()
    for context in ALL_CONTEXTS:
        dist = born_distribution(expand(state, context))
        support = born_support(dist)
        even_circular = sum(s is Setting.Y for s in context.settings) % 2 == 0
        expected_size, expected_p = (4, 0.25) if even_circular else (8, 0.125)
        if len(support) != expected_size:
            return False, f"context {context.token}: support size {len(support)}"
        if any(abs(dist[so] - expected_p) > NORM_ATOL for so in support):
            return False, f"context {context.token}: probabilities off"
        if even_circular:
            target = 1 if context.token == "xxx" else -1
            if any(outcome_parity_product(so) != target for so in support):
                return False, f"context {context.token}: parity products off"
    return True, "all 8 contexts match the exact support structure"


def _check_assignments() -> tuple[bool, str]:
    summary = summarize_search()
    quantum = mermin_value(ghz_state())
    ok = (
        summary.num_assignments == 64
        and summary.num_satisfying == 0
        and summary.best_constraints_satisfied == 3
        and summary.classical_mermin_max == 2
        and abs(quantum - 4.0) <= NORM_ATOL
    )
    return ok, (
        f"satisfying {summary.num_satisfying}/64, best "
        f"{summary.best_constraints_satisfied}/4, classical max "
        f"{summary.classical_mermin_max}, quantum {quantum:.6g}"
    )


def _check_simulation(runs: int, seed: int, tolerance: float) -> tuple[bool, str]:
    config = RunConfig(runs=runs, seed=seed, policy=RoundRobin(), tolerance=tolerance)
    state = ghz_state()
    tally = run_contextual(config, state)
    report = compare(tally, state, config)
    exact_extremal = report.mermin_estimate == 4.0 and report.mermin_stderr == 0.0
    worst_tv = max(r.tv for r in report.contexts if r.tv is not None)
    ok = report.overall_pass and exact_extremal
    return ok, (
        f"{runs} runs, worst TV {worst_tv:.4f}, Mermin estimate "
        f"{report.mermin_estimate:g} +/- {report.mermin_stderr:g}"
    )


def _cmd_verify(args: argparse.Namespace) -> int:
    checks = [
        ("expansion-yyx", *_check_expansion()),
        ("support-structure", *_check_supports()),
        ("assignment-search", *_check_assignments()),
        ("simulation", *_check_simulation(args.runs, args.seed, args.tolerance)),
    ]
    overall = all(ok for _, ok, _ in checks)
    if args.format == "json-like":
        _emit_json(
            {
                "checks": [
                    {"name": name, "pass": ok, "detail": detail}
                    for name, ok, detail in checks
                ],
                "overall_pass": overall,
            }
        )
    elif args.format == "csv":
        rows = [["check", "pass", "detail"]]
        for name, ok, detail in checks:
            rows.append([name, "true" if ok else "false", detail])
        _emit_csv(rows)
    else:
        for name, ok, detail in checks:
            print(f"{'PASS' if ok else 'FAIL'}  {name:<18} {detail}")
        print(f"overall: {'pass' if overall else 'FAIL'}")
    return 0 if overall else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzsim",
        description="Three-photon GHZ experiment: exact predictions, a "
                    "context-indexed lookup model that reproduces them, and "
                    "the per-photon assignments that cannot.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=FORMATS, default="table",
                       help="output format (default: table)")

    p = sub.add_parser("predict", help="exact Born distribution of one context")
    p.add_argument("--context", type=_context_token, required=True,
                   help=f"context token, one of: {' '.join(CONTEXT_TOKENS)}")
    add_format(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("simulate", help="run the lookup-table model and compare")
    p.add_argument("--runs", type=_positive_int, default=800000,
                   help="number of runs (default: 800000)")
    p.add_argument("--seed", type=_seed, default=0, help="stream seed (default: 0)")
    p.add_argument("--policy", type=_policy, default=RoundRobin(),
                   help="fixed:<context>, uniform or round-robin (default: round-robin)")
    p.add_argument("--tolerance", type=_tolerance, default=0.01,
                   help="per-context total-variation threshold (default: 0.01)")
    add_format(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="composite self-check (exit 1 on any failure)")
    p.add_argument("--runs", type=_positive_int, default=800000,
                   help="runs for the simulation check (default: 800000)")
    p.add_argument("--seed", type=_seed, default=0, help="stream seed (default: 0)")
    p.add_argument("--tolerance", type=_tolerance, default=0.01,
                   help="TV threshold for the simulation check (default: 0.01)")
    add_format(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sheet", help="sample one sheet of pre-assigned outcomes")
    p.add_argument("--seed", type=_seed, default=0, help="stream seed (default: 0)")
    add_format(p)
    p.set_defaults(func=_cmd_sheet)

    p = sub.add_parser("lhv-search", help="search all 64 per-photon assignments")
    add_format(p)
    p.set_defaults(func=_cmd_lhv_search)

    p = sub.add_parser("mermin", help="exact Mermin combination (and optional estimate)")
    p.add_argument("--runs", type=_positive_int, default=None,
                   help="if given, also estimate from a round-robin simulation "
                        "(needs at least 8 runs)")
    p.add_argument("--seed", type=_seed, default=0, help="stream seed (default: 0)")
    add_format(p)
    p.set_defaults(func=_cmd_mermin)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "mermin" and args.runs is not None and args.runs < 8:
        parser.error("mermin --runs must be at least 8 so every Mermin context is visited")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
