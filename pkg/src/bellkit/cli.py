"""Command-line entry point.

Subcommands: thresholds, chsh, rotational, commrun, septest, tensor-export.
Exit codes: 0 success, 2 usage or input error, 3 numerical non-convergence.
Randomized subcommands default to seed 42 and record the seed in their
output, so identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import bellcheck, commcomplex, corrtensor, qstate, septest

DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit_json(doc, out_path) -> None:
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", out_path)


def cmd_thresholds(args) -> int:
    rows = bellcheck.threshold_rows(args.n_min, args.n_max)
    buf = io.StringIO()
    bellcheck.write_threshold_csv(rows, buf)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_chsh(args) -> int:
    rho, a_dirs, b_dirs = bellcheck.chsh_optimal_configuration()
    if args.state is not None:
        loaded = qstate.load_state(args.state)
        rho = loaded.projector() if isinstance(loaded, qstate.StateVector) else loaded
    if args.angles is not None:
        a1, a2, b1, b2 = args.angles
        a_dirs = np.array([bellcheck.inplane_direction(a1), bellcheck.inplane_direction(a2)])
        b_dirs = np.array([bellcheck.inplane_direction(b1), bellcheck.inplane_direction(b2)])
    report = bellcheck.chsh_probability_value(rho, a_dirs, b_dirs)
    _emit_json(
        {
            "b_value": report.b_value,
            "bound": report.bound,
            "violated": report.violated,
            "equality_probabilities": [
                [float(p) for p in row] for row in report.equality_probabilities
            ],
        },
        args.out,
    )
    return EXIT_OK


def cmd_rotational(args) -> int:
    if not 0.0 <= args.v <= 1.0:
        raise ValueError(f"visibility must be in [0, 1], got {args.v}")
    tensor = corrtensor.compute_tensor(qstate.make_noisy_ghz(args.n, args.v))
    frame = corrtensor.xy_frame(args.n)
    report = bellcheck.rotational_test(tensor, frame, seed=args.seed)
    _emit_json(
        {
            "n": args.n,
            "v": args.v,
            "seed": args.seed,
            "s_value": report.s_value,
            "e_max": report.e_max,
            "bound": report.bound,
            "violated": report.violated,
            "converged": report.converged,
        },
        args.out,
    )
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def _make_task(name: str, n: int) -> commcomplex.TaskSpec:
    if name == "mod4":
        return commcomplex.make_mod4_task(n)
    if name == "chsh-game":
        if n != 2:
            raise ValueError("the chsh-game task is defined for exactly 2 parties")
        return commcomplex.make_chsh_game()
    raise ValueError(f"unknown task {name!r}")


def cmd_commrun(args) -> int:
    if args.trials < 1:
        raise ValueError(f"trials must be >= 1, got {args.trials}")
    task = _make_task(args.task, args.n)
    bound = commcomplex.classical_optimum(task).f_star
    records = []
    for protocol in args.protocol:
        if protocol == "classical":
            result = commcomplex.ProtocolResult(
                fidelity=bound, success_prob=(1 + bound) / 2, trials=0, stderr=0.0
            )
        elif protocol == "ghz":
            settings = (
                commcomplex.mod4_settings(args.n)
                if args.task == "mod4"
                else commcomplex.chsh_game_settings()
            )
            result = commcomplex.run_entangled_protocol(
                task, qstate.make_ghz(args.n), settings, args.trials, args.seed
            )
        elif protocol == "sequential":
            result = commcomplex.run_sequential_protocol(task, args.trials, args.seed)
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown protocol {protocol!r}")
        records.append(
            {
                "task": args.task,
                "n": args.n,
                "protocol": protocol,
                "fidelity": result.fidelity,
                "success_prob": result.success_prob,
                "stderr": result.stderr,
                "trials": result.trials,
                "classical_bound": bound,
                "seed": args.seed,
            }
        )
    _emit_json(records[0] if len(records) == 1 else records, args.out)
    return EXIT_OK


def cmd_septest(args) -> int:
    state = qstate.load_state(args.state)
    rho = state.projector() if isinstance(state, qstate.StateVector) else state
    if args.metric is None:
        report = septest.separability_check(rho, seed=args.seed)
        doc = {
            "norm_sq": report.norm_sq,
            "t_max": report.t_max,
            "detected": report.entangled_detected,
            "margin": report.margin,
            "converged": report.converged,
            "seed": args.seed,
        }
        converged = report.converged
    else:
        metric = septest.load_metric(args.metric, rho.n_qubits)
        report = septest.identifier_check(rho, metric, seed=args.seed)
        doc = {
            "norm_sq": report.rhs,
            "t_max": report.lhs_max,
            "detected": report.detected,
            "margin": report.rhs - report.lhs_max,
            "converged": report.converged,
            "seed": args.seed,
        }
        converged = report.converged
    _emit_json(doc, args.out)
    return EXIT_OK if converged else EXIT_NO_CONVERGENCE


def cmd_tensor_export(args) -> int:
    state = qstate.load_state(args.state)
    rho = state.projector() if isinstance(state, qstate.StateVector) else state
    tensor = corrtensor.compute_tensor(rho)
    buf = io.StringIO()
    corrtensor.tensor_to_csv(tensor, buf)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellkit",
        description=(
            "Correlation-tensor Bell tests, communication-complexity games, "
            "and entanglement detection for small qubit systems."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", help="noise-threshold table for GHZ states")
    p.add_argument("--n-min", type=int, default=2, help="smallest party count")
    p.add_argument("--n-max", type=int, default=10, help="largest party count")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("chsh", help="probability-form two-party Bell value")
    p.add_argument("--state", default=None, help="state JSON file (default preset)")
    p.add_argument(
        "--angles",
        type=float,
        nargs=4,
        metavar=("A1", "A2", "B1", "B2"),
        default=None,
        help="in-plane setting angles in radians (default preset)",
    )
    p.add_argument("--out", default=None, help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("rotational", help="in-plane tensor bound on a noisy GHZ state")
    p.add_argument("--n", type=int, required=True, help="party count")
    p.add_argument("--v", type=float, required=True, help="visibility in [0, 1]")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None, help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_rotational)

    p = sub.add_parser("commrun", help="communication-complexity protocols")
    p.add_argument("--task", choices=["mod4", "chsh-game"], default="mod4")
    p.add_argument("--n", type=int, required=True, help="party count")
    p.add_argument(
        "--protocol",
        choices=["classical", "ghz", "sequential"],
        nargs="+",
        required=True,
        help="one or more protocols to run",
    )
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None, help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_commrun)

    p = sub.add_parser("septest", help="entanglement detection on a state file")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--metric", default=None, help="metric JSON file (optional)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None, help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_septest)

    p = sub.add_parser("tensor-export", help="correlation tensor as CSV")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_tensor_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except qstate.NumericalIntegrityError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    raise SystemExit(main())
