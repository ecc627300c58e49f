"""Command-line surface for bounds, thresholds, protocol runs, and sweeps.

Option layering, in decreasing precedence: explicit flag, key in the JSON
config file, environment override (output directory and worker count only),
built-in default.  Exit codes: 0 success, 2 domain or configuration error,
3 a statistical self-check failed.  All CSV/JSONL outputs are byte-stable
under a fixed (config, seed); wall-clock provenance is confined to the
summary files.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .adversary import AnalyticAttack, BasisPolicy, InterceptResend, NoAttack
from .errors import ConfigError, DomainError, ProtocolError, StatisticalCheckError
from .info_theory import eta_star, eve_noise_from_disturbance, info_curve
from .learn_harness import (
    LearnerConfig,
    TaskLabeler,
    default_sample_budget,
    estimate_learning_probability,
    generate_task,
    log_hypothesis_count,
    random_search_learner,
    run_trials,
)
from .pac_bounds import (
    delta_floor,
    gamma,
    random_search_curve,
    sample_bound_noiseless,
    sample_bound_noisy,
)
from .protocol import export_transcript, run_session
from .reports import (
    ChartSeries,
    HISTOGRAM_BIN_COUNT,
    ResultBundle,
    error_histogram,
    load_config,
    svg_chart,
)

__all__ = ["main"]

_ENV_OUTDIR = "QLABELSEC_OUTDIR"
_ENV_WORKERS = "QLABELSEC_WORKERS"

_LEG_CHOICES = {"both": (1, 2), "1": (1,), "2": (2,)}

_THRESHOLD_METHOD_TAGS = {
    "bisection": "solved",
    "closed-form": "closed-form",
    "tabulated": "constant (no curve)",
}


# ---------------------------------------------------------------------------
# option layering
# ---------------------------------------------------------------------------

def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    raise ConfigError(f"expected a JSON boolean, got {value!r}")


def _as_float_list(value) -> list[float]:
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    if not isinstance(value, list):
        raise ConfigError(f"expected a comma list or JSON array, got {value!r}")
    return [float(v) for v in value]


def _as_int_list(value) -> list[int]:
    return [int(v) for v in _as_float_list(value)]


def _resolve_options(args: argparse.Namespace, option_spec: dict) -> dict:
    """Apply flag > config > environment > default, then cast."""
    config = load_config(args.config) if args.config else {}
    unknown = set(config) - set(option_spec)
    if unknown:
        raise ConfigError(
            f"unknown config keys for {args.command}: {', '.join(sorted(unknown))}"
        )
    flags = vars(args)
    resolved = {}
    for key, (default, cast, env) in option_spec.items():
        if flags.get(key) is not None:
            value = flags[key]
        elif key in config:
            value = config[key]
        elif env is not None and os.environ.get(env, "") != "":
            value = os.environ[env]
        else:
            value = default
        if value is not None and cast is not None:
            try:
                value = cast(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}") from None
        resolved[key] = value
    return resolved


def _common_spec(out_default: str | None) -> dict:
    return {
        "seed": (0, int, None),
        "out": (out_default, str, _ENV_OUTDIR),
        "workers": (1, int, _ENV_WORKERS),
        "svg": (False, _as_bool, None),
    }


def _bundle(opts: dict, command: str) -> ResultBundle | None:
    if opts["out"] is None:
        return None
    echo = {k: v for k, v in opts.items() if k != "out"}
    return ResultBundle(
        out_dir=Path(opts["out"]), command=command, config=echo, seed=opts["seed"]
    )


def _task_spec() -> dict:
    return {
        "dimension": (8, int, None),
        "separation": (6.0, float, None),
        "task_seed": (42, int, None),
    }


def _learner_spec() -> dict:
    return {
        "model": ("linear-threshold", str, None),
        "hidden_width": (8, int, None),
        "step_size": (0.3, float, None),
        "batch_size": (5, int, None),
        "cadence": (25, int, None),
    }


def _learner_config(opts: dict) -> LearnerConfig:
    return LearnerConfig(
        model=opts["model"],
        hidden_width=opts["hidden_width"],
        step_size=opts["step_size"],
        batch_size=opts["batch_size"],
        evaluation_cadence=opts["cadence"],
    )


def _point_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence(entropy=(seed, *path)).generate_state(1)[0])


def _curve_rows(curve) -> list[tuple]:
    return [
        (p.n, p.p_hat, p.wilson_low, p.wilson_high, p.trials) for p in curve.points
    ]


_CURVE_HEADER = ("n", "p_hat", "wilson_low", "wilson_high", "trials")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_bounds(args: argparse.Namespace) -> int:
    spec = _common_spec(None) | {
        "epsilon": (None, float, None),
        "delta": (None, float, None),
        "log_h": (None, float, None),
        "eta": (0.0, float, None),
        "n": ([], _as_int_list, None),
    }
    opts = _resolve_options(args, spec)
    for key in ("epsilon", "delta", "log_h"):
        if opts[key] is None:
            raise ConfigError(f"bounds requires --{key.replace('_', '-')}")
    eps, delta, log_h, eta = opts["epsilon"], opts["delta"], opts["log_h"], opts["eta"]
    rows = [
        ("sample_bound_noiseless", sample_bound_noiseless(eps, delta, log_h)),
        ("sample_bound_noisy", sample_bound_noisy(eps, delta, log_h, eta)),
        ("gamma", gamma(eps, eta)),
    ]
    floor_rows = []
    for n in opts["n"]:
        floor = delta_floor(eps, eta, n)
        floor_rows.append((n, floor.gamma, floor.delta_star, floor.log_delta_star))
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")
    for n, _, delta_star, log_delta_star in floor_rows:
        print(f"{'delta_star[n=' + str(n) + ']':<{width}}  {delta_star}  (log {log_delta_star})")
    bundle = _bundle(opts, "bounds")
    if bundle is not None:
        bundle.add_csv("bounds.csv", ("quantity", "value"), rows)
        if floor_rows:
            bundle.add_csv(
                "bounds-delta-star.csv",
                ("n", "gamma", "delta_star", "log_delta_star"),
                floor_rows,
            )
        bundle.write_summary(
            {"bounds": {name: value for name, value in rows},
             "delta_star": [
                 {"n": n, "delta_star": ds, "log_delta_star": lds}
                 for n, _, ds, lds in floor_rows
             ]}
        )
    return 0


def _cmd_thresholds(args: argparse.Namespace) -> int:
    opts = _resolve_options(args, _common_spec(None))
    rows = []
    for kind in ("collective", "individual", "memoryless"):
        curve = info_curve(kind)
        tag = _THRESHOLD_METHOD_TAGS[curve.method]
        residual = "n/a" if curve.residual is None else f"{curve.residual:.3e}"
        rows.append((kind, f"{curve.eta_star:.6f}", tag, residual))
    print(f"{'attack':<12}{'eta_star':<12}{'method':<22}residual")
    for kind, value, tag, residual in rows:
        print(f"{kind:<12}{value:<12}{tag:<22}{residual}")
    bundle = _bundle(opts, "thresholds")
    if bundle is not None:
        bundle.add_csv("thresholds.csv", ("attack", "eta_star", "method", "residual"), rows)
        bundle.write_summary(
            {"thresholds": {kind: float(value) for kind, value, _, _ in rows}}
        )
    return 0


def _build_attack(opts: dict):
    name = opts["attack"]
    if name == "none":
        return NoAttack()
    if name == "intercept-resend":
        return InterceptResend(
            attack_probability=opts["fraction"],
            basis_policy=BasisPolicy(opts["policy"]),
            legs=_LEG_CHOICES[opts["legs"]],
        )
    return AnalyticAttack(curve_kind=name, disturbance=opts["disturbance"])


def _cmd_protocol_run(args: argparse.Namespace) -> int:
    spec = _common_spec("qlabelsec-out") | _task_spec() | {
        "target_data": (1000, int, None),
        "attack": ("none", str, None),
        "fraction": (1.0, float, None),
        "policy": ("alwaysZ", str, None),
        "legs": ("both", str, None),
        "disturbance": (0.05, float, None),
        "abort_threshold": (None, float, None),
        "strict_abort": (False, _as_bool, None),
        "no_transcript": (False, _as_bool, None),
    }
    opts = _resolve_options(args, spec)
    if opts["legs"] not in _LEG_CHOICES:
        raise ConfigError(f"legs must be one of {sorted(_LEG_CHOICES)}, got {opts['legs']!r}")
    task = generate_task(opts["dimension"], opts["separation"], opts["task_seed"])
    attack = _build_attack(opts)
    session = run_session(
        task.concept_source(),
        opts["target_data"],
        attack=attack,
        abort_threshold=opts["abort_threshold"],
        seed=opts["seed"],
        strict_abort=opts["strict_abort"],
        keep_rounds=not opts["no_transcript"],
    )
    results = {
        "eta_a_estimate": session.eta_a_estimate,
        "check_count": session.check_count,
        "check_error_count": session.check_error_count,
        "authorized_dataset_size": len(session.authorized_dataset),
        "eavesdropper_dataset_size": len(session.eavesdropper_dataset),
        "authorized_label_error_rate": session.authorized_label_error_rate,
        "eve_label_error_rate": session.eve_label_error_rate,
        "ensemble_fidelity": session.ensemble_fidelity,
        "aborted": session.aborted,
    }
    for key, value in results.items():
        print(f"{key:<28} {value}")
    bundle = _bundle(opts, "protocol-run")
    if bundle is not None:
        if not opts["no_transcript"]:
            export_transcript(session, bundle.note_file("protocol-transcript.jsonl"))
        bundle.add_csv(
            "protocol-run.csv",
            ("quantity", "value"),
            list(results.items()),
        )
        bundle.write_summary(results)
    return 0


def _default_grid(cadence: int) -> list[int]:
    return [cadence * k for k in (1, 2, 4, 8, 16)]


def _cmd_learn(args: argparse.Namespace) -> int:
    spec = _common_spec("qlabelsec-out") | _task_spec() | _learner_spec() | {
        "eta": (0.0, float, None),
        "epsilon_target": (0.03, float, None),
        "trials": (100, int, None),
        "budget": (None, int, None),
        "grid": (None, _as_int_list, None),
        "learner": ("gradient", str, None),
    }
    opts = _resolve_options(args, spec)
    task = generate_task(
        opts["dimension"], opts["separation"], opts["task_seed"],
        epsilon_target=opts["epsilon_target"],
    )
    config = _learner_config(opts)
    grid = opts["grid"] or _default_grid(config.evaluation_cadence)
    budget = opts["budget"]
    if budget is None:
        budget = default_sample_budget(
            opts["epsilon_target"], opts["eta"],
            log_hypothesis_count(config, opts["dimension"]),
        )
        budget = min(budget, 4 * grid[-1])
    trials = run_trials(
        task,
        opts["eta"],
        opts["epsilon_target"],
        config,
        budget,
        opts["trials"],
        base_seed=opts["seed"],
        workers=opts["workers"],
        learner=opts["learner"],
    )
    curve = estimate_learning_probability(
        trials, grid, eta=opts["eta"],
        epsilon_target=opts["epsilon_target"], learner=opts["learner"],
    )
    print(f"{'n':>8}  {'p_hat':>8}  {'wilson_low':>10}  {'wilson_high':>11}")
    for point in curve.points:
        print(
            f"{point.n:>8}  {point.p_hat:>8.4f}  "
            f"{point.wilson_low:>10.4f}  {point.wilson_high:>11.4f}"
        )
    bundle = _bundle(opts, "learn")
    if bundle is not None:
        bundle.add_jsonl(
            "learn-trials.jsonl",
            (
                {
                    "index": i,
                    "seed": t.seed,
                    "samples_consumed": t.samples_consumed,
                    "halted": t.halted,
                    "final_test_error": t.final_test_error,
                }
                for i, t in enumerate(trials)
            ),
        )
        bundle.add_csv("learn-curve.csv", _CURVE_HEADER, _curve_rows(curve))
        if opts["svg"]:
            chart = svg_chart(
                [
                    ChartSeries(
                        name=f"eta={opts['eta']}",
                        xs=[p.n for p in curve.points],
                        ys=[p.p_hat for p in curve.points],
                        low=[p.wilson_low for p in curve.points],
                        high=[p.wilson_high for p in curve.points],
                    )
                ],
                title="learning probability",
                x_label="samples n",
                y_label="P(halted within n)",
            )
            bundle.add_text("learn-curve.svg", chart)
        bundle.write_summary(
            {
                "budget": budget,
                "halted_fraction": sum(t.halted for t in trials) / len(trials),
                "grid": grid,
                "log_hypothesis_count": log_hypothesis_count(config, opts["dimension"]),
            }
        )
    return 0


def _paired_point(task, eta_pair, opts, config, n_op, point_index):
    """150-trial halting estimates for one (eta_A, eta_E) pair at n = n_op."""
    points = []
    for party_index, eta in enumerate(eta_pair):
        trials = run_trials(
            task,
            eta,
            opts["epsilon_target"],
            config,
            n_op,
            opts["trials"],
            base_seed=_point_seed(opts["seed"], point_index, party_index),
            workers=opts["workers"],
        )
        curve = estimate_learning_probability(
            trials, [n_op], eta=eta, epsilon_target=opts["epsilon_target"]
        )
        points.append(curve.points[0])
    return points


def _cmd_sweep_eta(args: argparse.Namespace) -> int:
    spec = _common_spec("qlabelsec-out") | _task_spec() | _learner_spec() | {
        "eta_grid": ([0.01, 0.03, 0.05, 0.08, 0.11], _as_float_list, None),
        "n_op": (25, int, None),
        "trials": (150, int, None),
        "epsilon_target": (0.03, float, None),
        "attack_kind": ("collective", str, None),
    }
    opts = _resolve_options(args, spec)
    kind = opts["attack_kind"]
    threshold = eta_star(kind)
    task = generate_task(
        opts["dimension"], opts["separation"], opts["task_seed"],
        epsilon_target=opts["epsilon_target"],
    )
    config = _learner_config(opts)
    rows = []
    for index, eta_a in enumerate(opts["eta_grid"]):
        if not 0.0 < eta_a < 0.5:
            raise ConfigError(
                f"eta grid values must lie in (0, 1/2); got {eta_a} "
                "(at 0 the eavesdropper stream is a signal-free coin flip)"
            )
        eta_e = min(eve_noise_from_disturbance(kind, eta_a), 0.5 - 1e-12)
        point_a, point_e = _paired_point(
            task, (eta_a, eta_e), opts, config, opts["n_op"], index
        )
        overlap = not (
            point_a.wilson_low > point_e.wilson_high
            or point_e.wilson_low > point_a.wilson_high
        )
        rows.append(
            (
                eta_a,
                eta_e,
                point_a.p_hat,
                point_a.wilson_low,
                point_a.wilson_high,
                point_e.p_hat,
                point_e.wilson_low,
                point_e.wilson_high,
                overlap,
                opts["trials"],
            )
        )
    header = (
        "eta_a", "eta_e",
        "p_hat_a", "wilson_low_a", "wilson_high_a",
        "p_hat_e", "wilson_low_e", "wilson_high_e",
        "bands_overlap", "trials",
    )
    print(
        f"{'eta_a':>8}  {'eta_e':>8}  {'p_hat_a':>8}  {'p_hat_e':>8}  bands_overlap"
    )
    for row in rows:
        print(
            f"{row[0]:>8.4f}  {row[1]:>8.4f}  {row[2]:>8.4f}  {row[5]:>8.4f}  {row[8]}"
        )
    nearest = min(rows, key=lambda row: abs(row[0] - threshold))
    crossing = {
        "eta_star": threshold,
        "nearest_eta_a": nearest[0],
        "bands_overlap_at_nearest": nearest[8],
    }
    print(
        f"crossing: eta_star({kind}) = {threshold:.6f}, nearest grid point "
        f"{nearest[0]:.4f}, bands overlap: {nearest[8]}"
    )
    bundle = _bundle(opts, "sweep-eta")
    if bundle is not None:
        bundle.add_csv("sweep-eta.csv", header, rows)
        if opts["svg"]:
            chart = svg_chart(
                [
                    ChartSeries(
                        name="authorized",
                        xs=[r[0] for r in rows],
                        ys=[r[2] for r in rows],
                        low=[r[3] for r in rows],
                        high=[r[4] for r in rows],
                    ),
                    ChartSeries(
                        name="eavesdropper",
                        xs=[r[0] for r in rows],
                        ys=[r[5] for r in rows],
                        low=[r[6] for r in rows],
                        high=[r[7] for r in rows],
                    ),
                ],
                title=f"halting probability at n={opts['n_op']}",
                x_label="authorized disturbance eta_a",
                y_label="P(halted)",
            )
            bundle.add_text("sweep-eta.svg", chart)
        bundle.write_summary({"crossing": crossing, "n_op": opts["n_op"]})
    return 0


def _cmd_histograms(args: argparse.Namespace) -> int:
    spec = _common_spec("qlabelsec-out") | _task_spec() | _learner_spec() | {
        "eta_a": (0.03, float, None),
        "epsilon_target": (0.03, float, None),
        "trials": (150, int, None),
        "budget": (2000, int, None),
        "attack_kind": ("collective", str, None),
    }
    opts = _resolve_options(args, spec)
    if not 0.0 < opts["eta_a"] < 0.5:
        raise ConfigError(f"eta_a must lie in (0, 1/2), got {opts['eta_a']}")
    eta_e = min(
        eve_noise_from_disturbance(opts["attack_kind"], opts["eta_a"]), 0.5 - 1e-12
    )
    task = generate_task(
        opts["dimension"], opts["separation"], opts["task_seed"],
        epsilon_target=opts["epsilon_target"],
    )
    config = _learner_config(opts)
    test_size = len(task.test_y)
    counts = {}
    for party_index, (party, eta) in enumerate(
        (("authorized", opts["eta_a"]), ("eavesdropper", eta_e))
    ):
        trials = run_trials(
            task,
            eta,
            opts["epsilon_target"],
            config,
            opts["budget"],
            opts["trials"],
            base_seed=_point_seed(opts["seed"], party_index),
            workers=opts["workers"],
        )
        counts[party] = error_histogram(
            [t.final_test_error for t in trials], test_size
        )
    rows = [
        (
            round(i / HISTOGRAM_BIN_COUNT, 2),
            round((i + 1) / HISTOGRAM_BIN_COUNT, 2),
            counts["authorized"][i],
            counts["eavesdropper"][i],
        )
        for i in range(HISTOGRAM_BIN_COUNT)
    ]
    occupied = [row for row in rows if row[2] or row[3]]
    print(f"{'bin_low':>8}  {'bin_high':>8}  {'authorized':>10}  {'eavesdropper':>12}")
    for row in occupied:
        print(f"{row[0]:>8.2f}  {row[1]:>8.2f}  {row[2]:>10}  {row[3]:>12}")
    bundle = _bundle(opts, "histograms")
    if bundle is not None:
        bundle.add_csv(
            "histograms.csv",
            ("bin_low", "bin_high", "count_authorized", "count_eavesdropper"),
            rows,
        )
        if opts["svg"]:
            chart = svg_chart(
                [
                    ChartSeries(
                        name="authorized",
                        xs=[r[0] for r in rows],
                        ys=[float(r[2]) for r in rows],
                    ),
                    ChartSeries(
                        name="eavesdropper",
                        xs=[r[0] for r in rows],
                        ys=[float(r[3]) for r in rows],
                    ),
                ],
                title="final test error distribution",
                x_label="test error",
                y_label="trials",
                step=True,
            )
            bundle.add_text("histograms.svg", chart)
        bundle.write_summary(
            {
                "eta_a": opts["eta_a"],
                "eta_e": eta_e,
                "total_authorized": sum(counts["authorized"]),
                "total_eavesdropper": sum(counts["eavesdropper"]),
            }
        )
    return 0


def _cmd_selfcheck(args: argparse.Namespace) -> int:
    spec = _common_spec(None) | {"max_sigma": (4.0, float, None)}
    opts = _resolve_options(args, spec)
    max_sigma = opts["max_sigma"]

    curve = info_curve("collective")
    if curve.residual is None or curve.residual >= 1e-9:
        raise StatisticalCheckError(
            f"collective threshold residual {curve.residual} not below 1e-9"
        )
    print(f"ok thresholds: collective residual {curve.residual:.3e}")

    task = generate_task(8, 6.0, seed=opts["seed"] + 1)
    session = run_session(
        task.concept_source(),
        5000,
        attack=InterceptResend(),
        seed=opts["seed"],
        keep_rounds=False,
    )
    sigma = math.sqrt(0.25 / session.check_count)
    pull = abs(session.eta_a_estimate - 0.5) / sigma
    if pull > max_sigma:
        raise StatisticalCheckError(
            f"intercept-resend disturbance estimate {session.eta_a_estimate:.4f} "
            f"is {pull:.1f} sigma from 0.5 (limit {max_sigma})"
        )
    print(f"ok protocol: full-attack disturbance pull {pull:.2f} sigma")
    if session.eve_label_error_rate != 0.0:
        raise StatisticalCheckError(
            "full Z-basis interception must read every data label exactly"
        )
    print("ok protocol: full-attack eavesdropper labels exact")

    p = 0.2
    good, bad = task.labeler, TaskLabeler(direction=-task.direction)
    rng_gate = np.random.default_rng(opts["seed"] + 2)

    def sampler(rng):
        return good if rng.random() < p else bad

    trials = [
        random_search_learner(task, 0.03, sampler, 100, seed=int(s))
        for s in rng_gate.integers(0, 2**63, size=1000)
    ]
    consumed = np.array([t.samples_consumed for t in trials])
    halted = np.array([t.halted for t in trials])
    for n in (1, 5, 10, 25):
        law = random_search_curve(p, n)
        observed = float(np.mean(halted & (consumed <= n)))
        sigma = math.sqrt(law * (1.0 - law) / len(trials))
        pull = abs(observed - law) / sigma
        if pull > max_sigma:
            raise StatisticalCheckError(
                f"random-search CDF at n={n}: observed {observed:.4f} vs law "
                f"{law:.4f} is {pull:.1f} sigma off (limit {max_sigma})"
            )
        print(f"ok random-search law at n={n}: pull {pull:.2f} sigma")
    print("selfcheck passed")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, help="JSON config file; flags override it")
    sub.add_argument("--seed", type=int, help="base seed (default 0)")
    sub.add_argument(
        "--out",
        help=f"output directory for tables and summaries (env {_ENV_OUTDIR})",
    )
    sub.add_argument(
        "--workers", type=int, help=f"trial parallelism (env {_ENV_WORKERS})"
    )
    sub.add_argument(
        "--svg", action="store_const", const=True, help="also render SVG charts"
    )


def _add_task_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--dimension", type=int, help="task input dimension (default 8)")
    sub.add_argument(
        "--separation", type=float, help="cluster separation (default 6.0)"
    )
    sub.add_argument("--task-seed", type=int, help="task generation seed (default 42)")


def _add_learner_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--model", choices=("linear-threshold", "one-hidden-layer"),
        help="model family (default linear-threshold)",
    )
    sub.add_argument("--hidden-width", type=int, help="hidden layer width (default 8)")
    sub.add_argument("--step-size", type=float, help="SGD step size (default 0.3)")
    sub.add_argument("--batch-size", type=int, help="SGD batch size (default 5)")
    sub.add_argument(
        "--cadence", type=int, help="samples between test evaluations (default 25)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlabelsec",
        description="PAC bounds, disturbance thresholds, a one-qubit label "
        "delivery protocol, and learning-probability experiments.",
    )
    parser.add_argument("--version", action="version", version=f"qlabelsec {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    bounds = commands.add_parser("bounds", help="sample-complexity bounds and delta floors")
    bounds.add_argument("--epsilon", type=float, help="inaccuracy target in (0,1)")
    bounds.add_argument("--delta", type=float, help="failure probability in (0,1)")
    bounds.add_argument("--log-h", type=float, help="ln of the hypothesis count")
    bounds.add_argument("--eta", type=float, help="label noise rate in [0, 1/2)")
    bounds.add_argument(
        "--n", help="comma list of sample counts for delta-star rows"
    )
    _add_common_flags(bounds)
    bounds.set_defaults(handler=_cmd_bounds)

    thresholds = commands.add_parser(
        "thresholds", help="critical disturbance rates per attack model"
    )
    _add_common_flags(thresholds)
    thresholds.set_defaults(handler=_cmd_thresholds)

    protocol = commands.add_parser(
        "protocol-run", help="simulate one label-delivery session"
    )
    protocol.add_argument("--target-data", type=int, help="data labels to deliver (default 1000)")
    protocol.add_argument(
        "--attack",
        choices=("none", "intercept-resend", "collective", "individual"),
        help="eavesdropping model (default none)",
    )
    protocol.add_argument(
        "--fraction", type=float, help="attacked round fraction for intercept-resend"
    )
    protocol.add_argument(
        "--policy", choices=("alwaysZ", "randomPerLeg"), help="interception basis policy"
    )
    protocol.add_argument(
        "--legs", choices=("both", "1", "2"), help="which channel legs are attacked"
    )
    protocol.add_argument(
        "--disturbance", type=float, help="induced disturbance for analytic attacks"
    )
    protocol.add_argument(
        "--abort-threshold", type=float, help="abort when the estimate exceeds this"
    )
    protocol.add_argument(
        "--strict-abort", action="store_const", const=True,
        help="discard datasets on abort",
    )
    protocol.add_argument(
        "--no-transcript", action="store_const", const=True,
        help="skip per-round records (faster, no transcript file)",
    )
    _add_task_flags(protocol)
    _add_common_flags(protocol)
    protocol.set_defaults(handler=_cmd_protocol_run)

    learn = commands.add_parser(
        "learn", help="estimate a learning-probability curve"
    )
    learn.add_argument("--eta", type=float, help="stream label noise (default 0)")
    learn.add_argument(
        "--epsilon-target", type=float, help="halting error target (default 0.03)"
    )
    learn.add_argument("--trials", type=int, help="Monte Carlo trials (default 100, min 30)")
    learn.add_argument("--budget", type=int, help="per-trial sample budget")
    learn.add_argument("--grid", help="comma list of sample counts to report")
    learn.add_argument(
        "--learner", choices=("gradient", "random-search"),
        help="trained learner or the baseline (default gradient)",
    )
    _add_learner_flags(learn)
    _add_task_flags(learn)
    _add_common_flags(learn)
    learn.set_defaults(handler=_cmd_learn)

    sweep = commands.add_parser(
        "sweep-eta", help="paired authorized/eavesdropper sweep over disturbance"
    )
    sweep.add_argument("--eta-grid", help="comma list of authorized disturbances")
    sweep.add_argument(
        "--n-op", type=int, help="sample count the halting probability is read at"
    )
    sweep.add_argument("--trials", type=int, help="trials per grid point (default 150)")
    sweep.add_argument(
        "--epsilon-target", type=float, help="halting error target (default 0.03)"
    )
    sweep.add_argument(
        "--attack-kind", choices=("collective", "individual"),
        help="eavesdropper noise curve (default collective)",
    )
    _add_learner_flags(sweep)
    _add_task_flags(sweep)
    _add_common_flags(sweep)
    sweep.set_defaults(handler=_cmd_sweep_eta)

    hist = commands.add_parser(
        "histograms", help="final-error histograms for the paired learners"
    )
    hist.add_argument("--eta-a", type=float, help="authorized disturbance (default 0.03)")
    hist.add_argument(
        "--epsilon-target", type=float, help="halting error target (default 0.03)"
    )
    hist.add_argument("--trials", type=int, help="trials per learner (default 150)")
    hist.add_argument("--budget", type=int, help="per-trial sample budget (default 2000)")
    hist.add_argument(
        "--attack-kind", choices=("collective", "individual"),
        help="eavesdropper noise curve (default collective)",
    )
    _add_learner_flags(hist)
    _add_task_flags(hist)
    _add_common_flags(hist)
    hist.set_defaults(handler=_cmd_histograms)

    selfcheck = commands.add_parser(
        "selfcheck", help="fast statistical self-checks (exit 3 on failure)"
    )
    selfcheck.add_argument("--max-sigma", type=float, help=argparse.SUPPRESS)
    _add_common_flags(selfcheck)
    selfcheck.set_defaults(handler=_cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DomainError, ConfigError, ProtocolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StatisticalCheckError as exc:
        print(f"selfcheck failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
