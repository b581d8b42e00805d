"""Command-line surface: plan, simulate, analyze, plot.

Exit codes: 0 success, 2 configuration/input error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, experiment, planner, svg
from .config import ConfigError, ExperimentConfig
from .core import ArmParams


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recpomdp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="print the optimal waiting time and policy values")
    plan.add_argument("--q", type=float, required=True)
    plan.add_argument("--rho", type=float, required=True)
    plan.add_argument("--lambda", dest="lam", type=float, required=True)
    plan.add_argument("--kmax", type=int, default=planner.DEFAULT_K_MAX)
    plan.add_argument("--beta", type=float, default=0.999, help="discount for the threshold solve")
    plan.add_argument("--grid-size", type=int, default=1024)

    sim = sub.add_parser("simulate", help="run the learning experiment and write CSVs")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    sim.add_argument("--out", default=None, help="output directory (overrides config out_dir)")
    sim.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a top-level config key (value parsed as JSON)",
    )
    sim.add_argument("--workers", type=int, default=None)

    ana = sub.add_parser("analyze", help="write separation and decision-region reports")
    ana.add_argument("--config", required=True)
    ana.add_argument("--epsilon1", type=float, default=0.02)
    ana.add_argument("--out", default=None)
    ana.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE"
    )

    plot = sub.add_parser("plot", help="render an aggregate CSV to SVG")
    plot.add_argument("--csv", required=True)
    plot.add_argument("--kind", choices=sorted(svg.KINDS), required=True)
    plot.add_argument("--out", required=True)
    plot.add_argument("--log-x", action="store_true")
    return parser


def _parse_overrides(pairs: list[str]) -> dict:
    overrides = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"override {pair!r} is not KEY=VALUE")
        try:
            overrides[key] = json.loads(value)
        except json.JSONDecodeError:
            overrides[key] = value
    return overrides


def _load_config(args) -> ExperimentConfig:
    overrides = _parse_overrides(args.overrides)
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "out", None) is not None:
        overrides["out_dir"] = args.out
    return ExperimentConfig.from_json(args.config, overrides)


def _cmd_plan(args) -> int:
    params = ArmParams(args.q, args.rho, args.lam)
    best = planner.k_opt(params, args.kmax)
    table = planner.value_iteration(params, args.beta, grid_size=args.grid_size)
    print(f"k_opt = {best}")
    print(f"avg value at k_opt = {planner.cycle_value_avg(params, best).value:.9g}")
    print(f"threshold pi_T = {table.threshold:.9g} (beta={args.beta})")
    print(f"average gain (1-beta)V(1) = {planner.average_gain(table):.9g}")
    print()
    print(" k   avg_cycle_value")
    for k in range(1, args.kmax + 1):
        marker = " *" if k == best else ""
        print(f"{k:3d}  {planner.cycle_value_avg(params, k).value:.9g}{marker}")
    return 0


def _cmd_simulate(args) -> int:
    config = _load_config(args)
    out_dir = Path(config.out_dir) if config.out_dir else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    traces = experiment.run_experiment(config, workers=args.workers)
    agg = experiment.aggregate_runs(traces)
    experiment.write_steps_csv(traces, out_dir / "steps.csv")
    experiment.write_epochs_csv(traces, out_dir / "epochs.csv")
    experiment.write_agg_csv(agg, out_dir / "agg.csv")
    final = agg.mean_regret[-1]
    print(f"wrote {out_dir / 'steps.csv'}, {out_dir / 'epochs.csv'}, {out_dir / 'agg.csv'}")
    print(
        f"runs={config.runs} horizon={config.horizon} "
        f"final mean regret={final:.9g} final mean posterior={agg.mean_posterior_true[-1]:.9g}"
    )
    return 0


def _cmd_analyze(args) -> int:
    config = _load_config(args)
    out_dir = Path(config.out_dir) if config.out_dir else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    report = analysis.separation_report(
        config.true_model, args.epsilon1, config.k_max, config.models
    )
    regions = analysis.decision_regions(
        config.models, config.lam, config.k_max, report.delta2 / 2.0, config.true_model
    )
    report_path = out_dir / "separation_report.json"
    payload = {
        "truth": list(report.truth),
        "epsilon1": report.epsilon1,
        "k_max": report.k_max,
        "delta": report.delta,
        "delta_argmin_k": report.delta_argmin_k,
        "delta2": report.delta2,
        "delta2_nats": report.delta2_nats,
        "kappa": report.kappa,
        "k_star": regions.k_star,
        "epsilon_region_split": regions.epsilon,
        "gaps": {f"{q:.9g},{rho:.9g}": list(g) for (q, rho), g in report.gaps.items()},
    }
    report_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    regions_path = out_dir / "decision_regions.csv"
    with open(regions_path, "w", newline="\n") as fh:
        fh.write("q,rho,k_opt,region,kl_at_k_star\n")
        for k in sorted(regions.regions):
            for model in regions.regions[k]:
                if k == regions.k_star:
                    region = "optimal"
                elif model in regions.near.get(k, ()):
                    region = "near"
                else:
                    region = "far"
                fh.write(
                    f"{model[0]:.9g},{model[1]:.9g},{k},{region},"
                    f"{regions.kl_at_k_star[model]:.9g}\n"
                )
    print(f"wrote {report_path}, {regions_path}")
    print(
        f"delta={report.delta:.6g} delta2={report.delta2:.6g} kappa={report.kappa} "
        f"k_star={regions.k_star}"
    )
    return 0


def _cmd_plot(args) -> int:
    svg.render_svg(args.csv, args.kind, args.out, log_x=args.log_x)
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "plan": _cmd_plan,
    "simulate": _cmd_simulate,
    "analyze": _cmd_analyze,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, svg.SchemaError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
