import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from .config import get_settings
from .domain.analytic_model.error import GridMismatchError, UnboundedTrajectoryError
from .domain.contrast.error import ContrastError
from .domain.dynamics.error import DynamicsError
from .domain.experiments.dto import ReportRow
from .domain.experiments.error import MetricsReadError
from .domain.experiments.service import (
    CommandOutcome,
    beta_evolution,
    contrast,
    euler_angles,
    load_experiment_spec,
    read_metrics,
    report_rows,
    run_experiment,
    simulate,
    sweep_superposition,
)
from .domain.params.dto import RunConfig
from .domain.params.error import ConfigInvalidError, ParamsError
from .domain.params.service import (
    default_run_config,
    dump_run_config,
    load_run_config,
    validate,
)
from .domain.spin_model.error import SpinModelError
from .logger import configure_logging

logger = logging.getLogger("sgi_nanorotor.cli")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3


def _load_config(args: argparse.Namespace) -> RunConfig:
    """Config file when given, otherwise the defaults with the settings' stride."""
    if args.config:
        return load_run_config(args.config)
    config = default_run_config()
    output = config.output.model_copy(update={"stride": get_settings().output_stride})
    return config.model_copy(update={"output": output})


def _out_dir(args: argparse.Namespace) -> Path:
    return Path(args.out or get_settings().out_dir)


def _threads(args: argparse.Namespace) -> int:
    return args.threads or get_settings().threads


def _print_files(outcome: CommandOutcome) -> None:
    for path in outcome.files:
        print(path)


def cmd_simulate(args: argparse.Namespace) -> int:
    """Integrate both branches and write trajectories, metrics and manifest."""
    config = _load_config(args)
    _print_files(simulate(config, _out_dir(args), analytic=args.analytic, threads=_threads(args)))
    return EXIT_OK


def cmd_sweep_superposition(args: argparse.Namespace) -> int:
    config = _load_config(args)
    masses = config.sweep.masses if args.masses is None else args.masses
    etas = config.sweep.etas if args.etas is None else args.etas
    _print_files(sweep_superposition(config, masses, etas, _out_dir(args)))
    return EXIT_OK


def cmd_contrast(args: argparse.Namespace) -> int:
    config = _load_config(args)
    masses = config.sweep.masses if args.masses is None else args.masses
    omega0s = config.sweep.omega0s if args.omega0s is None else args.omega0s
    _print_files(contrast(config, masses, omega0s, _out_dir(args), threads=_threads(args)))
    return EXIT_OK


def cmd_beta_evolution(args: argparse.Namespace) -> int:
    config = _load_config(args)
    masses = config.sweep.masses if args.masses is None else args.masses
    _print_files(beta_evolution(config, masses, _out_dir(args), threads=_threads(args)))
    return EXIT_OK


def cmd_euler_angles(args: argparse.Namespace) -> int:
    config = _load_config(args)
    masses = config.sweep.masses if args.masses is None else args.masses
    _print_files(euler_angles(config, masses, _out_dir(args), threads=_threads(args)))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    """Run an experiment described by an ExperimentSpec JSON file."""
    spec = load_experiment_spec(args.spec)
    _print_files(run_experiment(spec, _out_dir(args), analytic=args.analytic, threads=_threads(args)))
    return EXIT_OK


def render_report(rows: list[ReportRow], console: Console) -> None:
    table = Table(title="Headline values")
    table.add_column("quantity")
    table.add_column("computed", justify="right")
    table.add_column("expected", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("result")
    for row in rows:
        table.add_row(
            row.quantity,
            f"{row.computed:.5g}",
            f"{row.expected:.5g}",
            row.tolerance,
            "[green]PASS[/green]" if row.passed else "[red]FAIL[/red]",
        )
    console.print(table)


def cmd_report(args: argparse.Namespace) -> int:
    """Compare metrics files against the reference table."""
    config = _load_config(args)
    metrics = [read_metrics(path) for path in args.metrics]
    render_report(report_rows(metrics, config), Console())
    return EXIT_OK


def cmd_defaults(args: argparse.Namespace) -> int:
    print(dump_run_config(default_run_config()))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    report = validate(_load_config(args))
    if not report.is_valid:
        for violation in report.violations:
            print(violation, file=sys.stderr)
        return EXIT_INVALID
    print("valid")
    return EXIT_OK


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Run configuration JSON (SI units)")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--threads", type=int, help="Worker threads for branches and sweep points")
    common.add_argument("--seed", type=int, help="Reserved; the model has no stochastic parts")
    common.add_argument("--analytic", action="store_true", help="Use the small-angle closed forms")
    common.add_argument("--log-level", dest="log_level", help="Override SGI_NANOROTOR_LOG_LEVEL")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=get_settings().app_name)
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    def add(name: str, func: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(func=func)
        return sub

    add("simulate", cmd_simulate, "Integrate both spin branches")

    sweep = add("sweep-superposition", cmd_sweep_superposition, "Max superposition over mass x eta")
    sweep.add_argument("--masses", type=float, nargs="*", help="Masses (kg)")
    sweep.add_argument("--etas", type=float, nargs="*", help="Gradients (T/m)")

    contrast_parser = add("contrast", cmd_contrast, "Contrast over mass x omega0")
    contrast_parser.add_argument("--masses", type=float, nargs="*", help="Masses (kg)")
    contrast_parser.add_argument("--omega0s", type=float, nargs="*", help="Spin rates (rad/s)")

    for name, func, help_text in (
        ("beta-evolution", cmd_beta_evolution, "Libration angle of both branches per mass"),
        ("euler-angles", cmd_euler_angles, "Precession and spin angles per mass"),
    ):
        add(name, func, help_text).add_argument("--masses", type=float, nargs="*", help="Masses (kg)")

    run_parser = add("run", cmd_run, "Run an experiment spec file")
    run_parser.add_argument("spec", help="ExperimentSpec JSON")

    report = add("report", cmd_report, "Compare metrics with reference values")
    report.add_argument("metrics", nargs="+", help="metrics.json / contrast_points.json files")

    add("defaults", cmd_defaults, "Print the default configuration")
    add("validate", cmd_validate, "Check a configuration against run invariants")
    return parser


def main(argv: list[str] | None = None) -> int:
    """CLI entrypoint.

    Example:
        sgi-nanorotor simulate --config run.json --out out/run1
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except ConfigInvalidError as exc:
        for violation in exc.violations:
            print(violation, file=sys.stderr)
        return EXIT_INVALID
    except (ParamsError, ContrastError, MetricsReadError, GridMismatchError, ValidationError) as exc:
        logger.error("command_rejected", extra={"command": args.command, "error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DynamicsError, UnboundedTrajectoryError, SpinModelError) as exc:
        logger.error("numeric_failure", extra={"command": args.command, "error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
