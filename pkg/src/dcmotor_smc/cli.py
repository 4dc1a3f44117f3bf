"""Command-line entry point.

    dcmotor-smc run --config exp.cfg [--controller pid|smc] [--out DIR] [--plot-script]
    dcmotor-smc compare --pid pid.cfg --smc smc.cfg --out DIR [--plot-script]
    dcmotor-smc defaults --emit

Exit codes: 0 success, 1 configuration error, 2 simulation fault or failed
reaching check.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import default_config, parse_config, serialize_config
from .errors import ConfigError, DomainError, MotorSimError
from .experiment import compare, emit_csv, plot_script, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SIM = 2


def _load(path):
    if path is None:
        return default_config()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        return parse_config(text)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _cmd_run(args) -> int:
    cfg = _load(args.config)
    if args.controller:
        cfg = cfg.with_controller(args.controller)
    out_dir = Path(args.out) if args.out else Path(cfg.output.dir)

    result = run_experiment(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = emit_csv(result.trace, out_dir / f"{cfg.output.name}.csv")
    if args.plot_script:
        (out_dir / f"{cfg.output.name}.gp").write_text(
            plot_script(csv_path.name, cfg.output.name), encoding="utf-8")

    print(f"controller: {cfg.controller_kind}")
    if result.metrics is not None:
        for name, value in result.metrics.as_dict().items():
            print(f"{name}: {value:.6g}")
    print(f"trace: {csv_path}")
    code = EXIT_OK
    if result.metrics_error:
        print(f"error: metrics unavailable: {result.metrics_error}", file=sys.stderr)
        code = EXIT_SIM
    if result.reaching is not None:
        n = len(result.reaching.violations)
        print(f"reaching violations: {n}")
        if n:
            print(f"error: reaching condition violated at {n} samples "
                  f"(first at t={result.reaching.violations[0]:.6g} s)", file=sys.stderr)
            code = EXIT_SIM
    return code


def _cmd_compare(args) -> int:
    cfg_pid = _load(args.pid).with_controller("pid")
    cfg_smc = _load(args.smc).with_controller("smc")
    report = compare(cfg_pid, cfg_smc, out_dir=args.out, plot=args.plot_script)
    sys.stdout.write(report.render())
    return EXIT_OK if report.complete else EXIT_SIM


def _cmd_defaults(args) -> int:
    sys.stdout.write(serialize_config(default_config()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcmotor-smc",
                                     description="DC motor speed control: PID vs sliding mode.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one configuration")
    run.add_argument("--config", help="configuration file (defaults if omitted)")
    run.add_argument("--controller", choices=("pid", "smc"), help="override controller.kind")
    run.add_argument("--out", help="output directory (default: output.dir)")
    run.add_argument("--plot-script", action="store_true", help="also write a gnuplot script")
    run.set_defaults(func=_cmd_run)

    cmp_ = sub.add_parser("compare", help="run PID and SMC on the same scenario")
    cmp_.add_argument("--pid", help="PID configuration file")
    cmp_.add_argument("--smc", help="SMC configuration file")
    cmp_.add_argument("--out", required=True, help="output directory")
    cmp_.add_argument("--plot-script", action="store_true", help="also write gnuplot scripts")
    cmp_.set_defaults(func=_cmd_compare)

    dflt = sub.add_parser("defaults", help="print the default configuration")
    dflt.add_argument("--emit", action="store_true", required=True)
    dflt.set_defaults(func=_cmd_defaults)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MotorSimError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIM


if __name__ == "__main__":
    sys.exit(main())
