"""Command-line entry point: analyze, simulate, sweep, verify, presets."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .config import ScenarioConfig
from .phy import ConfigError


def _base_config(args) -> ScenarioConfig:
    return harness.load_config(args.config) if args.config else ScenarioConfig()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _variant_path(out: str, label: str) -> str:
    if not label:
        return out
    p = Path(out)
    return str(p.with_name(f"{p.stem}-{label}{p.suffix}"))


def cmd_analyze(args) -> int:
    cfg = _base_config(args)
    rows = harness.compare(cfg, "analytic")
    _emit(harness.format_csv(rows, harness.run_metadata(cfg, mode="analytic")), args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = _base_config(args)
    seed = harness.resolve_seed(args.seed)
    trials = args.trials if args.trials is not None else harness.trials_for_messages(cfg)
    rows = harness.compare(cfg, "simulate", trials, seed)
    meta = harness.run_metadata(cfg, mode="simulate", seed=seed, trials=trials)
    _emit(harness.format_csv(rows, meta), args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = _base_config(args)
    seed = harness.resolve_seed(args.seed)
    if args.preset:
        if args.parameter:
            raise harness.UsageError("use either --preset or --parameter, not both")
        results = harness.run_preset(args.preset, cfg, args.mode, args.trials, seed)
    elif args.parameter:
        if not args.grid:
            raise harness.UsageError("--parameter needs --grid")
        grid = tuple(harness._parse_value(v.strip()) for v in args.grid.split(","))
        schemes = tuple(s.strip() for s in args.schemes.split(",")) if args.schemes else harness.SCHEMES
        spec = harness.SweepSpec(args.parameter, grid, schemes, args.mode, args.trials, seed)
        results = [(None, harness.sweep(spec, cfg))]
    else:
        raise harness.UsageError("sweep needs --preset or --parameter")

    if len(results) > 1 and not args.out:
        raise harness.UsageError(f"preset {args.preset} writes several files; pass --out")
    for variant, rows in results:
        label = variant.label if variant else ""
        variant_cfg = cfg.replace(**variant.overrides) if variant else cfg
        meta = harness.run_metadata(
            variant_cfg,
            preset=args.preset,
            variant=label or None,
            mode=args.mode,
            seed=seed if args.mode != "analytic" else None,
            trials=args.trials if args.mode != "analytic" else None,
        )
        out = _variant_path(args.out, label) if args.out else None
        _emit(harness.format_csv(rows, meta), out)
    return 0


def cmd_verify(args) -> int:
    cfg = _base_config(args)
    seed = harness.resolve_seed(args.seed)
    report = harness.verify(cfg, args.trials, seed)
    for check in report.checks:
        print(check.line())
    if args.out:
        Path(args.out).write_text(json.dumps(report.as_dict(), indent=2) + "\n")
    print("verify:", "PASS" if report.passed else "FAIL")
    return 0 if report.passed else 2


def cmd_presets(args) -> int:
    for preset in harness.PRESETS.values():
        for variant in preset.variants:
            fixed = ", ".join(f"{k}={v}" for k, v in variant.overrides.items()) or "defaults"
            name = f"{preset.name}" + (f"[{variant.label}]" if variant.label else "")
            print(f"{name:18s} {variant.spec.parameter:10s} ({fixed})  {preset.description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wurlora", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sim=False):
        p.add_argument("--config", help="flat YAML key: value file overriding defaults")
        p.add_argument("--out", help="output path (default: stdout)")
        if sim:
            p.add_argument("--trials", type=int, help="simulated cycles (default: about 2e5 messages)")
            p.add_argument("--seed", type=int, help=f"RNG seed (default: ${harness.SEED_ENV} or {harness.DEFAULT_SEED})")

    common(sub.add_parser("analyze", help="closed-form comparison of the three schemes"))
    common(sub.add_parser("simulate", help="Monte Carlo comparison of the three schemes"), sim=True)
    p = sub.add_parser("sweep", help="sweep one parameter or run a figure preset")
    common(p, sim=True)
    p.add_argument("--preset", choices=sorted(harness.PRESETS))
    p.add_argument("--parameter", help=f"one of {', '.join(harness.SWEEPABLE)}")
    p.add_argument("--grid", help="comma-separated values")
    p.add_argument("--schemes", help="comma-separated subset of wur,classb,direct")
    p.add_argument("--mode", choices=harness.MODES, default="analytic")
    common(sub.add_parser("verify", help="identity checks and simulation agreement"), sim=True)
    sub.add_parser("presets", help="list figure presets")
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "presets": cmd_presets,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, harness.UsageError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
