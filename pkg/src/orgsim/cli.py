"""Command-line front end.

Subcommands: run (single seeded run), grid (full society grid batch),
calibrate-mortality, show-config. Configuration layering: built-in defaults,
then --config file values, then command-line flags. All randomness flows
from --seed; nothing reads the clock or OS entropy.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import sys
import typing
from pathlib import Path

from . import demography
from .engine import init_society, run_simulation
from .experiment import BatchSpec, format_run_csv, run_batch
from .types import (
    ConfigurationError,
    MortalityProfile,
    SocietyConfig,
    SOCIETY_LABELS,
    default_config,
)

_BOOL_STRINGS = {
    "true": True, "yes": True, "on": True, "1": True,
    "false": False, "no": False, "off": False, "0": False,
}


def _coerce(name: str, raw: str, target_type: type):
    raw = raw.strip()
    if target_type is bool:
        try:
            return _BOOL_STRINGS[raw.lower()]
        except KeyError:
            raise ConfigurationError(f"{name}: {raw!r} is not a boolean") from None
    if target_type is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigurationError(f"{name}: {raw!r} is not an integer") from None
    if target_type is float:
        try:
            return float(raw)
        except ValueError:
            raise ConfigurationError(f"{name}: {raw!r} is not a number") from None
    if target_type is MortalityProfile:
        if raw.lower() == "harsh":
            return MortalityProfile.harsh()
        if raw.lower() == "benign":
            return MortalityProfile.benign()
        raise ConfigurationError(f"{name}: expected 'harsh' or 'benign', got {raw!r}")
    return raw


def load_config_overrides(path: Path) -> dict[str, dict[str, str]]:
    """Read a key=value override file grouped by [society.LABEL] sections."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config file {path}: {exc}") from exc
    overrides: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if not section.startswith("society."):
            raise ConfigurationError(
                f"config file {path}: unknown section [{section}] "
                "(expected [society.LABEL])"
            )
        label = section.split(".", 1)[1]
        if label not in SOCIETY_LABELS:
            raise ConfigurationError(
                f"config file {path}: unknown society label {label!r}"
            )
        overrides[label] = dict(parser[section])
    return overrides


def apply_overrides(config: SocietyConfig, values: dict[str, str]) -> SocietyConfig:
    field_types = typing.get_type_hints(SocietyConfig)
    for key, raw in values.items():
        if key not in field_types:
            raise ConfigurationError(f"unknown configuration key {key!r}")
        setattr(config, key, _coerce(key, raw, field_types[key]))
    return config


def build_config(label: str, args: argparse.Namespace) -> SocietyConfig:
    """Defaults for the label, then file overrides, then flag overrides."""
    config = default_config(label)
    if args.config is not None:
        overrides = load_config_overrides(Path(args.config))
        if label in overrides:
            apply_overrides(config, overrides[label])
    if args.degree is not None:
        config.network_degree = args.degree
    if args.literal_justif:
        config.literal_justif_comparison = True
    config.validate()
    return config


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE",
                        help="override file, key=value under [society.LABEL] sections")
    parser.add_argument("--literal-justif", action="store_true", dest="literal_justif",
                        help="use the literal '<' justification comparison")
    parser.add_argument("--degree", type=int, metavar="K",
                        help="friend attachment degree")
    parser.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orgsim",
        description="Deterministic simulation of rule change in organisations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one seeded run of one society")
    p_run.add_argument("--society", required=True, choices=SOCIETY_LABELS)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", default="results", metavar="DIR")
    p_run.add_argument("--dump-graph", metavar="FILE", dest="dump_graph",
                       help="write the initial friend graph as 'a,b' edge lines")
    _common_flags(p_run)

    p_grid = sub.add_parser("grid", help="all four societies, many runs each")
    p_grid.add_argument("--runs", type=int, default=30)
    p_grid.add_argument("--seed", type=int, default=0)
    p_grid.add_argument("--out", default="results", metavar="DIR")
    p_grid.add_argument("--jobs", type=int, default=None,
                        help="parallel worker processes (default: all cores)")
    _common_flags(p_grid)

    p_cal = sub.add_parser("calibrate-mortality",
                           help="report the fitted hazard scale and mean death age")
    p_cal.add_argument("--profile", required=True, choices=["harsh", "benign"])
    p_cal.add_argument("--lifetimes", type=int, default=100_000)
    _common_flags(p_cal)

    p_show = sub.add_parser("show-config", help="print effective configuration")
    p_show.add_argument("--society", required=True)
    _common_flags(p_show)

    return parser


def cmd_run(args: argparse.Namespace) -> int:
    config = build_config(args.society, args)
    out = Path(args.out) / config.label
    out.mkdir(parents=True, exist_ok=True)
    if args.dump_graph:
        state = init_society(config, args.seed)
        edges = sorted(
            (a, b)
            for a in state.agents
            for b in state.agents[a].friends
            if a < b
        )
        Path(args.dump_graph).write_text(
            "".join(f"{a},{b}\n" for a, b in edges)
        )
    result = run_simulation(config, args.seed)
    path = out / f"run_{args.seed}.csv"
    path.write_text(format_run_csv(result))
    if not args.quiet:
        granted = result.permission_year if result.permission_ever_granted else "never"
        print(f"{path} written (permission granted: {granted})")
    return 0


def cmd_grid(args: argparse.Namespace) -> int:
    societies = [build_config(label, args) for label in SOCIETY_LABELS]
    spec = BatchSpec(
        societies=societies,
        base_seed=args.seed,
        output_dir=Path(args.out),
        runs_per_society=args.runs,
    )
    progress = None
    if not args.quiet:
        progress = lambda label, seed: print(f"  {label} seed {seed} done", file=sys.stderr)
    summary = run_batch(spec, jobs=args.jobs, progress=progress)
    if not args.quiet:
        for label in sorted(summary.per_society):
            agg = summary.per_society[label]
            print(f"{label}: permission rate {agg.permission_rate:.2f} "
                  f"over {agg.runs} runs")
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    profile = (
        MortalityProfile.harsh() if args.profile == "harsh"
        else MortalityProfile.benign()
    )
    target = 35.0 if args.profile == "harsh" else 70.0
    fitted = demography.fit_hazard_scale(target, profile.hazard_growth, profile.cap_age)
    achieved = demography.mean_death_age(profile, args.lifetimes)
    print(f"profile: {args.profile}")
    print(f"hazard_growth: {profile.hazard_growth}")
    print(f"hazard_scale (built-in): {profile.hazard_scale}")
    print(f"hazard_scale (fitted for mean {target}): {fitted:.6f}")
    print(f"mean death age over {args.lifetimes} lifetimes: {achieved:.3f}")
    return 0


def cmd_show_config(args: argparse.Namespace) -> int:
    config = build_config(args.society, args)
    for f in dataclasses.fields(SocietyConfig):
        value = getattr(config, f.name)
        if isinstance(value, MortalityProfile):
            value = (f"{value.kind.value} (scale={value.hazard_scale}, "
                     f"growth={value.hazard_growth}, cap={value.cap_age})")
        print(f"{f.name} = {value}")
    return 0


_COMMANDS = {
    "run": cmd_run,
    "grid": cmd_grid,
    "calibrate-mortality": cmd_calibrate,
    "show-config": cmd_show_config,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures: I/O, engine invariants
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
