"""Command line front end.

Three subcommands:

  topo   build a topology and print it (or export graphviz)
  run    run one experiment and write a CSV
  sweep  run a batch of experiments described by an INI file

Seeds come from --seed, falling back to the SDNBENCH_SEED environment
variable, falling back to 1. Configuration errors exit with status 2 and
a one-line message on stderr.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

from . import topology as topo
from .config import ConfigError, NetKnobs
from .harness import (
    ExperimentConfig,
    run_experiment,
    run_matrix,
    spec_for,
    write_csv,
)
from .topology import BuildError, spec_slug

DEFAULT_SEED = 1


def _env_seed() -> int:
    raw = os.environ.get("SDNBENCH_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"SDNBENCH_SEED must be an integer, got {raw!r}")


def _add_topology_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kind", required=True, choices=sorted(topo.KIND_SLUGS.values())
    )
    parser.add_argument("--hosts", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--spine", type=int)
    parser.add_argument("--leaf", type=int)
    parser.add_argument("--hosts-per-leaf", type=int, dest="hosts_per_leaf")


def _add_knob_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bandwidth-mbps", type=float, default=None)
    parser.add_argument("--delay-ms", type=float, default=None)
    parser.add_argument("--loss", type=float, default=None)
    parser.add_argument("--control-latency-ms", type=float, default=None)


def _spec_from_args(args: argparse.Namespace) -> topo.TopologySpec:
    return spec_for(
        args.kind,
        hosts=args.hosts,
        k=args.k,
        spines=args.spine,
        leaves=args.leaf,
        hosts_per_leaf=args.hosts_per_leaf,
    )


def _knobs_from_args(args: argparse.Namespace) -> NetKnobs:
    overrides = {}
    if getattr(args, "bandwidth_mbps", None) is not None:
        overrides["link_bw_mbps"] = args.bandwidth_mbps
    if getattr(args, "delay_ms", None) is not None:
        overrides["link_delay_ms"] = args.delay_ms
    if getattr(args, "loss", None) is not None:
        overrides["link_loss"] = args.loss
    if getattr(args, "control_latency_ms", None) is not None:
        overrides["control_latency_ms"] = args.control_latency_ms
    return NetKnobs(**overrides)


def _cmd_topo(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    knobs = _knobs_from_args(args)
    model = topo.build(spec, knobs.link_bw_mbps, knobs.link_delay_ms, knobs.link_loss)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(topo.export_dot(model))
        print(f"wrote {args.dot}")
    elif args.links:
        print(topo.links(model))
    else:
        print(topo.dump(model))
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    config = ExperimentConfig(
        spec=_spec_from_args(args),
        controller_app=args.controller,
        metric=args.metric,
        duration_s=args.duration,
        trials=args.trials,
        seed=seed,
        knobs=_knobs_from_args(args),
        allow_storm=args.allow_storm,
        src=args.src,
        dst=args.dst,
        ping_count=args.count,
    )
    bw, rtt = run_experiment(config)
    records = bw if config.metric == "bandwidth" else rtt
    write_csv(records, args.out, config.metric)
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    seed_default = args.seed if args.seed is not None else _env_seed()
    configs, outputs = _parse_sweep_file(args.config, seed_default)
    os.makedirs(args.out, exist_ok=True)
    for section, section_configs in configs:
        bw, rtt = run_matrix(section_configs)
        metric = section_configs[0].metric
        records = bw if metric == "bandwidth" else rtt
        path = os.path.join(args.out, outputs[section])
        write_csv(records, path, metric)
        print(f"[{section}] wrote {len(records)} rows to {path}")
    return 0


def _parse_sweep_file(
    path: str, seed_default: int
) -> tuple[list[tuple[str, list[ExperimentConfig]]], dict[str, str]]:
    if not os.path.exists(path):
        raise ConfigError(f"sweep config not found: {path}")
    parser = configparser.ConfigParser()
    parser.read(path)
    configs: list[tuple[str, list[ExperimentConfig]]] = []
    outputs: dict[str, str] = {}
    if not parser.sections():
        raise ConfigError(f"sweep config has no sections: {path}")
    for section in parser.sections():
        sec = parser[section]
        kind = sec.get("kind")
        if kind is None:
            raise ConfigError(f"[{section}] is missing 'kind'")
        metric = sec.get("metric", "rtt")
        controller = sec.get("controller", "l2")
        trials = sec.getint("trials", 3)
        seed = sec.getint("seed", seed_default)
        allow_storm = sec.getboolean("allow_storm", False)
        count = sec.getint("count", 10)
        knob_overrides = {}
        if sec.get("bandwidth_mbps") is not None:
            knob_overrides["link_bw_mbps"] = sec.getfloat("bandwidth_mbps")
        if sec.get("delay_ms") is not None:
            knob_overrides["link_delay_ms"] = sec.getfloat("delay_ms")
        if sec.get("loss") is not None:
            knob_overrides["link_loss"] = sec.getfloat("loss")
        if sec.get("control_latency_ms") is not None:
            knob_overrides["control_latency_ms"] = sec.getfloat("control_latency_ms")
        knobs = NetKnobs(**knob_overrides)

        host_values = _int_list(sec.get("hosts"))
        duration_values = _float_list(sec.get("duration"))
        if not duration_values:
            duration_values = [None]

        section_configs = []
        for duration in duration_values:
            if host_values:
                for n in host_values:
                    section_configs.append(
                        ExperimentConfig(
                            spec=spec_for(kind, hosts=n),
                            controller_app=controller,
                            metric=metric,
                            duration_s=duration,
                            trials=trials,
                            seed=seed,
                            knobs=knobs,
                            allow_storm=allow_storm,
                            ping_count=count,
                        )
                    )
            else:
                spec = spec_for(
                    kind,
                    hosts=None,
                    k=sec.getint("k", fallback=None),
                    spines=sec.getint("spine", fallback=None),
                    leaves=sec.getint("leaf", fallback=None),
                    hosts_per_leaf=sec.getint("hosts_per_leaf", fallback=None),
                )
                section_configs.append(
                    ExperimentConfig(
                        spec=spec,
                        controller_app=controller,
                        metric=metric,
                        duration_s=duration,
                        trials=trials,
                        seed=seed,
                        knobs=knobs,
                        allow_storm=allow_storm,
                        ping_count=count,
                    )
                )
        for config in section_configs:
            config.validate()
        configs.append((section, section_configs))
        outputs[section] = sec.get("out", f"{section}.csv")
    return configs, outputs


def _int_list(raw: str | None) -> list[int]:
    if not raw:
        return []
    return [int(tok) for tok in raw.replace(",", " ").split()]


def _float_list(raw: str | None) -> list[float]:
    if not raw:
        return []
    return [float(tok) for tok in raw.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdnbench",
        description="Deterministic SDN benchmark simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_topo = sub.add_parser("topo", help="build a topology and inspect it")
    _add_topology_args(p_topo)
    _add_knob_args(p_topo)
    p_topo.add_argument("--links", action="store_true", help="print link list")
    p_topo.add_argument("--dot", metavar="FILE", help="write graphviz dot")
    p_topo.set_defaults(func=_cmd_topo)

    p_run = sub.add_parser("run", help="run one experiment, write CSV")
    _add_topology_args(p_run)
    _add_knob_args(p_run)
    p_run.add_argument("--controller", choices=["l2", "l2-stp"], default="l2")
    p_run.add_argument("--metric", choices=["bandwidth", "rtt"], default="rtt")
    p_run.add_argument("--duration", type=float, default=None,
                       help="bandwidth duration in seconds (default: 5..115 sweep)")
    p_run.add_argument("--trials", type=int, default=3)
    p_run.add_argument("--count", type=int, default=10,
                       help="echoes after the first (rtt metric)")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--src", default=None)
    p_run.add_argument("--dst", default=None)
    p_run.add_argument("--allow-storm", action="store_true")
    p_run.add_argument("--out", required=True)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a batch from an INI file")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, BuildError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
