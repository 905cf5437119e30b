"""Experiment harness: build a topology, run a metric, emit CSV records.

Each trial gets a fresh simulator seeded `seed + trial - 1`, so a
(config, seed) pair maps to byte-identical CSV output. Bandwidth configs
without an explicit duration iterate the standard 5..115 s sweep; every
config contributes one record per trial plus an aggregate row (trial `avg`).
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from . import topology as topo
from .apps import LearningSwitchApp, StpLearningSwitchApp
from .config import ConfigError, NetKnobs
from .control import Controller
from .dataplane import Network, StormDetected
from .engine import Simulator
from .topology import TopologySpec, spec_slug
from .traffic import (
    STATUS_NO_ROUTE,
    STATUS_OK,
    STATUS_STORM,
    BandwidthReport,
    PingReport,
    bandwidth_test,
    ping,
)

DEFAULT_DURATIONS_S = [float(d) for d in range(5, 120, 5)]
STANDARD_HOST_SWEEP = [2, 4, 8, 16, 32, 64, 128]

BANDWIDTH_HEADER = [
    "topology", "controller_app", "hosts", "switches", "duration_s", "trial",
    "transfer_bytes", "bandwidth_mbps", "throughput_mbps", "status", "seed",
]
RTT_HEADER = [
    "topology", "controller_app", "hosts", "switches", "trial", "seq",
    "rtt_ms", "is_first", "seed",
]

_SEVERITY = {STATUS_OK: 0, STATUS_NO_ROUTE: 1, STATUS_STORM: 2}

APPS = {
    LearningSwitchApp.name: LearningSwitchApp,
    StpLearningSwitchApp.name: StpLearningSwitchApp,
}


@dataclass(frozen=True)
class ExperimentConfig:
    spec: TopologySpec
    controller_app: str = "l2"
    metric: str = "rtt"
    duration_s: float | None = None
    trials: int = 3
    seed: int = 1
    knobs: NetKnobs = field(default_factory=NetKnobs)
    allow_storm: bool = False
    src: str | None = None
    dst: str | None = None
    ping_count: int = 10

    def validate(self) -> None:
        if self.controller_app not in APPS:
            raise ConfigError(f"unknown controller app: {self.controller_app}")
        if self.metric not in ("bandwidth", "rtt"):
            raise ConfigError(f"unknown metric: {self.metric}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if (
            isinstance(self.spec, topo.LOOPED_KINDS)
            and self.controller_app != StpLearningSwitchApp.name
            and not self.allow_storm
        ):
            raise ConfigError(
                f"{spec_slug(self.spec)} contains loops: use controller l2-stp "
                "or pass --allow-storm to run it anyway"
            )


@dataclass(frozen=True)
class BandwidthRecord:
    topology: str
    controller_app: str
    hosts: int
    switches: int
    duration_s: float
    trial: str
    transfer_bytes: float
    bandwidth_mbps: float
    throughput_mbps: float
    status: str
    seed: int

    def row(self) -> list:
        return [
            self.topology, self.controller_app, self.hosts, self.switches,
            self.duration_s, self.trial, self.transfer_bytes, self.bandwidth_mbps,
            self.throughput_mbps, self.status, self.seed,
        ]


@dataclass(frozen=True)
class RttRecord:
    topology: str
    controller_app: str
    hosts: int
    switches: int
    trial: str
    seq: int
    rtt_ms: float
    is_first: int
    seed: int

    def row(self) -> list:
        return [
            self.topology, self.controller_app, self.hosts, self.switches,
            self.trial, self.seq, self.rtt_ms, self.is_first, self.seed,
        ]


class Instance:
    """A live simulation: model, dataplane, controller, ready for traffic."""

    def __init__(self, spec: TopologySpec, knobs: NetKnobs, app_name: str, seed: int):
        self.sim = Simulator(seed)
        self.knobs = knobs
        self.model = topo.build(
            spec, knobs.link_bw_mbps, knobs.link_delay_ms, knobs.link_loss
        )
        self.net = Network(self.sim, self.model, knobs)
        self.app = APPS[app_name]()
        self.controller = Controller(self.sim, self.net, self.app, knobs)
        self.controller.start()

    def settle(self) -> None:
        """For STP apps, wait out discovery and tree installation."""
        if not self.app.uses_stp:
            return
        self.sim.run(until=self.knobs.stp_settle_ms)
        if not self.controller.stp_ready:
            raise ConfigError(
                "spanning tree did not converge within stp_settle_ms; increase it"
            )


def _endpoints(config: ExperimentConfig, model: topo.NetworkModel) -> tuple[str, str]:
    src = config.src or model.hosts[0].name
    dst = config.dst or model.hosts[-1].name
    return src, dst


def _worst_status(statuses: Iterable[str]) -> str:
    return max(statuses, key=lambda s: _SEVERITY.get(s, 0))


def run_experiment(config: ExperimentConfig) -> tuple[list[BandwidthRecord], list[RttRecord]]:
    """Run one config: trials plus aggregate rows, storms recorded in-row."""
    config.validate()
    slug = spec_slug(config.spec)
    bw_records: list[BandwidthRecord] = []
    rtt_records: list[RttRecord] = []

    if config.metric == "bandwidth":
        durations = [config.duration_s] if config.duration_s else DEFAULT_DURATIONS_S
        for duration in durations:
            trial_reports: list[tuple[int, int, BandwidthReport]] = []
            for trial in range(1, config.trials + 1):
                seed = config.seed + trial - 1
                inst = Instance(config.spec, config.knobs, config.controller_app, seed)
                src, dst = _endpoints(config, inst.model)
                try:
                    inst.settle()
                    report = bandwidth_test(inst.net, src, dst, duration)
                except StormDetected:
                    report = BandwidthReport((0.0, duration), 0, 0.0, STATUS_STORM)
                trial_reports.append((trial, seed, report))
                bw_records.append(
                    BandwidthRecord(
                        slug, config.controller_app, inst.model.n_hosts,
                        inst.model.n_switches, duration, str(trial),
                        report.transfer_bytes, report.bandwidth_mbps,
                        report.bandwidth_mbps, report.status, seed,
                    )
                )
            mean_transfer = statistics.fmean(r.transfer_bytes for _, _, r in trial_reports)
            mean_bw = statistics.fmean(r.bandwidth_mbps for _, _, r in trial_reports)
            bw_records.append(
                BandwidthRecord(
                    slug, config.controller_app, bw_records[-1].hosts,
                    bw_records[-1].switches, duration, "avg", mean_transfer,
                    mean_bw, mean_bw,
                    _worst_status(r.status for _, _, r in trial_reports), config.seed,
                )
            )
    else:
        trial_reports: list[tuple[int, int, PingReport]] = []
        hosts = switches = 0
        for trial in range(1, config.trials + 1):
            seed = config.seed + trial - 1
            inst = Instance(config.spec, config.knobs, config.controller_app, seed)
            hosts, switches = inst.model.n_hosts, inst.model.n_switches
            src, dst = _endpoints(config, inst.model)
            try:
                inst.settle()
                report = ping(inst.net, src, dst, config.ping_count)
            except StormDetected:
                report = PingReport(None, [], config.ping_count, STATUS_STORM)
            trial_reports.append((trial, seed, report))
            rtt_records.extend(_rtt_rows(slug, config, hosts, switches, str(trial), seed, report))
        rtt_records.extend(
            _rtt_aggregate(slug, config, hosts, switches, trial_reports)
        )
    return bw_records, rtt_records


def _rtt_rows(
    slug: str, config: ExperimentConfig, hosts: int, switches: int,
    trial: str, seed: int, report: PingReport,
) -> list[RttRecord]:
    rows = []
    if report.first_rtt_ms is not None:
        rows.append(
            RttRecord(slug, config.controller_app, hosts, switches, trial, 0,
                      report.first_rtt_ms, 1, seed)
        )
    for i, rtt in enumerate(report.rtts_ms, start=1):
        rows.append(
            RttRecord(slug, config.controller_app, hosts, switches, trial, i, rtt, 0, seed)
        )
    return rows


def _rtt_aggregate(
    slug: str, config: ExperimentConfig, hosts: int, switches: int,
    trial_reports: list[tuple[int, int, PingReport]],
) -> list[RttRecord]:
    rows = []
    firsts = [r.first_rtt_ms for _, _, r in trial_reports if r.first_rtt_ms is not None]
    if firsts:
        rows.append(
            RttRecord(slug, config.controller_app, hosts, switches, "avg", 0,
                      statistics.fmean(firsts), 1, config.seed)
        )
    max_len = max((len(r.rtts_ms) for _, _, r in trial_reports), default=0)
    for i in range(max_len):
        samples = [r.rtts_ms[i] for _, _, r in trial_reports if len(r.rtts_ms) > i]
        rows.append(
            RttRecord(slug, config.controller_app, hosts, switches, "avg", i + 1,
                      statistics.fmean(samples), 0, config.seed)
        )
    return rows


def run_matrix(
    configs: Sequence[ExperimentConfig],
) -> tuple[list[BandwidthRecord], list[RttRecord]]:
    """Run configs in order; per-row failures never abort the matrix."""
    all_bw: list[BandwidthRecord] = []
    all_rtt: list[RttRecord] = []
    for config in configs:
        bw, rtt = run_experiment(config)
        all_bw.extend(bw)
        all_rtt.extend(rtt)
    return all_bw, all_rtt


def write_csv(records: Sequence, path: str, metric: str | None = None) -> None:
    """Write records with the exact schema header; empty list needs `metric`."""
    if metric is None:
        if not records:
            raise ValueError("metric is required to write an empty record list")
        metric = "bandwidth" if isinstance(records[0], BandwidthRecord) else "rtt"
    header = BANDWIDTH_HEADER if metric == "bandwidth" else RTT_HEADER
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for record in records:
            writer.writerow(record.row())


def expand_host_sweep(kind: str, hosts: Iterable[int], **common) -> list[ExperimentConfig]:
    """Build one config per host count for a topology kind."""
    configs = []
    for n in hosts:
        configs.append(ExperimentConfig(spec=spec_for(kind, hosts=n), **common))
    return configs


def spec_for(
    kind: str,
    hosts: int | None = None,
    k: int | None = None,
    spines: int | None = None,
    leaves: int | None = None,
    hosts_per_leaf: int | None = None,
) -> TopologySpec:
    """Map CLI-style parameters onto a topology spec."""
    if kind == "linear":
        _need(hosts, "linear needs --hosts")
        return topo.Linear(hosts)
    if kind == "star":
        _need(hosts, "star needs --hosts")
        return topo.Star(hosts)
    if kind == "binary-tree":
        _need(hosts, "binary-tree needs --hosts")
        return topo.BinaryTree(hosts)
    if kind == "fat-tree":
        if k is None and hosts is not None:
            k = _fat_tree_k_for_hosts(hosts)
        _need(k, "fat-tree needs --k (even)")
        return topo.FatTree(k)
    if kind == "spine-leaf":
        if spines is None and hosts is not None:
            spines, leaves, hosts_per_leaf = _spine_leaf_dims_for_hosts(hosts)
        _need(spines, "spine-leaf needs --spine, --leaf and --hosts-per-leaf")
        _need(leaves, "spine-leaf needs --leaf")
        _need(hosts_per_leaf, "spine-leaf needs --hosts-per-leaf")
        return topo.SpineLeaf(spines, leaves, hosts_per_leaf)
    raise ConfigError(f"unknown topology kind: {kind}")


def _need(value, message: str) -> None:
    if value is None:
        raise ConfigError(message)


def _fat_tree_k_for_hosts(hosts: int) -> int:
    # hosts = k^3/4 for even k
    k = 2
    while k**3 // 4 < hosts:
        k += 2
    if k**3 // 4 != hosts:
        raise ConfigError(f"no even k gives a fat tree with {hosts} hosts")
    return k


def _spine_leaf_dims_for_hosts(hosts: int) -> tuple[int, int, int]:
    # Mirror the fat tree with the same host count: spines match its cores,
    # leaves match its edge switches, so hosts = (k^2/2) * (k/2) = k^3/4.
    k = _fat_tree_k_for_hosts(hosts)
    return (k * k // 4, k * k // 2, k // 2)
