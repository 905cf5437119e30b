"""Deterministic packet-level SDN simulator and benchmark harness."""

from .config import ConfigError, NetKnobs
from .control import Controller, ControlChannel, FLOOD, Output, PacketIn
from .dataplane import Frame, Network, StormDetected
from .engine import EventHandle, Simulator
from .harness import (
    BandwidthRecord,
    ExperimentConfig,
    Instance,
    RttRecord,
    run_experiment,
    run_matrix,
    spec_for,
    write_csv,
)
from .apps import (
    LearningSwitchApp,
    SpanningTree,
    StpLearningSwitchApp,
    compute_spanning_tree,
)
from .topology import (
    BinaryTree,
    BuildError,
    FatTree,
    Linear,
    NetworkModel,
    SpineLeaf,
    Star,
    build,
    spec_slug,
)
from .traffic import (
    BandwidthReport,
    NoRoute,
    PingReport,
    arp_resolve,
    bandwidth_test,
    ping,
    throughput_of,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthRecord",
    "BandwidthReport",
    "BinaryTree",
    "BuildError",
    "ConfigError",
    "ControlChannel",
    "Controller",
    "EventHandle",
    "ExperimentConfig",
    "FLOOD",
    "FatTree",
    "Frame",
    "Instance",
    "LearningSwitchApp",
    "Linear",
    "NetKnobs",
    "Network",
    "NetworkModel",
    "NoRoute",
    "Output",
    "PacketIn",
    "PingReport",
    "RttRecord",
    "Simulator",
    "SpanningTree",
    "SpineLeaf",
    "Star",
    "StormDetected",
    "StpLearningSwitchApp",
    "arp_resolve",
    "bandwidth_test",
    "build",
    "compute_spanning_tree",
    "ping",
    "run_experiment",
    "run_matrix",
    "spec_for",
    "spec_slug",
    "throughput_of",
    "write_csv",
]
