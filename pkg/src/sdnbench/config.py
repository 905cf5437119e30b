"""Tunable parameters shared by the dataplane, control channel and traffic apps."""

from __future__ import annotations

from dataclasses import dataclass


class ConfigError(ValueError):
    """An experiment or topology configuration that cannot be run."""


@dataclass(frozen=True)
class NetKnobs:
    """Network and measurement parameters.

    Defaults model a 100 Mbps testbed with 1 ms links, a 10 ms one-way
    control channel and a 64-packet sender window.
    """

    link_bw_mbps: float = 100.0
    link_delay_ms: float = 1.0
    link_loss: float = 0.0
    control_latency_ms: float = 10.0
    switch_proc_ms: float = 0.05
    mtu_bytes: int = 1500
    window_packets: int = 64
    buffer_cap: int = 64
    storm_factor: int = 10
    stp_settle_ms: float = 1000.0
    discovery_wait_ms: float = 500.0
    arp_timeout_ms: float = 3000.0
    arp_retry_ms: float = 1000.0
    ping_arp_timeout_ms: float = 30000.0
    echo_timeout_ms: float = 3000.0
    ping_interval_ms: float = 1000.0

    def __post_init__(self) -> None:
        if self.link_bw_mbps <= 0:
            raise ConfigError("link bandwidth must be positive")
        if self.link_delay_ms < 0 or self.control_latency_ms < 0:
            raise ConfigError("latencies must be non-negative")
        if not 0.0 <= self.link_loss <= 1.0:
            raise ConfigError("link loss must be a probability")
        if self.window_packets < 1:
            raise ConfigError("sender window must hold at least one packet")
        if self.mtu_bytes < 64:
            raise ConfigError("mtu must be at least one minimum frame")
        if self.buffer_cap < 1 or self.storm_factor < 1:
            raise ConfigError("buffer cap and storm factor must be positive")
