"""Controller-to-switch messaging with symmetric latency, plus link discovery.

Messages are delivered exactly once after the configured one-way latency;
because every message in a direction carries the same latency and the event
queue breaks ties by insertion order, per-switch FIFO ordering holds by
construction (zero latency degenerates to same-timestamp FIFO).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .config import NetKnobs
from .dataplane import DiscoveryProbe, FlowEntry, Frame, Network, Switch
from .engine import SimTime, Simulator


@dataclass(frozen=True)
class Output:
    port: int


class _Flood:
    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "FLOOD"


FLOOD = _Flood()


@dataclass(frozen=True)
class PacketIn:
    switch_id: int
    in_port: int
    frame: Frame
    buffer_ref: int


@dataclass(frozen=True)
class SwitchFeatures:
    switch_id: int
    ports: tuple[int, ...]


@dataclass(frozen=True)
class ProbeReport:
    origin_switch: int
    origin_port: int
    seen_switch: int
    seen_port: int


@dataclass
class MacEntry:
    port: int
    learned_at: SimTime


class ControlChannel:
    """Schedules controller-bound and switch-bound deliveries."""

    def __init__(self, sim: Simulator, latency_ms: float):
        self.sim = sim
        self.latency_ms = latency_ms

    def deliver(self, action: Callable[[], None]) -> None:
        self.sim.schedule(self.latency_ms, action)


class Controller:
    """Central controller: learns topology and drives one app's policy.

    Controller compute takes zero simulated time; only channel latency costs.
    """

    def __init__(self, sim: Simulator, net: Network, app, knobs: NetKnobs):
        self.sim = sim
        self.net = net
        self.app = app
        self.knobs = knobs
        self.channel = ControlChannel(sim, knobs.control_latency_ms)
        self.mac_tables: dict[int, dict[int, MacEntry]] = {}
        self.switch_ports: dict[int, tuple[int, ...]] = {}
        self.adjacency: dict[int, list[tuple[int, int, int]]] = {}
        self.tree = None  # set by the STP app
        self.stp_ready = False
        self._discovery_cb: Optional[Callable[[], None]] = None
        self._switches_by_id: dict[int, Switch] = {}

    def start(self) -> None:
        for sw in self.net.switches.values():
            self._switches_by_id[sw.id] = sw
            self.mac_tables[sw.id] = {}
            self.adjacency[sw.id] = []
            sw.punt = self._punt
            sw.probe_sink = self._probe_seen
            features = SwitchFeatures(sw.id, tuple(sw.ports))
            self.channel.deliver(lambda msg=features: self._on_features(msg))
        self.app.start(self)

    # ---- switch-to-controller path

    def _punt(self, sw: Switch, in_port: int, frame: Frame, ref: int) -> None:
        msg = PacketIn(sw.id, in_port, frame, ref)
        self.channel.deliver(lambda: self.app.on_packet_in(self, msg))

    def _on_features(self, msg: SwitchFeatures) -> None:
        self.switch_ports[msg.switch_id] = msg.ports
        if self._discovery_cb and len(self.switch_ports) == len(self._switches_by_id):
            self._send_probes()

    def _probe_seen(self, sw: Switch, in_port: int, probe: DiscoveryProbe) -> None:
        report = ProbeReport(probe.origin_switch, probe.origin_port, sw.id, in_port)
        self.channel.deliver(lambda: self._on_probe_report(report))

    def _on_probe_report(self, r: ProbeReport) -> None:
        entry = (r.seen_port, r.origin_switch, r.origin_port)
        if entry not in self.adjacency[r.seen_switch]:
            self.adjacency[r.seen_switch].append(entry)

    # ---- controller-to-switch path

    def send_flow_mod(self, switch_id: int, dst_mac: int, out_port: int) -> None:
        sw = self._switches_by_id[switch_id]
        entry = FlowEntry(dst_mac, out_port, self.sim.now())
        self.channel.deliver(lambda: sw.apply_flow_mod(entry))

    def send_packet_out(self, switch_id: int, buffer_ref: int, action) -> None:
        sw = self._switches_by_id[switch_id]
        self.channel.deliver(lambda: sw.apply_packet_out(buffer_ref, action))

    def send_port_mod(self, switch_id: int, port: int, forwarding: bool) -> None:
        sw = self._switches_by_id[switch_id]
        self.channel.deliver(lambda: sw.apply_port_mod(port, forwarding))

    # ---- discovery

    def run_discovery(self, on_done: Callable[[], None]) -> None:
        """Probe every switch port; call `on_done` after the discovery window."""
        self._discovery_cb = on_done
        if len(self.switch_ports) == len(self._switches_by_id):
            self._send_probes()

    def _send_probes(self) -> None:
        for switch_id, ports in sorted(self.switch_ports.items()):
            sw = self._switches_by_id[switch_id]
            for port in ports:
                self.channel.deliver(lambda s=sw, p=port: s.emit_probe(p))
        cb = self._discovery_cb
        self._discovery_cb = None
        assert cb is not None
        # Wait out probe flight plus reporting before declaring the map complete.
        self.sim.schedule(self.knobs.discovery_wait_ms + self.channel.latency_ms, cb)

    def discovered_edges(self) -> set[tuple[tuple[int, int], tuple[int, int]]]:
        """Switch-to-switch edges as normalized ((id, port), (id, port)) pairs."""
        edges = set()
        for sw_id, entries in self.adjacency.items():
            for local_port, peer, peer_port in entries:
                ends = sorted([(sw_id, local_port), (peer, peer_port)])
                edges.add((ends[0], ends[1]))
        return edges

    def host_facing_ports(self) -> set[tuple[int, int]]:
        """Ports that never saw a probe: they face hosts."""
        seen = {(sw_id, port) for sw_id, entries in self.adjacency.items() for port, _, _ in entries}
        all_ports = {
            (sw_id, port) for sw_id, ports in self.switch_ports.items() for port in ports
        }
        return all_ports - seen

    def mac_table(self, switch_id: int) -> dict[int, MacEntry]:
        return self.mac_tables[switch_id]
