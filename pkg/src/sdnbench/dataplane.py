"""Hosts, switches and links with store-and-forward timing, loss and flooding.

Frames move link by link: each transmission serializes FIFO per link
direction (size*8 / bandwidth), then propagates for the link delay. Switches
charge a processing delay twice per traversal, once before the forwarding
decision and once before the outbound transmission; on a table miss the
controller round trip slots in between. A cap on in-flight broadcast copies
turns runaway flooding into a StormDetected error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .config import NetKnobs
from .engine import SimTime, Simulator
from .topology import BROADCAST_MAC, HostSpec, LinkSpec, NetworkModel, SwitchSpec

ARP_SIZE = 64
ICMP_SIZE = 64
ACK_SIZE = 64
PROBE_SIZE = 64

# Discovery probes carry a null destination so host NICs drop them silently.
PROBE_MAC = 0


class StormDetected(RuntimeError):
    """Broadcast copies in flight exceeded the storm cap."""

    def __init__(self, in_flight: int, cap: int, at: SimTime):
        super().__init__(f"broadcast storm: {in_flight} copies in flight (cap {cap}) at t={at:.3f}ms")
        self.in_flight = in_flight
        self.cap = cap
        self.at = at


@dataclass(frozen=True)
class ArpRequest:
    sender_ip: int
    target_ip: int


@dataclass(frozen=True)
class ArpReply:
    sender_ip: int


@dataclass(frozen=True)
class IcmpEchoRequest:
    seq: int
    send_time: SimTime


@dataclass(frozen=True)
class IcmpEchoReply:
    seq: int
    send_time: SimTime


@dataclass(frozen=True)
class DataSegment:
    stream_id: int
    packet_seq: int


@dataclass(frozen=True)
class DataAck:
    stream_id: int
    packet_seq: int


@dataclass(frozen=True)
class DiscoveryProbe:
    origin_switch: int
    origin_port: int


@dataclass(frozen=True)
class Frame:
    src_mac: int
    dst_mac: int
    payload: object
    size_bytes: int


@dataclass(frozen=True)
class FlowEntry:
    match_dst_mac: int
    out_port: int
    installed_at: SimTime


@dataclass
class Counters:
    transmitted: int = 0
    delivered: int = 0
    dropped_loss: int = 0
    dropped_buffer: int = 0
    dropped_blocked: int = 0
    stale_packet_outs: int = 0
    in_flight: int = 0
    broadcast_in_flight: int = 0

    def snapshot(self) -> dict[str, int]:
        return {
            "transmitted": self.transmitted,
            "delivered": self.delivered,
            "dropped_loss": self.dropped_loss,
            "dropped_buffer": self.dropped_buffer,
            "dropped_blocked": self.dropped_blocked,
            "stale_packet_outs": self.stale_packet_outs,
            "in_flight": self.in_flight,
            "broadcast_in_flight": self.broadcast_in_flight,
        }


class LinkRuntime:
    """A full-duplex link; each direction serializes frames FIFO."""

    __slots__ = ("spec", "ends", "busy_until")

    def __init__(self, spec: LinkSpec, end_a: tuple, end_b: tuple):
        self.spec = spec
        self.ends = (end_a, end_b)  # ((node, port), (node, port))
        self.busy_until = [0.0, 0.0]

    def serialization_ms(self, size_bytes: int) -> float:
        return size_bytes * 8 / (self.spec.bandwidth_mbps * 1e3)


class Host:
    """End host: single port, ARP cache, protocol upcalls for traffic apps."""

    def __init__(self, sim: Simulator, net: "Network", spec: HostSpec):
        self.sim = sim
        self.net = net
        self.spec = spec
        self.mac = spec.mac
        self.ip = spec.ip
        self.name = spec.name
        self.link: LinkRuntime | None = None
        self.arp_cache: dict[int, int] = {}
        self.arp_waiters: dict[int, list[Callable[[int], None]]] = {}
        self.icmp_reply_handler: Optional[Callable[[Frame], None]] = None
        self.data_handler: Optional[Callable[[Frame], None]] = None
        self.ack_handler: Optional[Callable[[Frame], None]] = None

    def send(self, frame: Frame) -> None:
        assert self.link is not None
        self.net.transmit(self.link, self, frame)

    def send_arp_request(self, target_ip: int) -> None:
        self.send(Frame(self.mac, BROADCAST_MAC, ArpRequest(self.ip, target_ip), ARP_SIZE))

    def receive(self, in_port: int, frame: Frame) -> None:
        self.net.counters.delivered += 1
        if frame.dst_mac not in (self.mac, BROADCAST_MAC):
            return  # NIC filter: not ours
        p = frame.payload
        if isinstance(p, ArpRequest):
            if p.target_ip == self.ip:
                self.learn(p.sender_ip, frame.src_mac)
                self.send(Frame(self.mac, frame.src_mac, ArpReply(self.ip), ARP_SIZE))
        elif isinstance(p, ArpReply):
            self.learn(p.sender_ip, frame.src_mac)
        elif isinstance(p, IcmpEchoRequest):
            self.send(
                Frame(self.mac, frame.src_mac, IcmpEchoReply(p.seq, p.send_time), ICMP_SIZE)
            )
        elif isinstance(p, IcmpEchoReply):
            if self.icmp_reply_handler:
                self.icmp_reply_handler(frame)
        elif isinstance(p, DataSegment):
            if self.data_handler:
                self.data_handler(frame)
        elif isinstance(p, DataAck):
            if self.ack_handler:
                self.ack_handler(frame)
        # DiscoveryProbe and anything else: silently ignored by hosts.

    def learn(self, ip: int, mac: int) -> None:
        self.arp_cache[ip] = mac
        for waiter in self.arp_waiters.pop(ip, []):
            waiter(mac)


class Switch:
    """MAC-learning dataplane: flow table, pending buffer, flood, port states."""

    def __init__(self, sim: Simulator, net: "Network", spec: SwitchSpec, knobs: NetKnobs):
        self.sim = sim
        self.net = net
        self.spec = spec
        self.id = spec.id
        self.name = spec.name
        self.proc_ms = knobs.switch_proc_ms
        self.buffer_cap = knobs.buffer_cap
        self.ports: dict[int, LinkRuntime] = {}
        self.forwarding: dict[int, bool] = {}  # all ports default Forwarding
        self.flow_table: dict[int, FlowEntry] = {}
        self.pending: dict[int, tuple[Frame, int]] = {}
        self._next_ref = 0
        self.packet_ins_sent = 0
        # Wired by the controller: punt(switch, in_port, frame, buffer_ref).
        self.punt: Optional[Callable[["Switch", int, Frame, int], None]] = None
        self.probe_sink: Optional[Callable[["Switch", int, DiscoveryProbe], None]] = None

    def receive(self, in_port: int, frame: Frame) -> None:
        if isinstance(frame.payload, DiscoveryProbe):
            # Probes bypass port state and the flow table.
            self.net.counters.delivered += 1
            if self.probe_sink:
                self.probe_sink(self, in_port, frame.payload)
            return
        if not self.forwarding.get(in_port, True):
            self.net.counters.dropped_blocked += 1
            return
        self.net.counters.delivered += 1
        self.sim.schedule(self.proc_ms, lambda: self._decide(in_port, frame))

    def _decide(self, in_port: int, frame: Frame) -> None:
        entry = self.flow_table.get(frame.dst_mac)
        if entry is not None:
            out_port = entry.out_port
            self.sim.schedule(self.proc_ms, lambda: self._transmit(out_port, frame))
            return
        if len(self.pending) >= self.buffer_cap:
            # Dropped before the punt: no PacketIn for this frame.
            self.net.counters.delivered -= 1
            self.net.counters.dropped_buffer += 1
            return
        ref = self._next_ref
        self._next_ref += 1
        self.pending[ref] = (frame, in_port)
        self.packet_ins_sent += 1
        if self.punt:
            self.punt(self, in_port, frame, ref)

    def apply_flow_mod(self, entry: FlowEntry) -> None:
        self.flow_table[entry.match_dst_mac] = FlowEntry(
            entry.match_dst_mac, entry.out_port, self.sim.now()
        )

    def apply_packet_out(self, buffer_ref: int, action: object) -> None:
        held = self.pending.pop(buffer_ref, None)
        if held is None:
            self.net.counters.stale_packet_outs += 1
            return
        frame, in_port = held
        from .control import FLOOD, Output  # local import avoids a cycle

        if isinstance(action, Output):
            port = action.port
            self.sim.schedule(self.proc_ms, lambda: self._transmit(port, frame))
        elif action is FLOOD:
            self.sim.schedule(self.proc_ms, lambda: self.flood(frame, in_port))
        else:
            raise ValueError(f"unknown packet-out action: {action!r}")

    def apply_port_mod(self, port: int, forwarding: bool) -> None:
        self.forwarding[port] = forwarding

    def flood(self, frame: Frame, exclude_port: int) -> None:
        """Copy the frame to every Forwarding port except the one it came in on."""
        for port in self.ports:
            if port != exclude_port and self.forwarding.get(port, True):
                self._transmit(port, frame)

    def emit_probe(self, port: int) -> None:
        link = self.ports.get(port)
        if link is None:
            return
        probe = Frame(PROBE_MAC, PROBE_MAC, DiscoveryProbe(self.id, port), PROBE_SIZE)
        self.net.transmit(link, self, probe, reliable=True)

    def _transmit(self, port: int, frame: Frame) -> None:
        self.net.transmit(self.ports[port], self, frame)


class Network:
    """Runtime network: wires the model into live hosts, switches and links."""

    def __init__(self, sim: Simulator, model: NetworkModel, knobs: NetKnobs):
        self.sim = sim
        self.model = model
        self.knobs = knobs
        self.counters = Counters()
        self.storm_cap = knobs.storm_factor * (model.n_hosts + model.n_switches)
        self.hosts: dict[str, Host] = {h.name: Host(sim, self, h) for h in model.hosts}
        self.switches: dict[str, Switch] = {
            s.name: Switch(sim, self, s, knobs) for s in model.switches
        }
        self.links: list[LinkRuntime] = []
        # Optional observer for tests: fn(now, link, direction, frame).
        self.on_transmit: Optional[Callable[[SimTime, LinkRuntime, int, Frame], None]] = None
        for spec in model.links:
            a = self._node(spec.a_node)
            b = self._node(spec.b_node)
            link = LinkRuntime(spec, (a, spec.a_port), (b, spec.b_port))
            self.links.append(link)
            for node, port in link.ends:
                if isinstance(node, Switch):
                    node.ports[port] = link
                    node.forwarding.setdefault(port, True)
                else:
                    node.link = link

    def _node(self, name: str):
        return self.hosts.get(name) or self.switches[name]

    def host(self, name: str) -> Host:
        return self.hosts[name]

    def transmit(self, link: LinkRuntime, from_node, frame: Frame, reliable: bool = False) -> None:
        c = self.counters
        c.transmitted += 1
        c.in_flight += 1
        broadcast = frame.dst_mac == BROADCAST_MAC
        if broadcast:
            c.broadcast_in_flight += 1
            if c.broadcast_in_flight > self.storm_cap:
                raise StormDetected(c.broadcast_in_flight, self.storm_cap, self.sim.now())
        direction = 0 if from_node is link.ends[0][0] else 1
        if self.on_transmit:
            self.on_transmit(self.sim.now(), link, direction, frame)
        now = self.sim.now()
        start = max(now, link.busy_until[direction])
        done = start + link.serialization_ms(frame.size_bytes)
        link.busy_until[direction] = done
        lost = (
            not reliable
            and link.spec.loss_rate > 0
            and self.sim.rng.random() < link.spec.loss_rate
        )
        target, target_port = link.ends[1 - direction]

        def arrive() -> None:
            c.in_flight -= 1
            if broadcast:
                c.broadcast_in_flight -= 1
            if lost:
                c.dropped_loss += 1
                return
            target.receive(target_port, frame)

        self.sim.schedule(done + link.spec.delay_ms - now, arrive)

    def packet_in_counts(self) -> dict[str, int]:
        return {name: sw.packet_ins_sent for name, sw in self.switches.items()}
