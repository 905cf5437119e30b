"""Measurement traffic driven over a live network: ARP, ping, windowed bandwidth.

Every public entry point here drives the simulation itself (to quiescence for
ping/ARP, to a fixed horizon for bandwidth) and returns a report, so callers
never touch the event loop directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dataplane import (
    ACK_SIZE,
    ICMP_SIZE,
    DataAck,
    DataSegment,
    Frame,
    Host,
    IcmpEchoReply,
    IcmpEchoRequest,
    Network,
    StormDetected,
)

STATUS_OK = "ok"
STATUS_NO_ROUTE = "no_route"
STATUS_STORM = "storm"


class NoRoute(RuntimeError):
    """Address resolution failed within its deadline."""


@dataclass
class PingReport:
    first_rtt_ms: float | None
    rtts_ms: list[float]
    losses: int
    status: str = STATUS_OK


@dataclass
class BandwidthReport:
    interval_s: tuple[float, float]
    transfer_bytes: int
    bandwidth_mbps: float
    status: str = STATUS_OK


def throughput_of(transfer_bytes: int, elapsed_s: float) -> float:
    """Mbit/s moved by `transfer_bytes` over `elapsed_s` seconds."""
    if elapsed_s <= 0:
        raise ValueError(f"elapsed time must be positive, got {elapsed_s}")
    return transfer_bytes * 8 / (elapsed_s * 1e6)


class _Resolver:
    """Retransmitting ARP query against one destination IP."""

    def __init__(self, net: Network, host: Host, target_ip: int, deadline_ms: float,
                 retry_ms: float, on_ok, on_fail):
        self.host = host
        self.target_ip = target_ip
        self.on_ok = on_ok
        self.on_fail = on_fail
        self.done = False
        self.timers = []
        cached = host.arp_cache.get(target_ip)
        if cached is not None:
            self.done = True
            on_ok(cached)  # cache hit: no frames, no delay
            return
        deadline_ms = max(deadline_ms, 0.0)
        host.arp_waiters.setdefault(target_ip, []).append(self._resolved)
        sim = net.sim
        t = 0.0
        while t < deadline_ms:
            self.timers.append(sim.schedule(t, self._send))
            t += retry_ms
        self.timers.append(sim.schedule(deadline_ms, self._expire))

    def _send(self) -> None:
        if not self.done:
            self.host.send_arp_request(self.target_ip)

    def _resolved(self, mac: int) -> None:
        if self.done:
            return
        self.done = True
        for timer in self.timers:
            timer.cancel()
        self.on_ok(mac)

    def _expire(self) -> None:
        if not self.done:
            self.done = True
            self.on_fail()


def arp_resolve(net: Network, src: str, dst: str, timeout_ms: float | None = None) -> int:
    """Resolve dst's IP from src; returns the MAC or raises NoRoute.

    The request is retransmitted every `arp_retry_ms` until `timeout_ms`
    (default from the knobs: 3000 ms).
    """
    knobs = net.knobs
    if timeout_ms is None:
        timeout_ms = knobs.arp_timeout_ms
    outcome: dict[str, object] = {"mac": None}
    _Resolver(
        net, net.host(src), net.host(dst).ip, timeout_ms, knobs.arp_retry_ms,
        lambda mac: outcome.__setitem__("mac", mac), lambda: None,
    )
    net.sim.run()
    if outcome["mac"] is None:
        raise NoRoute(f"no ARP reply for {dst} within {timeout_ms} ms")
    return outcome["mac"]  # type: ignore[return-value]


def ping(net: Network, src: str, dst: str, count: int = 10) -> PingReport:
    """One marked first echo plus `count` follow-ups at the ping interval.

    RTT is reply receipt minus request send. Each echo times out individually
    and counts as a loss; ARP failure loses everything. The ARP stage keeps
    retransmitting like a real ping (deadline `ping_arp_timeout_ms`).
    """
    knobs = net.knobs
    sim = net.sim
    src_host = net.host(src)
    dst_host = net.host(dst)
    sent: dict[int, float] = {}
    rtts: dict[int, float] = {}
    timeouts: dict[int, object] = {}
    lost: set[int] = set()
    state = {"status": STATUS_OK}

    def on_reply(frame: Frame) -> None:
        p = frame.payload
        if not isinstance(p, IcmpEchoReply) or p.seq in rtts or p.seq not in sent:
            return
        if p.seq in lost:
            return  # reply landed after its echo timeout
        assert p.send_time == sent[p.seq]  # echo carries the original fields
        rtts[p.seq] = sim.now() - p.send_time
        timer = timeouts.pop(p.seq, None)
        if timer:
            timer.cancel()

    def miss(seq: int) -> None:
        timeouts.pop(seq, None)
        if seq not in rtts:
            lost.add(seq)

    def send_echo(seq: int, dst_mac: int) -> None:
        now = sim.now()
        sent[seq] = now
        src_host.send(Frame(src_host.mac, dst_mac, IcmpEchoRequest(seq, now), ICMP_SIZE))
        timeouts[seq] = sim.schedule(knobs.echo_timeout_ms, lambda: miss(seq))

    def on_resolved(mac: int) -> None:
        for seq in range(count + 1):
            sim.schedule(seq * knobs.ping_interval_ms, lambda s=seq: send_echo(s, mac))

    def on_no_route() -> None:
        state["status"] = STATUS_NO_ROUTE

    src_host.icmp_reply_handler = on_reply
    _Resolver(
        net, src_host, dst_host.ip, knobs.ping_arp_timeout_ms, knobs.arp_retry_ms,
        on_resolved, on_no_route,
    )
    try:
        sim.run()
    except StormDetected:
        state["status"] = STATUS_STORM
    finally:
        src_host.icmp_reply_handler = None

    subsequent = [rtts[s] for s in sorted(rtts) if s > 0]
    losses = count - len(subsequent)  # invariant: received + lost = count
    return PingReport(
        first_rtt_ms=rtts.get(0),
        rtts_ms=subsequent,
        losses=losses,
        status=state["status"],
    )


def bandwidth_test(net: Network, client: str, server: str, duration_s: float) -> BandwidthReport:
    """Ack-clocked fixed-window transfer measured over [start, start+duration].

    The client resolves the server (retrying ARP until the horizon), then
    keeps `window_packets` MTU-sized frames outstanding; the server acks each
    frame with a 64 B ack and a new frame goes out per ack. Transfer counts
    payload bytes the server received inside the window, so setup dead time
    (ARP plus flow installation) drags the average down.
    """
    if duration_s <= 0:
        raise ValueError(f"duration must be positive, got {duration_s}")
    knobs = net.knobs
    sim = net.sim
    client_host = net.host(client)
    server_host = net.host(server)
    end_ms = sim.now() + duration_s * 1000.0
    state = {"mac": None, "received": 0, "outstanding": 0, "next_seq": 0, "storm": False}
    stream_id = 1

    def on_data(frame: Frame) -> None:
        p = frame.payload
        if not isinstance(p, DataSegment) or p.stream_id != stream_id:
            return
        state["received"] += frame.size_bytes
        server_host.send(
            Frame(server_host.mac, frame.src_mac, DataAck(p.stream_id, p.packet_seq), ACK_SIZE)
        )

    def pump() -> None:
        while state["outstanding"] < knobs.window_packets and sim.now() < end_ms:
            seq = state["next_seq"]
            state["next_seq"] = seq + 1
            state["outstanding"] += 1
            client_host.send(
                Frame(client_host.mac, state["mac"], DataSegment(stream_id, seq), knobs.mtu_bytes)
            )

    def on_ack(frame: Frame) -> None:
        p = frame.payload
        if not isinstance(p, DataAck) or p.stream_id != stream_id:
            return
        state["outstanding"] -= 1
        pump()

    server_host.data_handler = on_data
    client_host.ack_handler = on_ack
    _Resolver(
        net, client_host, server_host.ip, end_ms - sim.now(), knobs.arp_retry_ms,
        lambda mac: (state.__setitem__("mac", mac), pump()), lambda: None,
    )
    try:
        sim.run(until=end_ms)
    except StormDetected:
        state["storm"] = True
    finally:
        server_host.data_handler = None
        client_host.ack_handler = None

    if state["storm"]:
        status = STATUS_STORM
    elif state["mac"] is None:
        status = STATUS_NO_ROUTE
    else:
        status = STATUS_OK
    transfer = int(state["received"]) if status != STATUS_NO_ROUTE else 0
    return BandwidthReport(
        interval_s=(0.0, duration_s),
        transfer_bytes=transfer,
        bandwidth_mbps=throughput_of(transfer, duration_s),
        status=status,
    )
