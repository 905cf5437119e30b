"""Dataplane mechanics: link timing, queueing, loss, buffers, flooding, storms."""

import pytest

from sdnbench.config import NetKnobs
from sdnbench.control import FLOOD, Output
from sdnbench.dataplane import (
    BROADCAST_MAC,
    ArpReply,
    ArpRequest,
    DataSegment,
    Frame,
    FlowEntry,
    IcmpEchoReply,
    IcmpEchoRequest,
    Network,
    StormDetected,
)
from sdnbench.engine import Simulator
from sdnbench.topology import Linear, Star, build

import oracles


def make_net(spec, knobs=None, seed=0, loss=0.0):
    knobs = knobs or NetKnobs(link_loss=loss)
    sim = Simulator(seed)
    model = build(spec, knobs.link_bw_mbps, knobs.link_delay_ms, knobs.link_loss)
    return sim, Network(sim, model, knobs)


def wire_static_star2(net):
    """Install the two flow entries a warm star(2) would hold."""
    sw = net.switches["s1"]
    h1, h2 = net.hosts["h1"], net.hosts["h2"]
    port_of = {}
    for port, link in sw.ports.items():
        other = [n for n, _ in link.ends if n is not sw][0]
        port_of[other.name] = port
    sw.apply_flow_mod(FlowEntry(h1.mac, port_of["h1"], 0.0))
    sw.apply_flow_mod(FlowEntry(h2.mac, port_of["h2"], 0.0))
    return sw, h1, h2


def test_single_hop_delivery_time_matches_model():
    sim, net = make_net(Star(2))
    _, h1, h2 = wire_static_star2(net)
    arrivals = []
    h2.data_handler = lambda frame: arrivals.append(sim.now())
    h1.send(Frame(h1.mac, h2.mac, DataSegment(1, 0), 1500))
    sim.run()
    assert arrivals == [pytest.approx(oracles.one_way_ms(1, 1500, miss=False))]
    assert arrivals[0] == pytest.approx(2.34)


def test_back_to_back_frames_queue_behind_serialization():
    sim, net = make_net(Star(2))
    _, h1, h2 = wire_static_star2(net)
    arrivals = []
    h2.data_handler = lambda frame: arrivals.append(sim.now())
    for seq in range(3):
        h1.send(Frame(h1.mac, h2.mac, DataSegment(1, seq), 1500))
    sim.run()
    assert arrivals[0] == pytest.approx(2.34)
    # each later frame waits for the previous serialization slot (0.12 ms)
    assert arrivals[1] - arrivals[0] == pytest.approx(0.12)
    assert arrivals[2] - arrivals[1] == pytest.approx(0.12)


def test_opposite_directions_do_not_contend():
    sim, net = make_net(Star(2))
    _, h1, h2 = wire_static_star2(net)
    arrivals = {}
    h1.data_handler = lambda frame: arrivals.setdefault("h1", sim.now())
    h2.data_handler = lambda frame: arrivals.setdefault("h2", sim.now())
    h1.send(Frame(h1.mac, h2.mac, DataSegment(1, 0), 1500))
    h2.send(Frame(h2.mac, h1.mac, DataSegment(2, 0), 1500))
    sim.run()
    assert arrivals["h1"] == pytest.approx(2.34)
    assert arrivals["h2"] == pytest.approx(2.34)


def test_total_loss_drops_everything():
    sim, net = make_net(Star(2), loss=1.0)
    _, h1, h2 = wire_static_star2(net)
    got = []
    h2.data_handler = got.append
    h1.send(Frame(h1.mac, h2.mac, DataSegment(1, 0), 1500))
    sim.run()
    assert got == []
    assert net.counters.dropped_loss == 1
    assert net.counters.delivered == 0


def test_loss_outcome_is_seed_deterministic():
    def run(seed):
        sim, net = make_net(Star(2), loss=0.4, seed=seed)
        _, h1, h2 = wire_static_star2(net)
        for seq in range(50):
            h1.send(Frame(h1.mac, h2.mac, DataSegment(1, seq), 1500))
        sim.run()
        return net.counters.snapshot()

    a, b = run(11), run(11)
    assert a == b
    assert a["dropped_loss"] > 0
    assert run(12) != a


def test_reliable_transmit_ignores_loss():
    sim, net = make_net(Star(2), loss=1.0)
    sw = net.switches["s1"]
    seen = []
    sw.probe_sink = lambda switch, port, probe: seen.append((switch.name, port))
    for port in sorted(sw.ports):
        sw.emit_probe(port)
    sim.run()
    assert seen == []  # probes went toward the hosts, which filter them
    assert net.counters.dropped_loss == 0
    assert net.counters.delivered == 2


def test_miss_buffers_and_punts_once_per_frame():
    sim, net = make_net(Star(2))
    sw = net.switches["s1"]
    h1, h2 = net.hosts["h1"], net.hosts["h2"]
    punts = []
    sw.punt = lambda switch, in_port, frame, ref: punts.append(ref)
    h1.send(Frame(h1.mac, h2.mac, DataSegment(1, 0), 1500))
    sim.run()
    assert len(punts) == 1
    assert sw.packet_ins_sent == 1
    assert len(sw.pending) == 1


def test_buffer_overflow_drops_without_punt():
    knobs = NetKnobs()
    sim, net = make_net(Star(2), knobs=knobs)
    sw = net.switches["s1"]
    h1, h2 = net.hosts["h1"], net.hosts["h2"]
    sw.punt = lambda *a: None
    for seq in range(knobs.buffer_cap + 1):
        h1.send(Frame(h1.mac, h2.mac, DataSegment(1, seq), 1500))
    sim.run()
    assert len(sw.pending) == knobs.buffer_cap
    assert sw.packet_ins_sent == knobs.buffer_cap
    assert net.counters.dropped_buffer == 1


def test_packet_out_releases_buffered_frame():
    sim, net = make_net(Star(2))
    sw, h1, h2 = wire_static_star2(net)
    sw.flow_table.clear()
    releases = []
    h2.data_handler = lambda frame: releases.append(sim.now())

    def punt(switch, in_port, frame, ref):
        out = [p for p in switch.ports if p != in_port][0]
        switch.apply_packet_out(ref, Output(out))

    sw.punt = punt
    h1.send(Frame(h1.mac, h2.mac, DataSegment(1, 0), 1500))
    sim.run()
    assert len(releases) == 1
    assert not sw.pending


def test_stale_packet_out_is_counted_not_fatal():
    sim, net = make_net(Star(2))
    sw = net.switches["s1"]
    sw.apply_packet_out(999, FLOOD)
    assert net.counters.stale_packet_outs == 1


def test_flood_copies_to_all_other_forwarding_ports():
    sim, net = make_net(Star(4))
    sw = net.switches["s1"]
    h1 = net.hosts["h1"]
    copies = []
    net.on_transmit = lambda now, link, direction, frame: copies.append(link)
    sw.flood(Frame(h1.mac, BROADCAST_MAC, ArpRequest(h1.ip, 0), 64), exclude_port=1)
    assert len(copies) == 3


def test_flood_skips_blocked_ports():
    sim, net = make_net(Star(4))
    sw = net.switches["s1"]
    h1 = net.hosts["h1"]
    sw.apply_port_mod(3, False)
    copies = []
    net.on_transmit = lambda now, link, direction, frame: copies.append(link)
    sw.flood(Frame(h1.mac, BROADCAST_MAC, ArpRequest(h1.ip, 0), 64), exclude_port=1)
    assert len(copies) == 2


def test_blocked_ingress_drops_frames():
    sim, net = make_net(Star(2))
    sw, h1, h2 = wire_static_star2(net)
    for port, link in sw.ports.items():
        if any(n is net.hosts["h1"] for n, _ in link.ends):
            sw.apply_port_mod(port, False)
    got = []
    h2.data_handler = got.append
    h1.send(Frame(h1.mac, h2.mac, DataSegment(1, 0), 1500))
    sim.run()
    assert got == []
    assert net.counters.dropped_blocked == 1


def test_broadcast_copies_above_cap_raise_storm():
    sim, net = make_net(Star(2))
    h1 = net.hosts["h1"]
    cap = net.storm_cap
    assert cap == 30  # factor 10 * (2 hosts + 1 switch)
    with pytest.raises(StormDetected) as excinfo:
        for _ in range(cap + 1):
            h1.send(Frame(h1.mac, BROADCAST_MAC, ArpRequest(h1.ip, 0), 64))
    assert excinfo.value.in_flight == cap + 1
    assert excinfo.value.cap == cap


def test_unicast_burst_never_raises_storm():
    sim, net = make_net(Star(2))
    _, h1, h2 = wire_static_star2(net)
    for seq in range(net.storm_cap + 40):
        h1.send(Frame(h1.mac, h2.mac, DataSegment(1, seq), 1500))
    sim.run()
    assert net.counters.dropped_buffer == 0


def test_host_answers_arp_request_for_its_ip():
    sim, net = make_net(Star(2))
    sw, h1, h2 = wire_static_star2(net)

    def punt(switch, in_port, frame, ref):
        switch.apply_packet_out(ref, FLOOD)

    sw.punt = punt
    h1.send_arp_request(h2.ip)
    sim.run()
    assert h1.arp_cache[h2.ip] == h2.mac
    assert h2.arp_cache[h1.ip] == h1.mac  # learned from the request


def test_host_ignores_arp_request_for_other_ip():
    sim, net = make_net(Star(2))
    sw, h1, h2 = wire_static_star2(net)
    sw.punt = lambda switch, in_port, frame, ref: switch.apply_packet_out(ref, FLOOD)
    h1.send_arp_request(h2.ip + 1000)
    sim.run()
    assert h2.ip + 1000 not in h1.arp_cache


def test_host_echoes_request_with_same_seq_and_send_time():
    sim, net = make_net(Star(2))
    _, h1, h2 = wire_static_star2(net)
    replies = []
    h1.icmp_reply_handler = lambda frame: replies.append(frame.payload)
    h1.send(Frame(h1.mac, h2.mac, IcmpEchoRequest(7, 123.5), 64))
    sim.run()
    assert len(replies) == 1
    assert isinstance(replies[0], IcmpEchoReply)
    assert replies[0].seq == 7
    assert replies[0].send_time == 123.5


def test_arp_learn_wakes_waiters():
    sim, net = make_net(Star(2))
    _, h1, h2 = wire_static_star2(net)
    woken = []
    h1.arp_waiters.setdefault(h2.ip, []).append(woken.append)
    h1.send(Frame(h1.mac, h2.mac, DataSegment(1, 0), 64))  # no effect on ARP
    h1.learn(h2.ip, h2.mac)
    assert woken == [h2.mac]
    assert not h1.arp_waiters.get(h2.ip)


def test_frame_conservation_at_quiescence():
    """Every transmitted copy is accounted for once the network drains."""
    sim, net = make_net(Linear(4), loss=0.2, seed=3)
    for sw in net.switches.values():
        sw.punt = lambda switch, in_port, frame, ref: switch.apply_packet_out(ref, FLOOD)
    h1 = net.hosts["h1"]
    h1.send_arp_request(net.hosts["h4"].ip)
    for seq in range(10):
        h1.send(Frame(h1.mac, net.hosts["h4"].mac, DataSegment(1, seq), 1500))
    sim.run()
    c = net.counters
    assert c.in_flight == 0
    assert c.broadcast_in_flight == 0
    assert c.transmitted == (
        c.delivered + c.dropped_loss + c.dropped_buffer + c.dropped_blocked
    )
