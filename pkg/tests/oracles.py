"""Hand-derived closed-form expectations for the timing model.

Pure arithmetic, no simulator imports: these values were worked out on
paper before the engine existed and the tests freeze them. All times in
milliseconds unless noted.

Model recap:
  - serialization(B bytes) = B*8 / (bw_mbps * 1000)
  - each link traversal costs serialization + propagation delay
  - each switch traversal charges proc twice (ingress decision, egress send)
  - a flow-table miss inserts one controller round trip (2 * control
    latency) between the two charges
  - a host-to-host path through n switches crosses n+1 links
"""

ARP_BYTES = 64
ICMP_BYTES = 64
ACK_BYTES = 64
MTU_BYTES = 1500
WINDOW = 64

DEFAULT_BW = 100.0
DEFAULT_DELAY = 1.0
DEFAULT_PROC = 0.05
DEFAULT_LATENCY = 10.0


def serialization_ms(size_bytes: int, bw_mbps: float = DEFAULT_BW) -> float:
    return size_bytes * 8 / (bw_mbps * 1000.0)


def one_way_ms(
    n_switches: int,
    size_bytes: int,
    miss: bool,
    bw: float = DEFAULT_BW,
    delay: float = DEFAULT_DELAY,
    proc: float = DEFAULT_PROC,
    latency: float = DEFAULT_LATENCY,
) -> float:
    """Host-to-host latency across a chain of n switches.

    `miss=True` means every switch on the path takes a controller round
    trip before forwarding (first packet of a flow); `miss=False` means
    every switch already has the flow entry.
    """
    links = (n_switches + 1) * (serialization_ms(size_bytes, bw) + delay)
    per_switch = 2 * proc + (2 * latency if miss else 0.0)
    return links + n_switches * per_switch


def first_echo_rtt_ms(n_switches: int, **kw) -> float:
    """RTT of the first echo, measured after address resolution.

    The request misses at every switch (no flow for the target MAC yet);
    the reply hits everywhere (entries toward the source were installed
    while the resolution reply traversed the path).
    """
    return one_way_ms(n_switches, ICMP_BYTES, miss=True, **kw) + one_way_ms(
        n_switches, ICMP_BYTES, miss=False, **kw
    )


def steady_echo_rtt_ms(n_switches: int, **kw) -> float:
    """RTT once both directions hit the flow tables."""
    return 2 * one_way_ms(n_switches, ICMP_BYTES, miss=False, **kw)


def arp_complete_ms(n_switches: int, **kw) -> float:
    """Time from first resolution request to the reply landing.

    Both passes miss at every switch: the broadcast request never
    installs entries, and the unicast reply is the first frame toward
    the requester.
    """
    return 2 * one_way_ms(n_switches, ARP_BYTES, miss=True, **kw)


def stream_setup_ms(n_switches: int, **kw) -> float:
    """Time until the first full-size data packet lands at the server.

    Resolution (two miss passes) plus the first data packet's miss pass.
    """
    return arp_complete_ms(n_switches, **kw) + one_way_ms(
        n_switches, MTU_BYTES, miss=True, **kw
    )


def data_ack_rtt_ms(n_switches: int, **kw) -> float:
    """Steady data-out, ack-back round trip on a warm path."""
    return one_way_ms(n_switches, MTU_BYTES, miss=False, **kw) + one_way_ms(
        n_switches, ACK_BYTES, miss=False, **kw
    )


def window_limit_mbps(n_switches: int, bw: float = DEFAULT_BW, **kw) -> float:
    """Ack-clocked ceiling: min(line rate, window bits per round trip)."""
    rtt = data_ack_rtt_ms(n_switches, bw=bw, **kw)
    return min(bw, WINDOW * MTU_BYTES * 8 / (rtt * 1000.0))


# Frozen spot values (defaults: 100 Mbps, 1 ms delay, 0.05 ms proc, 10 ms
# control latency), kept as literals so a regression in the formulas above
# cannot silently track a regression in the simulator.
STAR2_FIRST_RTT_MS = 24.22048
STAR2_STEADY_RTT_MS = 4.22048
LINEAR128_FIRST_RTT_MS = 2844.92096
LINEAR128_ARP_MS_AT_75 = 38684.92096
LINEAR128_SETUP_MS_AT_75 = 58042.20096
SERIALIZATION_1500_MS = 0.12
SERIALIZATION_64_MS = 0.00512


def self_check() -> None:
    assert abs(serialization_ms(1500) - SERIALIZATION_1500_MS) < 1e-12
    assert abs(serialization_ms(64) - SERIALIZATION_64_MS) < 1e-12
    assert abs(first_echo_rtt_ms(1) - STAR2_FIRST_RTT_MS) < 1e-9
    assert abs(steady_echo_rtt_ms(1) - STAR2_STEADY_RTT_MS) < 1e-9
    assert abs(first_echo_rtt_ms(128) - LINEAR128_FIRST_RTT_MS) < 1e-9
    assert abs(arp_complete_ms(128, latency=75.0) - LINEAR128_ARP_MS_AT_75) < 1e-9
    assert abs(stream_setup_ms(128, latency=75.0) - LINEAR128_SETUP_MS_AT_75) < 1e-9


self_check()
