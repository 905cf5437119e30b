"""Controller applications: plain learning switch and its spanning-tree variant."""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import ConfigError
from .control import FLOOD, Controller, MacEntry, Output, PacketIn
from .engine import SimTime
from .topology import BROADCAST_MAC


@dataclass
class SpanningTree:
    root: int
    parents: dict[int, tuple[int, int]]  # switch -> (parent switch, local port)
    tree_edges: set[tuple[tuple[int, int], tuple[int, int]]]
    port_roles: dict[tuple[int, int], bool]  # (switch, port) -> forwarding
    converged_at: SimTime

    def forwarding_edge_count(self) -> int:
        return len(self.tree_edges)

    def blocked_port_count(self) -> int:
        return sum(1 for fwd in self.port_roles.values() if not fwd)


def compute_spanning_tree(
    adjacency: dict[int, list[tuple[int, int, int]]], now: SimTime = 0.0
) -> SpanningTree:
    """BFS shortest-path tree rooted at the lowest switch id.

    Tie-break for a parent: lower neighbor id, then lower local port id.
    Ports on tree edges stay Forwarding (both ends); every other
    switch-to-switch port is Blocked. Raises ConfigError when the switch
    graph is disconnected.
    """
    switches = sorted(adjacency)
    root = switches[0]
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for sw in frontier:
            for _port, peer, _peer_port in sorted(adjacency[sw], key=lambda e: (e[1], e[0])):
                if peer not in dist:
                    dist[peer] = dist[sw] + 1
                    nxt.append(peer)
        frontier = sorted(set(nxt))
    missing = [sw for sw in switches if sw not in dist]
    if missing:
        raise ConfigError(f"switch graph is disconnected: no path from s{root} to s{missing[0]}")

    parents: dict[int, tuple[int, int]] = {}
    tree_edges: set[tuple[tuple[int, int], tuple[int, int]]] = set()
    for sw in switches:
        if sw == root:
            continue
        candidates = [
            (peer, local_port, peer_port)
            for local_port, peer, peer_port in adjacency[sw]
            if dist.get(peer) == dist[sw] - 1
        ]
        peer, local_port, peer_port = min(candidates)
        parents[sw] = (peer, local_port)
        ends = sorted([(sw, local_port), (peer, peer_port)])
        tree_edges.add((ends[0], ends[1]))

    port_roles: dict[tuple[int, int], bool] = {}
    for sw in switches:
        for local_port, peer, peer_port in adjacency[sw]:
            ends = sorted([(sw, local_port), (peer, peer_port)])
            port_roles[(sw, local_port)] = (ends[0], ends[1]) in tree_edges
    return SpanningTree(root, parents, tree_edges, port_roles, now)


class LearningSwitchApp:
    """Reactive MAC learning: learn source, forward known, flood unknown.

    Broadcast destinations always flood and never install flow entries.
    """

    name = "l2"
    uses_stp = False

    def start(self, ctl: Controller) -> None:
        pass

    def on_packet_in(self, ctl: Controller, pin: PacketIn) -> None:
        table = ctl.mac_table(pin.switch_id)
        table[pin.frame.src_mac] = MacEntry(pin.in_port, ctl.sim.now())
        dst = pin.frame.dst_mac
        if dst != BROADCAST_MAC and dst in table:
            port = table[dst].port
            ctl.send_flow_mod(pin.switch_id, dst, port)
            ctl.send_packet_out(pin.switch_id, pin.buffer_ref, Output(port))
        else:
            ctl.send_packet_out(pin.switch_id, pin.buffer_ref, FLOOD)


class StpLearningSwitchApp(LearningSwitchApp):
    """Learning switch over a centrally computed spanning tree.

    Discovery probes map the switch graph; ports off the tree are Blocked so
    floods stay loop-free. Learning is otherwise identical to plain l2.
    """

    name = "l2-stp"
    uses_stp = True

    def start(self, ctl: Controller) -> None:
        ctl.run_discovery(lambda: self._install_tree(ctl))

    def _install_tree(self, ctl: Controller) -> None:
        tree = compute_spanning_tree(ctl.adjacency, ctl.sim.now())
        ctl.tree = tree
        for (switch_id, port), forwarding in sorted(tree.port_roles.items()):
            ctl.send_port_mod(switch_id, port, forwarding)
        # PortMods land one channel latency later; then the tree is live.
        ctl.sim.schedule(ctl.channel.latency_ms, lambda: setattr(ctl, "stp_ready", True))

    def on_packet_in(self, ctl: Controller, pin: PacketIn) -> None:
        tree = ctl.tree
        if tree is not None and not tree.port_roles.get((pin.switch_id, pin.in_port), True):
            return  # frame arrived on a Blocked port: already dropped at the switch
        super().on_packet_in(ctl, pin)
