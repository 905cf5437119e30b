"""Builders for the five benchmark topologies, plus text and DOT inspection.

Hosts are named h1..hN and switches s1..sM, both numbered from 1 in
construction order. Host i owns MAC i (low 48 bits) and IP 10.0.0.i.
Host-facing ports are allocated before switch-to-switch ports; hosts expose a
single port 0 (`h1-eth0`), switch ports count from 1 (`s1-eth1`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

BROADCAST_MAC = (1 << 48) - 1


class BuildError(ValueError):
    """A topology parameter that violates a builder rule."""


def mac_str(mac: int) -> str:
    raw = f"{mac:012x}"
    return ":".join(raw[i : i + 2] for i in range(0, 12, 2))


def ip_str(ip: int) -> str:
    return ".".join(str((ip >> shift) & 0xFF) for shift in (24, 16, 8, 0))


def host_ip(i: int) -> int:
    # 10.0.0.i for the sweep sizes; indexes past 254 spill into the third octet.
    return (10 << 24) | ((i >> 8) << 8) | (i & 0xFF)


@dataclass(frozen=True)
class Linear:
    n_hosts: int


@dataclass(frozen=True)
class Star:
    n_hosts: int


@dataclass(frozen=True)
class BinaryTree:
    n_hosts: int


@dataclass(frozen=True)
class FatTree:
    k: int


@dataclass(frozen=True)
class SpineLeaf:
    spines: int
    leaves: int
    hosts_per_leaf: int


TopologySpec = Union[Linear, Star, BinaryTree, FatTree, SpineLeaf]

KIND_SLUGS = {
    Linear: "linear",
    Star: "star",
    BinaryTree: "binary-tree",
    FatTree: "fat-tree",
    SpineLeaf: "spine-leaf",
}

# Kinds that contain physical loops and need spanning-tree protection.
LOOPED_KINDS = (FatTree, SpineLeaf)


def spec_slug(spec: TopologySpec) -> str:
    return KIND_SLUGS[type(spec)]


@dataclass(frozen=True)
class HostSpec:
    id: int
    name: str
    mac: int
    ip: int


@dataclass(frozen=True)
class SwitchSpec:
    id: int
    name: str


@dataclass(frozen=True)
class LinkSpec:
    a_node: str
    a_port: int
    b_node: str
    b_port: int
    bandwidth_mbps: float
    delay_ms: float
    loss_rate: float


@dataclass
class NetworkModel:
    spec: TopologySpec
    hosts: list[HostSpec]
    switches: list[SwitchSpec]
    links: list[LinkSpec]
    ports: dict[str, list[int]] = field(default_factory=dict)

    @property
    def n_hosts(self) -> int:
        return len(self.hosts)

    @property
    def n_switches(self) -> int:
        return len(self.switches)

    def host_links(self) -> list[LinkSpec]:
        hostnames = {h.name for h in self.hosts}
        return [l for l in self.links if l.a_node in hostnames or l.b_node in hostnames]

    def switch_links(self) -> list[LinkSpec]:
        hostnames = {h.name for h in self.hosts}
        return [
            l for l in self.links if l.a_node not in hostnames and l.b_node not in hostnames
        ]

    def switch_edge_set(self) -> set[tuple[tuple[str, int], tuple[str, int]]]:
        """Switch-to-switch edges as normalized ((node, port), (node, port)) pairs."""
        edges = set()
        for l in self.switch_links():
            ends = sorted([(l.a_node, l.a_port), (l.b_node, l.b_port)])
            edges.add((ends[0], ends[1]))
        return edges


class _Builder:
    def __init__(self, spec: TopologySpec, bw: float, delay: float, loss: float):
        self.spec = spec
        self.bw = bw
        self.delay = delay
        self.loss = loss
        self.hosts: list[HostSpec] = []
        self.switches: list[SwitchSpec] = []
        self.links: list[LinkSpec] = []
        self.ports: dict[str, list[int]] = {}
        self._next_port: dict[str, int] = {}

    def add_host(self) -> HostSpec:
        i = len(self.hosts) + 1
        h = HostSpec(i, f"h{i}", i, host_ip(i))
        self.hosts.append(h)
        self.ports[h.name] = []
        self._next_port[h.name] = 0  # hosts expose eth0
        return h

    def add_switch(self) -> SwitchSpec:
        i = len(self.switches) + 1
        s = SwitchSpec(i, f"s{i}")
        self.switches.append(s)
        self.ports[s.name] = []
        self._next_port[s.name] = 1  # switch ports count from 1
        return s

    def link(self, a: str, b: str) -> None:
        pa = self._next_port[a]
        pb = self._next_port[b]
        self._next_port[a] = pa + 1
        self._next_port[b] = pb + 1
        self.ports[a].append(pa)
        self.ports[b].append(pb)
        self.links.append(LinkSpec(a, pa, b, pb, self.bw, self.delay, self.loss))

    def model(self) -> NetworkModel:
        return NetworkModel(self.spec, self.hosts, self.switches, self.links, self.ports)


def build(
    spec: TopologySpec,
    bandwidth_mbps: float = 100.0,
    delay_ms: float = 1.0,
    loss_rate: float = 0.0,
) -> NetworkModel:
    """Build the network model for `spec` with uniform link parameters."""
    b = _Builder(spec, bandwidth_mbps, delay_ms, loss_rate)
    if isinstance(spec, Linear):
        _build_linear(b, spec.n_hosts)
    elif isinstance(spec, Star):
        _build_star(b, spec.n_hosts)
    elif isinstance(spec, BinaryTree):
        _build_binary_tree(b, spec.n_hosts)
    elif isinstance(spec, FatTree):
        _build_fat_tree(b, spec.k)
    elif isinstance(spec, SpineLeaf):
        _build_spine_leaf(b, spec.spines, spec.leaves, spec.hosts_per_leaf)
    else:
        raise BuildError(f"unknown topology spec: {spec!r}")
    return b.model()


def _build_linear(b: _Builder, n: int) -> None:
    if n < 1:
        raise BuildError("linear topology needs n_hosts >= 1")
    hosts = [b.add_host() for _ in range(n)]
    switches = [b.add_switch() for _ in range(n)]
    for h, s in zip(hosts, switches):
        b.link(h.name, s.name)
    for left, right in zip(switches, switches[1:]):
        b.link(left.name, right.name)


def _build_star(b: _Builder, n: int) -> None:
    if n < 1:
        raise BuildError("star topology needs n_hosts >= 1")
    hosts = [b.add_host() for _ in range(n)]
    hub = b.add_switch()
    for h in hosts:
        b.link(h.name, hub.name)


def _build_binary_tree(b: _Builder, n: int) -> None:
    if n < 2 or n & (n - 1):
        raise BuildError("binary tree needs n_hosts a power of two >= 2")
    # n-1 switches in heap order (s1 root, s_i children s_2i and s_2i+1);
    # the n/2 deepest switches each carry two hosts.
    hosts = [b.add_host() for _ in range(n)]
    switches = [b.add_switch() for _ in range(n - 1)]
    leaves = switches[n // 2 - 1 :]
    for j, leaf in enumerate(leaves):
        b.link(hosts[2 * j].name, leaf.name)
        b.link(hosts[2 * j + 1].name, leaf.name)
    for i in range(2, n):
        b.link(switches[i // 2 - 1].name, switches[i - 1].name)


def _build_fat_tree(b: _Builder, k: int) -> None:
    if k < 2 or k % 2:
        raise BuildError("fat tree needs an even k >= 2")
    half = k // 2
    cores = [b.add_switch() for _ in range(half * half)]
    aggs = [[b.add_switch() for _ in range(half)] for _ in range(k)]
    edges = [[b.add_switch() for _ in range(half)] for _ in range(k)]
    # k^2/4 hosts per cluster: k/2 edge switches with k/2 hosts each.
    for cluster in range(k):
        for edge in edges[cluster]:
            for _ in range(half):
                h = b.add_host()
                b.link(h.name, edge.name)
    for cluster in range(k):
        for edge in edges[cluster]:
            for agg in aggs[cluster]:
                b.link(edge.name, agg.name)
    # Aggregation switch a (0-based) in every cluster owns cores [a*k/2, (a+1)*k/2).
    for cluster in range(k):
        for a, agg in enumerate(aggs[cluster]):
            for core in cores[a * half : (a + 1) * half]:
                b.link(agg.name, core.name)


def _build_spine_leaf(b: _Builder, spines: int, leaves: int, hosts_per_leaf: int) -> None:
    if spines < 1 or leaves < 1 or hosts_per_leaf < 1:
        raise BuildError("spine-leaf needs spines, leaves and hosts_per_leaf >= 1")
    spine_sw = [b.add_switch() for _ in range(spines)]
    leaf_sw = [b.add_switch() for _ in range(leaves)]
    for leaf in leaf_sw:
        for _ in range(hosts_per_leaf):
            h = b.add_host()
            b.link(h.name, leaf.name)
    for leaf in leaf_sw:
        for spine in spine_sw:
            b.link(leaf.name, spine.name)


def dump(model: NetworkModel) -> str:
    """One line per node, hosts first, in name order."""
    lines = []
    for h in model.hosts:
        lines.append(f"<Host {h.name}: ip={ip_str(h.ip)} mac={mac_str(h.mac)}>")
    for s in model.switches:
        ports = ", ".join(f"{s.name}-eth{p}" for p in model.ports[s.name])
        lines.append(f"<Switch {s.name}: ports=[{ports}]>")
    return "\n".join(lines)


def links(model: NetworkModel) -> str:
    """One line per link, host links first, then switch links."""
    lines = []
    for l in model.host_links() + model.switch_links():
        lines.append(
            f"{l.a_node}-eth{l.a_port}<->{l.b_node}-eth{l.b_port} "
            f"(bw={l.bandwidth_mbps}Mbps,delay={l.delay_ms}ms,loss={l.loss_rate})"
        )
    return "\n".join(lines)


def export_dot(model: NetworkModel) -> str:
    """Graphviz DOT text with hosts and switches visually distinguished."""
    lines = ["graph topology {"]
    for h in model.hosts:
        lines.append(f'  {h.name} [shape=ellipse,label="{h.name}\\n{ip_str(h.ip)}"];')
    for s in model.switches:
        lines.append(f'  {s.name} [shape=box,label="{s.name}"];')
    for l in model.links:
        lines.append(f"  {l.a_node} -- {l.b_node};")
    lines.append("}")
    return "\n".join(lines)
