"""Figure construction from benchmark CSVs.

This package deliberately knows nothing about the simulator. Its only
contract with the benchmark harness is the pair of CSV layouts written by
``sdnbench run``/``sdnbench sweep``, restated here verbatim. Every figure is
built from plain rows; rendering never touches the input files beyond
reading them.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from statistics import fmean

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "sdnbench-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


class PlotError(Exception):
    """A figure cannot be produced from the given inputs."""


class Family(str, Enum):
    """The four chart families the renderer knows how to draw."""

    BW_VS_T = "bw_vs_t"
    TOPO_COMPARE = "topo_compare"
    RTT_BARS = "rtt_bars"
    RTT_COMPARE = "rtt_compare"


#: Columns written by the harness for bandwidth runs.
BANDWIDTH_COLUMNS = [
    "topology",
    "controller_app",
    "hosts",
    "switches",
    "duration_s",
    "trial",
    "transfer_bytes",
    "bandwidth_mbps",
    "throughput_mbps",
    "status",
    "seed",
]

#: Columns written by the harness for RTT runs.
RTT_COLUMNS = [
    "topology",
    "controller_app",
    "hosts",
    "switches",
    "trial",
    "seq",
    "rtt_ms",
    "is_first",
    "seed",
]

#: The trial value marking a per-configuration mean row.
AGGREGATE_TRIAL = "avg"

#: Columns each family actually reads; all must be present in every input.
_REQUIRED_COLUMNS = {
    Family.BW_VS_T: ("topology", "hosts", "duration_s", "trial", "bandwidth_mbps"),
    Family.TOPO_COMPARE: ("topology", "hosts", "duration_s", "trial", "bandwidth_mbps"),
    Family.RTT_BARS: ("topology", "hosts", "trial", "rtt_ms", "is_first"),
    Family.RTT_COMPARE: ("topology", "hosts", "trial", "rtt_ms", "is_first"),
}

_IMAGE_SUFFIXES = (".png", ".svg")


@dataclass(frozen=True)
class FigureSpec:
    """One figure to draw: a family, its input CSVs, filters, and a target.

    ``topology`` and ``hosts`` narrow the CSV rows before plotting; a filter
    that matches nothing is an error, not an empty chart.
    """

    family: Family
    csv_paths: tuple[Path, ...]
    out_path: Path
    topology: str | None = None
    hosts: int | None = None

    def validate(self) -> None:
        if not self.csv_paths:
            raise PlotError("no input csv given")
        suffix = self.out_path.suffix.lower()
        if suffix not in _IMAGE_SUFFIXES:
            raise PlotError(
                f"unsupported image format {suffix or '(none)'!r}; use .png or .svg"
            )


def _load(spec: FigureSpec) -> list[dict[str, str]]:
    """Read every input CSV, insisting on the columns the family needs."""
    required = _REQUIRED_COLUMNS[spec.family]
    rows: list[dict[str, str]] = []
    for path in spec.csv_paths:
        if not path.is_file():
            raise PlotError(f"csv not found: {path}")
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise PlotError(f"{path} is empty")
            missing = [c for c in required if c not in reader.fieldnames]
            if missing:
                raise PlotError(f"{path} is missing column(s): {', '.join(missing)}")
            rows.extend(reader)
    return rows


def _select(rows: list[dict[str, str]], spec: FigureSpec) -> list[dict[str, str]]:
    selected = rows
    if spec.topology is not None:
        selected = [r for r in selected if r["topology"] == spec.topology]
    if spec.hosts is not None:
        selected = [r for r in selected if r["hosts"] == str(spec.hosts)]
    if not selected:
        filters = []
        if spec.topology is not None:
            filters.append(f"topology={spec.topology}")
        if spec.hosts is not None:
            filters.append(f"hosts={spec.hosts}")
        detail = f" matching {', '.join(filters)}" if filters else ""
        raise PlotError(f"selection is empty: no rows{detail}")
    return selected


def _single_topology(rows: list[dict[str, str]], family: Family) -> str:
    topologies = sorted({r["topology"] for r in rows})
    if len(topologies) > 1:
        raise PlotError(
            f"{family.value} draws one topology at a time, selection has "
            f"{', '.join(topologies)}; narrow with --topology"
        )
    return topologies[0]


def _bandwidth_series(rows: list[dict[str, str]]) -> list[dict[str, str]]:
    """Aggregate (mean) rows only; trial rows would overplot the same point."""
    aggregate = [r for r in rows if r["trial"] == AGGREGATE_TRIAL]
    if not aggregate:
        raise PlotError(f"selection has no aggregate rows (trial={AGGREGATE_TRIAL})")
    return aggregate


def _build_bw_vs_t(ax, rows: list[dict[str, str]], spec: FigureSpec) -> None:
    topology = _single_topology(rows, spec.family)
    series: dict[int, dict[float, float]] = defaultdict(dict)
    for r in _bandwidth_series(rows):
        series[int(r["hosts"])][float(r["duration_s"])] = float(r["bandwidth_mbps"])
    for hosts in sorted(series):
        points = sorted(series[hosts].items())
        ax.plot(
            [d for d, _ in points],
            [b for _, b in points],
            marker="o",
            label=f"{hosts} hosts",
        )
    ax.set_xlabel("duration t (s)")
    ax.set_ylabel("bandwidth (Mbps)")
    ax.set_title(f"{topology}: bandwidth over the measurement window")
    ax.legend()


def _build_topo_compare(ax, rows: list[dict[str, str]], spec: FigureSpec) -> None:
    aggregate = _bandwidth_series(rows)
    host_counts = sorted({int(r["hosts"]) for r in aggregate})
    if len(host_counts) > 1:
        raise PlotError(
            f"{spec.family.value} compares topologies at a fixed host count, "
            f"selection has {host_counts}; narrow with --hosts"
        )
    series: dict[str, dict[float, float]] = defaultdict(dict)
    for r in aggregate:
        series[r["topology"]][float(r["duration_s"])] = float(r["bandwidth_mbps"])
    for topology in sorted(series):
        points = sorted(series[topology].items())
        ax.plot(
            [d for d, _ in points],
            [b for _, b in points],
            marker="o",
            label=topology,
        )
    ax.set_xlabel("duration t (s)")
    ax.set_ylabel("bandwidth (Mbps)")
    ax.set_title(f"bandwidth by topology at {host_counts[0]} hosts")
    ax.legend()


def _echo_samples(
    rows: list[dict[str, str]],
) -> tuple[dict[tuple[str, int], list[float]], dict[tuple[str, int], list[float]]]:
    """Split trial rows into first-echo and subsequent-echo samples."""
    firsts: dict[tuple[str, int], list[float]] = defaultdict(list)
    subsequents: dict[tuple[str, int], list[float]] = defaultdict(list)
    for r in rows:
        if r["trial"] == AGGREGATE_TRIAL:
            continue
        key = (r["topology"], int(r["hosts"]))
        bucket = firsts if r["is_first"] == "1" else subsequents
        bucket[key].append(float(r["rtt_ms"]))
    return firsts, subsequents


def _build_rtt_bars(ax, rows: list[dict[str, str]], spec: FigureSpec) -> None:
    topology = _single_topology(rows, spec.family)
    firsts, subsequents = _echo_samples(rows)
    host_counts = sorted(h for _, h in subsequents)
    if not host_counts:
        raise PlotError("selection has no subsequent-echo rows")
    if not firsts:
        raise PlotError("selection has no first-echo rows")
    positions = range(len(host_counts))
    width = 0.25
    samples = [subsequents[(topology, h)] for h in host_counts]
    ax.bar(
        [i - width for i in positions],
        [min(s) for s in samples],
        width,
        label="min (subsequent)",
    )
    ax.bar(
        list(positions),
        [fmean(s) for s in samples],
        width,
        label="avg (subsequent)",
    )
    ax.bar(
        [i + width for i in positions],
        [max(s) for s in samples],
        width,
        label="max (subsequent)",
    )
    first_points = [
        (i, fmean(firsts[(topology, h)]))
        for i, h in enumerate(host_counts)
        if (topology, h) in firsts
    ]
    ax.plot(
        [i for i, _ in first_points],
        [v for _, v in first_points],
        marker="D",
        linestyle="--",
        color="black",
        zorder=3,
        label="first echo",
    )
    ax.set_xticks(list(positions), [str(h) for h in host_counts])
    ax.set_xlabel("hosts")
    ax.set_ylabel("RTT (ms)")
    ax.set_title(f"{topology}: echo RTT by network size")
    ax.legend()


def _build_rtt_compare(ax, rows: list[dict[str, str]], spec: FigureSpec) -> None:
    _, subsequents = _echo_samples(rows)
    if not subsequents:
        raise PlotError("selection has no subsequent-echo rows")
    topologies = sorted({t for t, _ in subsequents})
    host_counts = sorted({h for _, h in subsequents})
    group_width = 0.8
    width = group_width / len(topologies)
    for index, topology in enumerate(topologies):
        offset = (index - (len(topologies) - 1) / 2) * width
        points = [
            (i + offset, fmean(subsequents[(topology, h)]))
            for i, h in enumerate(host_counts)
            if (topology, h) in subsequents
        ]
        ax.bar(
            [x for x, _ in points],
            [v for _, v in points],
            width,
            label=topology,
        )
    ax.set_xticks(range(len(host_counts)), [str(h) for h in host_counts])
    ax.set_xlabel("hosts")
    ax.set_ylabel("mean RTT of subsequent echoes (ms)")
    ax.set_title("steady-state RTT by topology")
    ax.legend()


_BUILDERS = {
    Family.BW_VS_T: _build_bw_vs_t,
    Family.TOPO_COMPARE: _build_topo_compare,
    Family.RTT_BARS: _build_rtt_bars,
    Family.RTT_COMPARE: _build_rtt_compare,
}


def build_figure(spec: FigureSpec):
    """Validate, load, filter, and draw; returns the matplotlib Figure.

    Raises PlotError before anything is drawn if the inputs cannot support
    the requested family, so callers can guarantee no output file appears
    on failure.
    """
    spec.validate()
    rows = _select(_load(spec), spec)
    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    try:
        _BUILDERS[spec.family](ax, rows, spec)
        ax.grid(True, linewidth=0.3, alpha=0.5)
        fig.tight_layout()
    except Exception:
        plt.close(fig)
        raise
    return fig


def render(spec: FigureSpec) -> Path:
    """Draw the figure and write it to ``spec.out_path``.

    The file is created only after every check has passed; a PlotError
    leaves the filesystem untouched.
    """
    fig = build_figure(spec)
    try:
        save_args = {}
        if spec.out_path.suffix.lower() == ".svg":
            save_args["metadata"] = {"Date": None}
        fig.savefig(spec.out_path, dpi=120, **save_args)
    finally:
        plt.close(fig)
    return spec.out_path
