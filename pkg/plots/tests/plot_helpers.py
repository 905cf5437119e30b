"""Builders for synthetic benchmark CSVs with known, hand-checkable shapes."""

from __future__ import annotations

import csv
from pathlib import Path

from sdnbench_plots import BANDWIDTH_COLUMNS, RTT_COLUMNS

DATA_DIR = Path(__file__).parent / "data"

_BANDWIDTH_DEFAULTS = {
    "topology": "linear",
    "controller_app": "l2",
    "hosts": "2",
    "switches": "2",
    "duration_s": "5.0",
    "trial": "avg",
    "transfer_bytes": "1000000",
    "bandwidth_mbps": "50.0",
    "throughput_mbps": "50.0",
    "status": "ok",
    "seed": "1",
}

_RTT_DEFAULTS = {
    "topology": "star",
    "controller_app": "l2",
    "hosts": "2",
    "switches": "1",
    "trial": "1",
    "seq": "1",
    "rtt_ms": "4.0",
    "is_first": "0",
    "seed": "1",
}


def bandwidth_row(**overrides) -> dict[str, str]:
    row = dict(_BANDWIDTH_DEFAULTS)
    row.update({key: str(value) for key, value in overrides.items()})
    return row


def rtt_row(**overrides) -> dict[str, str]:
    row = dict(_RTT_DEFAULTS)
    row.update({key: str(value) for key, value in overrides.items()})
    return row


def write_rows(path: Path, columns: list[str], rows: list[dict[str, str]]) -> Path:
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return path


SWEEP_HOSTS = [2, 4, 8, 16, 32, 64, 128]
SWEEP_DURATIONS = [float(d) for d in range(5, 120, 5)]


def sweep_bandwidth(hosts: int, duration: float) -> float:
    """Arbitrary but deterministic value for the synthetic duration sweep."""
    return round(200.0 / hosts + duration / 100.0, 4)


def linear_sweep_csv(path: Path) -> Path:
    """Full-size synthetic sweep: 7 host counts x 23 durations.

    Trial rows carry a decoy value so a figure that accidentally reads them
    instead of the aggregate rows produces visibly wrong numbers.
    """
    rows = []
    for hosts in SWEEP_HOSTS:
        for duration in SWEEP_DURATIONS:
            for trial in ("1", "2"):
                rows.append(
                    bandwidth_row(
                        hosts=hosts,
                        switches=hosts,
                        duration_s=duration,
                        trial=trial,
                        bandwidth_mbps=999.0,
                        throughput_mbps=999.0,
                    )
                )
            rows.append(
                bandwidth_row(
                    hosts=hosts,
                    switches=hosts,
                    duration_s=duration,
                    trial="avg",
                    bandwidth_mbps=sweep_bandwidth(hosts, duration),
                    throughput_mbps=sweep_bandwidth(hosts, duration),
                )
            )
    return write_rows(path, BANDWIDTH_COLUMNS, rows)


__all__ = [
    "BANDWIDTH_COLUMNS",
    "RTT_COLUMNS",
    "DATA_DIR",
    "SWEEP_DURATIONS",
    "SWEEP_HOSTS",
    "bandwidth_row",
    "linear_sweep_csv",
    "rtt_row",
    "sweep_bandwidth",
    "write_rows",
]
