"""Chart rendering for sdnbench benchmark CSVs.

Reads the bandwidth and RTT CSV layouts written by the benchmark harness
and draws the standard chart families as PNG or SVG files. The CSV layout
is the whole interface; nothing here imports the simulator.
"""

from .figures import (
    AGGREGATE_TRIAL,
    BANDWIDTH_COLUMNS,
    RTT_COLUMNS,
    Family,
    FigureSpec,
    PlotError,
    build_figure,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "AGGREGATE_TRIAL",
    "BANDWIDTH_COLUMNS",
    "RTT_COLUMNS",
    "Family",
    "FigureSpec",
    "PlotError",
    "build_figure",
    "render",
    "__version__",
]
