"""
Telemetry Module
================

Run output: per-iteration trace records, the run summary and benchmark rows.

Usage:
    from thermosmc.telemetry import CsvTraceSink, read_trace

    with CsvTraceSink(Path("trace.csv")) as sink:
        sampler.run(10, sink)
    param_names, records = read_trace(Path("trace.csv"))

The benchmark sweep lives in ``thermosmc.telemetry.bench``.
"""

from .models import (
    BENCHMARK_COLUMNS,
    BenchmarkRow,
    RunSummary,
    TraceRecord,
)
from .store import (
    BASE_COLUMNS,
    CsvTraceSink,
    MemoryTraceSink,
    TraceSink,
    format_float,
    read_trace,
    trace_header,
    trace_row,
)

__all__ = [
    # Models
    "BENCHMARK_COLUMNS",
    "BenchmarkRow",
    "RunSummary",
    "TraceRecord",
    # Store
    "BASE_COLUMNS",
    "CsvTraceSink",
    "MemoryTraceSink",
    "TraceSink",
    "format_float",
    "read_trace",
    "trace_header",
    "trace_row",
]
