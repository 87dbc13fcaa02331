"""
Trace Store
===========

Sinks for TraceRecords and a reader for the CSV trace format.

CSV layout:
    iteration,e_min,ess,resampled,acceptance_rate,wall_ms,mean_<param>...

Floats are written with 17 significant digits, booleans as true/false. ``wall_ms`` is
0 unless wall time recording is on, so identical runs give identical files.
"""

import csv
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import IO, List, Optional, Sequence, Tuple

from thermosmc.core.errors import InvalidArgumentError

from .models import TraceRecord

logger = logging.getLogger(__name__)

BASE_COLUMNS = ("iteration", "e_min", "ess", "resampled", "acceptance_rate", "wall_ms")
MEAN_PREFIX = "mean_"


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def trace_header(param_names: Sequence[str]) -> List[str]:
    return list(BASE_COLUMNS) + [MEAN_PREFIX + name for name in param_names]


def trace_row(record: TraceRecord, record_wall_time: bool = False) -> List[str]:
    return [
        str(record.iteration),
        format_float(record.e_min),
        format_float(record.ess),
        "true" if record.resampled else "false",
        format_float(record.acceptance_rate),
        format_float(record.wall_ms) if record_wall_time else "0",
    ] + [format_float(v) for v in record.mean_params]


class TraceSink(ABC):
    """Destination for the per-iteration trace of a run."""

    @abstractmethod
    def open(self, param_names: Sequence[str]) -> None:
        """Start a trace for a model with these parameters."""
        pass

    @abstractmethod
    def write(self, record: TraceRecord) -> None:
        """Append one iteration."""
        pass

    def close(self) -> None:
        pass

    def __enter__(self) -> "TraceSink":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class MemoryTraceSink(TraceSink):
    """Keeps records in a list."""

    def __init__(self) -> None:
        self.param_names: List[str] = []
        self.records: List[TraceRecord] = []

    def open(self, param_names: Sequence[str]) -> None:
        self.param_names = list(param_names)
        self.records = []

    def write(self, record: TraceRecord) -> None:
        self.records.append(record)


class CsvTraceSink(TraceSink):
    """Streams records to a CSV file, one flushed row per iteration."""

    def __init__(self, path: Path, record_wall_time: bool = False):
        self.path = Path(path)
        self.record_wall_time = record_wall_time
        self._file: Optional[IO[str]] = None
        self._writer = None
        self._n_params = 0

    def open(self, param_names: Sequence[str]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, "w", newline="")
        self._writer = csv.writer(self._file, lineterminator="\n")
        self._writer.writerow(trace_header(param_names))
        self._n_params = len(param_names)
        logger.debug("Writing trace to %s", self.path)

    def write(self, record: TraceRecord) -> None:
        if self._writer is None:
            raise RuntimeError("trace sink is not open")
        if len(record.mean_params) != self._n_params:
            raise InvalidArgumentError(
                f"record has {len(record.mean_params)} means, header has {self._n_params}"
            )
        self._writer.writerow(trace_row(record, self.record_wall_time))
        self._file.flush()

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None
            self._writer = None


def _parse_bool(value: str) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise InvalidArgumentError(f"expected true/false, got {value!r}")


def read_trace(path: Path) -> Tuple[List[str], List[TraceRecord]]:
    """Read a CSV trace back into (param_names, records)."""
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise InvalidArgumentError(f"{path}: empty trace file")
    header = rows[0]
    if tuple(header[: len(BASE_COLUMNS)]) != BASE_COLUMNS:
        raise InvalidArgumentError(f"{path}: not a trace file (header {header[:6]!r})")
    mean_columns = header[len(BASE_COLUMNS):]
    if not all(c.startswith(MEAN_PREFIX) for c in mean_columns):
        raise InvalidArgumentError(f"{path}: unexpected columns after wall_ms")
    param_names = [c[len(MEAN_PREFIX):] for c in mean_columns]

    records = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InvalidArgumentError(f"{path}:{line_no}: expected {len(header)} fields, got {len(row)}")
        try:
            records.append(
                TraceRecord(
                    iteration=int(row[0]),
                    e_min=float(row[1]),
                    ess=float(row[2]),
                    resampled=_parse_bool(row[3]),
                    acceptance_rate=float(row[4]),
                    wall_time=float(row[5]) / 1000.0,
                    mean_params=tuple(float(v) for v in row[len(BASE_COLUMNS):]),
                )
            )
        except ValueError as e:
            raise InvalidArgumentError(f"{path}:{line_no}: {e}") from e
    return param_names, records
