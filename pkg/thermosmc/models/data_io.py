"""
Data Files
==========

Plain comma-separated formats for model observations.

Coin toss (one record):
    N,K1,K2

IRT 2PL (header then one row per person):
    P,I
    y_00,y_01,...,y_0(I-1)
    ...

Blank lines and lines starting with '#' are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import List

import numpy as np

from thermosmc.core.errors import InvalidArgumentError
from thermosmc.models.coin_toss import CoinTossData
from thermosmc.models.irt import IrtData


def _records(path: Path) -> List[List[str]]:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([field.strip() for field in line.split(",")])
    return rows


def _ints(fields: List[str], where: str) -> List[int]:
    try:
        return [int(f) for f in fields]
    except ValueError as e:
        raise InvalidArgumentError(f"{where}: expected integers, got {fields!r}") from e


def write_coin_toss(data: CoinTossData, path: Path) -> None:
    Path(path).write_text(",".join(str(v) for v in (data.n_obs, *data.heads)) + "\n")


def read_coin_toss(path: Path) -> CoinTossData:
    rows = _records(path)
    if len(rows) != 1:
        raise InvalidArgumentError(f"{path}: expected one N,K1,K2 record, found {len(rows)}")
    values = _ints(rows[0], str(path))
    if len(values) < 2:
        raise InvalidArgumentError(f"{path}: record needs N and at least one head count")
    return CoinTossData(n_obs=values[0], heads=tuple(values[1:]))


def write_irt(data: IrtData, path: Path) -> None:
    lines = [f"{data.n_persons},{data.n_items}"]
    lines.extend(",".join(str(int(v)) for v in row) for row in data.responses)
    Path(path).write_text("\n".join(lines) + "\n")


def read_irt(path: Path) -> IrtData:
    rows = _records(path)
    if not rows:
        raise InvalidArgumentError(f"{path}: empty IRT file")
    header = _ints(rows[0], f"{path}:header")
    if len(header) != 2:
        raise InvalidArgumentError(f"{path}: header must be P,I")
    n_persons, n_items = header
    body = rows[1:]
    if len(body) != n_persons:
        raise InvalidArgumentError(f"{path}: header declares {n_persons} rows, found {len(body)}")
    matrix = [_ints(row, f"{path}:row {i + 1}") for i, row in enumerate(body)]
    for i, row in enumerate(matrix):
        if len(row) != n_items:
            raise InvalidArgumentError(f"{path}: row {i + 1} has {len(row)} of {n_items} items")
    return IrtData(np.asarray(matrix, dtype=np.int8).reshape(n_persons, n_items))
