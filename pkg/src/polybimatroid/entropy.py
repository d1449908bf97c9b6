"""Readings ingestion, equal-width discretization, and the empirical entropy oracle.

Readings files are CSV with header ``location,timestep,temperature,humidity``
and one row per (location, timestep). Values are either decimal numbers or,
for categorical fixtures, ``low``/``high`` and ``humid``/``dry``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .bisets import FunctionOracle
from .errors import ReadingsError

HEADER = ("location", "timestep", "temperature", "humidity")
TEMP_LEVELS = {"low": 0, "high": 1}
HUMID_LEVELS = {"humid": 0, "dry": 1}


@dataclass
class ReadingTable:
    """Dense n x t readings; rows follow ``locations``, columns ``timesteps``.

    For categorical files the matrices hold level codes and ``categorical``
    is set.
    """

    locations: tuple[int, ...]
    timesteps: tuple[int, ...]
    temp: np.ndarray
    humid: np.ndarray
    categorical: bool = False

    @property
    def n(self) -> int:
        return len(self.locations)

    @property
    def t(self) -> int:
        return len(self.timesteps)

    def subset(self, rows: Sequence[int], cols: Sequence[int]) -> ReadingTable:
        rows, cols = list(rows), list(cols)
        return ReadingTable(
            tuple(self.locations[r] for r in rows),
            tuple(self.timesteps[c] for c in cols),
            self.temp[np.ix_(rows, cols)],
            self.humid[np.ix_(rows, cols)],
            self.categorical,
        )


@dataclass
class DiscreteReadings:
    temp_bins: np.ndarray
    humid_bins: np.ndarray
    k1: int
    k2: int
    locations: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        self.temp_bins = np.asarray(self.temp_bins, dtype=np.int64)
        self.humid_bins = np.asarray(self.humid_bins, dtype=np.int64)
        if self.temp_bins.shape != self.humid_bins.shape or self.temp_bins.ndim != 2:
            raise ValueError("temperature and humidity bins must be equal-shaped n x t matrices")
        if self.temp_bins.shape[1] < 1:
            raise ValueError("need at least one timestep")
        for name, m, k in (("temperature", self.temp_bins, self.k1), ("humidity", self.humid_bins, self.k2)):
            if m.size and (m.min() < 0 or m.max() >= k):
                raise ValueError(f"{name} bins outside 0..{k - 1}")
        if not self.locations:
            self.locations = tuple(range(1, self.n + 1))

    @property
    def n(self) -> int:
        return self.temp_bins.shape[0]

    @property
    def t(self) -> int:
        return self.temp_bins.shape[1]

    def subset(self, rows: Sequence[int], cols: Sequence[int]) -> DiscreteReadings:
        rows, cols = list(rows), list(cols)
        return DiscreteReadings(
            self.temp_bins[np.ix_(rows, cols)],
            self.humid_bins[np.ix_(rows, cols)],
            self.k1,
            self.k2,
            tuple(self.locations[r] for r in rows),
        )


def _parse_value(text: str, levels: dict[str, int], column: str, line: int) -> tuple[float, bool]:
    s = text.strip()
    if s.lower() in levels:
        return float(levels[s.lower()]), True
    try:
        v = float(s)
    except ValueError:
        raise ReadingsError(f"bad {column} value {text!r}", line) from None
    if not math.isfinite(v):
        raise ReadingsError(f"non-finite {column} value {text!r}", line)
    return v, False


def _parse_id(text: str, column: str, line: int) -> int:
    try:
        v = int(text.strip())
    except ValueError:
        raise ReadingsError(f"bad {column} {text!r}", line) from None
    if v < 1:
        raise ReadingsError(f"{column} must be a positive integer, got {v}", line)
    return v


def ingest(path: str | Path) -> ReadingTable:
    cells: dict[tuple[int, int], tuple[float, float]] = {}
    kinds: set[bool] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ReadingsError("empty file", 1)
        if tuple(h.strip().lower() for h in header) != HEADER:
            raise ReadingsError(f"expected header {','.join(HEADER)}, got {','.join(header)}", 1)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ReadingsError(f"expected 4 fields, got {len(row)}", line)
            loc = _parse_id(row[0], "location", line)
            ts = _parse_id(row[1], "timestep", line)
            temp, c1 = _parse_value(row[2], TEMP_LEVELS, "temperature", line)
            hum, c2 = _parse_value(row[3], HUMID_LEVELS, "humidity", line)
            kinds.update((c1, c2))
            if len(kinds) > 1:
                raise ReadingsError("mixes categorical and numeric readings", line)
            if (loc, ts) in cells:
                raise ReadingsError(f"duplicate row for location {loc}, timestep {ts}", line)
            cells[(loc, ts)] = (temp, hum)
    if not cells:
        raise ReadingsError("no readings")
    locations = sorted({k[0] for k in cells})
    timesteps = sorted({k[1] for k in cells})
    missing = [(l, s) for l in locations for s in timesteps if (l, s) not in cells]
    if missing:
        l, s = missing[0]
        raise ReadingsError(
            f"incomplete grid: {len(missing)} missing (location, timestep) pairs, "
            f"first is location {l}, timestep {s}"
        )
    temp = np.array([[cells[(l, s)][0] for s in timesteps] for l in locations])
    humid = np.array([[cells[(l, s)][1] for s in timesteps] for l in locations])
    return ReadingTable(tuple(locations), tuple(timesteps), temp, humid, categorical=kinds == {True})


def equal_width_bins(values: np.ndarray, k: int) -> np.ndarray:
    """Bin into ``k`` equal-width bins over ``[min, max]``; the max lands in the top bin."""
    if k < 1:
        raise ValueError(f"need at least one bin, got {k}")
    values = np.asarray(values, dtype=float)
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros(values.shape, dtype=np.int64)
    width = (hi - lo) / k
    return np.minimum(np.floor((values - lo) / width), k - 1).astype(np.int64)


def discretize(rt: ReadingTable, k1: int = 3, k2: int = 2) -> DiscreteReadings:
    """Global equal-width bins per measurement; categorical tables pass through."""
    if rt.categorical:
        return DiscreteReadings(
            rt.temp.astype(np.int64), rt.humid.astype(np.int64), len(TEMP_LEVELS), len(HUMID_LEVELS), rt.locations
        )
    return DiscreteReadings(equal_width_bins(rt.temp, k1), equal_width_bins(rt.humid, k2), k1, k2, rt.locations)


class EntropyOracle(FunctionOracle):
    """f(S1, S2) = base-2 entropy of the joint empirical distribution of
    temperature bins at S1 and humidity bins at S2 over the timesteps."""

    def __init__(self, readings: DiscreteReadings, memoize: bool = True) -> None:
        super().__init__(readings.n, memoize)
        self.readings = readings

    def _value(self, s1, s2):
        r = self.readings
        # mixed-radix code per timestep; columns visited in sorted index order
        codes = np.zeros(r.t, dtype=np.int64)
        radix = 1
        for i in sorted(s1 | s2):
            if i in s1:
                codes += radix * r.temp_bins[i]
                radix *= r.k1
            else:
                codes += radix * r.humid_bins[i]
                radix *= r.k2
            if radix > 2**62:
                return _entropy_rows(self._columns(s1, s2))
        _, counts = np.unique(codes, return_counts=True)
        return _entropy_counts(counts)

    def _columns(self, s1, s2) -> np.ndarray:
        r = self.readings
        rows = [r.temp_bins[i] if i in s1 else r.humid_bins[i] for i in sorted(s1 | s2)]
        return np.stack(rows, axis=1)

    def location_label(self, i: int) -> int:
        return self.readings.locations[i]


def _entropy_counts(counts: np.ndarray) -> float:
    # sorted so that equal count multisets give bit-identical entropies
    counts = np.sort(counts)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0


def _entropy_rows(rows: np.ndarray) -> float:
    _, counts = np.unique(rows, axis=0, return_counts=True)
    return _entropy_counts(counts)


def entropy(oracle: EntropyOracle, b) -> float:
    return oracle.evaluate(b)


def load_oracle(path: str | Path, k1: int = 3, k2: int = 2, memoize: bool = True) -> EntropyOracle:
    return EntropyOracle(discretize(ingest(path), k1, k2), memoize)
