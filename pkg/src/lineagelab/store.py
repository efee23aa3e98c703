"""Hash-partitioned row stores with scan-cost accounting.

Models a hash-partitioned, cached RDD: a lookup scans one partition, a
multi-key lookup scans the distinct partitions hit, a filter scans every
row. Two tiers share the interface: in-memory buckets and one-file-per-
partition on disk. Scan counters are tier-independent.
"""
from __future__ import annotations

import csv
import json
import threading
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .model import ConfigError

_MASK64 = (1 << 64) - 1

Row = tuple


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer; fixed bit-exactly so scan counts reproduce."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def bucket_of(key: int, num_partitions: int) -> int:
    return splitmix64(key & _MASK64) % num_partitions


def _bucket_ids(keys: Sequence[int], num_partitions: int) -> np.ndarray:
    """Vectorized SplitMix64 placement for a column of integer keys."""
    with np.errstate(over="ignore"):
        z = np.fromiter(
            (k & _MASK64 for k in keys), dtype=np.uint64, count=len(keys)
        ) + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z % np.uint64(num_partitions)).astype(np.int64)


class ScanDelta(NamedTuple):
    partitions: int
    rows: int


class CounterSnapshot(NamedTuple):
    partitions_scanned: int
    rows_scanned: int


class ScanCounters:
    """Cumulative partitions/rows scanned; accumulation is thread-safe."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.partitions_scanned = 0
        self.rows_scanned = 0

    def record(self, delta: ScanDelta) -> None:
        with self._lock:
            self.partitions_scanned += delta.partitions
            self.rows_scanned += delta.rows

    def snapshot(self) -> CounterSnapshot:
        with self._lock:
            return CounterSnapshot(self.partitions_scanned, self.rows_scanned)


class PartitionedStore:
    """Common lookup/filter logic over per-partition row buckets."""

    columns: tuple[str, ...]
    key: str
    num_partitions: int

    def __init__(self, columns: Sequence[str], key: str, num_partitions: int):
        if num_partitions < 1:
            raise ConfigError(f"partition count must be >= 1, got {num_partitions}")
        if key not in columns:
            raise ConfigError(f"key column {key!r} not in columns {columns}")
        self.columns = tuple(columns)
        self.key = key
        self.key_index = self.columns.index(key)
        self.num_partitions = num_partitions
        self.counters = ScanCounters()

    # subclasses provide the physical bucket
    def _bucket(self, i: int) -> list[Row]:
        raise NotImplementedError

    def _index(self, i: int) -> dict[int, list[Row]]:
        raise NotImplementedError

    def bucket_sizes(self) -> list[int]:
        return [len(self._bucket(i)) for i in range(self.num_partitions)]

    @property
    def total_rows(self) -> int:
        return sum(self.bucket_sizes())

    def lookup(self, key_value: int) -> tuple[list[Row], ScanDelta]:
        """All rows whose key equals key_value; charges one full partition."""
        b = bucket_of(key_value, self.num_partitions)
        delta = ScanDelta(1, len(self._bucket(b)))
        self.counters.record(delta)
        return list(self._index(b).get(key_value, ())), delta

    def multi_lookup(self, key_values: Iterable[int]) -> tuple[list[Row], ScanDelta]:
        """Union of per-key matches; each distinct partition is scanned once."""
        keys = sorted(set(key_values))
        buckets = {bucket_of(k, self.num_partitions) for k in keys}
        delta = ScanDelta(len(buckets), sum(len(self._bucket(b)) for b in buckets))
        self.counters.record(delta)
        rows: list[Row] = []
        for k in keys:
            rows.extend(self._index(bucket_of(k, self.num_partitions)).get(k, ()))
        return rows, delta

    def filter(self, predicate: Callable[[Row], bool]) -> tuple[list[Row], ScanDelta]:
        """Scan everything, keep rows satisfying predicate."""
        total = 0
        rows: list[Row] = []
        for i in range(self.num_partitions):
            bucket = self._bucket(i)
            total += len(bucket)
            rows.extend(r for r in bucket if predicate(r))
        delta = ScanDelta(self.num_partitions, total)
        self.counters.record(delta)
        return rows, delta

    def restrict(self, predicate: Callable[[Row], bool]) -> tuple["MemoryStore", ScanDelta]:
        """Full-scan filter that keeps the parent's bucket structure.

        Models a filter over an already hash-partitioned RDD: the derived
        store has the same partition count and key, with non-matching rows
        dropped in place.
        """
        buckets = []
        total = 0
        for i in range(self.num_partitions):
            bucket = self._bucket(i)
            total += len(bucket)
            buckets.append([r for r in bucket if predicate(r)])
        delta = ScanDelta(self.num_partitions, total)
        self.counters.record(delta)
        derived = MemoryStore._from_buckets(
            buckets, self.columns, self.key, self.num_partitions
        )
        return derived, delta

    def iter_rows(self) -> Iterable[Row]:
        for i in range(self.num_partitions):
            yield from self._bucket(i)


def _build_index(bucket: list[Row], key_index: int) -> dict[int, list[Row]]:
    idx: dict[int, list[Row]] = {}
    for r in bucket:
        idx.setdefault(r[key_index], []).append(r)
    return idx


class MemoryStore(PartitionedStore):
    """RAM-tier store: rows live in per-partition lists with a key index."""

    def __init__(self, buckets, columns, key, num_partitions):
        super().__init__(columns, key, num_partitions)
        self._buckets = buckets
        self._indexes: list[dict[int, list[Row]] | None] = [None] * num_partitions

    @classmethod
    def build(cls, rows, columns, key, num_partitions) -> "MemoryStore":
        rows = list(rows)
        buckets: list[list[Row]] = [[] for _ in range(num_partitions)]
        if rows:
            ki = list(columns).index(key)
            ids = _bucket_ids([r[ki] for r in rows], num_partitions)
            for row, b in zip(rows, ids):
                buckets[b].append(row)
        return cls._from_buckets(buckets, columns, key, num_partitions)

    @classmethod
    def _from_buckets(cls, buckets, columns, key, num_partitions) -> "MemoryStore":
        return cls(buckets, columns, key, num_partitions)

    def _bucket(self, i: int) -> list[Row]:
        return self._buckets[i]

    def _index(self, i: int) -> dict[int, list[Row]]:
        idx = self._indexes[i]
        if idx is None:
            idx = _build_index(self._buckets[i], self.key_index)
            self._indexes[i] = idx
        return idx


class DiskStore(PartitionedStore):
    """Disk-tier store: one CSV per partition plus a manifest.

    Buckets are parsed on first access and cached; the scan accounting is
    identical to the memory tier.
    """

    MANIFEST = "manifest.json"

    def __init__(self, directory, columns, key, num_partitions, column_types, row_counts):
        super().__init__(columns, key, num_partitions)
        self.directory = Path(directory)
        self.column_types = tuple(column_types)
        self._row_counts = list(row_counts)
        self._cache: dict[int, list[Row]] = {}
        self._indexes: dict[int, dict[int, list[Row]]] = {}
        self._casts = [int if t == "int" else str for t in self.column_types]

    @classmethod
    def write(cls, directory, rows, columns, key, num_partitions, column_types) -> "DiskStore":
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        rows = list(rows)
        buckets: list[list[Row]] = [[] for _ in range(num_partitions)]
        if rows:
            ki = list(columns).index(key)
            ids = _bucket_ids([r[ki] for r in rows], num_partitions)
            for row, b in zip(rows, ids):
                buckets[b].append(row)
        for i, bucket in enumerate(buckets):
            with open(directory / f"part-{i}.csv", "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerows(bucket)
        manifest = {
            "num_partitions": num_partitions,
            "key": key,
            "hash": "splitmix64",
            "columns": list(columns),
            "column_types": list(column_types),
            "row_counts": [len(b) for b in buckets],
        }
        with open(directory / cls.MANIFEST, "w") as fh:
            json.dump(manifest, fh, indent=2)
        return cls.open(directory)

    @classmethod
    def open(cls, directory) -> "DiskStore":
        directory = Path(directory)
        with open(directory / cls.MANIFEST) as fh:
            m = json.load(fh)
        if m.get("hash") != "splitmix64":
            raise ConfigError(f"unsupported hash {m.get('hash')!r} in {directory}")
        return cls(
            directory,
            m["columns"],
            m["key"],
            m["num_partitions"],
            m["column_types"],
            m["row_counts"],
        )

    def bucket_sizes(self) -> list[int]:
        return list(self._row_counts)

    def _bucket(self, i: int) -> list[Row]:
        bucket = self._cache.get(i)
        if bucket is None:
            bucket = []
            with open(self.directory / f"part-{i}.csv", newline="") as fh:
                for rec in csv.reader(fh):
                    bucket.append(tuple(cast(v) for cast, v in zip(self._casts, rec)))
            self._cache[i] = bucket
        return bucket

    def _index(self, i: int) -> dict[int, list[Row]]:
        idx = self._indexes.get(i)
        if idx is None:
            idx = _build_index(self._bucket(i), self.key_index)
            self._indexes[i] = idx
        return idx
