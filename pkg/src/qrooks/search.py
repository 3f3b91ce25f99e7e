"""Exhaustive scans over partitions, with sharding and resumable JSONL output.

Work items for a size ``n`` are either all partitions of ``n`` in
enumeration order, or one representative per rook-equivalence class
(classes in order of first appearance).  Item ``i`` belongs to shard
``(w, W)`` iff ``i % W == w``; a process pool splits the shard's items the
same way.  Results are merged by item index, so the output does not depend
on the number of workers.

Output is JSON Lines with three record kinds:

* ``class_report`` -- one per failing item (or per item with
  ``emit_successes``);
* ``size_summary`` -- per-size totals;
* ``checkpoint`` -- progress marker, written after every chunk of items
  and at the end of every size.

Resuming truncates the file after its last valid checkpoint and continues
from there; the finished file is byte-identical to an uninterrupted run.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from collections import Counter
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

from . import poly, rooks
from .partitions import (
    Partition,
    diagonal_vector,
    enumerate_partitions,
    equivalence_classes,
    partition_count,
)

log = logging.getLogger(__name__)

RankSelector = Union[tuple[int, ...], str]
RANK_ALL = "all"
RANK_ELL_MINUS_1 = "ell-minus-1"
TARGETS = ("unimodal", "total", "log-concave")
CLASS_MODES = ("classes", "partitions")
DEFAULT_CHUNK = 2000


class CheckpointMismatch(RuntimeError):
    def __init__(self, expected: str, found: str, path: Path):
        super().__init__(
            f"checkpoint {path} belongs to task {found}, current task is {expected}"
        )
        self.expected = expected
        self.found = found


def shard_filter(index: int, shard: tuple[int, int]) -> bool:
    w, W = shard
    return index % W == w


@dataclass(frozen=True)
class SearchTask:
    sizes: tuple[int, int]
    ranks: RankSelector = RANK_ALL
    target: str = "unimodal"
    class_mode: str = "classes"
    shard: tuple[int, int] = (0, 1)
    emit_successes: bool = False
    list_members: bool = False

    def __post_init__(self) -> None:
        lo, hi = self.sizes
        if lo < 0 or hi < lo:
            raise ValueError(f"invalid size range {lo}..{hi}")
        w, W = self.shard
        if W < 1 or not 0 <= w < W:
            raise ValueError(f"invalid shard {w}/{W}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        if self.class_mode not in CLASS_MODES:
            raise ValueError(f"unknown class mode {self.class_mode!r}")
        if isinstance(self.ranks, str):
            if self.ranks not in (RANK_ALL, RANK_ELL_MINUS_1):
                raise ValueError(f"unknown rank selector {self.ranks!r}")
        else:
            ranks = tuple(sorted(set(int(k) for k in self.ranks)))
            if not ranks or ranks[0] < 0:
                raise ValueError("explicit rank list must be nonempty and nonnegative")
            object.__setattr__(self, "ranks", ranks)

    def to_json(self) -> dict[str, Any]:
        return {
            "sizes": list(self.sizes),
            "ranks": self.ranks if isinstance(self.ranks, str) else list(self.ranks),
            "target": self.target,
            "class_mode": self.class_mode,
            "shard": list(self.shard),
            "emit_successes": self.emit_successes,
            "list_members": self.list_members,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "SearchTask":
        ranks = obj["ranks"]
        return cls(
            sizes=tuple(obj["sizes"]),
            ranks=ranks if isinstance(ranks, str) else tuple(ranks),
            target=obj["target"],
            class_mode=obj["class_mode"],
            shard=tuple(obj["shard"]),
            emit_successes=obj["emit_successes"],
            list_members=obj["list_members"],
        )

    def fingerprint(self) -> str:
        # worker count is deliberately not part of the task
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def ranks_for(self, lam: tuple[int, ...]) -> list[int]:
        ell = len(lam)
        if self.ranks == RANK_ALL:
            return list(range(ell + 1))
        if self.ranks == RANK_ELL_MINUS_1:
            return [ell - 1] if ell >= 1 else []
        return list(self.ranks)


# ------------------------------------------------------------------ items

@dataclass(frozen=True)
class Item:
    index: int
    partition: Partition
    diagonal: tuple[int, ...]
    member_count: int
    members: tuple[Partition, ...] = ()


def items_for_size(n: int, class_mode: str, keep_members: bool = False) -> list[Item]:
    if class_mode == "classes":
        return [
            Item(i, c.representative, c.diagonal, c.member_count, c.members)
            for i, c in enumerate(equivalence_classes(n, keep_members))
        ]
    classes = equivalence_classes(n, keep_members)
    by_diag = {c.diagonal: c for c in classes}
    out = []
    for i, lam in enumerate(enumerate_partitions(n)):
        c = by_diag[diagonal_vector(lam)]
        out.append(Item(i, lam, c.diagonal, c.member_count, c.members))
    return out


# ------------------------------------------------------------------ evaluation

def evaluate(task: SearchTask, lam: tuple[int, ...]) -> list[dict[str, Any]]:
    """Verdicts for one partition: a list of ``{"rank", "ok", "witness"}``."""
    if task.target == "total":
        ok, witness = poly.is_unimodal(rooks.total_qrook(lam))
        return [{"rank": "total", "ok": ok, "witness": list(witness) if witness else None}]
    ranks = task.ranks_for(lam)
    if not ranks:
        return []
    verdicts = []
    for k in ranks:
        rk = rooks.qrook(lam, k)
        if task.target == "unimodal":
            ok, witness = poly.is_unimodal(rk)
            w = list(witness) if witness else None
        else:
            ok, w = poly.is_log_concave(rk)
        v = {"rank": k, "ok": ok, "witness": w}
        if not ok:
            v["gap"] = len(lam) - k
        verdicts.append(v)
    return verdicts


_worker_size: int | None = None


def _evaluate_batch(
    task_json: dict[str, Any], n: int, batch: list[tuple[int, tuple[int, ...]]]
) -> list[tuple[int, list[dict[str, Any]]]]:
    global _worker_size
    if _worker_size != n:
        rooks.clear_memo()
        _worker_size = n
    task = SearchTask.from_json(task_json)
    return [(i, evaluate(task, lam)) for i, lam in batch]


# ------------------------------------------------------------------ records

def dumps(record: dict[str, Any]) -> str:
    return json.dumps(record, separators=(",", ":"), ensure_ascii=False)


def class_report(task: SearchTask, n: int, item: Item, verdicts: list[dict]) -> dict[str, Any]:
    rec: dict[str, Any] = {
        "kind": "class_report",
        "n": n,
        "index": item.index,
        "partition": list(item.partition),
        "diagonal": list(item.diagonal),
        "member_count": item.member_count,
        "verdicts": verdicts,
    }
    if task.list_members:
        rec["members"] = [list(m) for m in item.members]
    return rec


@dataclass
class SizeTally:
    n: int
    items: int = 0
    failures: int = 0
    failing_partitions: int = 0
    failing_diagonals: set = field(default_factory=set)
    rank_failures: Counter = field(default_factory=Counter)
    gaps: Counter = field(default_factory=Counter)

    def add(self, rec: dict[str, Any]) -> None:
        bad = [v for v in rec["verdicts"] if not v["ok"]]
        if not bad:
            return
        self.failures += 1
        self.failing_diagonals.add(tuple(rec["diagonal"]))
        # in class mode one report stands for all members of the class
        self.failing_partitions += rec["member_count"] if rec.get("_class_mode") else 1
        for v in bad:
            self.rank_failures[str(v["rank"])] += 1
            if "gap" in v:
                self.gaps[str(v["gap"])] += 1

    def counts(self) -> dict[str, Any]:
        return {
            "items": self.items,
            "failures": self.failures,
            "failing_classes": len(self.failing_diagonals),
            "failing_partitions": self.failing_partitions,
            "rank_failures": dict(sorted(self.rank_failures.items(), key=_num_key)),
            "gap_histogram": dict(sorted(self.gaps.items(), key=_num_key)),
        }


def _num_key(kv: tuple[str, int]) -> tuple[int, str]:
    k = kv[0]
    return (int(k), "") if k.lstrip("-").isdigit() else (1 << 30, k)


def size_summary(task: SearchTask, n: int, tally: SizeTally, n_classes: int) -> dict[str, Any]:
    return {
        "kind": "size_summary",
        "n": n,
        "partitions": partition_count(n),
        "classes": n_classes,
        **tally.counts(),
    }


# ------------------------------------------------------------------ file io

def read_records(path: Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield ``(end_offset, record)`` for each complete, parseable line."""
    with open(path, "rb") as f:
        offset = 0
        for raw in f:
            offset += len(raw)
            if not raw.endswith(b"\n"):
                return
            try:
                yield offset, json.loads(raw)
            except json.JSONDecodeError:
                return


def last_checkpoint(path: Path) -> tuple[int, dict[str, Any]] | None:
    found = None
    for offset, rec in read_records(path):
        if rec.get("kind") == "checkpoint":
            found = (offset, rec)
    return found


class _Sink:
    def __init__(self, path: Path | None, stream=None):
        self.path = path
        self.stream = stream
        self._fh = open(path, "a", encoding="utf-8") if path else None

    def write(self, record: dict[str, Any]) -> None:
        line = dumps(record) + "\n"
        if self._fh:
            self._fh.write(line)
            self._fh.flush()
            os.fsync(self._fh.fileno())
        if self.stream is not None:
            self.stream(record)

    def close(self) -> None:
        if self._fh:
            self._fh.close()


# ------------------------------------------------------------------ driver

@dataclass
class ScanResult:
    task: SearchTask
    reports: list[dict[str, Any]]
    summaries: list[dict[str, Any]]

    def failures(self) -> list[dict[str, Any]]:
        return [r for r in self.reports if any(not v["ok"] for v in r["verdicts"])]

    def summary(self, n: int) -> dict[str, Any]:
        for s in self.summaries:
            if s["n"] == n:
                return s
        raise KeyError(n)

    @property
    def total_failures(self) -> int:
        return sum(s["failures"] for s in self.summaries)


def _checkpoint(task: SearchTask, n: int, cursor: int, tally: SizeTally | None,
                done: bool = False) -> dict[str, Any]:
    return {
        "kind": "checkpoint",
        "fingerprint": task.fingerprint(),
        "task": task.to_json(),
        "n": n,
        "cursor": cursor,
        "last_completed": n - 1 if cursor == 0 and n > task.sizes[0] else None,
        "counts": tally.counts() if tally else None,
        "done": done,
    }


def run_scan(
    task: SearchTask,
    *,
    workers: int = 1,
    checkpoint: str | Path | None = None,
    chunk: int = DEFAULT_CHUNK,
    on_record: Callable[[dict[str, Any]], None] | None = None,
    after_chunk: Callable[[int, int], None] | None = None,
) -> ScanResult:
    """Run ``task``; see the module docstring for the output format.

    With ``checkpoint`` set, records go to that JSONL file, and an existing
    file is resumed (its fingerprint must match).  ``after_chunk(n, cursor)``
    is called after each checkpoint is written; raising from it simulates
    an interruption.
    """
    path = Path(checkpoint) if checkpoint else None
    reports: list[dict[str, Any]] = []
    summaries: list[dict[str, Any]] = []
    lo, hi = task.sizes
    start_n, start_cursor = lo, 0
    resumed_reports: list[dict[str, Any]] = []

    if path and path.exists() and path.stat().st_size and not any(True for _ in read_records(path)):
        # only a torn first line: nothing was ever committed
        path.write_bytes(b"")
    if path and path.exists() and path.stat().st_size:
        cp = last_checkpoint(path)
        if cp is None:
            raise CheckpointMismatch(task.fingerprint(), "<none>", path)
        offset, rec = cp
        if rec["fingerprint"] != task.fingerprint():
            raise CheckpointMismatch(task.fingerprint(), rec["fingerprint"], path)
        with open(path, "r+b") as f:
            f.truncate(offset)
        for _, old in read_records(path):
            if old["kind"] == "class_report":
                reports.append(old)
            elif old["kind"] == "size_summary":
                summaries.append(old)
        if rec["done"]:
            return ScanResult(task, reports, summaries)
        start_n, start_cursor = rec["n"], rec["cursor"]
        resumed_reports = [r for r in reports if r["n"] == start_n]
        log.info("resuming %s at n=%d cursor=%d", path, start_n, start_cursor)
        sink = _Sink(path, on_record)
    else:
        sink = _Sink(path, on_record)
        sink.write(_checkpoint(task, lo, 0, None))

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    class_mode = task.class_mode == "classes"
    try:
        for n in range(start_n, hi + 1):
            rooks.clear_memo()
            items = items_for_size(n, task.class_mode, task.list_members)
            n_classes = len({it.diagonal for it in items})
            tally = SizeTally(n)
            cursor = 0
            if n == start_n and start_cursor:
                cursor = start_cursor
                tally.items = sum(1 for it in items[:cursor] if shard_filter(it.index, task.shard))
                for r in resumed_reports:
                    tally.add({**r, "_class_mode": class_mode})
            while cursor < len(items):
                end = min(cursor + chunk, len(items))
                batch = [it for it in items[cursor:end] if shard_filter(it.index, task.shard)]
                results = _run_batch(task, n, batch, pool, workers)
                for it in batch:
                    verdicts = results[it.index]
                    tally.items += 1
                    failed = any(not v["ok"] for v in verdicts)
                    if failed or task.emit_successes:
                        rec = class_report(task, n, it, verdicts)
                        tally.add({**rec, "_class_mode": class_mode})
                        reports.append(rec)
                        sink.write(rec)
                cursor = end
                if cursor < len(items):
                    sink.write(_checkpoint(task, n, cursor, tally))
                    if after_chunk:
                        after_chunk(n, cursor)
            summary = size_summary(task, n, tally, n_classes)
            summaries.append(summary)
            sink.write(summary)
            log.info("n=%d items=%d failures=%d", n, tally.items, tally.failures)
            sink.write(_checkpoint(task, n + 1, 0, None, done=n == hi))
            if after_chunk and n < hi:
                after_chunk(n + 1, 0)
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
        sink.close()
    return ScanResult(task, reports, summaries)


def _run_batch(task, n, batch, pool, workers) -> dict[int, list[dict]]:
    pairs = [(it.index, tuple(it.partition)) for it in batch]
    if pool is None:
        global _worker_size
        _worker_size = n
        return {i: evaluate(task, lam) for i, lam in pairs}
    tj = task.to_json()
    futures = [
        pool.submit(_evaluate_batch, tj, n, [p for p in pairs if shard_filter(p[0], (w, workers))])
        for w in range(workers)
    ]
    out: dict[int, list[dict]] = {}
    for fut in futures:
        out.update(fut.result())
    return out


# ------------------------------------------------------------------ helpers

def scan_unimodality(sizes, ranks=RANK_ALL, **kw) -> ScanResult:
    opts = {k: kw.pop(k) for k in ("workers", "checkpoint", "chunk", "on_record", "after_chunk") if k in kw}
    return run_scan(SearchTask(sizes=sizes, ranks=ranks, target="unimodal", **kw), **opts)


def scan_total(sizes, **kw) -> ScanResult:
    opts = {k: kw.pop(k) for k in ("workers", "checkpoint", "chunk", "on_record", "after_chunk") if k in kw}
    return run_scan(SearchTask(sizes=sizes, ranks=RANK_ALL, target="total", **kw), **opts)


def scan_gap(sizes, **kw) -> ScanResult:
    """Scan rank ``len(lam) - 1``; gap statistics land in the summaries."""
    opts = {k: kw.pop(k) for k in ("workers", "checkpoint", "chunk", "on_record", "after_chunk") if k in kw}
    return run_scan(SearchTask(sizes=sizes, ranks=RANK_ELL_MINUS_1, target="unimodal", **kw), **opts)


def gap_statistics(reports: Iterable[dict[str, Any]]) -> Counter:
    """Histogram of ``len(lam) - k`` over every failing ``(lam, k)``."""
    out: Counter = Counter()
    for rec in reports:
        for v in rec["verdicts"]:
            if not v["ok"] and "gap" in v:
                out[v["gap"]] += 1
    return out


def verify_report(rec: dict[str, Any]) -> bool:
    """Recompute every failing verdict of a report and check its witness."""
    lam = tuple(rec["partition"])
    for v in rec["verdicts"]:
        if v["ok"]:
            continue
        p = rooks.total_qrook(lam) if v["rank"] == "total" else rooks.qrook(lam, v["rank"])
        w = v["witness"]
        if isinstance(w, list):
            i, j, k = w
            if not (i < j < k and p[i] > p[j] < p[k]):
                return False
        else:
            e = w
            lo = next(t for t, c in enumerate(p) if c)
            if not lo < e < len(p) - 1:
                return False
            if p[e] and p[e] * p[e] >= p[e - 1] * p[e + 1]:
                return False
    return True


def merge_files(paths: Iterable[str | Path]) -> list[dict[str, Any]]:
    """Merge class reports from per-shard files, ordered by ``(n, index)``."""
    out = []
    for p in paths:
        out.extend(r for _, r in read_records(Path(p)) if r["kind"] == "class_report")
    out.sort(key=lambda r: (r["n"], r["index"]))
    return out
