"""Command line interface.

Exit codes: 0 success / property holds, 1 property fails (``check``, or
``search --fail-on-find``), 2 usage error, 3 cross-verification mismatch,
4 checkpoint mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from typing import Any

from . import poly, rooks, search, stirling
from .partitions import PartitionParseError, format_partition, parse_partition

EXIT_OK = 0
EXIT_PROPERTY_FAILS = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_CHECKPOINT = 4

WORKERS_ENV = "QROOKS_WORKERS"
MAX_ENUMERATE = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 already; keep the message terse
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ output

class Output:
    def __init__(self, fmt: str, path: str | None):
        self.fmt = fmt
        self._fh = open(path, "w", encoding="utf-8") if path else sys.stdout

    def line(self, text: str = "") -> None:
        print(text, file=self._fh)

    def json(self, obj: Any) -> None:
        print(json.dumps(obj, separators=(",", ":")), file=self._fh)

    def rows(self, header: list[str], rows: list[list[Any]]) -> None:
        w = csv.writer(self._fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)

    def close(self) -> None:
        if self._fh is not sys.stdout:
            self._fh.close()


def render_text(doc: dict[str, Any]) -> list[str]:
    """Text lines for a ``compute`` JSON document; used for round-trips."""
    lines = []
    for entry in doc["results"]:
        p = poly.from_json(entry["poly"])
        lines.append(f"R_{entry['rank']}({doc['partition']}; q) = {poly.to_text(p)}")
    return lines


def _partition_arg(text: str):
    try:
        return parse_partition(text)
    except PartitionParseError as exc:
        raise UsageError(f"bad partition {text!r}: {exc}") from None


# ------------------------------------------------------------------ compute

def _compute_one(lam, k: int, method: str) -> tuple[poly.IntPolynomial, str]:
    if method == "enumerate":
        if sum(lam) > MAX_ENUMERATE:
            raise UsageError(f"--method enumerate is limited to |lambda| <= {MAX_ENUMERATE}")
        return rooks.qrook_enumerate(lam, k), "enumerate"
    if method == "closed-form":
        p = rooks.qrook_closed_form(lam, k)
        if p is None:
            raise UsageError(f"no closed form for rank {k} (only 0, 1 and ell={len(lam)})")
        return p, "closed-form"
    if method == "auto":
        p = rooks.qrook_closed_form(lam, k)
        if p is not None:
            return p, "closed-form"
    return rooks.qrook(lam, k), "recurrence"


def _verify(lam, k: int, value) -> list[str]:
    problems = []
    checks = [("recurrence", rooks.qrook(lam, k))]
    closed = rooks.qrook_closed_form(lam, k)
    if closed is not None:
        checks.append(("closed-form", closed))
    if sum(lam) <= MAX_ENUMERATE:
        checks.append(("enumerate", rooks.qrook_enumerate(lam, k)))
    for name, other in checks:
        if other != value:
            problems.append(f"rank {k}: {name} gives {poly.to_text(other)}")
    return problems


def cmd_compute(args, out: Output) -> int:
    lam = _partition_arg(args.partition)
    ranks = range(len(lam) + 1) if args.all_ranks else [args.rank]
    results = []
    problems: list[str] = []
    for k in ranks:
        if k < 0:
            raise UsageError("rank must be nonnegative")
        p, used = _compute_one(lam, k, args.method)
        if args.verify:
            problems += _verify(lam, k, p)
        results.append({"rank": k, "method": used, "poly": poly.to_json(p)})
    doc = {"partition": format_partition(lam), "results": results}
    if args.format == "json":
        out.json(doc)
    elif args.format == "csv":
        rows = []
        for r in results:
            for e, c in enumerate(r["poly"]["coeffs"]):
                rows.append([doc["partition"], r["rank"], e, c])
        out.rows(["partition", "rank", "exponent", "coefficient"], rows)
    else:
        for line in render_text(doc):
            out.line(line)
    if problems:
        for msg in problems:
            print(f"verification mismatch: {msg}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ------------------------------------------------------------------ check

def cmd_check(args, out: Output) -> int:
    lam = _partition_arg(args.partition)
    if args.total:
        p = rooks.total_qrook(lam)
        label = f"R({format_partition(lam)}; q)"
    else:
        if args.rank is None:
            raise UsageError("give --rank K or --total")
        p = rooks.qrook(lam, args.rank)
        label = f"R_{args.rank}({format_partition(lam)}; q)"
    if args.test == "unimodal":
        ok, witness = poly.is_unimodal(p)
    else:
        ok, witness = poly.is_log_concave(p)
    doc = {
        "partition": format_partition(lam),
        "rank": "total" if args.total else args.rank,
        "test": args.test,
        "holds": ok,
        "witness": list(witness) if isinstance(witness, tuple) else witness,
        "poly": poly.to_json(p),
    }
    if args.format == "json":
        out.json(doc)
    else:
        out.line(f"{label} = {poly.to_text(p)}")
        if ok:
            out.line(f"{args.test}: yes")
        elif args.test == "unimodal":
            i, j, k = witness
            out.line(
                f"unimodal: no; valley at q^{i},q^{j},q^{k}: {p[i]} > {p[j]} < {p[k]}"
            )
        else:
            e = witness
            out.line(
                f"log-concave: no; at q^{e}: {p[e]}^2 = {p[e] ** 2} < "
                f"{p[e - 1]} * {p[e + 1]} = {p[e - 1] * p[e + 1]}"
            )
    return EXIT_OK if ok else EXIT_PROPERTY_FAILS


# ------------------------------------------------------------------ search

def _parse_sizes(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        return int(text), int(text)
    except ValueError:
        raise UsageError(f"bad size range {text!r}; expected A..B") from None


def _parse_ranks(text: str):
    if text in ("all", search.RANK_ALL):
        return search.RANK_ALL
    if text in ("ell-1", search.RANK_ELL_MINUS_1):
        return search.RANK_ELL_MINUS_1
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"bad rank list {text!r}") from None


def _parse_shard(text: str) -> tuple[int, int]:
    try:
        w, W = text.split("/")
        return int(w), int(W)
    except ValueError:
        raise UsageError(f"bad shard {text!r}; expected w/W") from None


def cmd_search(args, out: Output) -> int:
    lo, hi = _parse_sizes(args.sizes)
    try:
        task = search.SearchTask(
            sizes=(lo, hi),
            ranks=_parse_ranks(args.ranks),
            target=args.target,
            class_mode="partitions" if args.per_partition else "classes",
            shard=_parse_shard(args.shard),
            emit_successes=args.emit_successes,
            list_members=args.members,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers < 1:
        raise UsageError("--workers must be at least 1")

    def echo(rec: dict[str, Any]) -> None:
        if args.format == "json":
            out.json(rec)
        elif rec["kind"] == "class_report":
            bad = [v for v in rec["verdicts"] if not v["ok"]]
            desc = ", ".join(f"rank {v['rank']} witness {v['witness']}" for v in bad)
            out.line(
                f"n={rec['n']} <{format_partition(rec['partition'])}> "
                f"(class of {rec['member_count']}): {desc}"
            )
            for m in rec.get("members", ()):
                out.line(f"    <{format_partition(m)}>")
        elif rec["kind"] == "size_summary":
            unit = "classes" if task.class_mode == "classes" else "partitions"
            out.line(
                f"n={rec['n']}: {rec['failures']} of {rec['items']} {unit} fail "
                f"({rec['failing_classes']} classes, {rec['failing_partitions']} partitions)"
            )

    try:
        result = search.run_scan(
            task,
            workers=workers,
            checkpoint=args.checkpoint,
            chunk=args.chunk,
            on_record=None if args.format == "csv" else echo,
        )
    except search.CheckpointMismatch as exc:
        print(f"checkpoint mismatch: expected {exc.expected}, found {exc.found}", file=sys.stderr)
        return EXIT_CHECKPOINT
    if args.format == "csv":
        rows = [
            [s["n"], s["partitions"], s["classes"], s["items"], s["failures"],
             s["failing_classes"], s["failing_partitions"]]
            for s in result.summaries
        ]
        out.rows(["n", "partitions", "classes", "items", "failures",
                  "failing_classes", "failing_partitions"], rows)
    elif args.format == "text":
        out.line(f"total failures: {result.total_failures}")
    if args.fail_on_find and result.total_failures:
        return EXIT_PROPERTY_FAILS
    return EXIT_OK


# ------------------------------------------------------------------ stirling

def cmd_stirling(args, out: Output) -> int:
    if args.scan_log_concave:
        if args.max_n is None or args.max_n < 1:
            raise UsageError("--scan-log-concave needs --max-n M with M >= 1")

        def progress(rec: dict[str, Any]) -> None:
            if args.format == "json":
                out.json(rec)
            elif args.verbose:
                out.line(f"n={rec['n']}: {rec['failures']} failures")

        report = stirling.scan_log_concavity(args.max_n, on_row=progress)
        if args.format == "json":
            out.json({"kind": "stirling_summary", "max_n": args.max_n,
                      "checked": report.checked, "failures": report.failures})
        else:
            for f in report.failures:
                out.line(f"S_q({f['n']},{f['k']}) not log-concave at q^{f['witness']}")
            out.line(
                f"checked {report.checked} polynomials for 1 <= k <= n <= {args.max_n}: "
                f"{len(report.failures)} failures"
            )
        return EXIT_OK if report.ok else EXIT_PROPERTY_FAILS
    if args.n is None:
        raise UsageError("give --n N [--k K] or --scan-log-concave --max-n M")
    n = args.n
    if n < 0:
        raise UsageError("--n must be nonnegative")
    ks = [args.k] if args.k is not None else list(range(n + 1))
    for k in ks:
        if not 0 <= k <= n:
            raise UsageError(f"need 0 <= K <= N, got K={k}")
    results = [{"n": n, "k": k, "poly": poly.to_json(stirling.qstirling(n, k))} for k in ks]
    if args.format == "json":
        out.json({"results": results})
    elif args.format == "csv":
        out.rows(["n", "k", "exponent", "coefficient"],
                 [[r["n"], r["k"], e, c] for r in results for e, c in enumerate(r["poly"]["coeffs"])])
    else:
        for r in results:
            out.line(f"S_q({r['n']},{r['k']}) = {poly.to_text(poly.from_json(r['poly']))}")
    return EXIT_OK


# ------------------------------------------------------------------ matrices

def cmd_matrix_count(args, out: Output) -> int:
    lam = _partition_arg(args.partition)
    if args.q not in rooks.SUPPORTED_FIELDS:
        raise UsageError(f"--q must be one of {rooks.SUPPORTED_FIELDS}")
    if sum(lam) > rooks.MAX_MATRIX_BOARD:
        raise UsageError(f"board too large: |lambda| = {sum(lam)} > {rooks.MAX_MATRIX_BOARD}")
    dist = rooks.rank_distribution(lam, args.q)
    ranks = [args.rank] if args.rank is not None else list(range(len(dist)))
    rows = []
    mismatch = False
    for r in ranks:
        count = dist[r] if 0 <= r < len(dist) else 0
        row: dict[str, Any] = {"partition": format_partition(lam), "q": args.q, "rank": r, "count": count}
        if args.verify:
            pred = rooks.predicted_rank_count(lam, args.q, r)
            row["predicted"] = pred
            row["agrees"] = pred == count
            mismatch |= pred != count
        rows.append(row)
    if args.format == "json":
        out.json({"results": rows, "total": sum(r["count"] for r in rows)})
    elif args.format == "csv":
        header = list(rows[0].keys())
        out.rows(header, [[r[h] for h in header] for r in rows])
    else:
        for r in rows:
            s = f"rank {r['rank']}: {r['count']}"
            if args.verify:
                s += f" (q-rook prediction {r['predicted']}, {'agrees' if r['agrees'] else 'MISMATCH'})"
            out.line(s)
        if args.rank is None:
            out.line(f"total: {sum(r['count'] for r in rows)}")
    return EXIT_MISMATCH if mismatch else EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qrooks", description="Garsia-Remmel q-rook polynomials on Ferrers boards")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common], help="print q-rook polynomials")
    p.add_argument("--partition", required=True, help='comma-separated parts, e.g. "10,9,3,2,1"')
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rank", type=int)
    g.add_argument("--all-ranks", action="store_true")
    p.add_argument("--method", choices=("auto", "recurrence", "enumerate", "closed-form"), default="auto")
    p.add_argument("--verify", action="store_true", help="cross-check against the other methods")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("check", parents=[common], help="test unimodality or log-concavity")
    p.add_argument("--partition", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rank", type=int)
    g.add_argument("--total", action="store_true")
    p.add_argument("--test", choices=("unimodal", "log-concave"), default="unimodal")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", parents=[common], help="exhaustive scan over partitions")
    p.add_argument("--sizes", required=True, help="inclusive range A..B")
    p.add_argument("--ranks", default="all", help="comma list, 'all' or 'ell-1'")
    p.add_argument("--target", choices=("unimodal", "total", "log-concave"), default="unimodal")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--classes", action="store_true", help="one representative per class (default)")
    mode.add_argument("--per-partition", action="store_true", help="scan every partition")
    p.add_argument("--workers", type=int, default=None, help=f"process count (default ${WORKERS_ENV} or 1)")
    p.add_argument("--shard", default="0/1", help="only items with index %% W == w")
    p.add_argument("--checkpoint", help="JSONL report/checkpoint file; resumed if present")
    p.add_argument("--chunk", type=int, default=search.DEFAULT_CHUNK, help="items between checkpoints")
    p.add_argument("--emit-successes", action="store_true")
    p.add_argument("--members", action="store_true", help="list every class member in reports")
    p.add_argument("--fail-on-find", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("stirling", parents=[common], help="q-Stirling numbers")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--scan-log-concave", action="store_true")
    p.add_argument("--max-n", type=int)
    p.set_defaults(func=cmd_stirling)

    p = sub.add_parser("matrix-count", parents=[common], help="count rank-r matrices supported on a board")
    p.add_argument("--partition", required=True)
    p.add_argument("--q", type=int, required=True, help="field order: 2,3,4,5,7,8,9")
    p.add_argument("--rank", type=int)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_matrix_count)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        out = Output(args.format, args.output)
    except OSError as exc:
        print(f"cannot open output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"qrooks: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
