"""Benchmark harness: workload mixes over both systems, committed-op throughput.

Each worker thread runs a fixed number of fixed-size transactions of random
operations drawn by ratio with uniform random keys; measurement is delimited
by barriers and counts only operations belonging to committed transactions.
Per-thread random streams are seeded by (seed, thread id), so a single-thread
run is fully deterministic.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from threading import Barrier, Thread
from typing import IO, List, Optional, Sequence, Tuple, Union

from .adjacency import AdjacencyList
from .boosting import BoostedAdjacencyList
from .descriptors import Operation, OpType, TxStatus

PRESETS = {
    # percent InsertVertex, DeleteVertex, InsertEdge, DeleteEdge, Find
    "vertex-heavy": (40, 40, 10, 10, 0),
    "edge-heavy": (20, 20, 25, 25, 10),
}

_MIX_ORDER = (
    OpType.INSERT_VERTEX,
    OpType.DELETE_VERTEX,
    OpType.INSERT_EDGE,
    OpType.DELETE_EDGE,
    OpType.FIND,
)

CSV_HEADER = "system,threads,ops_per_sec,commits,aborts,wall_ms"


@dataclass
class WorkloadSpec:
    mix: Tuple[int, int, int, int, int] = PRESETS["vertex-heavy"]
    txn_size: int = 4
    txns_per_thread: int = 20_000
    key_range: int = 500
    thread_counts: Sequence[int] = (1, 2, 4, 8)
    system: str = "lftt"
    seed: int = 1

    def validate(self) -> None:
        if sum(self.mix) != 100 or any(r < 0 for r in self.mix):
            raise ValueError(f"mix must be five non-negative percentages summing to 100, got {self.mix}")
        if self.txn_size < 1:
            raise ValueError("txn-size must be positive")
        if self.txns_per_thread < 1:
            raise ValueError("txns must be positive")
        if self.key_range < 2:
            raise ValueError("key-range must be at least 2")
        if not self.thread_counts or any(t < 1 for t in self.thread_counts):
            raise ValueError("thread counts must be positive")
        if self.system not in ("lftt", "boost"):
            raise ValueError(f"unknown system {self.system!r}")


@dataclass
class BenchRow:
    system: str
    threads: int
    ops_per_sec: float
    commits: int
    aborts: int
    wall_ms: float


@dataclass
class BenchReport:
    rows: List[BenchRow] = field(default_factory=list)


def _random_op(rng: random.Random, mix, key_range: int) -> Operation:
    draw = rng.randrange(100)
    acc = 0
    for kind, ratio in zip(_MIX_ORDER, mix):
        acc += ratio
        if draw < acc:
            break
    key = rng.randrange(1, key_range)
    if kind in (OpType.INSERT_EDGE, OpType.DELETE_EDGE):
        return Operation(kind, key, rng.randrange(1, key_range))
    if kind is OpType.FIND and rng.randrange(2):
        return Operation(kind, key, rng.randrange(1, key_range))
    return Operation(kind, key)


def make_structure(system: str, key_range: int, recorder=None):
    if system == "lftt":
        return AdjacencyList(key_range=key_range, recorder=recorder)
    return BoostedAdjacencyList(key_range=key_range, recorder=recorder)


def prepopulate(structure, key_range: int, seed: int) -> None:
    """Half-full starting state: ~N/2 vertexes holding ~4 edges each."""
    rng = random.Random(f"{seed}:prepopulate")
    target = key_range // 2
    vertexes = rng.sample(range(1, key_range), min(target, key_range - 1))
    for v in vertexes:
        structure.execute([Operation(OpType.INSERT_VERTEX, v)])
        for _ in range(4):
            e = rng.randrange(1, key_range)
            structure.execute([Operation(OpType.INSERT_EDGE, v, e)])


def _worker(structure, spec: WorkloadSpec, tid: int, barrier: Barrier, out: list) -> None:
    rng = random.Random(f"{spec.seed}:{tid}")
    size = spec.txn_size
    commits = aborts = 0
    barrier.wait()
    for _ in range(spec.txns_per_thread):
        ops = [_random_op(rng, spec.mix, spec.key_range) for _ in range(size)]
        status, _ = structure.execute(ops)
        if status is TxStatus.COMMITTED:
            commits += 1
        else:
            aborts += 1
    out[tid] = (commits, aborts)
    barrier.wait()


def run_bench(spec: WorkloadSpec) -> BenchReport:
    spec.validate()
    report = BenchReport()
    for threads in spec.thread_counts:
        structure = make_structure(spec.system, spec.key_range)
        prepopulate(structure, spec.key_range, spec.seed)
        barrier = Barrier(threads + 1)
        out: list = [None] * threads
        workers = [
            Thread(target=_worker, args=(structure, spec, tid, barrier, out), daemon=True)
            for tid in range(threads)
        ]
        for w in workers:
            w.start()
        barrier.wait()  # release the measured section
        start = time.perf_counter()
        barrier.wait()  # every worker finished
        wall = time.perf_counter() - start
        for w in workers:
            w.join()
        commits = sum(c for c, _ in out)
        aborts = sum(a for _, a in out)
        committed_ops = commits * spec.txn_size
        report.rows.append(
            BenchRow(
                system=spec.system,
                threads=threads,
                ops_per_sec=committed_ops / wall if wall > 0 else 0.0,
                commits=commits,
                aborts=aborts,
                wall_ms=wall * 1000.0,
            )
        )
    return report


def emit_report(report: BenchReport, fmt: str = "csv", out: Union[str, IO[str], None] = None) -> str:
    """Render and optionally write the report; returns the rendered text."""
    if fmt == "csv":
        lines = [CSV_HEADER]
        for r in report.rows:
            lines.append(
                f"{r.system},{r.threads},{r.ops_per_sec:.1f},{r.commits},{r.aborts},{r.wall_ms:.1f}"
            )
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        text = json.dumps(
            [
                {
                    "system": r.system,
                    "threads": r.threads,
                    "ops_per_sec": round(r.ops_per_sec, 1),
                    "commits": r.commits,
                    "aborts": r.aborts,
                    "wall_ms": round(r.wall_ms, 1),
                }
                for r in report.rows
            ],
            indent=2,
        ) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is None:
        pass
    elif isinstance(out, str):
        with open(out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return text


def _parse_mix(text: str) -> Tuple[int, int, int, int, int]:
    parts = text.split(",")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError(
            "mix needs five comma-separated percentages: InsertVertex,DeleteVertex,InsertEdge,DeleteEdge,Find"
        )
    try:
        mix = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return mix  # summing checked by WorkloadSpec.validate


def _parse_threads(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="txadjlist-bench",
        description="Workload benchmark for the transactional adjacency list",
    )
    parser.add_argument("--system", choices=("lftt", "boost"), default="lftt")
    parser.add_argument("--threads", type=_parse_threads, default=(1, 2, 4, 8), metavar="LIST")
    parser.add_argument("--txns", type=int, default=20_000, help="transactions per thread")
    parser.add_argument("--txn-size", type=int, default=4, help="operations per transaction")
    parser.add_argument("--key-range", type=int, default=500)
    parser.add_argument(
        "--mix",
        type=_parse_mix,
        default=None,
        metavar="a,b,c,d,e",
        help="percent InsertVertex,DeleteVertex,InsertEdge,DeleteEdge,Find",
    )
    parser.add_argument("--preset", choices=sorted(PRESETS), default=None)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, metavar="PATH")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.mix is not None and args.preset is not None:
        parser.error("--mix and --preset are mutually exclusive")
    mix = PRESETS[args.preset] if args.preset else (args.mix or PRESETS["vertex-heavy"])
    spec = WorkloadSpec(
        mix=mix,
        txn_size=args.txn_size,
        txns_per_thread=args.txns,
        key_range=args.key_range,
        thread_counts=args.threads,
        system=args.system,
        seed=args.seed,
    )
    try:
        spec.validate()
    except ValueError as exc:
        parser.error(str(exc))
    report = run_bench(spec)
    text = emit_report(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
