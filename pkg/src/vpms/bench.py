"""Benchmark registry, batch runs and the two-tailed sign test."""

from __future__ import annotations

import csv
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from os import PathLike
from pathlib import Path
from typing import Iterable, Sequence

from .graph import Graph, read_graph
from .population import vpms_solve
from .records import RunConfig, RunRecord

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InstanceMeta:
    name: str
    n: int
    m: int
    k: int
    f_bkv: int | None = None
    optimal: bool = False

    def __post_init__(self):
        if self.k >= self.n:
            raise ValueError(f"{self.name}: k={self.k} must be below n={self.n}")
        if self.optimal and self.f_bkv is None:
            raise ValueError(f"{self.name}: an optimal instance needs f_bkv")


# name, |V|, |E|, k, f_bkv, proven optimal
_TABLE = """
BA500 500 499 50 195 *
BA1000 1000 999 75 558 *
BA2500 2500 2499 100 3704 *
BA5000 5000 4999 150 10196 *
ER235 235 350 50 295 *
ER466 466 700 80 1524
ER941 941 1400 140 5012
ER2344 2344 3500 200 902498
FF250 250 514 50 194 *
FF500 500 828 110 257 *
FF1000 1000 1817 150 1260 *
FF2000 2000 3413 200 4545 *
WS250 250 1246 70 3083
WS500 500 1496 125 2072
WS1000 1000 4996 200 109807
WS1500 1500 4498 265 13098
Bovine 121 190 3 268
Circuit 252 399 25 2099
E.coli 328 456 15 806
USAir97 332 2126 33 4336
humanDisea 516 1188 52 1115
Treni_Roma 255 272 26 918
EU_flights 1191 31610 119 348268
openflights 1858 13900 186 26842
yeast1 2018 2705 202 1412
Ham1000 1000 1998 100 306349
Ham2000 2000 3996 200 1243859
Ham3000a 3000 5999 300 2844393
Ham3000b 3000 5997 300 2841270
Ham3000c 3000 5996 300 2838429
Ham3000d 3000 5993 300 2831311
Ham3000e 3000 5996 300 2847909
Ham4000 4000 7997 400 5044357
Ham5000 5000 9999 500 7972525
powergrid 4941 6594 494 15862
Oclinks 1899 13838 190 611326
facebook 4039 88234 404 420334
grqc 5242 14484 524 13596
hepth 9877 25973 988 106397
hepph 12008 118489 1201 6156536
astroph 18772 198050 1877 53963375
condmat 23133 93439 2313 2298596
"""


def load_registry(path: str | PathLike | None = None) -> list[InstanceMeta]:
    """The 42 standard CNP benchmark instances with best-known values.

    With ``path``, read a CSV with columns ``name,n,m,k,f_bkv,optimal``
    instead (``f_bkv`` may be empty; ``optimal`` is 0/1).
    """
    if path is not None:
        with open(path, newline="", encoding="utf-8") as fh:
            return [
                InstanceMeta(
                    row["name"], int(row["n"]), int(row["m"]), int(row["k"]),
                    int(row["f_bkv"]) if row.get("f_bkv") else None,
                    row.get("optimal", "0").strip().lower() in ("1", "true", "yes"),
                )
                for row in csv.DictReader(fh)
            ]
    out = []
    for line in _TABLE.strip().splitlines():
        name, n, m, k, bkv, *flag = line.split()
        out.append(InstanceMeta(name, int(n), int(m), int(k), int(bkv), bool(flag)))
    return out


def lookup(name: str, registry: Iterable[InstanceMeta] | None = None) -> InstanceMeta:
    key = name.lower()
    for meta in registry or load_registry():
        if meta.name.lower() == key:
            return meta
    raise KeyError(f"unknown instance {name!r}")


class InstanceMismatch(ValueError):
    pass


def find_instance_file(name: str, data_dir: str | PathLike) -> Path:
    """Locate ``<name>`` or ``<name>.<ext>`` under ``data_dir`` (case-insensitive)."""
    root = Path(data_dir)
    key = name.lower()
    if root.is_dir():
        for path in sorted(root.rglob("*")):
            if path.is_file() and (path.name.lower() == key or path.stem.lower() == key):
                return path
    raise FileNotFoundError(f"no instance file for {name} under {root}")


def load_instance(meta: InstanceMeta, data_dir: str | PathLike) -> Graph:
    """Read an instance and refuse it if its size disagrees with the registry."""
    g = read_graph(find_instance_file(meta.name, data_dir))
    if (g.node_count, g.edge_count) != (meta.n, meta.m):
        raise InstanceMismatch(
            f"{meta.name}: file has n={g.node_count}, m={g.edge_count}; "
            f"expected n={meta.n}, m={meta.m}"
        )
    return g


def _run_one(args) -> RunRecord:
    meta, g, config = args
    return vpms_solve(
        g, meta.k, config, instance=meta.name, f_bkv=meta.f_bkv, optimal=meta.optimal
    )


def run_batch(
    instances: Sequence[InstanceMeta],
    repeats: int,
    config: RunConfig,
    data_dir: str | PathLike,
    base_seed: int = 0,
    workers: int = 1,
) -> list[RunRecord]:
    """Run every instance ``repeats`` times with seeds ``base_seed, base_seed+1, ...``.

    A missing or mismatched instance file yields one error record for that
    instance and the batch moves on. Results come back sorted by
    (instance, seed) whatever order the workers finish in.
    """
    jobs = []
    records: list[RunRecord] = []
    if repeats <= 0:
        return records
    for meta in instances:
        try:
            g = load_instance(meta, data_dir)
        except (OSError, ValueError) as exc:
            log.error("%s: %s", meta.name, exc)
            records.append(RunRecord(meta.name, base_seed, config.mode, -1, 0.0, 0, error=str(exc)))
            continue
        for seed in range(base_seed, base_seed + repeats):
            jobs.append((meta, g, replace(config, seed=seed)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records.extend(pool.map(_run_one, jobs))
    else:
        records.extend(map(_run_one, jobs))
    records.sort(key=lambda r: (r.instance, r.seed))
    return records


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of a sign test.

    ``wins_a``/``wins_b`` count strict wins; ``score_a``/``score_b`` add half
    a point per tie and are what significance is judged on.
    """

    indicator: str
    instances: int
    wins_a: int
    wins_b: int
    ties: int
    critical_value: float
    alpha: float

    @property
    def score_a(self) -> float:
        return self.wins_a + self.ties / 2

    @property
    def score_b(self) -> float:
        return self.wins_b + self.ties / 2

    @property
    def threshold(self) -> int:
        # nearest integer: 27.35 at N=42 gives the usual cutoff of 27 wins
        return math.floor(self.critical_value + 0.5)

    @property
    def significant_a(self) -> bool:
        return self.score_a >= self.threshold

    @property
    def significant_b(self) -> bool:
        return self.score_b >= self.threshold

    @property
    def significant(self) -> bool:
        return self.significant_a or self.significant_b


def critical_value(n: int, alpha: float = 0.05) -> float:
    """Normal-approximation sign-test critical value ``N/2 + z * sqrt(N)/2``.

    ``z`` is the two-tailed normal quantile rounded to two decimals as in
    printed tables (1.96 at alpha = 0.05).
    """
    z = round(statistics.NormalDist().inv_cdf(1 - alpha / 2), 2)
    return n / 2 + z * math.sqrt(n) / 2


def _indicator(records: Iterable[RunRecord], indicator: str) -> dict[str, float]:
    groups: dict[str, list[int]] = {}
    for rec in records:
        if rec.error is None:
            groups.setdefault(rec.instance, []).append(rec.f_best)
    if indicator == "f_best":
        return {name: min(vals) for name, vals in groups.items()}
    if indicator == "f_avg":
        return {name: statistics.fmean(vals) for name, vals in groups.items()}
    raise ValueError(f"indicator must be f_best or f_avg, not {indicator!r}")


def sign_test(
    records_a: Iterable[RunRecord],
    records_b: Iterable[RunRecord],
    indicator: str = "f_best",
    alpha: float = 0.05,
) -> ComparisonReport:
    """Count per-instance wins (lower is better); ties give half a win to each side."""
    a = _indicator(records_a, indicator)
    b = _indicator(records_b, indicator)
    if a.keys() != b.keys():
        only = sorted(a.keys() ^ b.keys())
        raise ValueError(f"record sets cover different instances: {only}")
    wins_a = sum(1 for name in a if a[name] < b[name])
    wins_b = sum(1 for name in a if b[name] < a[name])
    ties = len(a) - wins_a - wins_b
    return ComparisonReport(indicator, len(a), wins_a, wins_b, ties, critical_value(len(a), alpha), alpha)
