"""Run configuration, run records and their CSV/JSON persistence."""

from __future__ import annotations

import csv
import json
import statistics
import warnings
from dataclasses import asdict, dataclass, field, fields
from os import PathLike
from pathlib import Path
from typing import Iterable, Sequence

RUN_COLUMNS = ("instance", "seed", "mode", "f_best", "t_to_best", "gens", "succ")
SUMMARY_COLUMNS = (
    "instance", "mode", "runs", "f_bkv", "f_best", "f_avg", "t_avg",
    "gens_avg", "succ", "gap_best", "gap_avg",
)


class ObjectiveRedFlag(UserWarning):
    """A run beat a value that is proven optimal, which points at an objective bug."""


@dataclass(frozen=True)
class SizingParams:
    ps_max: int = 20
    ps_inc: int = 2
    max_idle_gens: int = 100
    max_idle_iters: int = 1000

    def __post_init__(self):
        if self.ps_max < 2:
            raise ValueError("ps_max must be >= 2")
        if self.ps_inc < 1:
            raise ValueError("ps_inc must be >= 1")
        if self.max_idle_gens < 1 or self.max_idle_iters < 1:
            raise ValueError("idle limits must be >= 1")


@dataclass(frozen=True)
class RunConfig:
    """Everything that parameterises a single solver run."""

    seed: int = 0
    mode: str = "vpms"
    time_limit: float | None = None
    max_generations: int | None = None
    sizing: SizingParams = field(default_factory=SizingParams)
    history_length: int = 50
    beta: float = 0.6
    crossover_p: float = 0.5
    threshold: int | None = None
    target: int | None = None

    def __post_init__(self):
        if self.mode not in ("vpms", "fpms"):
            raise ValueError(f"mode must be vpms or fpms, not {self.mode!r}")
        if self.time_limit is None and self.max_generations is None:
            raise ValueError("give a time limit, a generation budget or both")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.max_generations is not None and self.max_generations < 0:
            raise ValueError("generation budget must be non-negative")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        data["sizing"] = SizingParams(**data.get("sizing", {}))
        return cls(**data)


@dataclass
class RunRecord:
    instance: str
    seed: int
    mode: str
    f_best: int
    t_to_best: float
    gens: int
    succ: bool | None = None
    total_gens: int = 0
    elapsed: float = 0.0
    best_set: list[int] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    error: str | None = None

    def row(self) -> dict:
        out = {c: getattr(self, c) for c in RUN_COLUMNS}
        out["succ"] = "" if self.succ is None else int(self.succ)
        return out

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


def success(f_best: int, f_bkv: int | None, optimal: bool = False, instance: str = "") -> bool | None:
    """``f_best <= f_bkv``; warns when a proven optimum is beaten."""
    if f_bkv is None:
        return None
    if optimal and f_best < f_bkv:
        warnings.warn(
            f"{instance or 'instance'}: f={f_best} is below the proven optimum {f_bkv}",
            ObjectiveRedFlag,
            stacklevel=2,
        )
    return f_best <= f_bkv


def gap(f: float, f_bkv: int | None) -> float | None:
    if not f_bkv:
        return None
    return (f - f_bkv) / f_bkv


def summarize(records: Iterable[RunRecord], bkv: dict[str, int | None] | None = None) -> list[dict]:
    """Per (instance, mode) aggregates in the usual results-table layout."""
    bkv = bkv or {}
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for rec in records:
        if rec.error is None:
            groups.setdefault((rec.instance, rec.mode), []).append(rec)
    out = []
    for (name, mode), recs in sorted(groups.items()):
        f_bkv = bkv.get(name)
        vals = [r.f_best for r in recs]
        f_best = min(vals)
        f_avg = statistics.fmean(vals)
        succ = [r.succ for r in recs if r.succ is not None]
        out.append({
            "instance": name,
            "mode": mode,
            "runs": len(recs),
            "f_bkv": f_bkv,
            "f_best": f_best,
            "f_avg": f_avg,
            "t_avg": statistics.fmean(r.t_to_best for r in recs),
            "gens_avg": statistics.fmean(r.gens for r in recs),
            "succ": sum(succ) if succ else None,
            "gap_best": gap(f_best, f_bkv),
            "gap_avg": gap(f_avg, f_bkv),
        })
    return out


def summary_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}_summary{path.suffix}")


def export_results(
    records: Sequence[RunRecord],
    path: str | PathLike,
    fmt: str | None = None,
    bkv: dict[str, int | None] | None = None,
) -> None:
    """Write runs and per-instance aggregates.

    CSV writes the runs to ``path`` with columns
    ``instance,seed,mode,f_best,t_to_best,gens,succ`` and the aggregates to
    ``<stem>_summary.csv`` with columns ``SUMMARY_COLUMNS``. JSON writes a
    single document ``{"runs": [...], "summary": [...]}`` whose run entries
    also carry the full configuration and the best node set.
    """
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    rows = sorted(records, key=lambda r: (r.instance, r.mode, r.seed))
    summary = summarize(rows, bkv)
    if fmt == "json":
        doc = {"runs": [asdict(r) for r in rows], "summary": summary}
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=RUN_COLUMNS)
        writer.writeheader()
        for rec in rows:
            if rec.error is None:
                writer.writerow(rec.row())
    with open(summary_path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        for row in summary:
            writer.writerow({k: "" if v is None else v for k, v in row.items()})


def load_results(path: str | PathLike) -> list[RunRecord]:
    """Read runs written by :func:`export_results` (either format)."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        return [RunRecord.from_dict(d) for d in doc["runs"]]
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(RunRecord(
                instance=row["instance"],
                seed=int(row["seed"]),
                mode=row["mode"],
                f_best=int(row["f_best"]),
                t_to_best=float(row["t_to_best"]),
                gens=int(row["gens"]),
                succ=None if row["succ"] == "" else bool(int(row["succ"])),
            ))
    return out
