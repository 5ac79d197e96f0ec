"""Replicate suites over (policy, buffer length, dimension, noise) grids.

Each grid cell is run for a fixed number of seeded replicates; per-cell
loss curves are reduced to median and quartiles per experiment index and
written as long-format CSV plus three-panel SVG charts (loss vs
experiment count, loss vs effective time, inter-quartile range vs
experiment count). Replicate seeds are paired across cells so policy
comparisons share initialization points. Output bytes depend only on the
suite configuration, never on the worker count.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import groupby
from multiprocessing import get_context
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from asyncbo.acquisition import AcquisitionConfig
from asyncbo.campaign import CampaignConfig, CampaignError, CampaignTrace, run_campaign
from asyncbo.policies import Policy, parse_policy
from asyncbo.tripeak import TriPeakSpec

CSV_HEADER = (
    "policy,buffer_length,dimension,noise_std,experiment,effective_time,median_loss,q25,q75"
)

#: Desk-scale defaults, scaled down from 200-replicate campaigns.
DEFAULT_REPLICATES = 50
DEFAULT_BUDGET = 200


@dataclass(frozen=True, order=True)
class CellKey:
    """One grid cell: policy at a buffer length on a surrogate setting."""

    policy: str
    buffer_length: int
    dimension: int
    noise_std: float


@dataclass(frozen=True)
class SuiteConfig:
    """Grid specification plus replicate and seeding settings.

    ``buffers`` containing 0 (or ``policies`` containing "serial") adds a
    serial baseline cell per (dimension, noise); nonzero buffer lengths
    pair with every non-serial policy listed.
    """

    policies: tuple[str, ...]
    buffers: tuple[int, ...]
    dims: tuple[int, ...]
    noise: tuple[float, ...]
    replicates: int = DEFAULT_REPLICATES
    budget: int = DEFAULT_BUDGET
    init_count: int = 5
    seed: int = 2024
    candidates_per_dim: int = 1024
    output_dir: str = "bench-out"

    def __post_init__(self):
        object.__setattr__(self, "policies", tuple(self.policies))
        object.__setattr__(self, "buffers", tuple(int(b) for b in self.buffers))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "noise", tuple(float(n) for n in self.noise))
        for name in self.policies:
            parse_policy(name)
        if self.replicates < 2:
            raise ValueError("replicates must be >= 2 so quartiles are defined")
        if not self.policies or not self.buffers or not self.dims or not self.noise:
            raise ValueError("policies, buffers, dims and noise must all be non-empty")

    def cells(self) -> list[CellKey]:
        keys = set()
        async_policies = [p for p in self.policies if p != Policy.SERIAL.value]
        include_serial = Policy.SERIAL.value in self.policies or 0 in self.buffers
        for d in self.dims:
            for n in self.noise:
                if include_serial:
                    keys.add(CellKey(Policy.SERIAL.value, 0, d, n))
                for p in async_policies:
                    for b in self.buffers:
                        if b > 0:
                            keys.add(CellKey(p, b, d, n))
        return sorted(keys)

    def campaign_config(self, cell: CellKey, replicate: int) -> CampaignConfig:
        return CampaignConfig(
            policy=parse_policy(cell.policy),
            buffer_length=cell.buffer_length,
            dimension=cell.dimension,
            noise_std=cell.noise_std,
            budget=self.budget,
            init_count=self.init_count,
            seed=self.seed + replicate,
            acquisition=AcquisitionConfig(candidates_per_dim=self.candidates_per_dim),
        )


@dataclass(frozen=True)
class AggregateCurves:
    """Median/quartile loss and effective time per experiment index."""

    policy: str
    buffer_length: int
    dimension: int
    noise_std: float
    effective_time: np.ndarray
    median_loss: np.ndarray
    q25: np.ndarray
    q75: np.ndarray
    iqr: np.ndarray = field(init=False)

    def __post_init__(self):
        for name in ("effective_time", "median_loss", "q25", "q75"):
            a = np.ascontiguousarray(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if not (
            len(self.median_loss)
            == len(self.q25)
            == len(self.q75)
            == len(self.effective_time)
        ):
            raise ValueError("curve arrays must have equal length")
        if np.any(self.q25 > self.median_loss) or np.any(self.median_loss > self.q75):
            raise ValueError("quartiles must bracket the median")
        iqr = self.q75 - self.q25
        iqr.setflags(write=False)
        object.__setattr__(self, "iqr", iqr)

    @property
    def cell(self) -> CellKey:
        return CellKey(self.policy, self.buffer_length, self.dimension, self.noise_std)

    def label(self) -> str:
        if self.buffer_length == 0:
            return self.policy
        return f"{self.policy}/{self.buffer_length}"


def aggregate(traces: list[CampaignTrace]) -> AggregateCurves:
    """Reduce replicate traces to per-index median and quartile curves.

    Quantiles interpolate linearly between order statistics.
    """
    if len(traces) < 2:
        raise ValueError("need at least 2 traces to aggregate")
    budgets = {len(t) for t in traces}
    if len(budgets) != 1:
        raise ValueError(f"ragged traces: budgets {sorted(budgets)}")
    cfg = traces[0].config
    for t in traces[1:]:
        same = (
            t.config.policy is cfg.policy
            and t.config.buffer_length == cfg.buffer_length
            and t.config.dimension == cfg.dimension
            and t.config.noise_std == cfg.noise_std
        )
        if not same:
            raise ValueError("traces come from different grid cells")
    losses = np.stack([t.loss for t in traces])
    q25, median, q75 = np.quantile(losses, [0.25, 0.5, 0.75], axis=0)
    return AggregateCurves(
        policy=cfg.policy.value,
        buffer_length=cfg.buffer_length,
        dimension=cfg.dimension,
        noise_std=cfg.noise_std,
        effective_time=traces[0].effective_time,
        median_loss=median,
        q25=q25,
        q75=q75,
    )


# --- CSV ---


def _fmt(v: float) -> str:
    return repr(float(v))


def write_csv(curves: list[AggregateCurves], path) -> None:
    """Long-format CSV, one row per cell per experiment index.

    Floats are written as shortest round-trip decimals and rows are sorted
    by (policy, buffer_length, dimension, noise_std, experiment), so equal
    inputs produce byte-identical files.
    """
    if not curves:
        raise ValueError("no curves to write")
    rows = []
    for c in sorted(curves, key=lambda c: c.cell):
        for k in range(len(c.median_loss)):
            rows.append(
                (
                    c.policy,
                    str(c.buffer_length),
                    str(c.dimension),
                    _fmt(c.noise_std),
                    str(k + 1),
                    _fmt(c.effective_time[k]),
                    _fmt(c.median_loss[k]),
                    _fmt(c.q25[k]),
                    _fmt(c.q75[k]),
                )
            )
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    Path(path).write_text(buf.getvalue())


def read_csv(path) -> list[AggregateCurves]:
    """Inverse of :func:`write_csv`; values round-trip exactly."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise ValueError(f"unexpected CSV header in {path}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"no data rows in {path}")
    curves = []
    for key, group in groupby(rows, key=lambda r: r[:4]):
        group = list(group)
        experiments = [int(r[4]) for r in group]
        if experiments != list(range(1, len(group) + 1)):
            raise ValueError(f"non-contiguous experiment indices for cell {key} in {path}")
        curves.append(
            AggregateCurves(
                policy=key[0],
                buffer_length=int(key[1]),
                dimension=int(key[2]),
                noise_std=float(key[3]),
                effective_time=np.array([float(r[5]) for r in group]),
                median_loss=np.array([float(r[6]) for r in group]),
                q25=np.array([float(r[7]) for r in group]),
                q75=np.array([float(r[8]) for r in group]),
            )
        )
    return curves


# --- suite execution ---


def _run_cell_replicate(cfg: CampaignConfig) -> CampaignTrace:
    surrogate = TriPeakSpec(dimension=cfg.dimension, noise_std=cfg.noise_std)
    # Single-threaded BLAS: faster at campaign-sized problems, avoids
    # oversubscription under the worker pool, and results are bitwise
    # independent of BLAS threading either way.
    with threadpool_limits(limits=1):
        return run_campaign(cfg, surrogate)


def _cell_filename(cell: CellKey) -> str:
    return (
        f"{cell.policy}_b{cell.buffer_length}_d{cell.dimension}_n{_fmt(cell.noise_std)}.csv"
    )


def _load_cell(path: Path, cell: CellKey, budget: int) -> AggregateCurves | None:
    """A cached cell file is reused only if it parses and is complete."""
    if not path.is_file():
        return None
    try:
        curves = read_csv(path)
    except (ValueError, OSError):
        return None
    if len(curves) != 1 or curves[0].cell != cell or len(curves[0].median_loss) != budget:
        return None
    return curves[0]


@dataclass
class SuiteResult:
    curves: list[AggregateCurves]
    failures: dict[CellKey, str]
    cached: list[CellKey]
    csv_path: Path
    summary_path: Path


def run_suite(
    cfg: SuiteConfig,
    workers: int = 1,
    force: bool = False,
    log=None,
) -> SuiteResult:
    """Run every grid cell for ``cfg.replicates`` paired replicates.

    Campaigns are distributed over a process pool; traces are aggregated
    in replicate order once a cell is complete, so results are identical
    for any worker count. Cells whose output file already exists and is
    complete are skipped unless ``force`` is set. A failed campaign marks
    its cell as failed and the suite continues.
    """
    say = log if log is not None else (lambda msg: None)
    out = Path(cfg.output_dir)
    cell_dir = out / "cells"
    cell_dir.mkdir(parents=True, exist_ok=True)
    probe = out / ".write-probe"
    probe.write_text("")  # surfaces unwritable output before any campaign runs
    probe.unlink()

    cells = cfg.cells()
    curves_by_cell: dict[CellKey, AggregateCurves] = {}
    failures: dict[CellKey, str] = {}
    cached: list[CellKey] = []

    todo: list[CellKey] = []
    for cell in cells:
        hit = None if force else _load_cell(cell_dir / _cell_filename(cell), cell, cfg.budget)
        if hit is not None:
            curves_by_cell[cell] = hit
            cached.append(cell)
            say(f"cached {cell}")
        else:
            todo.append(cell)

    jobs = [(cell, r) for cell in todo for r in range(cfg.replicates)]
    traces: dict[tuple[CellKey, int], CampaignTrace] = {}
    errors: dict[tuple[CellKey, int], str] = {}

    if workers <= 1 or not jobs:
        for cell, r in jobs:
            try:
                traces[(cell, r)] = _run_cell_replicate(cfg.campaign_config(cell, r))
            except CampaignError as exc:
                errors[(cell, r)] = str(exc)
    else:
        # fork keeps plain scripts import-safe; spawn is the non-POSIX fallback
        try:
            ctx = get_context("fork")
        except ValueError:
            ctx = get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            futures = {
                (cell, r): pool.submit(_run_cell_replicate, cfg.campaign_config(cell, r))
                for cell, r in jobs
            }
            for key, fut in futures.items():
                exc = fut.exception()
                if exc is None:
                    traces[key] = fut.result()
                else:
                    errors[key] = str(exc)

    for cell in todo:
        bad = [r for r in range(cfg.replicates) if (cell, r) in errors]
        if bad:
            failures[cell] = f"replicate {bad[0]}: {errors[(cell, bad[0])]}"
            say(f"FAILED {cell}: {failures[cell]}")
            continue
        curve = aggregate([traces[(cell, r)] for r in range(cfg.replicates)])
        write_csv([curve], cell_dir / _cell_filename(cell))
        curves_by_cell[cell] = curve
        say(f"done {cell}")

    curves = [curves_by_cell[c] for c in cells if c in curves_by_cell]
    csv_path = out / "curves.csv"
    if curves:
        write_csv(curves, csv_path)
    summary_path = out / "summary.json"
    summary = {
        "replicates": cfg.replicates,
        "budget": cfg.budget,
        "seed": cfg.seed,
        "cells": [
            {
                "policy": c.policy,
                "buffer_length": c.buffer_length,
                "dimension": c.dimension,
                "noise_std": c.noise_std,
                "status": (
                    "failed" if c in failures else "cached" if c in cached else "ok"
                ),
                **({"error": failures[c]} if c in failures else {}),
            }
            for c in cells
        ],
    }
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    return SuiteResult(curves, failures, cached, csv_path, summary_path)


# --- presets mirroring the benchmark study at desk scale ---


def preset_figure2(**overrides) -> SuiteConfig:
    """All five buffer policies plus serial on the 5-D noiseless surrogate."""
    base = SuiteConfig(
        policies=("serial", "greedy", "pessimistic", "asc-pessimism", "desc-pessimism", "lcb-liar"),
        buffers=(0, 1, 2, 4, 9),
        dims=(5,),
        noise=(0.0,),
    )
    return replace(base, **overrides) if overrides else base


def preset_figure3(**overrides) -> SuiteConfig:
    """Pessimistic policy vs serial across dimensions 2..6, noiseless."""
    base = SuiteConfig(
        policies=("serial", "pessimistic"),
        buffers=(0, 1, 2, 4, 9),
        dims=(2, 3, 4, 5, 6),
        noise=(0.0,),
    )
    return replace(base, **overrides) if overrides else base


def preset_figure4(**overrides) -> SuiteConfig:
    """Pessimistic policy vs serial across dimensions under observation noise."""
    base = SuiteConfig(
        policies=("serial", "pessimistic"),
        buffers=(0, 1, 4, 9),
        dims=(2, 3, 4, 5, 6),
        noise=(0.01, 0.02, 0.05),
    )
    return replace(base, **overrides) if overrides else base


PRESETS = {
    "figure2": preset_figure2,
    "figure3": preset_figure3,
    "figure4": preset_figure4,
}
