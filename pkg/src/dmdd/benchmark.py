"""Reconstruction / anticipation benchmark over a grid of experiment settings.

A run crosses datasets x input lengths x delay counts x horizons. Each
dataset is cut into non-overlapping windows; every window's input part is
fitted and forecast, and the errors over all windows of a dataset are
averaged. Cells that cannot be fitted (too many delays for the input length)
are kept in the report with an ``infeasible`` status.

The report JSON is a pure function of the configuration and inputs. Wall
clock timings go to a separate ``timings.json``.
"""

import csv
import json
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import __version__
from .dataio import Dataset, load_csv, second_difference, select_channels, window_split
from .embedding import Trajectory
from .dmd import FitOptions, fit_delayed, forecast_delayed, reconstruct_delayed
from .errors import DmddError, EmptyWindowsWarning, InputError
from .metrics import PredictionPair, mse, summarize
from .synth import SyntheticSpec, generate

TRANSFORMS = ("none", "second_difference")
KL_NOTE = (
    "kl is variant-defined: entries shifted by the joint minimum, offset by 1e-9 "
    "and normalised over the whole m x p block; not comparable to published KL tables"
)


@dataclass(frozen=True)
class DatasetSource:
    name: str
    path: Optional[str] = None
    synthetic: Optional[SyntheticSpec] = None
    sample_rate_hz: float = 50.0

    def load(self, base_dir: str = ".") -> Dataset:
        if self.synthetic is not None:
            traj, _ = generate(self.synthetic)
            return Dataset.from_trajectory(self.name, traj)
        path = self.path if os.path.isabs(self.path) else os.path.join(base_dir, self.path)
        return load_csv(path, self.sample_rate_hz, name=self.name)

    def to_dict(self) -> dict:
        doc = {"name": self.name, "sample_rate_hz": self.sample_rate_hz}
        if self.synthetic is not None:
            doc["synthetic"] = self.synthetic.to_dict()
        else:
            doc["path"] = self.path
        return doc


@dataclass(frozen=True)
class BenchmarkConfig:
    """Benchmark grid description; see ``README.md`` for the JSON schema."""

    datasets: List[DatasetSource]
    input_lens: List[int]
    horizons: List[int]
    delays: List[int]
    total_len: Optional[int] = None
    transform: str = "none"
    spatial_context: Optional[dict] = None
    metrics: List[str] = field(default_factory=lambda: ["mse", "kl"])
    options: FitOptions = field(default_factory=FitOptions)
    average_blocks: bool = False
    output_dir: Optional[str] = None
    base_dir: str = "."

    @classmethod
    def from_dict(cls, doc: dict, base_dir: str = ".") -> "BenchmarkConfig":
        try:
            sources = []
            for i, d in enumerate(doc["datasets"]):
                syn = d.get("synthetic")
                if (syn is None) == (d.get("path") is None):
                    raise InputError(f"dataset {i} needs exactly one of 'path' or 'synthetic'")
                sources.append(
                    DatasetSource(
                        name=d.get("name", f"dataset{i}"),
                        path=d.get("path"),
                        synthetic=SyntheticSpec.from_dict(syn) if syn is not None else None,
                        sample_rate_hz=float(d.get("sample_rate_hz", 50.0)),
                    )
                )
            cfg = cls(
                datasets=sources,
                input_lens=[int(v) for v in doc["input_lens"]],
                horizons=[int(v) for v in doc["horizons"]],
                delays=[int(v) for v in doc["delays"]],
                total_len=int(doc["total_len"]) if doc.get("total_len") is not None else None,
                transform=doc.get("transform", "none"),
                spatial_context=doc.get("spatial_context"),
                metrics=list(doc.get("metrics", ["mse", "kl"])),
                options=FitOptions(
                    rank_tol=float(doc.get("rank_tol", FitOptions.rank_tol)),
                    zero_eig_tol=float(doc.get("zero_eig_tol", FitOptions.zero_eig_tol)),
                    max_imag_residual=float(
                        doc.get("max_imag_residual", FitOptions.max_imag_residual)
                    ),
                ),
                average_blocks=bool(doc.get("average_blocks", False)),
                output_dir=doc.get("output_dir"),
                base_dir=base_dir,
            )
        except KeyError as exc:
            raise InputError(f"benchmark config is missing {exc}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"invalid benchmark config: {exc}") from exc
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "BenchmarkConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(doc, os.path.dirname(os.path.abspath(path)))

    def validate(self):
        for name in ("datasets", "input_lens", "horizons", "delays"):
            if not getattr(self, name):
                raise InputError(f"benchmark config: '{name}' must not be empty")
        if min(self.input_lens) < 1 or min(self.horizons) < 1 or min(self.delays) < 0:
            raise InputError("input lengths and horizons must be positive, delays non-negative")
        if self.transform not in TRANSFORMS:
            raise InputError(f"unknown transform {self.transform!r}; expected one of {TRANSFORMS}")
        unknown = set(self.metrics) - {"mse", "kl"}
        if unknown:
            raise InputError(f"unknown metrics {sorted(unknown)}")
        if self.spatial_context is not None:
            sc = self.spatial_context
            if "target" not in sc or not sc.get("subsets"):
                raise InputError("spatial_context needs 'target' and non-empty 'subsets'")

    def echo(self) -> dict:
        return {
            "average_blocks": self.average_blocks,
            "datasets": [d.to_dict() for d in self.datasets],
            "delays": self.delays,
            "horizons": self.horizons,
            "input_lens": self.input_lens,
            "max_imag_residual": self.options.max_imag_residual,
            "metrics": self.metrics,
            "rank_tol": self.options.rank_tol,
            "spatial_context": self.spatial_context,
            "total_len": self.total_len,
            "transform": self.transform,
            "zero_eig_tol": self.options.zero_eig_tol,
        }


def _selection(ds: Dataset, sel) -> Dataset:
    if isinstance(sel, dict):
        return select_channels(ds, sel.get("channels"), sel.get("markers"),
                               int(sel.get("coords_per_marker", 3)))
    return select_channels(ds, sel)


def _failure(exc: Exception) -> str:
    return f"failed: {type(exc).__name__}: {exc}"


class _Unit:
    """All cells that share one (dataset, input length, delay count) fit."""

    def __init__(self, cfg, ds, input_len, d, windows, window_status):
        self.cfg, self.ds, self.input_len, self.d = cfg, ds, input_len, d
        self.windows, self.window_status = windows, window_status

    def _fit_forecast(self, values_idx=None):
        """Fit every window; return (reconstruction pairs, forecasts, fit seconds)."""
        rec_pairs, forecasts, seconds = [], [], []
        h_max = max(self.cfg.horizons)
        for w in self.windows:
            traj = w.input
            if values_idx is not None:
                traj = type(traj)(traj.values[values_idx], traj.sample_rate_hz)
            t0 = time.perf_counter()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                model = fit_delayed(traj, self.d, self.cfg.options)
                seconds.append(time.perf_counter() - t0)
                rec = reconstruct_delayed(model)
                fc = forecast_delayed(model, h_max, self.cfg.average_blocks)
            rec_pairs.append(PredictionPair(traj.values[:, 1:], rec))
            forecasts.append(fc)
        return rec_pairs, forecasts, seconds

    def run(self):
        cfg = self.cfg
        key = {"dataset": self.ds.name, "input_len": self.input_len, "delays": self.d}
        status = self.window_status
        if status is None and self.d > self.input_len - 3:
            status = f"infeasible: d ≤ {self.input_len - 3}"
        rec_cell = dict(key)
        ant_cells = [dict(key, horizon=h) for h in cfg.horizons]
        timing = {}
        if status is None:
            try:
                rec_pairs, forecasts, seconds = self._fit_forecast()
                timing = {"fits": len(seconds), "mean_fit_seconds": float(np.mean(seconds))}
                if not all(np.all(np.isfinite(f)) for f in forecasts):
                    raise FloatingPointError("non-finite forecast")
                rec_cell.update(status="ok", count_K=len(rec_pairs), mse=mse(rec_pairs))
                if not np.isfinite(rec_cell["mse"]):
                    rec_cell.update(status="failed: non-finite reconstruction", mse=None)
                for cell, h in zip(ant_cells, cfg.horizons):
                    pairs = [PredictionPair(w.ground_truth[:, :h], f[:, :h])
                             for w, f in zip(self.windows, forecasts)]
                    s = summarize(pairs)
                    cell.update(status="ok", count_K=s.count, per_frame_mse=list(s.per_frame_mse))
                    if "mse" in cfg.metrics:
                        cell["mse"] = s.mse
                    if "kl" in cfg.metrics:
                        cell["kl"] = s.kl
            except (DmddError, FloatingPointError, np.linalg.LinAlgError) as exc:
                status = _failure(exc)
        if status is not None:
            rec_cell["status"] = status
            for cell in ant_cells:
                cell["status"] = status
        spatial = self._spatial() if cfg.spatial_context else []
        return rec_cell, ant_cells, spatial, timing

    def _spatial(self):
        cfg, sc = self.cfg, self.cfg.spatial_context
        out = []
        for name, sel in sc["subsets"].items():
            cells = [
                {"dataset": self.ds.name, "subset": name, "input_len": self.input_len,
                 "delays": self.d, "horizon": h}
                for h in cfg.horizons
            ]
            status = self.window_status
            if status is None and self.d > self.input_len - 3:
                status = f"infeasible: d ≤ {self.input_len - 3}"
            if status is None:
                try:
                    sub = _selection(self.ds, sel)
                    target = _selection(self.ds, sc["target"]).channel_labels
                    missing = [t for t in target if t not in sub.channel_labels]
                    if missing:
                        raise InputError(f"subset {name!r} lacks target channels {missing}")
                    sub_idx = [self.ds.channel_labels.index(lab) for lab in sub.channel_labels]
                    tgt_rows = [sub.channel_labels.index(t) for t in target]
                    tgt_src = [self.ds.channel_labels.index(t) for t in target]
                    _, forecasts, _ = self._fit_forecast(sub_idx)
                    for cell, h in zip(cells, cfg.horizons):
                        pairs = [PredictionPair(w.ground_truth[tgt_src, :h], f[tgt_rows, :h])
                                 for w, f in zip(self.windows, forecasts)]
                        value = mse(pairs)
                        if np.isfinite(value):
                            cell.update(status="ok", count_K=len(pairs), mse=value)
                        else:
                            cell["status"] = "failed: non-finite forecast"
                except (DmddError, FloatingPointError, np.linalg.LinAlgError) as exc:
                    status = _failure(exc)
            if status is not None:
                for cell in cells:
                    cell["status"] = status
            out.extend(cells)
        return out


def _units(cfg: BenchmarkConfig):
    h_max = max(cfg.horizons)
    units, load_failures = [], []
    for src in cfg.datasets:
        try:
            ds = src.load(cfg.base_dir)
            if cfg.transform == "second_difference":
                ds = second_difference(ds)
        except (DmddError, OSError) as exc:
            load_failures.append(src.name)
            ds = Dataset.from_trajectory(src.name, Trajectory(np.zeros((1, 1))))
            status = _failure(exc)
            units.extend(_Unit(cfg, ds, n_in, d, [], status)
                         for n_in in cfg.input_lens for d in cfg.delays)
            continue
        for n_in in cfg.input_lens:
            total = cfg.total_len if cfg.total_len is not None else n_in + h_max
            status, windows = None, []
            if n_in + h_max > total:
                status = f"infeasible: input {n_in} + horizon {h_max} exceeds window {total}"
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", EmptyWindowsWarning)
                    windows = window_split(ds, total, n_in, h_max)
                if not windows:
                    status = f"failed: fewer than {total} frames, no windows"
            units.extend(_Unit(cfg, ds, n_in, d, windows, status) for d in cfg.delays)
    return units


def run_benchmark(cfg: BenchmarkConfig, jobs: int = 1):
    """Evaluate the whole grid.

    Returns ``(report, timings)``; ``report`` is deterministic, ``timings``
    holds wall-clock fit times per (dataset, input length, delays) cell.
    """
    units = _units(cfg)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda u: u.run(), units))
    else:
        results = [u.run() for u in units]

    reconstruction, anticipation, spatial, timings = [], [], [], []
    for unit, (rec, ant, spa, timing) in zip(units, results):
        reconstruction.append(rec)
        anticipation.extend(ant)
        spatial.extend(spa)
        if timing:
            timings.append({"dataset": unit.ds.name, "input_len": unit.input_len,
                            "delays": unit.d, **timing})
    report = {
        "tool": {"name": "dmdd", "version": __version__},
        "config": cfg.echo(),
        "notes": {"kl": KL_NOTE},
        "reconstruction": reconstruction,
        "anticipation": anticipation,
    }
    if cfg.spatial_context:
        report["spatial_context"] = spatial
    return report, {"tool_version": __version__, "cells": timings}


def succeeded(report) -> bool:
    cells = report["anticipation"] + report["reconstruction"] + report.get("spatial_context", [])
    return any(c["status"] == "ok" for c in cells)


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])


def error_vs_input_length(report) -> list:
    """Mean anticipation MSE over datasets per (delays, horizon, input_len)."""
    groups = {}
    for c in report["anticipation"]:
        if c["status"] == "ok" and "mse" in c:
            groups.setdefault((c["delays"], c["horizon"], c["input_len"]), []).append(c["mse"])
    cfg = report["config"]
    rows = []
    for d in cfg["delays"]:
        for h in cfg["horizons"]:
            for n_in in cfg["input_lens"]:
                vals = groups.get((d, h, n_in))
                if vals:
                    rows.append([d, h, n_in, float(np.mean(vals)), len(vals)])
    return rows


def write_outputs(report, timings, out_dir) -> List[str]:
    """Write the report JSON, timings and plot-ready CSV files into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def target(name):
        p = os.path.join(out_dir, name)
        written.append(p)
        return p

    with open(target("report.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(report))
    with open(target("timings.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(timings))
    _write_rows(
        target("reconstruction_vs_delay.csv"),
        ["dataset", "input_len", "delays", "status", "mse"],
        [[c["dataset"], c["input_len"], c["delays"], c["status"], c.get("mse")]
         for c in report["reconstruction"]],
    )
    _write_rows(
        target("anticipation_vs_delay.csv"),
        ["dataset", "input_len", "delays", "horizon", "status", "mse", "kl"],
        [[c["dataset"], c["input_len"], c["delays"], c["horizon"], c["status"],
          c.get("mse"), c.get("kl")] for c in report["anticipation"]],
    )
    _write_rows(
        target("error_vs_input_length.csv"),
        ["delays", "horizon", "input_len", "mean_mse", "datasets"],
        error_vs_input_length(report),
    )
    if "spatial_context" in report:
        _write_rows(
            target("spatial_context.csv"),
            ["dataset", "subset", "input_len", "delays", "horizon", "status", "mse"],
            [[c["dataset"], c["subset"], c["input_len"], c["delays"], c["horizon"],
              c["status"], c.get("mse")] for c in report["spatial_context"]],
        )
    return written
