"""Log-log (lambda, r_C) exclusion grid."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .channels import evaluate, get_channel
from .config import GridConfig, RunConfig
from .cslcore import STANDARD_LAMBDA, CslParams
from .results import FLAG_DUBIOUS, ChannelResult
from .units import Qty, q

__all__ = [
    "Verdict",
    "CellEntry",
    "ExclusionGrid",
    "COMBINED",
    "CSV_COLUMNS",
    "log_axis",
    "classify",
    "combine",
    "scan",
]

COMBINED = "combined"
CSV_COLUMNS = ("lambda_s_inv", "r_c_cm", "channel", "verdict", "bound_s_inv", "multiplier", "flags")


class Verdict(str, Enum):
    ALLOWED = "Allowed"
    EXCLUDED = "Excluded"
    LOWER_BOUND_UNMET = "LowerBoundUnmet"
    FLAGGED = "Flagged"


@dataclass(frozen=True)
class CellEntry:
    channel: str
    verdict: Verdict
    bound: float
    flags: tuple[str, ...] = ()

    @property
    def multiplier(self) -> float:
        return self.bound / STANDARD_LAMBDA.value


def log_axis(lo: float, hi: float, n: int, unit: str) -> list[Qty]:
    if not (0 < lo < hi) or n < 1:
        if n == 1 and 0 < lo == hi:
            return [q(lo, unit)]
        raise ValueError("axis needs 0 < min < max and at least one point")
    if n == 1:
        return [q(lo, unit)]
    return [q(float(v), unit) for v in np.logspace(math.log10(lo), math.log10(hi), n)]


def _edge_shift(edge: str, decades: float) -> float:
    # how far, in decades, the comparison threshold sits beyond the central bound
    return {"permissive": decades, "central": 0.0, "strict": -decades}[edge]


def classify(result: ChannelResult, lam: float, edge: str = "permissive") -> Verdict:
    """Verdict of one channel for a trial lambda at the r_C the result was evaluated for."""
    shift = 10.0 ** _edge_shift(edge, result.uncertainty_decades)
    b = result.lambda_bound.value
    if result.kind == "upper":
        hit = lam > b * shift
        bad = Verdict.EXCLUDED
    else:
        hit = lam < b / shift
        bad = Verdict.LOWER_BOUND_UNMET
    if not hit:
        return Verdict.ALLOWED
    return Verdict.FLAGGED if FLAG_DUBIOUS in result.flags else bad


def combine(results: Sequence[ChannelResult], verdicts: Sequence[Verdict]) -> CellEntry:
    """Overall verdict from the channels allowed to combine; exclusion wins over a missed lower bound."""
    use = [(r, v) for r, v in zip(results, verdicts) if r.combines]
    uppers = [r.lambda_bound.value for r, _ in use if r.kind == "upper"]
    bound = min(uppers) if uppers else math.inf
    vs = {v for _, v in use}
    if Verdict.EXCLUDED in vs:
        v = Verdict.EXCLUDED
    elif Verdict.LOWER_BOUND_UNMET in vs:
        v = Verdict.LOWER_BOUND_UNMET
    else:
        v = Verdict.ALLOWED
    return CellEntry(COMBINED, v, bound)


def _row(args) -> list[list[CellEntry]]:
    """All cells with one fixed r_C; runs in worker processes."""
    rc, lambdas, channels, models, edge = args
    out = []
    for lam in lambdas:
        p = CslParams.from_values(lam, rc)
        results = [evaluate(c, p, models) for c in channels]
        verdicts = [classify(r, lam, edge) for r in results]
        cells = [CellEntry(r.channel_id, v, r.lambda_bound.value, r.flags) for r, v in zip(results, verdicts)]
        cells.append(combine(results, verdicts))
        out.append(cells)
    return out


@dataclass(frozen=True)
class ExclusionGrid:
    lambda_axis: tuple[Qty, ...]
    rc_axis: tuple[Qty, ...]
    channels: tuple[str, ...]
    edge: str
    # cells[j][i]: r_C index j, lambda index i
    cells: tuple[tuple[tuple[CellEntry, ...], ...], ...]

    def __post_init__(self):
        for axis in (self.lambda_axis, self.rc_axis):
            vals = [a.value for a in axis]
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError("grid axes must be strictly increasing")
        want = set(self.channels) | {COMBINED}
        for row in self.cells:
            for cell in row:
                if {e.channel for e in cell} != want:
                    raise ValueError("every cell needs a verdict for every channel")

    def verdict(self, i_lambda: int, j_rc: int, channel: str) -> Verdict:
        return self.entry(i_lambda, j_rc, channel).verdict

    def entry(self, i_lambda: int, j_rc: int, channel: str) -> CellEntry:
        for e in self.cells[j_rc][i_lambda]:
            if e.channel == channel:
                return e
        raise KeyError(channel)

    def column(self, j_rc: int, channel: str) -> list[Verdict]:
        return [self.verdict(i, j_rc, channel) for i in range(len(self.lambda_axis))]

    def allowed_window(self, j_rc: int) -> tuple[float, float] | None:
        """Smallest and largest lambda whose combined verdict is Allowed in one r_C row."""
        ok = [self.lambda_axis[i].value for i, v in enumerate(self.column(j_rc, COMBINED)) if v is Verdict.ALLOWED]
        return (ok[0], ok[-1]) if ok else None

    def nearest_rc(self, rc: float) -> int:
        return int(np.argmin([abs(math.log(a.value / rc)) for a in self.rc_axis]))

    def records(self) -> Iterable[dict]:
        for j, rc in enumerate(self.rc_axis):
            for i, lam in enumerate(self.lambda_axis):
                for e in self.cells[j][i]:
                    yield {
                        "lambda_s_inv": lam.value,
                        "r_c_cm": rc.value,
                        "channel": e.channel,
                        "verdict": e.verdict.value,
                        "bound_s_inv": e.bound,
                        "multiplier": e.multiplier,
                        "flags": list(e.flags),
                    }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records():
            w.writerow(
                [
                    repr(r["lambda_s_inv"]),
                    repr(r["r_c_cm"]),
                    r["channel"],
                    r["verdict"],
                    repr(r["bound_s_inv"]),
                    repr(r["multiplier"]),
                    ";".join(r["flags"]),
                ]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "lambda_axis_s_inv": [a.value for a in self.lambda_axis],
            "rc_axis_cm": [a.value for a in self.rc_axis],
            "channels": list(self.channels) + [COMBINED],
            "edge": self.edge,
            "cells": list(self.records()),
        }
        return json.dumps(doc, indent=1, allow_nan=True) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def scan(
    channels: Sequence[str],
    grid: GridConfig,
    models: dict,
    workers: int = 1,
) -> ExclusionGrid:
    """Evaluate every channel in every cell.  Rows (fixed r_C) are the unit of parallel work."""
    channels = tuple(channels)
    if not channels:
        raise ValueError("no channels enabled")
    for c in channels:
        get_channel(c)
    if COMBINED in channels:
        raise ValueError(f"{COMBINED!r} is reserved")
    lam_axis = log_axis(grid.lambda_min, grid.lambda_max, grid.lambda_points, "s^-1")
    rc_axis = log_axis(grid.rc_min, grid.rc_max, grid.rc_points, "cm")
    lambdas = [a.value for a in lam_axis]
    jobs = [(rc.value, lambdas, channels, models, grid.edge) for rc in rc_axis]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves submission order, so rows come back in axis order
            rows = list(pool.map(_row, jobs))
    else:
        rows = [_row(j) for j in jobs]
    cells = tuple(tuple(tuple(c) for c in row) for row in rows)
    return ExclusionGrid(tuple(lam_axis), tuple(rc_axis), channels, grid.edge, cells)


def scan_config(cfg: RunConfig) -> ExclusionGrid:
    return scan(cfg.channels, cfg.grid, cfg.models, cfg.workers)
