"""Strategy switching: who wins where on the CSIT quality grid.

For every quality pair the three simple strategies (fdma, zfbf and -- in
the unmatched scenario -- s3) are scored by analytic sum DoF against the
optimal scheme.  A sweep rasterises the unit square (cells below the
diagonal are evaluated on the swapped pair, since relabelling the users
mirrors the problem) and labels each cell either with the winning simple
strategy or with "optimal-needed" when even the winner's ratio falls
below the threshold rho.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .channel import QualityPair, Scenario
from .schemes import analytic_sum_dof

#: Comparison slack: keeps exact ties (ratio == rho, equal sum DoF) stable
#: under floating-point noise.
_TIE_EPS = 1e-12

OPTIMAL_NEEDED = "optimal-needed"


@dataclass(frozen=True)
class SweepCell:
    beta: float
    alpha: float
    d_fdma: float
    d_zfbf: float
    d_s3: Optional[float]
    d_opt: float
    best: str
    ratio: float


def best_strategy(q: QualityPair, scenario: Scenario) -> SweepCell:
    """Score the simple strategies at one quality pair.

    ``best`` is the highest-DoF simple strategy, ties resolved by the
    fixed order fdma < zfbf < s3; ``ratio`` is its sum DoF over the
    optimal scheme's.
    """
    d_fdma = float(analytic_sum_dof("fdma", q, scenario))
    d_zfbf = float(analytic_sum_dof("zfbf", q, scenario))
    candidates = [("fdma", d_fdma), ("zfbf", d_zfbf)]
    d_s3: Optional[float] = None
    if scenario.kind == "unmatched":
        d_s3 = float(analytic_sum_dof("s3", q, scenario))
        candidates.append(("s3", d_s3))
    d_opt = float(analytic_sum_dof("optimal", q, scenario))
    best_name, best_value = candidates[0]
    for name, value in candidates[1:]:
        if value > best_value + _TIE_EPS:
            best_name, best_value = name, value
    return SweepCell(
        beta=float(q.beta), alpha=float(q.alpha),
        d_fdma=d_fdma, d_zfbf=d_zfbf, d_s3=d_s3, d_opt=d_opt,
        best=best_name, ratio=best_value / d_opt,
    )


@dataclass(frozen=True)
class SweepMap:
    scenario: str
    step: float
    rho: float
    cells: Tuple[SweepCell, ...]

    def label(self, cell: SweepCell) -> str:
        return OPTIMAL_NEEDED if cell.ratio < self.rho - _TIE_EPS else cell.best

    def counts_by_strategy(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for cell in self.cells:
            label = self.label(cell)
            counts[label] = counts.get(label, 0) + 1
        return counts

    def min_ratio(self) -> float:
        return min(cell.ratio for cell in self.cells)

    def argmin(self) -> List[Tuple[float, float]]:
        m = self.min_ratio()
        return [(c.beta, c.alpha) for c in self.cells if c.ratio <= m + 1e-9]

    def summary_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "step": self.step,
            "rho": self.rho,
            "min_ratio": self.min_ratio(),
            "argmin": [[b, a] for b, a in self.argmin()],
            "counts_by_strategy": self.counts_by_strategy(),
        }


def _grid(step: float) -> List[float]:
    if not 0 < step <= 0.1:
        raise ValueError(f"grid step must lie in (0, 0.1], got {step}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError(f"grid step must divide 1 evenly, got {step}")
    return [i / n for i in range(n + 1)]


def sweep(scenario: Scenario, step: float = 0.01, rho: float = 0.9) -> SweepMap:
    """Rasterise [0, 1]^2 row-major in beta, then alpha.

    Cells with alpha > beta are evaluated on the swapped pair (user
    relabelling) but keep their own grid coordinates.
    """
    if not 0 < rho <= 1:
        raise ValueError(f"ratio threshold rho must lie in (0, 1], got {rho}")
    grid = _grid(step)
    cells: List[SweepCell] = []
    for beta in grid:
        for alpha in grid:
            q = QualityPair(max(beta, alpha), min(beta, alpha))
            scored = best_strategy(q, scenario)
            cells.append(SweepCell(
                beta=beta, alpha=alpha,
                d_fdma=scored.d_fdma, d_zfbf=scored.d_zfbf, d_s3=scored.d_s3,
                d_opt=scored.d_opt, best=scored.best, ratio=scored.ratio,
            ))
    return SweepMap(scenario=scenario.kind, step=step, rho=rho, cells=tuple(cells))


def min_ratio(scenario: Scenario, step: float = 0.01) -> Tuple[float, List[Tuple[float, float]]]:
    """Worst best-simple-over-optimal ratio on the grid, with its argmin set."""
    m = sweep(scenario, step=step, rho=1.0)
    return m.min_ratio(), m.argmin()


CSV_HEADER = ["beta", "alpha", "d_fdma", "d_zfbf", "d_s3", "d_opt", "best", "ratio"]


def write_sweep_csv(m: SweepMap, stream: io.TextIOBase) -> None:
    """One row per cell; floats as repr so parsing the file is lossless."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for c in m.cells:
        writer.writerow([
            repr(c.beta), repr(c.alpha), repr(c.d_fdma), repr(c.d_zfbf),
            "" if c.d_s3 is None else repr(c.d_s3),
            repr(c.d_opt), c.best, repr(c.ratio),
        ])


def read_sweep_csv(stream: io.TextIOBase) -> List[SweepCell]:
    reader = csv.reader(stream)
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected sweep CSV header {header}")
    cells = []
    for row in reader:
        if not row:
            continue
        cells.append(SweepCell(
            beta=float(row[0]), alpha=float(row[1]),
            d_fdma=float(row[2]), d_zfbf=float(row[3]),
            d_s3=None if row[4] == "" else float(row[4]),
            d_opt=float(row[5]), best=row[6], ratio=float(row[7]),
        ))
    return cells


def write_summary_json(m: SweepMap, stream: io.TextIOBase) -> None:
    json.dump(m.summary_dict(), stream, indent=2, sort_keys=True)
    stream.write("\n")
