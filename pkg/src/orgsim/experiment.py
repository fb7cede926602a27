"""Monte Carlo batch runner over societies plus CSV/JSON persistence.

Per-run seeds are base_seed + run_index, so results never depend on the
order in which runs execute and adding runs never perturbs existing ones.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .engine import run_simulation
from .types import RunResult, SocietyConfig, YearlyStats

RUN_CSV_HEADER = (
    "year,pct_cheaters_fired,pct_volunteer_monitors,n_private_traders,"
    "permission_granted,n_deaths,n_fired"
)
SUMMARY_CSV_HEADER = (
    "society,runs,permission_rate,mean_pct_fired_pre70,mean_pct_fired_post70"
)


@dataclass(slots=True)
class BatchSpec:
    """One batch: which societies, how many seeded runs each, where to."""

    societies: list[SocietyConfig]
    base_seed: int
    output_dir: Path
    runs_per_society: int = 30

    def validate(self) -> None:
        if self.runs_per_society < 1:
            raise ValueError("runs_per_society must be at least 1")
        labels = [c.label for c in self.societies]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate society labels in batch: {labels}")


@dataclass(slots=True)
class MeanYearlyStats:
    """Per-year arithmetic means across a society's runs."""

    year: int
    pct_cheaters_fired: float
    pct_volunteer_monitors: float
    n_private_traders: float
    permission_granted: float
    n_deaths: float
    n_fired: float


@dataclass(slots=True)
class SocietyAggregate:
    runs: int
    permission_rate: float
    mean_series: list[MeanYearlyStats]


@dataclass(slots=True)
class GridSummary:
    base_seed: int
    runs_per_society: int
    per_society: dict[str, SocietyAggregate] = field(default_factory=dict)


def aggregate(results: list[RunResult]) -> tuple[float, list[MeanYearlyStats]]:
    """Permission rate and per-year means over equal-length run series."""
    if not results:
        raise ValueError("cannot aggregate an empty result list")
    length = len(results[0].series)
    if any(len(r.series) != length for r in results):
        raise ValueError("run series have mixed lengths")
    n = len(results)
    granted = sum(1 for r in results if r.permission_ever_granted)
    means = []
    for year_index in range(length):
        rows = [r.series[year_index] for r in results]
        means.append(
            MeanYearlyStats(
                year=rows[0].year,
                pct_cheaters_fired=sum(s.pct_cheaters_fired for s in rows) / n,
                pct_volunteer_monitors=sum(s.pct_volunteer_monitors for s in rows) / n,
                n_private_traders=sum(s.n_private_traders for s in rows) / n,
                permission_granted=sum(s.permission_granted for s in rows) / n,
                n_deaths=sum(s.n_deaths for s in rows) / n,
                n_fired=sum(s.n_fired for s in rows) / n,
            )
        )
    return granted / n, means


def format_run_csv(result: RunResult) -> str:
    """Serialise one run; booleans as 0/1, reals with six decimals."""
    lines = [RUN_CSV_HEADER]
    for s in result.series:
        lines.append(
            f"{s.year},{s.pct_cheaters_fired:.6f},{s.pct_volunteer_monitors:.6f},"
            f"{s.n_private_traders},{int(s.permission_granted)},{s.n_deaths},{s.n_fired}"
        )
    return "\n".join(lines) + "\n"


def read_run_csv(path: Path) -> list[YearlyStats]:
    """Parse a per-run CSV back into yearly stats rows."""
    lines = path.read_text().splitlines()
    if not lines or lines[0] != RUN_CSV_HEADER:
        raise ValueError(f"{path}: missing or unexpected header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 7:
            raise ValueError(f"{path}: malformed row {line!r}")
        rows.append(
            YearlyStats(
                year=int(parts[0]),
                pct_cheaters_fired=float(parts[1]),
                pct_volunteer_monitors=float(parts[2]),
                n_private_traders=int(parts[3]),
                permission_granted=parts[4] == "1",
                n_deaths=int(parts[5]),
                n_fired=int(parts[6]),
            )
        )
    return rows


def _simulate_task(task: tuple[SocietyConfig, int]) -> RunResult:
    config, seed = task
    return run_simulation(config, seed)


def run_batch(
    spec: BatchSpec, jobs: int | None = None, progress=None
) -> GridSummary:
    """Run the whole batch, write per-run CSVs and summaries, aggregate.

    Results are keyed by (society, seed) so the summary does not depend on
    worker scheduling. All output is created under spec.output_dir:
    <label>/run_<seed>.csv per run, plus summary.csv and summary.json.
    """
    spec.validate()
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for config in spec.societies:
        (out / config.label).mkdir(exist_ok=True)

    tasks = [
        (config, spec.base_seed + index)
        for config in spec.societies
        for index in range(spec.runs_per_society)
    ]
    if jobs is None:
        jobs = os.cpu_count() or 1

    if jobs <= 1:
        results = map(_simulate_task, tasks)
    else:
        executor = ProcessPoolExecutor(max_workers=jobs)
        results = executor.map(_simulate_task, tasks, chunksize=1)

    by_society: dict[str, list[RunResult]] = {c.label: [] for c in spec.societies}
    for (config, seed), result in zip(tasks, results):
        (out / config.label / f"run_{seed}.csv").write_text(format_run_csv(result))
        by_society[config.label].append(result)
        if progress is not None:
            progress(config.label, seed)
    if jobs > 1:
        executor.shutdown()

    summary = GridSummary(base_seed=spec.base_seed, runs_per_society=spec.runs_per_society)
    for config in spec.societies:
        rate, means = aggregate(by_society[config.label])
        summary.per_society[config.label] = SocietyAggregate(
            runs=spec.runs_per_society, permission_rate=rate, mean_series=means
        )
    reform_years = {c.label: c.reform_year for c in spec.societies}
    write_summary_csv(out / "summary.csv", summary, reform_years)
    write_summary_json(out / "summary.json", summary)
    return summary


def write_summary_csv(
    path: Path, summary: GridSummary, reform_years: dict[str, int]
) -> None:
    """Society-level summary; fired percentages split at the reform year."""
    lines = [SUMMARY_CSV_HEADER]
    for label in sorted(summary.per_society):
        agg = summary.per_society[label]
        reform = reform_years[label]
        pre = [m.pct_cheaters_fired for m in agg.mean_series if m.year < reform]
        post = [m.pct_cheaters_fired for m in agg.mean_series if m.year >= reform]
        mean_pre = sum(pre) / len(pre) if pre else 0.0
        mean_post = sum(post) / len(post) if post else 0.0
        lines.append(
            f"{label},{agg.runs},{agg.permission_rate:.6f},"
            f"{mean_pre:.6f},{mean_post:.6f}"
        )
    path.write_text("\n".join(lines) + "\n")


def write_summary_json(path: Path, summary: GridSummary) -> None:
    payload = {
        "base_seed": summary.base_seed,
        "runs_per_society": summary.runs_per_society,
        "societies": {
            label: {
                "runs": agg.runs,
                "permission_rate": agg.permission_rate,
                "mean_series": [
                    {
                        "year": m.year,
                        "pct_cheaters_fired": m.pct_cheaters_fired,
                        "pct_volunteer_monitors": m.pct_volunteer_monitors,
                        "n_private_traders": m.n_private_traders,
                        "permission_granted": m.permission_granted,
                        "n_deaths": m.n_deaths,
                        "n_fired": m.n_fired,
                    }
                    for m in agg.mean_series
                ],
            }
            for label, agg in sorted(summary.per_society.items())
        },
    }
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
