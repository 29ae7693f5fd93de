"""Timing harness and comparison statistics for the update strategies.

Each seed yields one trace; every strategy consumes that byte-identical
trace, and only the per-action state update (including cache lookup and
store) is timed on the monotonic clock. Digest sequences are
cross-checked across strategies before any timing is reported, so a
semantically broken cache can never masquerade as a fast one.
"""

from __future__ import annotations

import csv
import json
import math
import os
import platform
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats as scipy_stats

from .caches import make_strategy, resolve_strategy_name
from .collection import Collection
from .simulator import SessionTrace, generate_session


class DigestMismatchError(RuntimeError):
    """Strategies disagreed on a browsing state: an implementation bug."""


@dataclass
class RunResult:
    """One strategy's timed pass over one trace."""

    strategy: str
    durations_us: list[float]
    cache_stats: dict[str, int]
    digests: list[tuple[bytes, bytes]]
    hit_flags: list[bool]

    @property
    def cumulative_us(self) -> float:
        return sum(self.durations_us)

    @property
    def final_digest(self) -> tuple[bytes, bytes]:
        return self.digests[-1]


def run_trace_timed(c: Collection, trace: SessionTrace, strategy: str,
                    warmup: int = 1) -> RunResult:
    """Replay a trace, timing each state update in microseconds.

    Warm-up replays (fresh caches, nothing recorded) amortize cold-start
    effects; pass ``warmup=0`` for a cold run. Digest recording happens
    outside the timed window, so timing never changes semantics.
    """
    name = resolve_strategy_name(strategy)
    for _ in range(warmup):
        strat = make_strategy(name)
        state = strat.begin(c)
        for action in trace.actions:
            state, _ = strat.apply(c, state, action)

    strat = make_strategy(name)
    state = strat.begin(c)
    digests = [(state.filtered.canonical_bytes(), state.selectable.canonical_bytes())]
    durations: list[float] = []
    hits: list[bool] = []
    apply = strat.apply
    clock = time.perf_counter_ns
    for action in trace.actions:
        t0 = clock()
        state, hit = apply(c, state, action)
        t1 = clock()
        durations.append((t1 - t0) / 1000.0)
        hits.append(hit)
        digests.append((state.filtered.canonical_bytes(),
                        state.selectable.canonical_bytes()))
    return RunResult(name, durations, strat.stats.as_dict(), digests, hits)


def improvement_percent(query_time: float, resource_time: float) -> float:
    """Relative time saved by the second strategy, in percent (may be negative)."""
    if query_time <= 0:
        raise ValueError("query_time must be positive")
    return 100.0 * (query_time - resource_time) / query_time


@dataclass(frozen=True)
class WilcoxonResult:
    """Signed-rank comparison of paired timings.

    ``mean_rank_first`` averages the ranks of pairs where the first
    element was smaller (.0 when there are none), ``mean_rank_second``
    those where the second was smaller; this matches how paired-test
    rank tables are conventionally reported.
    """

    w: float
    z: float
    p: float
    mean_rank_first: float
    mean_rank_second: float
    n_nonzero: int

    def as_dict(self) -> dict[str, float]:
        return {"w": self.w, "z": self.z, "p": self.p,
                "mean_rank_first": self.mean_rank_first,
                "mean_rank_second": self.mean_rank_second,
                "n_nonzero": self.n_nonzero}


def wilcoxon_signed_rank(pairs: list[tuple[float, float]]) -> WilcoxonResult:
    """Two-tailed Wilcoxon signed-rank test via the normal approximation.

    Zero differences are dropped; absolute differences are ranked with
    average ranks on ties; W is the smaller of the signed rank sums. The
    Z score follows the plain large-sample formula (how statistics
    packages report it) and is negative when the second elements tend to
    be smaller, positive in the opposite direction. The p-value applies
    a 0.5 continuity correction, which keeps it within 0.05 of the exact
    permutation probability even for n as small as 5 on untied data.
    """
    diffs = [a - b for a, b in pairs if a != b]
    n = len(diffs)
    if n < 5:
        raise ValueError("too few non-zero differences")
    ranks = scipy_stats.rankdata([abs(d) for d in diffs])
    w_plus = float(sum(r for r, d in zip(ranks, diffs) if d > 0))
    w_minus = float(sum(r for r, d in zip(ranks, diffs) if d < 0))
    w = min(w_plus, w_minus)
    mean_w = n * (n + 1) / 4.0
    sd_w = math.sqrt(n * (n + 1) * (2 * n + 1) / 24.0)
    z_lower = (w - mean_w) / sd_w
    z = z_lower if w_minus <= w_plus else -z_lower
    z_corrected = min(0.0, (w + 0.5 - mean_w) / sd_w)
    p = min(1.0, 2.0 * float(scipy_stats.norm.cdf(z_corrected)))

    first_favored = [r for r, d in zip(ranks, diffs) if d < 0]
    second_favored = [r for r, d in zip(ranks, diffs) if d > 0]
    mean_rank_first = float(np.mean(first_favored)) if first_favored else 0.0
    mean_rank_second = float(np.mean(second_favored)) if second_favored else 0.0
    return WilcoxonResult(w, z, p, mean_rank_first, mean_rank_second, n)


def histogram(values: list[float], n_bins: int) -> list[tuple[float, int]]:
    """Equal-width histogram over [min, max]; the max lands in the last bin.

    A degenerate range (all values equal) collapses to a single occupied
    bin.
    """
    if not values:
        raise ValueError("empty input")
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    lo = min(values)
    hi = max(values)
    if lo == hi:
        return [(lo, len(values))]
    width = (hi - lo) / n_bins
    counts = [0] * n_bins
    for v in values:
        counts[min(int((v - lo) / width), n_bins - 1)] += 1
    return [(lo + i * width, counts[i]) for i in range(n_bins)]


def _environment_note() -> dict[str, object]:
    note: dict[str, object] = {
        "platform": platform.platform(),
        "processor": platform.processor() or platform.machine(),
        "python": platform.python_version(),
        "cpu_count": os.cpu_count(),
        "timer": "time.perf_counter_ns",
    }
    try:
        import psutil

        note["memory_gb"] = round(psutil.virtual_memory().total / 2**30, 1)
    except ImportError:
        pass
    return note


@dataclass
class SessionTiming:
    """Timing and cache stats of one seed under every strategy."""

    seed: int
    actions: int
    cumulative_us: dict[str, float]
    cache_stats: dict[str, dict[str, int]]


@dataclass
class BenchReport:
    strategies: tuple[str, ...]
    n_actions: int
    sessions: list[SessionTiming]
    improvements: list[float] | None
    improvement_mean: float | None
    improvement_ci95: tuple[float, float] | None
    histogram_bins: list[tuple[float, int]] | None
    wilcoxon: WilcoxonResult | None
    environment: dict[str, object]
    first_seed_series: dict[str, list[float]] | None = None

    def as_dict(self) -> dict[str, object]:
        return {
            "strategies": list(self.strategies),
            "n_actions": self.n_actions,
            "sessions": [
                {"seed": s.seed, "actions": s.actions,
                 "cumulative_us": s.cumulative_us, "cache_stats": s.cache_stats}
                for s in self.sessions
            ],
            "improvements_percent": self.improvements,
            "improvement_mean_percent": self.improvement_mean,
            "improvement_ci95_percent": list(self.improvement_ci95) if self.improvement_ci95 else None,
            "improvement_histogram": [
                {"lower_bound": lb, "count": n} for lb, n in self.histogram_bins
            ] if self.histogram_bins is not None else None,
            "wilcoxon": self.wilcoxon.as_dict() if self.wilcoxon else None,
            "environment": self.environment,
        }


def _bootstrap_ci(values: list[float], n_resamples: int = 2000,
                  seed: int = 0) -> tuple[float, float]:
    rng = np.random.default_rng(seed)
    arr = np.asarray(values)
    means = rng.choice(arr, size=(n_resamples, len(arr)), replace=True).mean(axis=1)
    lo, hi = np.percentile(means, [2.5, 97.5])
    return float(lo), float(hi)


def compare_strategies(c: Collection, seeds: list[int], n_actions: int,
                       strategies: tuple[str, ...] = ("query", "resource"),
                       warmup: int = 1, n_bins: int = 10,
                       keep_first_seed_series: bool = False,
                       ) -> BenchReport:
    """Benchmark the strategies over one trace per seed and compare.

    Improvement statistics, the histogram, and the Wilcoxon comparison
    are produced when both the query and the resource strategy ran;
    otherwise the report carries only the raw timings.
    """
    if not seeds:
        raise ValueError("at least one seed required")
    names = tuple(resolve_strategy_name(s) for s in strategies)
    sessions: list[SessionTiming] = []
    first_series: dict[str, list[float]] | None = None

    for seed in seeds:
        trace = generate_session(c, seed, n_actions)
        results = {name: run_trace_timed(c, trace, name, warmup) for name in names}
        reference = results[names[0]].digests
        for name in names[1:]:
            if results[name].digests != reference:
                raise DigestMismatchError(
                    f"seed {seed}: strategy {name!r} diverged from {names[0]!r}")
        sessions.append(SessionTiming(
            seed=seed,
            actions=len(trace.actions),
            cumulative_us={n: results[n].cumulative_us for n in names},
            cache_stats={n: results[n].cache_stats for n in names},
        ))
        if keep_first_seed_series and first_series is None:
            first_series = {n: results[n].durations_us for n in names}

    improvements = improvement_mean = ci = bins = wilcoxon = None
    if "query" in names and "resource" in names:
        pairs = [(s.cumulative_us["query"], s.cumulative_us["resource"])
                 for s in sessions]
        improvements = [improvement_percent(q, r) for q, r in pairs]
        improvement_mean = float(np.mean(improvements))
        ci = _bootstrap_ci(improvements)
        bins = histogram(improvements, n_bins)
        try:
            wilcoxon = wilcoxon_signed_rank(pairs)
        except ValueError:
            wilcoxon = None

    return BenchReport(names, n_actions, sessions, improvements,
                       improvement_mean, ci, bins, wilcoxon,
                       _environment_note(), first_series)


def write_bench_csv(report: BenchReport, path) -> None:
    """One row per (seed, strategy): timings plus cache counters."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "strategy", "actions", "cumulative_us",
                         "hits", "lookups", "stores", "entries"])
        for s in report.sessions:
            for name in report.strategies:
                cs = s.cache_stats[name]
                writer.writerow([s.seed, name, s.actions,
                                 f"{s.cumulative_us[name]:.3f}",
                                 cs["hits"], cs["lookups"], cs["stores"],
                                 cs["entries"]])


def write_report_json(report: BenchReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.as_dict(), fh, indent=2)
        fh.write("\n")


def write_cumulative_csv(report: BenchReport, path) -> None:
    """Per-action cumulative series of the first benchmarked seed."""
    if not report.first_seed_series:
        raise ValueError("report carries no per-action series")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["action_index", "strategy", "cumulative_us"])
        for name, durations in report.first_seed_series.items():
            acc = 0.0
            for i, d in enumerate(durations):
                acc += d
                writer.writerow([i, name, f"{acc:.3f}"])
