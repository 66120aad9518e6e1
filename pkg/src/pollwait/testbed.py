"""Accuracy experiments: estimators versus simulation on parameter grids.

The standard grid crosses queue counts, loads, variability levels and two
kinds of imbalance into 2304 cases.  Each case is materialized into a
concrete system with linearly spread arrival rates (largest first) and
linearly increasing mean service times, scaled so the per-queue loads sum
to the case load and the overall mean interarrival time is one.

``run_comparison`` simulates each case, evaluates the requested
estimators, and collects signed relative errors per queue.  Cases whose
simulation confidence interval is too wide are flagged, never dropped.
Runs are deterministic for a given base seed, independent of the worker
count.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .approx import Method, mean_wait
from .errors import InvalidMoment
from .model import (
    Discipline,
    QueueSpec,
    SystemSpec,
    exact_density_mode,
)
from .sim import SimConfig, simulate

__all__ = [
    "TestBedCase",
    "ErrorRecord",
    "ErrorReport",
    "standard_bed",
    "poisson_bed",
    "high_variation_poisson_bed",
    "sampled_bed",
    "materialize_case",
    "is_exact_case",
    "detect_exact_cases",
    "run_comparison",
    "bin_table",
    "mean_error_by",
    "render_bin_table",
    "render_mean_table",
    "write_report_files",
    "report_to_csv",
    "report_from_csv",
    "three_queue_demo_spec",
    "two_queue_small_switchover_spec",
]

STANDARD_QUEUE_COUNTS = (2, 3, 4, 5)
STANDARD_LOADS = (0.1, 0.3, 0.5, 0.7, 0.9, 0.99)
STANDARD_SCV_INTERARRIVAL = (0.25, 1.0, 2.0)
STANDARD_SCV_SERVICE = (0.25, 1.0)
STANDARD_SCV_SWITCHOVER = (0.25, 1.0)
STANDARD_IMBALANCE = (1.0, 5.0)
STANDARD_RATIO = (1.0, 5.0)

# Tolerance for the two-queue load constraint that makes an imbalanced
# Poisson case exact.
TWO_QUEUE_EXACT_TOL = 1e-9

ENV_JOBS = "POLLWAIT_JOBS"


@dataclass(frozen=True)
class TestBedCase:
    """One parameter combination of the accuracy grid.

    ``imbalance_interarrival`` is the ratio of the largest to the smallest
    arrival rate, ``imbalance_service`` the ratio of the largest to the
    smallest mean service time, and ``switchover_service_ratio`` the ratio
    of each queue's mean switch-over to its mean service time.
    """

    __test__ = False  # not a pytest class despite the name

    n_queues: int
    rho: float
    scv_interarrival: float
    scv_service: float
    scv_switchover: float
    imbalance_interarrival: float
    imbalance_service: float
    switchover_service_ratio: float

    def __post_init__(self) -> None:
        if self.n_queues < 1:
            raise InvalidMoment(f"n_queues must be >= 1, got {self.n_queues}")
        if not 0.0 < self.rho < 1.0:
            raise InvalidMoment(f"rho must be in (0, 1), got {self.rho!r}")
        for label in ("scv_interarrival", "scv_service", "scv_switchover"):
            if getattr(self, label) < 0.0:
                raise InvalidMoment(f"{label} must be >= 0")
        if self.imbalance_interarrival < 1.0 or self.imbalance_service < 1.0:
            raise InvalidMoment("imbalance ratios must be >= 1")
        if self.switchover_service_ratio <= 0.0:
            raise InvalidMoment("switchover_service_ratio must be positive")


def standard_bed() -> list[TestBedCase]:
    """All 2304 cases of the standard grid, in lexicographic order."""
    cases = []
    for n in STANDARD_QUEUE_COUNTS:
        for rho in STANDARD_LOADS:
            for scv_a in STANDARD_SCV_INTERARRIVAL:
                for scv_b in STANDARD_SCV_SERVICE:
                    for scv_s in STANDARD_SCV_SWITCHOVER:
                        for imb_a in STANDARD_IMBALANCE:
                            for imb_b in STANDARD_IMBALANCE:
                                for ratio in STANDARD_RATIO:
                                    cases.append(
                                        TestBedCase(
                                            n_queues=n,
                                            rho=rho,
                                            scv_interarrival=scv_a,
                                            scv_service=scv_b,
                                            scv_switchover=scv_s,
                                            imbalance_interarrival=imb_a,
                                            imbalance_service=imb_b,
                                            switchover_service_ratio=ratio,
                                        )
                                    )
    return cases


def poisson_bed() -> list[TestBedCase]:
    """The 768 standard cases with exponential interarrival times."""
    return [c for c in standard_bed() if c.scv_interarrival == 1.0]


def high_variation_poisson_bed() -> list[TestBedCase]:
    """Preset: Poisson arrivals with service/switch-over scv in {2, 5}.

    Same shape as the standard grid otherwise; 768 cases probing how the
    estimators degrade under very variable service and switch-over times.
    """
    cases = []
    for n in STANDARD_QUEUE_COUNTS:
        for rho in STANDARD_LOADS:
            for scv_b in (2.0, 5.0):
                for scv_s in (2.0, 5.0):
                    for imb_a in STANDARD_IMBALANCE:
                        for imb_b in STANDARD_IMBALANCE:
                            for ratio in STANDARD_RATIO:
                                cases.append(
                                    TestBedCase(
                                        n_queues=n,
                                        rho=rho,
                                        scv_interarrival=1.0,
                                        scv_service=scv_b,
                                        scv_switchover=scv_s,
                                        imbalance_interarrival=imb_a,
                                        imbalance_service=imb_b,
                                        switchover_service_ratio=ratio,
                                    )
                                )
    return cases


def sampled_bed() -> list[TestBedCase]:
    """Deterministic stratified subset of non-Poisson cases, desk scale.

    Covers every queue count, loads up to 0.9, both extreme interarrival
    scvs and both service scvs, with rate imbalance fixed at 5 to keep the
    hard asymmetric regime represented.  80 cases.
    """
    cases = []
    for n in STANDARD_QUEUE_COUNTS:
        for rho in (0.1, 0.3, 0.5, 0.7, 0.9):
            for scv_a in (0.25, 2.0):
                for scv_b in STANDARD_SCV_SERVICE:
                    cases.append(
                        TestBedCase(
                            n_queues=n,
                            rho=rho,
                            scv_interarrival=scv_a,
                            scv_service=scv_b,
                            scv_switchover=1.0,
                            imbalance_interarrival=5.0,
                            imbalance_service=1.0,
                            switchover_service_ratio=1.0,
                        )
                    )
    return cases


def _linear_rates(n: int, imbalance: float) -> list[float]:
    # Largest rate first, linear steps, mean rate one.
    if n == 1 or imbalance == 1.0:
        return [1.0] * n
    step = 2.0 * (imbalance - 1.0) / ((n - 1) * (imbalance + 1.0))
    first = 1.0 + (n - 1) * step / 2.0
    return [first - step * k for k in range(n)]


def materialize_case(
    case: TestBedCase, discipline: Discipline = Discipline.EXHAUSTIVE
) -> SystemSpec:
    """Concrete system for a grid case.

    Arrival rates fall linearly from queue 0 to queue ``n-1`` with the
    requested spread; mean service times rise linearly and are scaled so
    the total load equals ``case.rho``; each queue's mean switch-over is
    ``switchover_service_ratio`` times its mean service time.  Interarrival
    density values are evaluated exactly for the fitted laws, matching what
    the simulator draws from.
    """
    n = case.n_queues
    rates = _linear_rates(n, case.imbalance_interarrival)
    if n == 1:
        shapes = [1.0]
    else:
        shapes = [
            1.0 + (case.imbalance_service - 1.0) * k / (n - 1)
            for k in range(n)
        ]
    scale = case.rho / sum(r * s for r, s in zip(rates, shapes))
    services = [scale * s for s in shapes]
    rho = sum(r * b for r, b in zip(rates, services))
    density_mode = exact_density_mode(case.scv_interarrival)
    queues = tuple(
        QueueSpec(
            mean_service=services[i],
            scv_service=case.scv_service,
            mean_interarrival_at_saturation=rho / rates[i],
            scv_interarrival=case.scv_interarrival,
            mean_switchover=case.switchover_service_ratio * services[i],
            scv_switchover=case.scv_switchover,
            density_mode=density_mode,
        )
        for i in range(n)
    )
    return SystemSpec(queues=queues, discipline=discipline, rho=rho)


def is_exact_case(case: TestBedCase, discipline: Discipline) -> bool:
    """Whether the interpolation is provably exact for this grid case.

    Requires exponential interarrival times.  Fully symmetric cases are
    exact under both disciplines; a two-queue case with equal service laws
    is also exact under exhaustive service when the load satisfies the
    known balance constraint between rate imbalance and the
    switch-over/service ratio.
    """
    if case.scv_interarrival != 1.0:
        return False
    if case.imbalance_interarrival == 1.0 and case.imbalance_service == 1.0:
        return True
    if (
        discipline is not Discipline.EXHAUSTIVE
        or case.n_queues != 2
        or case.imbalance_service != 1.0
    ):
        return False
    # Equal mean services make the load ratio equal the rate imbalance.
    load_ratio = case.imbalance_interarrival
    target = (1.0 + load_ratio**2) / (2.0 * load_ratio) - (
        case.scv_switchover / (1.0 + case.scv_service)
    ) * case.switchover_service_ratio
    return abs(case.rho - target) <= TWO_QUEUE_EXACT_TOL


def detect_exact_cases(
    cases: Sequence[TestBedCase], discipline: Discipline
) -> list[int]:
    """Indices of the cases where the interpolation is provably exact."""
    return [
        i for i, case in enumerate(cases) if is_exact_case(case, discipline)
    ]


@dataclass(frozen=True)
class ErrorRecord:
    """Error of one estimator on one queue of one grid case."""

    case_index: int
    case: TestBedCase
    discipline: Discipline
    queue: int
    method: Method
    approx: float
    oracle: float
    oracle_ci_half_width: float
    rel_err: float  # signed, (approx - oracle) / oracle
    flagged: bool  # oracle confidence interval too wide to trust


@dataclass
class ErrorReport:
    """All error records of a comparison run plus aggregation helpers."""

    discipline: Discipline
    methods: tuple[Method, ...]
    records: list[ErrorRecord]

    @property
    def flagged(self) -> list[ErrorRecord]:
        return [r for r in self.records if r.flagged]

    def for_method(self, method: Method) -> list[ErrorRecord]:
        return [r for r in self.records if r.method is method]

    def mean_abs_error(
        self,
        method: Method,
        predicate: Optional[Callable[[ErrorRecord], bool]] = None,
    ) -> float:
        """Mean absolute relative error in percent, optionally filtered."""
        errors = [
            abs(r.rel_err)
            for r in self.for_method(method)
            if predicate is None or predicate(r)
        ]
        if not errors:
            return math.nan
        return 100.0 * sum(errors) / len(errors)


_BIN_EDGES = (5.0, 10.0, 15.0, 20.0)
_BIN_LABELS = ("0-5%", "5-10%", "10-15%", "15-20%", "20%+")


def bin_table(
    report: ErrorReport, method: Method
) -> dict[int, tuple[float, ...]]:
    """Share of absolute errors (percent) per 5%-wide bin, by queue count."""
    by_n: dict[int, list[float]] = {}
    for r in report.for_method(method):
        by_n.setdefault(r.case.n_queues, []).append(100.0 * abs(r.rel_err))
    table = {}
    for n in sorted(by_n):
        errors = by_n[n]
        counts = [0] * (len(_BIN_EDGES) + 1)
        for e in errors:
            for k, edge in enumerate(_BIN_EDGES):
                if e < edge:
                    counts[k] += 1
                    break
            else:
                counts[-1] += 1
        table[n] = tuple(100.0 * c / len(errors) for c in counts)
    return table


def mean_error_by(
    report: ErrorReport,
    method: Method,
    key: Callable[[TestBedCase], object],
) -> dict[int, dict[object, float]]:
    """Mean absolute error (percent) by queue count and a case facet."""
    sums: dict[tuple[int, object], list[float]] = {}
    for r in report.for_method(method):
        k = (r.case.n_queues, key(r.case))
        sums.setdefault(k, []).append(abs(r.rel_err))
    table: dict[int, dict[object, float]] = {}
    for (n, facet), errors in sorted(sums.items(), key=lambda kv: str(kv[0])):
        table.setdefault(n, {})[facet] = 100.0 * sum(errors) / len(errors)
    return table


FACETS: dict[str, Callable[[TestBedCase], object]] = {
    "load": lambda c: c.rho,
    "interarrival_scv": lambda c: c.scv_interarrival,
    "imbalance": lambda c: (c.imbalance_interarrival, c.imbalance_service),
}


def _auto_config(
    spec: SystemSpec,
    seed: int,
    target_customers: int,
    replications: int,
    batch_count: int,
    max_cycles: int,
    max_events: int,
) -> SimConfig:
    # Size the run so the pooled sample count lands near the target, with
    # a floor that keeps batches meaningful and a cap on cycle count for
    # low loads where switch-overs dominate the cost.
    arrival_rate = sum(
        spec.rho / q.mean_interarrival_at_saturation for q in spec.queues
    )
    total_switch = sum(q.mean_switchover for q in spec.queues)
    per_cycle = arrival_rate * total_switch / (1.0 - spec.rho)
    wanted = target_customers / replications / max(per_cycle, 1e-12)
    cycles = int(min(max(wanted, 100 * batch_count), max_cycles))
    warmup = max(1000, cycles // 5)
    return SimConfig(
        warmup_cycles=warmup,
        measured_cycles=cycles,
        replications=replications,
        base_seed=seed,
        batch_count=batch_count,
        max_events=max_events,
    )


def _case_seed(base_seed: int, index: int) -> int:
    state = np.random.SeedSequence([base_seed, index]).generate_state(
        1, np.uint64
    )
    return int(state[0])


def _run_case(payload) -> list[ErrorRecord]:
    (
        index,
        case,
        discipline,
        methods,
        cfg,
        seed,
        target_customers,
        replications,
        ci_rel_threshold,
        max_events,
    ) = payload
    spec = materialize_case(case, discipline)
    if cfg is None:
        cfg = _auto_config(
            spec,
            seed,
            target_customers,
            replications,
            batch_count=20,
            max_cycles=200_000,
            max_events=max_events,
        )
    else:
        cfg = SimConfig(
            warmup_cycles=cfg.warmup_cycles,
            measured_cycles=cfg.measured_cycles,
            replications=cfg.replications,
            base_seed=seed,
            batch_count=cfg.batch_count,
            max_events=cfg.max_events,
        )
    estimate = simulate(spec, cfg)
    records = []
    for method in methods:
        result = mean_wait(spec, method)
        for q in range(spec.n):
            oracle = estimate.mean_wait[q]
            ci = estimate.ci_half_width[q]
            approx = result.mean_wait[q]
            rel = (approx - oracle) / oracle if oracle else math.nan
            flagged = not (ci <= ci_rel_threshold * abs(oracle))
            records.append(
                ErrorRecord(
                    case_index=index,
                    case=case,
                    discipline=discipline,
                    queue=q,
                    method=method,
                    approx=approx,
                    oracle=oracle,
                    oracle_ci_half_width=ci,
                    rel_err=rel,
                    flagged=flagged,
                )
            )
    return records


def _resolve_jobs(jobs: Optional[int]) -> int:
    if jobs is not None:
        return max(1, jobs)
    env = os.environ.get(ENV_JOBS)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_comparison(
    cases: Sequence[TestBedCase],
    methods: Sequence[Method],
    discipline: Discipline,
    cfg: Optional[SimConfig] = None,
    *,
    base_seed: int = 777,
    jobs: Optional[int] = None,
    target_customers: int = 400_000,
    replications: int = 3,
    ci_rel_threshold: float = 0.05,
    max_events_per_case: int = 2_000_000_000,
    oracle: str = "simulation",
) -> ErrorReport:
    """Simulate `cases` and score `methods` against the estimates.

    Parameters
    ----------
    cases, methods, discipline
        What to run.  Case order defines ``case_index`` in the records.
    cfg : SimConfig, optional
        Fixed run lengths for every case.  By default each case is sized
        automatically to about `target_customers` pooled waiting times over
        `replications` replications.
    base_seed : int
        Every case derives its own seed from this and its index, so
        results do not depend on `jobs`.
    jobs : int, optional
        Worker processes; defaults to the ``POLLWAIT_JOBS`` environment
        variable or the CPU count.
    ci_rel_threshold : float
        A record is flagged when the simulation half-width exceeds this
        fraction of the estimated mean.

    Returns
    -------
    ErrorReport
    """
    if oracle != "simulation":
        raise ValueError(f"unsupported oracle {oracle!r}")
    methods = tuple(methods)
    payloads = [
        (
            index,
            case,
            discipline,
            methods,
            cfg,
            _case_seed(base_seed, index),
            target_customers,
            replications,
            ci_rel_threshold,
            max_events_per_case,
        )
        for index, case in enumerate(cases)
    ]
    jobs = _resolve_jobs(jobs)
    if jobs == 1 or len(cases) <= 1:
        chunks = [_run_case(p) for p in payloads]
    else:
        with Pool(processes=min(jobs, len(cases))) as pool:
            chunks = pool.map(_run_case, payloads, chunksize=1)
    records = [r for chunk in chunks for r in chunk]
    return ErrorReport(
        discipline=discipline, methods=methods, records=records
    )


def render_bin_table(report: ErrorReport, method: Method) -> str:
    """Aligned-text table of binned absolute errors by queue count."""
    table = bin_table(report, method)
    header = ["queues"] + list(_BIN_LABELS)
    lines = ["  ".join(f"{h:>8}" for h in header)]
    for n, row in table.items():
        cells = [f"{n:>8}"] + [f"{v:>8.2f}" for v in row]
        lines.append("  ".join(cells))
    return "\n".join(lines)


def render_mean_table(
    report: ErrorReport, method: Method, facet: str
) -> str:
    """Aligned-text table of mean absolute errors by queue count x facet."""
    table = mean_error_by(report, method, FACETS[facet])
    columns: list[object] = sorted(
        {key for row in table.values() for key in row}, key=str
    )
    header = ["queues"] + [str(c) for c in columns]
    lines = ["  ".join(f"{h:>16}" for h in header)]
    for n, row in table.items():
        cells = [f"{n:>16}"] + [
            f"{row.get(c, math.nan):>16.2f}" for c in columns
        ]
        lines.append("  ".join(cells))
    return "\n".join(lines)


_CSV_COLUMNS = [
    "case_index",
    "n_queues",
    "rho",
    "scv_interarrival",
    "scv_service",
    "scv_switchover",
    "imbalance_interarrival",
    "imbalance_service",
    "switchover_service_ratio",
    "discipline",
    "queue",
    "method",
    "approx",
    "oracle",
    "oracle_ci_half_width",
    "rel_err",
    "flagged",
]


def report_to_csv(report: ErrorReport, path: str) -> None:
    """Write raw records; floats keep full precision for exact reload."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(_CSV_COLUMNS)
        for r in report.records:
            c = r.case
            writer.writerow(
                [
                    r.case_index,
                    c.n_queues,
                    repr(c.rho),
                    repr(c.scv_interarrival),
                    repr(c.scv_service),
                    repr(c.scv_switchover),
                    repr(c.imbalance_interarrival),
                    repr(c.imbalance_service),
                    repr(c.switchover_service_ratio),
                    r.discipline.value,
                    r.queue,
                    r.method.value,
                    repr(r.approx),
                    repr(r.oracle),
                    repr(r.oracle_ci_half_width),
                    repr(r.rel_err),
                    int(r.flagged),
                ]
            )


def report_from_csv(path: str) -> ErrorReport:
    """Rebuild an :class:`ErrorReport` from :func:`report_to_csv` output."""
    records = []
    methods: list[Method] = []
    discipline = None
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            case = TestBedCase(
                n_queues=int(row["n_queues"]),
                rho=float(row["rho"]),
                scv_interarrival=float(row["scv_interarrival"]),
                scv_service=float(row["scv_service"]),
                scv_switchover=float(row["scv_switchover"]),
                imbalance_interarrival=float(row["imbalance_interarrival"]),
                imbalance_service=float(row["imbalance_service"]),
                switchover_service_ratio=float(
                    row["switchover_service_ratio"]
                ),
            )
            discipline = Discipline(row["discipline"])
            method = Method(row["method"])
            if method not in methods:
                methods.append(method)
            records.append(
                ErrorRecord(
                    case_index=int(row["case_index"]),
                    case=case,
                    discipline=discipline,
                    queue=int(row["queue"]),
                    method=method,
                    approx=float(row["approx"]),
                    oracle=float(row["oracle"]),
                    oracle_ci_half_width=float(row["oracle_ci_half_width"]),
                    rel_err=float(row["rel_err"]),
                    flagged=bool(int(row["flagged"])),
                )
            )
    if discipline is None:
        raise ValueError(f"no records in {path}")
    return ErrorReport(
        discipline=discipline, methods=tuple(methods), records=records
    )


def summary_lines(report: ErrorReport) -> list[str]:
    """Human-readable per-method headline: mean error by queue count."""
    lines = [
        f"discipline: {report.discipline.value}",
        f"records: {len(report.records)}  flagged: {len(report.flagged)}",
    ]
    counts = sorted({r.case.n_queues for r in report.records})
    for method in report.methods:
        per_n = [
            report.mean_abs_error(
                method, lambda r, n=n: r.case.n_queues == n
            )
            for n in counts
        ]
        cells = ", ".join(
            f"N={n}: {v:.2f}%" for n, v in zip(counts, per_n)
        )
        lines.append(f"{method.value}: mean abs error {cells}")
    return lines


def write_report_files(report: ErrorReport, outdir: str) -> list[str]:
    """Write raw records, summary and per-method tables into `outdir`.

    Returns the paths written.  Tables are emitted both as CSV and as
    aligned text; re-aggregating the raw CSV reproduces them exactly.
    """
    os.makedirs(outdir, exist_ok=True)
    written = []

    def emit(name: str, content: str) -> None:
        path = os.path.join(outdir, name)
        with open(path, "w") as handle:
            handle.write(content if content.endswith("\n") else content + "\n")
        written.append(path)

    raw_path = os.path.join(outdir, "raw_records.csv")
    report_to_csv(report, raw_path)
    written.append(raw_path)
    emit("summary.txt", "\n".join(summary_lines(report)))

    for method in report.methods:
        slug = method.value.replace("-", "_")
        emit(f"errors_binned_{slug}.txt", render_bin_table(report, method))
        rows = bin_table(report, method)
        csv_lines = ["queues," + ",".join(_BIN_LABELS)]
        for n, row in rows.items():
            csv_lines.append(
                f"{n}," + ",".join(repr(v) for v in row)
            )
        emit(f"errors_binned_{slug}.csv", "\n".join(csv_lines))
        for facet in FACETS:
            emit(
                f"mean_error_by_{facet}_{slug}.txt",
                render_mean_table(report, method, facet),
            )
            table = mean_error_by(report, method, FACETS[facet])
            columns = sorted(
                {key for row in table.values() for key in row}, key=str
            )
            csv_lines = ["queues," + ",".join(str(c) for c in columns)]
            for n, row in table.items():
                csv_lines.append(
                    f"{n},"
                    + ",".join(repr(row.get(c, math.nan)) for c in columns)
                )
            emit(f"mean_error_by_{facet}_{slug}.csv", "\n".join(csv_lines))
    return written


def three_queue_demo_spec(
    rho: float, discipline: Discipline = Discipline.EXHAUSTIVE
) -> SystemSpec:
    """Small showcase system with bursty arrivals.

    Three queues carrying 10%, 30% and 60% of the load; exponential unit
    service and switch-over times; interarrival scv 3, evaluated exactly
    for the fitted hyperexponential law.
    """
    fractions = (0.1, 0.3, 0.6)
    queues = tuple(
        QueueSpec(
            mean_service=1.0,
            scv_service=1.0,
            mean_interarrival_at_saturation=1.0 / f,
            scv_interarrival=3.0,
            mean_switchover=1.0,
            scv_switchover=1.0,
            density_mode=exact_density_mode(3.0),
        )
        for f in fractions
    )
    return SystemSpec(queues=queues, discipline=discipline, rho=rho)


def two_queue_small_switchover_spec(
    rho: float, discipline: Discipline = Discipline.EXHAUSTIVE
) -> SystemSpec:
    """Stress preset: switch-over times five times smaller than services.

    Two queues with exponential laws everywhere, mean service 9/40, mean
    switch-over 9/200, and a 5:1 arrival-rate imbalance.  A known weak
    spot of the interpolation, kept as a ready-made sweep target.
    """
    mean_service = 9.0 / 40.0
    rate_heavy = (5.0 / 6.0) / mean_service  # load fractions 5/6 and 1/6
    rate_light = (1.0 / 6.0) / mean_service
    queues = tuple(
        QueueSpec(
            mean_service=mean_service,
            scv_service=1.0,
            mean_interarrival_at_saturation=1.0 / rate,
            scv_interarrival=1.0,
            mean_switchover=9.0 / 200.0,
            scv_switchover=1.0,
            density_mode=exact_density_mode(1.0),
        )
        for rate in (rate_heavy, rate_light)
    )
    return SystemSpec(queues=queues, discipline=discipline, rho=rho)
