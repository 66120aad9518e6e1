"""Tests for the accuracy grid: case enumeration, materialization,
exact-case detection and the comparison runner."""

import math

import numpy as np
import pytest

from pollwait import (
    Discipline,
    InvalidMoment,
    Method,
    TestBedCase,
    detect_exact_cases,
    is_exact_case,
    materialize_case,
    poisson_bed,
    sampled_bed,
    standard_bed,
    three_queue_demo_spec,
)
from pollwait.sim import SimConfig
from pollwait.testbed import (
    ErrorRecord,
    ErrorReport,
    bin_table,
    high_variation_poisson_bed,
    mean_error_by,
    render_bin_table,
    render_mean_table,
    report_from_csv,
    report_to_csv,
    run_comparison,
    summary_lines,
    two_queue_small_switchover_spec,
    write_report_files,
)

EXH = Discipline.EXHAUSTIVE
GAT = Discipline.GATED


def test_standard_bed_shape_and_order():
    cases = standard_bed()
    assert len(cases) == 2304
    assert cases[0] == TestBedCase(2, 0.1, 0.25, 0.25, 0.25, 1.0, 1.0, 1.0)
    # The innermost axis is the switch-over/service ratio.
    assert cases[1] == TestBedCase(2, 0.1, 0.25, 0.25, 0.25, 1.0, 1.0, 5.0)
    assert cases[-1] == TestBedCase(5, 0.99, 2.0, 1.0, 1.0, 5.0, 5.0, 5.0)
    for n in (2, 3, 4, 5):
        assert sum(1 for c in cases if c.n_queues == n) == 576


def test_poisson_bed():
    cases = poisson_bed()
    assert len(cases) == 768
    assert all(c.scv_interarrival == 1.0 for c in cases)


def test_high_variation_bed():
    cases = high_variation_poisson_bed()
    assert len(cases) == 768
    assert all(c.scv_interarrival == 1.0 for c in cases)
    assert {c.scv_service for c in cases} == {2.0, 5.0}
    assert {c.scv_switchover for c in cases} == {2.0, 5.0}


def test_sampled_bed():
    cases = sampled_bed()
    assert len(cases) == 80
    assert all(c.scv_interarrival in (0.25, 2.0) for c in cases)
    assert all(c.rho <= 0.9 for c in cases)
    assert all(c.imbalance_interarrival == 5.0 for c in cases)
    for n in (2, 3, 4, 5):
        assert sum(1 for c in cases if c.n_queues == n) == 20


def test_case_validation():
    with pytest.raises(InvalidMoment):
        TestBedCase(0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidMoment):
        TestBedCase(2, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidMoment):
        TestBedCase(2, 0.5, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidMoment):
        TestBedCase(2, 0.5, 1.0, 1.0, 1.0, 0.5, 1.0, 1.0)
    with pytest.raises(InvalidMoment):
        TestBedCase(2, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0)


def test_materialize_five_queue_case():
    case = TestBedCase(5, 0.7, 1.0, 0.25, 1.0, 5.0, 5.0, 2.0)
    spec = materialize_case(case, EXH)
    assert spec.n == 5
    assert spec.discipline is EXH
    assert math.isclose(spec.rho, 0.7, rel_tol=1e-12)
    # Arrival rates fall linearly from 5/3 to 1/3 (ratio 5, mean 1), and
    # mean service times are 3 * i * rho / 35 for i = 1..5.
    rates = [spec.rho / q.mean_interarrival_at_saturation for q in spec.queues]
    np.testing.assert_allclose(rates, [5 / 3, 4 / 3, 1.0, 2 / 3, 1 / 3], rtol=1e-12)
    services = [q.mean_service for q in spec.queues]
    np.testing.assert_allclose(
        services, [3 * i * 0.7 / 35 for i in range(1, 6)], rtol=1e-12
    )
    for q in spec.queues:
        assert q.mean_switchover == 2.0 * q.mean_service
        assert q.scv_service == 0.25
        assert q.scv_switchover == 1.0
    assert math.isclose(sum(q.load_fraction for q in spec.queues), 1.0, rel_tol=1e-12)


def test_materialize_balanced_case_is_symmetric():
    case = TestBedCase(3, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    spec = materialize_case(case, GAT)
    assert spec.discipline is GAT
    fractions = {q.load_fraction for q in spec.queues}
    assert len(fractions) == 1


def test_exact_case_detection_on_standard_bed():
    cases = standard_bed()
    exhaustive = detect_exact_cases(cases, EXH)
    gated = detect_exact_cases(cases, GAT)
    assert len(exhaustive) == 193
    assert len(gated) == 192
    assert all(cases[i].scv_interarrival == 1.0 for i in exhaustive)
    # Gated exactness needs full symmetry; exhaustive admits exactly one
    # imbalanced two-queue case where the load hits the balance constraint.
    asymmetric = [i for i in exhaustive if cases[i].imbalance_interarrival != 1.0]
    assert len(asymmetric) == 1
    special = cases[asymmetric[0]]
    assert special == TestBedCase(2, 0.1, 1.0, 1.0, 1.0, 5.0, 1.0, 5.0)
    assert set(gated) == set(exhaustive) - set(asymmetric)


def test_two_queue_exact_constraint():
    special = TestBedCase(2, 0.1, 1.0, 1.0, 1.0, 5.0, 1.0, 5.0)
    assert is_exact_case(special, EXH)
    assert not is_exact_case(special, GAT)
    # Move any ingredient of the constraint and exactness is lost.
    for wrong in (
        TestBedCase(2, 0.3, 1.0, 1.0, 1.0, 5.0, 1.0, 5.0),
        TestBedCase(2, 0.1, 0.25, 1.0, 1.0, 5.0, 1.0, 5.0),
        TestBedCase(2, 0.1, 1.0, 1.0, 1.0, 5.0, 5.0, 5.0),
        TestBedCase(3, 0.1, 1.0, 1.0, 1.0, 5.0, 1.0, 5.0),
    ):
        assert not is_exact_case(wrong, EXH)


SMOKE_CFG = SimConfig(
    warmup_cycles=200,
    measured_cycles=1_000,
    replications=2,
    base_seed=5,
    batch_count=10,
    max_events=10_000_000,
)

SMOKE_CASES = [
    TestBedCase(2, 0.3, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
    TestBedCase(2, 0.5, 2.0, 0.25, 1.0, 5.0, 1.0, 1.0),
]


def test_run_comparison_smoke():
    report = run_comparison(
        SMOKE_CASES,
        (Method.INTERPOLATION, Method.LT_ONLY),
        EXH,
        cfg=SMOKE_CFG,
        base_seed=42,
        jobs=1,
    )
    assert report.discipline is EXH
    assert report.methods == (Method.INTERPOLATION, Method.LT_ONLY)
    assert len(report.records) == 2 * 2 * 2
    for r in report.records:
        assert r.case_index in (0, 1)
        assert r.case == SMOKE_CASES[r.case_index]
        assert r.oracle > 0.0
        assert math.isfinite(r.approx)
        assert math.isclose(r.rel_err, (r.approx - r.oracle) / r.oracle)
    assert set(r.queue for r in report.records) == {0, 1}


def test_run_comparison_is_deterministic_across_workers():
    kwargs = dict(cfg=SMOKE_CFG, base_seed=42)
    serial = run_comparison(SMOKE_CASES, (Method.INTERPOLATION,), EXH, jobs=1, **kwargs)
    again = run_comparison(SMOKE_CASES, (Method.INTERPOLATION,), EXH, jobs=1, **kwargs)
    pooled = run_comparison(SMOKE_CASES, (Method.INTERPOLATION,), EXH, jobs=2, **kwargs)
    assert serial.records == again.records
    assert serial.records == pooled.records


def test_run_comparison_auto_config():
    # Without a fixed config each case is sized from the target sample
    # count; a small target keeps this fast.
    report = run_comparison(
        SMOKE_CASES[:1],
        (Method.INTERPOLATION,),
        EXH,
        base_seed=7,
        jobs=1,
        target_customers=5_000,
        replications=2,
    )
    assert len(report.records) == 2
    for r in report.records:
        assert math.isfinite(r.rel_err)


def test_rejects_unknown_oracle():
    with pytest.raises(ValueError):
        run_comparison(SMOKE_CASES, (Method.INTERPOLATION,), EXH, oracle="exact")


def synthetic_report():
    case = TestBedCase(2, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    errors = (0.049, 0.05, 0.099, 0.10, 0.15, 0.21)
    records = [
        ErrorRecord(
            case_index=i,
            case=case,
            discipline=EXH,
            queue=0,
            method=Method.INTERPOLATION,
            approx=1.0 + e,
            oracle=1.0,
            oracle_ci_half_width=0.01,
            rel_err=e,
            flagged=False,
        )
        for i, e in enumerate(errors)
    ]
    return ErrorReport(
        discipline=EXH, methods=(Method.INTERPOLATION,), records=records
    )


def test_bin_table_edges():
    table = bin_table(synthetic_report(), Method.INTERPOLATION)
    shares = table[2]
    np.testing.assert_allclose(
        shares, (100 / 6, 2 * 100 / 6, 100 / 6, 100 / 6, 100 / 6), rtol=1e-12
    )
    assert math.isclose(sum(shares), 100.0, rel_tol=1e-12)


def test_mean_abs_error_and_facets():
    report = synthetic_report()
    assert math.isclose(
        report.mean_abs_error(Method.INTERPOLATION),
        100.0 * (0.049 + 0.05 + 0.099 + 0.10 + 0.15 + 0.21) / 6,
        rel_tol=1e-12,
    )
    assert math.isclose(
        report.mean_abs_error(Method.INTERPOLATION, lambda r: r.rel_err > 0.1),
        100.0 * (0.15 + 0.21) / 2,
        rel_tol=1e-12,
    )
    assert math.isnan(report.mean_abs_error(Method.HT_ONLY))
    by_load = mean_error_by(report, Method.INTERPOLATION, lambda c: c.rho)
    assert set(by_load[2]) == {0.5}


def test_csv_round_trip(tmp_path):
    report = run_comparison(
        SMOKE_CASES,
        (Method.INTERPOLATION, Method.LT_ONLY),
        GAT,
        cfg=SMOKE_CFG,
        base_seed=9,
        jobs=1,
    )
    path = tmp_path / "records.csv"
    report_to_csv(report, str(path))
    reloaded = report_from_csv(str(path))
    assert reloaded.discipline is GAT
    assert reloaded.methods == report.methods
    assert reloaded.records == report.records


def test_write_report_files(tmp_path):
    report = synthetic_report()
    written = write_report_files(report, str(tmp_path))
    names = {p.split("/")[-1] for p in written}
    assert "raw_records.csv" in names
    assert "summary.txt" in names
    assert "errors_binned_interpolation.txt" in names
    assert "errors_binned_interpolation.csv" in names
    assert "mean_error_by_load_interpolation.csv" in names
    for path in written:
        with open(path) as handle:
            assert handle.read().strip()
    lines = summary_lines(report)
    assert lines[0] == "discipline: exhaustive"
    assert any("interpolation" in line for line in lines)


def test_render_tables():
    report = synthetic_report()
    binned = render_bin_table(report, Method.INTERPOLATION)
    assert "0-5%" in binned and "20%+" in binned
    by_load = render_mean_table(report, Method.INTERPOLATION, "load")
    assert "queues" in by_load and "0.5" in by_load


def test_three_queue_demo_spec():
    spec = three_queue_demo_spec(0.7)
    assert spec.rho == 0.7
    assert spec.discipline is EXH
    np.testing.assert_allclose(
        [q.load_fraction for q in spec.queues], (0.1, 0.3, 0.6), rtol=1e-12
    )
    for q in spec.queues:
        assert q.mean_service == 1.0 and q.scv_service == 1.0
        assert q.mean_switchover == 1.0 and q.scv_switchover == 1.0
        assert q.scv_interarrival == 3.0


def test_two_queue_small_switchover_spec():
    spec = two_queue_small_switchover_spec(0.5, GAT)
    assert spec.discipline is GAT
    np.testing.assert_allclose(
        [q.load_fraction for q in spec.queues], (5 / 6, 1 / 6), rtol=1e-12
    )
    for q in spec.queues:
        assert math.isclose(q.mean_switchover / q.mean_service, 0.2, rel_tol=1e-12)
