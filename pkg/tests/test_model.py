"""Tests for system descriptions and derived moment aggregates."""

import math

import numpy as np
import pytest

from pollwait import (
    DensityMode,
    Discipline,
    InvalidMoment,
    LoadOutOfRange,
    QueueSpec,
    SystemSpec,
    UnnormalizedLoads,
    ZeroTotalSwitchover,
    derive_moments,
    exact_density_mode,
    scale_to_load,
)


def make_queue(**overrides):
    # A queue carrying half the load; two of them form a valid system.
    fields = dict(
        mean_service=1.0,
        scv_service=1.0,
        mean_interarrival_at_saturation=2.0,
        scv_interarrival=1.0,
        mean_switchover=1.0,
        scv_switchover=1.0,
    )
    fields.update(overrides)
    return QueueSpec(**fields)


def three_queue_mixed(discipline=Discipline.EXHAUSTIVE, rho=0.5):
    queues = (
        QueueSpec(1.0, 0.5, 6.0, 3.0, 1.0, 1.0, DensityMode.EXACT_H2),
        QueueSpec(2.0, 1.0, 6.0, 1.0, 0.5, 0.25, DensityMode.EXACT_EXPONENTIAL),
        QueueSpec(3.0, 2.0, 6.0, 0.25, 2.0, 0.0, DensityMode.EXACT_MIXED_ERLANG),
    )
    return SystemSpec(queues=queues, discipline=discipline, rho=rho)


def test_load_fraction():
    assert make_queue().load_fraction == 0.5
    assert make_queue(mean_interarrival_at_saturation=4.0).load_fraction == 0.25


def test_queue_moment_validation():
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(InvalidMoment):
            make_queue(mean_service=bad)
        with pytest.raises(InvalidMoment):
            make_queue(mean_interarrival_at_saturation=bad)
    with pytest.raises(InvalidMoment):
        make_queue(mean_switchover=-0.5)
    for label in ("scv_service", "scv_interarrival", "scv_switchover"):
        with pytest.raises(InvalidMoment):
            make_queue(**{label: -0.1})
        with pytest.raises(InvalidMoment):
            make_queue(**{label: math.nan})
    # Zero switch-over mean is allowed at queue level.
    make_queue(mean_switchover=0.0, scv_switchover=0.0)


def test_density_mode_compatibility():
    with pytest.raises(InvalidMoment):
        make_queue(scv_interarrival=1.0, density_mode=DensityMode.EXACT_H2)
    with pytest.raises(InvalidMoment):
        make_queue(scv_interarrival=2.0, density_mode=DensityMode.EXACT_EXPONENTIAL)
    with pytest.raises(InvalidMoment):
        make_queue(scv_interarrival=0.0, density_mode=DensityMode.EXACT_MIXED_ERLANG)
    with pytest.raises(InvalidMoment):
        make_queue(scv_interarrival=2.0, density_mode=DensityMode.EXACT_MIXED_ERLANG)
    # The value is required with USER_VALUE and forbidden otherwise.
    with pytest.raises(InvalidMoment):
        make_queue(density_mode=DensityMode.USER_VALUE)
    with pytest.raises(InvalidMoment):
        make_queue(density_mode=DensityMode.USER_VALUE, density_value=-1.0)
    with pytest.raises(InvalidMoment):
        make_queue(density_value=0.5)
    make_queue(density_mode=DensityMode.USER_VALUE, density_value=0.8)
    make_queue(scv_interarrival=1.0, density_mode=DensityMode.EXACT_MIXED_ERLANG)


def test_exact_density_mode_mapping():
    assert exact_density_mode(0.0) is DensityMode.TWO_MOMENT_APPROX
    assert exact_density_mode(0.5) is DensityMode.EXACT_MIXED_ERLANG
    assert exact_density_mode(1.0) is DensityMode.EXACT_EXPONENTIAL
    assert exact_density_mode(2.0) is DensityMode.EXACT_H2


def test_system_load_range():
    queues = (make_queue(), make_queue())
    for rho in (1.0, 1.5, -0.1, math.nan):
        with pytest.raises(LoadOutOfRange):
            SystemSpec(queues=queues, discipline=Discipline.EXHAUSTIVE, rho=rho)
    # Zero load is a valid closed-form evaluation point.
    SystemSpec(queues=queues, discipline=Discipline.EXHAUSTIVE, rho=0.0)


def test_system_load_fractions_must_sum_to_one():
    with pytest.raises(UnnormalizedLoads):
        SystemSpec(
            queues=(make_queue(), make_queue(mean_interarrival_at_saturation=4.0)),
            discipline=Discipline.EXHAUSTIVE,
            rho=0.5,
        )
    # A drift of 5e-10 is inside the acceptance tolerance, 5e-9 is not.
    near = make_queue(mean_interarrival_at_saturation=1.0 / (0.5 + 5e-10))
    SystemSpec(queues=(make_queue(), near), discipline=Discipline.GATED, rho=0.5)
    off = make_queue(mean_interarrival_at_saturation=1.0 / (0.5 + 5e-9))
    with pytest.raises(UnnormalizedLoads):
        SystemSpec(queues=(make_queue(), off), discipline=Discipline.GATED, rho=0.5)


def test_system_requires_some_switchover():
    silent = make_queue(mean_switchover=0.0, scv_switchover=0.0)
    with pytest.raises(ZeroTotalSwitchover):
        SystemSpec(queues=(silent, silent), discipline=Discipline.EXHAUSTIVE, rho=0.3)
    # One positive switch-over anywhere in the cycle is enough.
    SystemSpec(queues=(silent, make_queue()), discipline=Discipline.EXHAUSTIVE, rho=0.3)


def test_queues_coerced_to_tuple():
    spec = SystemSpec(
        queues=[make_queue(), make_queue()],
        discipline=Discipline.EXHAUSTIVE,
        rho=0.5,
    )
    assert isinstance(spec.queues, tuple)
    assert spec.n == 2


def test_scale_to_load():
    spec = three_queue_mixed(rho=0.5)
    scaled = scale_to_load(spec, 0.9)
    assert scaled.rho == 0.9
    assert scaled.queues == spec.queues
    assert scaled.discipline is spec.discipline
    with pytest.raises(LoadOutOfRange):
        scale_to_load(spec, 1.0)


def test_derived_moments_hand_values():
    dm = derive_moments(three_queue_mixed())
    assert dm.n == 3
    np.testing.assert_allclose(dm.load_fractions, (1 / 6, 1 / 3, 1 / 2), rtol=1e-15)
    np.testing.assert_allclose(
        dm.arrival_rates_at_saturation, (1 / 6, 1 / 6, 1 / 6), rtol=1e-15
    )
    assert math.isclose(dm.switchover_mean_total, 3.5, rel_tol=1e-15)
    assert math.isclose(dm.switchover_var_total, 17 / 16, rel_tol=1e-15)
    np.testing.assert_allclose(dm.switchover_vars, (1.0, 1 / 16, 0.0), atol=1e-18)
    assert math.isclose(dm.switchover_residual, 213 / 112, rel_tol=1e-14)
    np.testing.assert_allclose(dm.service_residuals, (0.75, 2.0, 4.5), rtol=1e-15)
    assert math.isclose(dm.service_residual_global, 73 / 24, rel_tol=1e-14)
    assert math.isclose(dm.heavy_traffic_variance, 127 / 24, rel_tol=1e-14)
    np.testing.assert_allclose(dm.density_at_zero, (1.5, 1.0, 0.0), rtol=1e-14)


def test_derived_moments_ignore_operating_load():
    low = derive_moments(three_queue_mixed(rho=0.1))
    high = derive_moments(three_queue_mixed(rho=0.95))
    assert low == high


def test_density_modes_feed_derived_values():
    user = make_queue(density_mode=DensityMode.USER_VALUE, density_value=0.37)
    approx = make_queue(scv_interarrival=0.5)  # rule value 0.5**4
    spec = SystemSpec(
        queues=(user, approx), discipline=Discipline.EXHAUSTIVE, rho=0.4
    )
    dm = derive_moments(spec)
    assert dm.density_at_zero[0] == 0.37
    assert dm.density_at_zero[1] == 0.5**4


def test_poisson_variance_identity():
    # With exponential interarrival times everywhere, the heavy-traffic
    # variance collapses to the global second service moment over the mean:
    # twice the global mean residual service time.
    rng = np.random.default_rng(19)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        fractions = rng.dirichlet(np.ones(n)) if n > 1 else np.array([1.0])
        queues = []
        for i in range(n):
            mean_b = float(rng.uniform(0.2, 3.0))
            queues.append(
                QueueSpec(
                    mean_service=mean_b,
                    scv_service=float(rng.uniform(0.0, 3.0)),
                    mean_interarrival_at_saturation=mean_b / float(fractions[i]),
                    scv_interarrival=1.0,
                    mean_switchover=float(rng.uniform(0.1, 2.0)),
                    scv_switchover=float(rng.uniform(0.0, 2.0)),
                    density_mode=DensityMode.EXACT_EXPONENTIAL,
                )
            )
        spec = SystemSpec(
            queues=tuple(queues),
            discipline=Discipline.EXHAUSTIVE,
            rho=float(rng.uniform(0.05, 0.95)),
        )
        dm = derive_moments(spec)
        assert math.isclose(
            dm.heavy_traffic_variance,
            2.0 * dm.service_residual_global,
            rel_tol=1e-12,
        )
