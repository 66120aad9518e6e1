"""Mean waiting-time approximations for cyclic polling systems.

The main estimator interpolates between the known light-traffic and
heavy-traffic behaviour of the mean waiting time.  For each queue it builds
three constants ``k0``, ``k1``, ``k2`` and evaluates

    mean_wait(rho) = (k0 + k1*rho + k2*rho**2) / (1 - rho)

so that the value and the slope at ``rho = 0`` match the light-traffic
expansion, and the scaled limit at ``rho = 1`` matches the heavy-traffic
asymptote.  The remaining callables are deliberately cruder comparators
(single-limit forms and a pseudo-conservation-law split) kept around to
quantify how much each ingredient of the interpolation buys.

All formulas are closed form; nothing here simulates or iterates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import DegenerateLoad
from .model import (
    DerivedMoments,
    Discipline,
    SystemSpec,
    derive_moments,
)

__all__ = [
    "Method",
    "InterpolationConstants",
    "WaitingTimeResult",
    "heavy_traffic_delay",
    "constants_exhaustive",
    "constants_gated",
    "interpolation_constants",
    "mean_wait_interpolation",
    "mean_wait_lt_only",
    "mean_wait_ht_only",
    "mean_wait_large_s",
    "mean_wait_pcl_based",
    "mean_wait",
    "pcl_rhs",
    "pcl_residual",
]


class Method(Enum):
    """Available mean waiting-time estimators."""

    INTERPOLATION = "interpolation"
    LT_ONLY = "lt-only"
    HT_ONLY = "ht-only"
    LARGE_S = "large-s"
    PCL_BASED = "pcl-based"


@dataclass(frozen=True)
class InterpolationConstants:
    """Numerator coefficients of the interpolation for one queue.

    ``k0`` equals the mean residual total switch-over time (the zero-load
    waiting time), ``k0 + k1`` equals the light-traffic slope, and
    ``k0 + k1 + k2`` equals the heavy-traffic scaled delay of the queue.
    """

    queue: int
    k0: float
    k1: float
    k2: float


@dataclass(frozen=True)
class WaitingTimeResult:
    """Per-queue mean waiting times and queue lengths for one load point.

    ``constants`` is populated only by the interpolation method.
    """

    method: Method
    rho: float
    mean_wait: tuple[float, ...]
    mean_queue_length: tuple[float, ...]
    constants: Optional[tuple[InterpolationConstants, ...]] = None


def heavy_traffic_delay(
    dm: DerivedMoments, queue: int, discipline: Discipline
) -> float:
    """Mean asymptotic scaled delay of `queue`: the limit of
    ``(1 - rho) * mean_wait`` as the load approaches one.

    Exhaustive service empties the queue at every visit, which shrinks the
    delay by the queue's own load share; gated service defers work by one
    cycle and grows it.  For a single exhaustive queue the generic ratio
    degenerates to 0/0 and is replaced by its limit, half the
    heavy-traffic variance.
    """
    fracs = dm.load_fractions
    sigma_sq = dm.heavy_traffic_variance
    if discipline is Discipline.EXHAUSTIVE:
        if dm.n == 1:
            return sigma_sq / 2.0
        denom = sum(f * (1.0 - f) for f in fracs)
        return (1.0 - fracs[queue]) / 2.0 * (
            sigma_sq / denom + dm.switchover_mean_total
        )
    denom = sum(f * (1.0 + f) for f in fracs)
    return (1.0 + fracs[queue]) / 2.0 * (
        sigma_sq / denom + dm.switchover_mean_total
    )


def _slope_constant_common(dm: DerivedMoments, queue: int) -> float:
    # Shared part of k1: the density correction, the global service
    # residual, and the switch-over variance sum weighted by cyclic
    # load-fraction prefixes starting at `queue`.
    n = dm.n
    fracs = dm.load_fractions
    value = (
        fracs[queue]
        * (dm.density_at_zero[queue] - 1.0)
        * dm.service_residuals[queue]
        + dm.service_residual_global
    )
    acc = 0.0
    prefix = 0.0
    for j in range(n):
        prefix += fracs[(queue + j) % n]
        acc += prefix * dm.switchover_vars[(queue + j) % n]
    return value - acc / dm.switchover_mean_total


def constants_exhaustive(
    dm: DerivedMoments, queue: int
) -> InterpolationConstants:
    """Interpolation constants for `queue` under exhaustive service."""
    k0 = dm.switchover_residual
    k1 = _slope_constant_common(dm, queue) + dm.load_fractions[queue] * (
        dm.switchover_residual - dm.switchover_mean_total
    )
    # Defining k2 through the heavy-traffic delay makes the scaled limit
    # k0 + k1 + k2 match it exactly, including rounding.
    k2 = heavy_traffic_delay(dm, queue, Discipline.EXHAUSTIVE) - k0 - k1
    return InterpolationConstants(queue=queue, k0=k0, k1=k1, k2=k2)


def constants_gated(
    dm: DerivedMoments, queue: int
) -> InterpolationConstants:
    """Interpolation constants for `queue` under gated service."""
    k0 = dm.switchover_residual
    k1 = (
        _slope_constant_common(dm, queue)
        + dm.load_fractions[queue] * dm.switchover_residual
    )
    k2 = heavy_traffic_delay(dm, queue, Discipline.GATED) - k0 - k1
    return InterpolationConstants(queue=queue, k0=k0, k1=k1, k2=k2)


def interpolation_constants(
    dm: DerivedMoments, queue: int, discipline: Discipline
) -> InterpolationConstants:
    """Constants for `queue` under either discipline."""
    if discipline is Discipline.EXHAUSTIVE:
        return constants_exhaustive(dm, queue)
    return constants_gated(dm, queue)


def _queue_lengths(
    spec: SystemSpec, waits: tuple[float, ...]
) -> tuple[float, ...]:
    # Little's law per queue; the arrival rate at load rho is
    # rho / mean_interarrival_at_saturation, and a customer occupies the
    # queue for its waiting plus service time.
    return tuple(
        spec.rho * (w + q.mean_service) / q.mean_interarrival_at_saturation
        for w, q in zip(waits, spec.queues)
    )


def _result(
    spec: SystemSpec,
    method: Method,
    waits: tuple[float, ...],
    constants: Optional[tuple[InterpolationConstants, ...]] = None,
) -> WaitingTimeResult:
    return WaitingTimeResult(
        method=method,
        rho=spec.rho,
        mean_wait=waits,
        mean_queue_length=_queue_lengths(spec, waits),
        constants=constants,
    )


def mean_wait_interpolation(spec: SystemSpec) -> WaitingTimeResult:
    """Light/heavy-traffic interpolation, the recommended estimator.

    Parameters
    ----------
    spec : SystemSpec
        System description; its ``rho`` selects the load point.

    Returns
    -------
    WaitingTimeResult
        Per-queue means, queue lengths and the constants used.
    """
    dm = derive_moments(spec)
    constants = tuple(
        interpolation_constants(dm, i, spec.discipline)
        for i in range(spec.n)
    )
    rho = spec.rho
    waits = tuple(
        (c.k0 + c.k1 * rho + c.k2 * rho * rho) / (1.0 - rho)
        for c in constants
    )
    return _result(spec, Method.INTERPOLATION, waits, constants)


def mean_wait_lt_only(spec: SystemSpec) -> WaitingTimeResult:
    """Comparator built from the light-traffic behaviour alone.

    Drops the quadratic coefficient of the interpolation numerator, so the
    value and slope at zero load are kept but the scaled heavy-traffic
    limit becomes the light-traffic slope ``k0 + k1`` instead of the true
    scaled delay.  Coincides with the interpolation whenever ``k2 == 0``
    (e.g. symmetric systems with exponential interarrival times).
    """
    dm = derive_moments(spec)
    rho = spec.rho
    waits = []
    for i in range(spec.n):
        c = interpolation_constants(dm, i, spec.discipline)
        waits.append((c.k0 + c.k1 * rho) / (1.0 - rho))
    return _result(spec, Method.LT_ONLY, tuple(waits))


def mean_wait_ht_only(spec: SystemSpec) -> WaitingTimeResult:
    """Comparator built from the heavy-traffic asymptote alone."""
    dm = derive_moments(spec)
    rho = spec.rho
    waits = tuple(
        heavy_traffic_delay(dm, i, spec.discipline) / (1.0 - rho)
        for i in range(spec.n)
    )
    return _result(spec, Method.HT_ONLY, waits)


def mean_wait_large_s(spec: SystemSpec) -> WaitingTimeResult:
    """Comparator for systems dominated by switch-over times.

    Scales the total mean switch-over time by the exact
    large-switch-over-time limit of the waiting time: per cycle a customer
    waits about half the cycle, corrected down (exhaustive) or up (gated)
    by its own queue's load.
    """
    dm = derive_moments(spec)
    rho = spec.rho
    sign = -1.0 if spec.discipline is Discipline.EXHAUSTIVE else 1.0
    waits = tuple(
        dm.switchover_mean_total
        * (1.0 + sign * rho * f)
        / (2.0 * (1.0 - rho))
        for f in dm.load_fractions
    )
    return _result(spec, Method.LARGE_S, waits)


def pcl_rhs(spec: SystemSpec) -> float:
    """Right-hand side of the pseudo-conservation law.

    The load-weighted sum of mean waiting times in a polling system with
    Poisson arrivals equals this closed form, regardless of how the
    waiting times distribute over queues.
    """
    dm = derive_moments(spec)
    rho = spec.rho
    loads = tuple(rho * f for f in dm.load_fractions)
    sum_sq = sum(x * x for x in loads)
    value = (
        rho * rho / (1.0 - rho) * dm.service_residual_global
        + rho * dm.switchover_residual
        + dm.switchover_mean_total
        / 2.0
        * (rho * rho - sum_sq)
        / (1.0 - rho)
    )
    if spec.discipline is Discipline.GATED:
        # Work gated behind its own queue's gate adds one more term.
        value += sum_sq * dm.switchover_mean_total / (1.0 - rho)
    return value


def pcl_residual(spec: SystemSpec) -> float:
    """Load-weighted interpolation waits minus the conservation-law value.

    Zero (up to rounding) for Poisson interarrival times; a diagnostic of
    the approximation error otherwise.
    """
    result = mean_wait_interpolation(spec)
    dm = derive_moments(spec)
    weighted = sum(
        spec.rho * f * w
        for f, w in zip(dm.load_fractions, result.mean_wait)
    )
    return weighted - pcl_rhs(spec)


def mean_wait_pcl_based(spec: SystemSpec) -> WaitingTimeResult:
    """Comparator that splits the conservation-law total over queues.

    Distributes the pseudo-conservation-law right-hand side proportionally
    to ``1 - rho_i`` (exhaustive) or ``1 + rho_i`` (gated).  At zero load
    the split degenerates to 0/0 and is replaced by its continuous limit,
    the mean residual total switch-over time.
    """
    dm = derive_moments(spec)
    rho = spec.rho
    if rho == 0.0:
        waits = (dm.switchover_residual,) * spec.n
        return _result(spec, Method.PCL_BASED, waits)
    sign = -1.0 if spec.discipline is Discipline.EXHAUSTIVE else 1.0
    loads = tuple(rho * f for f in dm.load_fractions)
    denom = sum(x * (1.0 + sign * x) for x in loads)
    if denom <= 0.0:
        raise DegenerateLoad(
            f"load-weighted split denominator is {denom!r} at rho={rho!r}"
        )
    cycle_residual = pcl_rhs(spec) / denom
    waits = tuple((1.0 + sign * x) * cycle_residual for x in loads)
    return _result(spec, Method.PCL_BASED, waits)


_METHOD_DISPATCH = {
    Method.INTERPOLATION: mean_wait_interpolation,
    Method.LT_ONLY: mean_wait_lt_only,
    Method.HT_ONLY: mean_wait_ht_only,
    Method.LARGE_S: mean_wait_large_s,
    Method.PCL_BASED: mean_wait_pcl_based,
}


def mean_wait(spec: SystemSpec, method: Method) -> WaitingTimeResult:
    """Evaluate any of the estimators by name."""
    return _METHOD_DISPATCH[method](spec)
