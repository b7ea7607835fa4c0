"""Exhaustive grid sweeps, parallel search plumbing, and instance generators.

Sweeps enumerate every prefix-report instance on a grid, run a mechanism,
and apply every checker plus the per-agent misreport search. Results are
deterministic: instances are visited in lexicographic report order and
parallel evaluation only shards the same ordered list, so output is
byte-identical for any worker count.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from random import Random
from typing import Iterator, Sequence

from .intervals import IntervalSet
from .mechanisms import MechanismInfo, get_mechanism
from .model import Instance, Resource, Valuation
from .properties import (
    PropertyReport,
    candidate_reports,
    check_envy_free,
    check_full_and_connected,
    check_pareto,
    check_proportional,
    deviation_value,
    search_deviations,
    summarize_deviation_search,
)
from .serialize import report_document, to_jsonable


def grid_points(grid_denominator: int) -> tuple[Fraction, ...]:
    d = Fraction(grid_denominator)
    return tuple(Fraction(k) / d for k in range(grid_denominator + 1))


def instance_from_prefixes(kind: Resource, xs: Sequence[Fraction]) -> Instance:
    return Instance(
        kind, tuple(Valuation(IntervalSet.prefix(x)) for x in xs)
    )


def all_prefix_profiles(
    n: int, grid_denominator: int
) -> Iterator[tuple[Fraction, ...]]:
    """Every n-tuple of prefix endpoints on the grid, lexicographically."""
    return itertools.product(grid_points(grid_denominator), repeat=n)


def instance_reports(
    mechanism: MechanismInfo,
    instance: Instance,
    deviation_grid: int,
    family: str = "prefix",
) -> tuple[tuple[Fraction, ...], list[PropertyReport]]:
    """Run the mechanism and every sweep checker on one instance."""
    allocation = mechanism.run(instance)
    reports = [
        check_full_and_connected(allocation),
        check_envy_free(instance, allocation),
        check_proportional(instance, allocation),
        check_pareto(instance, allocation),
    ]
    for agent in range(instance.n):
        reports.append(
            search_deviations(mechanism, instance, agent, deviation_grid, family)
        )
    return allocation.values(instance), reports


def guarantee_violations(
    mechanism: MechanismInfo, reports: Sequence[PropertyReport]
) -> list[str]:
    """Which of the mechanism's own promises a report set breaks.

    Reports about properties the mechanism never claimed (e.g. envy-freeness
    for the n-agent chore divider) are informational and not returned here.
    """
    broken = []
    for report in reports:
        if report.property == "full-and-connected":
            witness = report.witness or {}
            if "full" in mechanism.guarantees and witness.get("full") == "violated":
                broken.append("full")
            if (
                "connected" in mechanism.guarantees
                and witness.get("connected") == "violated"
            ):
                broken.append("connected")
        elif report.property == "truthful":
            if not report.holds and "truthful" in mechanism.guarantees:
                broken.append("truthful")
        elif not report.holds and report.property in mechanism.guarantees:
            broken.append(report.property)
    return broken


def _sweep_record(
    mechanism: MechanismInfo,
    index: int,
    xs: tuple[Fraction, ...],
    deviation_grid: int,
) -> tuple[dict, list[str]]:
    instance = instance_from_prefixes(mechanism.kind, xs)
    values, reports = instance_reports(mechanism, instance, deviation_grid)
    record = {
        "instance": index,
        "xs": to_jsonable(list(xs)),
        "values": to_jsonable(list(values)),
        "reports": [report_document(r) for r in reports],
    }
    return record, guarantee_violations(mechanism, reports)


def _sweep_chunk(args: tuple) -> list[tuple[dict, list[str]]]:
    mechanism_name, n, grid, deviation_grid, start, stop = args
    mechanism = get_mechanism(mechanism_name)
    profiles = itertools.islice(all_prefix_profiles(n, grid), start, stop)
    return [
        _sweep_record(mechanism, start + offset, xs, deviation_grid)
        for offset, xs in enumerate(profiles)
    ]


def sweep_prefix_grid(
    mechanism_name: str,
    n: int,
    grid_denominator: int,
    workers: int = 1,
) -> Iterator[tuple[dict, list[str]]]:
    """Yield (record, broken-guarantees) per instance, in instance order."""
    mechanism = get_mechanism(mechanism_name)
    total = (grid_denominator + 1) ** n
    if workers <= 1:
        for index, xs in enumerate(all_prefix_profiles(n, grid_denominator)):
            yield _sweep_record(mechanism, index, xs, grid_denominator)
        return
    chunk = max(1, -(-total // (workers * 4)))
    tasks = [
        (mechanism_name, n, grid_denominator, grid_denominator, start,
         min(start + chunk, total))
        for start in range(0, total, chunk)
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in pool.map(_sweep_chunk, tasks):
            yield from batch


# -- parallel misreport search ---------------------------------------------


def _deviation_chunk(args: tuple) -> list[Fraction]:
    mechanism_name, instance, agent, grid, family, start, stop = args
    mechanism = get_mechanism(mechanism_name)
    reports = candidate_reports(family, grid)[start:stop]
    return [deviation_value(mechanism, instance, agent, r) for r in reports]


def search_deviations_parallel(
    mechanism_name: str,
    instance: Instance,
    agent: int,
    grid_denominator: int,
    family: str,
    workers: int = 1,
) -> PropertyReport:
    """search_deviations with the candidate list sharded across processes.

    The reduction happens in canonical candidate order, so the outcome is
    identical to the serial search for any worker count.
    """
    mechanism = get_mechanism(mechanism_name)
    if workers <= 1:
        return search_deviations(
            mechanism, instance, agent, grid_denominator, family
        )
    reports = candidate_reports(family, grid_denominator)
    chunk = max(1, -(-len(reports) // (workers * 4)))
    tasks = [
        (mechanism_name, instance, agent, grid_denominator, family, start,
         min(start + chunk, len(reports)))
        for start in range(0, len(reports), chunk)
    ]
    values: list[Fraction] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in pool.map(_deviation_chunk, tasks):
            values.extend(batch)
    return summarize_deviation_search(
        mechanism, instance, agent, grid_denominator, family, reports, values
    )


# -- randomized instances -----------------------------------------------


def random_interval_set(
    rng: Random, max_denominator: int = 12, max_intervals: int = 3
) -> IntervalSet:
    """A random canonical set with endpoints on a random rational grid."""
    denominator = rng.randint(1, max_denominator)
    count = rng.randint(0, min(max_intervals, (denominator + 1) // 2))
    points = sorted(rng.sample(range(denominator + 1), 2 * count))
    return IntervalSet.from_endpoints(
        [
            (Fraction(points[2 * i], denominator), Fraction(points[2 * i + 1], denominator))
            for i in range(count)
        ]
    )


def random_two_agent_instance(rng: Random, kind: Resource = Resource.CAKE) -> Instance:
    return Instance(
        kind,
        (
            Valuation(random_interval_set(rng)),
            Valuation(random_interval_set(rng)),
        ),
    )


def random_grid_subset(rng: Random, grid_denominator: int) -> IntervalSet:
    """A random union of cells of the uniform grid."""
    d = Fraction(grid_denominator)
    return IntervalSet.from_endpoints(
        [
            (Fraction(k) / d, Fraction(k + 1) / d)
            for k in range(grid_denominator)
            if rng.getrandbits(1)
        ]
    )


# -- stress family for position sensitivity ---------------------------------


def position_stress_family(k: int) -> tuple[Instance, Instance, Instance]:
    """Three staged 2k-agent cake instances that pin down how a mechanism's
    payoffs depend on piece positions.

    The stages keep every agent-subset's desired length fixed while moving
    the first two agents' desired cake around, so any payoff change across
    stages is position sensitivity by construction. Endpoints live on a
    1/(4k^2+k) grid (the construction is scaled into [0,1]).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    scale = Fraction(4 * k * k + k)

    def unit(a: int, b: int) -> tuple[Fraction, Fraction]:
        return Fraction(a) / scale, Fraction(b) / scale

    base = [
        IntervalSet.from_endpoints([unit(i - 1, i)])
        for i in range(1, k + 1)
        for _ in (0, 1)
    ]
    spread = IntervalSet.from_endpoints([unit(0, 1), unit(k, 3 * k - 1)])
    first = IntervalSet.from_endpoints([unit(0, 1)])

    def build(w1: IntervalSet, w2: IntervalSet) -> Instance:
        desired = [w1, w2] + base[2:]
        return Instance(Resource.CAKE, tuple(Valuation(w) for w in desired))

    return (
        build(base[0], base[1]),
        build(spread, first),
        build(spread, spread),
    )
