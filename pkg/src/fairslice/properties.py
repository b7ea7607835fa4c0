"""Exact property checkers and exhaustive misreport search.

Every checker returns a PropertyReport whose verdict is decided by exact
rational comparison — there are no tolerances anywhere. A "violated"
verdict always carries a witness with the exact quantities needed to
re-check the violation independently.

Truthfulness is checked by brute force over a finite family of candidate
misreports (all prefixes on a grid, or all unions of grid cells). Within
the family the search is exhaustive, so a "holds" verdict certifies the
whole family, and a "violated" verdict names the best deviation found.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    PreconditionUnmetError,
    SearchSpaceTooLargeError,
    ShapeMismatchError,
)
from .eating import simulate_eating
from .intervals import FULL, ONE, ZERO, IntervalSet
from .mechanisms import MechanismInfo, allocate_cake2
from .model import Allocation, Instance, Resource, Valuation

_INDICATOR_AGENT_CAP = 16
SUBSET_GRID_CAP = 14


@dataclass(frozen=True)
class PropertyReport:
    property: str
    verdict: str  # "holds" | "violated"
    witness: dict | None = None

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def _holds(name: str, witness: dict | None = None) -> PropertyReport:
    return PropertyReport(name, "holds", witness)


def _violated(name: str, witness: dict) -> PropertyReport:
    return PropertyReport(name, "violated", witness)


def _check_shapes(instance: Instance, allocation: Allocation) -> None:
    if instance.n != allocation.n:
        raise ShapeMismatchError(
            f"allocation has {allocation.n} pieces for {instance.n} agents"
        )


# -- fairness ---------------------------------------------------------------


def check_envy_free(instance: Instance, allocation: Allocation) -> PropertyReport:
    """No agent strictly prefers another's piece (reversed for chores)."""
    _check_shapes(instance, allocation)
    chore = instance.kind is Resource.CHORE
    for i, valuation in enumerate(instance.valuations):
        own = valuation.value(allocation.pieces[i])
        for j, piece in enumerate(allocation.pieces):
            if i == j:
                continue
            other = valuation.value(piece)
            envious = own > other if chore else own < other
            if envious:
                return _violated(
                    "envy-free",
                    {
                        "agent": instance.ids[i],
                        "other": instance.ids[j],
                        "own_value": own,
                        "other_value": other,
                    },
                )
    return _holds("envy-free")


def check_proportional(instance: Instance, allocation: Allocation) -> PropertyReport:
    """Each agent gets at least (cake) / carries at most (chore) a 1/n share."""
    _check_shapes(instance, allocation)
    chore = instance.kind is Resource.CHORE
    n = instance.n
    for i, valuation in enumerate(instance.valuations):
        own = valuation.value(allocation.pieces[i])
        threshold = valuation.total() / n
        short = own > threshold if chore else own < threshold
        if short:
            return _violated(
                "proportional",
                {
                    "agent": instance.ids[i],
                    "value": own,
                    "threshold": threshold,
                },
            )
    return _holds("proportional")


def _atoms(point_sources: Iterable[IntervalSet]) -> list[tuple[Fraction, Fraction]]:
    points = {ZERO, ONE}
    for s in point_sources:
        for left, right in s.intervals:
            points.add(left)
            points.add(right)
    events = sorted(points)
    return list(zip(events, events[1:]))


def check_pareto(instance: Instance, allocation: Allocation) -> PropertyReport:
    """Pareto optimality via the atom criterion.

    Cut [0,1] at every endpoint of every desired set and every piece.
    For indicator valuations under a full allocation, an allocation is
    Pareto optimal exactly when each atom somebody wants goes to somebody
    who wants it (cake), resp. each atom somebody is indifferent to goes
    to somebody indifferent (chore): either condition pins total welfare
    at its exact bound, and any Pareto improvement would move the total
    past the bound.
    """
    _check_shapes(instance, allocation)
    if allocation.free_disposal:
        raise PreconditionUnmetError(
            "Pareto check is defined for full allocations only"
        )
    chore = instance.kind is Resource.CHORE
    desired = [v.desired for v in instance.valuations]
    for left, right in _atoms(list(desired) + list(allocation.pieces)):
        mid = (left + right) / 2
        owner = next(
            i for i, piece in enumerate(allocation.pieces) if piece.contains(mid)
        )
        wanting = [i for i, w in enumerate(desired) if w.contains(mid)]
        if chore:
            if len(wanting) < instance.n and owner in wanting:
                return _violated(
                    "pareto",
                    {
                        "atom": (left, right),
                        "owner": instance.ids[owner],
                        "free_for": [
                            instance.ids[i]
                            for i in range(instance.n)
                            if i not in wanting
                        ],
                    },
                )
        elif wanting and owner not in wanting:
            return _violated(
                "pareto",
                {
                    "atom": (left, right),
                    "owner": instance.ids[owner],
                    "wanted_by": [instance.ids[i] for i in wanting],
                },
            )
    return _holds("pareto")


def check_full_and_connected(allocation: Allocation) -> PropertyReport:
    """Coverage and connectedness, reported together with sub-verdicts."""
    covered = IntervalSet()
    for piece in allocation.pieces:
        covered = covered.union(piece)
    missing = FULL.difference(covered)
    full_ok = missing.is_empty()
    scattered = [
        (i, piece)
        for i, piece in enumerate(allocation.pieces)
        if len(piece.intervals) > 1
    ]
    witness: dict = {
        "full": "holds" if full_ok else "violated",
        "connected": "holds" if not scattered else "violated",
    }
    if not full_ok:
        witness["unallocated"] = missing
    if scattered:
        witness["agent_index"] = scattered[0][0]
        witness["pieces"] = scattered[0][1]
    verdict = "holds" if full_ok and not scattered else "violated"
    return PropertyReport("full-and-connected", verdict, witness)


# -- structure-sensitivity -----------------------------------------------


def indicator_vector(instance: Instance) -> dict[frozenset[int], Fraction]:
    """Length of cake desired by exactly each subset of agents.

    All 2^n subsets appear as keys; the values sum to 1.
    """
    if instance.n > _INDICATOR_AGENT_CAP:
        raise SearchSpaceTooLargeError(
            f"indicator vector has 2^{instance.n} entries; cap is 2^{_INDICATOR_AGENT_CAP}"
        )
    desired = [v.desired for v in instance.valuations]
    entries: dict[frozenset[int], Fraction] = {}
    for size in range(instance.n + 1):
        _fill_subsets(entries, instance.n, size)
    for left, right in _atoms(desired):
        mid = (left + right) / 2
        key = frozenset(i for i, w in enumerate(desired) if w.contains(mid))
        entries[key] += right - left
    return entries


def _fill_subsets(
    entries: dict[frozenset[int], Fraction], n: int, size: int
) -> None:
    from itertools import combinations

    for combo in combinations(range(n), size):
        entries[frozenset(combo)] = ZERO


def check_anonymity(
    mechanism: MechanismInfo, instance: Instance, sigma: Sequence[int]
) -> PropertyReport:
    """Run the mechanism with agents reordered by sigma and compare what
    each agent ends up with: under anonymity, renaming may only relabel
    pieces, never change anyone's own value."""
    original = mechanism.run(instance)
    permuted = mechanism.run(instance.permuted(sigma))
    before = original.values(instance)
    after = tuple(
        instance.valuations[i].value(permuted.pieces[list(sigma).index(i)])
        for i in range(instance.n)
    )
    witness = {
        "sigma": list(sigma),
        "original_values": before,
        "permuted_values": after,
    }
    for i in range(instance.n):
        if before[i] != after[i]:
            witness["agent"] = instance.ids[i]
            witness["original_value"] = before[i]
            witness["permuted_value"] = after[i]
            return _violated("anonymity", witness)
    return _holds("anonymity", witness)


def check_position_oblivious(
    mechanism: MechanismInfo, instance_a: Instance, instance_b: Instance
) -> PropertyReport:
    """Two instances wanting equal amounts per agent-subset (only the
    positions differ) should hand every agent equal value."""
    if instance_a.n != instance_b.n or instance_a.kind is not instance_b.kind:
        raise PreconditionUnmetError(
            "paired instances must share agent count and resource kind"
        )
    if indicator_vector(instance_a) != indicator_vector(instance_b):
        raise PreconditionUnmetError(
            "paired instances must desire equal lengths per agent subset"
        )
    values_a = mechanism.run(instance_a).values(instance_a)
    values_b = mechanism.run(instance_b).values(instance_b)
    witness = {"values_a": values_a, "values_b": values_b}
    for i in range(instance_a.n):
        if values_a[i] != values_b[i]:
            witness["agent"] = instance_a.ids[i]
            return _violated("position-oblivious", witness)
    return _holds("position-oblivious", witness)


def check_crossing_vs_eating(instance: Instance) -> tuple[PropertyReport, PropertyReport]:
    """Compare the two independent formulations of the two-agent cake split.

    The crossing form and the eating race provably give each agent the
    same value; the physical pieces can legitimately differ (only in cake
    neither agent wants) when the last active eater leaps holes, and any
    such difference is reported as a finding rather than masked.
    """
    crossing = allocate_cake2(instance)
    eating, _ = simulate_eating(instance)
    values_crossing = crossing.values(instance)
    values_eating = eating.values(instance)
    value_witness: dict = {
        "crossing_values": values_crossing,
        "eating_values": values_eating,
    }
    if values_crossing == values_eating:
        values_report = _holds("crossing-vs-eating-values", value_witness)
    else:
        mismatch = next(
            i
            for i in range(instance.n)
            if values_crossing[i] != values_eating[i]
        )
        value_witness["agent"] = instance.ids[mismatch]
        values_report = _violated("crossing-vs-eating-values", value_witness)
    if crossing.pieces == eating.pieces:
        pieces_report = _holds("crossing-vs-eating-pieces")
    else:
        mismatch = next(
            i
            for i in range(instance.n)
            if crossing.pieces[i] != eating.pieces[i]
        )
        pieces_report = _violated(
            "crossing-vs-eating-pieces",
            {
                "agent": instance.ids[mismatch],
                "crossing_piece": crossing.pieces[mismatch],
                "eating_piece": eating.pieces[mismatch],
            },
        )
    return values_report, pieces_report


# -- truthfulness -----------------------------------------------------------


def grid_prefix_reports(grid_denominator: int) -> tuple[IntervalSet, ...]:
    """All prefixes [0, k/D], k = 0..D."""
    d = Fraction(grid_denominator)
    return tuple(
        IntervalSet.prefix(Fraction(k) / d) for k in range(grid_denominator + 1)
    )


def grid_subset_reports(grid_denominator: int) -> tuple[IntervalSet, ...]:
    """All unions of the D grid cells, in mask order (2^D candidates)."""
    if grid_denominator > SUBSET_GRID_CAP:
        raise SearchSpaceTooLargeError(
            f"subset family at D={grid_denominator} has 2^{grid_denominator} "
            f"candidates; cap is D={SUBSET_GRID_CAP}"
        )
    d = Fraction(grid_denominator)
    cells = [
        (Fraction(k) / d, Fraction(k + 1) / d) for k in range(grid_denominator)
    ]
    reports = []
    for mask in range(1 << grid_denominator):
        reports.append(
            IntervalSet.from_endpoints(
                [cells[k] for k in range(grid_denominator) if mask >> k & 1]
            )
        )
    return tuple(reports)


def candidate_reports(family: str, grid_denominator: int) -> tuple[IntervalSet, ...]:
    if grid_denominator < 1:
        raise PreconditionUnmetError("grid denominator must be at least 1")
    if family == "prefix":
        return grid_prefix_reports(grid_denominator)
    if family == "subsets":
        return grid_subset_reports(grid_denominator)
    raise PreconditionUnmetError(
        f"unknown report family {family!r}; choose 'prefix' or 'subsets'"
    )


def search_deviations(
    mechanism: MechanismInfo,
    instance: Instance,
    agent: int,
    grid_denominator: int,
    family: str,
) -> PropertyReport:
    """Exhaustive misreport search for one agent over a finite family.

    Every candidate report replaces the agent's true one; the outcome is
    scored under the TRUE valuation. The verdict is violated iff some
    candidate strictly beats truth-telling; the witness is the best
    deviation, ties broken toward the lexicographically smallest interval
    tuple among the equally good reports, so the result is deterministic
    no matter how the evaluation is scheduled.
    """
    if mechanism.prefix_only and family != "prefix":
        raise PreconditionUnmetError(
            f"{mechanism.name} accepts only prefix reports; use the prefix family"
        )
    reports = candidate_reports(family, grid_denominator)
    values = [
        deviation_value(mechanism, instance, agent, report) for report in reports
    ]
    return summarize_deviation_search(
        mechanism, instance, agent, grid_denominator, family, reports, values
    )


def deviation_value(
    mechanism: MechanismInfo,
    instance: Instance,
    agent: int,
    report: IntervalSet,
) -> Fraction:
    """True value the agent ends up with after submitting `report`."""
    outcome = mechanism.run(instance.with_valuation(agent, Valuation(report)))
    return instance.valuations[agent].value(outcome.pieces[agent])


def summarize_deviation_search(
    mechanism: MechanismInfo,
    instance: Instance,
    agent: int,
    grid_denominator: int,
    family: str,
    reports: Sequence[IntervalSet],
    values: Sequence[Fraction],
) -> PropertyReport:
    """Reduce per-candidate outcomes to a deterministic report."""
    truthful = instance.valuations[agent].value(
        mechanism.run(instance).pieces[agent]
    )
    chore = instance.kind is Resource.CHORE
    best_idx = 0
    for idx in range(1, len(values)):
        better = (
            (values[idx] < values[best_idx])
            if chore
            else (values[idx] > values[best_idx])
        )
        # equal-value candidates resolve to the lexicographically smallest
        # report, so the witness is a pure function of the candidate set
        if better or (
            values[idx] == values[best_idx]
            and reports[idx].intervals < reports[best_idx].intervals
        ):
            best_idx = idx
    best = values[best_idx]
    improves = best < truthful if chore else best > truthful
    witness = {
        "agent": instance.ids[agent],
        "family": family,
        "grid": grid_denominator,
        "truthful_value": truthful,
        "best_report": reports[best_idx],
        "best_value": best,
        "gain": truthful - best if chore else best - truthful,
    }
    if improves:
        return _violated("truthful", witness)
    return _holds("truthful", witness)
