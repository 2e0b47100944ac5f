"""Brute-force cross-checks for the closed-form results.

Everything here is deliberately naive and shares no code with
``planner.check_feasibility`` or the codec decoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator

from . import codec, planner
from .codec import Schedule
from .core import ProblemInstance
from .planner import TransmissionPlan, optimal_count

EXHAUSTIVE_MAX_N = 16
BRUTE_FORCE_MAX_N = 6


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    instance: ProblemInstance
    minimum_total: int | None  # None if nothing feasible up to the search bound
    witness_plan: TransmissionPlan | None
    plans_examined: int
    search_bound: int
    # minimum_total == search_bound: every plan with total search_bound - 1 was infeasible
    tight: bool


def exhaustive_feasibility(plan: TransmissionPlan, instance: ProblemInstance) -> bool:
    """Check every non-empty subset of the other clients for every privileged client."""
    n = instance.n
    if n > EXHAUSTIVE_MAX_N:
        raise OracleLimitError(f"exhaustive feasibility is limited to n <= {EXHAUSTIVE_MAX_N}")
    if len(plan) != n:
        raise ValueError(f"plan has {len(plan)} entries, instance has n={n}")
    y = plan.counts
    for i in range(instance.k):
        others = [y[j] for j in range(n) if j != i]
        m = len(others)
        # subset sums over bitmasks of the other clients
        sums = [0] * (1 << m)
        sizes = [0] * (1 << m)
        for mask in range(1, 1 << m):
            low = mask & -mask
            idx = low.bit_length() - 1
            sums[mask] = sums[mask ^ low] + others[idx]
            sizes[mask] = sizes[mask ^ low] + 1
            s = sizes[mask]
            if sums[mask] < s * (s - 1) // 2:
                return False
    return True


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def brute_force_minimum(
    instance: ProblemInstance, bound: Callable[[ProblemInstance], int] = optimal_count
) -> OracleResult:
    """Smallest total over all plans passing :func:`exhaustive_feasibility`.

    Totals are tried in increasing order up to ``bound(instance)``, so every
    composition of ``bound - 1`` is examined before the bound itself.
    """
    if instance.n > BRUTE_FORCE_MAX_N:
        raise OracleLimitError(f"brute-force search is limited to n <= {BRUTE_FORCE_MAX_N}")
    limit = bound(instance)
    examined = 0
    for total in range(limit + 1):
        for counts in compositions(total, instance.n):
            examined += 1
            plan = TransmissionPlan(counts)
            if exhaustive_feasibility(plan, instance):
                return OracleResult(
                    instance, total, plan, examined, limit, tight=(total == limit)
                )
    return OracleResult(instance, None, None, examined, limit, tight=True)


def gf2_rank(rows: list[int]) -> int:
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def decodability_rank_check(instance: ProblemInstance, schedule: Schedule) -> bool:
    """Rank of [local identity rows; every coding vector] is full for each privileged client."""
    n = instance.n
    full = n * (n - 1) // 2
    # ranks re-derived from lexicographic enumeration, not PairId.rank
    universe = list(combinations(range(1, n + 1), 2))
    index = {pair: r for r, pair in enumerate(universe)}
    vectors = []
    for e in schedule:
        v = 0
        for p in e.vector.operands:
            v ^= 1 << index[(p.lo, p.hi)]
        vectors.append(v)
    for i in instance.privileged:
        local = [1 << r for r, pair in enumerate(universe) if i in pair]
        if gf2_rank(local + vectors) != full:
            return False
    return True


VERIFY_MAX_N = 20
FEASIBILITY_SWEEP_MAX_N = 5


@dataclass
class SweepCell:
    n: int
    k: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def feasibility_disagreements(instance: ProblemInstance, slack: int = 2) -> list[TransmissionPlan]:
    """Plans with total <= optimum + slack where the two feasibility checks differ."""
    out = []
    for total in range(planner.optimal_count(instance) + slack + 1):
        for counts in compositions(total, instance.n):
            plan = TransmissionPlan(counts)
            if planner.check_feasibility(plan, instance) != exhaustive_feasibility(plan, instance):
                out.append(plan)
    return out


def verify_instance(instance: ProblemInstance) -> SweepCell:
    # planner attributes looked up at call time so a patched formula is caught
    n, k = instance.n, instance.k
    failures = []
    opt = planner.optimal_count(instance)
    plan = planner.plan_transmissions(instance)
    if planner.plan_total(plan) != opt:
        failures.append(f"plan total {planner.plan_total(plan)} != optimum {opt}")
    if not planner.check_feasibility(plan, instance):
        failures.append("plan fails sorted-prefix feasibility")
    if n <= EXHAUSTIVE_MAX_N and not exhaustive_feasibility(plan, instance):
        failures.append("plan fails exhaustive feasibility")
    if n <= BRUTE_FORCE_MAX_N:
        res = brute_force_minimum(instance, bound=planner.optimal_count)
        if res.minimum_total != opt:
            failures.append(f"brute-force minimum {res.minimum_total} != optimum {opt}")
    if n <= FEASIBILITY_SWEEP_MAX_N:
        bad = feasibility_disagreements(instance)
        if bad:
            failures.append(f"feasibility checks disagree on {len(bad)} plan(s), e.g. {bad[0].counts}")
    if not decodability_rank_check(instance, codec.build_schedule(instance)):
        failures.append("schedule not decodable (rank deficient)")
    return SweepCell(n, k, failures)


def verify_sweep(n_max: int) -> list[SweepCell]:
    if not 2 <= n_max <= VERIFY_MAX_N:
        raise OracleLimitError(f"n_max must be in 2..{VERIFY_MAX_N}, got {n_max}")
    return [
        verify_instance(ProblemInstance(n, k))
        for n in range(2, n_max + 1)
        for k in range(1, n + 1)
    ]


def render_matrix(cells: list[SweepCell]) -> str:
    n_max = max(c.n for c in cells)
    grid = {(c.n, c.k): c for c in cells}
    width = max(4, len(str(n_max)) + 2)
    lines = ["n\\k".ljust(5) + "".join(f"{k:>{width}}" for k in range(1, n_max + 1))]
    for n in range(2, n_max + 1):
        row = []
        for k in range(1, n_max + 1):
            cell = grid.get((n, k))
            row.append("." if cell is None else ("ok" if cell.ok else "FAIL"))
        lines.append(f"{n:<5}" + "".join(f"{r:>{width}}" for r in row))
    for c in cells:
        for f in c.failures:
            lines.append(f"FAIL (n={c.n}, k={c.k}): {f}")
    return "\n".join(lines)
