"""Transmission counts: closed-form optimum, the per-client plan, feasibility
and the uncoded baseline."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .core import ProblemInstance


@dataclass(frozen=True)
class TransmissionPlan:
    """``counts[i-1]`` is the number of packets client ``i`` broadcasts."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError(f"plan counts must be non-negative: {self.counts}")

    @classmethod
    def of(cls, counts: Sequence[int]) -> "TransmissionPlan":
        return cls(tuple(counts))

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, client: int) -> int:
        """1-based access: ``plan[i]`` is y_i."""
        if not 1 <= client <= len(self.counts):
            raise IndexError(f"client index must be in 1..{len(self.counts)}, got {client}")
        return self.counts[client - 1]

    def total(self) -> int:
        return sum(self.counts)

    def to_csv(self) -> str:
        return ",".join(str(c) for c in self.counts)

    @classmethod
    def from_csv(cls, line: str) -> "TransmissionPlan":
        return cls(tuple(int(x) for x in line.strip().split(",")))

    def to_record(self, instance: ProblemInstance) -> dict:
        return {"n": instance.n, "k": instance.k, "y": list(self.counts), "total": self.total()}

    @classmethod
    def from_record(cls, record: dict | str) -> tuple[ProblemInstance, "TransmissionPlan"]:
        if isinstance(record, str):
            record = json.loads(record)
        plan = cls(tuple(record["y"]))
        instance = ProblemInstance(record["n"], record["k"])
        if len(plan) != instance.n or plan.total() != record["total"]:
            raise ValueError(f"inconsistent plan record: {record}")
        return instance, plan


def optimal_count(instance: ProblemInstance) -> int:
    """Minimum total number of broadcasts, ``(n-1)(n-2)/2 + ceil((k-2)/2)``.

    The ceiling is evaluated as ``(k-1)//2``, which agrees for every k >= 1.
    """
    n, k = instance.n, instance.k
    return (n - 1) * (n - 2) // 2 + (k - 1) // 2


def baseline_no_coding_count(instance: ProblemInstance) -> int:
    """Broadcasts needed when every packet is sent uncoded.

    With k >= 3 every packet is wanted by some privileged client; with k = 2
    the pair shared by c_1 and c_2 need not be sent.  k = 1 is undefined.
    """
    n, k = instance.n, instance.k
    if k < 2:
        raise ValueError("uncoded baseline is undefined for k = 1")
    total = n * (n - 1) // 2
    return total - 1 if k == 2 else total


def plan_transmissions(instance: ProblemInstance) -> TransmissionPlan:
    n, k = instance.n, instance.k
    counts = []
    for i in range(1, n + 1):
        if i < k:
            # ceil(k/2 - 1) == k//2 + (k % 2) - 1 == (k - 1)//2
            counts.append((k - 1) // 2)
        elif i == k:
            counts.append(k // 2 - 1 if k % 2 == 0 else 0)
        else:
            counts.append(n + k - i - 1)
    return TransmissionPlan(tuple(counts))


def plan_total(plan: TransmissionPlan) -> int:
    return plan.total()


def check_feasibility(plan: TransmissionPlan, instance: ProblemInstance) -> bool:
    """True iff every privileged client receives at least ``C(l, 2)`` packets
    from any ``l`` other clients.

    Only the ``l`` smallest counts among the other clients need checking:
    that subset minimises the sum for its size.
    """
    if len(plan) != instance.n:
        raise ValueError(f"plan has {len(plan)} entries, instance has n={instance.n}")
    for i in instance.privileged:
        others = sorted(plan.counts[:i - 1] + plan.counts[i:])
        prefix = 0
        for l, y in enumerate(others, start=1):
            prefix += y
            if prefix < l * (l - 1) // 2:
                return False
    return True
