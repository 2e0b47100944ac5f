"""Deterministic pairwise-XOR schedule and a GF(2) decoder.

Schedule rules, for a client ``i`` sending its ``j``-th packet (``j`` from 1):

* ``i <= k``:  ``x[i, nxt(i)] + x[i, nxt(i + j)]`` with ``nxt(m) = m % k + 1``
* ``i > k, j < k``:  ``x[1, i] + x[1 + j, i]``
* ``i > k, j >= k``: ``x[i, i + j - k + 1]`` (uncoded)

The per-client counts come from :func:`planner.plan_transmissions`.

For odd ``k >= 5`` the first rule never touches the pairs ``x[m, k]`` with
``m < (k - 1) / 2`` (client ``k`` sends nothing and the cyclic window of
client ``m`` stops short of ``k``), so those pairs are undecodable.  By
default the privileged block is then built as the even rule over clients
``1..k-1`` (``nxt`` taken mod ``k - 1``), plus one last packet per client
``i < k``: ``x[i, nxt(i)] + x[i, k]``.  Counts are unchanged.  Pass
``literal=True`` to get the unrepaired rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import (
    CodedPacket,
    CodingVector,
    PairId,
    Payload,
    ProblemInstance,
    WidthMismatchError,
    local_set,
    mask_to_pairs,
)
from .planner import TransmissionPlan, plan_transmissions


@dataclass(frozen=True)
class ScheduleEntry:
    sender: int
    j: int
    vector: CodingVector

    def to_line(self) -> str:
        return f"sender={self.sender} j={self.j} packet={self.vector}"

    @classmethod
    def from_line(cls, line: str) -> "ScheduleEntry":
        fields = dict(part.split("=", 1) for part in line.split())
        return cls(int(fields["sender"]), int(fields["j"]), CodingVector.parse(fields["packet"]))


@dataclass(frozen=True)
class Schedule:
    instance: ProblemInstance
    entries: tuple[ScheduleEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def by_sender(self) -> dict[int, list[CodingVector]]:
        out: dict[int, list[CodingVector]] = {i: [] for i in self.instance.clients}
        for e in self.entries:
            out[e.sender].append(e.vector)
        return out

    def counts(self) -> TransmissionPlan:
        return TransmissionPlan(tuple(len(v) for v in self.by_sender().values()))

    def to_lines(self) -> list[str]:
        return [e.to_line() for e in self.entries]

    def to_record(self) -> dict:
        """Per-client rows mirroring the worked-example table layout."""
        return {
            "n": self.instance.n,
            "k": self.instance.k,
            "clients": [
                {"client": i, "y": len(vs), "packets": [str(v) for v in vs]}
                for i, vs in self.by_sender().items()
            ],
        }

    @classmethod
    def from_lines(cls, instance: ProblemInstance, lines: Iterable[str]) -> "Schedule":
        return cls(instance, tuple(ScheduleEntry.from_line(l) for l in lines if l.strip()))

    @classmethod
    def from_record(cls, record: dict | str) -> "Schedule":
        if isinstance(record, str):
            record = json.loads(record)
        instance = ProblemInstance(record["n"], record["k"])
        entries = []
        for row in record["clients"]:
            for j, text in enumerate(row["packets"], start=1):
                entries.append(ScheduleEntry(row["client"], j, CodingVector.parse(text)))
        return cls(instance, tuple(entries))


def _nxt(m: int, k: int) -> int:
    return m % k + 1


def _needs_repair(k: int) -> bool:
    return k % 2 == 1 and k >= 5


def _entry_vector(i: int, j: int, n: int, k: int, literal: bool) -> CodingVector:
    if i <= k:
        if literal or not _needs_repair(k):
            return CodingVector.of(PairId.of(i, _nxt(i, k)), PairId.of(i, _nxt(i + j, k)))
        m = k - 1
        if j < (k - 1) // 2:
            return CodingVector.of(PairId.of(i, _nxt(i, m)), PairId.of(i, _nxt(i + j, m)))
        return CodingVector.of(PairId.of(i, _nxt(i, m)), PairId.of(i, k))
    if j < k:
        return CodingVector.of(PairId.of(1, i), PairId.of(1 + j, i))
    return CodingVector.of(PairId.of(i, i + j - k + 1))


def build_schedule(instance: ProblemInstance, literal: bool = False) -> Schedule:
    """Entries ordered by sender, then packet index."""
    plan = plan_transmissions(instance)
    n, k = instance.n, instance.k
    entries = []
    for i in instance.clients:
        for j in range(1, plan[i] + 1):
            entries.append(ScheduleEntry(i, j, _entry_vector(i, j, n, k, literal)))
    return Schedule(instance, tuple(entries))


def encode(entry: ScheduleEntry, payload_store: Mapping[PairId, Payload]) -> CodedPacket:
    try:
        parts = [payload_store[p] for p in entry.vector]
    except KeyError as exc:
        raise KeyError(f"no payload for {exc.args[0]} needed by {entry.to_line()}") from None
    acc = parts[0]
    for p in parts[1:]:
        acc = acc ^ p
    return CodedPacket(entry.sender, entry.vector, acc)


@dataclass
class DecoderState:
    """Reduced row-echelon basis over GF(2) for one client.

    Each row is a pair-rank bitmask with an accumulated payload value.  The
    pivot of a row is its lowest set bit, and no other row has that bit set,
    so the basis is unique for a given span regardless of arrival order.
    """

    instance: ProblemInstance
    client: int
    width: int
    rows: dict[int, tuple[int, int]] = field(default_factory=dict)  # pivot -> (mask, value)
    solved: dict[PairId, Payload] = field(default_factory=dict)
    redundant: int = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _pivot_mask(self) -> int:
        m = 0
        for p in self.rows:
            m |= 1 << p
        return m

    def ingest(self, packet: CodedPacket) -> set[PairId]:
        """Add one received packet; return the pairs it newly resolved."""
        if packet.payload.width != self.width:
            raise WidthMismatchError(self.width, packet.payload.width)
        n = self.instance.n
        mask = packet.vector.mask(n)
        value = packet.payload.value

        pivots = self._pivot_mask()
        hit = mask & pivots
        while hit:
            low = hit & -hit
            row_mask, row_val = self.rows[low.bit_length() - 1]
            mask ^= row_mask
            value ^= row_val
            hit = mask & pivots
        if not mask:
            self.redundant += 1
            return set()

        low = mask & -mask
        pivot = low.bit_length() - 1
        touched = [pivot]
        for p, (row_mask, row_val) in self.rows.items():
            if row_mask & low:
                self.rows[p] = (row_mask ^ mask, row_val ^ value)
                touched.append(p)
        self.rows[pivot] = (mask, value)

        newly = set()
        for p in touched:
            row_mask, row_val = self.rows[p]
            if row_mask & (row_mask - 1) == 0:
                pair = PairId.from_rank(p, n)
                if pair not in self.solved:
                    self.solved[pair] = Payload(row_val, self.width)
                    newly.add(pair)
        return newly

    def is_complete(self) -> bool:
        return len(self.solved) == self.instance.num_pairs

    def missing(self) -> list[PairId]:
        return [p for p in self.instance.pairs() if p not in self.solved]

    def unresolved_rows(self) -> list[list[PairId]]:
        return [mask_to_pairs(m, self.instance.n) for m, _ in self.rows.values() if m & (m - 1)]


def decoder_init(
    instance: ProblemInstance, client: int, payload_store: Mapping[PairId, Payload]
) -> DecoderState:
    """Seed a decoder with the client's own packets (identity rows)."""
    local = local_set(instance, client)
    if set(payload_store) != local:
        raise ValueError(
            f"client {client} store must cover exactly its {len(local)} local pairs, "
            f"got {sorted(str(p) for p in payload_store)}"
        )
    widths = {p.width for p in payload_store.values()}
    if len(widths) != 1:
        raise ValueError(f"local payloads have mixed widths {sorted(widths)}")
    state = DecoderState(instance, client, widths.pop())
    for pair in sorted(local):
        state.ingest(CodedPacket(client, CodingVector.of(pair), payload_store[pair]))
    return state


def ingest(state: DecoderState, packet: CodedPacket) -> set[PairId]:
    return state.ingest(packet)


def is_complete(state: DecoderState) -> bool:
    return state.is_complete()
