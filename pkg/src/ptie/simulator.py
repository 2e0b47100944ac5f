"""Lossless broadcast exchange driven end to end.

Ground-truth payloads come from SplitMix64 so that a given
``(seed, n, width)`` yields the same values in any language:

    state  = seed mod 2**64
    state += 0x9E3779B97F4A7C15                       (mod 2**64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9          (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB          (mod 2**64)
    out = z ^ (z >> 31)

Pairs are visited in rank order (``x[1,2], x[1,3], ..., x[n-1,n]``).  Each
payload takes ``ceil(width / 64)`` consecutive outputs; the first output
supplies the least significant 64 bits, and the result is truncated to
``width`` bits.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .codec import build_schedule, decoder_init, encode
from .core import DEFAULT_PAYLOAD_BITS, PairId, Payload, ProblemInstance, local_set
from .planner import plan_transmissions

_MASK64 = (1 << 64) - 1


class ExchangeError(RuntimeError):
    """The schedule disagrees with the plan, or a decoder produced a wrong value."""


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def generate_payloads(
    instance: ProblemInstance, seed: int, width: int = DEFAULT_PAYLOAD_BITS
) -> dict[PairId, Payload]:
    if width < 1:
        raise ValueError(f"payload width must be >= 1, got {width}")
    rng = SplitMix64(seed)
    words = (width + 63) // 64
    out = {}
    for pair in instance.pairs():
        value = 0
        for w in range(words):
            value |= rng.next() << (64 * w)
        out[pair] = Payload(value & ((1 << width) - 1), width)
    return out


@dataclass
class ExchangeReport:
    n: int
    k: int
    seed: int
    payload_width: int
    total_transmissions: int
    per_client_solved_counts: dict[int, int]
    redundant_packet_counts: dict[int, int]
    success: bool
    incomplete: dict[int, list[str]] = field(default_factory=dict)
    wrong_payloads: dict[int, list[str]] = field(default_factory=dict)

    @property
    def instance(self) -> ProblemInstance:
        return ProblemInstance(self.n, self.k)

    def first_failure(self) -> str | None:
        for client, missing in sorted(self.incomplete.items()):
            if client <= self.k:
                return f"client {client} missing {len(missing)} pair(s): {' '.join(missing)}"
        for client, wrong in sorted(self.wrong_payloads.items()):
            return f"client {client} recovered wrong payloads for: {' '.join(wrong)}"
        return None

    def to_record(self) -> dict:
        rec = asdict(self)
        for key in ("per_client_solved_counts", "redundant_packet_counts", "incomplete", "wrong_payloads"):
            rec[key] = {str(c): v for c, v in rec[key].items()}
        return rec

    @classmethod
    def from_record(cls, record: dict | str) -> "ExchangeReport":
        if isinstance(record, str):
            record = json.loads(record)
        rec = dict(record)
        for key in ("per_client_solved_counts", "redundant_packet_counts", "incomplete", "wrong_payloads"):
            rec[key] = {int(c): v for c, v in rec.get(key, {}).items()}
        return cls(**rec)

    def summary(self) -> str:
        status = "SUCCESS" if self.success else "FAILURE"
        total = self.n * (self.n - 1) // 2
        lines = [
            f"exchange n={self.n} k={self.k} seed={self.seed} width={self.payload_width}: {status}",
            f"transmissions: {self.total_transmissions}",
        ]
        for c, solved in sorted(self.per_client_solved_counts.items()):
            tag = "" if c <= self.k else " (passive)"
            lines.append(
                f"  c{c}: solved {solved}/{total}, redundant {self.redundant_packet_counts.get(c, 0)}{tag}"
            )
        failure = self.first_failure()
        if failure:
            lines.append(failure)
        return "\n".join(lines)


def run_exchange(
    instance: ProblemInstance,
    seed: int = 0,
    width: int = DEFAULT_PAYLOAD_BITS,
    decode_all: bool = False,
    literal: bool = False,
) -> ExchangeReport:
    """Broadcast the schedule and decode at every privileged client.

    ``decode_all`` also runs decoders for clients beyond ``k``; their counts
    are reported but never affect ``success``.
    """
    truth = generate_payloads(instance, seed, width)
    schedule = build_schedule(instance, literal=literal)
    plan = plan_transmissions(instance)
    if schedule.counts() != plan:
        raise ExchangeError(f"schedule counts {schedule.counts().counts} != plan {plan.counts}")

    packets = [encode(entry, truth) for entry in schedule]
    receivers = instance.clients if decode_all else instance.privileged

    solved_counts, redundant, incomplete, wrong = {}, {}, {}, {}
    for c in receivers:
        state = decoder_init(instance, c, {p: truth[p] for p in local_set(instance, c)})
        for pkt in packets:
            # a sender does not hear its own broadcast
            if pkt.sender != c:
                state.ingest(pkt)
        solved_counts[c] = len(state.solved)
        redundant[c] = state.redundant
        if not state.is_complete():
            incomplete[c] = [str(p) for p in state.missing()]
        bad = [str(p) for p, v in state.solved.items() if truth[p] != v]
        if bad:
            wrong[c] = bad

    success = not wrong and not any(c <= instance.k for c in incomplete)
    return ExchangeReport(
        n=instance.n,
        k=instance.k,
        seed=seed,
        payload_width=width,
        total_transmissions=len(packets),
        per_client_solved_counts=solved_counts,
        redundant_packet_counts=redundant,
        success=success,
        incomplete=incomplete,
        wrong_payloads=wrong,
    )
