"""Domain model: clients, pairwise CSI packets, payloads and coding vectors.

Clients are numbered 1..n everywhere.  Each unordered pair of clients
``{i, j}`` shares one packet, written ``x[i,j]`` with ``i < j``.  Pairs are
ranked lexicographically on ``(lo, hi)`` so a set of pairs can be held as an
integer bitmask (bit ``r`` set <=> pair of rank ``r`` present).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

DEFAULT_PAYLOAD_BITS = 32


@dataclass(frozen=True)
class ProblemInstance:
    """``n`` clients, of which the first ``k`` must learn every packet."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not isinstance(self.k, int):
            raise TypeError("n and k must be integers")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k must satisfy 1 <= k <= n={self.n}, got {self.k}")

    @property
    def num_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def clients(self) -> range:
        return range(1, self.n + 1)

    @property
    def privileged(self) -> range:
        return range(1, self.k + 1)

    def check_client(self, i: int) -> int:
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise ValueError(f"client index must be in 1..{self.n}, got {i!r}")
        return i

    def pairs(self) -> Iterator["PairId"]:
        """All pairs in rank order."""
        for lo in range(1, self.n):
            for hi in range(lo + 1, self.n + 1):
                yield PairId(lo, hi)

    def is_privileged(self, i: int) -> bool:
        return 1 <= i <= self.k

    def __str__(self) -> str:
        return f"(n={self.n}, k={self.k})"


@dataclass(frozen=True, order=True)
class PairId:
    """Unordered client pair in canonical ``lo < hi`` form."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not 1 <= self.lo < self.hi:
            raise ValueError(f"pair must satisfy 1 <= lo < hi, got ({self.lo}, {self.hi})")

    @classmethod
    def of(cls, i: int, j: int) -> "PairId":
        if i == j:
            raise ValueError(f"a pair needs two distinct clients, got {i} twice")
        return cls(min(i, j), max(i, j))

    def rank(self, n: int) -> int:
        if self.hi > n:
            raise ValueError(f"{self} is outside a {n}-client universe")
        # pairs with a smaller lo come first: sum_{a<lo} (n - a)
        before = (self.lo - 1) * n - (self.lo - 1) * self.lo // 2
        return before + (self.hi - self.lo - 1)

    @classmethod
    def from_rank(cls, rank: int, n: int) -> "PairId":
        total = n * (n - 1) // 2
        if not 0 <= rank < total:
            raise ValueError(f"rank must be in 0..{total - 1}, got {rank}")
        lo = 1
        while rank >= n - lo:
            rank -= n - lo
            lo += 1
        return cls(lo, lo + 1 + rank)

    def contains(self, i: int) -> bool:
        return i == self.lo or i == self.hi

    def other(self, i: int) -> int:
        if i == self.lo:
            return self.hi
        if i == self.hi:
            return self.lo
        raise ValueError(f"client {i} is not an endpoint of {self}")

    def __str__(self) -> str:
        return f"x[{self.lo},{self.hi}]"

    @classmethod
    def parse(cls, text: str) -> "PairId":
        text = text.strip()
        if not (text.startswith("x[") and text.endswith("]")):
            raise ValueError(f"not a rendered pair: {text!r}")
        a, b = text[2:-1].split(",")
        return cls.of(int(a), int(b))


@dataclass(frozen=True)
class Payload:
    """Fixed-width bit vector; ``^`` is bitwise XOR."""

    value: int
    width: int = DEFAULT_PAYLOAD_BITS

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"payload width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value:#x} does not fit in {self.width} bits")

    def __xor__(self, other: "Payload") -> "Payload":
        if not isinstance(other, Payload):
            return NotImplemented
        if other.width != self.width:
            raise WidthMismatchError(self.width, other.width)
        return Payload(self.value ^ other.value, self.width)

    @classmethod
    def zero(cls, width: int = DEFAULT_PAYLOAD_BITS) -> "Payload":
        return cls(0, width)

    def hex(self) -> str:
        return f"{self.value:0{(self.width + 3) // 4}x}"


class WidthMismatchError(ValueError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"payload width mismatch: expected {expected} bits, got {got}")
        self.expected = expected
        self.got = got


@dataclass(frozen=True)
class CodingVector:
    """The packets XORed together in one transmission.

    ``operands`` keeps construction order, which only affects rendering;
    equality and hashing use the support set.
    """

    operands: tuple[PairId, ...]

    def __post_init__(self) -> None:
        if not self.operands:
            raise ValueError("coding vector support must be non-empty")
        if len(set(self.operands)) != len(self.operands):
            raise ValueError(f"repeated operand in {self.operands}")

    @classmethod
    def of(cls, *pairs: PairId) -> "CodingVector":
        return cls(tuple(pairs))

    @cached_property
    def support(self) -> frozenset[PairId]:
        return frozenset(self.operands)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CodingVector):
            return NotImplemented
        return self.support == other.support

    def __hash__(self) -> int:
        return hash(self.support)

    def __len__(self) -> int:
        return len(self.operands)

    def __iter__(self) -> Iterator[PairId]:
        return iter(self.operands)

    def mask(self, n: int) -> int:
        return pairs_to_mask(self.operands, n)

    def __str__(self) -> str:
        return "+".join(str(p) for p in self.operands)

    @classmethod
    def parse(cls, text: str) -> "CodingVector":
        return cls(tuple(PairId.parse(part) for part in text.split("+")))


@dataclass(frozen=True)
class CodedPacket:
    sender: int
    vector: CodingVector
    payload: Payload

    def __post_init__(self) -> None:
        for p in self.vector:
            if not p.contains(self.sender):
                raise ValueError(f"client {self.sender} cannot encode {p}: not a local packet")


class WantedSet(frozenset):
    """Frozenset of wanted pairs, tagged with whether the client must decode them."""

    privileged: bool

    def __new__(cls, pairs: Iterable[PairId], privileged: bool):
        obj = super().__new__(cls, pairs)
        obj.privileged = privileged
        return obj


def local_set(instance: ProblemInstance, i: int) -> frozenset[PairId]:
    """Packets client ``i`` holds initially: every pair with ``i`` as an endpoint."""
    instance.check_client(i)
    return frozenset(PairId.of(i, j) for j in instance.clients if j != i)


def wanted_set(instance: ProblemInstance, i: int) -> WantedSet:
    """Packets client ``i`` lacks.  ``.privileged`` is False for clients beyond ``k``."""
    instance.check_client(i)
    return WantedSet(
        (p for p in instance.pairs() if not p.contains(i)),
        privileged=instance.is_privileged(i),
    )


def pairs_to_mask(pairs: Iterable[PairId], n: int) -> int:
    mask = 0
    for p in pairs:
        mask |= 1 << p.rank(n)
    return mask


def mask_to_pairs(mask: int, n: int) -> list[PairId]:
    out = []
    while mask:
        low = mask & -mask
        out.append(PairId.from_rank(low.bit_length() - 1, n))
        mask ^= low
    return out
