from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from ptie.core import (
    CodedPacket,
    CodingVector,
    PairId,
    Payload,
    ProblemInstance,
    WidthMismatchError,
    local_set,
    mask_to_pairs,
    pairs_to_mask,
    wanted_set,
)


def P(i, j):
    return PairId.of(i, j)


def brute_pairs(n):
    return [P(a, b) for a, b in combinations(range(1, n + 1), 2)]


@pytest.mark.parametrize("n,k", [(1, 1), (0, 0), (3, 0), (3, 4)])
def test_instance_rejects_bad_sizes(n, k):
    with pytest.raises(ValueError):
        ProblemInstance(n, k)


def test_instance_accepts_k_equal_one():
    inst = ProblemInstance(5, 1)
    assert list(inst.privileged) == [1]


def test_local_set_table_row_c1():
    inst = ProblemInstance(6, 3)
    assert local_set(inst, 1) == {P(1, 2), P(1, 3), P(1, 4), P(1, 5), P(1, 6)}


def test_local_set_two_clients():
    assert local_set(ProblemInstance(2, 2), 1) == {P(1, 2)}


def test_local_set_middle_client():
    expected = {p for p in brute_pairs(4) if 3 in (p.lo, p.hi)}
    assert local_set(ProblemInstance(4, 4), 3) == expected == {P(1, 3), P(2, 3), P(3, 4)}


@pytest.mark.parametrize("i", [0, 5, -1])
def test_local_set_out_of_range(i):
    with pytest.raises(ValueError):
        local_set(ProblemInstance(4, 2), i)


def test_wanted_set_examples():
    inst = ProblemInstance(4, 4)
    assert wanted_set(inst, 1) == set(brute_pairs(4)) - local_set(inst, 1)
    assert wanted_set(inst, 1) == {P(2, 3), P(2, 4), P(3, 4)}
    assert wanted_set(ProblemInstance(2, 2), 1) == set()
    w = wanted_set(ProblemInstance(6, 3), 3)
    assert len(w) == 10
    assert all(3 not in (p.lo, p.hi) for p in w)


def test_wanted_set_flags_non_privileged_client():
    inst = ProblemInstance(6, 3)
    assert wanted_set(inst, 2).privileged
    w = wanted_set(inst, 5)
    assert not w.privileged
    assert len(w) == 10


@given(st.integers(2, 25).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_local_and_wanted_partition_the_universe(ni):
    n, i = ni
    inst = ProblemInstance(n, n)
    local, wanted = local_set(inst, i), wanted_set(inst, i)
    assert len(local) == n - 1
    assert len(wanted) == (n - 1) * (n - 2) // 2
    assert not local & wanted
    assert local | wanted == set(brute_pairs(n))


@pytest.mark.parametrize("n", [2, 3, 7, 20])
def test_rank_is_a_bijection(n):
    ranks = [p.rank(n) for p in brute_pairs(n)]
    assert ranks == list(range(n * (n - 1) // 2))
    assert [PairId.from_rank(r, n) for r in ranks] == brute_pairs(n)
    assert list(ProblemInstance(n, 1).pairs()) == brute_pairs(n)


def test_rank_bounds():
    with pytest.raises(ValueError):
        PairId.from_rank(6, 4)
    with pytest.raises(ValueError):
        P(2, 5).rank(4)


def test_pair_is_canonical():
    assert P(3, 1) == P(1, 3)
    assert str(P(5, 2)) == "x[2,5]"
    assert PairId.parse("x[4,2]") == P(2, 4)
    with pytest.raises(ValueError):
        P(2, 2)
    with pytest.raises(ValueError):
        PairId(3, 1)


def test_mask_roundtrip():
    pairs = [P(1, 2), P(2, 5), P(4, 5)]
    assert mask_to_pairs(pairs_to_mask(pairs, 5), 5) == pairs


@given(st.integers(1, 80).flatmap(
    lambda w: st.tuples(st.just(w), *[st.integers(0, (1 << w) - 1)] * 3)))
def test_payload_xor_laws(args):
    w, a, b, c = args
    A, B, C = Payload(a, w), Payload(b, w), Payload(c, w)
    assert A ^ B == B ^ A
    assert (A ^ B) ^ C == A ^ (B ^ C)
    assert A ^ A == Payload.zero(w)
    assert (A ^ B) ^ B == A


def test_payload_validation():
    with pytest.raises(ValueError):
        Payload(256, 8)
    with pytest.raises(ValueError):
        Payload(0, 0)
    with pytest.raises(WidthMismatchError):
        Payload(1, 8) ^ Payload(1, 16)
    assert Payload(0xBEEF, 16).hex() == "beef"


def test_coding_vector_rendering_keeps_operand_order():
    v = CodingVector.of(P(2, 3), P(1, 2))
    assert str(v) == "x[2,3]+x[1,2]"
    assert v == CodingVector.of(P(1, 2), P(2, 3))
    assert CodingVector.parse(str(v)).operands == v.operands
    assert str(CodingVector.of(P(4, 5))) == "x[4,5]"


def test_coding_vector_validation():
    with pytest.raises(ValueError):
        CodingVector(())
    with pytest.raises(ValueError):
        CodingVector.of(P(1, 2), P(2, 1))


def test_coded_packet_sender_must_hold_operands():
    CodedPacket(2, CodingVector.of(P(2, 3), P(1, 2)), Payload(0))
    with pytest.raises(ValueError):
        CodedPacket(1, CodingVector.of(P(2, 3)), Payload(0))
