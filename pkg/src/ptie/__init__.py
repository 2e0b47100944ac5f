"""Minimal-broadcast partial third-party information exchange with pairwise XOR coding."""

from .codec import DecoderState, Schedule, build_schedule, decoder_init, encode, ingest, is_complete
from .core import CodedPacket, CodingVector, PairId, Payload, ProblemInstance, local_set, wanted_set
from .oracle import brute_force_minimum, decodability_rank_check, exhaustive_feasibility
from .planner import (
    TransmissionPlan,
    baseline_no_coding_count,
    check_feasibility,
    optimal_count,
    plan_total,
    plan_transmissions,
)
from .simulator import ExchangeReport, generate_payloads, run_exchange

__version__ = "0.1.0"
