"""Bloom clocks: counting-bloom-filter logical timestamps, with a vector-clock
oracle and a deterministic network simulator to measure them against."""

from bloomclock.clock import (
    BloomClock,
    CausalVerdict,
    FpAssessment,
    IncompatibleClockError,
    PreconditionError,
    bloom_filter_fpr,
    compact,
    compare,
    delta_sum,
    fp_rate,
    merge,
    overlap_probability,
    tick,
    zero,
)
from bloomclock.codec import DecodeError, decode_clock, decode_vector, encode_clock, encode_vector
from bloomclock.hashing import HashFamily, InvalidEventError, indices_for
from bloomclock.history import (
    ClockHistory,
    InvalidPairError,
    best_predecessor,
    detect_merge,
    provenance_check,
)
from bloomclock.montecarlo import OverlapEstimate, montecarlo_overlap
from bloomclock.simulator import (
    ConfidentVerdict,
    ConfigError,
    DelayModel,
    EventRecord,
    ScriptStep,
    SimConfig,
    SimMetrics,
    Simulation,
    compare_with_confidence,
    replay,
    run_simulation,
)
from bloomclock.vector import NodeSetError, VectorClock, vc_compare, vc_receive, vc_send

__version__ = "0.1.0"
