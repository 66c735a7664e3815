"""Fair secret-key-rate comparison of relayed and switched QKD rings."""

from qkdring.capacity import (
    ComparisonResult,
    SwitchSchedule,
    brute_force_pairs_per_link,
    compare,
    normalized_difference,
    pairs_per_link,
    relayed_rate,
    switched_rate,
    switched_schedule,
)
from qkdring.skr_model import (
    BUILTIN_PROFILES,
    DecoyParams,
    SkrProfile,
    binary_entropy,
    cutoff_attenuation,
    skr_bps,
)
from qkdring.sweep import SweepGrid, SweepSpec, crossover_curve, run_sweep
from qkdring.topology import LinkBudget, RingSpec, chord_length

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_PROFILES",
    "ComparisonResult",
    "DecoyParams",
    "LinkBudget",
    "RingSpec",
    "SkrProfile",
    "SweepGrid",
    "SweepSpec",
    "SwitchSchedule",
    "binary_entropy",
    "brute_force_pairs_per_link",
    "chord_length",
    "compare",
    "crossover_curve",
    "cutoff_attenuation",
    "normalized_difference",
    "pairs_per_link",
    "relayed_rate",
    "run_sweep",
    "skr_bps",
    "switched_rate",
    "switched_schedule",
]
