"""Fully dynamic graph connectivity via layered spanning forests over
XOR cut sketches, plus a differential-testing and benchmarking harness.
"""

from xorforest.edge_space import EdgeCodec
from xorforest.dynamic_forest import EulerTourForest
from xorforest.cutset import Cutset
from xorforest.layered_connectivity import (
    InvariantReport,
    LayerStack,
    StateCorruptionError,
)
from xorforest.oracle_harness import (
    BoostedCutset,
    Config,
    Oracle,
    RunStats,
    SoundnessError,
    Workload,
    WorkloadError,
    boosted_baseline,
    differential_run,
    generate_workload,
    load_workload,
    measure_success_rate,
    replay,
    save_workload,
)

__all__ = [
    "BoostedCutset",
    "Config",
    "Cutset",
    "EdgeCodec",
    "EulerTourForest",
    "InvariantReport",
    "LayerStack",
    "Oracle",
    "RunStats",
    "SoundnessError",
    "StateCorruptionError",
    "Workload",
    "WorkloadError",
    "boosted_baseline",
    "differential_run",
    "generate_workload",
    "load_workload",
    "measure_success_rate",
    "replay",
    "save_workload",
]

__version__ = "0.1.0"
