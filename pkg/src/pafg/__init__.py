"""Dataflow modeling toolkit: application graphs, passive-active flowgraph
IR, the passivization transformation, and an instrumented execution engine."""

from .actors import default_library
from .dataflow import (
    ActorLibrary,
    ActorSpec,
    AppGraphBuilder,
    ApplicationGraph,
    CfdfActor,
    DataflowEdge,
    F64,
    I64,
)
from .graph import DirectedGraph
from .ir import (
    ACTV,
    ActorRef,
    Block,
    CoordinatedPafg,
    EdgeRef,
    PSSV,
    Pafg,
    check_abc,
    check_association,
    is_alternating,
    is_interface_block,
    validate_coordinated,
)
from .kernels import (
    GainFork,
    MultiReadRingBuffer,
    PassiveFork,
    PassiveInterleave,
    SimpleFifo,
    capacity_rule,
    check_mapping_equivalence,
)
from .runtime import ExecStats, compare_streams, instantiate
from .transform import (
    BmrReport,
    compute_bmr,
    derive_direct_pafg,
    estimate_copy_count,
    find_candidates,
    passivize,
    passivize_fixpoint,
)

__all__ = [
    "ACTV",
    "ActorLibrary",
    "ActorRef",
    "ActorSpec",
    "AppGraphBuilder",
    "ApplicationGraph",
    "Block",
    "BmrReport",
    "CfdfActor",
    "CoordinatedPafg",
    "DataflowEdge",
    "DirectedGraph",
    "EdgeRef",
    "ExecStats",
    "F64",
    "GainFork",
    "I64",
    "MultiReadRingBuffer",
    "PSSV",
    "Pafg",
    "PassiveFork",
    "PassiveInterleave",
    "SimpleFifo",
    "capacity_rule",
    "check_abc",
    "check_association",
    "check_mapping_equivalence",
    "compare_streams",
    "compute_bmr",
    "default_library",
    "derive_direct_pafg",
    "estimate_copy_count",
    "find_candidates",
    "instantiate",
    "is_alternating",
    "is_interface_block",
    "passivize",
    "passivize_fixpoint",
    "validate_coordinated",
]
