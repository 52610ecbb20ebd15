"""Deterministic 2-ruling-set toolkit over a simulated MPC cost model."""

from .graph import (
    Graph,
    GraphFormatError,
    NodeClassification,
    classify_nodes,
    count_bad_star_classes,
    dump_graph,
    from_edges,
    load_graph,
    verify_ruling_set,
)
from .hashing import HashFamilySpec, Seed, enumerate_family, evaluate, sample_indicator
from .linear import LinearParams, LinearRunResult, run_linear
from .mpc import MpcConfig, ModelViolationError, RoundLedger, check_gather
from .sublinear import SparsifyParams, SublinearRunResult, run_sublinear

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphFormatError",
    "NodeClassification",
    "classify_nodes",
    "count_bad_star_classes",
    "dump_graph",
    "from_edges",
    "load_graph",
    "verify_ruling_set",
    "HashFamilySpec",
    "Seed",
    "enumerate_family",
    "evaluate",
    "sample_indicator",
    "LinearParams",
    "LinearRunResult",
    "run_linear",
    "MpcConfig",
    "ModelViolationError",
    "RoundLedger",
    "check_gather",
    "SparsifyParams",
    "SublinearRunResult",
    "run_sublinear",
    "__version__",
]
