"""Simulated MPC cost model: round charging, gather feasibility, space accounting.

The simulator is an accounting layer, not a message-passing runtime: the
algorithms execute sequentially but must declare every MPC step and pass
feasibility checks against the configured machine memory and global space cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

PRIMITIVE_KINDS = frozenset(
    {"degree-computation", "neighborhood-arrangement", "subgraph-collection", "sort", "aggregate"}
)

CATEGORIES = ("sampling", "gathering", "derandomization", "mis", "primitives", "coloring")


class ModelViolationError(Exception):
    """An algorithm requested an MPC step the configured model cannot perform."""


@dataclass(frozen=True)
class MpcConfig:
    regime: str = "linear"  # "linear" | "sublinear"
    n: int = 0
    m: int = 0
    alpha: float = 0.5
    c_lin: int = 8
    c_sub: int = 4
    c_glob: int = 4
    c_derand: int = 1
    c_prim: int = 1

    def __post_init__(self):
        if self.regime not in ("linear", "sublinear"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.regime == "sublinear" and not 0 < self.alpha < 1:
            raise ValueError("sublinear regime requires 0 < alpha < 1")

    @property
    def local_memory(self) -> int:
        """Machine memory S in words."""
        if self.regime == "linear":
            return self.c_lin * max(self.n, 1)
        return max(self.c_sub * math.ceil(max(self.n, 1) ** self.alpha), 1)

    @property
    def global_cap(self) -> int:
        return max(self.c_glob * (self.n + self.m), self.local_memory)

    @property
    def machine_count(self) -> int:
        return -(-self.global_cap // self.local_memory)


@dataclass
class GatherVerdict:
    ok: bool
    words: int
    capacity: int

    @property
    def deficit(self) -> int:
        return max(0, self.words - self.capacity)


def check_gather(config: MpcConfig, words: int) -> GatherVerdict:
    """Can a subgraph of the given word count be gathered onto one machine?"""
    s = config.local_memory
    return GatherVerdict(ok=words <= s, words=words, capacity=s)


@dataclass
class RoundLedger:
    """Per-category round counts, a step log, and peak global space."""

    c_prim: int = 1
    c_derand: int = 1
    rounds: dict = field(default_factory=lambda: {c: 0 for c in CATEGORIES})
    entries: list = field(default_factory=list)
    peak_global_space: int = 0
    over_cap: bool = False
    finalized: bool = False

    def charge(self, category: str, rounds: int, note: str = "") -> None:
        if self.finalized:
            raise ModelViolationError("ledger is finalized; no further charges allowed")
        if category not in self.rounds:
            raise ValueError(f"unknown round category {category!r}")
        if rounds < 0:
            raise ValueError("cannot charge negative rounds")
        self.rounds[category] += rounds
        self.entries.append({"category": category, "rounds": rounds, "note": note})

    def charge_primitive(self, kind: str) -> None:
        if kind not in PRIMITIVE_KINDS:
            raise ValueError(f"unknown primitive kind {kind!r}")
        self.charge("primitives", self.c_prim, kind)

    def charge_derand(self, note: str = "") -> None:
        self.charge("derandomization", self.c_derand, note)

    def account_space(self, config: MpcConfig, usage: int) -> None:
        if self.finalized:
            raise ModelViolationError("ledger is finalized; no further charges allowed")
        self.peak_global_space = max(self.peak_global_space, usage)
        if usage > config.global_cap:
            self.over_cap = True
        self.entries.append({"category": "space", "rounds": 0, "note": f"usage={usage}"})

    def finalize(self) -> None:
        self.finalized = True

    @property
    def total_rounds(self) -> int:
        return sum(self.rounds.values())

    def to_dict(self) -> dict:
        return {
            "rounds": dict(self.rounds),
            "total_rounds": self.total_rounds,
            "peak_global_space": self.peak_global_space,
            "over_cap": self.over_cap,
        }
