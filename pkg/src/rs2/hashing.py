"""Polynomial hash family over a prime field with threshold-sampling predicates.

A hash function with independence order k is a degree-(k-1) polynomial over
GF(p); the seed is its coefficient vector (a_0, ..., a_{k-1}).  Any k distinct
domain points are jointly uniform over the family (Vandermonde argument).
Sampling predicates compare the hash value against an integer threshold T, so
an event of target probability q is realized with probability T/p where
T = floor(p*q).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._intmath import floor_div_sqrt, is_prime

DEFAULT_ENUM_BUDGET = 1 << 24

Seed = tuple  # coefficient vector (a_0, ..., a_{k-1}), each in [0, p)


class BudgetExceededError(Exception):
    """Raised when a full family enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class HashFamilySpec:
    """Family of k-wise independent hash functions [N] -> [p]."""

    k: int
    p: int
    domain_size: int
    range_size: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("independence order k must be >= 1")
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.p < self.domain_size:
            raise ValueError("field size p must be >= domain size")
        if self.range_size is not None and self.range_size > self.p:
            raise ValueError("range size must be <= p")

    @property
    def family_size(self) -> int:
        return self.p ** self.k

    @property
    def seed_bits(self) -> int:
        # Seed length in bits: k coefficients of ceil(log2 p) bits each.
        return self.k * (self.p - 1).bit_length()


def evaluate(spec: HashFamilySpec, seed: Sequence[int], x: int) -> int:
    """Evaluate the polynomial (sum a_i x^i) mod p at a single domain point."""
    if not 0 <= x < spec.domain_size:
        raise ValueError(f"x={x} outside domain [0, {spec.domain_size})")
    if len(seed) != spec.k:
        raise ValueError("seed length must equal k")
    acc = 0
    for a in reversed(seed):
        acc = (acc * x + a) % spec.p
    return acc


def evaluate_many(spec: HashFamilySpec, seed: Sequence[int], xs: np.ndarray) -> np.ndarray:
    """Vectorized Horner evaluation over an int64 array of domain points.

    Valid for p < 2**42: products are split into 21-bit halves so every
    intermediate fits in int64.
    """
    p = spec.p
    xs = np.asarray(xs, dtype=np.int64)
    if p < (1 << 31):
        acc = np.zeros_like(xs)
        for a in reversed(seed):
            acc = (acc * xs + a) % p
        return acc
    if p >= (1 << 42):
        return np.array([evaluate(spec, seed, int(x)) for x in xs], dtype=object)
    acc = np.zeros_like(xs)
    for a in reversed(seed):
        hi = acc >> 21
        lo = acc & ((1 << 21) - 1)
        shifted = (xs << 21) % p
        acc = (hi * shifted + lo * xs + a) % p
    return acc


def sample_indicator(spec: HashFamilySpec, seed: Sequence[int], x: int, threshold: int) -> bool:
    """True iff h(x) < threshold; marginal probability threshold/p over a uniform seed."""
    if not 0 <= threshold <= spec.p:
        raise ValueError("threshold must lie in [0, p]")
    return evaluate(spec, seed, x) < threshold


def threshold_for_probability(spec: HashFamilySpec, num: int, den: int) -> int:
    """Integer threshold T = floor(p * num / den) for a target probability num/den."""
    if den <= 0 or num < 0 or num > den:
        raise ValueError("probability must lie in [0, 1]")
    return spec.p * num // den


def threshold_for_inv_sqrt(spec: HashFamilySpec, d: int) -> int:
    """T = floor(p / sqrt(d)), the threshold realizing probability 1/sqrt(d)."""
    return floor_div_sqrt(spec.p, d)


def enumerate_family(spec: HashFamilySpec, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[Seed]:
    """All p**k seeds in lexicographic coefficient order ((a_0, ..., a_{k-1}))."""
    if spec.family_size > budget:
        raise BudgetExceededError(
            f"family size {spec.family_size} exceeds enumeration budget {budget}"
        )
    return itertools.product(range(spec.p), repeat=spec.k)
