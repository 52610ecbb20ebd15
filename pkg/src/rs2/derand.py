"""Deterministic seed selection (method of conditional expectation, desk scale).

Given an objective that decomposes into per-node contributions, pick a seed
whose aggregate value is at most the family average.  Two mean-guaranteed
backends are provided: exhaustive enumeration over the whole family, and
greedy per-coefficient fixing with exact conditional averaging.  A third,
budget-bounded scan backend covers specs whose family is too large to
enumerate; it preserves determinism but reports no mean guarantee.

Objective values must be exact numbers (ints or Fractions) so the argmin is
platform independent.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .hashing import BudgetExceededError, HashFamilySpec, Seed, enumerate_family

DEFAULT_SCAN_BUDGET = 64


@dataclass
class Objective:
    """Sum of pure per-node contributions, each computable from the seed alone.

    `aggregate_fn`, when given, must equal sum(contribution(v, seed) for v in
    nodes) and exists purely as a vectorized fast path.
    """

    nodes: Sequence[int]
    contribution: Callable[[int, Seed], object]
    aggregate_fn: Optional[Callable[[Seed], object]] = None

    def aggregate(self, seed: Seed):
        if self.aggregate_fn is not None:
            return self.aggregate_fn(seed)
        return sum(self.contribution(v, seed) for v in self.nodes)


@dataclass
class SeedSearchReport:
    seed: Seed
    value: object
    mean: Optional[Fraction]
    backend: str
    seeds_examined: int
    charged_rounds: int = 1
    stages: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seed": [int(a) for a in self.seed],
            "value": _num(self.value),
            "mean": _num(self.mean),
            "backend": self.backend,
            "seeds_examined": self.seeds_examined,
        }


def _num(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    return int(x)


def find_seed_exhaustive(
    spec: HashFamilySpec, objective: Objective, budget: int
) -> SeedSearchReport:
    """Lexicographically-first argmin over the full family, with the exact mean."""
    best_seed = None
    best_value = None
    total = Fraction(0)
    count = 0
    for seed in enumerate_family(spec, budget):
        value = objective.aggregate(seed)
        total += Fraction(value)
        count += 1
        if best_value is None or value < best_value:
            best_seed, best_value = seed, value
    mean = total / count
    assert Fraction(best_value) <= mean
    return SeedSearchReport(best_seed, best_value, mean, "exhaustive", count)


def find_seed_greedy(
    spec: HashFamilySpec, objective: Objective, stage_budget: int
) -> SeedSearchReport:
    """Fix coefficients a_{k-1} down to a_0; each stage picks the smallest
    coefficient value minimizing the exact conditional mean over the still-free
    coefficients.  The conditional-expectation argument gives
    final value <= family mean; the first stage's candidate means average to
    the exact family mean, which is reported.
    """
    p, k = spec.p, spec.k
    fixed: list[int] = []  # a_{k-1}, a_{k-2}, ... in fixing order
    stages = []
    examined = 0
    family_mean: Optional[Fraction] = None
    for pos in range(k - 1, -1, -1):
        free = pos  # coefficients a_0 .. a_{pos-1} still free
        cost = p ** (free + 1)
        if cost > stage_budget:
            raise BudgetExceededError(
                f"greedy stage at position {pos} needs {cost} evaluations "
                f"(budget {stage_budget})"
            )
        high = tuple(reversed(fixed))  # a_{pos+1} .. a_{k-1}
        best_c = None
        best_mean = None
        stage_total = Fraction(0)
        for c in range(p):
            total = Fraction(0)
            for prefix in itertools.product(range(p), repeat=free):
                total += Fraction(objective.aggregate(prefix + (c,) + high))
                examined += 1
            cmean = total / p ** free
            stage_total += cmean
            if best_mean is None or cmean < best_mean:
                best_c, best_mean = c, cmean
        if family_mean is None:
            family_mean = stage_total / p
        fixed.append(best_c)
        stages.append({"position": pos, "coefficient": best_c, "cond_mean": best_mean})
    seed = tuple(reversed(fixed))
    value = objective.aggregate(seed)
    assert Fraction(value) <= family_mean
    return SeedSearchReport(seed, value, family_mean, "greedy", examined, stages=stages)


def verify_mean_bound(
    spec: HashFamilySpec, objective: Objective, claimed_bound, budget: int
) -> tuple[bool, Fraction]:
    """Exact family mean by enumeration, checked against a claimed upper bound."""
    total = Fraction(0)
    count = 0
    for seed in enumerate_family(spec, budget):
        total += Fraction(objective.aggregate(seed))
        count += 1
    mean = total / count
    return mean <= Fraction(claimed_bound), mean


def scan_seeds(spec: HashFamilySpec, budget: int) -> list[Seed]:
    """Deterministic pseudorandom seed candidates for non-enumerable families."""
    out = []
    for t in range(budget):
        rng = random.Random(0xC0FFEE ^ (t * 0x9E3779B1))
        out.append(tuple(rng.randrange(spec.p) for _ in range(spec.k)))
    return out


def find_seed_scan(
    spec: HashFamilySpec,
    objective: Objective,
    budget: int = DEFAULT_SCAN_BUDGET,
    target=None,
) -> SeedSearchReport:
    """Argmin over a deterministic bounded sample of seeds.

    If `target` is given, stop at the first seed whose value is <= target and
    raise BudgetExceededError when none qualifies within the budget.  Used for
    full-scale specs whose family cannot be enumerated; no mean is reported.
    """
    best_seed = None
    best_value = None
    examined = 0
    for seed in scan_seeds(spec, budget):
        value = objective.aggregate(seed)
        examined += 1
        if best_value is None or value < best_value or (value == best_value and seed < best_seed):
            best_seed, best_value = seed, value
        if target is not None and value <= target:
            return SeedSearchReport(seed, value, None, "scan", examined)
    if target is not None:
        raise BudgetExceededError(
            f"no seed with objective <= {target} among {budget} scanned "
            f"(best {best_value})"
        )
    return SeedSearchReport(best_seed, best_value, None, "scan", examined)


def find_seed(
    spec: HashFamilySpec,
    objective: Objective,
    enum_budget: int,
    scan_budget: int = DEFAULT_SCAN_BUDGET,
    target=None,
) -> SeedSearchReport:
    """Backend dispatch: exhaustive when the family fits the enumeration
    budget, otherwise the bounded deterministic scan."""
    if spec.family_size <= enum_budget:
        report = find_seed_exhaustive(spec, objective, enum_budget)
        if target is not None and Fraction(report.value) > Fraction(target):
            raise BudgetExceededError(
                f"no seed meets target {target}: family minimum is {report.value}"
            )
        return report
    return find_seed_scan(spec, objective, scan_budget, target=target)
