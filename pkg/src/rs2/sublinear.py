"""2-ruling set in the sublinear-memory regime.

The pipeline processes degree classes (Delta/f^(i+1), Delta/f^i] with
f = 2^ceil(sqrt(log2 Delta)).  Each class is sparsified: high-degree
neighborhoods are first thinned at rate n^(-eps) until they fit one machine,
then repeatedly square-root-sampled via a hash over a distance-2 coloring.
Sampled nodes join M; the class and its neighbors leave the active set.  A
bounded-degree MIS over G[M + V] is the ruling set.

At desk scale the sparsification step count k from the closed-form formula is
zero for every constructible Delta, so class sparsification degenerates to
absorbing the class directly; the reduction machinery is still exposed and
tested through the operations below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np

from ._intmath import ceil_pow, floor_pow, introot, next_prime
from .derand import Objective, SeedSearchReport, find_seed
from .graph import Graph, verify_ruling_set
from .hashing import (
    DEFAULT_ENUM_BUDGET,
    BudgetExceededError,
    HashFamilySpec,
    Seed,
    evaluate_many,
)
from .mpc import ModelViolationError, MpcConfig, RoundLedger, check_gather


class ColoringInfeasibleError(Exception):
    """2-hop gathering does not fit machine memory and no shortcut applies."""


class NoCompliantSeedError(Exception):
    """No seed met a zero-violation (or tolerance) objective within budget."""


# ---------------------------------------------------------------------------
# Distance-2 coloring


@dataclass
class SquareColoring:
    colors: np.ndarray  # int64 per node
    palette: int
    method: str  # "id" | "linial" | "greedy"


def square_degree(g: Graph) -> int:
    """Max number of distinct nodes within distance 2 of any node."""
    best = 0
    for v in range(g.n):
        seen = set()
        for u in g.neighbors(v):
            seen.add(int(u))
            seen.update(int(w) for w in g.neighbors(u))
        seen.discard(v)
        best = max(best, len(seen))
    return best


def verify_square_coloring(g: Graph, coloring: SquareColoring) -> list:
    """Exhaustive conflict scan: distance-2 pairs must have distinct colors."""
    conflicts = []
    col = coloring.colors
    for v in range(g.n):
        two_hop = set()
        for u in g.neighbors(v):
            two_hop.add(int(u))
            two_hop.update(int(w) for w in g.neighbors(u))
        two_hop.discard(v)
        for u in two_hop:
            if col[u] == col[v] and v < u:
                conflicts.append((v, u))
    return conflicts


def _linial_round(g: Graph, colors: np.ndarray, num_colors: int, delta2: int) -> tuple[np.ndarray, int]:
    """One color reduction round: encode colors as polynomials over F_q and
    pick for each node an evaluation point avoiding all 2-hop neighbors."""
    best = None
    for t in range(1, max(2, num_colors.bit_length())):
        q = next_prime(max(t * delta2 + 1, ceil_pow(num_colors, 1, t + 1)))
        if best is None or q < best[1]:
            best = (t, q)
    t, q = best
    # Digits of the current color, lowest first: the polynomial coefficients.
    digits = np.zeros((g.n, t + 1), dtype=np.int64)
    c = colors.copy()
    for j in range(t + 1):
        digits[:, j] = c % q
        c //= q
    new = np.zeros(g.n, dtype=np.int64)
    powers = np.arange(q, dtype=np.int64)[None, :] ** 0  # built per node below
    eval_cache = {}

    def poly_eval_all(v: int) -> np.ndarray:
        if v not in eval_cache:
            acc = np.zeros(q, dtype=np.int64)
            xs = np.arange(q, dtype=np.int64)
            for a in digits[v, ::-1]:
                acc = (acc * xs + a) % q
            eval_cache[v] = acc
        return eval_cache[v]

    for v in range(g.n):
        two_hop = set()
        for u in g.neighbors(v):
            two_hop.add(int(u))
            two_hop.update(int(w) for w in g.neighbors(u))
        two_hop.discard(v)
        mine = poly_eval_all(v)
        banned = np.zeros(q, dtype=bool)
        for u in two_hop:
            if colors[u] != colors[v]:
                banned |= poly_eval_all(u) == mine
        free = np.flatnonzero(~banned)
        if free.size == 0:
            raise ColoringInfeasibleError("no free evaluation point; palette too tight")
        a = int(free[0])
        new[v] = a * q + int(mine[a])
    return new, q * q


def color_square(
    g: Graph,
    config: MpcConfig,
    c_id: int = 6,
    ledger: Optional[RoundLedger] = None,
) -> SquareColoring:
    """Distance-2 coloring with palette at most max(n-shortcut, poly(Delta)).

    When Delta^c_id >= n the node ids themselves are the coloring.  Otherwise
    colors are reduced by iterated polynomial rounds over gathered 2-hop
    neighborhoods, which requires the square degree to fit machine memory.
    """
    delta = g.max_degree()
    if delta == 0:
        return SquareColoring(np.zeros(g.n, dtype=np.int64), max(g.n, 1), "id")
    if delta ** c_id >= g.n:
        if ledger is not None:
            ledger.charge("coloring", 1, f"id shortcut palette={g.n}")
        return SquareColoring(np.arange(g.n, dtype=np.int64), g.n, "id")
    d2 = square_degree(g)
    if d2 + 1 > config.local_memory:
        raise ColoringInfeasibleError(
            f"2-hop neighborhoods need {d2 + 1} words, memory {config.local_memory}"
        )
    colors = np.arange(g.n, dtype=np.int64)
    num = g.n
    rounds = 0
    while True:
        new, new_num = _linial_round(g, colors, num, d2)
        rounds += 1
        if new_num >= num or rounds > 64:
            break
        colors, num = new, new_num
    if ledger is not None:
        ledger.charge("coloring", rounds, f"linial palette={num}")
    return SquareColoring(colors, num, "linial")


# ---------------------------------------------------------------------------
# Bipartition and degree reduction


@dataclass
class Bipartition:
    """High-degree targets U inside a pool; windows are relative to `delta`."""

    g: Graph
    u_nodes: np.ndarray  # int64 ids
    delta: int  # degree upper bound over U
    log_n: int = 0  # ceil(log2 n) of the ambient graph; set in __post_init__

    def __post_init__(self):
        if self.log_n == 0:
            self.log_n = max(1, (max(self.g.n, 2) - 1).bit_length())
        self.u_nodes = np.asarray(self.u_nodes, dtype=np.int64)
        if self.u_nodes.size and int(self.g.degrees[self.u_nodes].max()) > self.delta:
            raise ValueError("delta must bound every U-node degree")

    def tau_heavy(self) -> np.ndarray:
        """Mask over u_nodes: deg >= log2(n) * delta^0.6, exact integer test."""
        deg = self.g.degrees[self.u_nodes].astype(object)
        lhs = np.array([int(d) ** 5 for d in deg], dtype=object)
        rhs = self.log_n ** 5 * self.delta ** 3
        return np.array([x >= rhs for x in lhs], dtype=bool)


def rate_denominator(delta: int) -> int:
    """ceil(3*sqrt(delta)/2): the sampling rate is one over this."""
    r = isqrt(9 * delta) // 2
    while 4 * r * r < 9 * delta:
        r += 1
    return r


def in_step_window(cnt: int, deg: int, delta: int) -> bool:
    """cnt in [deg/(3 sqrt(delta)), deg/sqrt(delta)], exact."""
    return 9 * cnt * cnt * delta >= deg * deg and cnt * cnt * delta <= deg * deg


@dataclass
class ReduceStepResult:
    v_sub: np.ndarray  # bool mask over g.n
    report: SeedSearchReport
    rate_den: int
    heavy_count: int
    violations: int


def _count_objective(bip: Bipartition, sampled_of, checker) -> Objective:
    """Violation count over tau-heavy U-nodes for a given sampling rule."""
    g = bip.g
    heavy_ids = bip.u_nodes[bip.tau_heavy()]
    adj = g.adjacency_csr()

    def aggregate(seed: Seed) -> int:
        samp = sampled_of(seed)
        cnt = adj @ samp.astype(np.int64)
        return int(sum(0 if checker(int(cnt[u]), g.degree(u)) else 1 for u in heavy_ids))

    def contribution(u: int, seed: Seed) -> int:
        samp = sampled_of(seed)
        cnt = int(np.count_nonzero(samp[g.neighbors(u)]))
        return 0 if checker(cnt, g.degree(u)) else 1

    return Objective(nodes=[int(u) for u in heavy_ids], contribution=contribution, aggregate_fn=aggregate)


def degree_reduce_step(
    bip: Bipartition,
    coloring: SquareColoring,
    spec: HashFamilySpec,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
    scan_budget: int = 256,
    ledger: Optional[RoundLedger] = None,
) -> ReduceStepResult:
    """Sample pool nodes per hashed color at rate 1/ceil(3 sqrt(delta)/2) so
    every tau-heavy U-node keeps between deg/(3 sqrt(delta)) and
    deg/sqrt(delta) sampled neighbors (zero violations, or an error)."""
    g = bip.g
    r = rate_denominator(bip.delta)
    if spec.domain_size < coloring.palette:
        raise ValueError("spec domain must cover the palette")
    threshold = spec.p // r
    colors = coloring.colors.astype(np.int64)

    def sampled_of(seed: Seed) -> np.ndarray:
        h = evaluate_many(spec, seed, colors)
        if h.dtype == object:
            return np.array([int(x) < threshold for x in h])
        return h < threshold

    obj = _count_objective(bip, sampled_of, lambda c, d: in_step_window(c, d, bip.delta))
    try:
        report = find_seed(spec, obj, enum_budget, scan_budget, target=0)
    except BudgetExceededError as e:
        raise NoCompliantSeedError(str(e)) from e
    v_sub = sampled_of(report.seed)
    if ledger is not None:
        ledger.charge_derand(f"reduce-step rate=1/{r}")
        ledger.charge("sampling", 1, "color-hash sampling")
    heavy = int(np.count_nonzero(bip.tau_heavy()))
    return ReduceStepResult(v_sub, report, r, heavy, int(report.value))


def highdeg_group_size(n: int, eps_hd: Fraction) -> int:
    return max(1, floor_pow(n, 4 * eps_hd.numerator, eps_hd.denominator))


def highdeg_group_window(n: int, eps_hd: Fraction) -> tuple[int, int]:
    """Integer window ceil(n^3e) - floor(n^2e) .. floor(n^3e) + floor(n^2e),
    contained in the real window n^3e +- n^2e."""
    num, den = eps_hd.numerator, eps_hd.denominator
    c3f, c3c = floor_pow(n, 3 * num, den), ceil_pow(n, 3 * num, den)
    c2 = floor_pow(n, 2 * num, den)
    return c3c - c2, c3f + c2


def degree_reduce_highdeg(
    bip: Bipartition,
    spec: HashFamilySpec,
    eps_hd: Fraction = Fraction(1, 20),
    enum_budget: int = DEFAULT_ENUM_BUDGET,
    scan_budget: int = 256,
    ledger: Optional[RoundLedger] = None,
) -> ReduceStepResult:
    """Thin pool nodes at rate n^(-eps) so each full group of n^(4 eps)
    consecutive edges of each constrained U-node keeps n^(3 eps) +- n^(2 eps)
    sampled endpoints; per-node totals then sit in [deg/(2n^e), 3deg/(2n^e)].

    Nodes with deg < n^(6 eps) are outside the contract and unconstrained.
    """
    g = bip.g
    n = g.n
    num, den = eps_hd.numerator, eps_hd.denominator
    gsz = highdeg_group_size(n, eps_hd)
    lo, hi = highdeg_group_window(n, eps_hd)
    threshold = introot(spec.p ** den // n ** num, den)  # floor(p / n^eps)
    deg_floor = floor_pow(n, 6 * num, den)
    heavy = bip.u_nodes[bip.tau_heavy()]
    heavy = heavy[g.degrees[heavy] >= max(deg_floor, gsz)]
    # Precompute full-group slices (start offsets into the CSR index array).
    group_slices = []
    for u in heavy:
        s, e = int(g.indptr[u]), int(g.indptr[u + 1])
        for a in range(s, e - gsz + 1, gsz):
            group_slices.append((a, a + gsz))

    def sampled_of(seed: Seed) -> np.ndarray:
        h = evaluate_many(spec, seed, np.arange(n, dtype=np.int64))
        if h.dtype == object:
            return np.array([int(x) < threshold for x in h])
        return h < threshold

    def aggregate(seed: Seed) -> int:
        samp = sampled_of(seed)
        flat = samp[g.indices].astype(np.int64)
        bad = 0
        for a, b in group_slices:
            c = int(flat[a:b].sum())
            if not lo <= c <= hi:
                bad += 1
        return bad

    def contribution(u: int, seed: Seed) -> int:
        samp = sampled_of(seed)
        s, e = int(g.indptr[u]), int(g.indptr[u + 1])
        bad = 0
        for a in range(s, e - gsz + 1, gsz):
            c = int(np.count_nonzero(samp[g.indices[a : a + gsz]]))
            if not lo <= c <= hi:
                bad += 1
        return bad

    obj = Objective(nodes=[int(u) for u in heavy], contribution=contribution, aggregate_fn=aggregate)
    try:
        report = find_seed(spec, obj, enum_budget, scan_budget, target=0)
    except BudgetExceededError as e:
        raise NoCompliantSeedError(str(e)) from e
    v_sub = sampled_of(report.seed)
    if ledger is not None:
        ledger.charge_derand(f"highdeg rate=n^-{eps_hd}")
        ledger.charge("sampling", 1, "id-threshold sampling")
    return ReduceStepResult(v_sub, report, 0, int(heavy.size), int(report.value))


# ---------------------------------------------------------------------------
# Sparsification


@dataclass
class SparsifyParams:
    f: int
    alpha: float = 0.5
    eps_hd: Fraction = Fraction(1, 20)
    c_cap: int = 1
    k_steps: int = 0
    c_id: int = 6
    enum_budget: int = DEFAULT_ENUM_BUDGET
    scan_budget: int = 256


def f_of_delta(delta: int) -> int:
    """f = 2^ceil(sqrt(log2 delta))."""
    if delta <= 1:
        return 2
    big_l = (delta - 1).bit_length()  # ceil(log2 delta)
    s = isqrt(big_l)
    if s * s < big_l:
        s += 1
    return 1 << max(s, 1)


def sparsify_schedule(delta_prime: int, f: int) -> tuple[int, int]:
    """(k, c_cap): reduce-step count and the smallest cap exponent with
    f^c_cap covering both the closed-form bound 3^k f (f log2 delta')^2 and
    the induction endpoint delta'^(1/2^k)."""
    if delta_prime <= 1:
        return 0, 1
    l2 = math.log2(delta_prime)  # k is a small count; float log is fine here
    k = max(0, math.floor(math.log2(l2) - math.log2(2 * math.log2(f * l2))))
    lg = max(1, (delta_prime - 1).bit_length())
    bound = 3 ** k * f * (f * lg) ** 2
    c_cap = 1
    while f ** c_cap < bound or delta_prime > f ** (c_cap * (1 << k)):
        c_cap += 1
    return k, c_cap


@dataclass
class SparsifyResult:
    v_sub: np.ndarray
    k_steps: int
    c_cap: int
    highdeg_rounds: int
    steps: list
    min_degree: int
    max_degree: int
    measured_c: Optional[float]


def sparsify(
    bip: Bipartition,
    params: SparsifyParams,
    config: MpcConfig,
    ledger: Optional[RoundLedger] = None,
) -> SparsifyResult:
    """Reduce every U-node's pool neighborhood to [1, f^c_cap] sampled nodes."""
    g = bip.g
    f = params.f
    if bip.u_nodes.size and int(g.degrees[bip.u_nodes].min()) * f < bip.delta:
        raise ValueError("sparsify requires every U-node degree >= delta/f")
    k, c_cap = sparsify_schedule(bip.delta, f)
    params.c_cap, params.k_steps = c_cap, k
    pool = np.ones(g.n, dtype=bool)
    adj = g.adjacency_csr()
    steps: list = []
    highdeg_rounds = 0
    cur_delta = bip.delta
    # High-degree path: thin until neighborhoods fit one machine.
    while cur_delta > config.local_memory:
        sub, orig = g.induced_subgraph(pool | np.isin(np.arange(g.n), bip.u_nodes))
        back = {int(o): i for i, o in enumerate(orig)}
        u_local = np.array([back[int(u)] for u in bip.u_nodes], dtype=np.int64)
        b2 = Bipartition(sub, u_local, cur_delta, log_n=bip.log_n)
        spec = HashFamilySpec(k=2, p=next_prime(max(sub.n, 3) ** 3), domain_size=sub.n)
        res = degree_reduce_highdeg(
            b2, spec, params.eps_hd, params.enum_budget, params.scan_budget, ledger
        )
        keep = np.zeros(g.n, dtype=bool)
        keep[orig[np.flatnonzero(res.v_sub)]] = True
        keep[bip.u_nodes] = True
        pool &= keep
        highdeg_rounds += 1
        counts = adj @ pool.astype(np.int64)
        cur_delta = int(counts[bip.u_nodes].max()) if bip.u_nodes.size else 0
        steps.append({"kind": "highdeg", "violations": res.violations, "max_deg": cur_delta})
        if highdeg_rounds > 20:
            raise ModelViolationError("high-degree reduction failed to converge")
    # Square-root sampling steps over a distance-2 coloring.
    delta_j = cur_delta
    for j in range(k):
        keep_mask = pool.copy()
        keep_mask[bip.u_nodes] = True
        sub, orig = g.induced_subgraph(keep_mask)
        back = {int(o): i for i, o in enumerate(orig)}
        u_local = np.array([back[int(u)] for u in bip.u_nodes], dtype=np.int64)
        b2 = Bipartition(sub, u_local, max(delta_j, 1), log_n=bip.log_n)
        coloring = color_square(sub, config, params.c_id, ledger)
        spec = HashFamilySpec(
            k=2, p=next_prime(max(coloring.palette, rate_denominator(b2.delta), 3)),
            domain_size=coloring.palette,
        )
        res = degree_reduce_step(b2, coloring, spec, params.enum_budget, params.scan_budget, ledger)
        new_pool = np.zeros(g.n, dtype=bool)
        samp = res.v_sub.copy()
        samp[u_local] = False
        new_pool[orig[np.flatnonzero(samp)]] = True
        pool = pool & new_pool
        counts = adj @ pool.astype(np.int64)
        dmax = int(counts[bip.u_nodes].max()) if bip.u_nodes.size else 0
        dmin = int(counts[bip.u_nodes].min()) if bip.u_nodes.size else 0
        # Induction interval: degrees stay at most the running sqrt bound.
        delta_j = max(1, isqrt(delta_j) + (0 if isqrt(delta_j) ** 2 == delta_j else 1))
        assert dmax <= 3 * delta_j, "induction upper endpoint violated"
        assert dmin >= 1, "a U-node lost all sampled neighbors"
        steps.append({"kind": "reduce", "violations": res.violations, "max_deg": dmax, "min_deg": dmin})
    counts = adj @ pool.astype(np.int64)
    u_counts = counts[bip.u_nodes] if bip.u_nodes.size else np.zeros(0, dtype=np.int64)
    dmax = int(u_counts.max()) if u_counts.size else 0
    dmin = int(u_counts.min()) if u_counts.size else 0
    assert dmax <= f ** c_cap, "sparsify cap exceeded"
    assert bip.u_nodes.size == 0 or dmin >= 1, "coverage lost"
    measured_c = None
    if bip.u_nodes.size and bip.delta > 1:
        measured_c = dmin * f * 3 ** k / bip.delta ** (1.0 / (1 << k))
    return SparsifyResult(pool, k, c_cap, highdeg_rounds, steps, dmin, dmax, measured_c)


# ---------------------------------------------------------------------------
# Weak reduction


def weak_reduce(
    g: Graph,
    spec: HashFamilySpec,
    coloring: Optional[SquareColoring] = None,
    delta: Optional[int] = None,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
    scan_budget: int = 256,
    ledger: Optional[RoundLedger] = None,
) -> tuple[np.ndarray, np.ndarray, SeedSearchReport]:
    """Reduce-step window with a tolerance: up to n/delta^0.01 tau-heavy
    nodes may violate it; they are returned as the exception set."""
    delta = delta if delta is not None else g.max_degree()
    if delta == 0:
        return np.ones(g.n, dtype=bool), np.zeros(0, dtype=np.int64), SeedSearchReport(
            (0,) * spec.k, 0, None, "trivial", 0
        )
    if coloring is None:
        coloring = SquareColoring(np.arange(g.n, dtype=np.int64), g.n, "id")
    bip = Bipartition(g, np.arange(g.n, dtype=np.int64), delta)
    r = rate_denominator(delta)
    threshold = spec.p // r
    colors = coloring.colors.astype(np.int64)

    def sampled_of(seed: Seed) -> np.ndarray:
        h = evaluate_many(spec, seed, colors)
        if h.dtype == object:
            return np.array([int(x) < threshold for x in h])
        return h < threshold

    obj = _count_objective(bip, sampled_of, lambda c, d: in_step_window(c, d, delta))
    report = find_seed(spec, obj, enum_budget, scan_budget)
    v_sub = sampled_of(report.seed)
    adj = g.adjacency_csr()
    cnt = adj @ v_sub.astype(np.int64)
    heavy_ids = bip.u_nodes[bip.tau_heavy()]
    exc = np.array(
        [int(u) for u in heavy_ids if not in_step_window(int(cnt[u]), g.degree(u), delta)],
        dtype=np.int64,
    )
    # |exceptions| <= n / delta^0.01, exactly: exc^100 * delta <= n^100.
    assert int(exc.size) ** 100 * delta <= g.n ** 100, "weak-reduction exception bound violated"
    if ledger is not None:
        ledger.charge_derand(f"weak-reduce exceptions={exc.size}")
        ledger.charge("sampling", 1, "color-hash sampling")
    return v_sub, exc, report


# ---------------------------------------------------------------------------
# Final bounded-degree MIS and the full run


def final_bounded_mis(
    g: Graph,
    config: MpcConfig,
    ledger: Optional[RoundLedger] = None,
    scan_budget: int = 16,
    degree_cap: Optional[int] = None,
) -> np.ndarray:
    """MIS substitute: gather-and-greedy when the graph fits one machine,
    otherwise derandomized Luby rounds (undecided-count objective) to fixpoint.

    The round cost is the substitute's measured cost, not the cited external
    algorithm's bound; both appear in the ledger note.
    """
    if degree_cap is not None and g.max_degree() > degree_cap:
        raise ModelViolationError(
            f"degree {g.max_degree()} exceeds the bounded-MIS cap {degree_cap}"
        )
    in_set = np.zeros(g.n, dtype=bool)
    if g.n == 0:
        return in_set
    if check_gather(config, g.words()).ok:
        blocked = np.zeros(g.n, dtype=bool)
        for v in range(g.n):
            if not blocked[v]:
                in_set[v] = True
                blocked[g.neighbors(v)] = True
        if ledger is not None:
            ledger.charge("mis", 1, "gather-and-greedy final MIS (cited bound: O(log D + loglog* n))")
        return in_set
    undecided = np.ones(g.n, dtype=bool)
    spec = HashFamilySpec(k=2, p=next_prime(max(g.n, 3) ** 2), domain_size=g.n)
    adj = g.adjacency_csr()
    rounds = 0
    while undecided.any():
        ids = np.flatnonzero(undecided)
        sub, orig = g.induced_subgraph(undecided)

        def round_once(seed: Seed) -> np.ndarray:
            z = evaluate_many(spec, seed, orig.astype(np.int64))
            if z.dtype == object:
                z = np.array([int(x) for x in z], dtype=np.int64)
            key = z * np.int64(g.n) + orig
            nbr_min = np.full(sub.n, np.iinfo(np.int64).max, dtype=np.int64)
            nonempty = np.flatnonzero(np.diff(sub.indptr) > 0)
            if nonempty.size:
                nbr_min[nonempty] = np.minimum.reduceat(key[sub.indices], sub.indptr[nonempty])
            return key < nbr_min  # mask over sub ids

        def remaining(seed: Seed) -> int:
            join_local = round_once(seed)
            cov = join_local | ((sub.adjacency_csr() @ join_local.astype(np.int64)) > 0)
            return int(np.count_nonzero(~cov))

        obj = Objective(nodes=range(sub.n), contribution=lambda v, s: 0, aggregate_fn=remaining)
        rep = find_seed(spec, obj, enum_budget=1, scan_budget=scan_budget)
        join_local = round_once(rep.seed)
        joined = orig[np.flatnonzero(join_local)]
        in_set[joined] = True
        covered = np.zeros(g.n, dtype=bool)
        covered[joined] = True
        covered |= (adj @ covered.astype(np.int64)) > 0
        undecided &= ~covered
        rounds += 1
        if rounds > g.n:
            raise ModelViolationError("Luby fixpoint failed to converge")
    if ledger is not None:
        ledger.charge("mis", rounds, "derandomized Luby final MIS (cited bound: O(log D + loglog* n))")
    return in_set


@dataclass
class ClassRecord:
    index: int
    class_lo: int
    class_hi: int
    u_size: int
    sparsify: Optional[SparsifyResult]
    removed: int


@dataclass
class SublinearRunResult:
    members: set
    certificate: np.ndarray
    classes: list
    ledger: RoundLedger
    f: int
    c_cap: int
    valid: bool
    mis_rounds: int

    @property
    def core_rounds(self) -> int:
        """Charged rounds excluding the substitute final MIS."""
        return self.ledger.total_rounds - self.ledger.rounds["mis"]


def run_sublinear(
    g: Graph,
    config: Optional[MpcConfig] = None,
    params: Optional[SparsifyParams] = None,
) -> SublinearRunResult:
    config = config or MpcConfig(regime="sublinear", n=g.n, m=g.m, alpha=0.5)
    delta = g.max_degree()
    f = f_of_delta(delta)
    params = params or SparsifyParams(f=f, alpha=config.alpha)
    params.f = f
    _, run_cap = sparsify_schedule(max(delta, 2), f)
    cap_value = f ** run_cap

    ledger = RoundLedger(c_prim=config.c_prim, c_derand=config.c_derand)
    ledger.account_space(config, g.words())
    ledger.charge_primitive("degree-computation")

    active = np.ones(g.n, dtype=bool)
    in_m = np.zeros(g.n, dtype=bool)
    adj = g.adjacency_csr()
    classes: list = []
    i = 0
    while delta > 0 and (delta + f - 1) // f ** i >= 1:
        cur, orig = g.induced_subgraph(active)
        if cur.n == 0 or cur.max_degree() <= cap_value:
            break
        hi = delta // f ** i if f ** i <= delta else 0
        lo = delta // f ** (i + 1)
        deg = cur.degrees
        u_local = np.flatnonzero((deg > lo) & (deg <= hi))
        ledger.charge_primitive("degree-computation")
        if u_local.size == 0:
            i += 1
            continue
        bip = Bipartition(cur, u_local, max(hi, 1))
        res = sparsify(bip, params, config, ledger)
        v_sub_global = np.zeros(g.n, dtype=bool)
        v_sub_global[orig[np.flatnonzero(res.v_sub)]] = True
        v_sub_global &= active
        in_m |= v_sub_global
        removed = v_sub_global | (((adj @ v_sub_global.astype(np.int64)) > 0) & active)
        active &= ~removed
        # Loop invariant: remaining degrees at most max(delta/f^i, cap).
        rem, _ = g.induced_subgraph(active)
        bound = max(delta // f ** i if f ** i <= delta else 0, cap_value)
        assert rem.max_degree() <= bound, "degree-reduction loop invariant violated"
        classes.append(
            ClassRecord(i, lo, hi, int(u_local.size), res, int(np.count_nonzero(removed)))
        )
        i += 1

    final_mask = in_m | active
    sub, orig = g.induced_subgraph(final_mask)
    assert sub.max_degree() <= cap_value, "final MIS input exceeds the degree cap"
    before = ledger.rounds["mis"]
    mis_local = final_bounded_mis(sub, config, ledger, degree_cap=cap_value)
    mis_rounds = ledger.rounds["mis"] - before
    members = set(int(v) for v in orig[np.flatnonzero(mis_local)])
    ledger.finalize()
    report = verify_ruling_set(g, members, beta=2)
    return SublinearRunResult(
        members=members,
        certificate=report.certificate,
        classes=classes,
        ledger=ledger,
        f=f,
        c_cap=run_cap,
        valid=report.valid,
        mis_rounds=mis_rounds,
    )
