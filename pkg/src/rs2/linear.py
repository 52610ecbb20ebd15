"""Constant-round 2-ruling set in the linear-memory regime.

Each iteration runs three derandomized steps on the graph induced by the
still-unruled nodes: threshold sampling at rate 1/sqrt(deg), gathering of the
sampled set plus uncovered good nodes and failed lucky bad nodes, and an MIS
on the gathered subgraph seeded by one derandomized Luby round over the
sampled bad nodes.  Nodes within distance two of the new MIS members are
retired; small-degree nodes ride along untouched and are folded into the
final local solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import graph as gr
from ._intmath import ceil_pow, floor_pow, introot, next_prime
from .derand import Objective, SeedSearchReport, find_seed, find_seed_exhaustive
from .graph import BAD, GOOD, SMALL, Graph, NodeClassification, classify_nodes
from .hashing import (
    DEFAULT_ENUM_BUDGET,
    HashFamilySpec,
    Seed,
    evaluate_many,
    threshold_for_inv_sqrt,
)
from .mpc import ModelViolationError, MpcConfig, RoundLedger, check_gather

_FP32 = 1 << 32  # fixed-point scale for the grouped pessimistic estimator


@dataclass
class LinearParams:
    epsilon: Fraction = Fraction(1, 40)
    d0_exp: int = 6
    k_sample: int = 4
    k_mis: int = 2
    max_iter: int = 20
    enum_budget: int = DEFAULT_ENUM_BUDGET
    scan_budget: int = 64
    sample_spec: Optional[HashFamilySpec] = None
    mis_spec: Optional[HashFamilySpec] = None
    rng_seeds: Optional[object] = None  # random.Random for the baseline mode

    def specs_for(self, n: int) -> tuple[HashFamilySpec, HashFamilySpec]:
        if self.sample_spec is not None and self.mis_spec is not None:
            return self.sample_spec, self.mis_spec
        p = next_prime(max(n, 2) ** 3)
        samp = self.sample_spec or HashFamilySpec(k=self.k_sample, p=p, domain_size=max(n, 1))
        mis = self.mis_spec or HashFamilySpec(k=self.k_mis, p=p, domain_size=max(n, 1))
        return samp, mis


@dataclass
class GatherSet:
    v_samp: np.ndarray  # bool mask over active-graph ids
    part2: np.ndarray  # good, unsampled, no sampled neighbor
    part3: np.ndarray  # lucky bad nodes failing the S_u conditions
    v_star: np.ndarray  # union mask

    def star_count(self) -> int:
        return int(np.count_nonzero(self.v_star))


def luby_threshold(p: int, class_exp: int, epsilon: Fraction) -> int:
    """floor(p / d^{3*eps}) for d = 2^class_exp, exact."""
    en, ed = epsilon.numerator, epsilon.denominator
    d = 1 << class_exp
    return introot(p ** ed // d ** (3 * en), ed)


def class_thresholds(class_exp: int, epsilon: Fraction) -> tuple[int, int]:
    """(ceil(d^0.1), floor(d^(2*eps))) for d = 2^class_exp."""
    d = 1 << class_exp
    lt = ceil_pow(d, 1, 10)
    gt = floor_pow(d, 2 * epsilon.numerator, epsilon.denominator)
    return lt, gt


def sampling_step(
    g: Graph, cls: NodeClassification, spec: HashFamilySpec, seed: Seed
) -> np.ndarray:
    """Mask of nodes with h(id) < floor(p/sqrt(deg)); small-degree nodes never sampled."""
    deg = g.degrees
    h = evaluate_many(spec, seed, np.arange(g.n, dtype=np.int64))
    thresholds = {int(d): threshold_for_inv_sqrt(spec, int(d)) for d in np.unique(deg) if d > 0}
    tvec = np.array([thresholds.get(int(d), 0) for d in deg], dtype=object if h.dtype == object else np.int64)
    mask = np.array([int(a) < int(b) for a, b in zip(h, tvec)]) if h.dtype == object else (h < tvec)
    mask &= cls.label != SMALL
    return mask


@dataclass
class _SamplerCache:
    """Precomputed per-active-graph state shared across seed scans."""

    g: Graph
    cls: NodeClassification
    spec: HashFamilySpec
    adj: object  # scipy CSR
    thresholds: np.ndarray  # int64 sampling thresholds (0 for small/deg-0)
    lucky_ids: np.ndarray
    set_concat: np.ndarray  # concatenation of the distinct S_u member arrays
    set_starts: np.ndarray
    set_key_of_lucky: np.ndarray  # index into distinct sets per lucky node
    lt_thresh: np.ndarray  # per distinct set: ceil(d^0.1)
    gt_thresh: np.ndarray  # per distinct set: floor(d^(2 eps))


def _build_cache(g: Graph, cls: NodeClassification, spec: HashFamilySpec) -> _SamplerCache:
    deg = g.degrees
    thresholds = {int(d): threshold_for_inv_sqrt(spec, int(d)) for d in np.unique(deg) if d > 0}
    tvec = np.array([thresholds.get(int(d), 0) for d in deg], dtype=np.int64)
    tvec[cls.label == SMALL] = 0
    lucky_ids = np.flatnonzero(cls.lucky)
    keys = sorted(cls.s_members.keys())
    key_index = {kk: idx for idx, kk in enumerate(keys)}
    concat = (
        np.concatenate([cls.s_members[kk] for kk in keys])
        if keys
        else np.zeros(0, dtype=np.int64)
    )
    starts = np.zeros(len(keys) + 1, dtype=np.int64)
    for idx, kk in enumerate(keys):
        starts[idx + 1] = starts[idx] + cls.s_members[kk].size
    set_key = np.array(
        [key_index[(int(cls.witness[u]), int(cls.class_exp[u]))] for u in lucky_ids],
        dtype=np.int64,
    )
    lt = np.zeros(len(keys), dtype=np.int64)
    gt = np.zeros(len(keys), dtype=np.int64)
    for idx, (_, i) in enumerate(keys):
        lt[idx], gt[idx] = class_thresholds(i, cls.epsilon)
    return _SamplerCache(
        g, cls, spec, g.adjacency_csr(), tvec, lucky_ids, concat, starts, set_key, lt, gt
    )


def _sample_mask(cache: _SamplerCache, seed: Seed) -> np.ndarray:
    h = evaluate_many(cache.spec, seed, np.arange(cache.g.n, dtype=np.int64))
    if h.dtype == object:
        return np.array([int(a) < int(b) for a, b in zip(h, cache.thresholds)])
    return h < cache.thresholds


def _reduceat_per_set(values: np.ndarray, cache: _SamplerCache, op) -> np.ndarray:
    nsets = cache.set_starts.size - 1
    if nsets == 0 or cache.set_concat.size == 0:
        return np.zeros(nsets, dtype=values.dtype)
    return op.reduceat(values[cache.set_concat], cache.set_starts[:-1])


def gather_parts(cache: _SamplerCache, samp: np.ndarray) -> GatherSet:
    cls = cache.cls
    samp_cnt = cache.adj @ samp.astype(np.int64)
    part2 = (cls.label == GOOD) & ~samp & (samp_cnt == 0)
    part3 = np.zeros(cache.g.n, dtype=bool)
    if cache.lucky_ids.size:
        set_sampled = _reduceat_per_set(samp.astype(np.int64), cache, np.add)
        heavy = np.where(samp, samp_cnt, 0)
        set_heavy_max = _reduceat_per_set(heavy, cache, np.maximum)
        failed = (set_sampled < cache.lt_thresh) | (set_heavy_max > cache.gt_thresh)
        part3[cache.lucky_ids] = failed[cache.set_key_of_lucky]
    v_star = samp | part2 | part3
    return GatherSet(samp, part2, part3, v_star)


def gather_step(
    g: Graph, cls: NodeClassification, v_samp: np.ndarray, spec: Optional[HashFamilySpec] = None
) -> GatherSet:
    """Standalone gathering step for a precomputed sampled set."""
    cache = _build_cache(g, cls, spec or HashFamilySpec(k=2, p=next_prime(max(g.n, 2)), domain_size=g.n))
    return gather_parts(cache, np.asarray(v_samp, dtype=bool))


def edges_objective(g: Graph, cls: NodeClassification, spec: HashFamilySpec) -> Objective:
    """Degree sum over V*(seed): the proof's surrogate bounding 2|E(G[V*])|."""
    cache = _build_cache(g, cls, spec)
    deg = g.degrees.astype(np.int64)

    def aggregate(seed: Seed) -> int:
        samp = _sample_mask(cache, seed)
        gs = gather_parts(cache, samp)
        return int(deg[gs.v_star].sum())

    def contribution(v: int, seed: Seed) -> int:
        samp = _sample_mask(cache, seed)
        gs = gather_parts(cache, samp)
        return int(deg[v]) if gs.v_star[v] else 0

    return Objective(nodes=range(g.n), contribution=contribution, aggregate_fn=aggregate)


def induced_edge_count(g: Graph, mask: np.ndarray, adj=None) -> int:
    adj = adj if adj is not None else g.adjacency_csr()
    cnt = adj @ mask.astype(np.int64)
    return int(cnt[mask].sum()) // 2


def derand_sampling(
    g: Graph,
    cls: NodeClassification,
    spec: HashFamilySpec,
    config: MpcConfig,
    ledger: RoundLedger,
    params: LinearParams,
) -> tuple[SeedSearchReport, GatherSet]:
    cache = _build_cache(g, cls, spec)
    obj = edges_objective(g, cls, spec)
    if params.rng_seeds is not None:
        seed = tuple(params.rng_seeds.randrange(spec.p) for _ in range(spec.k))
        report = SeedSearchReport(seed, obj.aggregate(seed), None, "random-baseline", 1)
    else:
        report = find_seed(spec, obj, params.enum_budget, params.scan_budget)
    samp = _sample_mask(cache, report.seed)
    gs = gather_parts(cache, samp)
    words = induced_edge_count(g, gs.v_star, cache.adj) + gs.star_count()
    verdict = check_gather(config, words)
    ledger.charge("sampling", 1, "threshold sampling")
    ledger.charge_derand(f"edges objective value={report.value}")
    ledger.charge("gathering", 1, f"V* words={words}")
    ledger.account_space(config, g.words())
    if not verdict.ok:
        raise ModelViolationError(
            f"gather of V* needs {words} words, machine memory {verdict.capacity}"
        )
    return report, gs


def luby_partial_mis(
    g: Graph,
    cls: NodeClassification,
    v_samp: np.ndarray,
    spec: HashFamilySpec,
    seed: Seed,
) -> np.ndarray:
    """One derandomized Luby round over the sampled bad nodes.

    v joins iff (z_v, id_v) < (z_w, id_w) for every sampled-bad neighbor w and
    z_v < floor(p / d^(3 eps)) for v's class d.  Returns a bool mask.
    """
    sb = (cls.label == BAD) & v_samp
    ids = np.flatnonzero(sb)
    join = np.zeros(g.n, dtype=bool)
    if ids.size == 0:
        return join
    z = evaluate_many(spec, seed, ids.astype(np.int64))
    if z.dtype == object:
        if spec.p * g.n >= 1 << 63:
            raise ValueError("luby spec p too large for int64 key arithmetic")
        z = np.array([int(v) for v in z], dtype=np.int64)
    thr = {int(i): luby_threshold(spec.p, int(i), cls.epsilon) for i in np.unique(cls.class_exp[ids])}
    tvec = np.array([thr[int(cls.class_exp[v])] for v in ids], dtype=np.int64)
    ok = z < tvec
    # Min (z, id) over sampled-bad neighbors, computed on the induced subgraph.
    sub, orig = g.induced_subgraph(sb)
    key = z * np.int64(g.n) + ids  # strict z comparison with id tie-break
    nbr_min = np.full(sub.n, np.iinfo(np.int64).max, dtype=np.int64)
    nonempty = np.flatnonzero(np.diff(sub.indptr) > 0)
    if nonempty.size:
        nbr_min[nonempty] = np.minimum.reduceat(key[sub.indices], sub.indptr[nonempty])
    join[ids] = ok & (key < nbr_min)
    return join


def q_objective(
    g: Graph,
    cls: NodeClassification,
    v_samp: np.ndarray,
    spec: HashFamilySpec,
) -> Objective:
    """Grouped pessimistic estimator Q = sum_i X_{2^i} * 2^(i eps/2) / |Bbar_{2^i}|.

    Values are exact Fractions over the fixed-point weight floor(2^32 *
    2^(i eps/2)), so seed comparison never touches floats.
    """
    cache = _build_cache(g, cls, spec)
    en, ed = cls.epsilon.numerator, cls.epsilon.denominator
    lucky_ids = cache.lucky_ids
    class_of = cls.class_exp[lucky_ids] if lucky_ids.size else np.zeros(0, dtype=np.int16)
    bbar_size = {int(i): int(np.count_nonzero(cls.lucky & (cls.class_exp == i)))
                 for i in np.unique(class_of)} if lucky_ids.size else {}
    weight = {
        i: Fraction(floor_pow(2, 64 * ed + i * en, 2 * ed), _FP32 * bbar_size[i])
        for i in bbar_size
    }

    def unruled_mask(seed: Seed) -> np.ndarray:
        join = luby_partial_mis(g, cls, v_samp, spec, seed)
        if lucky_ids.size == 0:
            return np.zeros(0, dtype=bool)
        joined_in_set = _reduceat_per_set(join.astype(np.int64), cache, np.maximum)
        nbr_joined = (cache.adj @ join.astype(np.int64)) > 0
        covered = joined_in_set[cache.set_key_of_lucky].astype(bool) | nbr_joined[lucky_ids]
        return ~covered

    def aggregate(seed: Seed) -> Fraction:
        un = unruled_mask(seed)
        total = Fraction(0)
        for i in bbar_size:
            x = int(np.count_nonzero(un & (class_of == i)))
            total += x * weight[i]
        return total

    def contribution(u: int, seed: Seed) -> Fraction:
        if not cls.lucky[u]:
            return Fraction(0)
        un = unruled_mask(seed)
        pos = int(np.searchsorted(lucky_ids, u))
        return weight[int(cls.class_exp[u])] if un[pos] else Fraction(0)

    obj = Objective(nodes=range(g.n), contribution=contribution, aggregate_fn=aggregate)
    obj.unruled_mask = unruled_mask  # type: ignore[attr-defined]
    obj.weights = weight  # type: ignore[attr-defined]
    obj.bbar_size = bbar_size  # type: ignore[attr-defined]
    obj.class_of_lucky = class_of  # type: ignore[attr-defined]
    return obj


def derand_partial_mis(
    g: Graph,
    cls: NodeClassification,
    v_samp: np.ndarray,
    spec: HashFamilySpec,
    ledger: RoundLedger,
    params: LinearParams,
) -> tuple[SeedSearchReport, np.ndarray, dict]:
    obj = q_objective(g, cls, v_samp, spec)
    if params.rng_seeds is not None:
        seed = tuple(params.rng_seeds.randrange(spec.p) for _ in range(spec.k))
        report = SeedSearchReport(seed, obj.aggregate(seed), None, "random-baseline", 1)
    else:
        report = find_seed(spec, obj, params.enum_budget, params.scan_budget)
    join = luby_partial_mis(g, cls, v_samp, spec, report.seed)
    ledger.charge_derand(f"Q value={float(report.value):.6g}")
    ledger.charge("mis", 1, "partial Luby round")
    # Per-class unruled counts and the estimator extraction inequality
    # X_d <= Q / w_d, exact in the scaled arithmetic.
    un = obj.unruled_mask(report.seed)
    x_d = {}
    for i in obj.bbar_size:
        x = int(np.count_nonzero(un & (obj.class_of_lucky == i)))
        x_d[i] = x
        assert Fraction(x) * obj.weights[i] <= Fraction(report.value)
    return report, join, x_d


def local_mis_extend(g: Graph, v_star: np.ndarray, join: np.ndarray) -> np.ndarray:
    """Extend the partial independent set to an MIS of G[V*] (greedy by id)."""
    if (join & ~v_star).any():
        raise ValueError("partial set must lie inside the gathered subgraph")
    in_set = join.copy()
    blocked = np.zeros(g.n, dtype=bool)
    for v in np.flatnonzero(join):
        nbrs = g.neighbors(v)
        blocked[nbrs[v_star[nbrs]]] = True
        if blocked[v]:
            raise ValueError("partial set is not independent")
    for v in np.flatnonzero(v_star):
        if in_set[v] or blocked[v]:
            continue
        in_set[v] = True
        nbrs = g.neighbors(v)
        blocked[nbrs] = True
    return in_set


@dataclass
class IterationRecord:
    index: int
    sampling: SeedSearchReport
    mis: SeedSearchReport
    v_star_words: int
    degree_sum_v_star: int
    mis_size: int
    removed: int
    survival_before: dict
    survival_after: dict
    x_d: dict
    bad_star_ok: bool


@dataclass
class LinearRunResult:
    members: set
    certificate: np.ndarray
    iterations: list
    survival_table: list  # per iteration: {class_exp: count}
    ledger: RoundLedger
    c_edges: float
    eps_prime: Optional[float]
    valid: bool
    residual_words: int


def survival_counts(g: Graph, d0_exp: int, dmax_exp: int) -> dict:
    deg = g.degrees
    return {i: int(np.count_nonzero(deg >= (1 << i))) for i in range(d0_exp, max(dmax_exp, d0_exp) + 1)}


def run_linear(
    g: Graph,
    config: Optional[MpcConfig] = None,
    params: Optional[LinearParams] = None,
) -> LinearRunResult:
    params = params or LinearParams()
    if config is None:
        # Small-degree nodes (deg < 2^d0) are deferred to the final local
        # solve, so the machine must hold a residual with up to 2^(d0-1)
        # edges per node.
        config = MpcConfig(
            regime="linear", n=g.n, m=g.m, c_lin=max(8, (1 << (params.d0_exp - 1)) + 4)
        )
    ledger = RoundLedger(c_prim=config.c_prim, c_derand=config.c_derand)
    ledger.account_space(config, g.words())
    ledger.charge_primitive("degree-computation")

    samp_spec, mis_spec = params.specs_for(g.n)
    members: set[int] = set()
    active_mask = np.ones(g.n, dtype=bool)
    iterations: list[IterationRecord] = []
    survival_table: list[dict] = []
    dmax0 = int(g.degrees.max()).bit_length() - 1 if g.n and g.m else params.d0_exp
    c_edges = 0.0
    it = 0
    while it < params.max_iter:
        active, orig = g.induced_subgraph(active_mask)
        if active.n == 0 or check_gather(config, active.words()).ok:
            break
        cls = classify_nodes(active, params.epsilon, params.d0_exp)
        before = survival_counts(active, params.d0_exp, dmax0)
        star_report = gr.count_bad_star_classes(active, cls)

        samp_report, gs = derand_sampling(active, cls, samp_spec, config, ledger, params)
        mis_report, join, x_d = derand_partial_mis(active, cls, gs.v_samp, mis_spec, ledger, params)
        mis_mask = local_mis_extend(active, gs.v_star, join)
        ledger.charge("mis", 1, "local MIS extension")

        mis_nodes = orig[np.flatnonzero(mis_mask)]
        members.update(int(v) for v in mis_nodes)
        # Retire everything within distance two of the new MIS members.
        adj = active.adjacency_csr()
        d1 = (adj @ mis_mask.astype(np.int64)) > 0
        d2 = (adj @ (mis_mask | d1).astype(np.int64)) > 0
        removed_local = mis_mask | d1 | d2
        assert not (cls.label == GOOD)[~removed_local].any(), "a good node survived its iteration"
        active_mask[orig[np.flatnonzero(removed_local)]] = False

        after_graph, _ = g.induced_subgraph(active_mask)
        after = survival_counts(after_graph, params.d0_exp, dmax0)
        survival_table.append({"before": before, "after": after})
        if g.n:
            c_edges = max(c_edges, samp_report.value / g.n)
        iterations.append(
            IterationRecord(
                index=it,
                sampling=samp_report,
                mis=mis_report,
                v_star_words=gs.star_count(),
                degree_sum_v_star=int(samp_report.value),
                mis_size=int(mis_mask.sum()),
                removed=int(removed_local.sum()),
                survival_before=before,
                survival_after=after,
                x_d=x_d,
                bad_star_ok=star_report.all_pass,
            )
        )
        it += 1
        if not removed_local.any():
            # No sampled, good, or lucky node left (all-small residual);
            # further iterations cannot make progress.
            break

    # Final local solve: gather the residual (small-degree nodes included) and
    # extend greedily among non-neighbors of S.
    residual, orig = g.induced_subgraph(active_mask)
    residual_words = residual.words()
    verdict = check_gather(config, residual_words)
    ledger.charge("gathering", 1, f"residual words={residual_words}")
    if not verdict.ok:
        ledger.finalize()
        raise ModelViolationError(
            f"residual gather needs {residual_words} words after {it} iterations, "
            f"machine memory {verdict.capacity}"
        )
    s_adjacent = np.zeros(g.n, dtype=bool)
    for v in members:
        s_adjacent[g.neighbors(v)] = True
    eligible = np.zeros(residual.n, dtype=bool)
    eligible[:] = ~s_adjacent[orig]
    picked = local_mis_extend(residual, eligible, np.zeros(residual.n, dtype=bool))
    members.update(int(v) for v in orig[np.flatnonzero(picked)])
    ledger.charge("mis", 1, "final local solve")
    ledger.finalize()

    report = gr.verify_ruling_set(g, members, beta=2)
    eps_prime = fit_eps_prime(survival_table, params.d0_exp)
    return LinearRunResult(
        members=members,
        certificate=report.certificate,
        iterations=iterations,
        survival_table=survival_table,
        ledger=ledger,
        c_edges=c_edges,
        eps_prime=eps_prime,
        valid=report.valid,
        residual_words=residual_words,
    )


def fit_eps_prime(survival_table: list, d0_exp: int) -> Optional[float]:
    """Measured per-class decay exponent from the first iteration's survival."""
    import math

    if not survival_table:
        return None
    first = survival_table[0]
    rates = []
    for i, before in first["before"].items():
        if before == 0 or i < d0_exp:
            continue
        after = first["after"].get(i, 0)
        ratio = after / before
        d = float(1 << i)
        if ratio <= 0:
            ratio = 0.5 / before  # survivor-free class: report the resolution limit
        rates.append(-math.log(ratio) / math.log(d))
    return min(rates) if rates else None
