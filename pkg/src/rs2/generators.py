"""Deterministic graph generators: random models and classification gadgets.

Random models take an explicit generation seed and are byte-reproducible.
The gadget families force specific node labels: bad_node_gadget makes its
target nodes Bad by surrounding them with much higher-degree hubs, and
lucky_gadget adds a dedicated witness so the targets are Lucky as well.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import isqrt

import numpy as np

from ._intmath import ceil_pow
from .graph import Graph, from_edge_arrays, from_edges, s_set_size


class GeneratorError(ValueError):
    pass


def gnp(n: int, prob: float, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, p) via geometric skips over the pair sequence."""
    if not 0 <= prob <= 1:
        raise GeneratorError("probability must lie in [0, 1]")
    if prob == 0 or n < 2:
        return from_edges(n, [])
    total = n * (n - 1) // 2
    if prob == 1:
        idx = np.arange(total, dtype=np.int64)
    else:
        rng = random.Random(seed)
        hits = []
        pos = -1
        log1p = np.log1p(-prob)
        while True:
            u = rng.random()
            pos += 1 + int(np.log(1 - u) / log1p)
            if pos >= total:
                break
            hits.append(pos)
        idx = np.array(hits, dtype=np.int64)
    # Pair index -> (u, v) with u < v, row-major over the upper triangle.
    us = (n - 2 - np.floor(np.sqrt(-8 * idx.astype(np.float64) + 4 * n * (n - 1) - 7) / 2 - 0.5)).astype(np.int64)
    vs = idx + us + 1 - us * (2 * n - us - 1) // 2
    return from_edge_arrays(n, us, vs.astype(np.int64))


def d_regular(n: int, d: int) -> Graph:
    """Circulant d-regular graph (offsets 1..d/2, plus the antipode for odd d)."""
    if d >= n or d < 0:
        raise GeneratorError(f"d-regular needs 0 <= d < n, got d={d} n={n}")
    if n * d % 2 == 1:
        raise GeneratorError("n*d must be even")
    ids = np.arange(n, dtype=np.int64)
    rows, cols = [], []
    for off in range(1, d // 2 + 1):
        rows.append(ids)
        cols.append((ids + off) % n)
    if d % 2 == 1:
        if n % 2 == 1:
            raise GeneratorError("odd d requires even n for the antipodal matching")
        rows.append(ids)
        cols.append((ids + n // 2) % n)
    return from_edge_arrays(n, np.concatenate(rows), np.concatenate(cols))


def chung_lu(n: int, gamma: float = 2.5, avg_deg: float = 8.0, seed: int = 0) -> Graph:
    """Power-law expected degrees w_i ~ (n/(i+1))^(1/(gamma-1)), scaled to the
    requested average; edges sampled independently at w_i*w_j/W (capped at 1)."""
    if n < 2:
        return from_edges(n, [])
    w = (n / (np.arange(n, dtype=np.float64) + 1.0)) ** (1.0 / (gamma - 1.0))
    w *= avg_deg * n / w.sum()
    total_w = w.sum()
    rng = random.Random(seed)
    us, vs = [], []
    for i in range(n - 1):
        # Geometric skip within row i using the row's max pair probability.
        p_cap = min(1.0, w[i] * w[i + 1] / total_w)
        if p_cap <= 0:
            continue
        j = i
        log1p = np.log1p(-p_cap) if p_cap < 1 else None
        while True:
            if p_cap >= 1:
                j += 1
            else:
                j += 1 + int(np.log(1 - rng.random()) / log1p)
            if j >= n:
                break
            p = min(1.0, w[i] * w[j] / total_w)
            if rng.random() * p_cap <= p:
                us.append(i)
                vs.append(j)
    return from_edge_arrays(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))


def bad_node_gadget(d: int, big_d: int, epsilon: Fraction = Fraction(1, 40)) -> Graph:
    """Complete bipartite hubs x targets: d hubs of degree big_d, big_d targets
    of degree d.  Targets are Bad when d/sqrt(big_d) < d^epsilon, i.e.
    big_d > d^(2(1-epsilon)) -- checked exactly, else the combination errors.
    """
    num, den = epsilon.numerator, epsilon.denominator
    # big_d > d^(2(1-eps))  <=>  big_d^den > d^(2(den-num))
    if big_d ** den <= d ** (2 * (den - num)):
        raise GeneratorError(
            f"big_d={big_d} too small to force Bad labels for d={d}, eps={epsilon}"
        )
    hubs = np.arange(d, dtype=np.int64)
    targets = np.arange(d, d + big_d, dtype=np.int64)
    us = np.repeat(hubs, big_d)
    vs = np.tile(targets, d)
    return from_edge_arrays(d + big_d, us, vs)


def lucky_target_degree(d: int, epsilon: Fraction = Fraction(1, 40), margin: int = 4) -> int:
    """Hub degree making the gadget targets Bad with the given margin."""
    base = ceil_pow(d, 2 * (epsilon.denominator - epsilon.numerator), epsilon.denominator)
    need = max(margin * base, 2 * s_set_size(d.bit_length() - 1), d + 1)
    return need


def lucky_gadget(d: int, epsilon: Fraction = Fraction(1, 40), big_d: int | None = None) -> Graph:
    """bad_node_gadget plus a dedicated witness node adjacent to
    ceil(6*d^0.6) targets, so the targets are Lucky bad nodes of class d."""
    if d & (d - 1):
        raise GeneratorError("d must be a power of two (one class)")
    big_d = big_d if big_d is not None else lucky_target_degree(d, epsilon)
    g = bad_node_gadget(d, big_d, epsilon)
    s = s_set_size(d.bit_length() - 1)
    if big_d < s:
        raise GeneratorError(f"need at least {s} targets for the witness set")
    n = g.n + 1
    w = g.n  # witness id
    extra_u = np.full(s, w, dtype=np.int64)
    extra_v = np.arange(d, d + s, dtype=np.int64)
    base_u, base_v = _edge_rows(g)
    return from_edge_arrays(n, np.concatenate([base_u, extra_u]), np.concatenate([base_v, extra_v]))


def _edge_rows(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    rows = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees)
    mask = rows < g.indices
    return rows[mask], g.indices[mask]


def path_graph(n: int) -> Graph:
    ids = np.arange(n - 1, dtype=np.int64)
    return from_edge_arrays(n, ids, ids + 1)


def disjoint_union(graphs: list[Graph]) -> Graph:
    n = 0
    rows, cols = [], []
    for g in graphs:
        r, c = _edge_rows(g)
        rows.append(r + n)
        cols.append(c + n)
        n += g.n
    return from_edge_arrays(
        n,
        np.concatenate(rows) if rows else np.zeros(0, np.int64),
        np.concatenate(cols) if cols else np.zeros(0, np.int64),
    )


def class_union(
    class_exps: list[int],
    epsilon: Fraction = Fraction(1, 40),
    padding: int = 0,
) -> Graph:
    """Disjoint union of lucky gadgets (one per class exponent) plus a
    low-degree padding path; padding nodes stay SmallDegree and dilute the
    degree-sum-to-n ratio without touching the classes."""
    parts = [lucky_gadget(1 << i, epsilon) for i in class_exps]
    if padding > 1:
        parts.append(path_graph(padding))
    return disjoint_union(parts)


MODELS = ("gnp", "d-regular", "chung-lu", "bad-node-gadget", "lucky-gadget", "class-union")


def generate(model: str, **params) -> Graph:
    if model == "gnp":
        return gnp(params["n"], params.get("prob", 0.5), params.get("seed", 0))
    if model == "d-regular":
        return d_regular(params["n"], params["d"])
    if model == "chung-lu":
        return chung_lu(
            params["n"], params.get("gamma", 2.5), params.get("avg_deg", 8.0), params.get("seed", 0)
        )
    if model == "bad-node-gadget":
        return bad_node_gadget(params["d"], params["D"], params.get("epsilon", Fraction(1, 40)))
    if model == "lucky-gadget":
        return lucky_gadget(params["d"], params.get("epsilon", Fraction(1, 40)), params.get("D"))
    if model == "class-union":
        return class_union(
            params["class_exps"], params.get("epsilon", Fraction(1, 40)), params.get("padding", 0)
        )
    raise GeneratorError(f"unknown model {model!r}; choose from {MODELS}")
