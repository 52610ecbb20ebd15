"""Graph representation, good/bad/lucky node classification, ruling-set verifier."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Optional

import numpy as np

from ._intmath import floor_mul_pow, floor_pow

# Node labels
GOOD, BAD, SMALL = 0, 1, 2

# Fixed-point scale for the inverse-sqrt degree sums in the goodness test.
# Exact integer comparison keeps classification platform independent.
_FP_SHIFT = 40


class GraphFormatError(ValueError):
    pass


@dataclass
class Graph:
    """Undirected simple graph in CSR form with sorted adjacency."""

    n: int
    indptr: np.ndarray  # int64, len n+1
    indices: np.ndarray  # int64, len 2m, row-sorted

    @property
    def m(self) -> int:
        return int(self.indices.size) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def edge_iter(self) -> Iterable[tuple[int, int]]:
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def adjacency_csr(self):
        from scipy.sparse import csr_matrix

        data = np.ones(self.indices.size, dtype=np.int64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def induced_subgraph(self, keep: np.ndarray) -> tuple["Graph", np.ndarray]:
        """Subgraph on the nodes where `keep` is true.

        Returns the subgraph (with relabeled ids 0..n'-1) and the array of
        original ids, ordered by new id.
        """
        keep = np.asarray(keep, dtype=bool)
        orig = np.flatnonzero(keep)
        newid = -np.ones(self.n, dtype=np.int64)
        newid[orig] = np.arange(orig.size)
        rows = np.repeat(np.arange(self.n), self.degrees)
        mask = keep[rows] & keep[self.indices]
        sub_rows = newid[rows[mask]]
        sub_cols = newid[self.indices[mask]]
        order = np.lexsort((sub_cols, sub_rows))
        sub_rows, sub_cols = sub_rows[order], sub_cols[order]
        indptr = np.zeros(orig.size + 1, dtype=np.int64)
        np.add.at(indptr, sub_rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        return Graph(orig.size, indptr, sub_cols.astype(np.int64)), orig

    def words(self) -> int:
        """Word count when a machine stores the whole graph."""
        return self.n + self.m


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Normalized graph from an edge iterable: dedup, symmetrize, sort."""
    pairs = set()
    for u, v in edges:
        if u == v:
            raise GraphFormatError(f"self-loop at node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) outside node range [0, {n})")
        pairs.add((min(u, v), max(u, v)))
    if pairs:
        arr = np.array(sorted(pairs), dtype=np.int64)
        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    np.cumsum(indptr, out=indptr)
    return Graph(n, indptr, cols)


def from_edge_arrays(n: int, us: np.ndarray, vs: np.ndarray) -> Graph:
    """Vectorized construction from parallel endpoint arrays (for generators
    emitting millions of edges; semantics match from_edges)."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    if us.size and (int(min(us.min(), vs.min())) < 0 or int(max(us.max(), vs.max())) >= n):
        raise GraphFormatError("edge endpoint outside node range")
    if (us == vs).any():
        raise GraphFormatError("self-loop in edge arrays")
    lo, hi = np.minimum(us, vs), np.maximum(us, vs)
    key = np.unique(lo * np.int64(n) + hi)
    lo, hi = key // n, key % n
    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    np.cumsum(indptr, out=indptr)
    return Graph(n, indptr, cols.astype(np.int64))


def load_graph(text: str) -> Graph:
    """Parse edge-list text: optional header "n m", then one "u v" per line."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two fields, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field in {line!r}") from None
        rows.append((lineno, u, v))
    n_declared: Optional[int] = None
    if rows:
        _, h_n, h_m = rows[0]
        max_rest = max((max(u, v) for _, u, v in rows[1:]), default=-1)
        # First line is a header iff it is consistent as "n m" and cannot be
        # mistaken for an edge (every following id must fit under n).
        if h_n > 0 and h_m == len(rows) - 1 and h_n > max_rest:
            n_declared = h_n
            rows = rows[1:]
    edges = []
    max_id = -1
    for lineno, u, v in rows:
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at node {u}")
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative node id")
        max_id = max(max_id, u, v)
        edges.append((u, v))
    n = n_declared if n_declared is not None else max_id + 1
    if max_id >= n:
        raise GraphFormatError(f"node id {max_id} >= declared node count {n}")
    return from_edges(max(n, 0), edges)


def dump_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edge_iter())
    return "\n".join(lines) + "\n"


@dataclass
class NodeClassification:
    """Good/bad/small-degree labels plus lucky-node witness structure.

    Bad class exponent i groups bad nodes with degree in [2^i, 2^(i+1)).
    A bad node u in class d=2^i is lucky when some neighbor w has at least
    ceil(6*d^0.6) class-d bad neighbors; S(u) is then the ceil(6*d^0.6)
    lowest-id members of N(w) intersected with the class.  Ties are broken by
    lowest id throughout, so the classification is a pure function of the
    graph and parameters.
    """

    epsilon: Fraction
    d0_exp: int
    dmax_exp: int
    label: np.ndarray  # int8: GOOD/BAD/SMALL
    class_exp: np.ndarray  # int16, -1 for non-bad
    lucky: np.ndarray  # bool
    witness: np.ndarray  # int64, -1 when not lucky
    s_members: dict = field(default_factory=dict)  # (witness, class_exp) -> np.ndarray of ids

    def s_set(self, u: int) -> np.ndarray:
        if not self.lucky[u]:
            raise ValueError(f"node {u} is not lucky")
        return self.s_members[(int(self.witness[u]), int(self.class_exp[u]))]

    def class_exponents(self) -> list[int]:
        exps = np.unique(self.class_exp[self.class_exp >= 0])
        return [int(i) for i in exps]


def s_set_size(class_exp: int) -> int:
    """ceil(6 * d^0.6) for d = 2^class_exp."""
    d = 1 << class_exp
    # 6*d^{3/5}: exact ceiling via integer 5th roots.
    a = 6 ** 5 * d ** 3
    r = floor_pow(a, 1, 5)
    return r if r ** 5 == a else r + 1


def classify_nodes(g: Graph, epsilon: Fraction = Fraction(1, 40), d0_exp: int = 6) -> NodeClassification:
    if not 0 < epsilon < Fraction(1, 2):
        raise ValueError("epsilon must lie in (0, 1/2)")
    deg = g.degrees
    n = g.n
    label = np.full(n, GOOD, dtype=np.int8)
    class_exp = np.full(n, -1, dtype=np.int16)
    lucky = np.zeros(n, dtype=bool)
    witness = np.full(n, -1, dtype=np.int64)

    dmax_exp = int(deg.max()).bit_length() - 1 if n and deg.max() > 0 else 0
    small = deg < (1 << d0_exp)
    label[small] = SMALL

    if n == 0:
        return NodeClassification(epsilon, d0_exp, dmax_exp, label, class_exp, lucky, witness)

    # Goodness test, fixed point: sum_u floor(2^S / sqrt(deg u)) >= floor(2^S * d^eps).
    scale = 1 << _FP_SHIFT
    uniq = np.unique(deg)
    inv_sqrt = {int(d): (isqrt((scale * scale) // int(d)) if d > 0 else 0) for d in uniq}
    contrib = np.array([inv_sqrt[int(d)] for d in deg], dtype=np.int64)
    nbr_sum = _row_sums(g, contrib)
    thresh = {
        int(d): floor_mul_pow(scale, int(d), epsilon.numerator, epsilon.denominator)
        for d in uniq
        if d > 0
    }
    tvec = np.array([thresh.get(int(d), 0) for d in deg], dtype=np.int64)
    bad = (~small) & (nbr_sum < tvec)
    label[bad] = BAD
    # Class exponent via bit length, exact (float log2 misrounds near powers of two).
    bexp = np.array([int(d).bit_length() - 1 if d > 0 else 0 for d in deg], dtype=np.int16)
    class_exp[bad] = bexp[bad]

    s_members: dict = {}
    for i in np.unique(class_exp[bad]) if bad.any() else []:
        i = int(i)
        need = s_set_size(i)
        in_class = class_exp == i
        # Per-node count of class-i bad neighbors.
        cnt = _row_sums(g, in_class.astype(np.int64))
        eligible = cnt >= need
        # Lowest-id eligible neighbor of each class member.
        masked_ids = np.where(eligible, np.arange(g.n, dtype=np.int64), np.iinfo(np.int64).max)
        best = _row_mins(g, masked_ids)
        members = np.flatnonzero(in_class)
        has_w = best[members] != np.iinfo(np.int64).max
        lucky[members[has_w]] = True
        witness[members[has_w]] = best[members[has_w]]
        for w in np.unique(witness[members[has_w]]):
            w = int(w)
            nbrs = g.neighbors(w)
            pool = nbrs[in_class[nbrs]]
            s_members[(w, i)] = np.sort(pool)[:need].copy()
    return NodeClassification(
        epsilon, d0_exp, dmax_exp, label, class_exp, lucky, witness, s_members
    )


def _row_sums(g: Graph, values: np.ndarray) -> np.ndarray:
    """Per-node sum of `values` over neighbors."""
    out = np.zeros(g.n, dtype=values.dtype)
    nonempty = np.flatnonzero(np.diff(g.indptr) > 0)
    if nonempty.size:
        sums = np.add.reduceat(values[g.indices], g.indptr[nonempty])
        out[nonempty] = sums
    return out


def _row_mins(g: Graph, values: np.ndarray) -> np.ndarray:
    out = np.full(g.n, np.iinfo(np.int64).max, dtype=np.int64)
    nonempty = np.flatnonzero(np.diff(g.indptr) > 0)
    if nonempty.size:
        mins = np.minimum.reduceat(values[g.indices], g.indptr[nonempty])
        out[nonempty] = mins
    return out


@dataclass
class RulingSetReport:
    members: set
    certificate: np.ndarray  # distance to S, -1 when beyond beta
    independence_violations: list
    uncovered: list

    @property
    def valid(self) -> bool:
        return not self.independence_violations and not self.uncovered


def verify_ruling_set(g: Graph, members: Iterable[int], beta: int = 2) -> RulingSetReport:
    """Check independence and that every node is within `beta` hops of S."""
    s = sorted(set(int(v) for v in members))
    violations = []
    for v in s:
        if not 0 <= v < g.n:
            violations.append((v, v))  # out-of-range id reported as self-violation
    in_s = np.zeros(g.n, dtype=bool)
    for v in s:
        if 0 <= v < g.n:
            in_s[v] = True
    for v in s:
        if 0 <= v < g.n:
            nbrs = g.neighbors(v)
            for w in nbrs[in_s[nbrs]]:
                if v < w:
                    violations.append((v, int(w)))
    dist = np.full(g.n, -1, dtype=np.int64)
    queue = deque()
    for v in s:
        if 0 <= v < g.n:
            dist[v] = 0
            queue.append(v)
    while queue:
        v = queue.popleft()
        if dist[v] >= beta:
            continue
        for w in g.neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(int(w))
    uncovered = [int(v) for v in np.flatnonzero(dist < 0)]
    return RulingSetReport(set(s), dist, violations, uncovered)


@dataclass
class BadStarClassReport:
    counts: dict  # class exponent -> |B_d \ Bbar_d|
    v_ge: dict  # class exponent -> |V_{>= 2^i}|
    checks: dict  # class exponent -> bool for |B*_d| <= 12 |V_{>=d}| / d^{0.4}

    @property
    def all_pass(self) -> bool:
        return all(self.checks.values())


def count_bad_star_classes(g: Graph, cls: NodeClassification) -> BadStarClassReport:
    """Unlucky bad nodes per class, against the 12*|V_{>=d}|/d^0.4 bound."""
    deg = g.degrees
    counts, v_ge, checks = {}, {}, {}
    for i in cls.class_exponents():
        d = 1 << i
        star = int(np.count_nonzero((cls.class_exp == i) & ~cls.lucky))
        nv = int(np.count_nonzero(deg >= d))
        counts[i] = star
        v_ge[i] = nv
        # star <= 12 nv / d^{2/5}  <=>  star^5 * d^2 <= (12 nv)^5, exactly.
        checks[i] = star ** 5 * d ** 2 <= (12 * nv) ** 5
    return BadStarClassReport(counts, v_ge, checks)
