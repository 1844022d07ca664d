"""Maximum-distance symbol pairs, alphabet conditions, and codebook reductions.

For binary inputs the pair search is exact and polynomial: a pair at
distance >= d0 exists iff one label can be picked from every group of the
bipartite distance graph such that all picked U/V vertices are adjacent.
Each group has two labels, so this is a 2-SAT instance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .channel import DEFAULT_ENUM_CAP, ChannelSpec, Symbol, enumerate_associated
from .errors import (BudgetExceeded, InvariantViolation, SymbolNotInPartition,
                     UnlabeledEdge, UnsupportedCombiner, ZeroDistanceAnchors)
from .metric import d_si, point_rows

DEFAULT_PAIR_BUDGET = 4096 * 4095 // 2

Vertex = tuple[int, int]        # (group index i, input index k)
Edge = tuple[Vertex, Vertex]    # (u-vertex, v-vertex)


def _require_binary(spec):
    if spec.M != 2:
        raise InvariantViolation("input", f"binary input required (M={spec.M})")


# -- inductive pair construction -----------------------------------------------

@dataclass(frozen=True)
class Lemma1Step:
    state: int
    first: tuple[float, ...]
    second: tuple[float, ...]


def lemma1_trace(spec: ChannelSpec) -> tuple[Symbol, Symbol, list[Lemma1Step]]:
    """Build two symbols with disjoint output multisets, state by state.

    Returns the pair and the multisets after each state is processed.
    """
    _require_binary(spec)
    if not spec.additive:
        raise UnsupportedCombiner("the inductive construction needs an additive channel")
    t: list[int] = []
    r: list[int] = []
    first: list[float] = []
    second: list[float] = []
    steps = []
    for j in range(spec.Q):
        low, high = spec.f(0, j), spec.f(1, j)
        if low in second:
            t.append(1)
            r.append(0)
            first.append(high)
            second.append(low)
        else:
            # unclaimed, or already present in the first multiset
            t.append(0)
            r.append(1)
            first.append(low)
            second.append(high)
        steps.append(Lemma1Step(j, tuple(first), tuple(second)))
    return tuple(t), tuple(r), steps


def lemma1_construct(spec: ChannelSpec) -> tuple[Symbol, Symbol]:
    t, r, _ = lemma1_trace(spec)
    return t, r


# -- brute force ---------------------------------------------------------------

def max_pair_bruteforce(spec: ChannelSpec, budget: int = DEFAULT_PAIR_BUDGET
                        ) -> tuple[Symbol, Symbol, float]:
    """Exhaustive argmax of d_si over unordered symbol pairs.

    Ties go to the lexicographically first pair.
    """
    n = spec.M ** spec.Q
    if n * (n - 1) // 2 > budget:
        raise BudgetExceeded(f"{n * (n - 1) // 2} pair evaluations exceed budget {budget}")
    symbols = enumerate_associated(spec, cap=max(n, 1))
    if n == 1:
        return symbols[0], symbols[0], 0.0
    best, i, j = _kernels.max_gap_pair(point_rows(symbols, spec))
    return symbols[i], symbols[j], float(best)


# -- bipartite graph method ---------------------------------------------------------

def candidate_distances(spec: ChannelSpec) -> list[float]:
    """All distinct |f(x_i, s_k) - f(x_j, s_l)|; d_max is one of these."""
    vals = spec.output_table.ravel()
    gaps = np.abs(vals[:, None] - vals[None, :])
    return sorted(set(gaps.ravel().tolist()))


@dataclass(frozen=True)
class BipartiteDistanceGraph:
    """Groups U_i and V_i hold one vertex per input, labelled f(x_k, s_i)."""

    d0: float
    labels: tuple[tuple[float, ...], ...]
    edges: frozenset[Edge]

    @property
    def Q(self) -> int:
        return len(self.labels)

    def vertices(self):
        return [(i, k) for i in range(self.Q) for k in range(len(self.labels[i]))]


def build_graph(spec: ChannelSpec, d0: float) -> BipartiteDistanceGraph:
    _require_binary(spec)
    if not d0 > 0:
        raise InvariantViolation("d0", "threshold must be positive")
    labels = tuple(tuple(spec.f(k, i) for k in range(spec.M)) for i in range(spec.Q))
    verts = [(i, k) for i in range(spec.Q) for k in range(spec.M)]
    edges = frozenset((u, v) for u in verts for v in verts
                      if abs(labels[u[0]][u[1]] - labels[v[0]][v[1]]) >= d0)
    return BipartiteDistanceGraph(float(d0), labels, edges)


def _tarjan_scc(n: int, adj: list[list[int]]) -> list[int]:
    """Iterative Tarjan. Component ids come out in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pi = work[-1]
            if pi < len(adj[v]):
                work[-1] = (v, pi + 1)
                w = adj[v][pi]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
    return comp


def solve_selection(graph: BipartiteDistanceGraph) -> tuple[Symbol, Symbol] | None:
    """Pick one vertex per U_i and V_j so that every picked pair is an edge.

    Variables 0..Q-1 are the U choices, Q..2Q-1 the V choices; literal
    ``2*var + k`` means "variable picks input k". Every missing edge between
    (i, a) and (j, b) yields the clause not(U_i=a and V_j=b).
    """
    Q = graph.Q
    nlit = 4 * Q
    adj: list[list[int]] = [[] for _ in range(nlit)]
    for i, a, j, b in product(range(Q), range(2), range(Q), range(2)):
        if ((i, a), (j, b)) not in graph.edges:
            lu = 2 * i + a
            lv = 2 * (Q + j) + b
            adj[lu].append(lv ^ 1)
            adj[lv].append(lu ^ 1)
    comp = _tarjan_scc(nlit, adj)
    choice = []
    for var in range(2 * Q):
        c0, c1 = comp[2 * var], comp[2 * var + 1]
        if c0 == c1:
            return None
        # later in topological order (smaller Tarjan id) wins
        choice.append(0 if c0 < c1 else 1)
    return tuple(choice[:Q]), tuple(choice[Q:])


def feasible_pair(spec: ChannelSpec, d0: float) -> tuple[Symbol, Symbol] | None:
    """A pair (t, r) with d_si(t, r) >= d0, or None if none exists."""
    return solve_selection(build_graph(spec, d0))


def is_complete_selection(graph: BipartiteDistanceGraph, t: Symbol, r: Symbol) -> bool:
    return all(((i, t[i]), (j, r[j])) in graph.edges
               for i in range(graph.Q) for j in range(graph.Q))


def labeling_from_pair(graph: BipartiteDistanceGraph, t: Symbol, r: Symbol) -> dict[Edge, int]:
    """Label the edges of the selected K_{Q,Q} with 1 and all others with 0."""
    picked_u = {(i, t[i]) for i in range(graph.Q)}
    picked_v = {(j, r[j]) for j in range(graph.Q)}
    return {e: int(e[0] in picked_u and e[1] in picked_v) for e in graph.edges}


def qp_objective(graph: BipartiteDistanceGraph, labeling: Mapping[Edge, float]
                 ) -> tuple[float, list[float], list[float]]:
    """Sum of squared vertex loads, plus the per-group loads of U and V."""
    missing = [e for e in graph.edges if e not in labeling]
    if missing:
        raise UnlabeledEdge(f"{len(missing)} edge(s) unlabeled, e.g. {missing[0]}")
    load_u: dict[Vertex, float] = {v: 0.0 for v in graph.vertices()}
    load_v: dict[Vertex, float] = {v: 0.0 for v in graph.vertices()}
    for (u, v) in graph.edges:
        y = labeling[(u, v)]
        load_u[u] += y
        load_v[v] += y
    obj = sum(x * x for x in load_u.values()) + sum(x * x for x in load_v.values())
    group_u = [sum(load_u[(i, k)] for k in range(len(graph.labels[i]))) for i in range(graph.Q)]
    group_v = [sum(load_v[(i, k)] for k in range(len(graph.labels[i]))) for i in range(graph.Q)]
    return obj, group_u, group_v


def qp_certificate(graph: BipartiteDistanceGraph, labeling: Mapping[Edge, int]) -> bool:
    """True iff the 0/1 labeling meets the group constraints with objective 2Q^3."""
    Q = graph.Q
    obj, group_u, group_v = qp_objective(graph, labeling)
    if any(labeling[e] not in (0, 1) for e in graph.edges):
        return False
    if any(g != Q for g in group_u) or any(g != Q for g in group_v):
        return False
    return obj == 2 * Q ** 3


def max_pair_poly(spec: ChannelSpec) -> tuple[Symbol, Symbol, float]:
    """Binary search over candidate distances with the 2-SAT feasibility test."""
    _require_binary(spec)
    cands = [d for d in candidate_distances(spec) if d > 0]
    lo, hi = 0, len(cands) - 1
    best: tuple[Symbol, Symbol, float] | None = None
    while lo <= hi:
        mid = (lo + hi) // 2
        pair = feasible_pair(spec, cands[mid])
        if pair is None:
            hi = mid - 1
        else:
            best = (pair[0], pair[1], cands[mid])
            lo = mid + 1
    if best is None:
        return (0,) * spec.Q, (1,) * spec.Q, 0.0
    t, r, _ = best
    # the witness may exceed the threshold only up to the next candidate, which failed
    return t, r, d_si(t, r, spec)


# -- alphabet conditions -------------------------------------------------------

def _min_state_gap(spec: ChannelSpec) -> float:
    s = spec.interference.values
    return min((b - a for a, b in zip(s, s[1:])), default=math.inf)


def theorem2_condition(spec: ChannelSpec) -> bool:
    """Smallest interference gap is at least |x1 - x2|."""
    _require_binary(spec)
    x = spec.input.values
    return _min_state_gap(spec) >= abs(x[1] - x[0])


def theorem3_condition(spec: ChannelSpec) -> bool:
    """Smallest interference gap is at least twice the input span."""
    x = spec.input.values
    return _min_state_gap(spec) >= 2 * (x[-1] - x[0])


# -- partition and reduction ------------------------------------------------------

@dataclass(frozen=True)
class SymbolPartition:
    """Partition of T by the input chosen at one pivot state.

    ``mode`` is "binary" (classes 0 and 1 follow the anchors u1 and u2) or
    "mary" (class i holds the symbols whose first entry is x_i).
    """

    spec: ChannelSpec
    mode: str
    pivot: int
    anchors: tuple[Symbol, ...]

    def class_of(self, t: Symbol) -> int:
        try:
            t = self.spec.check_symbol(t)
        except InvariantViolation as exc:
            raise SymbolNotInPartition(f"{t!r} is not a symbol of this channel") from exc
        if self.mode == "binary":
            return 0 if t[self.pivot] == self.anchors[0][self.pivot] else 1
        return t[self.pivot]

    @property
    def class_ids(self) -> list[int]:
        return list(range(len(self.anchors)))

    def classes(self, cap: int = DEFAULT_ENUM_CAP) -> dict[int, frozenset[Symbol]]:
        out: dict[int, set[Symbol]] = {c: set() for c in self.class_ids}
        for t in enumerate_associated(self.spec, cap=cap):
            out[self.class_of(t)].add(t)
        return {c: frozenset(v) for c, v in out.items()}

    def default_replacements(self) -> dict[int, Symbol]:
        return dict(enumerate(self.anchors))


def partition(spec: ChannelSpec, mode: str = "binary", u1: Symbol | None = None,
              u2: Symbol | None = None, pivot: int = 0) -> SymbolPartition:
    if mode == "binary":
        _require_binary(spec)
        if u1 is None or u2 is None:
            u1, u2, _ = max_pair_poly(spec)
        u1, u2 = spec.check_symbol(u1), spec.check_symbol(u2)
        if d_si(u1, u2, spec) == 0:
            raise ZeroDistanceAnchors(f"d_si({u1}, {u2}) = 0")
        if not 0 <= pivot < spec.Q:
            raise InvariantViolation("pivot", f"state index must lie in [0, {spec.Q - 1}]")
        return SymbolPartition(spec, "binary", int(pivot), (u1, u2))
    if mode == "mary":
        anchors = tuple(spec.constant_symbol(m) for m in range(spec.M))
        return SymbolPartition(spec, "mary", 0, anchors)
    raise ValueError(f"unknown partition mode {mode!r}")


def reduce_codebook(codebook: Sequence[Sequence[Symbol]], part: SymbolPartition,
                    replacements: Mapping[int, Symbol] | None = None) -> list[tuple[Symbol, ...]]:
    """Replace every symbol by its class representative."""
    reps = part.default_replacements() if replacements is None else dict(replacements)
    out = []
    for cw in codebook:
        new = []
        for t in cw:
            cls = part.class_of(t)
            if cls not in reps:
                raise SymbolNotInPartition(f"no replacement for class {cls} (symbol {t!r})")
            new.append(tuple(reps[cls]))
        out.append(tuple(new))
    return out
