"""Exhaustive max-min-distance codebook search for small instances.

The search enumerates codebooks as increasing tuples of codeword indices
(codewords ordered lexicographically over the allowed-symbol list) with
branch and bound: a partial codebook is dropped as soon as its minimum
squared distance cannot beat the best complete codebook seen so far. Only
strict improvements replace the incumbent, so the witness is the
lexicographically first optimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import _kernels
from .channel import ChannelSpec, Symbol, enumerate_associated
from .errors import BudgetExceeded, InvariantViolation
from .metric import codeword_sq_distance, distance_matrix

DEFAULT_SEARCH_BUDGET = 10 ** 9
MAX_CODEWORDS = 8192


@dataclass(frozen=True)
class SearchSpace:
    n: int
    size: int
    allowed: tuple[Symbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "allowed", tuple(tuple(t) for t in self.allowed))
        if self.n < 1:
            raise InvariantViolation("n", "codeword length must be positive")
        if self.size < 2:
            raise InvariantViolation("size", "codebook size must be at least 2")
        if len(set(self.allowed)) != len(self.allowed):
            raise InvariantViolation("allowed", "duplicate symbols")
        if len(self.allowed) ** self.n < self.size:
            raise InvariantViolation("size", "fewer distinct codewords than the codebook size")

    @property
    def n_codewords(self) -> int:
        return len(self.allowed) ** self.n


@dataclass(frozen=True)
class SearchResult:
    best_sq: float
    codebook: tuple[tuple[Symbol, ...], ...]
    evaluations: int

    @property
    def best(self) -> float:
        return math.sqrt(self.best_sq)


def _codeword_matrix(sym_sq: np.ndarray, n: int) -> np.ndarray:
    A = sym_sq.shape[0]
    codes = np.array(list(product(range(A), repeat=n)), dtype=np.intp).reshape(-1, n)
    W = np.zeros((codes.shape[0], codes.shape[0]))
    for i in range(n):
        col = codes[:, i]
        W += sym_sq[col[:, None], col[None, :]]
    return W


def _search(sym_sq: np.ndarray, allowed: Sequence[Symbol], n: int, size: int,
            budget: int) -> SearchResult:
    A = len(allowed)
    if A ** n > MAX_CODEWORDS:
        raise BudgetExceeded(f"{A ** n} codewords exceed the search limit {MAX_CODEWORDS}")
    W = _codeword_matrix(np.ascontiguousarray(sym_sq, dtype=np.float64), n)
    best, witness, evals, completed = _kernels.max_min_codebook(W, size, int(budget))
    if not completed:
        raise BudgetExceeded(f"search stopped after {evals} evaluations (budget {budget})")
    codebook = []
    for c in witness:
        digits = []
        for _ in range(n):
            c, d = divmod(c, A)
            digits.append(allowed[d])
        codebook.append(tuple(reversed(digits)))
    return SearchResult(float(best), tuple(codebook), int(evals))


def best_min_distance(space: SearchSpace, spec: ChannelSpec,
                      budget: int = DEFAULT_SEARCH_BUDGET) -> SearchResult:
    """Exact optimum of the minimum pairwise squared distance over the space."""
    allowed = [spec.check_symbol(t) for t in space.allowed]
    sym_sq = distance_matrix(allowed, spec).d ** 2
    return _search(sym_sq, allowed, space.n, space.size, budget)


@dataclass(frozen=True)
class RestrictedResult:
    best_sq: float
    subset: tuple[Symbol, ...]
    codebook: tuple[tuple[Symbol, ...], ...]
    subsets: int
    evaluations: int


def best_restricted(spec: ChannelSpec, n: int, size: int, k: int,
                    budget: int = DEFAULT_SEARCH_BUDGET) -> RestrictedResult:
    """Best codebook drawn from any ``k`` symbols of T (first optimum in subset order)."""
    symbols = enumerate_associated(spec)
    if not 1 <= k <= len(symbols):
        raise InvariantViolation("restrict", f"k must lie in [1, {len(symbols)}]")
    full_sq = distance_matrix(symbols, spec).d ** 2
    best: RestrictedResult | None = None
    count = 0
    spent = 0
    for subset in combinations(range(len(symbols)), k):
        count += 1
        if k ** n < size:
            continue
        idx = np.array(subset)
        res = _search(full_sq[np.ix_(idx, idx)], [symbols[i] for i in subset], n, size,
                      budget - spent)
        spent += res.evaluations
        if best is None or res.best_sq > best.best_sq:
            best = RestrictedResult(res.best_sq, tuple(symbols[i] for i in subset),
                                    res.codebook, 0, 0)
    if best is None:
        raise InvariantViolation("restrict", f"{k} symbols cannot form {size} distinct codewords")
    return RestrictedResult(best.best_sq, best.subset, best.codebook, count, spent)


# -- the M = 4 counterexample channel ------------------------------------------

APPC_INPUTS = (1.0, 4.0, 5.0, 7.0)
APPC_STATES = (0.0, 4.0)
# codewords as (t(s) values listed in state order) per position
APPC_LISTED = (
    ((4, 1), (5, 1)),
    ((4, 1), (1, 5)),
    ((5, 4), (5, 4)),
    ((5, 4), (4, 5)),
    ((1, 5), (4, 1)),
    ((1, 5), (1, 4)),
)
APPC_CLAIMED_MIN_DISTANCE = 3.0
APPC_CLAIMED_SYMBOLS = 7


def appc_spec() -> ChannelSpec:
    return ChannelSpec.build(APPC_INPUTS, APPC_STATES)


def _listed_codebook(spec: ChannelSpec, reverse: bool) -> list[tuple[Symbol, ...]]:
    vals = spec.input.values
    out = []
    for cw in APPC_LISTED:
        syms = []
        for sym in cw:
            seq = tuple(reversed(sym)) if reverse else sym
            syms.append(tuple(vals.index(float(v)) for v in seq))
        out.append(tuple(syms))
    return out


@dataclass(frozen=True)
class ConventionEval:
    convention: str
    codebook: tuple[tuple[Symbol, ...], ...]
    pairwise_sq: tuple[tuple[int, int, float], ...]
    min_sq: float

    @property
    def min_distance(self) -> float:
        return math.sqrt(self.min_sq)


@dataclass(frozen=True)
class Claim:
    name: str
    claimed: str
    computed: str
    agrees: bool


@dataclass(frozen=True)
class AppendixCReport:
    distinct_symbols: int
    conventions: tuple[ConventionEval, ...]
    restricted: RestrictedResult
    unrestricted: SearchResult
    claims: tuple[Claim, ...] = field(default=())

    @property
    def more_symbols_help(self) -> bool:
        return self.unrestricted.best_sq > self.restricted.best_sq

    def format(self) -> str:
        lines = ["[channel]", f"inputs = {list(APPC_INPUTS)}", f"states = {list(APPC_STATES)}",
                 "", "[listed_codebook]", f"distinct_symbols = {self.distinct_symbols}"]
        for ev in self.conventions:
            lines.append(f"{ev.convention}.min_sq = {ev.min_sq:g}")
            lines.append(f"{ev.convention}.min_distance = {ev.min_distance:.6g}")
            zeros = [f"{i + 1}-{j + 1}" for i, j, d in ev.pairwise_sq if d == 0]
            lines.append(f"{ev.convention}.zero_distance_pairs = {','.join(zeros) or 'none'}")
        r = self.restricted
        lines += ["", "[restricted_4_symbols]", f"subsets = {r.subsets}",
                  f"best_sq = {r.best_sq:g}", f"best_distance = {math.sqrt(r.best_sq):.6g}",
                  f"subset = {list(r.subset)}", f"codebook = {[list(cw) for cw in r.codebook]}",
                  f"evaluations = {r.evaluations}"]
        u = self.unrestricted
        lines += ["", "[unrestricted]", f"best_sq = {u.best_sq:g}",
                  f"best_distance = {u.best:.6g}",
                  f"codebook = {[list(cw) for cw in u.codebook]}",
                  f"distinct_symbols = {len({t for cw in u.codebook for t in cw})}",
                  f"evaluations = {u.evaluations}"]
        lines += ["", "[claims]"]
        for c in self.claims:
            verdict = "agree" if c.agrees else "DISCREPANCY"
            lines.append(f"{c.name}: claimed {c.claimed}; computed {c.computed}; {verdict}")
        lines.append(f"more_than_M_symbols_strictly_helps = {self.more_symbols_help}")
        return "\n".join(lines) + "\n"


def verify_appendix_c(budget: int = DEFAULT_SEARCH_BUDGET) -> AppendixCReport:
    """Recompute every quantity of the counterexample and compare with its claims."""
    spec = appc_spec()
    evals = []
    for name, rev in (("state_order", False), ("reversed_order", True)):
        cb = _listed_codebook(spec, rev)
        pairs = tuple((i, j, codeword_sq_distance(cb[i], cb[j], spec))
                      for i in range(len(cb)) for j in range(i + 1, len(cb)))
        evals.append(ConventionEval(name, tuple(cb), pairs, min(d for _, _, d in pairs)))
    distinct = len({sym for cw in APPC_LISTED for sym in cw})
    restricted = best_restricted(spec, n=2, size=6, k=4, budget=budget)
    unrestricted = best_min_distance(SearchSpace(2, 6, tuple(enumerate_associated(spec))), spec,
                                     budget=budget)
    claimed = APPC_CLAIMED_MIN_DISTANCE
    claims = [
        Claim("listed_symbol_count", str(APPC_CLAIMED_SYMBOLS), str(distinct),
              distinct == APPC_CLAIMED_SYMBOLS),
    ]
    for ev in evals:
        claims.append(Claim(f"listed_min_distance[{ev.convention}]", f"{claimed:g}",
                            f"{ev.min_distance:.6g}", ev.min_sq == claimed ** 2))
    claims.append(Claim("restricted_4_symbols_below_3", f"< {claimed:g}",
                        f"{math.sqrt(restricted.best_sq):.6g}", restricted.best_sq < claimed ** 2))
    claims.append(Claim("some_code_reaches_3", f">= {claimed:g}", f"{unrestricted.best:.6g}",
                        unrestricted.best_sq >= claimed ** 2))
    return AppendixCReport(distinct, tuple(evals), restricted, unrestricted, tuple(claims))
