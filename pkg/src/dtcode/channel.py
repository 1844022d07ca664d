"""Channel model and the input alphabet of the associated channel.

An associated-channel symbol is a function from the interference alphabet to
the input alphabet. It is stored as a tuple of 0-based input indices, where
position ``j`` holds the input chosen when the ``j``-th smallest interference
value occurs.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, InvariantViolation

Symbol = tuple[int, ...]
Codeword = tuple

DEFAULT_ENUM_CAP = 2 ** 24
_PMF_TOL = 1e-12
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_strictly_increasing(values, name):
    if any(not math.isfinite(v) for v in values):
        raise InvariantViolation(name, "all values must be finite")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvariantViolation(name, "values must be strictly increasing")


@dataclass(frozen=True)
class InputAlphabet:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 1:
            raise InvariantViolation("input", "at least one input value required")
        _check_strictly_increasing(vals, "input")

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class InterferenceAlphabet:
    values: tuple[float, ...]
    pmf: tuple[float, ...] | None = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 1:
            raise InvariantViolation("interference.values", "at least one value required")
        _check_strictly_increasing(vals, "interference.values")
        if self.pmf is None:
            pmf = tuple(1.0 / len(vals) for _ in vals)
        else:
            pmf = tuple(float(p) for p in self.pmf)
        if len(pmf) != len(vals):
            raise InvariantViolation("interference.pmf", "length must match interference.values")
        if any(not (p > 0.0) or not math.isfinite(p) for p in pmf):
            raise InvariantViolation("interference.pmf", "entries must be positive")
        if abs(math.fsum(pmf) - 1.0) > _PMF_TOL:
            raise InvariantViolation("interference.pmf", f"must sum to 1 (got {math.fsum(pmf)!r})")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "pmf", pmf)

    def __len__(self):
        return len(self.values)

    @classmethod
    def uniform(cls, values: Sequence[float]) -> "InterferenceAlphabet":
        return cls(tuple(values), None)


@dataclass(frozen=True)
class StateCombiner:
    """How input and state combine before the noise is added.

    ``additive`` is f(x, s) = x + s, ``multiplicative`` is f(x, s) = s * x, and
    ``tabulated`` reads f from an M x Q table indexed by (input, state).
    """

    kind: str = "additive"
    table: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in ("additive", "multiplicative", "tabulated"):
            raise InvariantViolation("combiner", f"unknown kind {self.kind!r}")
        if self.kind == "tabulated":
            if self.table is None:
                raise InvariantViolation("combiner.table", "tabulated combiner needs a table")
            table = tuple(tuple(float(v) for v in row) for row in self.table)
            if any(not math.isfinite(v) for row in table for v in row):
                raise InvariantViolation("combiner.table", "entries must be finite")
            object.__setattr__(self, "table", table)
        elif self.table is not None:
            raise InvariantViolation("combiner.table", f"{self.kind} combiner takes no table")


@dataclass(frozen=True)
class ChannelSpec:
    input: InputAlphabet
    interference: InterferenceAlphabet
    combiner: StateCombiner = field(default_factory=StateCombiner)
    sigma: float | None = None

    def __post_init__(self):
        if self.combiner.kind == "tabulated":
            table = self.combiner.table
            if len(table) != self.M or any(len(row) != self.Q for row in table):
                raise InvariantViolation(
                    "combiner.table", f"table must be {self.M}x{self.Q}")
        if self.sigma is not None:
            sigma = float(self.sigma)
            if not (sigma > 0.0) or not math.isfinite(sigma):
                raise InvariantViolation("sigma", "must be positive and finite")
            object.__setattr__(self, "sigma", sigma)

    @classmethod
    def build(cls, inputs, interference, pmf=None, combiner="additive", sigma=None):
        """Convenience constructor from plain sequences."""
        if isinstance(combiner, StateCombiner):
            comb = combiner
        elif isinstance(combiner, str):
            comb = StateCombiner(combiner)
        else:
            comb = StateCombiner("tabulated", tuple(tuple(r) for r in combiner))
        return cls(InputAlphabet(tuple(inputs)),
                   InterferenceAlphabet(tuple(interference), None if pmf is None else tuple(pmf)),
                   comb, sigma)

    @property
    def M(self) -> int:
        return len(self.input)

    @property
    def Q(self) -> int:
        return len(self.interference)

    @property
    def additive(self) -> bool:
        return self.combiner.kind == "additive"

    @cached_property
    def output_table(self) -> np.ndarray:
        """Noiseless outputs f(x_m, s_j) as a read-only M x Q array."""
        x = np.asarray(self.input.values)
        s = np.asarray(self.interference.values)
        if self.combiner.kind == "additive":
            table = x[:, None] + s[None, :]
        elif self.combiner.kind == "multiplicative":
            table = s[None, :] * x[:, None]
        else:
            table = np.array(self.combiner.table, dtype=float)
        table.setflags(write=False)
        return table

    @cached_property
    def pmf_array(self) -> np.ndarray:
        p = np.asarray(self.interference.pmf, dtype=float)
        p.setflags(write=False)
        return p

    def f(self, m: int, j: int) -> float:
        """Noiseless output for input index ``m`` under state index ``j``."""
        return float(self.output_table[m, j])

    def constant_symbol(self, m: int) -> Symbol:
        return (m,) * self.Q

    def check_symbol(self, t: Sequence[int]) -> Symbol:
        t = tuple(int(c) for c in t)
        if len(t) != self.Q:
            raise InvariantViolation("symbol", f"length {len(t)} != Q={self.Q}")
        if any(c < 0 or c >= self.M for c in t):
            raise InvariantViolation("symbol", f"indices must lie in [0, {self.M - 1}]")
        return t

    def symbol_values(self, t: Symbol) -> tuple[float, ...]:
        return tuple(self.input.values[c] for c in t)


def iter_associated(spec: ChannelSpec) -> Iterator[Symbol]:
    """Lazily yield all M**Q associated symbols in lexicographic order."""
    return itertools.product(range(spec.M), repeat=spec.Q)


def enumerate_associated(spec: ChannelSpec, cap: int = DEFAULT_ENUM_CAP) -> list[Symbol]:
    count = spec.M ** spec.Q
    if count > cap:
        raise CapExceeded(f"M**Q = {count} exceeds enumeration cap {cap}; use iter_associated")
    return list(iter_associated(spec))


@dataclass(frozen=True)
class OutputPointSet:
    points: tuple[float, ...]
    probs: tuple[float, ...]

    def __len__(self):
        return len(self.points)


def output_points(t: Symbol, spec: ChannelSpec) -> OutputPointSet:
    """Distinct noiseless outputs of ``t`` with merged state probabilities.

    Values are merged on exact float equality.
    """
    table = spec.output_table
    pmf = spec.interference.pmf
    agg: dict[float, list[float]] = {}
    for j, c in enumerate(t):
        agg.setdefault(float(table[c, j]), []).append(pmf[j])
    points = sorted(agg)
    return OutputPointSet(tuple(points), tuple(math.fsum(agg[a]) for a in points))


def _as_point_set(t, spec):
    return t if isinstance(t, OutputPointSet) else output_points(t, spec)


def _require_sigma(spec, sigma):
    sigma = spec.sigma if sigma is None else float(sigma)
    if sigma is None or not sigma > 0.0:
        raise InvariantViolation("sigma", "a positive noise level is required")
    return sigma


def log_likelihood(y, t, spec: ChannelSpec, sigma: float | None = None):
    """Log of the associated-channel density f(y | t).

    Accepts scalar or array ``y``. The mixture over output points is summed
    after shifting by the largest exponent, with terms in ascending order so
    that equal multisets of terms give bit-identical results.
    """
    sigma = _require_sigma(spec, sigma)
    ps = _as_point_set(t, spec)
    a = np.asarray(ps.points)
    logp = np.log(np.asarray(ps.probs))
    y_arr = np.asarray(y, dtype=float)
    z = (y_arr[..., None] - a) / sigma
    expo = logp - 0.5 * z * z
    expo = np.sort(expo, axis=-1)
    top = expo[..., -1]
    total = np.log(np.sum(np.exp(expo - top[..., None]), axis=-1)) + top
    out = total - _LOG_SQRT_2PI - math.log(sigma)
    return float(out) if np.ndim(out) == 0 else out


def likelihood(y, t, spec: ChannelSpec, sigma: float | None = None):
    """Direct-domain density f(y | t) = sum_a p(a) phi((y - a)/sigma)/sigma."""
    sigma = _require_sigma(spec, sigma)
    ps = _as_point_set(t, spec)
    a = np.asarray(ps.points)
    p = np.asarray(ps.probs)
    y_arr = np.asarray(y, dtype=float)
    z = (y_arr[..., None] - a) / sigma
    dens = np.sum(p * np.exp(-0.5 * z * z), axis=-1) / (sigma * math.sqrt(2.0 * math.pi))
    return float(dens) if np.ndim(dens) == 0 else dens


def transmitted_power(usage: Mapping[Symbol, float], spec: ChannelSpec) -> float:
    """Average transmitted power E[X^2] for a symbol usage distribution."""
    total = math.fsum(usage.values())
    if abs(total - 1.0) > 1e-9:
        raise InvariantViolation("usage", f"must sum to 1 (got {total!r})")
    x = spec.input.values
    pmf = spec.interference.pmf
    terms = []
    for t, pt in usage.items():
        t = spec.check_symbol(t)
        terms.extend(pt * pmf[j] * x[c] ** 2 for j, c in enumerate(t))
    return math.fsum(terms)
