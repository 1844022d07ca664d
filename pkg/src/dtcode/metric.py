"""Distances between associated symbols, raw inputs, and codewords."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import _kernels
from .channel import ChannelSpec, Symbol, output_points
from .errors import LengthMismatch


def _min_gap_sorted(a: Sequence[float], b: Sequence[float]) -> float:
    i = j = 0
    best = float("inf")
    while i < len(a) and j < len(b):
        d = a[i] - b[j]
        if d < 0:
            best = min(best, -d)
            i += 1
        else:
            best = min(best, d)
            if d == 0:
                return 0.0
            j += 1
    return best


def d_si(t: Symbol, r: Symbol, spec: ChannelSpec) -> float:
    """Minimum gap between the noiseless output points of ``t`` and ``r``."""
    return _min_gap_sorted(output_points(t, spec).points, output_points(r, spec).points)


def d_si_bruteforce(t: Symbol, r: Symbol, spec: ChannelSpec) -> float:
    """Reference O(Q^2) double loop over state pairs."""
    table = spec.output_table
    Q = spec.Q
    return min(abs(float(table[t[j1], j1]) - float(table[r[j2], j2]))
               for j1 in range(Q) for j2 in range(Q))


def d_nosi(x: float, z: float, spec: ChannelSpec) -> float:
    """Distance between raw inputs when the interference is unknown."""
    values = spec.input.values
    return d_si(spec.constant_symbol(values.index(float(x))),
                spec.constant_symbol(values.index(float(z))), spec)


def _check_lengths(c1, c2):
    if len(c1) != len(c2):
        raise LengthMismatch(f"codeword lengths differ: {len(c1)} != {len(c2)}")


def codeword_sq_distance(c1: Sequence[Symbol], c2: Sequence[Symbol], spec: ChannelSpec) -> float:
    _check_lengths(c1, c2)
    return sum(d_si(t, r, spec) ** 2 for t, r in zip(c1, c2))


def hamming(c1: Sequence, c2: Sequence) -> int:
    _check_lengths(c1, c2)
    return sum(1 for a, b in zip(c1, c2) if a != b)


def euclid_sq(c1: Sequence[float], c2: Sequence[float]) -> float:
    _check_lengths(c1, c2)
    return sum((float(a) - float(b)) ** 2 for a, b in zip(c1, c2))


def point_rows(symbols: Sequence[Symbol], spec: ChannelSpec) -> np.ndarray:
    """Sorted per-state output values, one row per symbol (duplicates kept)."""
    if len(symbols) == 0:
        return np.empty((0, spec.Q))
    idx = np.asarray(symbols, dtype=np.intp)
    rows = spec.output_table[idx, np.arange(spec.Q)[None, :]]
    return np.ascontiguousarray(np.sort(rows, axis=1))


@dataclass(frozen=True)
class DistanceMatrix:
    symbols: tuple[Symbol, ...]
    d: np.ndarray

    def nonzero_pairs(self):
        """Yield (i, j, d) for i < j with d > 0."""
        n = len(self.symbols)
        for i in range(n):
            for j in range(i + 1, n):
                if self.d[i, j] > 0:
                    yield i, j, float(self.d[i, j])


def distance_matrix(symbols: Sequence[Symbol], spec: ChannelSpec) -> DistanceMatrix:
    symbols = tuple(spec.check_symbol(t) for t in symbols)
    if not symbols:
        raise ValueError("distance_matrix needs at least one symbol")
    rows = point_rows(symbols, spec)
    d = _kernels.min_gap_matrix(rows, rows)
    np.fill_diagonal(d, 0.0)
    d.setflags(write=False)
    return DistanceMatrix(symbols, d)


@dataclass(frozen=True)
class DistanceSpectrum:
    """Squared codeword distances over all unordered pairs, as (value, count)."""

    pairs: tuple[tuple[float, int], ...]

    @property
    def min_sq(self) -> float:
        return self.pairs[0][0]

    @property
    def total(self) -> int:
        return sum(c for _, c in self.pairs)

    def values(self) -> list[float]:
        return [v for v, c in self.pairs for _ in range(c)]


def distance_spectrum(codebook: Sequence[Sequence[Symbol]], spec: ChannelSpec) -> DistanceSpectrum:
    codebook = list(codebook)
    if len(codebook) < 2:
        raise ValueError("a distance spectrum needs at least two codewords")
    counts = Counter(codeword_sq_distance(a, b, spec) for a, b in combinations(codebook, 2))
    return DistanceSpectrum(tuple(sorted(counts.items())))
