"""Monte Carlo error-rate simulation with ML decoding, plus analytic PEP bounds.

Three systems are compared:

``known_si``
    codewords over associated symbols; the encoder sees the current state.
``unknown_si``
    codewords over raw inputs; the interference is treated as noise.
``interference_free``
    codewords over raw inputs sent over a plain AWGN channel.

The two raw-input systems are reduced to the known-SI machinery: an unknown-SI
codeword is a codeword of constant symbols, and the interference-free channel
is a one-state channel whose output is the input itself.

Random streams: every (SNR index, batch index) pair gets its own Philox
generator keyed from the master seed, so the result does not depend on how
batches are scheduled across threads.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .channel import (ChannelSpec, InterferenceAlphabet, StateCombiner,
                      Symbol, log_likelihood, likelihood, output_points)
from .errors import DomainError, InvariantViolation, LengthMismatch
from .metric import codeword_sq_distance

KINDS = ("known_si", "unknown_si", "interference_free")
DEFAULT_BATCH = 1 << 16


@dataclass(frozen=True)
class Scenario:
    """A transmission system and its codebook.

    For ``known_si`` each codeword is a sequence of associated symbols; for
    the other kinds it is a sequence of input indices.
    """

    kind: str
    codebook: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvariantViolation("scenario.kind", f"unknown kind {self.kind!r}")
        cb = tuple(tuple(_freeze(s) for s in cw) for cw in self.codebook)
        if not cb:
            raise InvariantViolation("scenario.codebook", "codebook is empty")
        if len({len(cw) for cw in cb}) != 1 or len(cb[0]) == 0:
            raise InvariantViolation("scenario.codebook", "codewords must be nonempty and of equal length")
        object.__setattr__(self, "codebook", cb)

    @property
    def n(self) -> int:
        return len(self.codebook[0])


def _freeze(s):
    return tuple(int(c) for c in s) if isinstance(s, (tuple, list, np.ndarray)) else int(s)


def interference_free_spec(spec: ChannelSpec) -> ChannelSpec:
    table = tuple((x,) for x in spec.input.values)
    return ChannelSpec(spec.input, InterferenceAlphabet((0.0,), (1.0,)),
                       StateCombiner("tabulated", table), spec.sigma)


def effective(scenario: Scenario, spec: ChannelSpec) -> tuple[ChannelSpec, list[tuple[Symbol, ...]]]:
    """Channel and associated-symbol codebook that realise ``scenario``."""
    if scenario.kind == "known_si":
        return spec, [tuple(spec.check_symbol(t) for t in cw) for cw in scenario.codebook]
    for cw in scenario.codebook:
        for m in cw:
            if not isinstance(m, int) or not 0 <= m < spec.M:
                raise InvariantViolation("scenario.codebook", f"input index {m!r} out of range")
    if scenario.kind == "unknown_si":
        return spec, [tuple(spec.constant_symbol(m) for m in cw) for cw in scenario.codebook]
    eff = interference_free_spec(spec)
    return eff, [tuple((m,) for m in cw) for cw in scenario.codebook]


def uncoded_scenario(kind: str, spec: ChannelSpec, pair: tuple[Symbol, Symbol] | None = None) -> Scenario:
    """Length-1 codebook: the given symbol pair for known-SI, every input otherwise."""
    if kind == "known_si":
        if pair is None:
            raise ValueError("known_si uncoded scenario needs a symbol pair")
        return Scenario(kind, ((pair[0],), (pair[1],)))
    return Scenario(kind, tuple((m,) for m in range(spec.M)))


# -- channel ----------------------------------------------------------------

def _value_index(values: Sequence[float], arr, name: str) -> np.ndarray:
    ref = np.asarray(values)
    arr = np.asarray(arr, dtype=float)
    idx = np.searchsorted(ref, arr)
    idx = np.clip(idx, 0, len(ref) - 1)
    if not np.array_equal(ref[idx], arr):
        raise InvariantViolation(name, "value not in alphabet")
    return idx


def encode(codeword: Sequence[Symbol], s, spec: ChannelSpec) -> np.ndarray:
    """Channel inputs x_i = t_i(s_i) for an interference sequence of values."""
    if len(codeword) != len(s):
        raise LengthMismatch(f"codeword length {len(codeword)} != interference length {len(s)}")
    s_idx = _value_index(spec.interference.values, s, "interference")
    x = spec.input.values
    return np.array([x[t[j]] for t, j in zip(codeword, s_idx)], dtype=float)


def channel_sample(x, s, spec: ChannelSpec, rng: np.random.Generator,
                   sigma: float | None = None) -> np.ndarray:
    """y = f(x, s) + sigma * g with g drawn from ``rng``."""
    sigma = spec.sigma if sigma is None else float(sigma)
    if sigma is None or not sigma > 0:
        raise InvariantViolation("sigma", "a positive noise level is required")
    x_idx = _value_index(spec.input.values, x, "input")
    s_idx = _value_index(spec.interference.values, s, "interference")
    base = spec.output_table[x_idx, s_idx]
    return base + sigma * rng.standard_normal(np.shape(base))


# -- decoding ---------------------------------------------------------------

class _Decoder:
    """Vectorised ML decoder over a fixed associated-symbol codebook."""

    def __init__(self, spec: ChannelSpec, codebook: Sequence[Sequence[Symbol]]):
        self.spec = spec
        self.codebook = [tuple(cw) for cw in codebook]
        self.n = len(self.codebook[0])
        self.columns = []
        for i in range(self.n):
            distinct = sorted({cw[i] for cw in self.codebook})
            where = {t: k for k, t in enumerate(distinct)}
            sets = [output_points(t, spec) for t in distinct]
            gather = np.array([where[cw[i]] for cw in self.codebook], dtype=np.intp)
            self.columns.append((sets, gather))

    def scores(self, Y: np.ndarray, sigma: float, domain: str = "log") -> np.ndarray:
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        B, C = Y.shape[0], len(self.codebook)
        if domain == "log":
            total = np.zeros((B, C))
            for i, (sets, gather) in enumerate(self.columns):
                per = np.stack([np.atleast_1d(log_likelihood(Y[:, i], ps, self.spec, sigma))
                                for ps in sets], axis=1)
                total += per[:, gather]
            return total
        if domain == "direct":
            total = np.ones((B, C))
            for i, (sets, gather) in enumerate(self.columns):
                per = np.stack([np.atleast_1d(likelihood(Y[:, i], ps, self.spec, sigma))
                                for ps in sets], axis=1)
                total *= per[:, gather]
            return total
        raise ValueError(f"unknown domain {domain!r}")

    @staticmethod
    def pick(scores: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Argmax per row; exact ties resolved by the uniforms ``u``."""
        top = scores.max(axis=1)
        tied = scores == top[:, None]
        count = tied.sum(axis=1)
        k = np.minimum((u * count).astype(np.intp), count - 1)
        return np.argmax(np.cumsum(tied, axis=1) > k[:, None], axis=1)


def ml_decode(y, scenario: Scenario, spec: ChannelSpec, rng: np.random.Generator,
              sigma: float | None = None, domain: str = "log") -> int:
    """Maximum-likelihood message index for one received sequence."""
    sigma = spec.sigma if sigma is None else float(sigma)
    if sigma is None or not sigma > 0:
        raise InvariantViolation("sigma", "a positive noise level is required")
    eff, cb = effective(scenario, spec)
    y = np.asarray(y, dtype=float).reshape(1, -1)
    if y.shape[1] != scenario.n:
        raise LengthMismatch(f"received length {y.shape[1]} != codeword length {scenario.n}")
    dec = _Decoder(eff, cb)
    return int(dec.pick(dec.scores(y, sigma, domain), np.array([rng.random()]))[0])


# -- Monte Carlo ------------------------------------------------------------

@dataclass(frozen=True)
class SimRow:
    snr_db: float
    sigma: float
    trials: int
    errors: int
    error_rate: float
    union_bound: float


@dataclass(frozen=True)
class SimCurve:
    rows: tuple[SimRow, ...]

    COLUMNS = ("snr_db", "sigma", "trials", "errors", "error_rate", "union_bound")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            w.writerow([f"{r.snr_db:.10g}", f"{r.sigma:.10g}", r.trials, r.errors,
                        f"{r.error_rate:.10g}", f"{r.union_bound:.10g}"])
        return buf.getvalue()


def sigma_from_snr_db(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 20.0)


def batch_rng(seed: int, snr_index: int, batch_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(snr_index), int(batch_index)))
    return np.random.Generator(np.random.Philox(ss))


def _run_batch(dec: _Decoder, sym_table, cdf, sigma, size, rng):
    spec = dec.spec
    C, n = sym_table.shape[0], sym_table.shape[1]
    msgs = rng.integers(0, C, size=size)
    s_idx = np.searchsorted(cdf, rng.random((size, n)), side="right")
    np.minimum(s_idx, spec.Q - 1, out=s_idx)
    noise = rng.standard_normal((size, n))
    u = rng.random(size)
    x_idx = sym_table[msgs[:, None], np.arange(n)[None, :], s_idx]
    Y = spec.output_table[x_idx, s_idx] + sigma * noise
    decoded = dec.pick(dec.scores(Y, sigma), u)
    return int(np.count_nonzero(decoded != msgs))


def monte_carlo(scenario: Scenario, spec: ChannelSpec, snr_db: Sequence[float], trials: int,
                seed: int, threads: int = 1, batch_size: int = DEFAULT_BATCH) -> SimCurve:
    """Message error rate per SNR point (SNR = 1/sigma^2, in dB)."""
    if trials < 1:
        raise InvariantViolation("trials", "must be at least 1")
    if threads < 1:
        raise InvariantViolation("threads", "must be at least 1")
    eff, cb = effective(scenario, spec)
    dec = _Decoder(eff, cb)
    sym_table = np.array(cb, dtype=np.intp)          # (C, n, Q)
    cdf = np.cumsum(eff.pmf_array)
    cdf[-1] = 1.0
    n_batches = -(-trials // batch_size)
    jobs = []
    for k, snr in enumerate(snr_db):
        sigma = sigma_from_snr_db(float(snr))
        for b in range(n_batches):
            size = min(batch_size, trials - b * batch_size)
            jobs.append((k, sigma, size, b))

    def work(job):
        k, sigma, size, b = job
        return _run_batch(dec, sym_table, cdf, sigma, size, batch_rng(seed, k, b))

    if threads == 1:
        counts = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(work, jobs))
    errors = [0] * len(snr_db)
    for (k, _, _, _), c in zip(jobs, counts):
        errors[k] += c
    rows = []
    for k, snr in enumerate(snr_db):
        sigma = sigma_from_snr_db(float(snr))
        ub = union_bound(cb, sigma, eff) if len(cb) >= 2 else 0.0
        rows.append(SimRow(float(snr), sigma, trials, errors[k], errors[k] / trials, ub))
    return SimCurve(tuple(rows))


# -- analytic bounds ----------------------------------------------------------

def q_function(x):
    """Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2."""
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(float(x) / math.sqrt(2.0))
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def pep_bound(c1: Sequence[Symbol], c2: Sequence[Symbol], sigma: float, spec: ChannelSpec) -> float:
    return q_function(math.sqrt(codeword_sq_distance(c1, c2, spec)) / (2.0 * sigma))


def union_bound(codebook: Sequence[Sequence[Symbol]], sigma: float, spec: ChannelSpec) -> float:
    """Union bound on the message error rate with equiprobable messages."""
    cb = list(codebook)
    if len(cb) < 2:
        raise ValueError("union bound needs at least two codewords")
    total = 0.0
    for i in range(len(cb)):
        for j in range(i + 1, len(cb)):
            total += 2.0 * pep_bound(cb[i], cb[j], sigma, spec)
    return min(1.0, total / len(cb))


@dataclass(frozen=True)
class PepOffsetBounds:
    K1: float
    K2: float


def pep_offset_bounds(p_a: Sequence[float], p_b: Sequence[float]) -> PepOffsetBounds:
    """Bounds on the log-ratio offset K of the mixture likelihoods."""
    for name, ps in (("p_a", p_a), ("p_b", p_b)):
        if any(not (0.0 < p <= 1.0) for p in ps):
            raise DomainError(f"{name}: probabilities must lie in (0, 1]")
    return PepOffsetBounds(2.0 * math.fsum(math.log(p) for p in p_a),
                           2.0 * math.fsum(math.log(1.0 / p) for p in p_b))
