import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from dtcode.channel import (ChannelSpec, enumerate_associated, iter_associated, likelihood,
                            log_likelihood, output_points, transmitted_power)
from dtcode.errors import CapExceeded, InvariantViolation

from conftest import spec_and_symbols, specs


def phi(z):
    return math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)


def test_enumerate_binary_two_states():
    spec = ChannelSpec.build([-1, 1], [-1, 1])
    assert enumerate_associated(spec) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumerate_fig3_named_symbols(fig3):
    values = [fig3.symbol_values(t) for t in enumerate_associated(fig3)]
    # u1, u2, u3, u4 as written for this channel
    for u in [(-1, 1), (1, -1), (1, 1), (-1, -1)]:
        assert u in values


def test_enumerate_count_and_cap():
    spec = ChannelSpec.build([1, 2, 3, 4], [0, 1])
    assert len(enumerate_associated(spec)) == 16
    with pytest.raises(CapExceeded):
        enumerate_associated(spec, cap=15)
    assert sum(1 for _ in iter_associated(spec)) == 16


def test_output_points_merge(fig3):
    ps = output_points((1, 0), fig3)      # u2 = (+1, -1)
    assert ps.points == (0.0,) and ps.probs == (1.0,)
    ps = output_points((0, 1), fig3)      # u1 = (-1, +1)
    assert ps.points == (-2.0, 2.0) and ps.probs == (0.5, 0.5)


def test_output_points_multiplicative():
    spec = ChannelSpec.build([2], [0, 1], combiner="multiplicative")
    ps = output_points((0, 0), spec)
    assert ps.points == (0.0, 2.0) and ps.probs == (0.5, 0.5)


def test_likelihood_single_point(fig3):
    assert likelihood(0.0, (1, 0), fig3, sigma=1.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    assert likelihood(0.7, (1, 0), fig3, sigma=0.5) == pytest.approx(phi(1.4) / 0.5, rel=1e-14)


def test_likelihood_mixture(fig3):
    assert likelihood(0.0, (0, 1), fig3, sigma=1.0) == pytest.approx(phi(2.0), rel=1e-14)
    assert likelihood(0.0, (0, 1), fig3, sigma=1.0) == pytest.approx(0.05399096651318806, rel=1e-12)


def test_likelihood_requires_sigma(fig3):
    with pytest.raises(InvariantViolation):
        likelihood(0.0, (0, 1), fig3)


def test_power_examples():
    spec = ChannelSpec.build([-1, 1], [-3, 0, 2], pmf=[0.2, 0.5, 0.3])
    usage = {(0, 1, 1): 0.25, (1, 0, 1): 0.75}
    assert transmitted_power(usage, spec) == pytest.approx(1.0, abs=1e-15)
    spec = ChannelSpec.build([1, 4, 5, 7], [0, 4])
    assert transmitted_power({(2, 2): 1.0}, spec) == 25.0
    T = enumerate_associated(spec)
    assert transmitted_power({t: 1 / 16 for t in T}, spec) == pytest.approx(22.75, rel=1e-15)


@pytest.mark.parametrize("bad, field", [
    (dict(inputs=[1, 1], interference=[0]), "input"),
    (dict(inputs=[0, 1], interference=[1, 0]), "interference.values"),
    (dict(inputs=[0, 1], interference=[0, 1], pmf=[0.5, 0.4]), "interference.pmf"),
    (dict(inputs=[0, 1], interference=[0, 1], pmf=[1.0, 0.0]), "interference.pmf"),
    (dict(inputs=[0, 1], interference=[0, 1], combiner=[[1, 2]]), "combiner.table"),
    (dict(inputs=[0, float("inf")], interference=[0]), "input"),
])
def test_invariants(bad, field):
    with pytest.raises(InvariantViolation) as exc:
        ChannelSpec.build(**bad)
    assert exc.value.field == field


@settings(max_examples=60, deadline=None)
@given(spec_and_symbols(k=1, m_max=3, q_max=5))
def test_point_probs_sum_and_density_integrates(args):
    spec, t = args
    ps = output_points(t, spec)
    assert 1 <= len(ps) <= spec.Q
    assert abs(math.fsum(ps.probs) - 1.0) <= 1e-12
    sigma = 0.7
    lo, hi = ps.points[0] - 10 * sigma, ps.points[-1] + 10 * sigma
    total, _ = integrate.quad(lambda y: likelihood(y, t, spec, sigma), lo, hi,
                              points=list(ps.points), limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(spec_and_symbols(k=1, m_max=4, q_max=6), st.floats(-20, 20), st.floats(0.05, 5))
def test_likelihood_matches_unaggregated_sum(args, y, sigma):
    spec, t = args
    p = spec.interference.pmf
    table = spec.output_table
    brute = sum(p[j] * phi((y - table[t[j], j]) / sigma) / sigma for j in range(spec.Q))
    assert likelihood(y, t, spec, sigma) == pytest.approx(brute, rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(spec_and_symbols(k=1, m_max=4, q_max=6), st.floats(-30, 30), st.floats(0.05, 5))
def test_log_likelihood_consistent(args, y, sigma):
    spec, t = args
    direct = likelihood(y, t, spec, sigma)
    if direct > 1e-280:
        assert math.exp(log_likelihood(y, t, spec, sigma)) == pytest.approx(direct, rel=1e-9)


def test_log_likelihood_deep_tail_finite(fig3):
    # direct domain underflows here, the log domain must not
    assert likelihood(50.0, (0, 1), fig3, sigma=0.1) == 0.0
    ll = log_likelihood(50.0, (0, 1), fig3, sigma=0.1)
    assert math.isfinite(ll)
    assert ll == pytest.approx(math.log(0.5) - 0.5 * (48 / 0.1) ** 2 - 0.5 * math.log(2 * math.pi) - math.log(0.1), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(specs(m_max=3, q_max=3), st.randoms(use_true_random=False))
def test_power_permutation_invariant(spec, rnd):
    T = enumerate_associated(spec)
    weights = [rnd.random() + 0.01 for _ in T]
    total = sum(weights)
    usage = {t: w / total for t, w in zip(T, weights)}
    perm = list(range(len(T)))
    rnd.shuffle(perm)
    permuted = {T[perm[i]]: usage[T[perm[i]]] for i in range(len(T))}
    assert transmitted_power(permuted, spec) == pytest.approx(transmitted_power(usage, spec), rel=1e-12)
