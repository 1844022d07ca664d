import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtcode.channel import ChannelSpec, enumerate_associated, output_points
from dtcode.errors import LengthMismatch
from dtcode.metric import (codeword_sq_distance, d_nosi, d_si, d_si_bruteforce, distance_matrix,
                           distance_spectrum, euclid_sq, hamming)

from conftest import spec_and_symbols, specs

U1, U2, U3, U4 = (0, 1), (1, 0), (1, 1), (0, 0)   # fig3 symbols as index tuples


def test_fig3_pairwise(fig3):
    T = enumerate_associated(fig3)
    for t, r in itertools.combinations(T, 2):
        expected = 2.0 if {t, r} == {U1, U2} else 0.0
        assert d_si(t, r, fig3) == expected


def test_fig3_triangle_inequality_fails(fig3):
    assert d_si(U1, U3, fig3) == 0.0
    assert d_si(U3, U2, fig3) == 0.0
    assert d_si(U1, U2, fig3) == 2.0
    assert d_si(U1, U2, fig3) > d_si(U1, U3, fig3) + d_si(U3, U2, fig3)


def test_fig4_pair(fig4):
    assert d_si((0, 0, 1), (1, 1, 0), fig4) == 1.0


def test_d_nosi_examples(fig3):
    assert d_nosi(1, -1, fig3) == 0.0
    assert d_nosi(1, 1, fig3) == 0.0
    assert d_nosi(-1, -1, fig3) == 0.0
    single = ChannelSpec.build([-2, 0.5, 3], [0])
    for x, z in itertools.product(single.input.values, repeat=2):
        assert d_nosi(x, z, single) == abs(x - z)


@settings(max_examples=200, deadline=None)
@given(specs(m_max=4, q_max=5))
def test_d_nosi_double_loop(spec):
    s = spec.interference.values
    for x, z in itertools.product(spec.input.values, repeat=2):
        if spec.additive:
            brute = min(abs(x + s1 - z - s2) for s1 in s for s2 in s)
        else:
            brute = min(abs(s1 * x - s2 * z) for s1 in s for s2 in s)
        assert d_nosi(x, z, spec) == brute


def test_two_pointer_equals_double_loop_1000():
    rng = np.random.default_rng(20071)
    for _ in range(1000):
        m = int(rng.integers(1, 5))
        q = int(rng.integers(1, 7))
        xs = np.sort(rng.choice(np.arange(-8, 9), m, replace=False)) / 2
        ss = np.sort(rng.choice(np.arange(-8, 9), q, replace=False)) / 4
        spec = ChannelSpec.build(xs.tolist(), ss.tolist(),
                                 combiner=["additive", "multiplicative"][int(rng.integers(2))])
        t = tuple(int(v) for v in rng.integers(0, m, q))
        r = tuple(int(v) for v in rng.integers(0, m, q))
        assert d_si(t, r, spec) == d_si_bruteforce(t, r, spec)


@settings(max_examples=200, deadline=None)
@given(spec_and_symbols(k=2, m_max=4, q_max=5))
def test_symmetry_and_zero_iff_shared_point(args):
    spec, t, r = args
    d = d_si(t, r, spec)
    assert d == d_si(r, t, spec)
    assert d >= 0
    assert d_si(t, t, spec) == 0
    shared = set(output_points(t, spec).points) & set(output_points(r, spec).points)
    assert (d == 0) == bool(shared)


@settings(max_examples=200, deadline=None)
@given(spec_and_symbols(k=2, m_min=2, m_max=2, q_max=6, combiner="additive"))
def test_binary_upper_bound(args):
    spec, t, r = args
    x1, x2 = spec.input.values
    assert d_si(t, r, spec) <= abs(x1 - x2)


@settings(max_examples=100, deadline=None)
@given(specs(m_max=4, q_max=4))
def test_d_nosi_equals_constant_symbols(spec):
    for a, b in itertools.product(range(spec.M), repeat=2):
        x, z = spec.input.values[a], spec.input.values[b]
        assert d_nosi(x, z, spec) == d_si(spec.constant_symbol(a), spec.constant_symbol(b), spec)


def test_codeword_distance(fig3):
    assert codeword_sq_distance((U1, U1), (U2, U1), fig3) == 4.0
    assert codeword_sq_distance((U1, U3), (U1, U3), fig3) == 0.0
    with pytest.raises(LengthMismatch):
        codeword_sq_distance((U1,), (U1, U2), fig3)


@settings(max_examples=100, deadline=None)
@given(specs(m_min=2, m_max=2, q_max=4, combiner="additive"),
       st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=6))
def test_binary_code_distance_is_scaled_hamming(spec, bits):
    from dtcode.pairsearch import max_pair_bruteforce
    u1, u2, d = max_pair_bruteforce(spec)
    c1 = tuple(u2 if a else u1 for a, _ in bits)
    c2 = tuple(u2 if b else u1 for _, b in bits)
    assert codeword_sq_distance(c1, c2, spec) == pytest.approx(d ** 2 * hamming(c1, c2), rel=1e-12)


def test_hamming_euclid():
    assert hamming((1, 2, 3), (1, 2, 3)) == 0
    assert euclid_sq((1.0, -1.0), (1.0, -1.0)) == 0
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 10))
        a = rng.choice([-1.0, 1.0], n)
        b = rng.choice([-1.0, 1.0], n)
        h = sum(int(x != y) for x, y in zip(a, b))
        assert hamming(tuple(a), tuple(b)) == h
        assert euclid_sq(a, b) == 4 * h
    with pytest.raises(LengthMismatch):
        hamming((1,), (1, 2))
    with pytest.raises(LengthMismatch):
        euclid_sq((1.0,), ())


def test_distance_matrix_fig3(fig3):
    T = enumerate_associated(fig3)
    dm = distance_matrix(T, fig3)
    assert np.array_equal(dm.d, dm.d.T)
    assert np.all(np.diag(dm.d) == 0)
    assert list(dm.nonzero_pairs()) == [(T.index(U1), T.index(U2), 2.0)]


@settings(max_examples=50, deadline=None)
@given(specs(m_max=3, q_max=4))
def test_distance_matrix_entries(spec):
    T = enumerate_associated(spec)
    dm = distance_matrix(T, spec)
    for i, j in itertools.combinations(range(len(T)), 2):
        assert dm.d[i, j] == d_si_bruteforce(T[i], T[j], spec)


def test_spectrum(fig3, appc):
    sp = distance_spectrum([(U1, U3), (U1, U3)], fig3)
    assert sp.pairs == ((0.0, 1),) and sp.min_sq == 0
    cb = [(U1, U1), (U2, U1), (U2, U2)]
    sp = distance_spectrum(cb, fig3)
    assert sp.pairs == ((4.0, 2), (8.0, 1))
    assert sp.total == 3 and sorted(sp.values()) == [4.0, 4.0, 8.0]
