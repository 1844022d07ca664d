import numpy as np
import pytest
from hypothesis import strategies as st

from dtcode.channel import ChannelSpec


@pytest.fixture
def fig3():
    return ChannelSpec.build([-1, 1], [-1, 1])


@pytest.fixture
def fig4():
    return ChannelSpec.build([-1, 1], [-1, 0, 1])


@pytest.fixture
def appc():
    return ChannelSpec.build([1, 4, 5, 7], [0, 4])


def random_binary_spec(rng, q_max=8, x_range=4, s_range=8):
    """Additive M=2 spec drawn from small integer grids."""
    x = np.sort(rng.choice(np.arange(-x_range, x_range + 1), size=2, replace=False))
    q = int(rng.integers(1, q_max + 1))
    s = np.sort(rng.choice(np.arange(-s_range, s_range + 1), size=q, replace=False))
    return ChannelSpec.build(x.tolist(), s.tolist())


@st.composite
def specs(draw, m_min=1, m_max=3, q_max=4, combiner=None, grid=6):
    m = draw(st.integers(m_min, m_max))
    q = draw(st.integers(1, q_max))
    xs = sorted(draw(st.sets(st.integers(-grid, grid), min_size=m, max_size=m)))
    ss = sorted(draw(st.sets(st.integers(-grid, grid), min_size=q, max_size=q)))
    weights = draw(st.lists(st.integers(1, 5), min_size=q, max_size=q))
    pmf = [w / sum(weights) for w in weights]
    pmf[-1] = 1.0 - sum(pmf[:-1])
    kind = combiner or draw(st.sampled_from(["additive", "multiplicative"]))
    return ChannelSpec.build(xs, ss, pmf=pmf, combiner=kind)


@st.composite
def spec_and_symbols(draw, k=2, **kw):
    spec = draw(specs(**kw))
    sym = st.tuples(*[st.integers(0, spec.M - 1)] * spec.Q)
    return (spec, *[draw(sym) for _ in range(k)])


# -- acceptance reporting -------------------------------------------------------

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Call ``criterion(k, ok, detail)``; the line is registered before the
    assertion so failures are reported too.
    """
    def record(k: int, ok: bool, detail: str):
        _ACCEPTANCE[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_ACCEPTANCE[k])
        assert ok, detail
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])
