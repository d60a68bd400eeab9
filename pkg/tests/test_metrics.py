import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen
from qwalk2d.engine import Alternate, run
from qwalk2d.metrics import Distribution, classical_distribution, distribution, mean, similarity, variance
from qwalk2d.state import localized_state


def test_distribution_of_localized_state():
    d = distribution(localized_state("H", (2, -2)))
    assert d.probs == {(2, -2): 1.0}
    assert mean(d) == (2.0, -2.0)
    assert variance(d) == 0.0


def test_distribution_sums_to_one():
    _, hist = run(Alternate(), "D", 12)
    for d in hist:
        assert abs(d.total() - 1.0) <= 1e-12


def test_classical_small_n():
    c1 = classical_distribution(1)
    assert c1.probs == {(-1, -1): 0.25, (-1, 1): 0.25, (1, -1): 0.25, (1, 1): 0.25}
    assert classical_distribution(2)[(0, 0)] == 0.25
    assert mean(classical_distribution(5)) == (0.0, 0.0)


def test_classical_variance_four_is_exactly_eight():
    assert variance(classical_distribution(4)) == 8.0


@pytest.mark.parametrize("n", range(17))
def test_classical_variance_is_2n(n):
    assert variance(classical_distribution(n)) == pytest.approx(2 * n, abs=1e-12)
    # exact rational check of the same law
    marg = {2 * k - n: Fraction(math.comb(n, k), 2**n) for k in range(n + 1)}
    assert 2 * sum(p * x * x for x, p in marg.items()) == 2 * n


def test_similarity_examples():
    p = Distribution(1, {(-1, -1): 0.25, (-1, 1): 0.25, (1, -1): 0.25, (1, 1): 0.25})
    q = Distribution(1, {(-1, -1): 0.5, (-1, 1): 0.5})
    assert similarity(p, p) == pytest.approx(1.0, abs=1e-15)
    assert similarity(p, q) == pytest.approx((2 * math.sqrt(1 / 8)) ** 2, abs=1e-15)
    assert similarity(p, q) == pytest.approx(0.5, abs=1e-15)
    assert similarity(q, Distribution(1, {(1, 1): 1.0})) == 0.0


def test_similarity_to_classical():
    _, hist = run(Alternate(), "L", 4)
    for n in (1, 2):
        assert similarity(hist[n], classical_distribution(n)) == pytest.approx(1.0, abs=1e-12)
    assert similarity(hist[3], classical_distribution(3)) == pytest.approx(frozen.SIMILARITY_CLASSICAL_L3, abs=1e-10)
    assert similarity(hist[4], classical_distribution(4)) == pytest.approx(frozen.SIMILARITY_CLASSICAL_L4, abs=1e-10)
    assert similarity(hist[4], classical_distribution(4)) < 1


def test_mapped_relabels_sites():
    d = Distribution(2, {(2, 0): 0.5, (0, -2): 0.5})
    m = d.mapped(lambda s: (-s[0], s[1]))
    assert m.probs == {(-2, 0): 0.5, (0, -2): 0.5}


site = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
weights = st.dictionaries(site, st.floats(0.001, 1.0), min_size=1, max_size=12)


@settings(max_examples=80, deadline=None)
@given(weights, weights)
def test_similarity_properties(a, b):
    p = Distribution(0, a).normalized()
    q = Distribution(0, b).normalized()
    s = similarity(p, q)
    assert 0.0 <= s <= 1.0
    assert s == pytest.approx(similarity(q, p), abs=1e-15)
    assert similarity(p, p) == pytest.approx(1.0, abs=1e-12)
