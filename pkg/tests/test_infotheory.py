import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compcause.errors import EstimatorError
from compcause.infotheory import (
    conditional_entropy, empirical_pmf, entropy, joint_entropy, log_scale, mutual_information,
)
from compcause.symbolic import SymbolSequence

seqs = st.lists(st.integers(0, 3), min_size=1, max_size=60)
pairs = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2)), min_size=1, max_size=60)


def split(ps):
    xs, ys = zip(*ps)
    return SymbolSequence(xs, 4), SymbolSequence(ys, 3)


def test_pmf_examples():
    assert empirical_pmf([0, 0, 0, 0]).probabilities == {0: 1.0}
    assert empirical_pmf([0, 1, 0, 1]).probabilities == {0: 0.5, 1: 0.5}
    p = empirical_pmf([0, 1, 2, 0, 1, 2])
    assert p.sample_count == 6
    for s in (0, 1, 2):
        assert p[s] == pytest.approx(1 / 3)


def test_pmf_omits_unobserved():
    p = empirical_pmf(SymbolSequence([0, 2, 2], 5))
    assert p.support() == [0, 2]


@pytest.mark.parametrize("fn", [empirical_pmf, entropy])
def test_empty_rejected(fn):
    with pytest.raises(EstimatorError):
        fn(SymbolSequence([], 2))


def test_entropy_examples():
    assert entropy([2, 2, 2]) == 0.0
    assert entropy([0, 1, 0, 1]) == pytest.approx(1.0, abs=1e-15)
    assert entropy([0, 1, 0, 1], "e") == pytest.approx(math.log(2), abs=1e-15)


def test_bad_base():
    with pytest.raises(ValueError):
        entropy([0, 1], 10)


def test_joint_entropy_examples():
    assert joint_entropy([0, 1, 0, 1], [1, 0, 1, 0]) == pytest.approx(1.0)
    assert joint_entropy([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(2.0)
    x = [0, 2, 1, 1, 0]
    assert joint_entropy(x, x) == pytest.approx(entropy(x), abs=1e-15)


def test_conditional_entropy_examples():
    x = [0, 2, 1, 1, 0]
    assert conditional_entropy(x, x) == pytest.approx(0.0, abs=1e-15)
    assert conditional_entropy([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(1.0)


def test_mi_examples():
    x = [0, 2, 1, 1, 0, 2, 2]
    assert mutual_information(x, x) == pytest.approx(entropy(x), abs=1e-15)
    with pytest.raises(EstimatorError):
        mutual_information([0, 1], [0])


def test_canonical_table_values(system, primed):
    closed = (1 / 3) * math.log2(3) + (2 / 3) * math.log2(1.5)
    assert mutual_information(system.X1, system.X2) == pytest.approx(closed, abs=1e-12)
    assert abs(mutual_information(primed["X2"], primed["X3"])) <= 1e-12
    # First-order plug-in misses the deterministic coupling entirely.
    assert conditional_entropy(primed["X2"], primed["X3"]) == pytest.approx(1.0, abs=1e-12)
    assert entropy(primed["X2"]) == pytest.approx(1.0, abs=1e-12)


@given(pairs)
def test_mi_symmetric_nonnegative(ps):
    x, y = split(ps)
    assert mutual_information(x, y) == mutual_information(y, x)
    assert mutual_information(x, y) >= -1e-12


@given(pairs)
def test_conditioning_reduces_entropy(ps):
    x, y = split(ps)
    assert conditional_entropy(x, y) <= entropy(x) + 1e-12


@given(pairs)
def test_chain_rule(ps):
    x, y = split(ps)
    assert joint_entropy(x, y) == pytest.approx(entropy(y) + conditional_entropy(x, y), abs=1e-12)


@given(seqs)
def test_entropy_bounded_by_alphabet(xs):
    s = SymbolSequence(xs, 4)
    h = entropy(s)
    assert h <= math.log2(4) + 1e-12
    counts = np.bincount(xs, minlength=4)
    if np.all(counts == counts[0]):
        assert h == pytest.approx(2.0, abs=1e-12)


@given(pairs)
def test_base_change(ps):
    x, y = split(ps)
    assert mutual_information(x, y, "e") == pytest.approx(mutual_information(x, y, 2) * log_scale(2), abs=1e-12)
