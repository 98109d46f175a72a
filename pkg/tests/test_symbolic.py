import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compcause.errors import EstimatorError, MalformedInputError
from compcause.symbolic import (
    SymbolEncoding, SymbolSequence, acf, bin_edges, pearson_correlation, quantize, read_series_csv,
    remove_joint_symbol, to_joint_symbols, write_series_csv,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def linear_quantile(values, q):
    xs = sorted(values)
    h = (len(xs) - 1) * q
    lo = math.floor(h)
    hi = min(lo + 1, len(xs) - 1)
    return xs[lo] + (h - lo) * (xs[hi] - xs[lo])


class TestSymbolSequence:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SymbolSequence([0, 3], 3)
        with pytest.raises(ValueError):
            SymbolSequence([-1, 0], 2)

    def test_empty_constructible(self):
        assert len(SymbolSequence([], 2)) == 0

    def test_immutable(self):
        s = SymbolSequence([0, 1], 2)
        with pytest.raises(ValueError):
            s.symbols[0] = 1

    def test_encoding_roundtrip(self):
        enc = SymbolEncoding((-1, 0, 1))
        s = enc.encode([1, -1, 0, 0])
        assert s.symbols.tolist() == [2, 0, 1, 1]
        assert enc.decode(s).tolist() == [1, -1, 0, 0]
        assert s.values().tolist() == [1.0, -1.0, 0.0, 0.0]

    def test_encoding_rejects_unknown_label(self):
        with pytest.raises(ValueError):
            SymbolEncoding((0, 1)).encode([2])

    def test_encoding_must_be_bijective(self):
        with pytest.raises(ValueError):
            SymbolEncoding((0, 0))


class TestQuantize:
    def test_midpoint_split(self):
        assert quantize([0.1, 0.9, 0.5, 0.95], 2).symbols.tolist() == [0, 1, 0, 1]

    @pytest.mark.parametrize("strategy", ["equal-width", "equal-frequency"])
    def test_single_bin(self, strategy):
        s = quantize([3.0, -2.0, 7.5], 1, strategy)
        assert s.symbols.tolist() == [0, 0, 0]
        assert s.alphabet_size == 1

    def test_equal_frequency_terciles(self):
        data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        oracle = [linear_quantile(data, q) for q in (1 / 3, 2 / 3)]
        np.testing.assert_allclose(bin_edges(data, 3, "equal-frequency"), oracle)
        assert quantize(data, 3, "equal-frequency").symbols.tolist() == [0, 0, 1, 1, 2, 2]

    def test_equal_frequency_ties_go_low(self):
        # median edge is exactly 2.0
        assert quantize([1.0, 2.0, 3.0], 2, "equal-frequency").symbols.tolist() == [0, 0, 1]

    @pytest.mark.parametrize("bad", [[], [1.0, float("nan")], [float("inf")]])
    def test_rejects_bad_series(self, bad):
        with pytest.raises(EstimatorError):
            quantize(bad, 2)

    def test_rejects_bad_bins(self):
        with pytest.raises(ValueError):
            quantize([1.0, 2.0], 0)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            quantize([1.0, 2.0], 2, "kmeans")

    @given(st.lists(finite, min_size=2, max_size=60), st.integers(1, 8))
    def test_extremes_map_to_end_bins(self, xs, k):
        if max(xs) == min(xs):
            return
        s = quantize(xs, k)
        assert s.symbols[int(np.argmin(xs))] == 0
        assert s.symbols[int(np.argmax(xs))] == k - 1


class TestRemoveJointSymbol:
    def test_basic(self):
        out = remove_joint_symbol([[0, 1, 2, 0], [0, 2, 1, 0]], 0)
        assert [o.symbols.tolist() for o in out] == [[1, 2], [2, 1]]

    def test_no_target_is_noop(self):
        out = remove_joint_symbol([[1, 2, 1], [2, 2, 1]], 0)
        assert [o.symbols.tolist() for o in out] == [[1, 2, 1], [2, 2, 1]]

    def test_any_sequence_triggers_removal(self):
        out = remove_joint_symbol([[0, 1, 1], [1, 1, 0]], 0)
        assert [o.symbols.tolist() for o in out] == [[1], [1]]

    def test_errors(self):
        with pytest.raises(EstimatorError):
            remove_joint_symbol([[0, 1], [0]], 0)
        with pytest.raises(EstimatorError):
            remove_joint_symbol([[0, 0], [1, 0]], 0)

    def test_canonical_system_length(self, primed):
        assert {len(s) for s in primed.values()} == {32}

    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=40))
    def test_property(self, pairs):
        xs, ys = zip(*pairs)
        try:
            out = remove_joint_symbol([list(xs), list(ys)], 1)
        except EstimatorError:
            assert all(1 in p for p in pairs)
            return
        assert len(out[0]) == len(out[1])
        assert all(1 not in o.symbols.tolist() for o in out)


class TestJointSymbols:
    def test_codes(self):
        assert to_joint_symbols(SymbolSequence([0, 1], 2), SymbolSequence([1, 0], 2)).symbols.tolist() == [1, 2]
        j = to_joint_symbols(SymbolSequence([0, 0, 1], 2), SymbolSequence([0, 1, 1], 2))
        assert j.symbols.tolist() == [0, 1, 3]
        assert j.alphabet_size == 4

    def test_unequal(self):
        with pytest.raises(EstimatorError):
            to_joint_symbols([0, 1], [0])

    @given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 4)), min_size=1, max_size=30))
    def test_injective(self, pairs):
        xs, ys = zip(*pairs)
        x, y = SymbolSequence(xs, 4), SymbolSequence(ys, 5)
        j = to_joint_symbols(x, y)
        decoded = list(zip((j.symbols // 5).tolist(), (j.symbols % 5).tolist()))
        assert decoded == list(pairs)

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=30))
    def test_diagonal_isomorphic(self, xs):
        j = to_joint_symbols(xs, xs).symbols
        x = np.asarray(xs)
        assert np.array_equal(j[:, None] == j[None, :], x[:, None] == x[None, :])


class TestPearson:
    def test_self_and_anti(self):
        x = [1.0, 3.0, -2.0, 5.0]
        assert pearson_correlation(x, x) == pytest.approx(1.0, abs=1e-12)
        assert pearson_correlation(x, [-v for v in x]) == pytest.approx(-1.0, abs=1e-12)

    def test_uses_labels_not_codes(self):
        enc = SymbolEncoding((-1, 0, 1))
        x = enc.encode([-1, 1, 0, 1])
        assert pearson_correlation(x, [-1, 1, 0, 1]) == pytest.approx(1.0)

    def test_errors(self):
        with pytest.raises(EstimatorError):
            pearson_correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
        with pytest.raises(EstimatorError):
            pearson_correlation([1.0], [2.0])
        with pytest.raises(EstimatorError):
            pearson_correlation([1.0, 2.0], [2.0])

    @given(st.lists(st.tuples(finite, finite), min_size=3, max_size=40),
           st.floats(0.1, 10), st.floats(-100, 100))
    def test_symmetry_and_affine_invariance(self, pairs, scale, shift):
        x = np.array([p[0] for p in pairs])
        y = np.array([p[1] for p in pairs])
        if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
            return
        r = pearson_correlation(x, y)
        assert pearson_correlation(y, x) == pytest.approx(r, abs=1e-12)
        assert pearson_correlation(scale * x + shift, y) == pytest.approx(r, abs=1e-9)


class TestAcf:
    def test_alternating_matches_direct_sum(self):
        x = [i % 2 for i in range(48)]
        m = sum(x) / 48
        def cov(k):
            return sum((x[i] - m) * (x[i + k] - m) for i in range(48 - k)) / 48
        r = acf(x, 2)
        assert r.values[0] == 1.0
        assert r.values[1] == pytest.approx(cov(1) / cov(0), abs=1e-12)
        assert r.values[2] == pytest.approx(cov(2) / cov(0), abs=1e-12)
        assert r.values[1] == pytest.approx(-47 / 48, abs=1e-12)
        assert r.values[2] == pytest.approx(46 / 48, abs=1e-12)
        assert r.confidence_halfwidth == pytest.approx(1.96 / math.sqrt(48))

    def test_errors(self):
        with pytest.raises(EstimatorError):
            acf([1.0] * 10, 2)
        with pytest.raises(EstimatorError):
            acf([1.0, 2.0, 3.0], 2)

    @given(st.lists(finite, min_size=6, max_size=50))
    def test_bounds(self, xs):
        if np.ptp(xs) < 1e-6:
            return
        r = acf(xs, 4)
        assert r.values[0] == 1.0
        assert np.all(np.abs(r.values) <= 1 + 1e-9)

    def test_canonical_x1_peak_at_12(self, system):
        assert acf(system.X1, 20).argmax(1, 20) == 12


class TestCsv:
    def test_roundtrip(self, tmp_path):
        p = tmp_path / "s.csv"
        write_series_csv(p, {"a": [1, -1, 0], "b": [0.5, 2.0, 3.25]})
        d = read_series_csv(p)
        assert d["a"].tolist() == [1.0, -1.0, 0.0]
        assert d["b"].tolist() == [0.5, 2.0, 3.25]

    @pytest.mark.parametrize("text", ["a,b\n1,x\n", "a,b\n1\n", "a\n", "a,a\n1,2\n"])
    def test_malformed(self, tmp_path, text):
        p = tmp_path / "bad.csv"
        p.write_text(text)
        with pytest.raises(MalformedInputError):
            read_series_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MalformedInputError):
            read_series_csv(tmp_path / "nope.csv")
