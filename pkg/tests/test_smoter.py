import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spikecal import smoter
from spikecal.errors import DataError
from spikecal.spectra import Spectrum, WavelengthGrid

from conftest import make_set


def pair(values, target):
    values = np.asarray(values, dtype=float)
    return Spectrum("p", values, WavelengthGrid(1, values.size)), target


class TestNeighbours:
    def test_nearer_endpoint(self):
        data = make_set([[0.0], [1.0], [10.0]])
        assert smoter.nearest_neighbours(data, 1, 1) == [0]

    def test_tie_goes_to_lower_index(self):
        data = make_set([[0.0], [5.0], [5.0]])
        assert smoter.nearest_neighbours(data, 0, 1) == [1]

    def test_all_others_sorted(self):
        data = make_set([[0.0], [7.0], [2.0], [-1.0]])
        assert smoter.nearest_neighbours(data, 0, 3) == [3, 2, 1]

    def test_brute_force_oracle(self, rng):
        X = rng.normal(size=(15, 6))
        data = make_set(X)
        for i in range(15):
            d = [(float(np.sum((X[j] - X[i]) ** 2)), j) for j in range(15) if j != i]
            assert smoter.nearest_neighbours(data, i, 4) == [j for _, j in sorted(d)[:4]]

    def test_k_too_large(self):
        with pytest.raises(DataError):
            smoter.nearest_neighbours(make_set([[0.0], [1.0]]), 0, 2)


class TestSynthesizeOne:
    def test_weight_zero(self):
        s = smoter.synthesize_one(pair([1, 2], 10.0), pair([3, 5], 20.0), 0.0)
        np.testing.assert_array_equal(s.spectrum.values, [1, 2])
        assert s.d1 == 0 and s.target == 10.0

    def test_weight_one(self):
        s = smoter.synthesize_one(pair([1, 2], 10.0), pair([3, 5], 20.0), 1.0)
        np.testing.assert_array_equal(s.spectrum.values, [3, 5])
        assert s.target == 20.0

    def test_midpoint(self):
        s = smoter.synthesize_one(pair([0, 0], 10.0), pair([2, 2], 20.0), 0.5)
        np.testing.assert_array_equal(s.spectrum.values, [1, 1])
        assert s.d1 == pytest.approx(s.d2) and s.target == pytest.approx(15.0)

    def test_identical_parent_and_neighbor(self):
        s = smoter.synthesize_one(pair([1, 1], 4.0), pair([1, 1], 9.0), 0.3)
        assert s.target == 4.0

    def test_errors(self):
        with pytest.raises(DataError):
            smoter.synthesize_one(pair([1, 2], 1.0), pair([1, 2], 1.0), 1.5)
        with pytest.raises(DataError):
            smoter.synthesize_one(pair([1, 2], 1.0), pair([1, 2, 3], 1.0), 0.5)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 30), st.floats(0, 1), st.floats(0, 100), st.floats(0, 100), st.integers(0, 2**32))
    def test_interpolation_identity(self, m, w, tp, tn, seed):
        r = np.random.default_rng(seed)
        a, b = r.normal(size=m), r.normal(size=m)
        s = smoter.synthesize_one(pair(a, tp), pair(b, tn), w)
        dist = np.linalg.norm(b - a)
        assert s.d1 + s.d2 == pytest.approx(dist, rel=1e-9, abs=1e-12)
        if dist > 0:
            assert s.target == pytest.approx(tp + s.d1 / (s.d1 + s.d2) * (tn - tp), abs=1e-10)
        assert min(tp, tn) <= s.target <= max(tp, tn)


class TestParams:
    @pytest.mark.parametrize("n, k", [(0, 3), (150, 3), (250, 5), (100, 0)])
    def test_invalid(self, n, k):
        with pytest.raises(DataError):
            smoter.SmoteParams(n, k)

    def test_k_vs_source(self):
        with pytest.raises(DataError):
            smoter.generate_set(make_set(np.eye(4)), smoter.SmoteParams(100, 4))


class TestGenerate:
    def field(self, T=12, m=20, seed=0):
        r = np.random.default_rng(seed)
        return make_set(r.uniform(0.1, 0.9, (T, m)), r.uniform(10, 30, T), prefix="F")

    def test_paper_count(self):
        assert len(smoter.generate_set(self.field(), smoter.SmoteParams(200, 5, 1))) == 24

    def test_n100(self):
        out = smoter.generate_set(self.field(), smoter.SmoteParams(100, 3, 1))
        assert len(out) == 12 and out.tag == "S"
        assert out.ids[:2] == ("SF0_1", "SF1_1")

    def test_below_100_subsamples(self):
        src = self.field(T=10)
        samples = smoter.generate_samples(src, smoter.SmoteParams(50, 3, 9))
        parents = [s.parent_id for s in samples]
        assert len(samples) == 5 and len(set(parents)) == 5
        assert parents == sorted(parents, key=lambda p: src.ids.index(p))

    def test_order_and_neighbours(self):
        src = self.field()
        samples = smoter.generate_samples(src, smoter.SmoteParams(300, 3, 4))
        assert [s.spectrum.id for s in samples[:4]] == ["SF0_1", "SF0_2", "SF0_3", "SF1_1"]
        for s in samples:
            i = src.ids.index(s.parent_id)
            nns = [src.ids[j] for j in smoter.nearest_neighbours(src, i, 3)]
            assert s.neighbor_id in nns
            assert 0 <= s.weight < 1

    def test_deterministic(self):
        src = self.field()
        a = smoter.generate_set(src, smoter.SmoteParams(200, 5, 77))
        b = smoter.generate_set(src, smoter.SmoteParams(200, 5, 77))
        c = smoter.generate_set(src, smoter.SmoteParams(200, 5, 78))
        assert a.X.tobytes() == b.X.tobytes() and a.targets.tobytes() == b.targets.tobytes()
        assert a.X.tobytes() != c.X.tobytes()

    def test_targets_within_source_range(self):
        src = self.field(seed=3)
        out = smoter.generate_set(src, smoter.SmoteParams(300, 5, 0))
        assert src.targets.min() <= out.targets.min() and out.targets.max() <= src.targets.max()

    def test_too_small(self):
        with pytest.raises(DataError):
            smoter.generate_set(make_set([[1.0, 2.0]]), smoter.SmoteParams(100, 1))
