import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from spikecal import preprocess as pp
from spikecal.benchmark import BenchmarkConfig, make_benchmark
from spikecal.errors import DataError, PipelineError
from spikecal.spectra import Spectrum, WavelengthGrid
from spikecal.ssa import SsaConfig

from conftest import make_set


def one(values, start=0, step=1, sid="x"):
    values = np.asarray(values, dtype=float)
    return Spectrum(sid, values, WavelengthGrid(start, start + step * (values.size - 1), step))


class TestOffsets:
    def test_single_splice_shifts_right_segment(self):
        out = pp.correct_detector_offsets(one([1, 1, 1, 1.1, 1.1]), [2])
        np.testing.assert_allclose(out.values, [1, 1, 1, 1.0, 1.0], atol=1e-15)

    def test_continuous_ramp_unchanged_boundaries(self):
        s = one(np.linspace(0.2, 0.8, 1101), start=900)
        out = pp.correct_detector_offsets(s, [1000, 1830])
        # jump estimate is the single adjacent difference, so only that step is removed
        i, j = 100, 930
        assert out.values[i + 1] == pytest.approx(out.values[i])
        assert out.values[j + 1] == pytest.approx(out.values[j])
        np.testing.assert_array_equal(out.values[i + 1 : j + 1], s.values[i + 1 : j + 1])

    def test_three_segments(self):
        wl = np.arange(900, 2001)
        v = np.where(wl <= 1000, 0.5, np.where(wl <= 1830, 0.7, 0.6))
        out = pp.correct_detector_offsets(one(v, start=900), [1000, 1830])
        d = np.diff(out.values)
        assert d[1000 - 900] == pytest.approx(0, abs=1e-15)
        assert d[1830 - 900] == pytest.approx(0, abs=1e-15)
        np.testing.assert_allclose(out.values, 0.7, atol=1e-15)
        # central segment untouched
        np.testing.assert_array_equal(out.values[101:931], v[101:931])

    @settings(max_examples=50, deadline=None)
    @given(arrays(float, 60, elements=st.floats(-10, 10)))
    def test_idempotent(self, v):
        s = one(v)
        once = pp.correct_detector_offsets(s, [15, 40])
        twice = pp.correct_detector_offsets(once, [15, 40])
        np.testing.assert_allclose(twice.values, once.values, atol=1e-12)

    @pytest.mark.parametrize("splices", [[0], [4], [7], [3, 2]])
    def test_bad_splices(self, splices):
        with pytest.raises(DataError):
            pp.correct_detector_offsets(one(np.ones(5)), splices)


class TestTrim:
    def test_paper_range(self):
        s = one(np.ones(2151), start=350)
        out = pp.trim(s, 450, 2400)
        assert len(out.grid) == 1951 and out.grid == WavelengthGrid(450, 2400)

    def test_full_and_minimal(self):
        s = one(np.arange(10.0), start=100)
        assert pp.trim(s, 100, 109).values.tolist() == s.values.tolist()
        assert pp.trim(s, 104, 105).values.tolist() == [4.0, 5.0]

    def test_idempotent_and_errors(self):
        s = one(np.arange(20.0), start=100, step=2)
        once = pp.trim(s, 104, 120)
        np.testing.assert_array_equal(pp.trim(once, 104, 120).values, once.values)
        with pytest.raises(DataError):
            pp.trim(s, 105, 120)
        with pytest.raises(DataError):
            pp.trim(s, 120, 104)


def test_absorbance():
    out = pp.to_absorbance(one([1.0, 0.5]))
    assert out.values[0] == 0.0
    assert out.values[1] == pytest.approx(0.3010299957, abs=1e-10)
    with pytest.raises(DataError, match="wavelength|nm"):
        pp.to_absorbance(one([0.5, 0.0]))


def test_max_normalize():
    np.testing.assert_array_equal(pp.max_normalize(one([1, 2, 4])).values, [0.25, 0.5, 1.0])
    np.testing.assert_array_equal(pp.max_normalize(one([3, 3, 3])).values, [1, 1, 1])
    with pytest.raises(DataError):
        pp.max_normalize(one([-1, -2]))


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(1, 50), elements=st.floats(1e-6, 1e6)))
def test_max_normalize_exact_one(v):
    assert pp.max_normalize(one(v)).values.max() == 1.0


def test_first_derivative():
    out = pp.first_derivative(one([0, 1, 3], start=10))
    np.testing.assert_array_equal(out.values, [1, 2])
    assert out.grid == WavelengthGrid(10, 11)
    np.testing.assert_array_equal(pp.first_derivative(one(np.full(6, 2.0))).values, np.zeros(5))
    ramp = one(0.3 * np.arange(0, 50, 5.0), step=5)  # slope 0.3 per nm
    np.testing.assert_allclose(pp.first_derivative(ramp).values, 0.3)
    with pytest.raises(DataError):
        pp.first_derivative(one([1.0]))


def test_pipeline_disabled_is_identity():
    data = make_set(np.random.default_rng(0).uniform(0.1, 0.9, (3, 30)))
    out = pp.run_pipeline(data, pp.PreprocessConfig.disabled())
    np.testing.assert_array_equal(out.X, data.X)
    assert out.ids == data.ids


def test_pipeline_default_grid_length():
    lab, _ = make_benchmark(0, BenchmarkConfig(grid=WavelengthGrid(350, 2500, 1), n_lab=2, n_field=2))
    out = pp.run_pipeline(lab)
    assert out.grid == WavelengthGrid(450, 2399) and out.X.shape == (2, 1950)
    np.testing.assert_array_equal(out.targets, lab.targets)


def test_pipeline_reports_sample_and_stage():
    X = np.full((2, 2151), 0.5)
    X[1, 700 - 350] = 0.0
    data = make_set(X, start=350)
    with pytest.raises(PipelineError) as info:
        pp.run_pipeline(data)
    assert info.value.sample_id == "s1" and info.value.stage == "absorbance"


def test_stage_order_golden():
    # R = [1, .1, .01] -> A = [0, 1, 2] -> /max = [0, .5, 1] -> diff = [.5, .5]
    data = make_set([[1.0, 0.1, 0.01]])
    cfg = pp.PreprocessConfig.disabled(absorbance=True, normalize=True, derivative=True)
    np.testing.assert_allclose(pp.run_pipeline(data, cfg).X, [[0.5, 0.5]], atol=1e-15)
    # swapping normalisation and derivative would give diff = [1, 1] -> /max = [1, 1]
    swapped = pp.max_normalize(pp.first_derivative(pp.to_absorbance(data.spectra[0])))
    np.testing.assert_allclose(swapped.values, [1.0, 1.0])


def test_config_validation_against_grid():
    grid = WavelengthGrid(350, 2500, 10)
    pp.PreprocessConfig().validate(grid)
    with pytest.raises(DataError):
        pp.PreprocessConfig(trim_lo_nm=455).validate(grid)
    with pytest.raises(DataError):
        pp.PreprocessConfig(splice_wavelengths_nm=(1830, 1000)).validate(grid)
    pp.PreprocessConfig(offset=False, splice_wavelengths_nm=(5,)).validate(grid)


def test_pipeline_is_per_spectrum():
    lab, field = make_benchmark(1)
    both = pp.run_pipeline(lab)
    single = pp.run_pipeline(lab.subset([4]))
    np.testing.assert_array_equal(both.X[4], single.X[0])
    assert pp.run_pipeline(field).grid == both.grid
