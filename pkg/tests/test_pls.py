import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spikecal import pls
from spikecal.errors import DataError, DegenerateFitError


def ols_oracle(X, y):
    """Minimum-norm least squares on centred data via the pseudo-inverse."""
    Xc = X - X.mean(axis=0)
    beta = np.linalg.pinv(Xc) @ (y - y.mean())
    return beta, y.mean() + Xc @ beta


def test_single_latent_variable_exact():
    rng = np.random.default_rng(0)
    n = 10
    X = rng.normal(size=(n, 4))
    X -= X.mean(axis=0)
    # make column 0 orthogonal to the others
    q, _ = np.linalg.qr(np.column_stack([X[:, 0], np.ones(n)]))
    others = X[:, 1:] - q @ (q.T @ X[:, 1:])
    X = np.column_stack([X[:, 0], others])
    y = 2 * X[:, 0]
    model = pls.fit(X, y, 1)
    np.testing.assert_allclose(pls.predict(model, X), y, atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_full_rank_equals_ols(seed):
    rng = np.random.default_rng(seed)
    X, y = rng.normal(size=(8, 5)), rng.normal(size=8)
    model = pls.fit(X, y, 5)
    beta, fitted = ols_oracle(X, y)
    np.testing.assert_allclose(model.regression_coefficients, beta, atol=1e-8)
    np.testing.assert_allclose(pls.predict(model, X), fitted, atol=1e-8)


def test_errors():
    X = np.random.default_rng(0).normal(size=(6, 3))
    with pytest.raises(DataError, match="zero-variance"):
        pls.fit(X, np.ones(6), 1)
    with pytest.raises(DataError):
        pls.fit(X, np.arange(6.0), 4)
    with pytest.raises(DataError):
        pls.fit(X, np.arange(5.0), 1)


def test_degenerate_rank():
    rng = np.random.default_rng(1)
    base = rng.normal(size=(10, 2))
    X = base @ rng.normal(size=(2, 6))  # centred rank 2
    with pytest.raises(DegenerateFitError) as info:
        pls.fit(X, rng.normal(size=10), 3)
    assert info.value.achievable == 2


def test_predict_mean_row_and_empty():
    rng = np.random.default_rng(2)
    X, y = rng.normal(size=(9, 4)), rng.normal(size=9)
    model = pls.fit(X, y, 2)
    assert pls.predict(model, X.mean(axis=0))[0] == pytest.approx(y.mean(), abs=1e-12)
    assert pls.predict(model, np.zeros((0, 4))).shape == (0,)
    with pytest.raises(DataError):
        pls.predict(model, np.zeros((2, 3)))


def test_scores_orthogonal():
    rng = np.random.default_rng(3)
    X, y = rng.normal(size=(20, 10)), rng.normal(size=20)
    model = pls.fit(X, y, 6)
    # training scores from the deflation sequence
    E = X - model.x_mean
    T = []
    for a in range(6):
        t = E @ model.weights[:, a]
        T.append(t)
        E = E - np.outer(t, model.x_loadings[:, a])
    G = np.array(T) @ np.array(T).T
    off = G - np.diag(np.diag(G))
    assert np.abs(off).max() < 1e-8 * np.diag(G).max()


def test_training_rmse_monotone():
    rng = np.random.default_rng(4)
    X, y = rng.normal(size=(15, 8)), rng.normal(size=15)
    errs = [np.sqrt(np.mean((pls.predict(pls.fit(X, y, p), X) - y) ** 2)) for p in range(1, 9)]
    assert all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.floats(-3, 3))
def test_prediction_affine(seed, alpha):
    rng = np.random.default_rng(seed)
    X, y = rng.normal(size=(10, 5)), rng.normal(size=10)
    model = pls.fit(X, y, 3)
    x1, x2 = rng.normal(size=5), rng.normal(size=5)
    lhs = pls.predict(model, alpha * x1 + (1 - alpha) * x2)[0]
    rhs = alpha * pls.predict(model, x1)[0] + (1 - alpha) * pls.predict(model, x2)[0]
    assert lhs == pytest.approx(rhs, abs=1e-10 * (1 + abs(alpha)))


def test_deterministic_and_save_load(tmp_path):
    rng = np.random.default_rng(5)
    X, y = rng.normal(size=(12, 7)), rng.normal(size=12)
    a, b = pls.fit(X, y, 4, wavelengths=np.arange(7) + 400), pls.fit(X, y, 4)
    assert a.regression_coefficients.tobytes() == b.regression_coefficients.tobytes()
    pls.save_model(a, tmp_path / "m.csv")
    again = pls.load_model(tmp_path / "m.csv")
    assert again.n_components == 4
    np.testing.assert_array_equal(again.regression_coefficients, a.regression_coefficients)
    np.testing.assert_array_equal(again.weights, a.weights)
    np.testing.assert_array_equal(again.wavelengths, a.wavelengths)
    np.testing.assert_array_equal(pls.predict(again, X), pls.predict(a, X))
