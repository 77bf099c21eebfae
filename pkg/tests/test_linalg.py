import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymfield.errors import SingularSystemError
from asymfield.linalg import gauss_solve


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 3 * np.eye(n)
    b = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    x = np.asarray(gauss_solve(a.tolist(), b.tolist()))
    np.testing.assert_allclose(x, np.linalg.solve(a, b), rtol=1e-10, atol=1e-12)


def test_needs_pivoting():
    a = [[0, 1], [1, 0]]
    x = np.asarray(gauss_solve(a, [[2], [3]]))
    np.testing.assert_allclose(x.ravel(), [3, 2])


def test_singular_reports_pivot():
    with pytest.raises(SingularSystemError) as info:
        gauss_solve([[1, 2], [2, 4]], [[1], [1]])
    assert info.value.pivot is not None
    assert abs(info.value.pivot) < 1e-12
