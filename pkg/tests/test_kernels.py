"""Backend agreement between the compiled kernels and the NumPy fallback."""

import numpy as np
import pytest

from tailfolio import _kernels
from tailfolio._kernels import fallback

compiled = pytest.importorskip(
    "tailfolio._kernels._core", reason="compiled kernels not built"
)


def test_backend_is_reported():
    assert _kernels.BACKEND in ("cython", "numpy")


def test_quartic_accumulate_backends_agree(rng):
    for _ in range(20):
        t = int(rng.integers(10, 400))
        n = int(rng.integers(1, 9))
        x = np.ascontiguousarray(rng.laplace(size=(t, n)))
        w = rng.standard_normal(n)
        vec_c, m2_c, m4_c = compiled.quartic_accumulate(x, w)
        vec_f, m2_f, m4_f = fallback.quartic_accumulate(x, w)
        scale = max(abs(m4_c), 1.0)
        assert np.max(np.abs(np.asarray(vec_c) - vec_f)) < 1e-10 * scale
        assert m2_c == pytest.approx(m2_f, rel=1e-10)
        assert m4_c == pytest.approx(m4_f, rel=1e-10)


def test_quartic_accumulate_against_definition(rng):
    x = np.ascontiguousarray(rng.laplace(size=(200, 3)))
    w = rng.standard_normal(3)
    u = x @ w
    vec, m2, m4 = _kernels.quartic_accumulate(x, w)
    assert np.asarray(vec) == pytest.approx(x.T @ u**3 / 200, rel=1e-12)
    assert m2 == pytest.approx(float(np.mean(u**2)), rel=1e-12)
    assert m4 == pytest.approx(float(np.mean(u**4)), rel=1e-12)


def test_max_drawdown_backends_agree(rng):
    for _ in range(50):
        curve = np.ascontiguousarray(
            np.cumprod(1.0 + rng.standard_normal(int(rng.integers(2, 500))) * 0.05)
        )
        assert compiled.max_drawdown_scan(curve) == pytest.approx(
            fallback.max_drawdown_scan(curve), abs=1e-14
        )


def test_fallback_env_override(monkeypatch, rng):
    # re-import the dispatcher with the override set
    import importlib

    monkeypatch.setenv("TAILFOLIO_FORCE_FALLBACK", "1")
    module = importlib.reload(_kernels)
    try:
        assert module.BACKEND == "numpy"
    finally:
        monkeypatch.delenv("TAILFOLIO_FORCE_FALLBACK")
        importlib.reload(module)
