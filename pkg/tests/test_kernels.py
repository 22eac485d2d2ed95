"""Backend parity: the compiled kernels must match the pure-NumPy source."""

import numpy as np
import pytest

from bochnerproj import _kernels

IMPLS = _kernels.implementations()
HAS_NUMBA = IMPLS["numba"] is not None

pytestmark = pytest.mark.skipif(
    not HAS_NUMBA, reason="numba backend unavailable; nothing to compare"
)


def test_row_norms_parity():
    rng = np.random.default_rng(81)
    for rho in (1.5, 2.0, 3.0):
        vals = rng.standard_normal((7, 3))
        a = IMPLS["numpy"]["row_norms"](vals, rho)
        b = IMPLS["numba"]["row_norms"](vals, rho)
        assert np.allclose(a, b, atol=1e-15, rtol=1e-15)


def test_lp_norm_parity():
    rng = np.random.default_rng(82)
    w = rng.uniform(0.3, 2.0, 6)
    for p, rho in [(1.5, 3.0), (2.0, 2.0), (3.0, 1.5)]:
        vals = rng.standard_normal((6, 2))
        a = IMPLS["numpy"]["lp_norm"](w, vals, rho, p)
        b = IMPLS["numba"]["lp_norm"](w, vals, rho, p)
        assert a == pytest.approx(b, rel=1e-14, abs=1e-15)


def test_batch_penalty_parity():
    rng = np.random.default_rng(83)
    w = rng.uniform(0.3, 2.0, 4)
    diffs = rng.standard_normal((100, 4, 3))
    for p, rho in [(1.5, 3.0), (3.0, 1.5)]:
        a = IMPLS["numpy"]["batch_penalty"](w, diffs, rho, p)
        b = IMPLS["numba"]["batch_penalty"](w, diffs, rho, p)
        assert np.allclose(a, b, atol=1e-13, rtol=1e-13)


def test_barrier_solve_parity():
    rng = np.random.default_rng(84)
    bw = np.asarray([10.0 ** (-k) for k in range(1, 13)])
    for p, rho in [(2.0, 2.0), (1.5, 3.0), (3.0, 1.5)]:
        k, d = 3, 2
        gact = rng.standard_normal((k, d)) * 2.0
        cact = rng.standard_normal((k, d)) * 0.2
        wact = rng.uniform(0.3, 2.0, k)
        cons = np.ones(k)
        z_np, *_ = IMPLS["numpy"]["barrier_solve"](
            gact, cact, wact, cons, rho, p, 0.8 ** p, bw, 1e-13, 1e-15, 20000
        )
        z_nb, *_ = IMPLS["numba"]["barrier_solve"](
            gact, cact, wact, cons, rho, p, 0.8 ** p, bw, 1e-13, 1e-15, 20000
        )
        assert np.allclose(z_np, z_nb, atol=1e-9)


def test_backend_resolution_env_override():
    import subprocess
    import sys

    code = (
        "import os; os.environ['BOCHNERPROJ_BACKEND']='numpy'; "
        "from bochnerproj import _kernels; print(_kernels.BACKEND)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"
