import os
import subprocess
import sys

import numpy as np

from qglab import kernels
from qglab.spectral import _edge_arrays


def arrays(graph):
    eo, et, ln, _ = _edge_arrays(graph)
    return eo, et, ln, len(graph.vertices)


def test_backend_label():
    assert kernels.BACKEND in ("numpy", "numba")


def test_backends_agree_on_scan(dumbbell):
    eo, et, ln, nv = arrays(dumbbell)
    ks = np.linspace(0.3, 6.0, 57)
    ref = kernels._scan_sigma_min(eo, et, ln, nv, ks)
    act = kernels.scan_sigma_min(eo, et, ln, nv, ks)
    assert np.allclose(np.asarray(act), ref, rtol=0, atol=1e-12)


def test_backends_agree_on_assembly(loop_pendant):
    eo, et, ln, nv = arrays(loop_pendant)
    dim = 2 * len(eo) + nv
    a = np.empty((dim, dim))
    b = np.empty((dim, dim))
    for k in (0.7, 2.0, 6.283):
        kernels._assemble_real(eo, et, ln, nv, k, a)
        kernels.assemble_real(eo, et, ln, nv, k, b)
        assert np.array_equal(a, b) or np.allclose(a, b, atol=1e-15)


def test_env_flag_forces_numpy_backend():
    env = dict(os.environ, QGLAB_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from qglab import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


def test_scan_values_positive(interval_pi):
    eo, et, ln, nv = arrays(interval_pi)
    ks = np.array([0.5, 1.0, 1.5])
    sig = np.asarray(kernels.scan_sigma_min(eo, et, ln, nv, ks))
    assert np.all(sig >= 0)
    # k = 1 is an eigenvalue of the length-pi interval, the others are not
    assert sig[1] < 1e-8
    assert sig[0] > 1e-3 and sig[2] > 1e-3
