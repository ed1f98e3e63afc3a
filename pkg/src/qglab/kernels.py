"""Hot numeric kernel: smallest singular value of the secular system on a
wavenumber grid.

Two interchangeable backends: a numba @njit build (default when numba is
importable) and a pure-numpy fallback.  Set QGLAB_NO_NUMBA=1 to force the
numpy path; `BACKEND` records which one is active.  Both are exercised by
the test suite and compared in benchmarks/bench_scan.py.
"""

from __future__ import annotations

import os

import numpy as np


def _assemble_real(eo, et, lengths, n_vertices, k, out):
    """Fill `out` with the secular matrix at wavenumber k > 0.

    Unknown layout: a_e = col 2e, b_e = col 2e+1, c_v = col 2*nE + v.
    Rows: value at origin, value at terminus per edge; derivative balance
    per vertex (divided by k so entries stay O(1)).
    """
    n_edges = eo.shape[0]
    out[:, :] = 0.0
    for e in range(n_edges):
        cl = np.cos(k * lengths[e])
        sl = np.sin(k * lengths[e])
        out[2 * e, 2 * e] = 1.0
        out[2 * e, 2 * n_edges + eo[e]] = -1.0
        out[2 * e + 1, 2 * e] = cl
        out[2 * e + 1, 2 * e + 1] = sl
        out[2 * e + 1, 2 * n_edges + et[e]] = -1.0
        r_t = 2 * n_edges + et[e]
        r_o = 2 * n_edges + eo[e]
        out[r_t, 2 * e] += -sl
        out[r_t, 2 * e + 1] += cl
        out[r_o, 2 * e + 1] -= 1.0


def _scan_sigma_min(eo, et, lengths, n_vertices, ks):
    n_edges = eo.shape[0]
    dim = 2 * n_edges + n_vertices
    a = np.empty((dim, dim))
    out = np.empty(ks.shape[0])
    for i in range(ks.shape[0]):
        _assemble_real(eo, et, lengths, n_vertices, ks[i], a)
        s = np.linalg.svd(a.copy())[1]
        out[i] = s[s.shape[0] - 1]
    return out


BACKEND = "numpy"
scan_sigma_min = _scan_sigma_min
assemble_real = _assemble_real

if not os.environ.get("QGLAB_NO_NUMBA"):
    try:
        from numba import njit

        assemble_real = njit(cache=True)(_assemble_real)

        @njit(cache=True)
        def _scan_jit(eo, et, lengths, n_vertices, ks):  # pragma: no cover
            n_edges = eo.shape[0]
            dim = 2 * n_edges + n_vertices
            a = np.empty((dim, dim))
            out = np.empty(ks.shape[0])
            for i in range(ks.shape[0]):
                assemble_real(eo, et, lengths, n_vertices, ks[i], a)
                s = np.linalg.svd(a.copy())[1]
                out[i] = s[s.shape[0] - 1]
            return out

        scan_sigma_min = _scan_jit
        BACKEND = "numba"
    except ImportError:
        pass
