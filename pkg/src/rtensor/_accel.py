"""Hot loops, compiled with numba when available.

Set RTENSOR_NO_NUMBA=1 to run the same functions as plain python/numpy;
both paths consume identical inputs and give identical results.
"""

from __future__ import annotations

import os

import numpy as np

_disabled = os.environ.get("RTENSOR_NO_NUMBA", "").strip() not in ("", "0")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit
    BACKEND = "numba"
except ImportError:
    _njit = None
    BACKEND = "python"


def njit(fn):
    if _njit is None:
        fn.py_func = fn
        return fn
    return _njit(cache=True, nogil=True)(fn)


@njit
def cycle_counts(perms):
    """Number of cycles of each row of an (m, k) permutation array."""
    m, k = perms.shape
    out = np.zeros(m, dtype=np.int64)
    seen = np.zeros(k, dtype=np.bool_)
    for r in range(m):
        seen[:] = False
        n = 0
        for s in range(k):
            if not seen[s]:
                n += 1
                i = s
                while not seen[i]:
                    seen[i] = True
                    i = perms[r, i]
        out[r] = n
    return out


@njit
def face_sums(sigmas, inv_wiring):
    """Sum over colors i of the cycle count of inv_wiring[i] o sigma, per row."""
    m, k = sigmas.shape
    D = inv_wiring.shape[0]
    out = np.zeros(m, dtype=np.int64)
    seen = np.zeros(k, dtype=np.bool_)
    for r in range(m):
        total = 0
        for c in range(D):
            seen[:] = False
            for s in range(k):
                if not seen[s]:
                    total += 1
                    i = s
                    while not seen[i]:
                        seen[i] = True
                        i = inv_wiring[c, sigmas[r, i]]
        out[r] = total
    return out


@njit
def metropolis_sweeps(A, M, normals, uniforms, step, lam, scale, trm, trm2, out_trm, out_trm2):
    """Single-site Metropolis sweeps for the quartic action.

    S = scale * (tr M + lam * tr M^2) with M = A A^dagger.  A and M are
    updated in place; tr M and tr M^2 are tracked incrementally and stored
    after every sweep.  Returns (accepted, tr M, tr M^2).
    """
    n_sweeps = normals.shape[0]
    N, P = A.shape
    accepted = 0
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    newrow = np.empty(N, dtype=np.complex128)
    for s in range(n_sweeps):
        site = 0
        for a in range(N):
            for x in range(P):
                old = A[a, x]
                d = step * inv_sqrt2 * (normals[s, site, 0] + 1j * normals[s, site, 1])
                new = old + d
                d_trm = (new.real * new.real + new.imag * new.imag) - (old.real * old.real + old.imag * old.imag)
                d_trm2 = 0.0
                for b in range(N):
                    if b == a:
                        continue
                    v = M[a, b] + d * np.conj(A[b, x])
                    newrow[b] = v
                    d_trm2 += 2.0 * ((v.real * v.real + v.imag * v.imag)
                                     - (M[a, b].real * M[a, b].real + M[a, b].imag * M[a, b].imag))
                maa = M[a, a].real
                d_trm2 += (maa + d_trm) ** 2 - maa * maa
                dS = scale * (d_trm + lam * d_trm2)
                if dS <= 0.0 or uniforms[s, site] < np.exp(-dS):
                    accepted += 1
                    A[a, x] = new
                    for b in range(N):
                        if b != a:
                            M[a, b] = newrow[b]
                            M[b, a] = np.conj(newrow[b])
                    M[a, a] = maa + d_trm
                    trm += d_trm
                    trm2 += d_trm2
                site += 1
        out_trm[s] = trm
        out_trm2[s] = trm2
    return accepted, trm, trm2
