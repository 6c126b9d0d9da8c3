# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled collapsed Gibbs kernel.

Must stay arithmetically identical to ``_gibbs_py.py`` (same splitmix64
stream, same operation order) so a seed selects the same model on either
backend.  The build uses -ffp-contract=off to keep float ops unfused.
"""

import numpy as np


cdef unsigned long long _GAMMA = 0x9E3779B97F4A7C15ULL
cdef unsigned long long _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef unsigned long long _MIX2 = 0x94D049BB133111EBULL
cdef double _INV53 = 1.0 / 9007199254740992.0  # 2**-53


cdef inline unsigned long long _next_u64(unsigned long long* state) nogil:
    state[0] = state[0] + _GAMMA
    cdef unsigned long long x = state[0]
    x = (x ^ (x >> 30)) * _MIX1
    x = (x ^ (x >> 27)) * _MIX2
    return x ^ (x >> 31)


def init_assignments(int n_tokens, int k, seed):
    """Uniform initial topic per token; returns (z, rng state after init)."""
    cdef unsigned long long state = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    z_arr = np.empty(n_tokens, dtype=np.int32)
    cdef int[::1] z = z_arr
    cdef int i
    for i in range(n_tokens):
        z[i] = <int> (_next_u64(&state) % <unsigned long long> k)
    return z_arr, int(state)


def run_sweeps(
    int[::1] doc_ids,
    int[::1] word_ids,
    int[::1] z,
    long long[:, ::1] n_dk,
    long long[:, ::1] n_kw,
    long long[::1] n_k,
    double alpha,
    double beta,
    int n_sweeps,
    state,
):
    """Run full Gibbs sweeps in place; returns the advanced rng state."""
    cdef unsigned long long rng = <unsigned long long> (state & 0xFFFFFFFFFFFFFFFF)
    cdef int n = z.shape[0]
    cdef int k = <int> n_k.shape[0]
    cdef double vbeta = n_kw.shape[1] * beta
    cdef double[::1] weights = np.empty(k, dtype=np.float64)
    cdef int sweep, i, d, w, t, tt, new_t
    cdef double total, wt, u, acc

    with nogil:
        for sweep in range(n_sweeps):
            for i in range(n):
                d = doc_ids[i]
                w = word_ids[i]
                t = z[i]
                n_dk[d, t] -= 1
                n_kw[t, w] -= 1
                n_k[t] -= 1

                total = 0.0
                for tt in range(k):
                    wt = (n_dk[d, tt] + alpha) * (n_kw[tt, w] + beta) / (n_k[tt] + vbeta)
                    weights[tt] = wt
                    total += wt

                u = ((_next_u64(&rng) >> 11) * _INV53) * total

                acc = 0.0
                new_t = k - 1
                for tt in range(k):
                    acc += weights[tt]
                    if u < acc:
                        new_t = tt
                        break

                z[i] = new_t
                n_dk[d, new_t] += 1
                n_kw[new_t, w] += 1
                n_k[new_t] += 1

    return int(rng)
