# cython: boundscheck=False, wraparound=False, cdivision=True, overflowcheck=False
"""Compiled collapsed Gibbs sweep.

Twin of ``_gibbs_py.py``: same splitmix64 stream, same loop order, same
double arithmetic. Compiled with -ffp-contract=off so results stay
bit-identical to the pure-Python kernel.
"""

import numpy as np


cdef extern from *:
    """
    static const unsigned long long DORIS_GOLDEN = 0x9E3779B97F4A7C15ULL;
    static const unsigned long long DORIS_MIX1   = 0xBF58476D1CE4E5B9ULL;
    static const unsigned long long DORIS_MIX2   = 0x94D049BB133111EBULL;
    """
    unsigned long long DORIS_GOLDEN
    unsigned long long DORIS_MIX1
    unsigned long long DORIS_MIX2

cdef double U53 = 1.0 / 9007199254740992.0  # 2^-53


def sample_topic_counts(doc_offsets, words, n_topics, vocab_size,
                        alpha_in, beta_in, iterations_in, seed):
    """See _gibbs_py.sample_topic_counts; identical contract and output."""
    offsets_arr = np.ascontiguousarray(doc_offsets, dtype=np.int64)
    words_arr = np.ascontiguousarray(words, dtype=np.int32)
    cdef long long[:] offsets = offsets_arr
    cdef int[:] word_ids = words_arr
    cdef int n_docs = offsets.shape[0] - 1
    cdef int K = n_topics
    cdef int V = vocab_size
    cdef double alpha = alpha_in
    cdef double beta = beta_in
    cdef int iterations = iterations_in

    ndk_arr = np.zeros(n_docs * K, dtype=np.int32)
    nkw_arr = np.zeros(K * V, dtype=np.int32)
    nk_arr = np.zeros(K, dtype=np.int32)
    assign_arr = np.zeros(word_ids.shape[0], dtype=np.int32)
    scratch_arr = np.zeros(K, dtype=np.float64)
    cdef int[:] ndk = ndk_arr
    cdef int[:] nkw = nkw_arr
    cdef int[:] nk = nk_arr
    cdef int[:] assign = assign_arr
    cdef double[:] scratch = scratch_arr

    cdef unsigned long long state = <unsigned long long>(
        int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long z
    cdef int d, k, k2, new_k, w, base
    cdef long long i
    cdef double total, p, u, cum, vbeta

    for d in range(n_docs):
        base = d * K
        for i in range(offsets[d], offsets[d + 1]):
            state = state + DORIS_GOLDEN
            z = state
            z = (z ^ (z >> 30)) * DORIS_MIX1
            z = (z ^ (z >> 27)) * DORIS_MIX2
            z = z ^ (z >> 31)
            k = <int>(z % <unsigned long long>K)
            assign[i] = k
            ndk[base + k] += 1
            nkw[k * V + word_ids[i]] += 1
            nk[k] += 1

    vbeta = V * beta
    cdef int sweep
    for sweep in range(iterations):
        for d in range(n_docs):
            base = d * K
            for i in range(offsets[d], offsets[d + 1]):
                w = word_ids[i]
                k = assign[i]
                ndk[base + k] -= 1
                nkw[k * V + w] -= 1
                nk[k] -= 1
                total = 0.0
                for k2 in range(K):
                    p = (ndk[base + k2] + alpha) \
                        * (nkw[k2 * V + w] + beta) / (nk[k2] + vbeta)
                    scratch[k2] = p
                    total += p
                state = state + DORIS_GOLDEN
                z = state
                z = (z ^ (z >> 30)) * DORIS_MIX1
                z = (z ^ (z >> 27)) * DORIS_MIX2
                z = z ^ (z >> 31)
                u = <double>(z >> 11) * U53 * total
                new_k = K - 1
                cum = 0.0
                for k2 in range(K):
                    cum += scratch[k2]
                    if u < cum:
                        new_k = k2
                        break
                assign[i] = new_k
                ndk[base + new_k] += 1
                nkw[new_k * V + w] += 1
                nk[new_k] += 1

    return (ndk_arr.reshape(n_docs, K),
            nkw_arr.reshape(K, V),
            nk_arr)
