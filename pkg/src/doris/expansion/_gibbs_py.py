"""Pure-Python collapsed Gibbs sweep.

Fallback twin of the compiled kernel in ``_gibbs.pyx``. The two must stay
bit-identical: same splitmix64 stream, same loop order, same double
arithmetic (the extension is compiled with FP contraction off for this
reason). Any change here must be mirrored there.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_U53 = 1.0 / 9007199254740992.0  # 2^-53


def sample_topic_counts(doc_offsets, words, n_topics, vocab_size,
                        alpha, beta, iterations, seed):
    """Run ``iterations`` full Gibbs sweeps over flattened documents.

    doc_offsets: M+1 ints; words: token word-ids, doc d occupying
    words[doc_offsets[d]:doc_offsets[d+1]]. Returns int32 count matrices
    (doc_topic (M,K), topic_word (K,V), topic (K,)).
    """
    offsets = [int(x) for x in doc_offsets]
    word_ids = [int(x) for x in words]
    n_docs = len(offsets) - 1
    K = int(n_topics)
    V = int(vocab_size)
    alpha = float(alpha)
    beta = float(beta)
    ndk = [0] * (n_docs * K)
    nkw = [0] * (K * V)
    nk = [0] * K
    assign = [0] * len(word_ids)
    state = int(seed) & MASK64

    for d in range(n_docs):
        base = d * K
        for i in range(offsets[d], offsets[d + 1]):
            state = (state + _GOLDEN) & MASK64
            z = state
            z = ((z ^ (z >> 30)) * _MIX1) & MASK64
            z = ((z ^ (z >> 27)) * _MIX2) & MASK64
            z = z ^ (z >> 31)
            k = z % K
            assign[i] = k
            ndk[base + k] += 1
            nkw[k * V + word_ids[i]] += 1
            nk[k] += 1

    vbeta = V * beta
    scratch = [0.0] * K
    for _ in range(iterations):
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
                state = (state + _GOLDEN) & MASK64
                z = state
                z = ((z ^ (z >> 30)) * _MIX1) & MASK64
                z = ((z ^ (z >> 27)) * _MIX2) & MASK64
                z = z ^ (z >> 31)
                u = (z >> 11) * _U53 * total
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

    return (np.array(ndk, dtype=np.int32).reshape(n_docs, K),
            np.array(nkw, dtype=np.int32).reshape(K, V),
            np.array(nk, dtype=np.int32))
