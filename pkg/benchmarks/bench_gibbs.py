#!/usr/bin/env python3
"""Time the compiled Gibbs kernel against its pure-Python twin.

Both kernels implement the same sweep over the same splitmix64 stream, so
beyond timing them this script asserts their count matrices are
bit-identical — the property that makes the compiled extension a safe
drop-in. Run from a checkout with the package installed:

    python3 benchmarks/bench_gibbs.py
    python3 benchmarks/bench_gibbs.py --docs 300 --iterations 50
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from doris.expansion import _gibbs_py


def synthetic_corpus(n_docs: int, doc_len: int, vocab_size: int,
                     seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened documents with a mild Zipf skew over the vocabulary."""
    rng = np.random.default_rng(seed)
    weights = 1.0 / np.arange(1, vocab_size + 1)
    weights /= weights.sum()
    words = rng.choice(vocab_size, size=n_docs * doc_len,
                       p=weights).astype(np.int32)
    offsets = np.arange(0, (n_docs + 1) * doc_len, doc_len, dtype=np.int64)
    return offsets, words


def run(kernel, offsets, words, args):
    started = time.perf_counter()
    counts = kernel.sample_topic_counts(
        offsets, words, args.topics, args.vocab,
        50.0 / args.topics, 0.01, args.iterations, args.seed)
    return time.perf_counter() - started, counts


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Compare the compiled and pure-Python Gibbs kernels.")
    parser.add_argument("--docs", type=int, default=120)
    parser.add_argument("--doc-len", type=int, default=150)
    parser.add_argument("--vocab", type=int, default=800)
    parser.add_argument("--topics", type=int, default=20)
    parser.add_argument("--iterations", type=int, default=20)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    try:
        from doris.expansion import _gibbs
    except ImportError:
        print("compiled kernel not built (pip install -e . rebuilds it); "
              "nothing to compare")
        return 2

    offsets, words = synthetic_corpus(args.docs, args.doc_len, args.vocab,
                                      args.seed)
    total = len(words) * args.iterations
    print(f"corpus: {args.docs} docs x {args.doc_len} tokens, "
          f"V={args.vocab}, K={args.topics}, {args.iterations} sweeps")

    compiled_time, compiled = run(_gibbs, offsets, words, args)
    python_time, pure = run(_gibbs_py, offsets, words, args)

    for name, a, b in zip(("doc_topic", "topic_word", "topic"),
                          compiled, pure):
        assert np.array_equal(a, b), f"kernels disagree on {name}"
    print("outputs: bit-identical across kernels")

    for name, elapsed in (("cython", compiled_time), ("python", python_time)):
        rate = total / elapsed / 1e6
        print(f"{name:>7}: {elapsed:8.3f} s   {rate:7.2f} M token-updates/s")
    print(f"speedup: {python_time / compiled_time:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
