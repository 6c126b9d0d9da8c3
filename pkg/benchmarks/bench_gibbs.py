#!/usr/bin/env python3
"""Benchmark the compiled Gibbs kernel against the pure-Python fallback.

Both backends share one rng stream, so besides timing this doubles as an
end-to-end parity check: the final assignments must be identical.

    python benchmarks/bench_gibbs.py --docs 200 --doc-len 60 --vocab 500 --k 20
"""

import argparse
import time

import numpy as np

from shopminer.lda import _gibbs_py

try:
    from shopminer.lda import _gibbs
except ImportError:
    _gibbs = None


def synthetic(rng, n_docs, doc_len, n_terms):
    doc_ids = np.repeat(np.arange(n_docs, dtype=np.int32), doc_len)
    word_ids = rng.integers(0, n_terms, size=n_docs * doc_len).astype(np.int32)
    return doc_ids, word_ids


def run(impl, doc_ids, word_ids, n_docs, n_terms, k, alpha, beta, iterations, seed):
    z, state = impl.init_assignments(len(word_ids), k, seed)
    n_dk = np.zeros((n_docs, k), dtype=np.int64)
    n_kw = np.zeros((k, n_terms), dtype=np.int64)
    np.add.at(n_dk, (doc_ids, z), 1)
    np.add.at(n_kw, (z, word_ids), 1)
    n_k = np.bincount(z, minlength=k).astype(np.int64)
    started = time.perf_counter()
    impl.run_sweeps(doc_ids, word_ids, z, n_dk, n_kw, n_k, alpha, beta, iterations, state)
    elapsed = time.perf_counter() - started
    return z, elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--doc-len", type=int, default=60)
    parser.add_argument("--vocab", type=int, default=500)
    parser.add_argument("--k", type=int, default=20)
    parser.add_argument("--iterations", type=int, default=50)
    parser.add_argument("--python-iterations", type=int, default=None,
                        help="fewer sweeps for the slow backend (default: same)")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    doc_ids, word_ids = synthetic(rng, args.docs, args.doc_len, args.vocab)
    n_tokens = len(word_ids)
    alpha, beta = 5.0 / args.k, 0.01
    print(f"corpus: {args.docs} docs x {args.doc_len} tokens = {n_tokens} tokens, "
          f"V={args.vocab}, k={args.k}")

    py_iters = args.python_iterations or args.iterations
    z_py, t_py = run(_gibbs_py, doc_ids, word_ids, args.docs, args.vocab,
                     args.k, alpha, beta, py_iters, args.seed)
    py_rate = py_iters * n_tokens / t_py
    print(f"python : {py_iters:4d} sweeps in {t_py:8.3f}s  ({py_rate/1e6:7.2f} M tokens/s)")

    if _gibbs is None:
        print("cython : extension not built (pip install -e . --no-build-isolation)")
        return

    z_cy, t_cy = run(_gibbs, doc_ids, word_ids, args.docs, args.vocab,
                     args.k, alpha, beta, args.iterations, args.seed)
    cy_rate = args.iterations * n_tokens / t_cy
    print(f"cython : {args.iterations:4d} sweeps in {t_cy:8.3f}s  ({cy_rate/1e6:7.2f} M tokens/s)")
    print(f"speedup: {cy_rate / py_rate:.1f}x")

    if py_iters == args.iterations:
        match = np.array_equal(z_py, z_cy)
        print(f"parity : final assignments identical = {match}")
        if not match:
            raise SystemExit("backends diverged; kernels are out of sync")


if __name__ == "__main__":
    main()
