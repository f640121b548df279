"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--number 20]

Prints one line per kernel with the best time per call for each backend.
"""

import argparse
import timeit

import numpy as np

from projclust import frames, kernels, tones


def cases(rng):
    fr = tones.spectral_frame()
    V = fr.vectors
    data, idx, ptr = V.data, V.indices.astype(np.intp), V.indptr.astype(np.intp)
    d_spec = rng.standard_normal(tones.N_BINS)
    small = np.ascontiguousarray(rng.standard_normal((30, 10)))
    d_small = rng.standard_normal(10)
    dense = np.ascontiguousarray(rng.standard_normal((4000, 64)))
    d_dense = rng.standard_normal(64)
    X = np.ascontiguousarray(rng.uniform(0, 10, (300, 35)))
    active = np.ones(300, dtype=np.uint8)
    q = rng.uniform(0, 10, 35)
    ref = tones.reference_set(2).vectors[9]
    return {
        "sup_abs_csr (44100 x 22050)": lambda: kernels.sup_abs_csr(data, idx, ptr, d_spec),
        "sup_abs_dense (30 x 10)": lambda: kernels.sup_abs_dense(small, d_small),
        # routed to BLAS on both backends, see kernels.DENSE_BLAS_MIN
        "sup_abs_dense (4000 x 64)": lambda: kernels.sup_abs_dense(dense, d_dense),
        "nearest sqnorm (300 x 35)": lambda: kernels.nearest(X, active, q, "sqnorm"),
        "nearest F (300 x 35)": lambda: kernels.nearest(X, active, q, "F"),
        "delta vs one tone": lambda: frames.delta(fr, d_spec, ref),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    args = ap.parse_args()

    backends = ["python"] + (["compiled"] if kernels.compiled_available() else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the fallback only")
    bench = cases(np.random.default_rng(0))
    prev = kernels.backend()
    print(f"{'kernel':32s}" + "".join(f"{b:>14s}" for b in backends) + "   speedup")
    try:
        for name, fn in bench.items():
            times = []
            for b in backends:
                kernels.use_backend(b)
                fn()  # warm caches
                best = min(timeit.repeat(fn, repeat=args.repeat, number=args.number)) / args.number
                times.append(best)
            row = f"{name:32s}" + "".join(f"{t * 1e6:12.1f}us" for t in times)
            if len(times) == 2:
                row += f"   {times[0] / times[1]:6.1f}x"
            print(row)
    finally:
        kernels.use_backend(prev)


if __name__ == "__main__":
    main()
