"""Compare the compiled kernels with the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--sizes 100 400 1600] [--repeat 5]

For each kernel and sample size it prints the best-of-``repeat`` wall time
per backend, the speed-up, and the largest difference between the two
results relative to the largest result. A full dependence curve (100 grid
points) is timed too.
"""
import argparse
import timeit

import numpy as np

from maxhunt import _backend
from maxhunt.dcov import dependence_curve
from maxhunt.simulation import RngStream, get_model, sample_model


def cases(n, rng):
    x = rng.normal(size=(n, 3))
    labels = _backend.as_labels(rng.integers(0, 2, n))
    w = rng.normal(size=n)
    q = rng.normal(size=(200, 3))
    return {
        "pair_distance_sums": lambda k: k.pair_distance_sums(x, labels),
        "weighted_distance_sum": lambda k: k.weighted_distance_sum(x, w),
        "dcov_dc": lambda k: k.dcov_dc(x, _backend.as_matrix(labels.astype(float))),
        "sq_euclidean": lambda k: k.sq_euclidean(q, x),
    }


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 400, 1600])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = _backend.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<24}{'n':>6}" + "".join(f"{b:>12}" for b in backends)
          + f"{'speed-up':>10}{'rel diff':>11}")
    for n in args.sizes:
        for name, call in cases(n, rng).items():
            times, results = {}, {}
            for b in backends:
                kern = _backend.kernels(b)
                results[b] = np.asarray(call(kern), dtype=float)
                times[b] = best_time(lambda: call(kern), args.repeat)
            ratio = times["python"] / times["compiled"] if "compiled" in times else 1.0
            diff = (np.abs(results["python"] - results["compiled"]).max()
                    / max(np.abs(results["python"]).max(), 1e-300)
                    if "compiled" in results else 0.0)
            print(f"{name:<24}{n:>6}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
                  + f"{ratio:>9.1f}x{diff:>11.1e}")

    ds = sample_model(get_model("prop1"), 400, RngStream(0).generator())
    for measure, estimator in (("V2", "U"), ("V2", "V"), ("R2", "DC")):
        line = f"{'curve ' + measure + '/' + estimator:<24}{ds.n:>6}"
        times = {}
        for b in backends:
            with _backend.use_backend(b):
                times[b] = best_time(lambda: dependence_curve(ds, measure, estimator), 3)
            line += f"{times[b] * 1e3:>10.2f}ms"
        if "compiled" in times:
            line += f"{times['python'] / times['compiled']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
