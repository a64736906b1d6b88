"""Compare the compiled and pure-Python profile integrators.

    python benchmarks/bench_rk4.py [--repeat 5] [--M 2048]
"""
import argparse
import timeit

import numpy as np

from epwaves import PressureLaw, WaveParams, wavenumber
from epwaves._rk4_py import integrate_profile as python_kernel
from epwaves.profile import w_dagger

try:
    from epwaves._rk4 import integrate_profile as compiled_kernel
except ImportError:
    compiled_kernel = None


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--M", type=int, default=2048)
    args = parser.parse_args()

    law, V, delta = PressureLaw(0.25, 2.0), 1.0, 0.05
    params = WaveParams(law, delta, V)
    k = wavenumber(law, delta, V)
    start = (0.0, delta * w_dagger(law, delta, V) / k)
    call = lambda kernel: kernel(start[0], start[1], k, args.M, V, law.T, law.gamma)

    kernels = {"python": python_kernel}
    if compiled_kernel is not None:
        kernels["cython"] = compiled_kernel
    timings = {}
    for name, kernel in kernels.items():
        best = min(timeit.repeat(lambda: call(kernel), number=1, repeat=args.repeat))
        timings[name] = best
        print(f"{name:>7}: {best * 1e3:9.3f} ms per profile (M={args.M}, mu={params.mu:.3g})")
    if len(timings) == 2:
        a, b = call(python_kernel), call(compiled_kernel)
        same = all(np.array_equal(x, y) for x, y in zip(a[:2], b[:2]))
        print(f"speed-up {timings['python'] / timings['cython']:.1f}x, identical output: {same}")
    else:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
