"""Compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each line reports the best of N wall-clock timings per backend and the
speed-up.  Both backends are imported directly, so no environment variable
is needed.
"""

import argparse
import sys
import timeit

import numpy as np

from snhorseshoe import _fallback
from snhorseshoe.config import build_models, default_config
from snhorseshoe.hyperbolicity import build_cover, vertical_bounds

try:
    from snhorseshoe import _kernels
except ImportError:
    _kernels = None


def cases(gm, hs):
    tab_small = gm.table(1e-5)
    tab = gm.table(0.01)
    ys = np.linspace(-0.4, 0.45, 200_000)
    cover = build_cover(hs, 0.008, 10)
    logd = np.log(vertical_bounds(hs, cover))
    return {
        "passage_count mu=1e-5": lambda k: k.passage_count(tab_small, gm.a, gm.b, 10**8),
        "deriv_product n=950": lambda k: k.deriv_product(tab_small, gm.a, 950),
        "escape_count x1000": lambda k: [k.escape_count(tab, y, gm.a, False, 10**7)
                                         for y in np.linspace(-0.35, -0.26, 1000)],
        "f_eval_array 2e5": lambda k: k.f_eval_array(tab, ys),
        "f_deriv_array 2e5": lambda k: k.f_deriv_array(tab, ys),
        "minplus_values 50 steps": lambda k: k.minplus_values(cover.indptr, cover.indices,
                                                              logd, 50),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1
    gm, _, hs = build_models(default_config())
    print("%-26s %12s %12s %9s" % ("kernel", "cython [s]", "python [s]", "speed-up"))
    for name, fn in cases(gm, hs).items():
        t_c = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        t_p = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        print("%-26s %12.5f %12.5f %8.1fx" % (name, t_c, t_p, t_p / t_c))
    return 0


if __name__ == "__main__":
    sys.exit(main())
