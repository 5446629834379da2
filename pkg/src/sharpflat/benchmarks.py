"""Benchmark the compiled kernels against the pure-Python fallback.

Three workloads exercise the hot loops: the trace-scan raster row, the
limit-set DFS, and the crossing-candidate product.  Results print as a
table with speedups; with no compiled extension only the fallback runs.
"""

from __future__ import annotations

import time

import numpy as np

from . import _kernels
from .hyperbolic import standard_fuchsian, axis, axis_param, translation_length
from .kleinian import markov_third_trace, ptor_group
from .words import SurfaceSpec, cyclic_reduce


def _scan_workload(kern):
    xs = np.array([complex(1.0 + 4.0 * i / 255.0, 0.3) for i in range(256)])
    zs = np.array([markov_third_trace(x, 3.0) for x in xs])
    for _ in range(4):
        kern.bq_row(xs, complex(3.0), zs, 10, 1e-9)


def _limset_workload(kern):
    group = ptor_group(3.0, 3.0, "minus")
    letters = group.letters()
    gen_mats = np.array([[g.a, g.b, g.c, g.d] for g in letters], dtype=complex)
    from .mobius import fixed_points
    anchors = np.zeros((4, 3), dtype=complex)
    for k in range(4):
        pts = [fixed_points(letters[k2])[0] for k2 in range(4) if k2 != (k ^ 1)]
        anchors[k] = [complex(1e300) if isinstance(p, float) else p for p in pts]
    kern.limit_set_points(gen_mats, anchors, 2e-3, 14, 500_000)


def _crossing_workload(kern):
    model = standard_fuchsian(2)
    S = model.surface
    c = cyclic_reduce("a1 b1", S)
    d = cyclic_reduce("a1 B1", S)
    mat_c = model.word_matrix(c.letters)
    mat_d = model.word_matrix(d.letters)
    att_c, rep_c = axis(mat_c)
    att_d, rep_d = axis(mat_d)
    ell_c = translation_length(mat_c[0, 0] + mat_c[1, 1])
    base_t = axis_param(complex(0, 1), rep_c, att_c)
    gens = []
    for idx in range(model.surface.rank):
        for sign in (1, -1):
            gens.append(model.letter_matrix((idx, sign)).reshape(4))
    kern.oracle_count(np.array(gens), float(rep_c), float(att_c),
                      float(base_t), float(base_t + ell_c),
                      float(rep_d), float(att_d), 6)


WORKLOADS = [
    ("trace scan rows", _scan_workload),
    ("limit-set DFS", _limset_workload),
    ("crossing oracle", _crossing_workload),
]


def run(repeat: int = 3, out=None):
    import sys
    out = out or sys.stdout
    kernels = [("pure", _kernels.pure)]
    if _kernels.HAVE_COMPILED:
        kernels.append(("compiled", _kernels._core))
    else:
        print("compiled kernels not built; timing the fallback only", file=out)
    results = {}
    for kname, kern in kernels:
        for wname, fn in WORKLOADS:
            best = min(_time(fn, kern) for _ in range(repeat))
            results[(kname, wname)] = best
    header = f"{'workload':<18}" + "".join(f"{k:<12}" for k, _ in kernels)
    if _kernels.HAVE_COMPILED:
        header += "speedup"
    print(header, file=out)
    for wname, _ in WORKLOADS:
        row = f"{wname:<18}"
        for kname, _ in kernels:
            row += f"{results[(kname, wname)]:<12.4f}"
        if _kernels.HAVE_COMPILED:
            ratio = results[("pure", wname)] / results[("compiled", wname)]
            row += f"{ratio:.1f}x"
        print(row, file=out)
    return results


def _time(fn, kern):
    t0 = time.perf_counter()
    fn(kern)
    return time.perf_counter() - t0
