"""Timing comparison of the compiled and pure-numpy kernel backends.

Runs each hot kernel on a representative workload under both
implementations, reports per-call times and the speedup, and verifies
that the two backends agree on the outputs.  The numba path includes a
warmup call so compilation time is not billed to the measurement.

Usage: python benchmarks/kernel_bench.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hardylab.geometry import build_spiral_domain
from hardylab.kernels import numba_impl, numpy_impl
from hardylab.modulus import _family_matrix, radial_family


def _time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _workloads(rng):
    sd = build_spiral_domain(alpha=0.0, loops=12)
    dom = sd.domain
    vx, vy = dom._vx, dom._vy
    n_pts = 20000
    box = dom.bbox()
    px = rng.uniform(box[0], box[1], n_pts)
    py = rng.uniform(box[2], box[3], n_pts)

    n_seg = 1200
    idx = rng.integers(0, vx.size - 1, 2 * n_seg)
    sx, sy = vx[idx[:n_seg]], vy[idx[:n_seg]]
    tx, ty = vx[idx[n_seg:]], vy[idx[n_seg:]]
    ia = idx[:n_seg].astype(np.int64)
    ib = idx[n_seg:].astype(np.int64)

    fam = radial_family(1.0 / np.e, None, 256)
    h = 0.02
    mat, (_, _, _, mnx, mny) = _family_matrix(fam, h)
    indptr = mat.indptr.astype(np.int64)
    indices = mat.indices.astype(np.int64)
    vals = mat.data
    rownorm2 = np.asarray(mat.multiply(mat).sum(axis=1)).ravel()
    lam0 = np.zeros(indptr.size - 1)
    rho0 = np.zeros(mnx * mny)

    x0, y0 = box[0], box[2]
    nx = int(np.ceil((box[1] - box[0]) / h)) + 2
    ny = int(np.ceil((box[3] - box[2]) / h)) + 2

    return {
        "winding_numbers": (px, py, vx, vy),
        "min_edge_distances": (px, py, vx, vy),
        "segments_clear": (sx, sy, tx, ty, ia, ib, vx, vy, 8),
        "raster_segments": (sx, sy, tx, ty, x0, y0, h, nx, ny),
        "hildreth_sweep": (indptr, indices, vals, rownorm2,
                           lam0, rho0, h * h, 40),
    }


def _agree(name, a, b):
    if name == "hildreth_sweep":
        return abs(a - b) < 1e-9
    if name == "raster_segments":
        return all(np.allclose(x, y) for x, y in zip(a, b))
    return np.allclose(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(7)
    loads = _workloads(rng)

    if numba_impl is None:
        print("numba backend unavailable; timing numpy only")
    rows = []
    for name, wargs in loads.items():
        np_fn = getattr(numpy_impl, name)
        # hildreth mutates lam/rho in place, give each backend a copy
        def fresh():
            return tuple(np.array(a, copy=True) if isinstance(a, np.ndarray)
                         else a for a in wargs)

        t_np, out_np = _time(np_fn, fresh(), args.repeat)
        if numba_impl is not None:
            nb_fn = getattr(numba_impl, name)
            nb_fn(*fresh())
            t_nb, out_nb = _time(nb_fn, fresh(), args.repeat)
            ok = _agree(name, out_np, out_nb)
            rows.append((name, t_np, t_nb, t_np / t_nb, ok))
        else:
            rows.append((name, t_np, float("nan"), float("nan"), True))

    print(f"{'kernel':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}  agree")
    for name, t_np, t_nb, sp, ok in rows:
        print(f"{name:<20} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms "
              f"{sp:>7.1f}x  {'yes' if ok else 'NO'}")
    if not all(r[4] for r in rows):
        raise SystemExit("backend outputs disagree")


if __name__ == "__main__":
    main()
