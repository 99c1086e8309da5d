"""Numba-compiled twins of the kernels in ``_numpy``.

Same signatures and semantics; loops are flattened for @njit and the
outer batch loops run under prange.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _winding_one(x, y, vx, vy):
    n = vx.size
    wn = 0
    for e in range(n):
        x0 = vx[e]
        y0 = vy[e]
        x1 = vx[(e + 1) % n]
        y1 = vy[(e + 1) % n]
        if y0 <= y < y1:
            if (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0) > 0:
                wn += 1
        elif y1 <= y < y0:
            if (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0) < 0:
                wn -= 1
    return wn


@njit(cache=True, parallel=True)
def winding_numbers(px, py, vx, vy):
    out = np.zeros(px.size, dtype=np.int64)
    for k in prange(px.size):
        out[k] = _winding_one(px[k], py[k], vx, vy)
    return out


@njit(cache=True, parallel=True)
def min_edge_distances(px, py, vx, vy):
    n = vx.size
    out = np.empty(px.size)
    for k in prange(px.size):
        x = px[k]
        y = py[k]
        best = 1e300
        for e in range(n):
            x0 = vx[e]
            y0 = vy[e]
            ex = vx[(e + 1) % n] - x0
            ey = vy[(e + 1) % n] - y0
            L2 = ex * ex + ey * ey
            if L2 > 0.0:
                t = ((x - x0) * ex + (y - y0) * ey) / L2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            dx = x - (x0 + t * ex)
            dy = y - (y0 + t * ey)
            d2 = dx * dx + dy * dy
            if d2 < best:
                best = d2
        out[k] = np.sqrt(best)
    return out


@njit(cache=True)
def _segment_clear_one(sx, sy, tx, ty, ia, ib, vx, vy, nchecks):
    n = vx.size
    dx = tx - sx
    dy = ty - sy
    scale = abs(dx) + abs(dy) + 1e-300
    teps = 1e-12 * scale
    sa = ia % n if ia >= 0 else -1
    sb = (ia - 1) % n if ia >= 0 else -1
    sc = ib % n if ib >= 0 else -1
    sd = (ib - 1) % n if ib >= 0 else -1
    for e in range(n):
        if e == sa or e == sb or e == sc or e == sd:
            continue
        x0 = vx[e]
        y0 = vy[e]
        x1 = vx[(e + 1) % n]
        y1 = vy[(e + 1) % n]
        d1 = dx * (y0 - sy) - dy * (x0 - sx)
        d2 = dx * (y1 - sy) - dy * (x1 - sx)
        ex = x1 - x0
        ey = y1 - y0
        eeps = 1e-12 * (abs(ex) + abs(ey) + 1e-300)
        d3 = ex * (sy - y0) - ey * (sx - x0)
        d4 = ex * (ty - y0) - ey * (tx - x0)
        ss = ((d1 < -teps and d2 > teps) or (d2 < -teps and d1 > teps)
              or abs(d1) <= teps or abs(d2) <= teps)
        if not ss:
            continue
        se = ((d3 < -eeps and d4 > eeps) or (d4 < -eeps and d3 > eeps)
              or abs(d3) <= eeps or abs(d4) <= eeps)
        if not se:
            continue
        lo1 = min(sx, tx) - teps
        hi1 = max(sx, tx) + teps
        lo2 = min(x0, x1)
        hi2 = max(x0, x1)
        if hi1 < lo2 or hi2 < lo1:
            continue
        lo1 = min(sy, ty) - teps
        hi1 = max(sy, ty) + teps
        lo2 = min(y0, y1)
        hi2 = max(y0, y1)
        if hi1 < lo2 or hi2 < lo1:
            continue
        return False
    for q in range(1, nchecks + 1):
        t = q / (nchecks + 1.0)
        if _winding_one(sx + t * dx, sy + t * dy, vx, vy) != 1:
            return False
    return True


@njit(cache=True, parallel=True)
def segments_clear(ax, ay, bx, by, ia, ib, vx, vy, nchecks):
    out = np.zeros(ax.size, dtype=np.bool_)
    for k in prange(ax.size):
        out[k] = _segment_clear_one(ax[k], ay[k], bx[k], by[k],
                                    ia[k], ib[k], vx, vy, nchecks)
    return out


@njit(cache=True)
def _trace_one(sx, sy, tx, ty, x0, y0, h, nx, ny, cells, lens, base, counts, k):
    dx = tx - sx
    dy = ty - sy
    seglen = np.hypot(dx, dy)
    if seglen == 0.0:
        counts[k] = 0
        return
    i = int(np.floor((sx - x0) / h))
    j = int(np.floor((sy - y0) / h))
    stepi = 1 if dx > 0 else -1
    stepj = 1 if dy > 0 else -1
    tdx = abs(h / dx) if dx != 0 else 1e300
    tdy = abs(h / dy) if dy != 0 else 1e300
    if dx > 0:
        tmx = ((i + 1) * h + x0 - sx) / dx
    elif dx < 0:
        tmx = (i * h + x0 - sx) / dx
    else:
        tmx = 1e300
    if dy > 0:
        tmy = ((j + 1) * h + y0 - sy) / dy
    elif dy < 0:
        tmy = (j * h + y0 - sy) / dy
    else:
        tmy = 1e300
    tprev = 0.0
    c = 0
    cap = cells.size - base
    for _ in range(4 * (nx + ny) + 8):
        tnext = min(min(tmx, tmy), 1.0)
        if 0 <= i < nx and 0 <= j < ny and tnext > tprev and c < cap:
            cells[base + c] = j * nx + i
            lens[base + c] = (tnext - tprev) * seglen
            c += 1
        if tnext >= 1.0:
            break
        if tmx <= tmy:
            i += stepi
            tprev = tnext
            tmx += tdx
        else:
            j += stepj
            tprev = tnext
            tmy += tdy
        if tprev >= 1.0:
            break
    counts[k] = c


@njit(cache=True)
def raster_segments(ax, ay, bx, by, x0, y0, h, nx, ny):
    nseg = ax.size
    offsets = np.zeros(nseg + 1, dtype=np.int64)
    for k in range(nseg):
        offsets[k + 1] = offsets[k] + int(abs(bx[k] - ax[k]) / h + abs(by[k] - ay[k]) / h + 4.0)
    cells = np.full(offsets[nseg], -1, dtype=np.int64)
    lens = np.zeros(offsets[nseg])
    counts = np.zeros(nseg, dtype=np.int64)
    for k in range(nseg):
        _trace_one(ax[k], ay[k], bx[k], by[k], x0, y0, h, nx, ny,
                   cells, lens, offsets[k], counts, k)
    total = 0
    for k in range(nseg):
        total += counts[k]
    ccells = np.empty(total, dtype=np.int64)
    clens = np.empty(total)
    coffs = np.zeros(nseg + 1, dtype=np.int64)
    pos = 0
    for k in range(nseg):
        for t in range(counts[k]):
            ccells[pos] = cells[offsets[k] + t]
            clens[pos] = lens[offsets[k] + t]
            pos += 1
        coffs[k + 1] = pos
    return coffs, ccells, clens


@njit(cache=True)
def hildreth_sweep(indptr, indices, vals, rownorm2, lam, rho, h2, npasses):
    m = indptr.size - 1
    maxviol = 0.0
    for p in range(npasses):
        maxviol = 0.0
        for i in range(m):
            lo = indptr[i]
            hi = indptr[i + 1]
            s = 0.0
            for t in range(lo, hi):
                s += vals[t] * rho[indices[t]]
            viol = 1.0 - s
            if viol > maxviol:
                maxviol = viol
            if rownorm2[i] <= 0.0:
                continue
            newlam = lam[i] + 2.0 * h2 * viol / rownorm2[i]
            if newlam < 0.0:
                newlam = 0.0
            dl = newlam - lam[i]
            if dl != 0.0:
                lam[i] = newlam
                half = dl / (2.0 * h2)
                for t in range(lo, hi):
                    rho[indices[t]] += vals[t] * half
    return maxviol
