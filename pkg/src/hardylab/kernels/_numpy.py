"""Pure-numpy reference implementations of the geometry and solver kernels.

Every function here has a numba twin in ``_numba`` with the same signature
and semantics.  Arrays are float64 / int64 throughout.
"""

import numpy as np


def winding_numbers(px, py, vx, vy):
    """Winding number of each point (px, py) with respect to the closed
    polygon chain (vx, vy).  Positive for counterclockwise enclosure."""
    x1 = np.roll(vx, -1)
    y1 = np.roll(vy, -1)
    wn = np.zeros(px.size, dtype=np.int64)
    block = max(1, int(4.0e6 / max(1, vx.size)))
    for s in range(0, px.size, block):
        X = px[s:s + block, None]
        Y = py[s:s + block, None]
        up = (vy[None] <= Y) & (y1[None] > Y)
        dn = (vy[None] > Y) & (y1[None] <= Y)
        cross = (x1 - vx)[None] * (Y - vy[None]) - (X - vx[None]) * (y1 - vy)[None]
        wn[s:s + block] = (up & (cross > 0)).sum(axis=1) - (dn & (cross < 0)).sum(axis=1)
    return wn


def min_edge_distances(px, py, vx, vy):
    """Distance from each point to the nearest point of the closed chain."""
    x1 = np.roll(vx, -1)
    y1 = np.roll(vy, -1)
    ex = x1 - vx
    ey = y1 - vy
    L2 = ex * ex + ey * ey
    L2safe = np.where(L2 == 0.0, 1.0, L2)
    out = np.empty(px.size)
    block = max(1, int(2.0e6 / max(1, vx.size)))
    for s in range(0, px.size, block):
        X = px[s:s + block, None]
        Y = py[s:s + block, None]
        t = ((X - vx[None]) * ex[None] + (Y - vy[None]) * ey[None]) / L2safe[None]
        t = np.clip(t, 0.0, 1.0)
        dx = X - (vx[None] + t * ex[None])
        dy = Y - (vy[None] + t * ey[None])
        out[s:s + block] = np.sqrt((dx * dx + dy * dy).min(axis=1))
    return out


def segments_clear(ax, ay, bx, by, ia, ib, vx, vy, nchecks):
    """For each segment (a, b), decide whether it stays inside the polygon.

    A segment is clear when no polygon edge properly crosses or touches its
    interior (edges incident to the segment's own endpoint vertices ``ia``,
    ``ib`` are exempt; pass -1 for free endpoints) and ``nchecks`` interior
    sample points all have winding number 1.  Touch counts as blocked, so
    the test is conservative.
    """
    n = vx.size
    nseg = ax.size
    out = np.zeros(nseg, dtype=np.bool_)
    x1 = np.roll(vx, -1)
    y1 = np.roll(vy, -1)
    edge_ids = np.arange(n)
    for k in range(nseg):
        sx, sy, tx, ty = ax[k], ay[k], bx[k], by[k]
        dx = tx - sx
        dy = ty - sy
        scale = abs(dx) + abs(dy) + 1e-300
        eps = 1e-12 * scale
        skip = np.zeros(n, dtype=bool)
        for idx in (ia[k], ib[k]):
            if idx >= 0:
                skip[idx % n] = True
                skip[(idx - 1) % n] = True
        d1 = dx * (vy - sy) - dy * (vx - sx)
        d2 = dx * (y1 - sy) - dy * (x1 - sx)
        ex = x1 - vx
        ey = y1 - vy
        d3 = ex * (sy - vy) - ey * (sx - vx)
        d4 = ex * (ty - vy) - ey * (tx - vx)
        esc = np.abs(ex) + np.abs(ey) + 1e-300
        teps = 1e-12 * scale
        eeps = 1e-12 * esc
        straddle_seg = ((np.minimum(d1, d2) < -teps) & (np.maximum(d1, d2) > teps)) \
            | (np.abs(d1) <= teps) | (np.abs(d2) <= teps)
        straddle_edge = ((np.minimum(d3, d4) < -eeps) & (np.maximum(d3, d4) > eeps)) \
            | (np.abs(d3) <= eeps) | (np.abs(d4) <= eeps)
        hit = straddle_seg & straddle_edge & (~skip)
        # touching at eps counts as blocked only if both straddle tests pass;
        # require a real overlap of spans to avoid flagging far collinear edges
        if np.any(hit):
            js = edge_ids[hit]
            blocked = False
            for j in js:
                lo1, hi1 = min(sx, tx), max(sx, tx)
                lo2, hi2 = min(vx[j], x1[j]), max(vx[j], x1[j])
                lo1y, hi1y = min(sy, ty), max(sy, ty)
                lo2y, hi2y = min(vy[j], y1[j]), max(vy[j], y1[j])
                if hi1 < lo2 - eps or hi2 < lo1 - eps or hi1y < lo2y - eps or hi2y < lo1y - eps:
                    continue
                blocked = True
                break
            if blocked:
                continue
        ts = (np.arange(1, nchecks + 1)) / (nchecks + 1.0)
        qx = sx + ts * dx
        qy = sy + ts * dy
        wn = winding_numbers(qx, qy, vx, vy)
        out[k] = bool(np.all(wn == 1))
    return out


def raster_segments(ax, ay, bx, by, x0, y0, h, nx, ny):
    """Trace each segment through the uniform grid, returning the cells it
    crosses and the length of each crossing (grid traversal by parametric
    stepping).  Returns (offsets, cells, lengths) in CSR layout."""
    nseg = ax.size
    caps = (np.abs(bx - ax) / h + np.abs(by - ay) / h + 4.0).astype(np.int64)
    offsets = np.zeros(nseg + 1, dtype=np.int64)
    np.cumsum(caps, out=offsets[1:])
    cells = np.full(offsets[-1], -1, dtype=np.int64)
    lens = np.zeros(offsets[-1])
    counts = np.zeros(nseg, dtype=np.int64)
    for k in range(nseg):
        _trace_one(ax[k], ay[k], bx[k], by[k], x0, y0, h, nx, ny,
                   cells, lens, offsets[k], counts, k)
    # compact
    total = int(counts.sum())
    ccells = np.empty(total, dtype=np.int64)
    clens = np.empty(total)
    coffs = np.zeros(nseg + 1, dtype=np.int64)
    pos = 0
    for k in range(nseg):
        c = counts[k]
        ccells[pos:pos + c] = cells[offsets[k]:offsets[k] + c]
        clens[pos:pos + c] = lens[offsets[k]:offsets[k] + c]
        pos += c
        coffs[k + 1] = pos
    return coffs, ccells, clens


def _trace_one(sx, sy, tx, ty, x0, y0, h, nx, ny, cells, lens, base, counts, k):
    dx = tx - sx
    dy = ty - sy
    seglen = np.hypot(dx, dy)
    if seglen == 0.0:
        counts[k] = 0
        return
    i = int(np.floor((sx - x0) / h))
    j = int(np.floor((sy - y0) / h))
    ie = int(np.floor((tx - x0) / h))
    je = int(np.floor((ty - y0) / h))
    stepi = 1 if dx > 0 else -1
    stepj = 1 if dy > 0 else -1
    tdx = abs(h / dx) if dx != 0 else np.inf
    tdy = abs(h / dy) if dy != 0 else np.inf
    if dx > 0:
        tmx = ((i + 1) * h + x0 - sx) / dx
    elif dx < 0:
        tmx = (i * h + x0 - sx) / dx
    else:
        tmx = np.inf
    if dy > 0:
        tmy = ((j + 1) * h + y0 - sy) / dy
    elif dy < 0:
        tmy = (j * h + y0 - sy) / dy
    else:
        tmy = np.inf
    tprev = 0.0
    c = 0
    cap = cells.size - base
    for _ in range(4 * (nx + ny) + 8):
        tnext = min(min(tmx, tmy), 1.0)
        if 0 <= i < nx and 0 <= j < ny and tnext > tprev and c < cap:
            cells[base + c] = j * nx + i
            lens[base + c] = (tnext - tprev) * seglen
            c += 1
        if tnext >= 1.0 or (i == ie and j == je and tnext >= 1.0):
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


def hildreth_sweep(indptr, indices, vals, rownorm2, lam, rho, h2, npasses):
    """Gauss-Seidel passes of Hildreth's dual coordinate ascent for
    min sum(rho^2) * h2  s.t.  A rho >= 1, rho >= 0 implied by A >= 0.
    Updates lam and rho in place; returns the max constraint violation
    seen on the final pass."""
    m = indptr.size - 1
    maxviol = 0.0
    for p in range(npasses):
        maxviol = 0.0
        for i in range(m):
            lo, hi = indptr[i], indptr[i + 1]
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
