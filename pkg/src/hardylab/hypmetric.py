"""Quasi-hyperbolic metric on polygonal domains, and the exact hyperbolic
metric of the unit disk.

The quasi-hyperbolic distance k(u, v) = inf over paths of the integral of
|dz| / d(z, boundary) is approximated by Dijkstra on a uniform lattice with
8-neighbor edges weighted len(edge) / min(d(a), d(b)).  Query points are
inserted as extra nodes connected to lattice nodes within 2h.  The weight
rule overestimates locally near the boundary and underestimates on long
edges, so convergence is checked by halving h.
"""

import cmath
import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from . import kernels
from .errors import DomainError, ResolutionError


def hyperbolic_distance_disk(x, y):
    """Poincare distance in the unit disk (curvature -4 normalization:
    d(0, r) = 2 artanh r ... with density 2|dz|/(1-|z|^2))."""
    x, y = complex(x), complex(y)
    if abs(x) >= 1.0 or abs(y) >= 1.0:
        raise DomainError("hyperbolic distance needs |x|, |y| < 1")
    m = abs((x - y) / (1.0 - x.conjugate() * y))
    return 2.0 * math.atanh(m)


class QhGraph:
    """Lattice Dijkstra structure for the quasi-hyperbolic metric."""

    def __init__(self, domain, h, extra_points=()):
        if h <= 0:
            raise ResolutionError("lattice spacing must be positive")
        self.domain = domain
        self.h = float(h)
        xmin, xmax, ymin, ymax = domain.bbox()
        nx = int(math.ceil((xmax - xmin) / h)) + 1
        ny = int(math.ceil((ymax - ymin) / h)) + 1
        if nx * ny > 4.0e7:
            raise ResolutionError(
                f"lattice would need {nx * ny:.2g} nodes; increase h")
        xs = xmin + h * np.arange(nx)
        ys = ymin + h * np.arange(ny)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        pts = (X + 1j * Y).ravel()
        inside = domain.contains_many(pts)
        dists = np.zeros(pts.size)
        dists[inside] = domain.distances_many(pts[inside])
        inside &= dists > 1e-9 * max(1.0, domain.diameter())
        idx = np.full(pts.size, -1, dtype=np.int64)
        idx[inside] = np.arange(int(inside.sum()))
        self.nodes = pts[inside]
        self.node_dist = dists[inside]
        nlat = self.nodes.size
        if nlat == 0:
            raise ResolutionError("no lattice nodes fall inside the domain")

        grid = idx.reshape(nx, ny)
        rows, cols, lens = [], [], []
        for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
            i0, i1 = max(0, -di), nx - max(0, di)
            j0, j1 = max(0, -dj), ny - max(0, dj)
            a = grid[i0:i1, j0:j1].ravel()
            b = grid[i0 + di:i1 + di, j0 + dj:j1 + dj].ravel()
            ok = (a >= 0) & (b >= 0)
            rows.append(a[ok])
            cols.append(b[ok])
            lens.append(np.full(int(ok.sum()), h * math.hypot(di, dj)))
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        lens = np.concatenate(lens)

        # an edge whose clearance exceeds its length stays inside; check others
        clear = np.minimum(self.node_dist[rows], self.node_dist[cols]) > lens
        if not np.all(clear):
            sub = np.nonzero(~clear)[0]
            a = self.nodes[rows[sub]]
            b = self.nodes[cols[sub]]
            neg = np.full(sub.size, -1, dtype=np.int64)
            ok = kernels.segments_clear(
                np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag),
                np.ascontiguousarray(b.real), np.ascontiguousarray(b.imag),
                neg, neg, domain._vx, domain._vy, 3)
            keep = clear.copy()
            keep[sub[ok]] = True
            rows, cols, lens = rows[keep], cols[keep], lens[keep]

        self.extra = [complex(p) for p in extra_points]
        all_nodes = [self.nodes]
        all_dist = [self.node_dist]
        erows, ecols, elens = [rows], [cols], [lens]
        for k, p in enumerate(self.extra):
            d = domain.distance_to_boundary(p)
            my = nlat + k
            near = np.nonzero(np.abs(self.nodes - p) <= 2.0 * h)[0]
            if near.size == 0:
                raise ResolutionError(
                    f"no lattice node within 2h of inserted point {p}")
            a = np.full(near.size, p)
            b = self.nodes[near]
            neg = np.full(near.size, -1, dtype=np.int64)
            seg_ok = kernels.segments_clear(
                np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag),
                np.ascontiguousarray(b.real), np.ascontiguousarray(b.imag),
                neg, neg, domain._vx, domain._vy, 3)
            near = near[seg_ok]
            if near.size == 0:
                raise ResolutionError(
                    f"inserted point {p} cannot reach the lattice; decrease h")
            erows.append(np.full(near.size, my, dtype=np.int64))
            ecols.append(near)
            elens.append(np.abs(self.nodes[near] - p))
            all_nodes.append(np.array([p]))
            all_dist.append(np.array([d]))
        # extra-extra edges for points within 2h of each other
        for i in range(len(self.extra)):
            for j in range(i + 1, len(self.extra)):
                pi, pj = self.extra[i], self.extra[j]
                if abs(pi - pj) <= 2.0 * h and abs(pi - pj) > 0:
                    neg = np.array([-1], dtype=np.int64)
                    ok = kernels.segments_clear(
                        np.array([pi.real]), np.array([pi.imag]),
                        np.array([pj.real]), np.array([pj.imag]),
                        neg, neg, domain._vx, domain._vy, 3)
                    if ok[0]:
                        erows.append(np.array([nlat + i], dtype=np.int64))
                        ecols.append(np.array([nlat + j], dtype=np.int64))
                        elens.append(np.array([abs(pi - pj)]))

        self.all_nodes = np.concatenate(all_nodes)
        self.all_dist = np.concatenate(all_dist)
        rows = np.concatenate(erows)
        cols = np.concatenate(ecols)
        lens = np.concatenate(elens)
        w = lens / np.minimum(self.all_dist[rows], self.all_dist[cols])
        n = self.all_nodes.size
        self.graph = csr_matrix(
            (np.concatenate([w, w]),
             (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(n, n))
        self.n_lattice = nlat

    def extra_index(self, k):
        return self.n_lattice + k

    def distances_from_extra(self, k):
        """Dijkstra distances from inserted point k to every node."""
        d = dijkstra(self.graph, indices=self.extra_index(k))
        return d

    def distance_between_extras(self, i, j):
        d = self.distances_from_extra(i)[self.extra_index(j)]
        if not np.isfinite(d):
            raise ResolutionError(
                "inserted points are not connected at this lattice spacing")
        return float(d)


def build_qh_graph(domain, h, extra_points=()):
    return QhGraph(domain, h, extra_points)


def default_spacing(domain):
    """Reasonable lattice spacing: quarter of the innermost channel width
    for spiral domains, 1/64 of the short bbox side otherwise."""
    meta = domain.metadata.get("spiral")
    if meta:
        alpha = meta["alpha"]
        t0 = meta["t_start"]
        gap = (t0 + 1.0) ** (alpha + 1.0) - t0 ** (alpha + 1.0)
        return (gap - meta["wall_eps"]) / 4.0
    xmin, xmax, ymin, ymax = domain.bbox()
    return min(xmax - xmin, ymax - ymin) / 64.0


def quasi_hyperbolic_distance(domain, u, v, h=None):
    """Quasi-hyperbolic distance between two interior points."""
    if h is None:
        h = default_spacing(domain)
    g = QhGraph(domain, h, extra_points=[u, v])
    return g.distance_between_extras(0, 1)


def qh_convergence_diagnostic(domain, u, v, h_values):
    """Distances at a sequence of spacings plus the relative change of the
    final two; the sequence should settle within a few percent."""
    vals = [quasi_hyperbolic_distance(domain, u, v, h) for h in h_values]
    if len(vals) >= 2 and vals[-1] > 0:
        rel = abs(vals[-1] - vals[-2]) / vals[-1]
    else:
        rel = math.inf
    return {"h": list(h_values), "distance": vals, "final_rel_change": rel}
