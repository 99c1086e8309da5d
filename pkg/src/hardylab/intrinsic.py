"""Intrinsic (geodesic) metric of a polygonal domain and image-curve lengths.

Shortest paths inside a simple polygon bend only at reflex vertices, so the
intrinsic distance is computed on the visibility graph spanned by the reflex
vertices plus the query points.  Segment clearance is tested conservatively
(touching counts as blocked) with interior sample points, so the computed
distance can only overestimate, and only by the discretization sliver.

For spiral domains an approximate channel parameter prunes candidate pairs:
points whose winding parameters differ by more than two turns cannot see
each other through the walls.
"""

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from . import kernels
from .errors import DomainError, PositionError, ResolutionError
from .geometry import spiral_channel_param

_CHANNEL_SEP = 2.2
_EDGE_CHECKS = 16


class VisibilityGraph:
    """Static reflex-vertex visibility structure with point insertion."""

    def __init__(self, domain):
        self.domain = domain
        verts = domain.vertices
        n = verts.size
        prev = np.roll(verts, 1)
        nxt = np.roll(verts, -1)
        cross = np.imag(np.conj(verts - prev) * (nxt - verts))
        self.reflex_idx = np.nonzero(cross < 0.0)[0]
        self.nodes = verts[self.reflex_idx]
        meta = domain.metadata.get("spiral")
        if meta is not None and self.nodes.size:
            self._tparam = spiral_channel_param(self.nodes, meta["alpha"],
                                                meta["t_start"])
            self._meta = meta
        else:
            self._tparam = None
            self._meta = meta
        self._build_static()

    def _build_static(self):
        nodes = self.nodes
        nn = nodes.size
        rows, cols, wts = [], [], []
        if nn:
            # chain edges between boundary-adjacent reflex vertices
            pos_of = {int(i): k for k, i in enumerate(self.reflex_idx)}
            nverts = self.domain.vertices.size
            for k, i in enumerate(self.reflex_idx):
                j = (int(i) + 1) % nverts
                if j in pos_of:
                    rows.append(k)
                    cols.append(pos_of[j])
                    wts.append(abs(self.domain.vertices[j] - nodes[k]))
            # chord candidates
            ii, jj = np.triu_indices(nn, k=1)
            adj = np.zeros(ii.size, dtype=bool)
            gap = np.abs(self.reflex_idx[ii] - self.reflex_idx[jj])
            adj |= (gap == 1) | (gap == nverts - 1)
            keep = ~adj
            if self._tparam is not None:
                keep &= np.abs(self._tparam[ii] - self._tparam[jj]) <= _CHANNEL_SEP
            ii, jj = ii[keep], jj[keep]
            if ii.size:
                a = nodes[ii]
                b = nodes[jj]
                ok = kernels.segments_clear(
                    np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag),
                    np.ascontiguousarray(b.real), np.ascontiguousarray(b.imag),
                    self.reflex_idx[ii].astype(np.int64),
                    self.reflex_idx[jj].astype(np.int64),
                    self.domain._vx, self.domain._vy, _EDGE_CHECKS)
                rows.extend(ii[ok].tolist())
                cols.extend(jj[ok].tolist())
                wts.extend(np.abs(a[ok] - b[ok]).tolist())
        self._srows = np.asarray(rows, dtype=np.int64)
        self._scols = np.asarray(cols, dtype=np.int64)
        self._swts = np.asarray(wts, dtype=float)

    def _insertion_edges(self, points, offset):
        """Edges from inserted points to reflex nodes and to each other."""
        pts = np.asarray(points, complex)
        npt = pts.size
        nn = self.nodes.size
        rows, cols, wts = [], [], []
        if nn:
            if self._tparam is not None:
                tq = spiral_channel_param(pts, self._meta["alpha"],
                                          self._meta["t_start"])
            for k in range(npt):
                cand = np.arange(nn)
                if self._tparam is not None:
                    cand = cand[np.abs(self._tparam - tq[k]) <= _CHANNEL_SEP]
                if cand.size == 0:
                    continue
                a = np.full(cand.size, pts[k])
                b = self.nodes[cand]
                ia = np.full(cand.size, -1, dtype=np.int64)
                ok = kernels.segments_clear(
                    np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag),
                    np.ascontiguousarray(b.real), np.ascontiguousarray(b.imag),
                    ia, self.reflex_idx[cand].astype(np.int64),
                    self.domain._vx, self.domain._vy, _EDGE_CHECKS)
                sel = cand[ok]
                rows.extend([offset + k] * sel.size)
                cols.extend(sel.tolist())
                wts.extend(np.abs(pts[k] - self.nodes[sel]).tolist())
        return rows, cols, wts

    def _sees(self, source, pts, chunk=8192):
        """Line-of-sight mask from one source to many points (chunked)."""
        out = np.empty(pts.size, dtype=bool)
        neg1 = -1
        for lo in range(0, pts.size, chunk):
            hi = min(lo + chunk, pts.size)
            b = pts[lo:hi]
            a = np.full(b.size, source)
            neg = np.full(b.size, neg1, dtype=np.int64)
            out[lo:hi] = kernels.segments_clear(
                np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag),
                np.ascontiguousarray(b.real), np.ascontiguousarray(b.imag),
                neg, neg, self.domain._vx, self.domain._vy, _EDGE_CHECKS)
        return out

    def distances(self, points, source):
        """Geodesic distances from ``source`` to each of ``points``.

        Points with a clear straight segment to the source take the
        euclidean value directly (that segment is the geodesic); only
        the occluded remainder goes through the reflex-vertex graph.
        Single-source shortest paths bend only at reflex vertices, so
        no point-to-point edges are needed."""
        pts = np.asarray(points, complex).ravel()
        source = complex(source)
        out = np.abs(pts - source)
        seen = self._sees(source, pts) | (pts == source)
        rest = np.where(~seen)[0]
        if rest.size == 0:
            return out
        allpts = np.concatenate([[source], pts[rest]])
        nn = self.nodes.size
        rows, cols, wts = self._insertion_edges(allpts, nn)
        rows = np.concatenate([self._srows, np.asarray(rows, dtype=np.int64)])
        cols = np.concatenate([self._scols, np.asarray(cols, dtype=np.int64)])
        wts = np.concatenate([self._swts, np.asarray(wts, dtype=float)])
        ntot = nn + allpts.size
        g = csr_matrix((np.concatenate([wts, wts]),
                        (np.concatenate([rows, cols]),
                         np.concatenate([cols, rows]))), shape=(ntot, ntot))
        d = dijkstra(g, indices=nn)
        out[rest] = d[nn + 1:]
        return out

    def distance(self, u, v):
        d = self.distances([v], u)[0]
        if not math.isfinite(d):
            raise ResolutionError(
                "no geodesic path found between the query points")
        return float(d)


def get_visibility(domain):
    g = getattr(domain, "_visgraph", None)
    if g is None:
        g = VisibilityGraph(domain)
        domain._visgraph = g
    return g


def intrinsic_distance(domain, u, v):
    """Geodesic distance between two interior points of the domain."""
    u, v = complex(u), complex(v)
    for p in (u, v):
        if not domain.contains(p):
            raise PositionError(f"point {p} is not inside the domain")
    if u == v:
        return 0.0
    return get_visibility(domain).distance(u, v)


def intrinsic_distances_from(domain, source, points):
    """Batch geodesic distances from one source to many interior points."""
    return get_visibility(domain).distances(points, source)


def intrinsic_modulus(fmap, domain, x):
    """Intrinsic distance from f(x) to the basepoint of the image domain."""
    w = fmap.eval(x)
    return intrinsic_distance(domain, domain.basepoint, w)


# -- image curve lengths ---------------------------------------------------


def _adaptive_simpson(g, a, b, fa, fm, fb, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = g(lm)
    frm = g(rm)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol * (abs(left + right) + 1e-300):
        return left + right + (left + right - whole) / 15.0
    return (_adaptive_simpson(g, a, m, fa, flm, fm, tol, depth - 1)
            + _adaptive_simpson(g, m, b, fm, frm, fb, tol, depth - 1))


def image_curve_length(fmap, curve, rel_tol=1e-4):
    """Length of the image of a polyline under the map, integrating |f'|
    along each segment with adaptive Simpson to the given relative error."""
    curve = np.asarray(curve, complex).ravel()
    if curve.size < 2:
        raise DomainError("curve needs at least two points")
    total = 0.0
    for k in range(curve.size - 1):
        z0, z1 = curve[k], curve[k + 1]
        dz = z1 - z0
        if dz == 0:
            continue
        speed = abs(dz)

        def g(t):
            return abs(complex(fmap.deriv(z0 + t * dz))) * speed

        fa, fm, fb = g(0.0), g(0.5), g(1.0)
        total += _adaptive_simpson(g, 0.0, 1.0, fa, fm, fb, rel_tol, 28)
    return total


def radial_image_length(fmap, omega, r_max, rel_tol=1e-4):
    """Arc length of f([0, r_max * omega]) along the radius."""
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > 1e-9:
        raise DomainError("omega must lie on the unit circle")
    if not (0 < r_max < 1):
        raise DomainError("r_max must be in (0, 1)")
    return image_curve_length(fmap, [0.0, r_max * omega], rel_tol=rel_tol)


def gh_ratio(fmap, domain, x, rel_tol=1e-4):
    """Ratio of the image length of the radius [0, x] to the intrinsic
    distance d_I(f(x), f(0)); always >= 1 up to discretization error."""
    x = complex(x)
    if abs(x) >= 1.0:
        raise DomainError("x must lie in the open unit disk")
    L = image_curve_length(fmap, [0.0, x], rel_tol=rel_tol)
    w = fmap.eval(x)
    d = intrinsic_distance(domain, domain.basepoint, w)
    if d == 0.0:
        return math.inf if L > 0 else 1.0
    return L / d
