"""Simple polygonal domains in the plane and the logarithmic spiral domain.

A domain is a simple closed polygon (counterclockwise vertex chain) with a
marked basepoint strictly inside.  Point membership uses winding numbers,
boundary distance uses point-to-segment projection; both are batched through
the kernel backend.

The spiral domain is the channel around the curve g(t) = t**(alpha+1) *
exp(2*pi*i*t): the curve is thickened to a thin wall ribbon, the innermost
end is closed by a full turn around the origin, the outermost by a radial
cut.  The domain metadata records alpha, the loop count, and the wall
thickness so downstream code can pick resolutions.
"""

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (AmbiguousPositionError, ConstructionError, FormatError,
                     PositionError)

BOUNDARY_TOL = 1e-12


class PolygonDomain:
    """Simple closed polygon with a basepoint strictly inside."""

    def __init__(self, vertices, basepoint, metadata=None, _skip_simple_check=False):
        verts = np.asarray(vertices)
        if verts.ndim == 2 and verts.shape[1] == 2:
            verts = verts[:, 0] + 1j * verts[:, 1]
        verts = np.asarray(verts, complex)
        if verts.ndim != 1 or verts.size < 3:
            raise FormatError("polygon needs at least 3 vertices")
        d = np.abs(np.diff(np.concatenate([verts, verts[:1]])))
        if np.any(d == 0.0):
            raise ConstructionError("consecutive vertices must be distinct")
        area2 = _shoelace2(verts)
        if area2 == 0.0:
            raise ConstructionError("degenerate polygon (zero area)")
        if area2 < 0.0:
            verts = verts[::-1].copy()
        if not _skip_simple_check and not _chain_is_simple(verts):
            raise ConstructionError("polygon chain intersects itself")
        self.vertices = verts
        self._vx = np.ascontiguousarray(verts.real)
        self._vy = np.ascontiguousarray(verts.imag)
        self.basepoint = complex(basepoint)
        self.metadata = dict(metadata or {})
        wn = kernels.winding_numbers(np.array([self.basepoint.real]),
                                     np.array([self.basepoint.imag]),
                                     self._vx, self._vy)
        d0 = kernels.min_edge_distances(np.array([self.basepoint.real]),
                                        np.array([self.basepoint.imag]),
                                        self._vx, self._vy)
        if wn[0] != 1 or d0[0] <= BOUNDARY_TOL:
            raise ConstructionError("basepoint must lie strictly inside the polygon")

    # -- queries ---------------------------------------------------------

    def contains(self, z):
        """Strict interior test for a single point.  Points within
        BOUNDARY_TOL of an edge raise AmbiguousPositionError."""
        z = complex(z)
        d = kernels.min_edge_distances(np.array([z.real]), np.array([z.imag]),
                                       self._vx, self._vy)[0]
        if d <= BOUNDARY_TOL:
            raise AmbiguousPositionError(
                f"point {z} is within {BOUNDARY_TOL} of the boundary")
        wn = kernels.winding_numbers(np.array([z.real]), np.array([z.imag]),
                                     self._vx, self._vy)[0]
        return wn == 1

    def contains_many(self, z):
        """Vectorized interior mask; near-boundary points count as outside."""
        z = np.asarray(z, complex).ravel()
        wn = kernels.winding_numbers(np.ascontiguousarray(z.real),
                                     np.ascontiguousarray(z.imag),
                                     self._vx, self._vy)
        return wn == 1

    def distance_to_boundary(self, z):
        """Distance from an interior point to the boundary.  Raises
        PositionError for outside or boundary points."""
        z = complex(z)
        d = kernels.min_edge_distances(np.array([z.real]), np.array([z.imag]),
                                       self._vx, self._vy)[0]
        if d <= BOUNDARY_TOL:
            raise PositionError(f"point {z} lies on the boundary")
        wn = kernels.winding_numbers(np.array([z.real]), np.array([z.imag]),
                                     self._vx, self._vy)[0]
        if wn != 1:
            raise PositionError(f"point {z} lies outside the domain")
        return float(d)

    def distances_many(self, z):
        """Vectorized unsigned distance to the boundary chain."""
        z = np.asarray(z, complex).ravel()
        return kernels.min_edge_distances(np.ascontiguousarray(z.real),
                                          np.ascontiguousarray(z.imag),
                                          self._vx, self._vy)

    def bbox(self):
        return (float(self._vx.min()), float(self._vx.max()),
                float(self._vy.min()), float(self._vy.max()))

    def area(self):
        return 0.5 * abs(_shoelace2(self.vertices))

    def diameter(self):
        x0, x1, y0, y1 = self.bbox()
        return math.hypot(x1 - x0, y1 - y0)

    @property
    def n_vertices(self):
        return self.vertices.size

    # -- serialization ---------------------------------------------------

    def to_dict(self):
        out = {"vertices": [[float(v.real), float(v.imag)] for v in self.vertices],
               "basepoint": [self.basepoint.real, self.basepoint.imag]}
        if self.metadata:
            out["metadata"] = self.metadata
        return out

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "vertices" not in data or "basepoint" not in data:
            raise FormatError("polygon JSON needs 'vertices' and 'basepoint'")
        verts = data["vertices"]
        if not isinstance(verts, list) or len(verts) < 3:
            raise FormatError("polygon JSON needs at least 3 vertices")
        bp = data["basepoint"]
        if not (isinstance(bp, list) and len(bp) == 2):
            raise FormatError("basepoint must be a coordinate pair")
        return cls(verts, complex(bp[0], bp[1]), metadata=data.get("metadata"))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            data = json.load(fh)
        return cls.from_dict(data)

    def __repr__(self):
        return (f"PolygonDomain({self.n_vertices} vertices, "
                f"basepoint={self.basepoint:.6g})")


def snap_inside(domain, points, rel_eps=1e-9):
    """Return a copy of points with any outside or boundary-grazing entry
    nudged just inside the domain, via the nearest boundary foot point.

    Near-boundary evaluations (deep radial samples, images of shadow
    arcs) can land a hair outside the polygon; snapping them inward by a
    relative epsilon keeps path-distance queries well posed without
    materially moving the point.  Raises PositionError if a point cannot
    be brought inside."""
    pts = np.array(np.asarray(points, complex).ravel(), copy=True)
    eps0 = rel_eps * domain.diameter()
    wn = domain.contains_many(pts)
    d = domain.distances_many(pts)
    bad = ~wn | (d <= eps0)
    if not np.any(bad):
        return pts
    # vertex arrays are open chains, append the closing edge
    vx = np.append(domain._vx, domain._vx[0])
    vy = np.append(domain._vy, domain._vy[0])
    ax = vx[:-1] + 1j * vy[:-1]
    bx = vx[1:] + 1j * vy[1:]
    eseg = bx - ax
    elen2 = np.abs(eseg) ** 2
    for idx in np.where(bad)[0]:
        p = pts[idx]
        t = np.clip(((p - ax) * np.conj(eseg)).real / elen2, 0.0, 1.0)
        feet = ax + t * eseg
        gaps = np.abs(p - feet)
        order = np.argsort(gaps)[:3]
        anchors = []
        for k in order:
            foot = feet[k]
            n = 1j * eseg[k] / abs(eseg[k])
            sep = p - foot
            dirs = [n, -n]
            if abs(sep) > 0:
                u = sep / abs(sep)
                dirs = [u, -u] + dirs
            anchors.append((foot, dirs))
        placed = False
        # clearance eps*0.1 admits feet inside narrow corner wedges
        for eps in (eps0, 10 * eps0, 100 * eps0, 1e3 * eps0, 1e4 * eps0,
                    1e5 * eps0):
            for foot, dirs in anchors:
                for u in dirs:
                    cand = foot + eps * u
                    if domain.contains_many(np.array([cand]))[0] and \
                            domain.distances_many(np.array([cand]))[0] > \
                            eps * 0.1:
                        pts[idx] = cand
                        placed = True
                        break
                if placed:
                    break
            if placed:
                break
        if not placed:
            raise PositionError(f"could not move point {p} inside the domain")
    return pts


def load_polygon(path):
    return PolygonDomain.load(path)


def save_polygon(dom, path):
    dom.save(path)


def _shoelace2(verts):
    x = verts.real
    y = verts.imag
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _chain_is_simple(verts):
    """No proper crossing or touching between non-adjacent edges."""
    n = verts.size
    x0 = verts.real
    y0 = verts.imag
    x1 = np.roll(x0, -1)
    y1 = np.roll(y0, -1)
    exl = np.minimum(x0, x1)
    exh = np.maximum(x0, x1)
    eyl = np.minimum(y0, y1)
    eyh = np.maximum(y0, y1)
    for i in range(n - 2):
        j0 = i + 2
        j1 = n if i > 0 else n - 1
        if j0 >= j1:
            continue
        sl = slice(j0, j1)
        cand = ~((exh[i] < exl[sl]) | (exh[sl] < exl[i]) |
                 (eyh[i] < eyl[sl]) | (eyh[sl] < eyl[i]))
        if not np.any(cand):
            continue
        js = np.nonzero(cand)[0] + j0
        ax, ay, bx, by = x0[i], y0[i], x1[i], y1[i]
        dx, dy = bx - ax, by - ay
        eps = 1e-14 * (abs(dx) + abs(dy) + 1e-300)
        d1 = dx * (y0[js] - ay) - dy * (x0[js] - ax)
        d2 = dx * (y1[js] - ay) - dy * (x1[js] - ax)
        ex = x1[js] - x0[js]
        ey = y1[js] - y0[js]
        eeps = 1e-14 * (np.abs(ex) + np.abs(ey) + 1e-300)
        d3 = ex * (ay - y0[js]) - ey * (ax - x0[js])
        d4 = ex * (by - y0[js]) - ey * (bx - x0[js])
        cross = (((d1 < -eps) & (d2 > eps)) | ((d2 < -eps) & (d1 > eps))) & \
                (((d3 < -eeps) & (d4 > eeps)) | ((d4 < -eeps) & (d3 > eeps)))
        if np.any(cross):
            return False
    return True


# -- stock polygons ------------------------------------------------------


def regular_polygon(n, circumradius=1.0, center=0.0, basepoint=None):
    """Regular n-gon with vertices on the circle of the given radius."""
    if n < 3:
        raise FormatError("regular polygon needs n >= 3")
    th = 2.0 * np.pi * np.arange(n) / n
    verts = center + circumradius * np.exp(1j * th)
    bp = center if basepoint is None else basepoint
    return PolygonDomain(verts, bp)


def rectangle_domain(a, b, basepoint=None):
    """Axis rectangle [0, a] x [0, b]."""
    if a <= 0 or b <= 0:
        raise FormatError("rectangle needs positive side lengths")
    verts = [0, a, a + 1j * b, 1j * b]
    bp = complex(a / 2.0, b / 2.0) if basepoint is None else basepoint
    return PolygonDomain(verts, bp)


def l_domain():
    """L-shaped hexagon [0,2]^2 minus [1,2]^2, basepoint (0.5, 0.5)."""
    verts = [0, 2, 2 + 1j, 1 + 1j, 1 + 2j, 2j]
    return PolygonDomain(verts, 0.5 + 0.5j)


# -- spiral domain -------------------------------------------------------


@dataclass
class SpiralSpec:
    """Parameters of the spiral channel domain."""
    alpha: float = 0.0
    loops: int = 10
    samples_per_loop: int = 32
    wall_frac: float = 0.05
    t_start: float = 0.5

    def __post_init__(self):
        if self.alpha < 0:
            raise FormatError("spiral alpha must be >= 0")
        if self.loops < 2:
            raise FormatError("spiral needs at least 2 loops")
        if self.samples_per_loop < 16:
            raise FormatError("spiral needs at least 16 samples per loop")
        if not (0 < self.wall_frac < 0.45):
            raise FormatError("wall_frac must be in (0, 0.45)")


@dataclass
class SpiralDomain:
    domain: PolygonDomain
    midline: np.ndarray
    loop_centers: np.ndarray
    spec: SpiralSpec
    wall_eps: float


def _spiral_curve(t, alpha):
    t = np.asarray(t, float)
    return t ** (alpha + 1.0) * np.exp(2j * np.pi * t)


def _spiral_midline(t, alpha):
    t = np.asarray(t, float)
    r = 0.5 * (t ** (alpha + 1.0) + (t + 1.0) ** (alpha + 1.0))
    return r * np.exp(2j * np.pi * t)


def build_spiral_domain(spec=None, **kw):
    """Build the spiral channel domain.

    Returns a SpiralDomain carrying the polygon, the channel midline
    polyline, and the loop centers c_j (midline points at integer
    parameters, which sit on the positive real axis).
    """
    if spec is None:
        spec = SpiralSpec(**kw)
    alpha, J, m = spec.alpha, spec.loops, spec.samples_per_loop
    t0 = spec.t_start
    gap_min = (t0 + 1.0) ** (alpha + 1.0) - t0 ** (alpha + 1.0)
    eps = spec.wall_frac * gap_min

    def flank(t, side):
        t = np.asarray(t, float)
        z = _spiral_curve(t, alpha)
        dz = ((alpha + 1.0) * t ** alpha + 2j * np.pi * t ** (alpha + 1.0)) \
            * np.exp(2j * np.pi * t)
        nrm = 1j * dz / np.abs(dz)
        sgn = np.sign(np.real(np.conj(nrm) * z / np.abs(z)))
        sgn = np.where(sgn == 0.0, 1.0, sgn)
        return z + side * (eps / 2.0) * sgn * nrm

    tin = np.arange(t0, J + 1.0 + 1e-12, 1.0 / m)
    fin = flank(tin, -1)
    tout = np.arange(t0 + 1.0 / m, J + 1e-12, 1.0 / m)[::-1]
    fout = flank(tout, +1)
    r0 = t0 ** (alpha + 1.0)
    ncap = 2 * m
    th0 = 2.0 * np.pi * t0
    ks = np.arange(1, ncap)
    th = th0 - ks * (2.0 * np.pi / ncap)
    rad = r0 + eps / 2.0 - (ks / ncap) * eps
    cap_in = rad * np.exp(1j * th)
    verts = np.concatenate([flank(np.array([t0]), +1), cap_in, fin, fout])

    base = complex(_spiral_midline(np.array([t0]), alpha)[0])
    dom = PolygonDomain(verts, base, metadata={
        "spiral": {"alpha": alpha, "loops": J, "t_start": t0,
                   "wall_eps": eps, "samples_per_loop": m}})

    t_mid = np.arange(t0, J - 0.25 + 1e-12, 1.0 / m)
    midline = _spiral_midline(t_mid, alpha)
    jjs = np.arange(1, J)
    centers = _spiral_midline(jjs.astype(float), alpha)
    return SpiralDomain(dom, midline, centers, spec, eps)


def spiral_channel_param(points, alpha, t_start=0.5):
    """Approximate channel parameter t for points of the spiral domain:
    the point lies in the channel between wall turns t and t+1.  Used to
    prune visibility candidates; accuracy of ~0.1 turns is enough."""
    z = np.asarray(points, complex).ravel()
    r = np.abs(z)
    t = np.maximum(r, 1e-9) ** (1.0 / (alpha + 1.0)) - 0.5
    t = np.maximum(t, t_start - 0.49)
    for _ in range(8):
        f = 0.5 * (t ** (alpha + 1.0) + (t + 1.0) ** (alpha + 1.0)) - r
        df = 0.5 * (alpha + 1.0) * (t ** alpha + (t + 1.0) ** alpha)
        t = np.maximum(t - f / df, t_start - 0.49)
    ang = np.angle(z) / (2.0 * np.pi)
    frac = np.mod(ang - t, 1.0)
    frac = np.where(frac > 0.5, frac - 1.0, frac)
    return t + frac
