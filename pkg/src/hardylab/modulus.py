"""Discrete modulus of curve families and numerically testable forms of
the modulus inequalities used by the membership arguments.

The modulus of a finite family of polyline curves is approximated on a
uniform grid: minimize sum(rho_c^2) * h^2 over cell densities rho >= 0
subject to sum_c rho_c * len_c(gamma) >= 1 for every curve, where
len_c(gamma) is the length of gamma inside cell c.  The quadratic
program is solved by Hildreth dual coordinate ascent; stationarity
(2 h^2 rho = A^T lambda, rho >= 0) holds exactly by construction, and
the reported KKT residual is the larger of the worst primal violation
and the normalized complementary slackness.

Exact oracles: the modulus of the family of radial segments from
|z| = r to a boundary direction set E is sigma(E)/log(1/r), and any
family joining the two boundary circles of an annulus has modulus at
most 2*pi/log(R/r).

Curve families are finite samples, so discrete values are lower-bound
trends toward the continuum modulus; generators accept the sample count
and circle-based oracles default to 256 directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import kernels
from .diskcells import ArcSet, make_whitney_cell
from .errors import ConvergenceError, DomainError, FormatError
from .geometry import snap_inside

TWO_PI = 2.0 * math.pi

__all__ = [
    "CurveFamily",
    "DensityGrid",
    "ModulusResult",
    "radial_family",
    "rectangle_family",
    "annulus_family",
    "image_family",
    "channel_family",
    "spoke_family",
    "discrete_modulus",
    "radial_modulus_exact",
    "annulus_modulus_bound",
    "check_intrinsic_modulus_bound",
    "check_shadow_escape_bound",
]


# ------------------------------------------------------------- families


@dataclass
class CurveFamily:
    """Finite family of polyline curves (arrays of complex vertices)."""

    curves: list
    kind: str = "custom"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.curves:
            raise FormatError("curve family must contain at least one curve")
        cleaned = []
        for k, c in enumerate(self.curves):
            arr = np.asarray(c, dtype=complex).ravel()
            if arr.size < 2:
                raise FormatError(f"curve {k} needs at least two vertices")
            if not np.all(np.isfinite(arr.view(float))):
                raise FormatError(f"curve {k} has non-finite vertices")
            if float(np.sum(np.abs(np.diff(arr)))) <= 0.0:
                raise FormatError(f"curve {k} has zero length")
            cleaned.append(arr)
        self.curves = cleaned

    @property
    def n_curves(self) -> int:
        return len(self.curves)

    def lengths(self) -> np.ndarray:
        return np.array([float(np.sum(np.abs(np.diff(c)))) for c in self.curves])

    def bbox(self):
        pts = np.concatenate(self.curves)
        return (pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max())


def radial_family(r: float, arcs=None, n_curves: int = 256, r_outer: float = 1.0,
                  center: complex = 0.0) -> CurveFamily:
    """Radial segments from |z - center| = r out to r_outer, with
    directions drawn uniformly from the arc set (full circle default)."""
    if not 0.0 < r < r_outer:
        raise DomainError(f"need 0 < r < r_outer, got r={r}, r_outer={r_outer}")
    if arcs is None:
        thetas = np.arange(n_curves) * TWO_PI / n_curves
    else:
        arcs = arcs if isinstance(arcs, ArcSet) else ArcSet(arcs)
        total = arcs.measure
        thetas = []
        for lo, hi in arcs.components:
            n = max(2, int(round(n_curves * (hi - lo) / total)))
            thetas.extend(lo + (np.arange(n) + 0.5) * (hi - lo) / n)
        thetas = np.asarray(thetas)
    omega = np.exp(1j * thetas)
    curves = [np.array([center + r * w, center + r_outer * w]) for w in omega]
    return CurveFamily(curves, "radial-to-set",
                       {"r": r, "r_outer": r_outer, "n": len(curves)})


def rectangle_family(a: float, b: float, n_curves: int = 256) -> CurveFamily:
    """Horizontal segments joining the vertical sides of [0,a] x [0,b]."""
    if a <= 0 or b <= 0:
        raise DomainError("rectangle sides must be positive")
    ys = (np.arange(n_curves) + 0.5) * b / n_curves
    curves = [np.array([1j * y, a + 1j * y]) for y in ys]
    return CurveFamily(curves, "rectangle-crossing", {"a": a, "b": b})


def annulus_family(r: float, R: float, n_curves: int = 256,
                   center: complex = 0.0) -> CurveFamily:
    """Radial segments joining the two boundary circles of an annulus."""
    if not 0.0 < r < R:
        raise DomainError(f"need 0 < r < R, got r={r}, R={R}")
    fam = radial_family(r, None, n_curves, R, center)
    return CurveFamily(fam.curves, "annulus-crossing", {"r": r, "R": R})


def image_family(fmap, fam: CurveFamily, samples_per_segment: int = 16) -> CurveFamily:
    """Push a family forward through a conformal map, refining each
    segment so the image polylines track the curved images."""
    out = []
    for c in fam.curves:
        refined = [c[0]]
        for k in range(len(c) - 1):
            t = np.linspace(0.0, 1.0, samples_per_segment + 1)[1:]
            refined.extend(c[k] + t * (c[k + 1] - c[k]))
        out.append(fmap.eval(np.asarray(refined)))
    return CurveFamily(out, "image-under-map", dict(fam.meta, source=fam.kind))


def channel_family(spiral, loop_from: int, loop_to: int, n_curves: int = 24,
                   lateral: float = 0.6) -> CurveFamily:
    """Laterally shifted copies of the spiral midline between two loops.

    Each curve runs along the channel from loop_from to loop_to, offset
    from the midline by a constant fraction of the half-gap, so all
    curves stay inside the channel.
    """
    spec = spiral.spec
    m = spec.samples_per_loop
    t = np.arange(loop_from, loop_to + 1e-12, 1.0 / m)
    curves = []
    for s in np.linspace(-lateral, lateral, n_curves):
        curves.append(_midline_offset(spiral, t, s))
    return CurveFamily(curves, "channel", {"from": loop_from, "to": loop_to})


def _midline_offset(spiral, t, frac):
    spec = spiral.spec
    a1 = spec.alpha + 1.0
    r_mid = t ** a1 + 0.5 * ((t + 1.0) ** a1 - t ** a1)
    r_in = t ** a1
    r_out = (t + 1.0) ** a1
    half = 0.5 * (r_out - r_in) - spiral.wall_eps
    r = r_mid + frac * half
    return r * np.exp(2j * math.pi * t)


def spoke_family(center: complex, r_inner: float, r_outer, n_curves: int = 256) -> CurveFamily:
    """Radial spokes from a small circle around center out to per-angle
    radii (scalar or array r_outer)."""
    thetas = np.arange(n_curves) * TWO_PI / n_curves
    r_outer = np.broadcast_to(np.asarray(r_outer, dtype=float), thetas.shape)
    omega = np.exp(1j * thetas)
    curves = [np.array([center + r_inner * w, center + ro * w])
              for w, ro in zip(omega, r_outer)]
    return CurveFamily(curves, "spokes", {"r_inner": r_inner})


# ------------------------------------------------------- discrete solver


@dataclass
class DensityGrid:
    """Optimal density on a uniform grid over the family's bounding box."""

    x0: float
    y0: float
    h: float
    nx: int
    ny: int
    rho: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)

    @property
    def rho2d(self) -> np.ndarray:
        return self.rho.reshape(self.ny, self.nx)


@dataclass
class ModulusResult:
    value: float
    grid: DensityGrid
    kkt_residual: float
    passes: int
    n_curves: int

    def __float__(self):
        return self.value


def _family_matrix(fam: CurveFamily, h: float):
    """Rasterize every curve: CSR matrix of per-cell crossing lengths."""
    xmin, xmax, ymin, ymax = fam.bbox()
    x0 = xmin - 2.0 * h
    y0 = ymin - 2.0 * h
    nx = int(math.ceil((xmax - x0) / h)) + 2
    ny = int(math.ceil((ymax - y0) / h)) + 2
    if nx * ny > 4e7:
        raise DomainError(f"grid {nx}x{ny} too fine for this family")

    seg_a = []
    seg_b = []
    seg_curve = []
    for k, c in enumerate(fam.curves):
        seg_a.append(c[:-1])
        seg_b.append(c[1:])
        seg_curve.append(np.full(len(c) - 1, k, dtype=np.int64))
    a = np.concatenate(seg_a)
    b = np.concatenate(seg_b)
    seg_curve = np.concatenate(seg_curve)

    offs, cells, lens = kernels.raster_segments(
        np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag),
        np.ascontiguousarray(b.real), np.ascontiguousarray(b.imag),
        x0, y0, h, nx, ny)

    rows = []
    cols = []
    vals = []
    for k in range(len(a)):
        lo, hi = offs[k], offs[k + 1]
        rows.append(np.full(hi - lo, seg_curve[k], dtype=np.int64))
        cols.append(cells[lo:hi])
        vals.append(lens[lo:hi])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    mat = sp.coo_matrix((vals, (rows, cols)),
                        shape=(fam.n_curves, nx * ny)).tocsr()
    mat.sum_duplicates()
    empty = np.diff(mat.indptr) == 0
    if np.any(empty):
        raise FormatError(f"curves {np.where(empty)[0][:5].tolist()} miss the grid")
    return mat, (x0, y0, h, nx, ny)


def discrete_modulus(fam: CurveFamily, h: float, tol: float = 1e-6,
                     max_passes: int = 60000) -> ModulusResult:
    """Discrete modulus of a polyline family at grid size h.

    Solves min h^2 * sum(rho^2) subject to one admissibility constraint
    per curve, to KKT residual <= tol.  The value is a finite-subfamily
    approximation: enriching the family raises it toward the continuum
    modulus, refining h sharpens the geometry.
    """
    if h <= 0:
        raise DomainError("cell size must be positive")
    mat, (x0, y0, h, nx, ny) = _family_matrix(fam, h)
    m = fam.n_curves
    rownorm2 = np.asarray(mat.multiply(mat).sum(axis=1)).ravel()
    lam = np.zeros(m)
    rho = np.zeros(nx * ny)
    h2 = h * h

    indptr = mat.indptr.astype(np.int64)
    indices = mat.indices.astype(np.int64)
    vals = mat.data

    block = 40
    done = 0
    kkt = math.inf
    while done < max_passes:
        kernels.hildreth_sweep(indptr, indices, vals, rownorm2, lam, rho, h2, block)
        done += block
        s = mat @ rho
        primal = float(np.max(np.maximum(0.0, 1.0 - s)))
        lam_top = float(lam.max()) if m else 0.0
        comp = float(np.max(lam * np.maximum(0.0, s - 1.0))) / (lam_top + 1e-300)
        kkt = max(primal, comp)
        if kkt <= tol:
            break
    else:
        raise ConvergenceError(f"modulus solver stalled at KKT residual {kkt:.3e}")

    value = float(h2 * np.dot(rho, rho))
    grid = DensityGrid(x0, y0, h, nx, ny, rho,
                       np.maximum(0.0, 1.0 - (mat @ rho)))
    return ModulusResult(value, grid, kkt, done, m)


# -------------------------------------------------------------- oracles


def radial_modulus_exact(sigma_e: float, r: float) -> float:
    """Modulus of the radial segments from |z|=r to a direction set of
    measure sigma_e: sigma_e / log(1/r)."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"need 0 < r < 1, got {r}")
    if not 0.0 <= sigma_e <= TWO_PI + 1e-12:
        raise DomainError(f"direction measure must lie in [0, 2*pi], got {sigma_e}")
    return sigma_e / math.log(1.0 / r)


def annulus_modulus_bound(r: float, R: float) -> float:
    """Upper bound 2*pi/log(R/r) for families joining the boundary
    circles of the annulus r < |z - x| < R."""
    if not 0.0 < r < R:
        raise DomainError(f"need 0 < r < R, got r={r}, R={R}")
    return TWO_PI / math.log(R / r)


# ---------------------------------------------------------- lemma checks


@dataclass
class ModulusBoundReport:
    modulus: float
    bound: float
    passed: bool
    implied_constant: float
    delta: float
    length: float


def check_intrinsic_modulus_bound(domain, e_points, fam: CurveFamily,
                                  delta: float, length: float,
                                  h: float, c_emp: float = 100.0) -> ModulusBoundReport:
    """Check Mod(Gamma) <= C / log(1 + L/delta) for curves leaving a set
    E of intrinsic diameter <= delta, each of length >= L >= delta.

    Preconditions are verified: the intrinsic diameter of e_points, that
    every curve starts or ends within 1e-9 of E, and the length floor.
    """
    from .intrinsic import intrinsic_distances_from

    e_points = np.asarray(e_points, dtype=complex).ravel()
    if length < delta:
        raise DomainError(f"need L >= delta, got L={length}, delta={delta}")
    diam = 0.0
    for i in range(len(e_points)):
        d = intrinsic_distances_from(domain, e_points[i], e_points[i + 1:])
        if d.size:
            diam = max(diam, float(d.max()))
    if diam > delta * (1.0 + 1e-9):
        raise DomainError(f"intrinsic diameter of E is {diam}, exceeds delta={delta}")

    tol = 1e-9 * max(1.0, float(np.abs(e_points).max()))
    bad = []
    lens = fam.lengths()
    for k, c in enumerate(fam.curves):
        near = min(np.abs(c[0] - e_points).min(), np.abs(c[-1] - e_points).min())
        if near > tol:
            bad.append((k, "no endpoint in E"))
        if lens[k] < length * (1.0 - 1e-9):
            bad.append((k, f"length {lens[k]:.3g} < L"))
    if bad:
        raise DomainError(f"curve preconditions failed: {bad[:5]}")

    mod = discrete_modulus(fam, h).value
    bound = c_emp / math.log1p(length / delta)
    return ModulusBoundReport(mod, bound, mod <= bound,
                              mod * math.log1p(length / delta), delta, length)


@dataclass
class ShadowEscapeReport:
    fraction: float
    bound: float
    passed: bool
    m_factor: float
    variant: str
    n_samples: int


def _shadow_boundary_values(fmap, x, n_theta: int, depth_pad: int):
    """Evaluate f near the boundary over the shadow of x.

    x may be complex, or a pair (m_exp, theta) meaning (1-2**-m)e^{i theta}
    for cells too deep for double precision; those are evaluated at the
    map's fitting precision.  Returns (f(x), image samples)."""
    if isinstance(x, tuple):
        import gmpy2

        m_exp, theta = x
        fx = complex(fmap.eval_radial(m_exp, theta))
        half = gmpy2.mpfr(2) ** (-m_exp - 1) / (1 - gmpy2.mpfr(2) ** (-m_exp))
        s_vals = np.linspace(-1.0, 1.0, n_theta)
        out = []
        for s in s_vals:
            th = gmpy2.mpfr(theta) + gmpy2.mpfr(float(s)) * half
            out.append(complex(fmap.eval_radial(m_exp + depth_pad, th)))
        return fx, np.asarray(out)

    x = complex(x)
    fx = complex(fmap.eval(x))
    cell = make_whitney_cell(x)
    theta0 = math.atan2(x.imag, x.real)
    half = cell.half_angle if not cell.full_circle else math.pi
    r_eval = 1.0 - (1.0 - abs(x)) * 2.0 ** (-depth_pad)
    thetas = theta0 + np.linspace(-half, half, n_theta)
    pts = r_eval * np.exp(1j * thetas)
    return fx, fmap.eval(pts)


def check_shadow_escape_bound(fmap, x, m_factor: float, variant: str = "intrinsic",
                              n_theta: int = 64, depth_pad: int = 8,
                              c_emp: float = 10.0, domain=None) -> ShadowEscapeReport:
    """Measure the shadow fraction escaping by factor M and compare it
    with the 1/log(M) decay.

    Intrinsic variant: fraction of shadow directions where the near-
    boundary image lies at intrinsic distance > M * dist(f(x), boundary)
    from f(x).  Euclidean variant: fraction where |f| drops below
    |f(x)|/M; it requires a map whose image omits 0.
    """
    if m_factor <= 1.0:
        raise DomainError(f"need M > 1, got {m_factor}")
    if variant not in ("intrinsic", "euclidean"):
        raise DomainError(f"unknown variant {variant!r}")

    dom = domain if domain is not None else fmap.domain
    if variant == "euclidean" and dom.contains(0.0):
        raise DomainError("euclidean escape bound needs a map omitting 0")

    fx, values = _shadow_boundary_values(fmap, x, n_theta, depth_pad)

    if variant == "euclidean":
        frac = float(np.mean(np.abs(values) < abs(fx) / m_factor))
    else:
        from .intrinsic import intrinsic_distances_from

        d_wall = dom.distance_to_boundary(fx)
        pts = snap_inside(dom, values)
        dists = intrinsic_distances_from(dom, fx, pts)
        frac = float(np.mean(dists > m_factor * d_wall))

    bound = c_emp / math.log(m_factor)
    return ShadowEscapeReport(frac, bound, frac <= bound, m_factor, variant,
                              int(n_theta))
