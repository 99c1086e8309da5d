"""Conformal maps of the unit disk onto planar domains.

Two families:

* an analytic catalog (identity, Koebe, square, strip, slit maps) with
  closed-form evaluation, derivative, and inverse;
* ``ZipperMap``, fitted to a polygon boundary with the geodesic zipper
  algorithm.

The zipper composition welds one boundary vertex per stage.  For spiral
domains the intermediate images of pending boundary points collapse toward
the real axis at depth growing like loops^2, far below float64, so the fit
parameters are computed AND stored in multiprecision (gmpy2) and every
evaluation replays the exact chain at fit precision.  Rounding the stage
parameters to float64 defines a different map whose deep evaluations are
wrong by O(1), so no double-precision fast path exists.

All maps are normalized to f(0) = basepoint with f'(0) > 0 (fitted maps are
post-rotated to make the derivative real positive).
"""

import base64
import cmath
import json
import math
import time

import gmpy2
import numpy as np
from gmpy2 import get_context, mpc, mpfr
from scipy.special import hyp2f1

from .errors import ConvergenceError, DomainError, FitError, FormatError
from .geometry import PolygonDomain, build_spiral_domain, regular_polygon

SQUARE_CORNER = 1.3110287771460598


def _as_points(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _check_disk(arr, closed=False):
    lim = 1.0 + 1e-12 if closed else 1.0 - 1e-15
    if np.any(np.abs(arr) >= lim):
        raise DomainError("evaluation point must lie in the open unit disk")


class ConformalMap:
    """Base class: a conformal map f of the unit disk onto a planar domain,
    with f(0) = basepoint of the image domain."""

    label = "abstract"

    def eval(self, z):
        arr, scalar = _as_points(z)
        _check_disk(arr)
        out = self._eval(arr)
        return complex(out) if scalar else out

    def deriv(self, z):
        arr, scalar = _as_points(z)
        _check_disk(arr)
        out = self._deriv(arr)
        return complex(out) if scalar else out

    def invert(self, w):
        arr, scalar = _as_points(w)
        out = self._invert(arr)
        return complex(out) if scalar else out

    @property
    def domain(self):
        """Polygonal proxy of the image domain (exact for polygon images,
        truncated for unbounded ones)."""
        d = getattr(self, "_domain_cache", None)
        if d is None:
            d = self._make_domain()
            self._domain_cache = d
        return d

    @property
    def basepoint(self):
        return complex(self.eval(0.0))

    def to_dict(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


# -- analytic catalog ------------------------------------------------------


class IdentityMap(ConformalMap):
    label = "identity"

    def _eval(self, z):
        return z + 0.0

    def _deriv(self, z):
        return np.ones_like(np.asarray(z, complex))

    def _invert(self, w):
        return w + 0.0

    def _make_domain(self):
        n = 256
        return regular_polygon(n, circumradius=1.0 / math.cos(math.pi / n))

    def to_dict(self):
        return {"type": "identity"}


class KoebeMap(ConformalMap):
    """k(z) = z/(1-z)^2 + shift, mapping the disk onto the plane minus the
    ray (-inf, shift - 1/4].  The polygon proxy truncates the plane at a
    large circle with a thin wedge along the slit."""

    def __init__(self, shift=0.0, truncation=1.0e9):
        self.shift = float(shift)
        self.truncation = float(truncation)
        self.label = "koebe" if shift == 0.0 else f"koebe+{shift:g}"

    def _eval(self, z):
        return z / (1.0 - z) ** 2 + self.shift

    def _deriv(self, z):
        return (1.0 + z) / (1.0 - z) ** 3

    def _invert(self, w):
        u = np.asarray(w, complex) - self.shift
        small = np.abs(u) < 1e-12
        usafe = np.where(small, 1.0, u)
        z = (2.0 * usafe + 1.0 - np.sqrt(4.0 * usafe + 1.0)) / (2.0 * usafe)
        return np.where(small, u, z)

    def _make_domain(self):
        R = self.truncation
        tip = -0.25 + self.shift
        phi = 1e-6
        n_arc = 512
        th = np.linspace(math.pi - phi, -(math.pi - phi), n_arc) + 0.0
        arc = self.shift + R * np.exp(-1j * th)
        # arc runs CCW from angle -(pi - phi) around through 0 up to pi - phi
        verts = np.concatenate([arc, [tip]])
        return PolygonDomain(verts, self.shift, _skip_simple_check=True,
                             metadata={"truncated": True})

    def to_dict(self):
        return {"type": "koebe", "shift": self.shift,
                "truncation": self.truncation}


class SquareMap(ConformalMap):
    """Disk onto the diamond |x| + |y| < SQUARE_CORNER (a square rotated by
    45 degrees), f(z) = z * 2F1(1/4, 1/2; 5/4; z^4), f'(z) = (1-z^4)^(-1/2)."""

    label = "square"

    def _eval(self, z):
        z = np.asarray(z, complex)
        return z * hyp2f1(0.25, 0.5, 1.25, z ** 4)

    def _deriv(self, z):
        z = np.asarray(z, complex)
        return 1.0 / np.sqrt(1.0 - z ** 4)

    def _invert(self, w):
        w = np.asarray(w, complex)
        z = w / SQUARE_CORNER * 0.9
        for _ in range(100):
            step = (self._eval(z) - w) * np.sqrt(1.0 - z ** 4)
            zn = z - step
            zn = np.where(np.abs(zn) >= 1.0, z * 0.5 + zn / (2.0 * np.abs(zn)), zn)
            if np.max(np.abs(zn - z)) < 1e-14:
                z = zn
                break
            z = zn
        else:
            raise ConvergenceError("square map inversion did not converge")
        return z

    def _make_domain(self):
        c = SQUARE_CORNER
        return PolygonDomain([c, 1j * c, -c, -1j * c], 0.0)

    def to_dict(self):
        return {"type": "square"}


class StripLogMap(ConformalMap):
    """f(z) = log((1+z)/(1-z)): disk onto the strip |Im w| < pi/2."""

    label = "strip-log"

    def __init__(self, truncation=30.0):
        self.truncation = float(truncation)

    def _eval(self, z):
        return np.log((1.0 + z) / (1.0 - z))

    def _deriv(self, z):
        return 2.0 / (1.0 - z * z)

    def _invert(self, w):
        return np.tanh(np.asarray(w, complex) / 2.0)

    def _make_domain(self):
        X = self.truncation
        h = math.pi / 2.0
        return PolygonDomain([X - 1j * h, X + 1j * h, -X + 1j * h, -X - 1j * h],
                             0.0, metadata={"truncated": True})

    def to_dict(self):
        return {"type": "strip-log", "truncation": self.truncation}


class HalfPlaneSlitMap(ConformalMap):
    """Disk -> half-plane -> half-plane minus a vertical slit -> disk.
    The image is the disk minus a radial slit reaching the boundary at -1;
    the slit map on the half-plane is w -> sqrt(w^2 - c^2)."""

    def __init__(self, c=1.0):
        if c <= 0:
            raise FormatError("slit height must be positive")
        self.c = float(c)
        self.label = f"halfplane-slit:{self.c:g}"

    @staticmethod
    def _h(z):
        return 1j * (1.0 + z) / (1.0 - z)

    @staticmethod
    def _hinv(w):
        return (w - 1j) / (w + 1j)

    def _g(self, w):
        return w * np.sqrt(1.0 - (self.c / w) ** 2)

    def _ginv(self, v):
        return v * np.sqrt(1.0 + (self.c / v) ** 2)

    def _eval(self, z):
        return self._hinv(self._g(self._h(z)))

    def _deriv(self, z):
        w = self._h(z)
        g = self._g(w)
        dh = 2j / (1.0 - z) ** 2
        dg = w / g
        db = 2j / (g + 1j) ** 2
        return db * dg * dh

    def _invert(self, p):
        v = self._h(np.asarray(p, complex))
        w = self._ginv(v)
        return (w - 1j) / (w + 1j)

    def _make_domain(self):
        tip = (self.c - 1.0) / (self.c + 1.0)
        n = 512
        phi = 1e-7
        th = np.linspace(math.pi - phi, -(math.pi - phi), n)
        arc = np.exp(-1j * th)
        verts = np.concatenate([arc, [tip]])
        bp = complex(self._eval(np.array(0j)))
        return PolygonDomain(verts, bp, _skip_simple_check=True)

    def to_dict(self):
        return {"type": "halfplane-slit", "c": self.c}


class RadialSlitDiskMap(ConformalMap):
    """Disk onto the disk minus the radial slit [rho, 1), via
    f = K^{-1}(m K(z)) with K(z) = z/(1+z)^2 and m = 4 rho/(1+rho)^2."""

    def __init__(self, rho=0.5):
        if not (0 < rho < 1):
            raise FormatError("slit start rho must be in (0, 1)")
        self.rho = float(rho)
        self.m = 4.0 * rho / (1.0 + rho) ** 2
        self.label = f"radial-slit-disk:{self.rho:g}"

    @staticmethod
    def _K(z):
        return z / (1.0 + z) ** 2

    @staticmethod
    def _Kinv(w):
        w = np.asarray(w, complex)
        small = np.abs(w) < 1e-12
        wsafe = np.where(small, 1.0, w)
        z = (1.0 - 2.0 * wsafe - np.sqrt(1.0 - 4.0 * wsafe)) / (2.0 * wsafe)
        return np.where(small, w, z)

    @staticmethod
    def _dK(z):
        return (1.0 - z) / (1.0 + z) ** 3

    def _eval(self, z):
        return self._Kinv(self.m * self._K(z))

    def _deriv(self, z):
        f = self._eval(z)
        return self.m * self._dK(z) / self._dK(f)

    def _invert(self, w):
        return self._Kinv(self._K(np.asarray(w, complex)) / self.m)

    def _make_domain(self):
        n = 512
        phi = 1e-7
        th = np.linspace(phi, 2.0 * math.pi - phi, n)
        arc = np.exp(1j * th)
        verts = np.concatenate([arc, [self.rho]])
        return PolygonDomain(verts, 0.0, _skip_simple_check=True)

    def to_dict(self):
        return {"type": "radial-slit-disk", "rho": self.rho}


def catalog():
    """Name -> factory for the analytic map catalog."""
    return {
        "identity": IdentityMap,
        "koebe": KoebeMap,
        "koebe-shifted": lambda: KoebeMap(shift=0.3),
        "square": SquareMap,
        "strip-log": StripLogMap,
        "halfplane-slit": HalfPlaneSlitMap,
        "radial-slit-disk": RadialSlitDiskMap,
    }


def make_map(name, **kw):
    try:
        factory = catalog()[name]
    except KeyError:
        raise FormatError(f"unknown catalog map {name!r}") from None
    return factory(**kw) if kw else factory()


# -- zipper fit ------------------------------------------------------------


def _fsqrt(z):
    w = gmpy2.sqrt(z)
    if w.imag < 0:
        w = -w
    return w


def estimate_digits(domain):
    """Working precision (decimal digits) for the zipper fit.  Spiral walls
    make pending boundary images collapse to about exp(-14 J^2/(1+alpha)),
    calibrated on fitted spirals; generic polygons start small and escalate
    on failure."""
    meta = domain.metadata.get("spiral")
    if meta:
        J = meta["loops"]
        alpha = meta["alpha"]
        return int((14.0 * J * J / (1.0 + alpha) + 250.0) / math.log(10)) + 60
    return 60


def _refine_chain(verts, target):
    """Subdivide polygon edges until the chain has at least ``target``
    points, splitting proportionally to edge length."""
    verts = np.asarray(verts, complex)
    n = verts.size
    if n >= target:
        return verts.copy()
    nxt = np.roll(verts, -1)
    lens = np.abs(nxt - verts)
    per = lens.sum()
    out = []
    for k in range(n):
        pieces = max(1, int(round(target * lens[k] / per)))
        ts = np.arange(pieces) / pieces
        out.append(verts[k] + ts * (nxt[k] - verts[k]))
    return np.concatenate(out)


class ZipperMap(ConformalMap):
    """Conformal map fitted to a polygon with the geodesic zipper.

    Stage parameters are gmpy2 multiprecision scalars; evaluation and
    inversion replay the exact welding chain at fit precision.
    """

    def __init__(self, domain, bits, S, B, C, sT, a, v0, v1, rot,
                 diagnostics=None):
        self._domain_cache = domain
        self.bits = bits
        self.S, self.B, self.C = S, B, C
        self.sT = sT
        self.a = a
        self.v0, self.v1 = v0, v1
        self.rot = rot
        self.n_stages = len(S)
        self.diagnostics = dict(diagnostics or {})
        self.label = f"zipper[{domain.n_vertices}v]"

    # mp core -------------------------------------------------------------

    def _ctx(self):
        get_context().precision = self.bits

    def _eval_point(self, w):
        """Disk point (complex or mpc) -> image point (mpc)."""
        self._ctx()
        wm = w if isinstance(w, mpc) else mpc(w)
        wm = wm * self.rot
        a = self.a
        u = (a - a.conjugate() * wm) / (1 - wm)
        v = -_fsqrt(-u)
        if v.imag < 0:
            v = -v
        u = v / (1 + v)
        u = u * self.sT
        for k in range(self.n_stages - 1, -1, -1):
            c = self.C[k]
            v = _fsqrt(u * u - c * c)
            b = self.B[k]
            if gmpy2.is_finite(b):
                v = v / (1 + v / b)
            u = v * self.S[k]
        q = -u * u
        return (self.v1 - q * self.v0) / (1 - q)

    def _deriv_point(self, w):
        """Derivative of the map at a disk point, via the stage chain."""
        self._ctx()
        wm = w if isinstance(w, mpc) else mpc(w)
        wm = wm * self.rot
        a = self.a
        one = mpfr(1)
        u = (a - a.conjugate() * wm) / (1 - wm)
        d = (a - a.conjugate()) / ((1 - wm) * (1 - wm))
        v = -_fsqrt(-u)
        if v.imag < 0:
            v = -v
        if v == 0:
            raise DomainError("derivative undefined at a welding point")
        d = d * (-1) / (2 * v)
        u = v / (1 + v)
        d = d / ((1 + v) * (1 + v))
        u = u * self.sT
        d = d * self.sT
        for k in range(self.n_stages - 1, -1, -1):
            c = self.C[k]
            v = _fsqrt(u * u - c * c)
            if v == 0:
                raise DomainError("derivative undefined at a welding point")
            d = d * u / v
            b = self.B[k]
            if gmpy2.is_finite(b):
                t = 1 + v / b
                d = d / (t * t)
                v = v / t
            u = v * self.S[k]
            d = d * self.S[k]
        q = -u * u
        d = d * (-2 * u)
        d = d * (self.v1 - self.v0) / ((1 - q) * (1 - q))
        return d * self.rot

    def _invert_point(self, z):
        """Image point -> disk point (mpc), plus log(1 - |w|)."""
        self._ctx()
        zm = z if isinstance(z, mpc) else mpc(z)
        I = mpc(0, 1)
        u = I * gmpy2.sqrt((zm - self.v1) / (zm - self.v0))
        if u.imag < 0:
            u = -u
        for k in range(self.n_stages):
            u = u / self.S[k]
            b = self.B[k]
            if gmpy2.is_finite(b):
                u = u / (1 - u / b)
            u = _fsqrt(u * u + self.C[k] * self.C[k])
        u = u / self.sT
        u = u / (1 - u)
        u = -u * u
        w = (u - self.a) / (u - self.a.conjugate())
        w = w / self.rot
        one_m = 1 - abs(w)
        log1m = gmpy2.log(one_m) if one_m > 0 else mpfr("-inf")
        return w, float(log1m)

    # public API ------------------------------------------------------------

    def _eval(self, z):
        flat = np.atleast_1d(np.asarray(z, complex)).ravel()
        out = np.array([complex(self._eval_point(p)) for p in flat])
        return out.reshape(np.shape(z))

    def _deriv(self, z):
        flat = np.atleast_1d(np.asarray(z, complex)).ravel()
        out = np.array([complex(self._deriv_point(p)) for p in flat])
        return out.reshape(np.shape(z))

    def _invert(self, w):
        flat = np.atleast_1d(np.asarray(w, complex)).ravel()
        out = np.array([complex(self._invert_point(p)[0]) for p in flat])
        return out.reshape(np.shape(w))

    def invert_with_depth(self, z):
        """Inverse image of a domain point with log(1 - |w|) computed in
        multiprecision (the disk point itself may round to the circle)."""
        w, log1m = self._invert_point(z)
        return complex(w), log1m

    def roundtrip_error(self, z):
        """|f(f^{-1}(z)) - z| computed entirely at fit precision, valid even
        when the preimage is too close to the circle for float64."""
        w, _ = self._invert_point(mpc(complex(z)))
        z2 = self._eval_point(w)
        return abs(complex(z2) - complex(z))

    def invert_polar(self, z):
        """Inverse image in polar form (m_exp, theta) with |w| = 1 - 2^-m_exp
        and theta a full-precision angle.  Deep preimages keep their angular
        identity this way: the double-rounded angle can be off by far more
        than the width of the cell around w."""
        w, log1m = self._invert_point(mpc(complex(z)))
        m_exp = -log1m / math.log(2.0)
        theta = gmpy2.atan2(w.imag, w.real)
        return m_exp, theta

    def eval_radial(self, m_exp, theta):
        """Evaluate at r * exp(i theta) with r = 1 - 2^(-m_exp), with r
        built at fit precision so m_exp may exceed the float64 range."""
        self._ctx()
        r = 1 - mpfr(2) ** (-mpfr(m_exp))
        th = mpfr(theta)
        w = r * mpc(gmpy2.cos(th), gmpy2.sin(th))
        return complex(self._eval_point(w))

    # serialization ----------------------------------------------------------

    def to_dict(self):
        def enc(x):
            return base64.b64encode(gmpy2.to_binary(x)).decode("ascii")

        return {
            "type": "zipper",
            "bits": self.bits,
            "S": [enc(x) for x in self.S],
            "B": [enc(x) for x in self.B],
            "C": [enc(x) for x in self.C],
            "sT": enc(self.sT),
            "a": enc(self.a),
            "v0": enc(self.v0),
            "v1": enc(self.v1),
            "rot": enc(self.rot),
            "domain": self.domain.to_dict(),
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, data):
        def dec(s):
            return gmpy2.from_binary(base64.b64decode(s.encode("ascii")))

        dom = PolygonDomain.from_dict(data["domain"])
        return cls(dom, int(data["bits"]),
                   [dec(x) for x in data["S"]],
                   [dec(x) for x in data["B"]],
                   [dec(x) for x in data["C"]],
                   dec(data["sT"]), dec(data["a"]),
                   dec(data["v0"]), dec(data["v1"]), dec(data["rot"]),
                   data.get("diagnostics"))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def load_map(path):
    """Load a serialized map (zipper or catalog entry) from JSON."""
    with open(path) as fh:
        data = json.load(fh)
    return map_from_dict(data)


def map_from_dict(data):
    t = data.get("type")
    if t == "zipper":
        return ZipperMap.from_dict(data)
    if t == "identity":
        return IdentityMap()
    if t == "koebe":
        return KoebeMap(shift=data.get("shift", 0.0),
                        truncation=data.get("truncation", 1.0e9))
    if t == "square":
        return SquareMap()
    if t == "strip-log":
        return StripLogMap(truncation=data.get("truncation", 30.0))
    if t == "halfplane-slit":
        return HalfPlaneSlitMap(c=data.get("c", 1.0))
    if t == "radial-slit-disk":
        return RadialSlitDiskMap(rho=data.get("rho", 0.5))
    raise FormatError(f"unknown serialized map type {t!r}")


def _fit_chain_mp(verts, base, bits):
    """Run the welding chain at the given precision.  Returns the stage
    parameters or raises FitError when an intermediate image leaves the
    upper half-plane (precision too low or geometry invalid)."""
    get_context().precision = bits
    n = len(verts)
    v0, v1 = mpc(complex(verts[0])), mpc(complex(verts[1]))
    W = [mpc(complex(z)) for z in verts[2:]]
    zb = mpc(complex(base))
    I = mpc(0, 1)
    W = [I * gmpy2.sqrt((z - v1) / (z - v0)) for z in W]
    zb = I * gmpy2.sqrt((zb - v1) / (zb - v0))
    w0 = None
    S, B, C = [], [], []
    for k in range(n - 2):
        a = W[k]
        s = abs(a)
        if not gmpy2.is_finite(s) or s == 0:
            raise FitError(f"stage {k}: degenerate prevertex")
        a = a / s
        if not (a.imag > 0):
            raise FitError(f"stage {k}: prevertex left the half-plane "
                           f"(Im = {float(a.imag):.3e}); raise precision")
        b = (1 / a.real) if a.real != 0 else mpfr("inf")
        c = 1 / a.imag
        c2 = c * c
        S.append(s)
        B.append(b)
        C.append(c)
        fin_b = gmpy2.is_finite(b)
        for i in range(k + 1, n - 2):
            w = W[i] / s
            if fin_b:
                w = w / (1 - w / b)
            W[i] = _fsqrt(w * w + c2)
        zb = zb / s
        if fin_b:
            zb = zb / (1 - zb / b)
        zb = _fsqrt(zb * zb + c2)
        if w0 is None:
            w0 = gmpy2.sqrt(b * b + c2) if fin_b else abs(c)
        else:
            w0 = w0 / s
            if fin_b:
                w0 = w0 / (1 - w0 / b)
            w0 = gmpy2.sqrt(w0 * w0 + c2)
    sT = w0
    zb = zb / sT
    zb = zb / (1 - zb)
    zb = -zb * zb
    if not (gmpy2.is_finite(zb.real) and zb.imag > 0):
        raise FitError("basepoint image collapsed onto the boundary; "
                       "raise precision")
    return S, B, C, sT, zb, v0, v1


def fit_conformal(domain, resolution=None, digits=None, max_attempts=3,
                  injectivity_grid=(10, 24)):
    """Fit a conformal map of the disk onto the polygon domain.

    The boundary chain is refined to at least ``resolution`` points (default:
    the chain itself), the welding chain is run at ``digits`` working
    precision (default from ``estimate_digits``), escalating on failure up
    to ``max_attempts`` times.  The returned ZipperMap carries diagnostics:
    basepoint error, boundary fidelity eps_fit, injectivity check, and a
    derivative consistency check.
    """
    verts = domain.vertices
    if resolution is None:
        # sparse chains (hand-made polygons) interpolate poorly between
        # prevertices; refine to a moderate floor before welding
        resolution = 128
    elif int(resolution) < 4:
        raise FormatError(f"resolution must be >= 4, got {resolution}")
    verts = _refine_chain(verts, int(resolution))
    digits = int(digits) if digits else estimate_digits(domain)
    t_start = time.time()
    last_err = None
    for attempt in range(max_attempts):
        bits = int(digits * 3.33) + 16
        try:
            S, B, C, sT, a, v0, v1 = _fit_chain_mp(verts, domain.basepoint, bits)
            break
        except FitError as e:
            last_err = e
            digits = int(digits * 1.6) + 50
    else:
        raise FitError(f"fit failed after {max_attempts} attempts: {last_err}")
    fit_seconds = time.time() - t_start

    fmap = ZipperMap(domain, bits, S, B, C, sT, a, v0, v1, mpc(1))
    # rotate so the derivative at the origin is real positive
    d0 = fmap._deriv_point(mpc(0))
    get_context().precision = bits
    mod = abs(d0)
    if mod == 0:
        raise FitError("vanishing derivative at the origin")
    fmap.rot = d0.conjugate() / mod

    diag = {"digits": digits, "bits": bits, "n_stages": fmap.n_stages,
            "fit_seconds": fit_seconds,
            "base_im": float(a.imag / abs(a))}
    diag["f0_error"] = abs(complex(fmap._eval_point(mpc(0))) - domain.basepoint)

    # boundary fidelity: near-circle samples must land near the polygon.
    # Points exactly on the circle ride the welding branch cuts, so probe
    # just inside instead.
    r_probe = 1.0 - 2.0 ** -40
    th = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    ring = np.array([complex(fmap._eval_point(mpc(r_probe * cmath.exp(1j * t))))
                     for t in th])
    dists = domain.distances_many(ring)
    scale = max(1.0, float(np.max(np.abs(verts))))
    diag["eps_fit"] = float(np.max(dists)) / scale
    diag["eps_fit_median"] = float(np.median(dists)) / scale

    # injectivity on a grid
    nr, nt = injectivity_grid
    rs = np.linspace(0.15, 0.99, nr)
    ts = np.linspace(0, 2 * np.pi, nt, endpoint=False)
    grid = (rs[:, None] * np.exp(1j * ts)[None, :]).ravel()
    img = fmap._eval(grid)
    dmin = np.inf
    for i in range(img.size - 1):
        dmin = min(dmin, np.min(np.abs(img[i + 1:] - img[i])))
    diag["injectivity_min_sep"] = float(dmin)
    diag["injective"] = bool(dmin > 1e-9)

    # derivative versus central differences at a few interior points
    rng = np.random.default_rng(5)
    pts = 0.8 * (rng.random(8) - 0.5 + 1j * (rng.random(8) - 0.5))
    h = 1e-7
    rel = 0.0
    for p in pts:
        d_an = complex(fmap._deriv_point(mpc(p)))
        d_fd = (complex(fmap._eval_point(mpc(p + h)))
                - complex(fmap._eval_point(mpc(p - h)))) / (2 * h)
        if d_an != 0:
            rel = max(rel, abs(d_an - d_fd) / abs(d_an))
    diag["deriv_fd_rel"] = rel

    fmap.diagnostics = diag
    return fmap


# -- convenience wrappers (operation names of the public surface) ----------


def eval_map(fmap, z):
    return fmap.eval(z)


def eval_deriv(fmap, z):
    d = fmap.deriv(z)
    if np.any(np.asarray(d) == 0):
        raise DomainError("derivative vanished: map is not conformal there")
    return d


def invert_map(fmap, w):
    return fmap.invert(w)


def radial_boundary_value(fmap, omega, r_max=0.999):
    """Boundary probe along a ray: f at r_max plus a Cauchy-style gap
    against the twice-closer radius."""
    if r_max < 0.9:
        raise DomainError("r_max must be at least 0.9")
    omega = complex(omega)
    omega /= abs(omega)
    r_prev = 1.0 - 2.0 * (1.0 - r_max)
    w1 = fmap.eval(r_max * omega)
    w0 = fmap.eval(r_prev * omega)
    return {"value": w1, "r_max": r_max,
            "cauchy_gap": abs(w1 - w0), "previous": w0}
