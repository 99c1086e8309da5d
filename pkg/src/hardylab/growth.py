"""Growth functions psi: [0, inf) -> [0, inf) and their doubling behavior.

Three kinds:

    pow       psi(t) = t**p, p > 0
    expalpha  psi(t) = exp(t**(2/(1+alpha))) - 1, alpha >= 0
    table     monotone interpolation of user-supplied (t, psi) samples

``doubling_constant`` estimates sup_t psi(2t)/psi(t) on a log-spaced grid,
working with log(psi) so that huge values do not overflow.  Ratios above
``RATIO_CAP`` flag the function as non-doubling.
"""

import json
import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import FormatError

RATIO_CAP = 1.0e12
_FLOOR_LOG = math.log(1e-300)


class GrowthFunction:
    """A growth function with vectorized evaluation, derivative, and
    log-scale evaluation for overflow-free ratio work."""

    def __init__(self, kind, p=None, alpha=None, table=None, label=None):
        self.kind = kind
        if kind == "pow":
            if p is None or not (p > 0):
                raise FormatError("pow growth needs exponent p > 0")
            self.p = float(p)
            self.label = label or f"pow:{self.p:g}"
        elif kind == "expalpha":
            if alpha is None or alpha < 0:
                raise FormatError("expalpha growth needs alpha >= 0")
            self.alpha = float(alpha)
            self.q = 2.0 / (1.0 + self.alpha)
            self.label = label or f"expalpha:{self.alpha:g}"
        elif kind == "table":
            t, v = np.asarray(table[0], float), np.asarray(table[1], float)
            if t.size < 3:
                raise FormatError("table growth needs at least 3 samples")
            if t[0] != 0.0 or v[0] != 0.0:
                raise FormatError("table must start at (0, 0)")
            if np.any(np.diff(t) <= 0) or np.any(np.diff(v) <= 0):
                raise FormatError("table samples must be strictly increasing")
            self._interp = PchipInterpolator(t, v, extrapolate=False)
            self._dinterp = self._interp.derivative()
            self.t_hi = float(t[-1])
            self.v_hi = float(v[-1])
            self._slope_hi = float(self._dinterp(self.t_hi))
            self.label = label or "table"
        else:
            raise FormatError(f"unknown growth kind {kind!r}")

    def __call__(self, t):
        t = np.asarray(t, float)
        if np.any(t < 0):
            raise FormatError("growth functions are defined for t >= 0")
        if self.kind == "pow":
            return t ** self.p
        if self.kind == "expalpha":
            return _expalpha_eval(t, self.q)
        inside = t <= self.t_hi
        out = np.where(inside, self._interp(np.minimum(t, self.t_hi)),
                       self.v_hi + self._slope_hi * (t - self.t_hi))
        return out

    def log_psi(self, t):
        """log(psi(t)), finite even where psi overflows float64."""
        t = np.asarray(t, float)
        with np.errstate(divide="ignore"):
            if self.kind == "pow":
                return self.p * np.log(t)
            if self.kind == "expalpha":
                u = t ** self.q
                small = u < 30.0
                out = np.where(small, np.log(np.expm1(np.minimum(u, 30.0))), u)
                return out
            return np.log(self.__call__(t))

    def deriv(self, t):
        t = np.asarray(t, float)
        if self.kind == "pow":
            return self.p * t ** (self.p - 1.0)
        if self.kind == "expalpha":
            u = t ** self.q
            return self.q * t ** (self.q - 1.0) * np.exp(np.minimum(u, 709.0))
        inside = t <= self.t_hi
        return np.where(inside, self._dinterp(np.minimum(t, self.t_hi)),
                        self._slope_hi)

    def doubling_constant(self, t_max=1.0e8, samples=600):
        return doubling_constant(self, t_max=t_max, samples=samples)

    def to_spec(self):
        if self.kind == "pow":
            return f"pow:{self.p:g}"
        if self.kind == "expalpha":
            return f"expalpha:{self.alpha:g}"
        return "table"

    def __repr__(self):
        return f"GrowthFunction({self.label})"


def _expalpha_eval(t, q):
    u = np.asarray(t, float) ** q
    with np.errstate(over="ignore"):
        return np.expm1(u)


class DoublingReport:
    def __init__(self, constant, unbounded, argmax_t):
        self.constant = constant
        self.unbounded = unbounded
        self.argmax_t = argmax_t

    def __repr__(self):
        tag = "unbounded" if self.unbounded else f"{self.constant:.6g}"
        return f"DoublingReport({tag} at t={self.argmax_t:.3g})"


def doubling_constant(psi, t_max=1.0e8, samples=600):
    """Estimate sup psi(2t)/psi(t) over a log grid in (0, t_max].

    Works on log(psi) differences.  Grid points where psi(t) < 1e-300 are
    skipped.  A ratio above RATIO_CAP marks the function non-doubling.
    """
    if t_max <= 0 or samples < 8:
        raise FormatError("doubling_constant needs t_max > 0 and samples >= 8")
    t = np.logspace(-8, math.log10(t_max), int(samples))
    lo = psi.log_psi(t)
    hi = psi.log_psi(2.0 * t)
    ok = lo >= _FLOOR_LOG
    if not np.any(ok):
        raise FormatError("psi is zero on the whole sample grid")
    gap = hi[ok] - lo[ok]
    i = int(np.argmax(gap))
    best = gap[i]
    t_at = float(t[ok][i])
    if best > math.log(RATIO_CAP):
        return DoublingReport(math.inf, True, t_at)
    return DoublingReport(float(math.exp(best)), False, t_at)


def make_growth(kind, **params):
    """Construct a growth function by kind name."""
    return GrowthFunction(kind, **params)


def parse_growth(spec):
    """Parse 'pow:P', 'expalpha:A', or 'table:PATH' into a GrowthFunction."""
    if not isinstance(spec, str) or ":" not in spec:
        raise FormatError(f"bad growth spec {spec!r}, want kind:value")
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "pow":
        try:
            return GrowthFunction("pow", p=float(arg))
        except ValueError:
            raise FormatError(f"bad pow exponent {arg!r}") from None
    if kind == "expalpha":
        try:
            return GrowthFunction("expalpha", alpha=float(arg))
        except ValueError:
            raise FormatError(f"bad expalpha parameter {arg!r}") from None
    if kind == "table":
        with open(arg) as fh:
            data = json.load(fh)
        if not isinstance(data, dict) or "t" not in data or "psi" not in data:
            raise FormatError("table file must be JSON with keys 't' and 'psi'")
        return GrowthFunction("table", table=(data["t"], data["psi"]))
    raise FormatError(f"unknown growth kind {kind!r}")
