"""Command line entry point.

Subcommands:
  lab spiral       staged spiral experiment (domain side, fit, deep grid,
                   membership, divergence lower bound)
  lab equivalence  euclidean vs intrinsic membership agreement sweep
  lab lemmas       empirical battery for the distortion, Harnack,
                   Gehring-Hayman, Whitney, escape, and modulus estimates
  lab modulus      discrete modulus of a named curve family vs its oracle
  lab probe        membership probe for one map, growth function, metric

Exit codes: 0 when every check passes, 1 when any check fails, 2 when
the only issues are inconclusive verdicts.  Reports embed their config
and go to --out as JSON (or CSV when the path ends in .csv).
"""

from __future__ import annotations

import argparse
import sys

from .errors import FormatError
from .experiments import (Check, ExperimentReport, default_equivalence_maps,
                          emit_report, environment_info, run_equivalence_sweep,
                          run_lemma_battery, run_spiral_experiment)


def _emit(report, out):
    for line in report.summary_lines():
        print(line)
    if out:
        fmt = "csv" if out.endswith(".csv") else "json"
        emit_report(report, fmt, out)
        print(f"wrote {out}")
    return report.exit_code


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _catalog_map(name, spiral_loops=10):
    """Build a named map from the catalog; spiral names fit on demand."""
    from .conformal import IdentityMap, KoebeMap, SquareMap, fit_conformal
    from .geometry import build_spiral_domain

    if ":" in name:
        stem, arg = name.split(":", 1)
    else:
        stem, arg = name, None
    stem = stem.strip().lower()
    if stem == "identity":
        m = IdentityMap()
        return m.label, m, m.domain
    if stem == "koebe":
        m = KoebeMap()
        return m.label, m, m.domain
    if stem == "square":
        m = SquareMap()
        return m.label, m, m.domain
    if stem == "spiral":
        loops = int(arg) if arg else spiral_loops
        sd = build_spiral_domain(alpha=0.0, loops=loops)
        fmap = fit_conformal(sd.domain)
        return f"spiral(J={loops})", fmap, sd.domain
    raise FormatError(f"unknown map name {name!r}; use identity, koebe, "
                      "square, or spiral[:loops]")


def _cmd_spiral(args):
    kw = {}
    if args.deltas:
        kw["deltas"] = _float_list(args.deltas)
    rep = run_spiral_experiment(alpha=args.alpha, loops=args.loops,
                                fit_resolution=args.resolution,
                                deep_m_max=args.deep_m_max,
                                skip_map=args.skip_map, seed=args.seed, **kw)
    report = rep.to_report()
    if rep.stage_errors:
        for stage, msg in rep.stage_errors.items():
            print(f"stage {stage}: {msg}", file=sys.stderr)
    return _emit(report, args.out)


def _cmd_equivalence(args):
    maps = None
    if args.maps:
        maps = [_catalog_map(name, args.spiral_loops)
                for name in args.maps.split(",") if name.strip()]
    psis = tuple(tok.strip() for tok in args.psi.split(",") if tok.strip())
    report = run_equivalence_sweep(maps=maps, psis=psis,
                                   spiral_loops=args.spiral_loops,
                                   with_derivative=not args.no_derivative,
                                   seed=args.seed)
    return _emit(report, args.out)


def _cmd_lemmas(args):
    entries = None
    if args.map:
        entries = []
        for name in args.map.split(","):
            if not name.strip():
                continue
            label, fmap, dom = _catalog_map(name, args.spiral_loops)
            entries.append((label, fmap, dom))
        if args.domain:
            from .geometry import PolygonDomain

            dom = PolygonDomain.load(args.domain)
            if len(entries) != 1:
                raise FormatError("--domain needs exactly one --map entry")
            label, fmap, _ = entries[0]
            entries[0] = (label, fmap, dom)
    elif args.domain:
        raise FormatError("--domain needs --map")
    report = run_lemma_battery(entries=entries, n_samples=args.samples,
                               seed=args.seed, spiral_loops=args.spiral_loops,
                               gh_u_cap=args.gh_u_cap,
                               with_modulus=not args.no_modulus)
    return _emit(report, args.out)


def _cmd_modulus(args):
    import math

    from .modulus import (annulus_family, annulus_modulus_bound,
                          discrete_modulus, radial_family,
                          radial_modulus_exact, rectangle_family)

    checks = []
    config = {"family": args.family, "h": args.h, "n_curves": args.n_curves}
    if args.family == "radial":
        sigma = args.sigma if args.sigma is not None else 2.0 * math.pi
        r = args.r if args.r is not None else 1.0 / math.e
        arcs = None if sigma >= 2.0 * math.pi - 1e-12 else [(0.0, sigma)]
        fam = radial_family(r, arcs, args.n_curves)
        exact = radial_modulus_exact(sigma, r)
        res = discrete_modulus(fam, args.h)
        config.update({"sigma": sigma, "r": r})
        checks.append(Check("radial family modulus vs exact",
                            res.value, f"{exact:.6g} +- 10%",
                            "pass" if abs(res.value - exact) <= 0.1 * exact
                            else "fail",
                            {"exact": exact, "kkt": res.kkt_residual}))
    elif args.family == "rectangle":
        a = args.a if args.a is not None else 2.0
        b = args.b if args.b is not None else 1.0
        fam = rectangle_family(a, b, args.n_curves)
        exact = b / a
        res = discrete_modulus(fam, args.h)
        config.update({"a": a, "b": b})
        checks.append(Check("rectangle crossing modulus vs b/a",
                            res.value, f"{exact:.6g} +- 10%",
                            "pass" if abs(res.value - exact) <= 0.1 * exact
                            else "fail",
                            {"exact": exact, "kkt": res.kkt_residual}))
    elif args.family == "annulus":
        r = args.r if args.r is not None else 0.25
        big_r = args.big_r if args.big_r is not None else 1.0
        fam = annulus_family(r, big_r, args.n_curves)
        bound = annulus_modulus_bound(r, big_r)
        res = discrete_modulus(fam, args.h)
        config.update({"r": r, "R": big_r})
        checks.append(Check("annulus crossing modulus vs upper bound",
                            res.value, f"<= {bound:.6g} + 10%",
                            "pass" if res.value <= 1.1 * bound else "fail",
                            {"bound": bound, "kkt": res.kkt_residual}))
    else:
        raise FormatError(f"unknown family {args.family!r}")
    report = ExperimentReport(name="modulus", config=config, checks=checks,
                              environment=environment_info(), seed=0)
    return _emit(report, args.out)


def _cmd_probe(args):
    from .growth import parse_growth
    from .hardy import membership_probe

    label, fmap, dom = _catalog_map(args.map, args.spiral_loops)
    psi = parse_growth(args.psi)
    metric = {"euclid": "euclidean"}.get(args.metric, args.metric)
    probe = membership_probe(fmap, dom, psi, metric=metric,
                             m_max=args.m_max, n_theta=args.n_theta)
    config = {"map": label, "psi": args.psi, "metric": metric,
              "m_max": args.m_max, "n_theta": args.n_theta}
    verdict = "pass" if probe.verdict in ("bounded", "diverging") \
        else "inconclusive"
    checks = [Check(f"membership trend decisive: {label}, {args.psi}, "
                    f"{metric}", probe.verdict, "bounded or diverging",
                    verdict, {"per_delta": probe.verdicts})]
    report = ExperimentReport(name="probe", config=config, checks=checks,
                              environment=environment_info(), seed=0,
                              extras={"probe": probe.to_dict()})
    return _emit(report, args.out)


def build_parser():
    p = argparse.ArgumentParser(
        prog="lab",
        description="numerical laboratory for intrinsic Hardy-Orlicz "
                    "membership of conformal maps")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spiral", help="staged spiral experiment")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--loops", type=int, default=20)
    sp.add_argument("--skip-map", action="store_true",
                    help="stop after the domain-side stages")
    sp.add_argument("--resolution", type=int, default=None,
                    help="boundary samples per loop for the fit")
    sp.add_argument("--deltas", default=None,
                    help="comma list for the divergence lower bound")
    sp.add_argument("--deep-m-max", type=int, default=6144)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_spiral)

    eq = sub.add_parser("equivalence", help="membership agreement sweep")
    eq.add_argument("--maps", default=None,
                    help="comma list: identity,koebe,square,spiral[:J]")
    eq.add_argument("--psi", default="pow:0.4,pow:1,pow:2",
                    help="comma list of growth specs (doubling required)")
    eq.add_argument("--spiral-loops", type=int, default=10)
    eq.add_argument("--no-derivative", action="store_true",
                    help="skip the derivative-criterion cross check")
    eq.add_argument("--seed", type=int, default=0)
    eq.add_argument("--out", default=None)
    eq.set_defaults(func=_cmd_equivalence)

    lm = sub.add_parser("lemmas", help="empirical estimate battery")
    lm.add_argument("--map", default=None,
                    help="comma list: identity,koebe,square,spiral[:J]")
    lm.add_argument("--domain", default=None,
                    help="polygon JSON overriding the single map's domain")
    lm.add_argument("--samples", type=int, default=500)
    lm.add_argument("--spiral-loops", type=int, default=12)
    lm.add_argument("--gh-u-cap", type=float, default=4000.0)
    lm.add_argument("--no-modulus", action="store_true")
    lm.add_argument("--seed", type=int, default=0)
    lm.add_argument("--out", default=None)
    lm.set_defaults(func=_cmd_lemmas)

    mo = sub.add_parser("modulus", help="discrete modulus vs oracle")
    mo.add_argument("--family", required=True,
                    choices=["radial", "rectangle", "annulus"])
    mo.add_argument("--sigma", type=float, default=None,
                    help="direction-set measure for the radial family")
    mo.add_argument("--r", type=float, default=None)
    mo.add_argument("--big-r", type=float, default=None,
                    help="outer radius for the annulus family")
    mo.add_argument("--a", type=float, default=None)
    mo.add_argument("--b", type=float, default=None)
    mo.add_argument("--h", type=float, default=0.02)
    mo.add_argument("--n-curves", type=int, default=256)
    mo.add_argument("--out", default=None)
    mo.set_defaults(func=_cmd_modulus)

    pr = sub.add_parser("probe", help="single membership probe")
    pr.add_argument("--map", required=True,
                    help="identity, koebe, square, or spiral[:J]")
    pr.add_argument("--psi", required=True,
                    help="growth spec, e.g. pow:1 or expalpha:0")
    pr.add_argument("--metric", default="euclid",
                    choices=["euclid", "euclidean", "intrinsic"])
    pr.add_argument("--m-max", type=int, default=14)
    pr.add_argument("--n-theta", type=int, default=128)
    pr.add_argument("--spiral-loops", type=int, default=10)
    pr.add_argument("--out", default=None)
    pr.set_defaults(func=_cmd_probe)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
