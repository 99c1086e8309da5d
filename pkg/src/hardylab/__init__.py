"""Numerical laboratory for intrinsic Hardy-Orlicz membership of
conformal maps on simply connected planar domains.

The package builds polygonal test domains (including a spiral whose
channel widths grow along the loops), fits conformal maps from the unit
disk, measures euclidean and intrinsic path distances together with the
quasi-hyperbolic metric, estimates curve-family moduli, and probes
Hardy-Orlicz membership in both the euclidean and intrinsic senses.
"""

from .errors import (AmbiguousPositionError, ConstructionError,
                     ConvergenceError, DomainError, FitError, FormatError,
                     HardyLabError, PositionError, ResolutionError)
from .growth import (DoublingReport, GrowthFunction, doubling_constant,
                     make_growth, parse_growth)
from .geometry import (PolygonDomain, SpiralDomain, SpiralSpec,
                       build_spiral_domain, l_domain, load_polygon,
                       rectangle_domain, regular_polygon, save_polygon,
                       snap_inside, spiral_channel_param)
from .hypmetric import (QhGraph, default_spacing, qh_convergence_diagnostic,
                        quasi_hyperbolic_distance)
from .intrinsic import (gh_ratio, get_visibility, image_curve_length,
                        intrinsic_distance, intrinsic_distances_from,
                        intrinsic_modulus)
from .conformal import (ConformalMap, HalfPlaneSlitMap, IdentityMap,
                        KoebeMap, RadialSlitDiskMap, SquareMap, StripLogMap,
                        ZipperMap, fit_conformal)
from .diskcells import (ArcSet, CapDecomposition, WhitneyCell,
                        make_whitney_cell, nontangential_max, stolz_samples,
                        whitney_decompose)
from .modulus import (CurveFamily, annulus_family, annulus_modulus_bound,
                      channel_family, check_intrinsic_modulus_bound,
                      check_shadow_escape_bound, discrete_modulus,
                      image_family, radial_family, radial_modulus_exact,
                      rectangle_family, spoke_family)
from .hardy import (derivative_criterion, derivative_profile,
                    divergence_series, intrinsic_max_modulus, max_modulus,
                    membership_probe, nontangential_orlicz_integral,
                    orlicz_circle_integral, trend_verdict)
from .experiments import (Check, ExperimentReport, SpiralReport, emit_report,
                          fit_exponent, run_equivalence_sweep,
                          run_lemma_battery, run_spiral_experiment)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousPositionError", "ArcSet", "CapDecomposition", "Check",
    "ConformalMap", "ConstructionError", "ConvergenceError", "CurveFamily",
    "DomainError", "DoublingReport", "ExperimentReport", "FitError",
    "FormatError", "GrowthFunction", "HalfPlaneSlitMap", "HardyLabError",
    "IdentityMap", "KoebeMap", "PolygonDomain", "PositionError", "QhGraph",
    "RadialSlitDiskMap", "ResolutionError", "SpiralDomain", "SpiralReport",
    "SpiralSpec", "SquareMap", "StripLogMap", "WhitneyCell", "ZipperMap",
    "annulus_family", "annulus_modulus_bound", "build_spiral_domain",
    "channel_family", "check_intrinsic_modulus_bound",
    "check_shadow_escape_bound", "default_spacing", "derivative_criterion",
    "derivative_profile", "discrete_modulus", "divergence_series",
    "doubling_constant", "emit_report", "fit_conformal", "fit_exponent",
    "gh_ratio", "get_visibility", "image_curve_length", "image_family",
    "intrinsic_distance", "intrinsic_distances_from", "intrinsic_max_modulus",
    "intrinsic_modulus", "l_domain", "load_polygon", "make_growth",
    "make_whitney_cell", "max_modulus", "membership_probe",
    "nontangential_max", "nontangential_orlicz_integral",
    "orlicz_circle_integral", "parse_growth", "qh_convergence_diagnostic",
    "quasi_hyperbolic_distance", "radial_family", "radial_modulus_exact",
    "rectangle_domain", "rectangle_family", "regular_polygon",
    "run_equivalence_sweep", "run_lemma_battery", "run_spiral_experiment",
    "save_polygon", "snap_inside", "spiral_channel_param", "spoke_family",
    "stolz_samples", "trend_verdict", "whitney_decompose",
]
