"""Shared fixtures.

The expensive spiral fit (J=20, arbitrary precision) is session scoped
and shared by the acceptance tests for the map-side criteria; the
equivalence sweep and the estimate battery reuse the same fitted map so
the suite pays for one fit only.
"""

import numpy as np
import pytest

from hardylab.conformal import IdentityMap, KoebeMap, SquareMap
from hardylab.experiments import (default_equivalence_maps,
                                  run_equivalence_sweep, run_lemma_battery,
                                  run_spiral_experiment)


@pytest.fixture(scope="session")
def catalog_maps():
    return [(m.label, m, m.domain)
            for m in (IdentityMap(), KoebeMap(), SquareMap())]


@pytest.fixture(scope="session")
def spiral20():
    """Full spiral experiment at alpha=0.  Tries J=20 first; if the fit
    fails, falls back to the largest fitting J >= 10."""
    for loops in (20, 14, 10):
        rep = run_spiral_experiment(alpha=0.0, loops=loops,
                                    deep_m_max=6144, seed=0)
        if "fit" not in rep.stage_errors:
            return rep
    return rep


@pytest.fixture(scope="session")
def equivalence_report(spiral20):
    maps = default_equivalence_maps(
        spiral_fit=getattr(spiral20, "_fmap", None),
        spiral_domain=getattr(spiral20, "_spiral_domain", None).domain
        if hasattr(spiral20, "_spiral_domain") else None)
    return run_equivalence_sweep(maps=maps, seed=0)


@pytest.fixture(scope="session")
def battery_report(spiral20):
    sd = getattr(spiral20, "_spiral_domain", None)
    return run_lemma_battery(
        spiral_fit=getattr(spiral20, "_fmap", None),
        spiral_domain=sd.domain if sd is not None else None,
        gh_u_cap=4000.0, seed=0)


def checks_by_prefix(report, prefix):
    rows = [c for c in report.checks if c.name.startswith(prefix)]
    assert rows, f"no checks matching {prefix!r}"
    return rows
