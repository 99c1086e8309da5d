"""Experiment plumbing: exponent fits, check verdicts, report
serialization, depth grids, and the staged spiral run."""

import json
import math

import numpy as np
import pytest

from hardylab.errors import DomainError, FormatError
from hardylab.experiments import (
    Check,
    ExperimentReport,
    _band_check,
    _deep_m_grid,
    dual_value_tables,
    emit_report,
    environment_info,
    fit_exponent,
    run_spiral_experiment,
)


def test_fit_exponent_exact():
    x = np.arange(1.0, 9.0)
    e, resid = fit_exponent(zip(x, 3.0 * x ** 2))
    assert e == pytest.approx(2.0, abs=1e-12)
    assert resid < 1e-12
    e, _ = fit_exponent(zip(x, 5.0 * x ** 1.7))
    assert e == pytest.approx(1.7, abs=1e-12)


def test_fit_exponent_with_noise():
    rng = np.random.default_rng(0)
    x = np.linspace(1.0, 20.0, 40)
    y = x ** 2 * np.exp(rng.normal(0.0, 0.01, x.size))
    e, resid = fit_exponent(zip(x, y))
    assert abs(e - 2.0) < 0.05
    assert resid > 0.0


def test_fit_exponent_rejects_bad_input():
    with pytest.raises(FormatError):
        fit_exponent([(1.0, 1.0), (2.0, 4.0), (3.0, 9.0)])
    with pytest.raises(DomainError):
        fit_exponent([(1.0, 1.0), (2.0, -4.0), (3.0, 9.0), (4.0, 16.0)])
    with pytest.raises(DomainError):
        fit_exponent([(1.0, 1.0), (2.0, math.inf), (3.0, 9.0), (4.0, 16.0)])


def test_band_check_verdicts():
    assert _band_check("x", 1.0, 0.5, 1.5).verdict == "pass"
    assert _band_check("x", 2.0, 0.5, 1.5).verdict == "fail"
    assert _band_check("x", math.nan, 0.5, 1.5).verdict == "inconclusive"
    assert _band_check("x", None, 0.5, 1.5).verdict == "inconclusive"
    c = _band_check("x", 1.0, 0.5, 1.5, {"note": "ok"})
    assert c.detail["note"] == "ok"
    assert c.target == "[0.5, 1.5]"


def _report(verdicts):
    checks = [Check(f"c{i}", 1.0, "t", v) for i, v in enumerate(verdicts)]
    return ExperimentReport(name="demo", config={"k": 1}, checks=checks)


def test_exit_code_ladder():
    assert _report(["pass", "pass"]).exit_code == 0
    assert _report(["pass", "fail"]).exit_code == 1
    assert _report(["pass", "inconclusive"]).exit_code == 2
    assert _report(["inconclusive", "fail"]).exit_code == 1
    assert _report([]).exit_code == 0


def test_summary_lines_format():
    lines = _report(["pass", "fail"]).summary_lines()
    assert len(lines) == 2
    assert lines[0].startswith("PASS")
    assert lines[1].startswith("FAIL")
    assert "c0" in lines[0] and "(target t)" in lines[0]


def test_emit_report_roundtrip(tmp_path):
    rep = _report(["pass", "inconclusive"])
    p = tmp_path / "out.json"
    emit_report(rep, "json", str(p))
    data = json.loads(p.read_text())
    assert data["name"] == "demo"
    assert data["config"] == {"k": 1}
    assert [c["verdict"] for c in data["checks"]] == ["pass", "inconclusive"]
    assert "kernel_backend" in data["environment"]

    c = tmp_path / "out.csv"
    emit_report(rep, "csv", str(c))
    rows = [r for r in c.read_text().splitlines() if r]
    assert len(rows) == 2
    assert rows[0].split(",")[0] == "c0"

    with pytest.raises(FormatError):
        emit_report(rep, "yaml", str(p))
    with pytest.raises(FormatError):
        emit_report(rep, "json", None)


def test_report_payload_is_json_clean():
    rep = ExperimentReport(
        name="demo", config={"arr": np.arange(3), "z": 1 + 2j},
        checks=[Check("c", np.float64(1.5), "t", "pass",
                      {"flag": np.bool_(True), "nan": math.nan})])
    data = rep.to_dict()
    json.dumps(data)
    assert data["config"]["arr"] == [0, 1, 2]
    assert data["config"]["z"] == [1.0, 2.0]
    assert data["checks"][0]["detail"]["flag"] is True
    assert data["checks"][0]["detail"]["nan"] is None


def test_deep_m_grid_budget():
    grid, capped = _deep_m_grid(6144, 20000)
    assert grid[0] == 32
    assert grid[-1] == 6144
    assert not capped
    assert all(b > a for a, b in zip(grid, grid[1:]))
    # half-octave refinement kicks in past 1024
    assert 1536 in grid and 3072 in grid

    grid, capped = _deep_m_grid(6144, 2600)
    assert capped
    assert grid[-1] <= 1100

    grid, capped = _deep_m_grid(6144, 100)
    assert capped
    assert grid[-1] <= 96 and grid[0] == 32


def test_environment_info_keys():
    info = environment_info()
    for key in ("python", "numpy", "platform", "kernel_backend"):
        assert key in info


def test_dual_value_tables_identity():
    from hardylab.conformal import IdentityMap

    fmap = IdentityMap()
    euclid, intr = dual_value_tables(fmap, fmap.domain, [4.0, 5.0],
                                     n_theta=128)
    assert len(euclid) == len(intr) == 2
    r = 1.0 - 2.0 ** -4
    assert np.allclose(euclid[0], r, atol=1e-12)
    assert np.allclose(intr[0], r, rtol=1e-6)


def test_spiral_skip_map_staging():
    rep = run_spiral_experiment(alpha=0.0, loops=8, skip_map=True)
    assert rep.stage_errors["fit"] == "skipped by request"
    assert rep.j_values == [3, 4, 5, 6, 7]
    assert len(rep.abs_c) == 5
    for key in ("euclid", "intrinsic", "qh"):
        assert key in rep.exponents

    checks = rep.checks()
    names = [c.name for c in checks]
    assert any("euclid" in n for n in names)
    # map-dependent rows degrade to inconclusive, never silently vanish
    by_name = {c.name: c for c in checks}
    depth = by_name[f"spiral exponent log 1/(1-|z_j|) vs j (alpha=0)"]
    assert depth.verdict == "inconclusive"
    assert depth.detail["stage_errors"]["fit"] == "skipped by request"
    lb = [c for c in checks if "lower bound" in c.name]
    assert len(lb) == 4
    assert all(c.verdict == "inconclusive" for c in lb)

    full = rep.to_report()
    assert full.exit_code in (1, 2)
    json.dumps(full.to_dict())
