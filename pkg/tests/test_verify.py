"""Study drivers: order extraction, recipe assembly, and the comparison
ladders that the command line wraps."""

import math

import numpy as np
import pytest

from warpflow import geometry, recipes
from warpflow.errors import ConfigError
from warpflow.flow import FlowState
from warpflow.grids import GridSpec, ScalarField, integrate
from warpflow.verify import (CurvatureStudyConfig, FieldSpec, build_metric,
                             build_product_geometry, curvature_study,
                             drift_study, identity_study, loglog_slope,
                             measured_order, rate_study, variation_study)
from warpflow.warped import lambda_to_constants, solve_perelman_constants

TAU = 2.0 * math.pi

ON_LOCUS_FAMILIES = {
    "chr_real_block", "chr_zero_mixed", "chr_real_from_phantom",
    "chr_phantom_mixed", "chr_phantom_block",
    "ricci_real_general", "ricci_phantom_general", "ricci_mixed_zero",
    "scalar_general",
    "ricci_real_ansatz", "ricci_phantom_ansatz", "scalar_ansatz",
}
OFF_LOCUS_FAMILIES = ON_LOCUS_FAMILIES - {
    "ricci_real_ansatz", "ricci_phantom_ansatz", "scalar_ansatz"}


def test_measured_order_exact_powers():
    assert measured_order(1.0, 0.04, 0.5, 0.01) == pytest.approx(2.0)
    assert measured_order(1.0, 0.08, 0.5, 0.01) == pytest.approx(3.0)
    assert measured_order(0.2, 0.03, 0.1, 0.015) == pytest.approx(1.0)


def test_measured_order_roundoff_floor_is_nan():
    assert math.isnan(measured_order(1.0, 1e-3, 0.5, 1e-18))
    assert math.isnan(measured_order(1.0, 0.0, 0.5, 0.0))


def test_loglog_slope_recovers_power_law():
    xs = [0.4, 0.2, 0.1, 0.05]
    ys = [3.0 * x ** 2 for x in xs]
    assert loglog_slope(xs, ys) == pytest.approx(2.0, abs=1e-12)


def test_build_metric_recipes():
    grid = GridSpec((16, 16), (TAU, TAU))
    flat = build_metric(grid, FieldSpec("flat"))
    assert np.all(flat.component(0, 0) == 1.0)
    conf = build_metric(grid, FieldSpec("conformal-bump", 0.1, 1))
    assert conf.is_metric
    rng = np.random.default_rng(3)
    rnd = build_metric(grid, FieldSpec("random-spd", 0.2), rng)
    assert rnd.is_metric
    with pytest.raises(ConfigError):
        build_metric(grid, FieldSpec("random-spd", 0.2))
    with pytest.raises(ConfigError):
        build_metric(grid, FieldSpec("euclidean"))


def test_build_product_geometry_normalization_and_modes():
    c = solve_perelman_constants(2, 1)
    pg = build_product_geometry(
        c, (12, 12), (16,), TAU, TAU,
        FieldSpec("conformal-bump", 0.2, 1),
        FieldSpec("conformal-bump", 0.3, 2),
        0.2, 1, None, normalize_n=True)
    vol = integrate(ScalarField.constant(pg.grid_n, 1.0),
                    geometry.volume_density(pg.h))
    assert vol == pytest.approx(1.0, abs=1e-13)
    single = build_product_geometry(
        c, (12, 12), (8,), TAU, TAU, FieldSpec("flat"), FieldSpec("flat"),
        0.2, 1)
    multi = build_product_geometry(
        c, (12, 12), (8,), TAU, TAU, FieldSpec("flat"), FieldSpec("flat"),
        0.2, 1, f_modes=(1, 2))
    assert not np.array_equal(single.f.values, multi.f.values)
    assert float(np.abs(multi.f.values).max()) <= 0.2 * 2 * (1.0 + 0.5)


def test_curvature_study_family_roster_and_convergence():
    c = solve_perelman_constants(2, 1)
    rows = curvature_study(CurvatureStudyConfig(
        constants=c, levels=(((12, 12), (8,)), ((24, 24), (8,))),
        period_m=2 * TAU, period_n=2 * TAU,
        g_spec=FieldSpec("conformal-bump", 0.1, 1),
        h_spec=FieldSpec("flat"), f_amplitude=0.2, f_mode=1))
    assert {r.family for r in rows} == ON_LOCUS_FAMILIES
    by = {}
    for r in rows:
        by.setdefault(r.family, []).append(r)
    for fam, rs in by.items():
        assert [r.level for r in rs] == [0, 1]
        assert math.isnan(rs[0].order)
        if fam in ("chr_zero_mixed", "chr_phantom_block", "ricci_mixed_zero"):
            # structurally exact at any resolution
            assert rs[1].error < 1e-14
        else:
            assert rs[1].error < rs[0].error
            assert rs[1].order > 1.5


def test_curvature_study_off_locus_drops_ansatz_rows():
    c = lambda_to_constants(2, 1, 0.5)[0]
    rows = curvature_study(CurvatureStudyConfig(
        constants=c, levels=(((12, 12), (8,)),),
        g_spec=FieldSpec("conformal-bump", 0.1, 1),
        h_spec=FieldSpec("flat")))
    assert {r.family for r in rows} == OFF_LOCUS_FAMILIES


def test_identity_study_row_shape():
    c = solve_perelman_constants(2, 1)
    rows = identity_study(
        c, (((12, 12), (8,)), ((24, 24), (8,))), TAU, TAU,
        FieldSpec("conformal-bump", 0.2, 1), FieldSpec("flat"),
        0.25, 1, normalize_n=True, f_modes=(1, 2))
    assert [r.level for r in rows] == [0, 1]
    assert math.isnan(rows[0].order) and not math.isnan(rows[1].order)
    assert rows[0].lam == 0.0
    assert abs(rows[1].residual) < abs(rows[0].residual)


def test_variation_study_smoke():
    c = lambda_to_constants(2, 1, 0.5)[0]
    rows = variation_study(
        c, (32, 32), (8,), TAU, TAU,
        FieldSpec("conformal-bump", 0.15, 1), FieldSpec("flat"),
        0.2, 1, n_directions=3, seed=11)
    assert [r.direction for r in rows] == [0, 1, 2]
    for r in rows:
        assert r.lam == 0.5
        assert r.rel_mismatch < 5e-2
        assert abs(r.richardson_gap) < 1e-6
    # distinct directions, not one sample repeated
    assert len({r.numeric for r in rows}) == 3


def test_drift_study_recovers_euler_order():
    grid = GridSpec((24, 24), (TAU, TAU))
    state = FlowState.initial(recipes.conformal_metric(grid, 0.3, 1),
                              recipes.mixed_sine_scalar(grid, 0.6, (1, 2)))
    rows, slope = drift_study(state, 0.0, "euler", 8e-3,
                              [2e-3, 1e-3, 5e-4])
    assert [r.n_steps for r in rows] == [4, 8, 16]
    assert all(r.max_drift > 0 for r in rows)
    assert slope == pytest.approx(1.0, abs=0.15)


def test_rate_study_smoke():
    grid = GridSpec((96,), (TAU,))
    state = FlowState.initial(recipes.flat_metric(grid),
                              recipes.mixed_sine_scalar(grid, 0.3, (1, 2)))
    checks = rate_study(state, [0.0], 1e-4)
    assert len(checks) == 1
    assert abs(checks[0].ratio - 1.0) < 1e-3
