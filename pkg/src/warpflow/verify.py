"""Convergence and identity studies: the machinery behind the
verification commands and the acceptance suite.

Each study runs a comparison at a ladder of grid resolutions and reports
errors plus measured convergence orders.  Orders are computed pairwise:

    order = log(e_coarse / e_fine) / log(h_coarse / h_fine)

Resolution ladders refine every *varying* axis by the same factor per
level; axes along which all fields are constant may stay fixed (their
stencil error is exactly zero), which is what keeps the 4-dimensional
product studies inside a small container's memory budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry, recipes
from .errors import ConfigError
from .flow import (FlowConfig, FlowState, conserved_measure_check,
                   instantaneous_rate, run_coupled)
from .functionals import first_variation_check, theorem_identity_residual
from .grids import GridSpec, ScalarField, sym_pairs
from .warped import (ProductGeometry, WarpedConstants,
                     assemble_product_metric, christoffel_closed_form,
                     ricci_closed_ansatz, ricci_closed_general)

__all__ = [
    "FieldSpec",
    "CurvatureStudyConfig",
    "ConvergenceRow",
    "measured_order",
    "loglog_slope",
    "build_metric",
    "build_product_geometry",
    "curvature_study",
    "identity_study",
    "variation_study",
    "drift_study",
    "rate_study",
]


def measured_order(h_coarse: float, e_coarse: float,
                   h_fine: float, e_fine: float) -> float:
    """Pairwise convergence order; NaN when an error already sits at the
    roundoff floor (order is then meaningless, not failed)."""
    if e_fine <= 1e-14 * max(1.0, e_coarse) or e_coarse <= 0.0:
        return math.nan
    return math.log(e_coarse / e_fine) / math.log(h_coarse / h_fine)


def loglog_slope(xs: list[float], ys: list[float]) -> float:
    """Least-squares slope of log y against log x."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


@dataclass(frozen=True)
class FieldSpec:
    """Named analytic recipe for one factor metric."""

    name: str = "flat"            # flat | conformal-bump | random-spd
    amplitude: float = 0.2
    mode: int = 1
    axis: int | None = None       # conformal-bump: restrict u to one axis


def build_metric(grid: GridSpec, spec: FieldSpec,
                 rng: np.random.Generator | None = None):
    if spec.name == "flat":
        return recipes.flat_metric(grid)
    if spec.name == "conformal-bump":
        return recipes.conformal_metric(grid, spec.amplitude, spec.mode,
                                        spec.axis)
    if spec.name == "random-spd":
        if rng is None:
            raise ConfigError("random-spd recipe needs a seed")
        return recipes.random_spd_metric(grid, rng, spec.amplitude)
    raise ConfigError(f"unknown metric recipe {spec.name!r}")


def build_product_geometry(constants: WarpedConstants,
                           points_m: tuple[int, ...],
                           points_n: tuple[int, ...],
                           period_m: float, period_n: float,
                           g_spec: FieldSpec, h_spec: FieldSpec,
                           f_amplitude: float, f_mode: int,
                           rng: np.random.Generator | None = None,
                           normalize_n: bool = False,
                           f_modes: tuple[int, ...] | None = None
                           ) -> ProductGeometry:
    """Assemble one ProductGeometry from named recipes.

    ``normalize_n`` rescales h by a constant so the discrete volume of N
    is exactly 1 (recomputed, never assumed).  ``f_modes`` overrides
    ``f_mode`` with a multi-mode profile (see mixed_sine_scalar)."""
    grid_m = GridSpec(points_m, (period_m,) * len(points_m))
    grid_n = GridSpec(points_n, (period_n,) * len(points_n))
    g = build_metric(grid_m, g_spec, rng)
    h = build_metric(grid_n, h_spec, rng)
    if normalize_n:
        from .grids import SymTensorField, integrate
        vol = integrate(ScalarField.constant(grid_n, 1.0),
                        geometry.volume_density(h))
        h = SymTensorField(grid_n, vol ** (-2.0 / grid_n.dim) * h.values,
                           is_metric=True)
    if f_modes is not None and len(f_modes) > 1:
        f = recipes.mixed_sine_scalar(grid_m, f_amplitude, f_modes)
    elif f_modes is not None:
        f = recipes.sine_scalar(grid_m, f_amplitude, f_modes[0])
    else:
        f = recipes.sine_scalar(grid_m, f_amplitude, f_mode)
    return ProductGeometry(grid_m, grid_n, g, h, f, constants)


@dataclass(frozen=True)
class CurvatureStudyConfig:
    """One closed-form-vs-generic comparison ladder."""

    constants: WarpedConstants
    levels: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    period_m: float = 2.0 * math.pi
    period_n: float = 2.0 * math.pi
    g_spec: FieldSpec = FieldSpec("conformal-bump", 0.2, 1)
    h_spec: FieldSpec = FieldSpec("flat")
    f_amplitude: float = 0.2
    f_mode: int = 1
    f_modes: tuple[int, ...] | None = None
    order: int = 2
    seed: int | None = None


@dataclass
class ConvergenceRow:
    """Error of one comparison family at one refinement level."""

    family: str
    level: int
    h: float
    error: float
    order: float  # vs previous level; NaN on the first


def _block_indices(m: int, n: int):
    pairs = sym_pairs(m + n)
    mm = [s for s, (i, j) in enumerate(pairs) if i < m and j < m]
    nn = [s for s, (i, j) in enumerate(pairs) if i >= m and j >= m]
    mixed = [s for s, (i, j) in enumerate(pairs) if i < m <= j]
    return mm, nn, mixed


def _max_abs(arr: np.ndarray) -> float:
    return float(np.abs(arr).max()) if arr.size else 0.0


def _chr_family_errors(closed, oracle, m: int) -> dict[str, float]:
    """Max-norm error per closed-form Christoffel component family.
    The two identically-zero families are judged by the oracle magnitude
    alone (the closed form stores exact zeros there)."""
    cv, ov = closed.values, oracle.values
    return {
        "chr_real_block": _max_abs(cv[..., :m, :m, :m] - ov[..., :m, :m, :m]),
        "chr_zero_mixed": max(
            _max_abs(ov[..., m:, :m, :m]),
            _max_abs(ov[..., :m, :m, m:]),
            _max_abs(ov[..., :m, m:, :m])),
        "chr_real_from_phantom": _max_abs(
            cv[..., :m, m:, m:] - ov[..., :m, m:, m:]),
        "chr_phantom_mixed": max(
            _max_abs(cv[..., m:, :m, m:] - ov[..., m:, :m, m:]),
            _max_abs(cv[..., m:, m:, :m] - ov[..., m:, m:, :m])),
        "chr_phantom_block": _max_abs(
            cv[..., m:, m:, m:] - ov[..., m:, m:, m:]),
    }


def curvature_study(cfg: CurvatureStudyConfig) -> list[ConvergenceRow]:
    """Compare every closed-form curvature family against the generic
    pipeline run on the assembled product metric, across the ladder."""
    c = cfg.constants
    m, n = c.m, c.n
    mm_idx, nn_idx, mixed_idx = _block_indices(m, n)
    on_locus = c.on_special_locus
    per_level: list[dict[str, float]] = []
    hs: list[float] = []
    for points_m, points_n in cfg.levels:
        rng = (np.random.default_rng(cfg.seed)
               if cfg.seed is not None else None)
        pg = build_product_geometry(
            c, points_m, points_n, cfg.period_m, cfg.period_n,
            cfg.g_spec, cfg.h_spec, cfg.f_amplitude, cfg.f_mode, rng,
            f_modes=cfg.f_modes)
        hs.append(max(pg.grid_m.spacing))
        gt = assemble_product_metric(pg)
        oracle = geometry.curvature_bundle(gt, cfg.order)
        del gt

        errors: dict[str, float] = {}
        closed_chr = christoffel_closed_form(pg, cfg.order)
        errors.update(_chr_family_errors(closed_chr, oracle.christoffel, m))
        del closed_chr

        gen = ricci_closed_general(pg, cfg.order)
        diff = gen.ricci.values - oracle.ricci.values
        errors["ricci_real_general"] = _max_abs(diff[..., mm_idx])
        errors["ricci_phantom_general"] = _max_abs(diff[..., nn_idx])
        errors["ricci_mixed_zero"] = _max_abs(oracle.ricci.values[..., mixed_idx])
        errors["scalar_general"] = _max_abs(gen.scalar.values
                                            - oracle.scalar.values)
        del gen, diff

        if on_locus:
            ans = ricci_closed_ansatz(pg, cfg.order)
            diff = ans.ricci.values - oracle.ricci.values
            errors["ricci_real_ansatz"] = _max_abs(diff[..., mm_idx])
            errors["ricci_phantom_ansatz"] = _max_abs(diff[..., nn_idx])
            errors["scalar_ansatz"] = _max_abs(ans.scalar.values
                                               - oracle.scalar.values)
            del ans, diff
        del oracle
        per_level.append(errors)

    rows: list[ConvergenceRow] = []
    for family in per_level[0]:
        for lvl, errs in enumerate(per_level):
            order = math.nan
            if lvl > 0:
                order = measured_order(hs[lvl - 1], per_level[lvl - 1][family],
                                       hs[lvl], errs[family])
            rows.append(ConvergenceRow(family=family, level=lvl, h=hs[lvl],
                                       error=errs[family], order=order))
    return rows


@dataclass
class IdentityRow:
    """All terms of the product-action identity at one level."""

    level: int
    h: float
    lam: float
    S_tilde: float
    F_lam: float
    vol_N: float
    total_scalar_N: float
    warp_coupling: float
    residual: float
    order: float


def identity_study(constants: WarpedConstants,
                   levels: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...],
                   period_m: float, period_n: float,
                   g_spec: FieldSpec, h_spec: FieldSpec,
                   f_amplitude: float, f_mode: int,
                   normalize_n: bool = False, order: int = 2,
                   seed: int | None = None,
                   f_modes: tuple[int, ...] | None = None) -> list[IdentityRow]:
    """Evaluate the product-action identity on a refinement ladder and
    report how fast the residual shrinks."""
    rows: list[IdentityRow] = []
    prev: tuple[float, float] | None = None
    for lvl, (points_m, points_n) in enumerate(levels):
        rng = np.random.default_rng(seed) if seed is not None else None
        pg = build_product_geometry(
            constants, points_m, points_n, period_m, period_n,
            g_spec, h_spec, f_amplitude, f_mode, rng, normalize_n,
            f_modes=f_modes)
        h = max(pg.grid_m.spacing)
        rep = theorem_identity_residual(pg, order)
        conv = math.nan
        if prev is not None:
            conv = measured_order(prev[0], abs(prev[1]), h, abs(rep.theorem_residual))
        rows.append(IdentityRow(
            level=lvl, h=h, lam=rep.lam, S_tilde=rep.S_tilde,
            F_lam=rep.F_lam, vol_N=rep.vol_N,
            total_scalar_N=rep.total_scalar_N,
            warp_coupling=rep.warp_coupling,
            residual=rep.theorem_residual, order=conv))
        prev = (h, rep.theorem_residual)
    return rows


@dataclass
class VariationRow:
    """One direction of the first-variation comparison."""

    lam: float
    direction: int
    numeric: float
    closed: float
    rel_mismatch: float
    richardson_gap: float


def variation_study(constants: WarpedConstants,
                    points_m: tuple[int, ...], points_n: tuple[int, ...],
                    period_m: float, period_n: float,
                    g_spec: FieldSpec, h_spec: FieldSpec,
                    f_amplitude: float, f_mode: int,
                    n_directions: int, seed: int,
                    direction_amplitude: float = 0.3,
                    eps: float = 1e-4, order: int = 2,
                    f_modes: tuple[int, ...] | None = None
                    ) -> list[VariationRow]:
    """Numeric vs closed directional derivative of the doubled action
    over seeded random directions.

    N is always rescaled to unit volume here: the closed covector is an
    integral over M alone, so it equals the derivative of the doubled
    product action exactly when Vol(N) = 1 and N is scalar-flat."""
    rng = np.random.default_rng(seed)
    pg = build_product_geometry(
        constants, points_m, points_n, period_m, period_n,
        g_spec, h_spec, f_amplitude, f_mode, rng, normalize_n=True,
        f_modes=f_modes)
    rows: list[VariationRow] = []
    for k in range(n_directions):
        dg = recipes.random_sym_tensor(pg.grid_m, rng, direction_amplitude)
        res = first_variation_check(pg, dg, constants.lam, order, eps=eps)
        denom = max(abs(res.numeric_derivative), abs(res.closed_form), 1e-300)
        rows.append(VariationRow(
            lam=constants.lam, direction=k,
            numeric=res.numeric_derivative, closed=res.closed_form,
            rel_mismatch=abs(res.numeric_derivative - res.closed_form) / denom,
            richardson_gap=res.richardson_gap))
    return rows


@dataclass
class DriftRow:
    """Constraint drift of one coupled run at one time step."""

    dt: float
    n_steps: int
    max_drift: float


def drift_study(state0: FlowState, lam: float, integrator: str,
                t_end: float, dts: list[float],
                order: int = 2) -> tuple[list[DriftRow], float]:
    """Run the coupled system to the same t_end at several time steps and
    fit the drift-vs-dt slope (the integrator's order)."""
    rows = []
    for dt in dts:
        cfg = FlowConfig(dt=dt, t_end=t_end, lam=lam, integrator=integrator,
                         mode="coupled", snapshot_stride=10 ** 9, order=order)
        traj = run_coupled(state0, cfg)
        rows.append(DriftRow(dt=dt, n_steps=cfg.n_steps,
                             max_drift=conserved_measure_check(traj)))
    slope = loglog_slope([r.dt for r in rows], [r.max_drift for r in rows])
    return rows, slope


def rate_study(state0: FlowState, lams: list[float], dt: float,
               order: int = 2) -> list:
    """Instantaneous dissipation-identity probe at one state for several
    couplings; returns the RateCheck per lam."""
    return [instantaneous_rate(state0, lam, dt, order) for lam in lams]
