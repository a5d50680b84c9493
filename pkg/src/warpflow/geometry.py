"""Generic curvature of an arbitrary metric field, by finite differences.

This module knows nothing about warped products.  It takes any positive
definite ``SymTensorField`` and grinds out Christoffel symbols, Ricci and
scalar curvature straight from the coordinate definitions, plus the scalar
helpers (Hessian, Laplace-Beltrami, gradient norm, volume density) used by
the action functionals.  Serving as an independent oracle for the closed
warped-product formulas is its whole purpose, so nothing here may share
code with those formulas.

Index and sign conventions:

* Gamma^k_{ij} = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
* Ric_{bd} = d_a Gamma^a_{bd} - d_b Gamma^a_{ad}
             + Gamma^p_{bd} Gamma^a_{ap} - Gamma^p_{ad} Gamma^a_{bp}
* R = g^{bd} Ric_{bd}

The sign convention is pinned by the round sphere: for the standard
metric on S^2 this Ricci is positive.  On the grid we pin it instead with
conformally flat 2d metrics g = e^{2u} delta, for which R = -2 e^{-2u}
(d_xx u + d_yy u); the tests hold the module to that identity.

Discrete quirks worth knowing:

* Second derivatives are compositions of first-difference stencils
  (package-wide choice, see the grids module), so the raw Ricci picks up
  an O(h^2) antisymmetric part from the d_b Gamma^a_{ad} term, whose
  arguments depend on position through the inverse metric.  The result is
  symmetrized and the discarded part is reported; a large value means the
  fields are under-resolved.
* Contractions are accumulated axis by axis to keep peak memory near two
  Christoffel-sized arrays, which is what lets 4d product grids with a
  few million nodes fit in a small container.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MetricDegeneracyError
from .grids import (Christoffel3Field, GridSpec, ScalarField, SymTensorField,
                    diff_array)

__all__ = [
    "CurvatureBundle",
    "inverse_metric",
    "christoffel",
    "ricci",
    "scalar_curvature",
    "curvature_bundle",
    "hessian",
    "laplace_beltrami",
    "grad_norm_sq",
    "volume_density",
]

CONDITION_LIMIT = 1e12
ASYMMETRY_WARN_FACTOR = 10.0


@dataclass
class CurvatureBundle:
    """Christoffel symbols, Ricci tensor and scalar curvature of one
    metric, stamped with which pipeline produced them.

    ``source_tag`` is one of ``"generic_oracle"``, ``"closed_form_general"``,
    ``"closed_form_ansatz"``.  ``ricci_asymmetry`` is the max-norm of the
    antisymmetric part discarded when symmetrizing (identically zero for
    the closed forms, which are symmetric by construction).
    """

    christoffel: Christoffel3Field
    ricci: SymTensorField
    scalar: ScalarField
    source_tag: str
    ricci_asymmetry: float = 0.0


def _require_metric(g: SymTensorField):
    if not g.is_metric:
        raise ValueError("this operation needs a field constructed with "
                         "is_metric=True")


def inverse_metric(g: SymTensorField, mats: np.ndarray | None = None) -> np.ndarray:
    """Nodewise inverse of a metric, with a conditioning guard.

    Returns a full (..., d, d) array.  If the Frobenius condition estimate
    ||g|| * ||g^-1|| exceeds CONDITION_LIMIT anywhere, the metric is
    declared numerically non-invertible and the report carries the worst
    node and its smallest eigenvalue.
    """
    _require_metric(g)
    if mats is None:
        mats = g.matrix()
    inv = np.linalg.inv(mats)
    frob_g = np.sqrt(np.sum(mats * mats, axis=(-2, -1)))
    frob_i = np.sqrt(np.sum(inv * inv, axis=(-2, -1)))
    cond = frob_g * frob_i
    worst = float(cond.max())
    if worst > CONDITION_LIMIT:
        flat = int(np.argmax(cond))
        node = tuple(int(c) for c in np.unravel_index(flat, g.grid.shape))
        eigs = np.linalg.eigvalsh(mats.reshape(-1, g.grid.dim, g.grid.dim)[flat])
        raise MetricDegeneracyError(
            f"metric numerically non-invertible at node {node}: condition "
            f"estimate {worst:.3e}, smallest eigenvalue {float(eigs[0]):.6e}",
            node=node, eigenvalue=float(eigs[0]))
    return inv


def christoffel(g: SymTensorField, order: int = 2) -> Christoffel3Field:
    """Christoffel symbols of the second kind, Gamma^k_{ij}.

    Built one derivative axis at a time: with D_a = d/dx^a,

        Gamma^k_{ij} = (1/2) g^{kl} (D_i g_{jl} + D_j g_{il} - D_l g_{ij})

    The accumulation order is identical for the (i, j) and (j, i) entries,
    so the stored array is symmetric to the bit and the symmetry check can
    be skipped.
    """
    _require_metric(g)
    grid = g.grid
    d = grid.dim
    mats = g.matrix()
    inv = inverse_metric(g, mats)
    out = np.zeros(grid.shape + (d, d, d))
    for a in range(d):
        da = diff_array(mats, grid, a, order)          # D_a g_{ij}
        half_raised = 0.5 * np.matmul(inv, da)         # (1/2) g^{kl} D_a g_{lj}
        out[..., :, a, :] += half_raised               # D_i term at i = a
        out[..., :, :, a] += half_raised               # D_j term at j = a
        for k in range(d):                             # -(1/2) g^{ka} D_a g_{ij}
            out[..., k, :, :] -= 0.5 * inv[..., k, a, None, None] * da
    return Christoffel3Field(grid, out, check_symmetry=False)


def _ricci_matrix(gamma: Christoffel3Field, order: int) -> np.ndarray:
    """Raw (unsymmetrized) Ricci as a full matrix array."""
    grid = gamma.grid
    d = grid.dim
    gam = gamma.values
    trace = np.einsum("...aab->...b", gam)             # Gamma^a_{ab}
    ric = np.zeros(grid.shape + (d, d))
    for a in range(d):
        ric += diff_array(gam[..., a, :, :], grid, a, order)
    for b in range(d):
        ric[..., b, :] -= diff_array(trace, grid, b, order)
    ric += np.einsum("...pbd,...p->...bd", gam, trace)
    ric -= np.einsum("...pad,...abp->...bd", gam, gam)
    return ric


def ricci(g: SymTensorField, order: int = 2,
          gamma: Christoffel3Field | None = None,
          return_asymmetry: bool = False):
    """Ricci tensor of a metric field, symmetrized.

    Only the D_b Gamma^a_{ad} term of the coordinate formula breaks exact
    discrete symmetry (its integrand depends on position through g^-1), so
    the antisymmetric residue is O(h^2) for resolved fields.  The residue
    is measured before symmetrizing; if it exceeds

        ASYMMETRY_WARN_FACTOR * h_max^2 * max(1, |Ric|_max)

    a warning flags likely under-resolution.
    """
    if gamma is None:
        gamma = christoffel(g, order)
    ric = _ricci_matrix(gamma, order)
    asym = float(np.abs(ric - np.swapaxes(ric, -1, -2)).max())
    field = SymTensorField.from_matrix(g.grid, ric, symmetrize=True)
    h_max = max(g.grid.spacing)
    scale = max(1.0, float(np.abs(field.values).max()))
    if asym > ASYMMETRY_WARN_FACTOR * h_max**2 * scale:
        warnings.warn(
            f"Ricci antisymmetric residue {asym:.3e} exceeds the O(h^2) "
            f"budget for spacing {h_max:.3e}; fields look under-resolved",
            stacklevel=2)
    if return_asymmetry:
        return field, asym
    return field


def scalar_curvature(g: SymTensorField, order: int = 2) -> ScalarField:
    """Scalar curvature R = g^{bd} Ric_{bd}."""
    return curvature_bundle(g, order).scalar


def curvature_bundle(g: SymTensorField, order: int = 2) -> CurvatureBundle:
    """Full curvature stack of one metric via the generic pipeline,
    sharing intermediates between the three levels."""
    gamma = christoffel(g, order)
    ric, asym = ricci(g, order, gamma=gamma, return_asymmetry=True)
    inv = inverse_metric(g)
    scal = np.einsum("...bd,...bd->...", inv, ric.matrix())
    return CurvatureBundle(
        christoffel=gamma,
        ricci=ric,
        scalar=ScalarField(g.grid, scal),
        source_tag="generic_oracle",
        ricci_asymmetry=asym)


def gradient_components(f: ScalarField, order: int = 2) -> np.ndarray:
    """All first partials of a scalar, stacked as (..., d)."""
    grid = f.grid
    out = np.empty(grid.shape + (grid.dim,))
    for a in range(grid.dim):
        out[..., a] = diff_array(f.values, grid, a, order)
    return out


def hessian(f: ScalarField, gamma: Christoffel3Field,
            order: int = 2) -> SymTensorField:
    """Covariant Hessian (nabla^2 f)_{jl} = D_j D_l f - Gamma^k_{jl} D_k f.

    Takes the connection, not the metric: the Hessian never needs g
    itself, and callers usually have the Christoffel field already.
    """
    if f.grid != gamma.grid:
        raise ValueError("scalar and connection live on different grids")
    grid = f.grid
    d = grid.dim
    df = gradient_components(f, order)
    out = np.empty(grid.shape + (d, d))
    for l in range(d):
        dl = diff_array(f.values, grid, l, order)
        for j in range(d):
            out[..., j, l] = diff_array(dl, grid, j, order)
    out -= np.einsum("...kjl,...k->...jl", gamma.values, df)
    return SymTensorField.from_matrix(grid, out, symmetrize=True)


def volume_density(g: SymTensorField) -> ScalarField:
    """Riemannian volume density sqrt(det g), nodewise."""
    _require_metric(g)
    return ScalarField(g.grid, np.sqrt(np.linalg.det(g.matrix())))


def laplace_beltrami(f: ScalarField, g: SymTensorField,
                     order: int = 2) -> ScalarField:
    """Laplace-Beltrami operator in divergence form,

        (Delta f) = rho^{-1} D_i ( rho g^{ij} D_j f ),   rho = sqrt(det g).

    With composed central stencils the periodic node sum of
    (Delta u) v rho  equals  -(grad u, grad v) rho summed, exactly: each
    D_i is antisymmetric under the node-sum pairing, so discrete
    integration by parts holds to roundoff.  That identity is what the
    action functionals lean on.
    """
    if f.grid != g.grid:
        raise ValueError("scalar and metric live on different grids")
    grid = f.grid
    inv = inverse_metric(g)
    rho = volume_density(g).values
    df = gradient_components(f, order)
    flux = rho[..., None] * np.einsum("...ij,...j->...i", inv, df)
    div = np.zeros(grid.shape)
    for i in range(grid.dim):
        div += diff_array(flux[..., i], grid, i, order)
    return ScalarField(grid, div / rho)


def grad_norm_sq(f: ScalarField, g: SymTensorField, order: int = 2) -> ScalarField:
    """Squared gradient norm |grad f|^2 = g^{ij} D_i f D_j f."""
    if f.grid != g.grid:
        raise ValueError("scalar and metric live on different grids")
    inv = inverse_metric(g)
    df = gradient_components(f, order)
    vals = np.einsum("...ij,...i,...j->...", inv, df, df)
    return ScalarField(f.grid, vals)
