"""Finite-difference gradient machinery on evaluation grids.

All stencils are the classical second-order central differences in the grid
interior with first-order one-sided fallbacks on the first/last index of each
axis, applied axis by axis.  The multi-objective gradient is the sum of the
two normalised single-objective gradients (an ascent direction); wherever
either single gradient is (numerically) zero the joint gradient is defined
as the zero vector, which encodes single-objective criticality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import Grid, flatten_indices, _fmt


def _axis_derivative(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    v = np.moveaxis(values, axis, 0)
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * spacing)
    out[0] = (v[1] - v[0]) / spacing
    out[-1] = (v[-1] - v[-2]) / spacing
    return np.moveaxis(out, 0, axis)


def finite_diff_gradients(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Gradient field of a scalar grid field, shape (n1, n2, 2).

    Central differences over interior points, forward/backward differences
    on the grid boundary (denominators s_i and 2*s_i respectively).
    """
    if values.shape != grid.shape:
        raise ValueError(f"field shape {values.shape} does not match grid {grid.shape}")
    return np.stack(
        [_axis_derivative(values, grid.s1, 0), _axis_derivative(values, grid.s2, 1)],
        axis=-1,
    )


def gradient_norms(g: np.ndarray) -> np.ndarray:
    return np.hypot(g[..., 0], g[..., 1])


def gradient_scale(g1: np.ndarray, g2: np.ndarray) -> float:
    """Problem-intrinsic gradient magnitude: pooled mean single-gradient norm."""
    return float(0.5 * (gradient_norms(g1).mean() + gradient_norms(g2).mean()))


def mo_gradient(g1: np.ndarray, g2: np.ndarray, zero_tol: float = 0.0) -> np.ndarray:
    """Sum of the normalised single-objective gradients.

    Points where either gradient norm is below ``zero_tol`` (or exactly
    zero) get the zero vector: a vanishing single-objective gradient means
    the point is critical on its own and no direction of joint ascent is
    defined there.
    """
    n1 = gradient_norms(g1)
    n2 = gradient_norms(g2)
    zero = (n1 <= 0.0) | (n2 <= 0.0) | (n1 < zero_tol) | (n2 < zero_tol)
    d1 = np.where(zero, 1.0, n1)[..., None]
    d2 = np.where(zero, 1.0, n2)[..., None]
    mo = g1 / d1 + g2 / d2
    mo[zero] = 0.0
    return mo


def divergence(v: np.ndarray, grid: Grid) -> np.ndarray:
    """Divergence of a vector field, same stencils as the gradients."""
    if v.shape != grid.shape + (2,):
        raise ValueError(f"vector field shape {v.shape} does not match grid {grid.shape}")
    return _axis_derivative(v[..., 0], grid.s1, 0) + _axis_derivative(v[..., 1], grid.s2, 1)


@dataclass
class FieldSet:
    """All per-grid-point fields the detection pipeline works on.

    ``mo`` starts as the raw ascent multi-objective gradient; the boundary
    handling step replaces it with the rotated field (normal components
    removed where the descent direction would leave the box) and fills
    ``div_descent`` = div(-mo) of that rotated field.  ``mo_raw`` always
    keeps the unrotated field (the boundary efficiency test needs it).
    """

    grid: Grid
    f1: np.ndarray
    f2: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    mo_raw: np.ndarray
    mo: np.ndarray
    zero_tol: float
    div_descent: Optional[np.ndarray] = None


def build_fieldset(problem, grid: Grid, zero_tol_rel: float = 1e-12,
                   workers: int = 1) -> FieldSet:
    """Evaluate a problem on a grid and derive all first-order fields.

    ``zero_tol_rel`` is relative: the absolute zero tolerance is
    ``zero_tol_rel * gradient_scale(g1, g2)``.
    """
    from .grid import evaluate_grid

    f1, f2 = evaluate_grid(problem, grid, workers=workers)
    g1 = finite_diff_gradients(f1, grid)
    g2 = finite_diff_gradients(f2, grid)
    zero_tol = zero_tol_rel * gradient_scale(g1, g2)
    mo = mo_gradient(g1, g2, zero_tol)
    return FieldSet(grid=grid, f1=f1, f2=f2, g1=g1, g2=g2,
                    mo_raw=mo, mo=mo.copy(), zero_tol=zero_tol)


def export_fields_csv(path, fields: FieldSet) -> None:
    """CSV dump of the gradient fields: one row per grid point, j1 fastest.

    Columns: j1,j2,x1,x2,g1x,g1y,g2x,g2y,mox,moy,div  (mo = rotated field,
    div = divergence of the descent field -mo; empty if not yet computed).
    """
    grid = fields.grid
    j1s, j2s = flatten_indices(grid)
    X1, X2 = grid.meshes()
    div = fields.div_descent
    cols = [
        X1, X2,
        fields.g1[..., 0], fields.g1[..., 1],
        fields.g2[..., 0], fields.g2[..., 1],
        fields.mo[..., 0], fields.mo[..., 1],
    ]
    flat = [c.ravel(order="F") for c in cols]
    divf = div.ravel(order="F") if div is not None else None
    with open(path, "w", encoding="ascii") as fh:
        fh.write("j1,j2,x1,x2,g1x,g1y,g2x,g2y,mox,moy,div\n")
        for k in range(j1s.size):
            row = [str(j1s[k]), str(j2s[k])] + [_fmt(c[k]) for c in flat]
            row.append(_fmt(divf[k]) if divf is not None else "")
            fh.write(",".join(row) + "\n")
