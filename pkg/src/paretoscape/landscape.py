"""Landscape aggregation: descent heights, basins, dominance ranks, cost.

Two height fields summarise the landscape:

* gradient-field heights ("gfh"): every grid point follows the joint descent
  direction -mo to the 8-neighbour with the best-aligned step, accumulating
  ||mo|| times the step length, until it reaches a locally efficient point.
  The accumulated length is the point's height; the efficient component it
  lands in is its basin.  Paths that end in a field-zero pit, leave no
  descending neighbour, or run into a cycle carry no basin and are counted
  as unconverged.

* cost landscape ("cost"): the height of a point is the number of grid
  points that strictly dominate it.  Exact tie semantics matter: points with
  identical objective vectors do not dominate each other.  A brute-force
  O(N^2) counter serves as the oracle; the production counter sorts by f1
  and sweeps a Fenwick tree over f2 ranks in O(N log N).

Locally efficient points are further decomposed into 8-connected components
and ranked by their dominance count within the efficient subset, which
separates globally from locally efficient structures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .criticality import (CriticalityMap, NEIGHBOR_OFFSETS, _pair_slices,
                          classify)
from .gradients import FieldSet, build_fieldset
from .grid import Grid, build_grid, flatten_indices, _fmt


# ---------------------------------------------------------------------------
# dominance counting
# ---------------------------------------------------------------------------

def dominance_counts_brute(F: np.ndarray, chunk: int = 512) -> np.ndarray:
    """O(N^2) reference counter: for each row, how many rows dominate it."""
    F = np.asarray(F, dtype=float)
    N = F.shape[0]
    out = np.empty(N, dtype=np.int64)
    for lo in range(0, N, chunk):
        hi = min(lo + chunk, N)
        a1 = F[lo:hi, 0][:, None]
        a2 = F[lo:hi, 1][:, None]
        b1 = F[None, :, 0]
        b2 = F[None, :, 1]
        dom = (b1 <= a1) & (b2 <= a2) & ((b1 < a1) | (b2 < a2))
        out[lo:hi] = dom.sum(axis=1)
    return out


def dominance_counts(F: np.ndarray) -> np.ndarray:
    """Strict-dominance counts in O(N log N).

    Sort by f1; sweep groups of equal f1 left to right, inserting each whole
    group into a Fenwick tree over f2 ranks before querying its members, so
    equal-f1 points see each other.  The prefix count at a point's f2 rank
    then counts all points with f1 <= and f2 <= (weak dominators including
    the point itself and its exact duplicates); subtracting the duplicate
    multiplicity leaves the strict dominators.
    """
    F = np.asarray(F, dtype=float)
    N = F.shape[0]
    if N == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.lexsort((F[:, 1], F[:, 0]))
    f1s = F[order, 0]
    _, f2rank = np.unique(F[:, 1], return_inverse=True)
    r = f2rank[order].astype(np.int64) + 1          # 1-based tree positions
    M = int(r.max())
    tree = [0] * (M + 1)
    weak_sorted = np.empty(N, dtype=np.int64)

    i = 0
    while i < N:
        j = i
        while j < N and f1s[j] == f1s[i]:
            j += 1
        for k in range(i, j):
            idx = int(r[k])
            while idx <= M:
                tree[idx] += 1
                idx += idx & (-idx)
        for k in range(i, j):
            idx = int(r[k])
            c = 0
            while idx > 0:
                c += tree[idx]
                idx -= idx & (-idx)
            weak_sorted[k] = c
        i = j

    weak = np.empty(N, dtype=np.int64)
    weak[order] = weak_sorted
    _, inv, cnt = np.unique(F, axis=0, return_inverse=True, return_counts=True)
    return weak - cnt[inv]


@dataclass
class HeightField:
    """A nonnegative per-grid-point height with its interpretation."""

    grid: Grid
    values: np.ndarray     # (n1, n2); float for gfh, int for cost
    mode: str              # "gfh" or "cost"


def cost_landscape(f1: np.ndarray, f2: np.ndarray, grid: Grid,
                   method: str = "fast") -> HeightField:
    """Dominance-count height for every grid point."""
    F = np.stack([f1.ravel(order="F"), f2.ravel(order="F")], axis=1)
    if method == "fast":
        counts = dominance_counts(F)
    elif method == "brute":
        counts = dominance_counts_brute(F)
    else:
        raise ValueError(f"unknown method {method!r}, expected 'fast' or 'brute'")
    values = counts.reshape((grid.n2, grid.n1)).T.copy()
    return HeightField(grid=grid, values=values, mode="cost")


# ---------------------------------------------------------------------------
# efficient-set decomposition
# ---------------------------------------------------------------------------

def connected_components(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected component labels of a boolean grid mask.

    Returns an int32 array (-1 outside the mask, component ids 0..C-1 in
    scan order of each component's first point) and the component count.
    """
    labels = np.full(mask.shape, -1, dtype=np.int32)
    n1, n2 = mask.shape
    comp = 0
    for si, sj in np.argwhere(mask):
        if labels[si, sj] != -1:
            continue
        labels[si, sj] = comp
        stack = [(int(si), int(sj))]
        while stack:
            i, j = stack.pop()
            for di, dj in NEIGHBOR_OFFSETS:
                a, b = i + di, j + dj
                if 0 <= a < n1 and 0 <= b < n2 and mask[a, b] and labels[a, b] == -1:
                    labels[a, b] = comp
                    stack.append((a, b))
        comp += 1
    return labels, comp


@dataclass
class EfficientSetDecomposition:
    """Efficient points with dominance ranks and connected components."""

    grid: Grid
    points: np.ndarray          # (E, 2) int32 grid indices, scan order
    ranks: np.ndarray           # (E,) dominance count within the efficient set
    component_of: np.ndarray    # (E,) component id per point
    component_labels: np.ndarray  # (n1, n2) int32 grid of ids, -1 elsewhere
    n_components: int
    component_sizes: np.ndarray   # (C,)
    component_min_rank: np.ndarray  # (C,)
    representative_f: np.ndarray    # (C, 2) objectives of a min-rank member

    @property
    def n_efficient(self) -> int:
        return int(self.points.shape[0])

    @property
    def n_rank0(self) -> int:
        return int((self.ranks == 0).sum())


def decompose_efficient_set(critmap: CriticalityMap, f1: np.ndarray,
                            f2: np.ndarray) -> EfficientSetDecomposition:
    """Rank efficient points by dominance and split them into components.

    Ranks are strict-dominance counts computed among the efficient points
    only; rank 0 marks the (approximate) globally efficient subset.
    """
    mask = critmap.efficient_mask
    pts = np.argwhere(mask).astype(np.int32)
    comp_labels, n_comp = connected_components(mask)
    if pts.shape[0] == 0:
        return EfficientSetDecomposition(
            grid=critmap.grid, points=pts, ranks=np.zeros(0, dtype=np.int64),
            component_of=np.zeros(0, dtype=np.int32),
            component_labels=comp_labels, n_components=0,
            component_sizes=np.zeros(0, dtype=np.int64),
            component_min_rank=np.zeros(0, dtype=np.int64),
            representative_f=np.zeros((0, 2)))
    F = np.stack([f1[pts[:, 0], pts[:, 1]], f2[pts[:, 0], pts[:, 1]]], axis=1)
    ranks = dominance_counts(F)
    comp_of = comp_labels[pts[:, 0], pts[:, 1]]
    sizes = np.bincount(comp_of, minlength=n_comp).astype(np.int64)
    min_rank = np.full(n_comp, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(min_rank, comp_of, ranks)
    rep = np.zeros((n_comp, 2))
    for c in range(n_comp):
        members = np.flatnonzero(comp_of == c)
        best = members[np.argmin(ranks[members])]
        rep[c] = F[best]
    return EfficientSetDecomposition(
        grid=critmap.grid, points=pts, ranks=ranks, component_of=comp_of,
        component_labels=comp_labels, n_components=n_comp,
        component_sizes=sizes, component_min_rank=min_rank,
        representative_f=rep)


# ---------------------------------------------------------------------------
# descent-path heights and basins
# ---------------------------------------------------------------------------

@dataclass
class BasinMap:
    """Basin (efficient component id) reached by each descent path."""

    grid: Grid
    labels: np.ndarray        # (n1, n2) int32, -1 = unconverged
    n_basins: int             # distinct components actually reached
    n_unconverged: int        # grid points whose path reaches no efficient point


def gfh_heights(fields: FieldSet, critmap: CriticalityMap,
                decomposition: EfficientSetDecomposition
                ) -> tuple[HeightField, BasinMap]:
    """Accumulated descent-path lengths and the basin each path reaches.

    From every grid point the path repeatedly moves to the 8-neighbour whose
    normalised decision-space offset has the largest dot product with the
    descent direction -mo, accumulating ||mo|| times the Euclidean step
    length.  Locally efficient points terminate paths at height 0; points
    with a zero field or no descending neighbour terminate at height 0
    without a basin.  The successor graph is a forest (plus possible rare
    cycles, which are cut and counted), so heights are accumulated by
    peeling the graph in topological rounds — no recursion, no memo misses.
    """
    grid = fields.grid
    n1, n2 = grid.shape
    N = n1 * n2
    mo = fields.mo
    mo_norm = np.hypot(mo[..., 0], mo[..., 1])
    vx = -mo[..., 0]
    vy = -mo[..., 1]

    best = np.full(grid.shape, -np.inf)
    succ = np.full(grid.shape, -1, dtype=np.int64)    # flat index i*n2 + j
    step_len = np.zeros(grid.shape)
    flat_idx = np.arange(N, dtype=np.int64).reshape(grid.shape)

    for di, dj in NEIGHBOR_OFFSETS:
        ai, bi = _pair_slices(di)
        aj, bj = _pair_slices(dj)
        length = float(np.hypot(di * grid.s1, dj * grid.s2))
        dot = (vx[ai, aj] * (di * grid.s1) + vy[ai, aj] * (dj * grid.s2)) / length
        better = dot > best[ai, aj]
        # slice views: updates only where the offset target stays in-grid
        best[ai, aj][better] = dot[better]
        succ[ai, aj][better] = flat_idx[bi, bj][better]
        step_len[ai, aj][better] = length

    terminal = critmap.efficient_mask | (mo_norm <= 0.0) | (best <= 0.0)
    succ[terminal] = -1
    cost = mo_norm * step_len
    cost[terminal] = 0.0

    succ_flat = succ.ravel()
    cost_flat = cost.ravel()
    indeg = np.bincount(succ_flat[succ_flat >= 0], minlength=N)
    peeled = np.zeros(N, dtype=bool)
    frontier = np.flatnonzero((indeg == 0) & (succ_flat >= 0))
    rounds = []
    while frontier.size:
        rounds.append(frontier)
        peeled[frontier] = True
        targets = succ_flat[frontier]
        dec = np.bincount(targets, minlength=N)
        indeg -= dec
        cand = np.unique(targets)
        frontier = cand[(indeg[cand] == 0) & (succ_flat[cand] >= 0) & ~peeled[cand]]

    on_cycle = (~peeled) & (succ_flat >= 0)
    heights = np.zeros(N)
    basins = np.full(N, -1, dtype=np.int32)
    eff_flat = critmap.efficient_mask.ravel()
    comp_flat = decomposition.component_labels.ravel()
    basins[eff_flat] = comp_flat[eff_flat]
    # cycle members and non-efficient sinks keep height 0 / basin -1
    succ_flat = succ_flat.copy()
    succ_flat[on_cycle] = -1

    for frontier in reversed(rounds):
        t = succ_flat[frontier]
        ok = t >= 0
        f_ok = frontier[ok]
        heights[f_ok] = cost_flat[f_ok] + heights[t[ok]]
        basins[f_ok] = basins[t[ok]]

    height_field = HeightField(grid=grid, values=heights.reshape(grid.shape),
                               mode="gfh")
    basin_grid = basins.reshape(grid.shape)
    reached = np.unique(basin_grid[basin_grid >= 0])
    basin_map = BasinMap(grid=grid, labels=basin_grid,
                         n_basins=int(reached.size),
                         n_unconverged=int((basin_grid < 0).sum()))
    return height_field, basin_map


# ---------------------------------------------------------------------------
# one-call pipeline
# ---------------------------------------------------------------------------

@dataclass
class LandscapeResult:
    """Everything the detector derives for one problem/grid combination."""

    problem: object
    grid: Grid
    fields: FieldSet
    critmap: CriticalityMap
    decomposition: EfficientSetDecomposition
    heights: HeightField
    basins: BasinMap
    cost: Optional[HeightField] = None

    @property
    def n_cycles(self) -> int:
        return self.basins.n_unconverged

    def summary(self) -> dict:
        return {
            "problem": getattr(self.problem, "name", str(self.problem)),
            "n_efficient": self.decomposition.n_efficient,
            "n_components": self.decomposition.n_components,
            "n_rank0": self.decomposition.n_rank0,
            "n_cycles": self.n_cycles,
        }


def analyze(problem, n1: int, n2: Optional[int] = None, *,
            lower=None, upper=None,
            zero_tol_rel: float = 1e-12, div_tol_rel: float = 1e-9,
            workers: int = 1, with_cost: bool = False) -> LandscapeResult:
    """Run the full pipeline for a problem at the given grid resolution."""
    if n2 is None:
        n2 = n1
    lo = problem.lower if lower is None else lower
    up = problem.upper if upper is None else upper
    grid = build_grid(lo, up, n1, n2)
    fields = build_fieldset(problem, grid, zero_tol_rel=zero_tol_rel,
                            workers=workers)
    critmap = classify(fields, div_tol_rel=div_tol_rel)
    decomposition = decompose_efficient_set(critmap, fields.f1, fields.f2)
    heights, basins = gfh_heights(fields, critmap, decomposition)
    cost = cost_landscape(fields.f1, fields.f2, grid) if with_cost else None
    return LandscapeResult(problem=problem, grid=grid, fields=fields,
                           critmap=critmap, decomposition=decomposition,
                           heights=heights, basins=basins, cost=cost)


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------

def export_heights_csv(path, heights: HeightField) -> None:
    """CSV of a height field: j1,j2,x1,x2,height (j1 fastest)."""
    grid = heights.grid
    j1s, j2s = flatten_indices(grid)
    X1, X2 = grid.meshes()
    x1f = X1.ravel(order="F")
    x2f = X2.ravel(order="F")
    h = heights.values.ravel(order="F")
    is_int = np.issubdtype(heights.values.dtype, np.integer)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("j1,j2,x1,x2,height\n")
        for k in range(j1s.size):
            hv = str(int(h[k])) if is_int else _fmt(h[k])
            fh.write(f"{j1s[k]},{j2s[k]},{_fmt(x1f[k])},{_fmt(x2f[k])},{hv}\n")


def export_decomposition_json(path, decomposition: EfficientSetDecomposition,
                              f1: np.ndarray, f2: np.ndarray) -> None:
    """JSON of the efficient-set decomposition.

    Top level: {"n_efficient", "n_rank0", "n_components", "components"}.
    Each component: id, size, min_rank, representative_f, and its points
    ({"j1","j2","x1","x2","f1","f2","rank"}, scan order, 1-based indices).
    """
    grid = decomposition.grid
    comps = []
    for c in range(decomposition.n_components):
        members = np.flatnonzero(decomposition.component_of == c)
        pts = []
        for m in members:
            i, j = decomposition.points[m]
            pts.append({
                "j1": int(i) + 1, "j2": int(j) + 1,
                "x1": float(grid.x1[i]), "x2": float(grid.x2[j]),
                "f1": float(f1[i, j]), "f2": float(f2[i, j]),
                "rank": int(decomposition.ranks[m]),
            })
        comps.append({
            "id": c,
            "size": int(decomposition.component_sizes[c]),
            "min_rank": int(decomposition.component_min_rank[c]),
            "representative_f": [float(v) for v in decomposition.representative_f[c]],
            "points": pts,
        })
    payload = {
        "n_efficient": decomposition.n_efficient,
        "n_rank0": decomposition.n_rank0,
        "n_components": decomposition.n_components,
        "components": comps,
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
