"""Discrete 2-D Riemannian bands on quadrilateral grids.

A band is an nu x nv grid of cells, each carrying a constant metric tensor
(g11, g12, g22) in index coordinates (one index step spans one cell).  The
u = 0 edge is the lower boundary, u = nu the upper boundary; the v
direction optionally wraps (cylinder).  Distances use the 8-neighborhood
vertex graph; region boundaries and separation use 4-neighbor dual cuts.

Vertices live at integer points (i, j), i in 0..nu, j in 0..nv-1 for
cylinders (j wraps) or 0..nv for rectangles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .warp import ModelSpace, mean_curvature_profile

__all__ = [
    "DiscreteBand",
    "BandMap",
    "Curve",
    "PreconditionError",
    "build_flat_cylinder",
    "build_warped_band",
    "band_width",
    "distance_field",
    "lipschitz_band_map",
    "separation_check",
    "structural_check",
    "gaussian_curvature",
    "scalar_curvature_field",
    "write_band",
    "read_band",
]

CYLINDER = "cylinder"
RECTANGLE = "rectangle"


class PreconditionError(ValueError):
    """A geometric precondition (e.g. band width) fails."""


@dataclass(frozen=True, eq=False)
class DiscreteBand:
    nu: int
    nv: int
    g11: np.ndarray
    g12: np.ndarray
    g22: np.ndarray
    topology: str = CYLINDER
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.nu < 1 or self.nv < 1:
            raise ValueError("grid must have at least one cell each way")
        if self.topology not in (CYLINDER, RECTANGLE):
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.topology == CYLINDER and self.nv < 4:
            raise ValueError("cylinders need nv >= 4 (vertex wrap degenerates below)")
        for name in ("g11", "g12", "g22"):
            arr = getattr(self, name)
            if arr.shape != (self.nu, self.nv):
                raise ValueError(f"{name} must have shape (nu, nv)")
        det = self.g11 * self.g22 - self.g12**2
        if np.any(self.g11 <= 0) or np.any(det <= 0):
            raise ValueError("metric must be positive definite in every cell")

    # -- geometry helpers --------------------------------------------------

    @property
    def periodic(self) -> bool:
        return self.topology == CYLINDER

    @property
    def n_vcols(self) -> int:
        """Number of vertex columns (nv for cylinders, nv+1 for rectangles)."""
        return self.nv if self.periodic else self.nv + 1

    @property
    def det(self) -> np.ndarray:
        return self.g11 * self.g22 - self.g12**2

    def cell_areas(self) -> np.ndarray:
        return np.sqrt(self.det)

    def total_area(self) -> float:
        return float(np.sum(self.cell_areas()))

    def vertex_id(self, i, j):
        j = np.mod(j, self.n_vcols) if self.periodic else j
        return np.asarray(i) * self.n_vcols + np.asarray(j)

    def metric_avg(self, cells: list[tuple[int, int]]) -> tuple[float, float, float]:
        """Average metric over a list of (iu, iv) cells (iv taken mod nv)."""
        g = np.zeros(3)
        k = 0
        for iu, iv in cells:
            if iu < 0 or iu >= self.nu:
                continue
            if self.periodic:
                iv = iv % self.nv
            elif iv < 0 or iv >= self.nv:
                continue
            g += (self.g11[iu, iv], self.g12[iu, iv], self.g22[iu, iv])
            k += 1
        if k == 0:
            raise ValueError("no adjacent cells")
        return tuple(g / k)  # type: ignore[return-value]

    def edge_length(self, g: tuple[float, float, float], d: tuple[int, int]) -> float:
        g11, g12, g22 = g
        du, dv = d
        return math.sqrt(g11 * du * du + 2 * g12 * du * dv + g22 * dv * dv)


def build_flat_cylinder(L: float, r: float, nu: int, nv: int) -> DiscreteBand:
    """Flat cylinder S^1_r x [0, L]."""
    if L <= 0 or r <= 0:
        raise ValueError("L and r must be positive")
    if nu < 4 or nv < 4:
        raise ValueError("nu and nv must be >= 4")
    g11 = np.full((nu, nv), (L / nu) ** 2)
    g22 = np.full((nu, nv), (2 * math.pi * r / nv) ** 2)
    g12 = np.zeros((nu, nv))
    return DiscreteBand(nu, nv, g11, g12, g22, CYLINDER)


def build_warped_band(m: ModelSpace, nu: int, nv: int,
                      circumference: float = 2 * math.pi) -> DiscreteBand:
    """Warped band phi(t)^2 dtheta^2 + dt^2 over a circle (n = 2 only)."""
    if m.n != 2:
        raise ValueError("warped bands are built from 2-dimensional models")
    if nu < 4 or nv < 4:
        raise ValueError("nu and nv must be >= 4")
    a, b = m.domain
    du = (b - a) / nu
    t_mid = a + (np.arange(nu) + 0.5) * du
    phi = m.warp.eval(t_mid)[0]
    g11 = np.full((nu, nv), du**2)
    g22 = np.tile(((phi * circumference / nv) ** 2)[:, None], (1, nv))
    g12 = np.zeros((nu, nv))
    return DiscreteBand(nu, nv, g11, g12, g22, CYLINDER)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def _vertex_graph(b: DiscreteBand) -> csr_matrix:
    """8-neighborhood vertex graph with metric edge lengths (cached)."""
    if "graph" in b._cache:
        return b._cache["graph"]
    nu, nv, nc = b.nu, b.nv, b.n_vcols
    rows, cols, wts = [], [], []

    def add(i1, j1, i2, j2, w):
        rows.append(b.vertex_id(i1, j1))
        cols.append(b.vertex_id(i2, j2))
        wts.append(w)

    iu = np.arange(nu)[:, None]
    iv = np.arange(nv)[None, :]
    # diagonals of each cell
    diag1 = np.sqrt(b.g11 + 2 * b.g12 + b.g22)
    diag2 = np.sqrt(b.g11 - 2 * b.g12 + b.g22)
    add(iu + 0 * iv, iv + 0 * iu, iu + 1, iv + 1, diag1)
    add(iu + 1 + 0 * iv, iv + 0 * iu, iu + 0, iv + 1, diag2)
    # u-edges (i,j)-(i+1,j): average g11 of the cells on both sides
    if b.periodic:
        g11m = 0.5 * (b.g11 + np.roll(b.g11, 1, axis=1))
        add(iu + 0 * iv, iv + 0 * iu, iu + 1, iv, np.sqrt(g11m))
    else:
        g11p = np.pad(b.g11, ((0, 0), (1, 1)), mode="edge")
        g11m = 0.5 * (g11p[:, :-1] + g11p[:, 1:])  # (nu, nv+1)
        jj = np.arange(nv + 1)[None, :]
        add(iu + 0 * jj, jj + 0 * iu, iu + 1, jj, np.sqrt(g11m))
    # v-edges (i,j)-(i,j+1): average g22 of the cells above and below
    g22p = np.pad(b.g22, ((1, 1), (0, 0)), mode="edge")
    g22m = 0.5 * (g22p[:-1, :] + g22p[1:, :])  # (nu+1, nv)
    ii = np.arange(nu + 1)[:, None]
    add(ii + 0 * iv, iv + 0 * ii, ii, iv + 1, np.sqrt(g22m))

    n = (nu + 1) * nc
    r = np.concatenate([np.ravel(x) for x in rows])
    c = np.concatenate([np.ravel(x) for x in cols])
    w = np.concatenate([np.ravel(x) for x in wts])
    graph = csr_matrix((w, (r, c)), shape=(n, n))
    b._cache["graph"] = graph
    return graph


def distance_field(b: DiscreteBand) -> np.ndarray:
    """Per-vertex shortest-path distance from the lower boundary, shape (nu+1, n_vcols)."""
    if "dist" in b._cache:
        return b._cache["dist"]
    graph = _vertex_graph(b)
    sources = [int(b.vertex_id(0, j)) for j in range(b.n_vcols)]
    d = dijkstra(graph, directed=False, indices=sources, min_only=True)
    field_ = d.reshape(b.nu + 1, b.n_vcols)
    b._cache["dist"] = field_
    return field_


def band_width(b: DiscreteBand) -> float:
    """Distance between the two boundary components on the vertex graph."""
    return float(np.min(distance_field(b)[-1, :]))


# ---------------------------------------------------------------------------
# band maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandMap:
    """Per-vertex map to an interval [a, b], equal to a on u=0 and b on u=nu."""

    values: np.ndarray
    interval: tuple[float, float]
    lipschitz: float


def _measured_lipschitz(b: DiscreteBand, values: np.ndarray) -> float:
    graph = _vertex_graph(b).tocoo()
    flat = values.ravel()
    num = np.abs(flat[graph.row] - flat[graph.col])
    return float(np.max(num / graph.data))


def lipschitz_band_map(b: DiscreteBand, a: float, bb: float,
                       margin: float) -> BandMap:
    """Band map built from the boundary distance field, Lipschitz constant < 1.

    Requires band_width(b) > (bb - a) / (1 - margin); the margin is the
    requested slack below Lipschitz constant 1.  One Jacobi smoothing pass
    is applied, preserving the exact boundary values.
    """
    if not (0 < margin < 1) or bb <= a:
        raise ValueError("need a < bb and margin in (0, 1)")
    w = band_width(b)
    if w <= (bb - a) / (1.0 - margin):
        raise PreconditionError(
            f"band too narrow: width {w:.6g} <= (bb-a)/(1-margin) = "
            f"{(bb - a) / (1 - margin):.6g}")
    d = distance_field(b)
    phi = a + (bb - a) * np.clip(d / w, 0.0, 1.0)
    sm = phi.copy()
    if b.periodic:
        nb = (np.roll(phi, 1, axis=1) + np.roll(phi, -1, axis=1)
              + np.vstack([phi[:1], phi[:-1]]) + np.vstack([phi[1:], phi[-1:]]))
        sm = nb / 4.0
    else:
        p = np.pad(phi, 1, mode="edge")
        sm = (p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]) / 4.0
    sm[0, :] = a
    sm[-1, :] = bb
    return BandMap(values=sm, interval=(a, bb),
                   lipschitz=_measured_lipschitz(b, sm))


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Curve:
    """Axis-aligned vertex polyline with a transverse orientation.

    ``vertices`` has shape (m, 2); segment k runs vertices[k] -> vertices[k+1]
    (cyclically when closed), each step a unit move in u or v (v interpreted
    mod the vertex-column count on cylinders).  Open chains arise as region
    boundaries on rectangle bands, running wall to wall.  ``normals`` holds
    the per-segment outward index direction (right of the walk direction).
    """

    vertices: np.ndarray
    closed: bool = True

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=int)
        object.__setattr__(self, "vertices", v)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("curve vertices must have shape (m, 2)")
        if self.closed and v.shape[0] < 4:
            raise ValueError("a closed curve needs >= 4 vertices")
        if not self.closed and v.shape[0] < 2:
            raise ValueError("an open chain needs >= 2 vertices")

    @property
    def m(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_segments(self) -> int:
        return self.m if self.closed else self.m - 1

    def segment_ends(self) -> tuple[np.ndarray, np.ndarray]:
        """(from, to) vertex indices per segment."""
        idx = np.arange(self.n_segments)
        to = (idx + 1) % self.m if self.closed else idx + 1
        return idx, to

    def steps(self, b: DiscreteBand) -> np.ndarray:
        """Per-segment unit index steps, shape (n_segments, 2)."""
        frm, to = self.segment_ends()
        d = self.vertices[to] - self.vertices[frm]
        if b.periodic:
            d[:, 1] = (d[:, 1] + b.n_vcols // 2) % b.n_vcols - b.n_vcols // 2
        if np.any(np.abs(d).sum(axis=1) != 1):
            raise ValueError("curve segments must be unit axis steps")
        return d

    def normals(self, b: DiscreteBand) -> np.ndarray:
        """Outward index direction per segment: right of the walk direction."""
        d = self.steps(b)
        return np.stack([d[:, 1], -d[:, 0]], axis=1)

    def segment_cells(self, b: DiscreteBand) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """(left cell, right cell) flanking each segment along the walk direction."""
        out = []
        d = self.steps(b)
        frm, _ = self.segment_ends()
        for k in range(self.n_segments):
            i, j = self.vertices[frm[k]]
            du, dv = d[k]
            j = j % b.n_vcols if b.periodic else j
            if du == 1:      # along +u at v-line j
                c_left, c_right = (i, j), (i, j - 1)
            elif du == -1:   # along -u at v-line j
                c_left, c_right = (i - 1, j - 1), (i - 1, j)
            elif dv == 1:    # along +v at u-line i
                c_left, c_right = (i - 1, j), (i, j)
            else:            # along -v at u-line i
                c_left, c_right = (i, j - 1), (i - 1, j - 1)
            out.append((c_left, c_right))
        return out

    def lengths(self, b: DiscreteBand) -> np.ndarray:
        d = self.steps(b)
        cells = self.segment_cells(b)
        out = np.empty(self.n_segments)
        for k in range(self.n_segments):
            g = b.metric_avg([c for c in cells[k]])
            out[k] = b.edge_length(g, tuple(d[k]))
        return out

    def total_length(self, b: DiscreteBand) -> float:
        return float(np.sum(self.lengths(b)))


def mid_circle(b: DiscreteBand, i: int | None = None) -> Curve:
    """The horizontal vertex circle at u-line i (cylinders only)."""
    if not b.periodic:
        raise ValueError("mid_circle requires a cylinder")
    if i is None:
        i = b.nu // 2
    verts = np.stack([np.full(b.nv, i), np.arange(b.nv)], axis=1)
    return Curve(vertices=verts)


def separation_check(b: DiscreteBand, curve: Curve | Iterable[Curve]) -> bool:
    """True iff the curve blocks every cell path from u=0 cells to u=nu-1 cells."""
    curves = [curve] if isinstance(curve, Curve) else list(curve)
    blocked: set[frozenset] = set()
    for c in curves:
        for left, right in c.segment_cells(b):
            l = (left[0], left[1] % b.nv if b.periodic else left[1])
            r = (right[0], right[1] % b.nv if b.periodic else right[1])
            blocked.add(frozenset((l, r)))
    seen = np.zeros((b.nu, b.nv), dtype=bool)
    stack = [(0, j) for j in range(b.nv)]
    seen[0, :] = True
    while stack:
        iu, iv = stack.pop()
        if iu == b.nu - 1:
            return False
        for du, dv in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ju, jv = iu + du, iv + dv
            if b.periodic:
                jv %= b.nv
            elif not (0 <= jv < b.nv):
                continue
            if not (0 <= ju < b.nu) or seen[ju, jv]:
                continue
            if frozenset(((iu, iv), (ju, jv))) in blocked:
                continue
            seen[ju, jv] = True
            stack.append((ju, jv))
    return True


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def _edge_lengths(b: DiscreteBand) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shared edge lengths of the triangulated band.

    lu[i, j]: u-edge at vertex column j (average g11 of the flanking cells),
    shape (nu, n_vcols).  lv[i, j]: v-edge at u-line i, shape (nu+1, nv).
    ld[iu, iv]: the (+1,+1) diagonal of each cell.
    """
    if b.periodic:
        lu = np.sqrt(0.5 * (np.roll(b.g11, 1, axis=1) + b.g11))
    else:
        g11p = np.pad(b.g11, ((0, 0), (1, 1)), mode="edge")
        lu = np.sqrt(0.5 * (g11p[:, :-1] + g11p[:, 1:]))
    g22p = np.pad(b.g22, ((1, 1), (0, 0)), mode="edge")
    lv = np.sqrt(0.5 * (g22p[:-1, :] + g22p[1:, :]))
    ld = np.sqrt(b.g11 + 2 * b.g12 + b.g22)
    return lu, lv, ld


def gaussian_curvature(b: DiscreteBand) -> np.ndarray:
    """Angle-defect Gaussian curvature per vertex, shape (nu+1, n_vcols).

    The band is treated as a piecewise-flat surface: every cell is split
    into two triangles along its (+1,+1) diagonal and each shared edge gets
    a single length (metric averaged over the flanking cells), so that the
    metric variation between cells shows up as an angle defect.  The defect
    is divided by one third of the incident triangle area.  Boundary rows
    (and rectangle side columns) copy their nearest interior value.
    """
    if "gauss" in b._cache:
        return b._cache["gauss"]
    nu, nv, nc = b.nu, b.nv, b.n_vcols
    lu, lv, ld = _edge_lengths(b)
    iu = np.arange(nu)[:, None] + np.zeros((1, nv), dtype=int)
    iv = np.arange(nv)[None, :] + np.zeros((nu, 1), dtype=int)
    col_next = (iv + 1) % nc if b.periodic else iv + 1

    ab = lu[iu, iv]            # A-B, bottom edge of the cell
    bc = lv[iu + 1, iv]        # B-C, right... side edge at u-line iu+1
    ca = ld[iu, iv]            # diagonal
    cd = lu[iu, col_next]      # C-D, top edge
    da = lv[iu, iv]            # D-A, side edge at u-line iu

    angles = np.zeros((nu + 1) * nc)
    areas = np.zeros((nu + 1) * nc)

    def accumulate(p_off, ang, area):
        vid = np.ravel(b.vertex_id(iu + p_off[0], iv + p_off[1]))
        np.add.at(angles, vid, np.ravel(ang))
        np.add.at(areas, vid, np.ravel(area))

    def tri(a, bqr, c, corners):
        """Triangle with sides a = PQ, bqr = QR, c = RP; corners (P, Q, R)."""
        s = 0.5 * (a + bqr + c)
        area = np.sqrt(np.clip(s * (s - a) * (s - bqr) * (s - c), 0.0, None))
        cos_p = np.clip((a**2 + c**2 - bqr**2) / (2 * a * c), -1.0, 1.0)
        cos_q = np.clip((a**2 + bqr**2 - c**2) / (2 * a * bqr), -1.0, 1.0)
        cos_r = np.clip((bqr**2 + c**2 - a**2) / (2 * bqr * c), -1.0, 1.0)
        for off, cosv in zip(corners, (cos_p, cos_q, cos_r)):
            accumulate(off, np.arccos(cosv), area)

    A, B, C, D = (0, 0), (1, 0), (1, 1), (0, 1)
    tri(ab, bc, ca, (A, B, C))
    tri(ca, cd, da, (A, C, D))

    angles = angles.reshape(nu + 1, nc)
    areas = areas.reshape(nu + 1, nc)
    with np.errstate(invalid="ignore", divide="ignore"):
        kv = (2 * math.pi - angles) / (areas / 3.0)
    # boundary rows see only half the angle fan: copy the nearest interior row
    kv[0, :] = kv[1, :]
    kv[-1, :] = kv[-2, :]
    if not b.periodic:
        kv[:, 0] = kv[:, 1]
        kv[:, -1] = kv[:, -2]
    b._cache["gauss"] = kv
    return kv


def scalar_curvature_field(b: DiscreteBand) -> np.ndarray:
    """Discrete scalar curvature (= 2 x Gaussian curvature) per vertex."""
    return 2.0 * gaussian_curvature(b)


# ---------------------------------------------------------------------------
# structural inequality
# ---------------------------------------------------------------------------

def vertex_metric(b: DiscreteBand, i: int, j: int) -> tuple[float, float, float]:
    return b.metric_avg([(i - 1, j - 1), (i - 1, j), (i, j - 1), (i, j)])


def _vertex_gradient(b: DiscreteBand, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index-space partials (df/di, df/dj) of a vertex field, second order."""
    fi = np.gradient(f, axis=0, edge_order=2)
    if b.periodic:
        fj = (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / 2.0
    else:
        fj = np.gradient(f, axis=1, edge_order=2)
    return fi, fj


def normal_derivative(b: DiscreteBand, f: np.ndarray, curve: Curve) -> np.ndarray:
    """<grad f, nu> per segment for a vertex field f and the curve's outward normal."""
    fi, fj = _vertex_gradient(b, f)
    d = curve.steps(b)
    out = np.empty(curve.n_segments)
    frm, to = curve.segment_ends()
    for k in range(curve.n_segments):
        total = 0.0
        for (i, j) in (curve.vertices[frm[k]], curve.vertices[to[k]]):
            jj = j % b.n_vcols if b.periodic else j
            g11, g12, g22 = vertex_metric(b, i, jj)
            det = g11 * g22 - g12 * g12
            # covector annihilating the walk direction, oriented to the right
            om = (float(d[k, 1]), float(-d[k, 0]))
            ginv_om = ((g22 * om[0] - g12 * om[1]) / det,
                       (-g12 * om[0] + g11 * om[1]) / det)
            norm = math.sqrt(om[0] * ginv_om[0] + om[1] * ginv_om[1])
            grad = (fi[i, jj], fj[i, jj])
            total += (grad[0] * ginv_om[0] + grad[1] * ginv_om[1]) / norm
        out[k] = total / 2.0
    return out


def pullback_h_field(b: DiscreteBand, m: ModelSpace, bmap: BandMap) -> np.ndarray:
    """Vertex field h = h_phi o map (map values clipped to the model domain)."""
    lo, hi = m.domain
    vals = np.clip(bmap.values, lo, hi)
    return np.asarray(mean_curvature_profile(m, vals))


def structural_check(b: DiscreteBand, bmap: BandMap, m: ModelSpace,
                     curve: Curve, tol: float) -> bool:
    """Check Sc(X) + n/(n-1) h^2 + 2 <grad h, nu> >= Sc_N / phi(map)^2 - tol.

    Evaluated per curve segment with the discrete (angle-defect) scalar
    curvature and h = h_phi o map; n = 2 for these bands.
    """
    return bool(np.all(structural_margin(b, bmap, m, curve) >= -tol))


def structural_margin(b: DiscreteBand, bmap: BandMap, m: ModelSpace,
                      curve: Curve) -> np.ndarray:
    """Per-segment LHS - RHS of the structural inequality (n = 2)."""
    if m.n != 2:
        raise ValueError("structural check applies to 2-dimensional models")
    sc = scalar_curvature_field(b)
    h = pullback_h_field(b, m, bmap)
    gh = normal_derivative(b, h, curve)
    lo, hi = m.domain
    frm, to = curve.segment_ends()
    margins = np.empty(curve.n_segments)
    for k in range(curve.n_segments):
        pts = [curve.vertices[frm[k]], curve.vertices[to[k]]]
        vals_sc, vals_h, vals_phi = [], [], []
        for (i, j) in pts:
            jj = j % b.n_vcols if b.periodic else j
            vals_sc.append(sc[i, jj])
            vals_h.append(h[i, jj])
            vals_phi.append(m.warp.eval(float(np.clip(bmap.values[i, jj], lo, hi)))[0])
        sc_k = float(np.mean(vals_sc))
        h_k = float(np.mean(vals_h))
        phi_k = float(np.mean(vals_phi))
        lhs = sc_k + 2.0 * h_k**2 + 2.0 * gh[k]
        rhs = m.base_scalar / phi_k**2
        margins[k] = lhs - rhs
    return margins


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def write_band(path, b: DiscreteBand) -> None:
    """Text format: 'band nu nv topology' then nu*nv rows of 'g11 g12 g22'."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"band {b.nu} {b.nv} {b.topology}\n")
        for iu in range(b.nu):
            for iv in range(b.nv):
                fh.write(f"{b.g11[iu, iv]:.17g} {b.g12[iu, iv]:.17g} "
                         f"{b.g22[iu, iv]:.17g}\n")


def read_band(path) -> DiscreteBand:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "band":
            raise ValueError("band file must start with 'band nu nv topology'")
        nu, nv = int(header[1]), int(header[2])
        topology = header[3]
        data = np.loadtxt(fh, dtype=float, ndmin=2)
    if data.shape != (nu * nv, 3):
        raise ValueError(f"expected {nu * nv} metric rows, found {data.shape[0]}")
    g = data.reshape(nu, nv, 3)
    return DiscreteBand(nu, nv, g[:, :, 0].copy(), g[:, :, 1].copy(),
                        g[:, :, 2].copy(), topology)
