"""Spherical areas of Gauss images.

Two notions are kept apart throughout:

* pullback area: the integral of the Gauss map Jacobian, i.e. image area
  counted with multiplicity;
* coverage area: area of the set of mesh cells hit by the image, i.e.
  without multiplicity.

Everything is computed on the unit sphere.  The Grassmannian of oriented
planes is a product of two spheres of radius 1/sqrt(2), so Grassmannian
areas are half the unit-sphere values (:func:`to_grassmannian`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from . import gaussmap as gm
from .errors import MeshTooCoarse
from .holo import ParamDomain
from .surface import SurfaceSamples, WeierstrassData, sample_surface

GRASSMANNIAN_FACTOR = 0.5
DEFAULT_MESH_LEVEL = 5
SIDES = ("left", "right")


def to_grassmannian(a_unit: float) -> float:
    return GRASSMANNIAN_FACTOR * a_unit


def proportion(a_unit: float) -> float:
    """Proportionate area: unit-sphere area / 4π (equivalently Grassmannian / 2π)."""
    return a_unit / (4.0 * math.pi)


# ---------------------------------------------------------------------------
# sphere mesh


def _icosahedron():
    t = (1.0 + 5.0**0.5) / 2.0
    v = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], float)
    f = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ])
    return v / np.linalg.norm(v, axis=1)[:, None], f


def _subdivide(v, f):
    nv = len(v)
    e = np.sort(np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]]), axis=1)
    uniq, inv = np.unique(e, axis=0, return_inverse=True)
    inv = inv.ravel()
    mids = v[uniq[:, 0]] + v[uniq[:, 1]]
    mids /= np.linalg.norm(mids, axis=1)[:, None]
    m = len(f)
    ab, bc, ca = inv[:m] + nv, inv[m:2 * m] + nv, inv[2 * m:] + nv
    a, b, c = f.T
    F = np.concatenate([
        np.stack([a, ab, ca], 1), np.stack([b, bc, ab], 1),
        np.stack([c, ca, bc], 1), np.stack([ab, bc, ca], 1),
    ])
    return np.vstack([v, mids]), F


def spherical_triangle_area(a, b, c):
    """Solid angle of spherical triangles with unit vertices (Oosterom-Strackee)."""
    num = np.abs(np.einsum("ij,ij->i", a, np.cross(b, c)))
    den = 1.0 + np.einsum("ij,ij->i", a, b) + np.einsum("ij,ij->i", b, c) + np.einsum("ij,ij->i", c, a)
    return 2.0 * np.arctan2(num, den)


@dataclass(frozen=True, eq=False)
class SphereMesh:
    """Subdivided icosahedron on the unit sphere with outward-oriented faces."""

    level: int
    vertices: np.ndarray
    faces: np.ndarray
    areas: np.ndarray
    centroids: np.ndarray
    cell_diameter: float
    _tree: cKDTree = field(repr=False)

    @property
    def n_cells(self) -> int:
        return len(self.faces)

    @property
    def area_ratio(self) -> float:
        return float(self.areas.max() / self.areas.min())

    @property
    def _edge_normals(self):
        # cached on the instance dict; the dataclass is frozen
        got = self.__dict__.get("_normals")
        if got is None:
            V, f = self.vertices, self.faces
            a, b, c = V[f[:, 0]], V[f[:, 1]], V[f[:, 2]]
            got = np.stack([np.cross(a, b), np.cross(b, c), np.cross(c, a)], axis=1)
            object.__setattr__(self, "_normals", got)
        return got

    def _inside(self, p, cells):
        s = np.einsum("nkj,nj->nk", self._edge_normals[cells], p)
        return np.all(s >= -1e-14, axis=1)

    def locate(self, points, k: int = 8) -> np.ndarray:
        """Index of the cell containing each unit vector in ``points`` (N, 3)."""
        p = np.asarray(points, float).reshape(-1, 3)
        p = p / np.linalg.norm(p, axis=1)[:, None]
        _, out = self._tree.query(p, k=1)
        miss = np.flatnonzero(~self._inside(p, out))
        if len(miss):
            _, cand = self._tree.query(p[miss], k=k)
            found = np.zeros(len(miss), bool)
            for j in range(k):
                hit = self._inside(p[miss], cand[:, j]) & ~found
                out[miss[hit]] = cand[hit, j]
                found |= hit
        return out

    @property
    def neighbors(self) -> np.ndarray:
        """(F, 3) indices of the faces sharing each edge."""
        got = self.__dict__.get("_nbrs")
        if got is None:
            f = self.faces
            m = len(f)
            e = np.sort(np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]]), axis=1)
            owner = np.tile(np.arange(m), 3)
            order = np.lexsort((e[:, 1], e[:, 0]))
            # every edge of a closed mesh appears exactly twice, so sorted pairs match up
            a, b = order[0::2], order[1::2]
            other = np.empty(3 * m, int)
            other[a], other[b] = owner[b], owner[a]
            got = other.reshape(3, m).T.copy()
            object.__setattr__(self, "_nbrs", got)
        return got

    def boundary_cells(self, occ) -> np.ndarray:
        """Occupied cells with at least one unoccupied edge neighbour."""
        occ = np.asarray(occ, bool)
        return occ & ~np.all(occ[self.neighbors], axis=1)

    def occupancy(self, points) -> np.ndarray:
        occ = np.zeros(self.n_cells, bool)
        if len(points):
            occ[self.locate(points)] = True
        return occ

    def covered_area(self, occ) -> float:
        # the cell areas sum to 4π only up to rounding; full coverage must not exceed it
        return min(float(self.areas[np.asarray(occ, bool)].sum()), 4.0 * math.pi)

    def cap_occupancy(self, axis, angle: float) -> np.ndarray:
        """Cells whose centroid lies within geodesic ``angle`` of ``axis``."""
        axis = np.asarray(axis, float)
        axis = axis / np.linalg.norm(axis)
        return self.centroids @ axis >= math.cos(angle)


@lru_cache(maxsize=8)
def icosphere(level: int = DEFAULT_MESH_LEVEL) -> SphereMesh:
    if level < 0:
        raise ValueError("level must be nonnegative")
    v, f = _icosahedron()
    for _ in range(level):
        v, f = _subdivide(v, f)
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    flip = np.einsum("ij,ij->i", a, np.cross(b, c)) < 0
    f[flip] = f[flip][:, [0, 2, 1]]
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    areas = spherical_triangle_area(a, b, c)
    cen = a + b + c
    cen /= np.linalg.norm(cen, axis=1)[:, None]
    edge = np.max(np.stack([np.linalg.norm(a - b, axis=1), np.linalg.norm(b - c, axis=1),
                            np.linalg.norm(c - a, axis=1)]), axis=0)
    v.setflags(write=False)
    f.setflags(write=False)
    return SphereMesh(level, v, f, areas, cen, float(edge.max()), cKDTree(cen))


# ---------------------------------------------------------------------------
# pullback (with multiplicity)


def pullback_area(samples: SurfaceSamples, side: str) -> float:
    """∫ |g_x|² dx dy over the quadrature grid (unit sphere)."""
    gx = samples.gLx if side == "left" else samples.gRx
    return samples.integrate(np.sum(gx * gx, axis=-1))


def gauss_curve_area(w: WeierstrassData | SurfaceSamples) -> float:
    """Area of the curve (gL, gR) in S² x S² from its induced product metric.

    Uses sqrt(|G_x|²|G_y|² - <G_x, G_y>²) with G_x = (gLx, gRx) and
    G_y = (gLy, gRy); no conformality of the Gauss curve is assumed.
    """
    s = w if isinstance(w, SurfaceSamples) else sample_surface(w)
    Gx = np.concatenate([s.gLx, s.gRx], axis=-1)
    Gy = np.concatenate([s.gLy, s.gRy], axis=-1)
    xx = np.sum(Gx * Gx, -1)
    yy = np.sum(Gy * Gy, -1)
    xy = np.sum(Gx * Gy, -1)
    return s.integrate(np.sqrt(np.maximum(xx * yy - xy * xy, 0.0)))


# ---------------------------------------------------------------------------
# coverage (without multiplicity)


@dataclass(frozen=True)
class CoverageSampling:
    """Adaptive parameter-space sampling controls.

    Cells of the unit parameter square are split until the Gauss image of
    the cell (corners and center) has chordal spread at most
    ``spread_frac`` mesh-cell diameters.
    """

    base: int = 16
    spread_frac: float = 0.5
    max_depth: int = 12
    max_points: int = 4_000_000
    guard: float = 3.0


def _gauss_points(w: WeierstrassData, conv: gm.StereographicConvention, side: str, z):
    _, W1, _ = w.derivatives(z)
    mags = np.max(np.abs(W1), axis=-1)
    live = mags > 1e-14 * max(float(mags.max(initial=0.0)), 1e-300)
    gl, gli, gr, gri = gm.gauss_hol_arrays(W1[live], scale=float(mags.max()))
    val, inf = (gl, gli) if side == "left" else (gr, gri)
    pts = np.full(z.shape + (3,), np.nan)
    pts[live] = conv.apply(side, val, inf)
    return pts


def sample_gauss_image(w: WeierstrassData, side: str, mesh: SphereMesh,
                       conv: gm.StereographicConvention | None = None,
                       ctl: CoverageSampling = CoverageSampling(),
                       domain: ParamDomain | None = None) -> np.ndarray:
    """Points of the Gauss image, dense enough to hit every covered mesh cell."""
    d = w.domain if domain is None else domain
    if conv is None:
        conv = gm.calibrate_stereographic(sample_surface(w, d))
    tol = ctl.spread_frac * mesh.cell_diameter
    n = ctl.base
    s = 1.0 / n
    iu, iv = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    u0, v0 = iu.ravel() * s, iv.ravel() * s
    size = np.full(u0.shape, s)
    out = []
    total = 0
    offs = np.array([[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5]])
    for depth in range(ctl.max_depth + 1):
        uu = u0[:, None] + offs[None, :, 0] * size[:, None]
        vv = v0[:, None] + offs[None, :, 1] * size[:, None]
        z = d.from_unit(uu, vv)
        P = _gauss_points(w, conv, side, z)
        ok = np.all(np.isfinite(P[..., 0]), axis=1)
        c = P[:, 4:5, :]
        spread = np.where(ok, 2.0 * np.max(np.linalg.norm(P - c, axis=-1), axis=1), 0.0)
        done = spread <= tol
        last = np.all(done) or depth == ctl.max_depth or total > ctl.max_points
        # unresolved cells are resampled by their children
        flat = (P if last else P[done]).reshape(-1, 3)
        out.append(flat[np.isfinite(flat[:, 0])])
        total += len(out[-1])
        if np.all(done):
            break
        if last:
            worst = float(spread.max())
            if worst > ctl.guard * mesh.cell_diameter:
                raise MeshTooCoarse(
                    f"Gauss image step {worst:.3g} exceeds {ctl.guard:g} cell diameters "
                    f"({mesh.cell_diameter:.3g}) after refinement"
                )
            break
        # split unresolved cells into four
        u0, v0, size = u0[~done], v0[~done], size[~done] / 2
        u0 = np.concatenate([u0, u0 + size, u0, u0 + size])
        v0 = np.concatenate([v0, v0, v0 + size, v0 + size])
        size = np.tile(size, 4)
    return np.concatenate(out) if out else np.zeros((0, 3))


def coverage_area(samples: SurfaceSamples | WeierstrassData, side: str,
                  mesh: SphereMesh | None = None, conv=None,
                  ctl: CoverageSampling = CoverageSampling()) -> float:
    """Area of mesh cells hit by the Gauss image (≤ 4π)."""
    mesh = icosphere() if mesh is None else mesh
    if isinstance(samples, SurfaceSamples):
        if samples.data is None:
            raise ValueError("coverage needs the Weierstrass data behind the samples")
        w = samples.data
        conv = conv or gm.calibrate_stereographic(samples)
    else:
        w = samples
    pts = sample_gauss_image(w, side, mesh, conv, ctl)
    return mesh.covered_area(mesh.occupancy(pts))


def coverage_occupancy(w: WeierstrassData, side: str, mesh: SphereMesh | None = None,
                       conv=None, ctl: CoverageSampling = CoverageSampling()) -> np.ndarray:
    mesh = icosphere() if mesh is None else mesh
    return mesh.occupancy(sample_gauss_image(w, side, mesh, conv, ctl))


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class AreaReport:
    """Areas in unit-sphere steradians; Grassmannian values are derived."""

    aL_pull: float
    aR_pull: float
    aL_cov: float
    aR_cov: float
    total_pull: float
    mesh_level: int
    occupancy: dict | None = field(default=None, compare=False, repr=False)
    boundary_area: dict | None = field(default=None, compare=False, repr=False)

    @property
    def aL_prop(self) -> float:
        return proportion(self.aL_pull)

    @property
    def aR_prop(self) -> float:
        return proportion(self.aR_pull)

    @property
    def aL_cov_prop(self) -> float:
        return proportion(self.aL_cov)

    @property
    def aR_cov_prop(self) -> float:
        return proportion(self.aR_cov)

    @property
    def total_grassmannian(self) -> float:
        return to_grassmannian(self.total_pull)

    @property
    def additivity_residual(self) -> float:
        ref = max(self.total_pull, 1e-300)
        return abs(self.total_pull - self.aL_pull - self.aR_pull) / ref

    def as_dict(self) -> dict:
        return {
            "aL_pull": self.aL_pull, "aR_pull": self.aR_pull,
            "aL_cov": self.aL_cov, "aR_cov": self.aR_cov,
            "total_pull": self.total_pull,
            "total_grassmannian": self.total_grassmannian,
            "aL_prop": self.aL_prop, "aR_prop": self.aR_prop,
            "aL_cov_prop": self.aL_cov_prop, "aR_cov_prop": self.aR_cov_prop,
            "additivity_residual": self.additivity_residual,
            "mesh_level": self.mesh_level,
        }


def area_report(w: WeierstrassData, mesh_level: int = DEFAULT_MESH_LEVEL,
                samples: SurfaceSamples | None = None, coverage: bool = True,
                ctl: CoverageSampling = CoverageSampling()) -> AreaReport:
    s = sample_surface(w) if samples is None else samples
    aL, aR = pullback_area(s, "left"), pullback_area(s, "right")
    occ, edge = None, None
    if coverage:
        mesh = icosphere(mesh_level)
        conv = gm.calibrate_stereographic(s)
        occ = {side: coverage_occupancy(w, side, mesh, conv, ctl) for side in SIDES}
        edge = {side: mesh.covered_area(mesh.boundary_cells(o)) for side, o in occ.items()}
        cL, cR = mesh.covered_area(occ["left"]), mesh.covered_area(occ["right"])
    else:
        cL = cR = float("nan")
    return AreaReport(aL, aR, cL, cR, gauss_curve_area(s), mesh_level, occ, edge)
