"""Parameter domains and the quadrature / lattice grids laid over them."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GAUSS_POINTS = 4
MIN_RESOLUTION = 8


@dataclass(frozen=True)
class ParamDomain:
    """A rectangle ``[x0,x1] x [y0,y1]`` or a disk ``|z| <= R`` about the origin.

    ``nx, ny`` are cells per axis; for a disk they are radial and angular
    cell counts.  Each cell carries ``points`` Gauss-Legendre nodes per axis.
    """

    kind: str = "rect"
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0
    R: float = 1.0
    nx: int = 16
    ny: int = 16
    points: int = GAUSS_POINTS

    def __post_init__(self):
        if self.kind not in ("rect", "disk"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.nx < MIN_RESOLUTION or self.ny < MIN_RESOLUTION:
            raise ValueError(f"resolution must be >= {MIN_RESOLUTION} per axis")
        if self.kind == "rect" and not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("rectangle must have positive measure")
        if self.kind == "disk" and not self.R > 0:
            raise ValueError("disk radius must be positive")

    @classmethod
    def rect(cls, x0, x1, y0, y1, n=16, ny=None, points=GAUSS_POINTS):
        return cls("rect", x0=x0, x1=x1, y0=y0, y1=y1, nx=n, ny=ny or n, points=points)

    @classmethod
    def disk(cls, R, n=16, ntheta=None, points=GAUSS_POINTS):
        return cls("disk", R=R, nx=n, ny=ntheta or n, points=points)

    def refined(self, factor: int = 2) -> "ParamDomain":
        from dataclasses import replace

        return replace(self, nx=self.nx * factor, ny=self.ny * factor)

    def with_resolution(self, n: int) -> "ParamDomain":
        from dataclasses import replace

        return replace(self, nx=n, ny=n)

    @property
    def area(self) -> float:
        if self.kind == "rect":
            return (self.x1 - self.x0) * (self.y1 - self.y0)
        return math.pi * self.R**2

    @property
    def diameter(self) -> float:
        if self.kind == "rect":
            return math.hypot(self.x1 - self.x0, self.y1 - self.y0)
        return 2.0 * self.R

    @property
    def base_point(self) -> complex:
        if self.kind == "rect":
            return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
        return 0j

    @property
    def bbox(self):
        if self.kind == "rect":
            return self.x0, self.x1, self.y0, self.y1
        return -self.R, self.R, -self.R, self.R

    def contains(self, z, strict: bool = True):
        z = np.asarray(z, dtype=complex)
        if self.kind == "rect":
            x, y = z.real, z.imag
            if strict:
                return (x > self.x0) & (x < self.x1) & (y > self.y0) & (y < self.y1)
            return (x >= self.x0) & (x <= self.x1) & (y >= self.y0) & (y <= self.y1)
        r = np.abs(z)
        return r < self.R if strict else r <= self.R

    def from_unit(self, u, v):
        """Map the unit square onto the (closed) domain; for disks (u, v) = (r/R, θ/2π)."""
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        if self.kind == "rect":
            return (self.x0 + u * (self.x1 - self.x0)) + 1j * (self.y0 + v * (self.y1 - self.y0))
        return self.R * u * np.exp(2j * math.pi * v)

    def describe(self) -> dict:
        if self.kind == "rect":
            return {"kind": "rect", "x0": self.x0, "x1": self.x1, "y0": self.y0, "y1": self.y1,
                    "nx": self.nx, "ny": self.ny}
        return {"kind": "disk", "R": self.R, "nx": self.nx, "ny": self.ny}


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes ``z`` (complex) with nonnegative area weights ``w``; Σw = domain area."""

    z: np.ndarray
    w: np.ndarray
    domain: ParamDomain

    def __len__(self):
        return len(self.z)

    def integrate(self, values) -> float:
        return float(np.dot(self.w, np.asarray(values, float)))


def _gauss_1d(a: float, b: float, cells: int, points: int):
    xg, wg = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(a, b, cells + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def build_grid(d: ParamDomain) -> QuadratureGrid:
    """Composite tensor Gauss-Legendre; polar tensor rule with Jacobian r on disks."""
    if d.kind == "rect":
        xs, wx = _gauss_1d(d.x0, d.x1, d.nx, d.points)
        ys, wy = _gauss_1d(d.y0, d.y1, d.ny, d.points)
        Y, X = np.meshgrid(ys, xs, indexing="ij")
        z = (X + 1j * Y).ravel()
        w = np.outer(wy, wx).ravel()
    else:
        rs, wr = _gauss_1d(0.0, d.R, d.nx, d.points)
        # periodic direction: the trapezoid (midpoint) rule is spectrally accurate
        nt = d.ny * d.points
        th = (np.arange(nt) + 0.5) * (2.0 * math.pi / nt)
        wt = np.full(nt, 2.0 * math.pi / nt)
        T, Rr = np.meshgrid(th, rs, indexing="ij")
        z = (Rr * np.exp(1j * T)).ravel()
        w = np.outer(wt, wr * rs).ravel()
    return QuadratureGrid(z=z, w=w, domain=d)


@dataclass(frozen=True)
class Lattice:
    """Uniform node lattice over the domain's bounding box, for finite differences.

    ``z`` has shape ``(ny, nx)``; ``active`` marks nodes strictly inside the
    domain (unknowns of Dirichlet problems).
    """

    z: np.ndarray
    active: np.ndarray
    hx: float
    hy: float
    domain: ParamDomain

    @property
    def shape(self):
        return self.z.shape


def build_lattice(d: ParamDomain, n: int) -> Lattice:
    x0, x1, y0, y1 = d.bbox
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    Y, X = np.meshgrid(ys, xs, indexing="ij")
    z = X + 1j * Y
    hx, hy = xs[1] - xs[0], ys[1] - ys[0]
    if d.kind == "rect":
        active = np.zeros(z.shape, bool)
        active[1:-1, 1:-1] = True
    else:
        active = d.contains(z, strict=True) & (np.abs(z) < d.R - 1e-9 * d.R)
    return Lattice(z=z, active=active, hx=float(hx), hy=float(hy), domain=d)
