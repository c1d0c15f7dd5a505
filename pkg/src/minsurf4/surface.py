"""Minimal immersions from Weierstrass data and their pointwise geometry.

For holomorphic ``e, f, g, h`` with ``e'f' + g'h' = 0`` the map

    X = e + conj(f) + (g + conj(h)) J

is a conformal harmonic immersion.  Differentiating by hand, with
``d/dx e = e'`` and ``d/dy e = i e'``:

    X_x  = e' + conj(f') + (g' + conj(h')) J
    X_y  = i e' - i conj(f') + (i g' - i conj(h')) J
    X_xx = e'' + conj(f'') + (g'' + conj(h'')) J
    X_xy = i e'' - i conj(f'') + (i g'' - i conj(h'')) J
    X_yy = -e'' - conj(f'') + (-g'' - conj(h'')) J

Integration constants are zero: surfaces are defined up to translation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gaussmap as gm
from .config import DEFAULT_TOL, Tolerances
from .errors import DegenerateImmersion, WeierstrassViolation
from .holo import Expr, ParamDomain, build_grid, eval_jet2, parse_expr, to_text, validate_on
from .quat import Quaternion, from_complex_pair, qdot, qmul, qnorm, qnorm2


@dataclass(frozen=True, eq=False)
class WeierstrassData:
    """Four holomorphic expressions over a parameter domain.

    Construction checks the quadric ``e'f' + g'h' = 0`` on the quadrature
    nodes of ``domain`` and rejects data violating it.
    """

    e: Expr
    f: Expr
    g: Expr
    h: Expr
    domain: ParamDomain
    name: str = "surface"
    check: bool = field(default=True, repr=False)
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        if self.check:
            res = self.quadric_residual()
            if res > self.tol.weierstrass:
                raise WeierstrassViolation(
                    f"{self.name}: max |e'f'+g'h'| / scale = {res:.3g} exceeds {self.tol.weierstrass:g}"
                )

    @classmethod
    def from_text(cls, e: str, f: str, g: str, h: str, domain: ParamDomain, name="surface", **kw):
        return cls(parse_expr(e), parse_expr(f), parse_expr(g), parse_expr(h), domain, name, **kw)

    @property
    def exprs(self):
        return (self.e, self.f, self.g, self.h)

    def texts(self):
        return tuple(to_text(x) for x in self.exprs)

    def with_domain(self, domain: ParamDomain) -> "WeierstrassData":
        return WeierstrassData(self.e, self.f, self.g, self.h, domain, self.name, self.check, self.tol)

    def derivatives(self, z):
        """``(W0, W1, W2)``: values, first and second derivatives, shape ``z.shape + (4,)``."""
        jets = [eval_jet2(x, np.asarray(z, complex), self.tol.singular_denominator) for x in self.exprs]
        W0 = np.stack([np.asarray(j.f, complex) for j in jets], axis=-1)
        W1 = np.stack([np.asarray(j.df, complex) for j in jets], axis=-1)
        W2 = np.stack([np.asarray(j.d2f, complex) for j in jets], axis=-1)
        return W0, W1, W2

    @cached_property
    def grid(self):
        return build_grid(self.domain)

    def validate(self, nodes=None):
        nodes = self.grid.z if nodes is None else nodes
        for x in self.exprs:
            validate_on(x, nodes, self.tol.singular_denominator)

    def quadric_residual(self, nodes=None) -> float:
        nodes = self.grid.z if nodes is None else nodes
        self.validate(nodes)
        _, W1, _ = self.derivatives(nodes)
        a = W1[..., 0] * W1[..., 1]
        b = W1[..., 2] * W1[..., 3]
        scale = float(np.max(np.abs(a) + np.abs(b)))
        res = float(np.max(np.abs(a + b)))
        return res / scale if scale > 0 else res

    @cached_property
    def metric_scale(self) -> float:
        """max E over the quadrature grid (reference for degeneracy tests)."""
        _, W1, _ = self.derivatives(self.grid.z)
        return float(np.max(np.sum(np.abs(W1) ** 2, axis=-1)))


@dataclass(frozen=True)
class SurfaceJet:
    """Geometry of the immersion at one parameter value."""

    z: complex
    X: Quaternion
    Xx: Quaternion
    Xy: Quaternion
    Xxx: Quaternion
    Xxy: Quaternion
    Xyy: Quaternion
    E: float
    Bxx: Quaternion
    Bxy: Quaternion
    KT: float
    KN: float
    delta: float


@dataclass(eq=False)
class SurfaceSamples:
    """Vectorized jets of a surface at a set of nodes (one row per node).

    Quaternion-valued fields have shape ``(N, 4)``.  ``w`` holds area
    weights when the nodes come from a quadrature grid.
    """

    z: np.ndarray
    w: np.ndarray | None
    W0: np.ndarray
    W1: np.ndarray
    W2: np.ndarray
    X: np.ndarray
    Xx: np.ndarray
    Xy: np.ndarray
    Xxx: np.ndarray
    Xxy: np.ndarray
    Xyy: np.ndarray
    E: np.ndarray
    Bxx: np.ndarray
    Bxy: np.ndarray
    KT: np.ndarray
    KN: np.ndarray
    delta: np.ndarray
    gL: np.ndarray
    gR: np.ndarray
    gLx: np.ndarray
    gLy: np.ndarray
    gRx: np.ndarray
    gRy: np.ndarray
    KT_gauss: np.ndarray
    KN_gauss: np.ndarray
    data: WeierstrassData | None = None

    def __len__(self):
        return len(self.z)

    def jet(self, i: int) -> SurfaceJet:
        q = Quaternion.from_array
        return SurfaceJet(
            complex(self.z[i]), q(self.X[i]), q(self.Xx[i]), q(self.Xy[i]), q(self.Xxx[i]),
            q(self.Xxy[i]), q(self.Xyy[i]), float(self.E[i]), q(self.Bxx[i]), q(self.Bxy[i]),
            float(self.KT[i]), float(self.KN[i]), float(self.delta[i]),
        )

    def integrate(self, values) -> float:
        if self.w is None:
            raise ValueError("samples carry no quadrature weights")
        return float(np.dot(self.w, np.asarray(values, float)))


def _tangent_projection(V, Xx, Xy, E):
    return V - (qdot(V, Xx) / E)[..., None] * Xx - (qdot(V, Xy) / E)[..., None] * Xy


def surface_from_jets(z, W0, W1, W2, w=None, data=None, metric_scale=None,
                      tol: Tolerances = DEFAULT_TOL) -> SurfaceSamples:
    """Build all pointwise geometry from Weierstrass jets ``(e,f,g,h)`` and derivatives."""
    z = np.asarray(z, complex).ravel()
    W0, W1, W2 = (np.asarray(a, complex).reshape(-1, 4) for a in (W0, W1, W2))
    e0, f0, g0, h0 = W0.T
    e1, f1, g1, h1 = W1.T
    e2, f2, g2, h2 = W2.T
    cj = np.conj
    X = from_complex_pair(e0 + cj(f0), g0 + cj(h0))
    Xx = from_complex_pair(e1 + cj(f1), g1 + cj(h1))
    Xy = from_complex_pair(1j * e1 - 1j * cj(f1), 1j * g1 - 1j * cj(h1))
    Xxx = from_complex_pair(e2 + cj(f2), g2 + cj(h2))
    Xxy = from_complex_pair(1j * e2 - 1j * cj(f2), 1j * g2 - 1j * cj(h2))
    Xyy = from_complex_pair(-e2 - cj(f2), -g2 - cj(h2))

    E = qnorm2(Xx)
    ref = float(np.max(E)) if metric_scale is None else metric_scale
    if np.any(E < tol.degenerate_metric * ref) or ref == 0.0:
        bad = int(np.argmin(E))
        raise DegenerateImmersion(f"E = {E[bad]:.3g} at z = {z[bad]:.6g} (max E {ref:.3g})")

    Bxx = _tangent_projection(Xxx, Xx, Xy, E)
    Bxy = _tangent_projection(Xxy, Xx, Xy, E)
    gL, gR = gm.gauss_arrays(Xx, Xy)
    delta = 2.0 * qdot(Bxx, qmul(gL, Bxy))
    KT = -(qnorm2(Bxx) + qnorm2(Bxy)) / E**2
    KN = delta / E**2
    gLx, gLy, gRx, gRy = gm.gauss_derivative_arrays(Xx, Xy, Xxx, Xxy, Xyy, Bxx, Bxy, gL, gR)
    nL, nR = qnorm2(gLx), qnorm2(gRx)
    KT_gauss = -(nL + nR) / (2.0 * E)
    # sign chosen so that KN = 2<Bxx, gL Bxy>/E^2 on both routes
    KN_gauss = (nL - nR) / (2.0 * E)
    return SurfaceSamples(
        z=z, w=None if w is None else np.asarray(w, float).ravel(), W0=W0, W1=W1, W2=W2,
        X=X, Xx=Xx, Xy=Xy, Xxx=Xxx, Xxy=Xxy, Xyy=Xyy, E=E, Bxx=Bxx, Bxy=Bxy,
        KT=KT, KN=KN, delta=delta, gL=gL, gR=gR, gLx=gLx, gLy=gLy, gRx=gRx, gRy=gRy,
        KT_gauss=KT_gauss, KN_gauss=KN_gauss, data=data,
    )


def surface_at(w: WeierstrassData, nodes, weights=None) -> SurfaceSamples:
    nodes = np.asarray(nodes, complex).ravel()
    W0, W1, W2 = w.derivatives(nodes)
    return surface_from_jets(nodes, W0, W1, W2, w=weights, data=w,
                             metric_scale=w.metric_scale, tol=w.tol)


def sample_surface(w: WeierstrassData, domain: ParamDomain | None = None) -> SurfaceSamples:
    """Jets on every node of the quadrature grid of ``domain`` (default: w.domain)."""
    grid = w.grid if domain is None else build_grid(domain)
    w.validate(grid.z)
    return surface_at(w, grid.z, grid.w)


# ---------------------------------------------------------------------------
# single-point operations


def immerse(w: WeierstrassData, z: complex) -> SurfaceJet:
    return surface_at(w, [z]).jet(0)


def second_form(jet: SurfaceJet):
    """Normal parts ``(B_xx, B_xy)`` of the second derivatives."""
    if jet.E <= 0:
        raise DegenerateImmersion("E = 0")
    xx, xy, E = jet.Xx.as_array(), jet.Xy.as_array(), jet.E
    bxx = _tangent_projection(jet.Xxx.as_array(), xx, xy, E)
    bxy = _tangent_projection(jet.Xxy.as_array(), xx, xy, E)
    return Quaternion.from_array(bxx), Quaternion.from_array(bxy)


@dataclass(frozen=True)
class Curvatures:
    KT: float
    KN: float
    delta: float
    KT_from_gauss: float
    KN_from_gauss: float

    @property
    def residual(self) -> float:
        scale = abs(self.KT) or 1.0
        return max(abs(self.KT - self.KT_from_gauss), abs(self.KN - self.KN_from_gauss)) / scale

    def __iter__(self):
        return iter((self.KT, self.KN, self.delta))


def curvatures(jet: SurfaceJet) -> Curvatures:
    """Tangent and normal curvature, from B and independently from Gauss derivatives."""
    bxx, bxy = (q.as_array() for q in second_form(jet))
    E = jet.E
    gl, _ = gm.gauss_quat(jet)
    delta = 2.0 * float(qdot(bxx, qmul(gl.as_array(), bxy)))
    kt = -(float(qnorm2(bxx)) + float(qnorm2(bxy))) / E**2
    kn = delta / E**2
    gLx, _, gRx, _ = gm.gauss_derivatives(jet)
    nl, nr = gLx.norm2(), gRx.norm2()
    return Curvatures(kt, kn, delta, -(nl + nr) / (2 * E), (nl - nr) / (2 * E))


# ---------------------------------------------------------------------------
# invariant residuals


def _rel_max(res, scale):
    scale = np.asarray(scale, float)
    den = scale + 1e-8 * float(np.max(scale))
    with np.errstate(all="ignore"):
        r = np.where(den > 0, res / np.where(den > 0, den, 1.0), res)
    return float(np.max(r))


def surface_residuals(s: SurfaceSamples) -> dict:
    """Max relative residuals of the immersion-level invariants."""
    E = s.E
    out = {
        "conformal_orthogonal": float(np.max(np.abs(qdot(s.Xx, s.Xy)) / E)),
        "conformal_equal_length": float(np.max(np.abs(qnorm2(s.Xy) - E) / E)),
        "harmonic": _rel_max(qnorm(s.Xxx + s.Xyy), qnorm(s.Xxx) + qnorm(s.Xyy) + E),
    }
    sq = np.sqrt(E)
    nb = qnorm(s.Bxx) + qnorm(s.Bxy) + sq
    out["B_normal"] = _rel_max(
        np.max(np.abs(np.stack([qdot(s.Bxx, s.Xx), qdot(s.Bxx, s.Xy),
                                qdot(s.Bxy, s.Xx), qdot(s.Bxy, s.Xy)])), axis=0) / sq, nb)
    Byy = _tangent_projection(s.Xyy, s.Xx, s.Xy, E)
    out["Byy_minus_Bxx"] = _rel_max(qnorm(Byy + s.Bxx), qnorm(s.Bxx) + sq)
    a = s.W1[:, 0] * s.W1[:, 1]
    b = s.W1[:, 2] * s.W1[:, 3]
    scale = float(np.max(np.abs(a) + np.abs(b)))
    out["weierstrass_quadric"] = float(np.max(np.abs(a + b))) / scale if scale > 0 else 0.0
    return out


def hyperplane_residual(s: SurfaceSamples, normal=(0.0, 0.0, 0.0, 1.0)) -> float:
    """max |<X - X(base), n>| / diameter over the samples."""
    n = np.asarray(normal, float)
    d = s.X - s.X[0]
    diam = float(np.max(qnorm(d))) or 1.0
    return float(np.max(np.abs(d @ n))) / diam


def fd_gauss_derivative_residual(w: WeierstrassData, nodes, rel_step: float = 1e-5) -> float:
    """Relative error of closed-form Gauss derivatives against central differences."""
    nodes = np.asarray(nodes, complex).ravel()
    h = w.domain.diameter * rel_step
    base = surface_at(w, nodes)
    # one reference for both maps: a constant Gauss map has only rounding-level derivatives
    ref = float(max(np.max(qnorm(getattr(base, k))) for k in ("gLx", "gLy", "gRx", "gRy"))) or 1.0
    worst = 0.0
    for shift, names in ((h, ("gLx", "gRx")), (1j * h, ("gLy", "gRy"))):
        plus = surface_at(w, nodes + shift)
        minus = surface_at(w, nodes - shift)
        for name, g in zip(names, ("gL", "gR")):
            fd = (getattr(plus, g) - getattr(minus, g)) / (2 * h)
            exact = getattr(base, name)
            scale = qnorm(exact) + 1e-3 * ref
            worst = max(worst, float(np.max(qnorm(fd - exact) / scale)))
    return worst


def holomorphic_section_residual(w: WeierstrassData, nodes, rel_step: float = 1e-4) -> float:
    """Residual of ``s_y + gL s_x = 0`` for ``s = Bxx + gL Bxy`` by central differences."""
    nodes = np.asarray(nodes, complex).ravel()
    h = w.domain.diameter * rel_step

    def sec(zs):
        t = surface_at(w, zs)
        return t.Bxx + qmul(t.gL, t.Bxy)

    base = surface_at(w, nodes)
    sx = (sec(nodes + h) - sec(nodes - h)) / (2 * h)
    sy = (sec(nodes + 1j * h) - sec(nodes - 1j * h)) / (2 * h)
    res = qnorm(sy + qmul(base.gL, sx))
    # a vanishing section (complex curves) is measured against the size of B
    ref = float(np.max(qnorm(base.Bxx) + qnorm(base.Bxy))) / w.domain.diameter
    scale = qnorm(sx) + qnorm(sy)
    return float(np.max(res / (scale + 1e-6 * max(float(scale.max()), ref) + 1e-300)))
