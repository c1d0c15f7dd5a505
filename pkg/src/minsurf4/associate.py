"""Quadric-preserving unitary deformations of Weierstrass data.

A 4x4 complex matrix γ acts on the derivative vector (e', f', g', h').  If
γ is unitary the metric E = |e'|²+|f'|²+|g'|²+|h'|² is unchanged, and if
it rescales the quadratic form e'f' + g'h' the deformed data are again
Weierstrass data.  Continuous families come from γ_t = A exp(tΩ) A^-1 with
Ω real skew-symmetric, where A takes the sum-of-squares quadric to the
split one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla

from . import area as ar
from .errors import (AnglePi, NoSignChange, NonUnitary, NotInIdentityComponent,
                     NotSpecialOrthogonal, QuadricViolated)
from .holo import Lattice, build_grid
from .quat import Matrix4C, matrix_A, matrix_S
from .stability import (Criterion, StabilityCertificate, Verdict, classify_by_areas,
                        classify_total_gauss)
from .surface import SurfaceSamples, WeierstrassData, sample_surface

# ---------------------------------------------------------------------------
# SO(4) logarithm and paths


def so4_log(M, tol: float = 1e-10) -> np.ndarray:
    """Principal real logarithm of a rotation of R^4, via the real Schur form."""
    M = np.asarray(M, float)
    if M.shape != (4, 4):
        raise NotSpecialOrthogonal("expected a 4x4 matrix")
    orth = float(np.max(np.abs(M.T @ M - np.eye(4))))
    if orth > tol or np.linalg.det(M) <= 0:
        raise NotSpecialOrthogonal(f"orthogonality residual {orth:.3g}, det {np.linalg.det(M):.6g}")
    T, Q = sla.schur(M, output="real")
    L = np.zeros((4, 4))
    i = 0
    while i < 4:
        if i < 3 and abs(T[i + 1, i]) > 1e-12:
            c = 0.5 * (T[i, i] + T[i + 1, i + 1])
            s = 0.5 * (T[i + 1, i] - T[i, i + 1])
            th = math.atan2(s, c)
            if math.pi - abs(th) < 1e-9:
                raise AnglePi("rotation angle π in some plane")
            L[i, i + 1], L[i + 1, i] = -th, th
            i += 2
        else:
            if T[i, i] < 0:
                raise AnglePi("eigenvalue -1: rotation angle π in some plane")
            i += 1
    Om = Q @ L @ Q.T
    return 0.5 * (Om - Om.T)


@dataclass(frozen=True, eq=False)
class IsotopyPath:
    """t ↦ γ_t = A exp(tΩ) A^-1 with Ω real skew-symmetric."""

    omega: np.ndarray
    target: Matrix4C | None = None

    def __post_init__(self):
        om = np.asarray(self.omega, float)
        if np.max(np.abs(om + om.T)) > 1e-12:
            raise ValueError("generator must be skew-symmetric")

    def __call__(self, t: float) -> Matrix4C:
        a = matrix_A().m
        return Matrix4C(a @ sla.expm(t * np.asarray(self.omega, float)) @ np.linalg.inv(a))

    @classmethod
    def constant(cls) -> "IsotopyPath":
        return cls(np.zeros((4, 4)), Matrix4C(np.eye(4)))


def conjugated(target: Matrix4C) -> np.ndarray:
    a = matrix_A().m
    return np.linalg.inv(a) @ target.m @ a


def path_diagnostics(target: Matrix4C) -> dict:
    R = conjugated(target)
    return {
        "det_target": complex(np.linalg.det(target.m)),
        "det_AinvTA": complex(np.linalg.det(R)),
        "realness_AinvTA": float(np.max(np.abs(R.imag))),
        "orthogonality_AinvTA": float(np.max(np.abs(R.T @ R - np.eye(4)))),
    }


def build_path(target: Matrix4C, tol: float = 1e-8) -> IsotopyPath:
    """Path from the identity to ``target`` inside A·SO(4)·A^-1."""
    diag = path_diagnostics(target)
    det = diag["det_AinvTA"]
    if diag["realness_AinvTA"] > tol or diag["orthogonality_AinvTA"] > tol or abs(det - 1.0) > tol:
        raise NotInIdentityComponent(
            "A^-1 T A is not a real rotation: "
            f"det = {det.real:.6g}{det.imag:+.6g}i, realness residual {diag['realness_AinvTA']:.3g}",
            diag,
        )
    om = so4_log(conjugated(target).real)
    return IsotopyPath(om, target)


# ---------------------------------------------------------------------------
# deformed data


def _check_gamma(gamma: Matrix4C, tol=1e-10):
    if gamma.unitary_residual > tol:
        raise NonUnitary(f"unitary residual {gamma.unitary_residual:.3g}")
    if gamma.q2_multiplier is None:
        raise QuadricViolated("matrix does not rescale e'f'+g'h'")


@dataclass(frozen=True, eq=False)
class TransformedData:
    """Weierstrass data γ·(e, f, g, h), evaluated pointwise from the base data.

    Since γ is constant, γ applied to the primitives is a primitive of γ
    applied to the derivatives, so the immersion is recovered exactly.
    """

    base: WeierstrassData
    gamma: Matrix4C
    name: str = "deformed"

    def __post_init__(self):
        _check_gamma(self.gamma)

    @property
    def domain(self):
        return self.base.domain

    @property
    def tol(self):
        return self.base.tol

    @cached_property
    def grid(self):
        return build_grid(self.domain)

    @property
    def metric_scale(self):
        return self.base.metric_scale

    def validate(self, nodes=None):
        self.base.validate(nodes)

    def derivatives(self, z):
        return tuple(self.gamma.apply(a) for a in self.base.derivatives(z))

    def quadric_residual(self, nodes=None) -> float:
        nodes = self.grid.z if nodes is None else nodes
        _, W1, _ = self.derivatives(nodes)
        a = W1[..., 0] * W1[..., 1]
        b = W1[..., 2] * W1[..., 3]
        scale = float(np.max(np.abs(a) + np.abs(b)))
        res = float(np.max(np.abs(a + b)))
        return res / scale if scale > 0 else res


def deform(w: WeierstrassData, gamma: Matrix4C, tol: float = 1e-9) -> SurfaceSamples:
    """Samples of the surface with derivative data γ·(e', f', g', h')."""
    td = TransformedData(w, gamma)
    res = td.quadric_residual()
    if res > tol:
        raise QuadricViolated(f"deformed quadric residual {res:.3g}")
    return sample_surface(td)


def trapezoid_primitive(fprime: np.ndarray, lat: Lattice, base: tuple[int, int]) -> np.ndarray:
    """∫ f'(z) dz from the base node, along its row, then along columns.

    ``fprime`` has the lattice shape (ny, nx) (trailing axes allowed).
    """
    iy, ix = base
    fp = np.asarray(fprime, complex)
    F = np.zeros_like(fp)
    row = fp[iy]
    seg = 0.5 * (row[1:] + row[:-1]) * lat.hx
    c = np.concatenate([np.zeros_like(seg[:1]), np.cumsum(seg, axis=0)])
    F[iy] = c - c[ix]
    seg = 0.5 * (fp[1:] + fp[:-1]) * (1j * lat.hy)
    cum = np.concatenate([np.zeros_like(seg[:1]), np.cumsum(seg, axis=0)])
    F[:] = F[iy][None] + (cum - cum[iy][None])
    return F


# ---------------------------------------------------------------------------
# families


@dataclass(eq=False)
class AssociateFamily:
    """Base data deformed along ``path``; also usable with any t ↦ matrix map."""

    base: WeierstrassData
    path: Callable[[float], Matrix4C]
    ts: Sequence[float] = field(default_factory=lambda: tuple(np.linspace(0.0, 1.0, 33)))
    _cache: dict = field(default_factory=dict, repr=False)

    def samples(self, t: float) -> SurfaceSamples:
        key = float(t)
        if key not in self._cache:
            self._cache[key] = deform(self.base, self.path(key))
        return self._cache[key]

    def areas(self, t: float):
        s = self.samples(t)
        return ar.pullback_area(s, "left"), ar.pullback_area(s, "right")

    def total(self, t: float) -> float:
        return ar.gauss_curve_area(self.samples(t))

    def quadric_residual(self, t: float) -> float:
        return TransformedData(self.base, self.path(float(t))).quadric_residual()


@dataclass(frozen=True)
class InvariantRow:
    t: float
    metric_residual: float
    KT_residual: float
    aL_pull: float
    aR_pull: float
    total: float
    quadric_residual: float
    vector_norm_residual: float

    @property
    def aL_prop(self):
        return ar.proportion(self.aL_pull)

    @property
    def aR_prop(self):
        return ar.proportion(self.aR_pull)

    @property
    def total_prop(self):
        return ar.proportion(self.total) * 2.0


def invariant_report(fam: AssociateFamily, ts=None) -> list[InvariantRow]:
    ts = fam.ts if ts is None else ts
    base = sample_surface(fam.base)
    rows = []
    kts = float(np.max(np.abs(base.KT))) or 1.0
    for t in ts:
        s = fam.samples(t)
        gam = fam.path(float(t))
        v = gam.apply(base.W1)
        vn = np.abs(np.linalg.norm(v, axis=-1) - np.linalg.norm(base.W1, axis=-1)) / np.linalg.norm(base.W1, axis=-1)
        rows.append(InvariantRow(
            t=float(t),
            metric_residual=float(np.max(np.abs(s.E - base.E) / base.E)),
            KT_residual=float(np.max(np.abs(s.KT - base.KT))) / kts,
            aL_pull=ar.pullback_area(s, "left"),
            aR_pull=ar.pullback_area(s, "right"),
            total=ar.gauss_curve_area(s),
            quadric_residual=fam.quadric_residual(t),
            vector_norm_residual=float(np.max(vn)),
        ))
    return rows


@dataclass(frozen=True)
class BalancedPoint:
    t0: float
    aL: float
    aR: float
    total: float
    iterations: int


def find_balanced_t(fam, rel_tol: float = 1e-3, max_iter: int = 60) -> BalancedPoint:
    """Bisection for aL(t) = aR(t) on [0, 1].

    ``fam`` needs ``areas(t) -> (aL, aR)``; the difference must change
    sign between the endpoints (or vanish at t = 0).
    """
    aL0, aR0 = fam.areas(0.0)
    tot0 = aL0 + aR0
    if abs(aL0 - aR0) <= rel_tol * tot0:
        return BalancedPoint(0.0, aL0, aR0, tot0, 0)
    aL1, aR1 = fam.areas(1.0)
    d0, d1 = aL0 - aR0, aL1 - aR1
    if d1 != 0.0 and np.sign(d0) == np.sign(d1):
        raise NoSignChange(
            f"aL - aR has the same sign at both ends ({d0:.6g}, {d1:.6g})",
            {"t0": (aL0, aR0), "t1": (aL1, aR1)},
        )
    lo, hi = 0.0, 1.0
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        aL, aR = fam.areas(mid)
        d = aL - aR
        if abs(d) <= rel_tol * (aL + aR):
            return BalancedPoint(mid, aL, aR, aL + aR, it)
        if np.sign(d) == np.sign(d0):
            lo = mid
        else:
            hi = mid
    raise NoSignChange("bisection did not converge", {"t0": (aL0, aR0), "t1": (aL1, aR1)})


@dataclass(frozen=True)
class SwapInterpolation:
    """Convex interpolation between a family's endpoint areas and their swap.

    Not a deformation of any surface: it exercises the bisection on a
    continuous function with the endpoint behaviour the swap would have.
    """

    aL: float
    aR: float

    def areas(self, t: float):
        return (1 - t) * self.aL + t * self.aR, (1 - t) * self.aR + t * self.aL


# ---------------------------------------------------------------------------
# total-area pipeline


def total_area_pipeline(w: WeierstrassData, balance_tol: float = 1e-3,
                  samples: SurfaceSamples | None = None) -> StabilityCertificate:
    """Total Gauss area test with the balancing step made explicit.

    Areas are pullback areas (with multiplicity), which bound the image
    areas from above and so keep the conclusion on the safe side.
    """
    s = sample_surface(w) if samples is None else samples
    aL, aR = ar.pullback_area(s, "left"), ar.pullback_area(s, "right")
    total = ar.to_grassmannian(ar.gauss_curve_area(s))
    inputs = {"total_grassmannian": total, "aL_prop": ar.proportion(aL), "aR_prop": ar.proportion(aR)}
    if not classify_total_gauss(total).stable:
        return StabilityCertificate(Verdict.UNKNOWN, Criterion.TOTAL_GAUSS, inputs, ("total ≥ 2π",))
    notes = []
    if abs(aL - aR) <= balance_tol * (aL + aR) or aL + aR == 0.0:
        a = ar.proportion(0.5 * (aL + aR))
        cert = classify_by_areas(a, a)
        notes.append("balanced at t = 0")
        return StabilityCertificate(cert.verdict, Criterion.TOTAL_GAUSS, {**inputs, "t0": 0.0, "a": a}, tuple(notes))

    S = matrix_S()
    swapped = deform(w, S)
    sL, sR = ar.pullback_area(swapped, "left"), ar.pullback_area(swapped, "right")
    inputs.update({"swap_aL_prop": ar.proportion(sL), "swap_aR_prop": ar.proportion(sR)})
    notes.append("discrete swap exchanges left and right areas")
    try:
        path = build_path(S)
    except NotInIdentityComponent as exc:
        d = exc.diagnostics
        inputs.update({"det_AinvSA": d["det_AinvTA"], "realness_AinvSA": d["realness_AinvTA"]})
        notes.append(f"NotInIdentityComponent: {exc}")
        notes.append("no continuous swap; unbalanced case left undecided")
        return StabilityCertificate(Verdict.UNKNOWN, Criterion.TOTAL_GAUSS, inputs, tuple(notes))
    try:
        bp = find_balanced_t(AssociateFamily(w, path), balance_tol)
    except NoSignChange as exc:
        notes.append(f"NoSignChange: {exc}")
        return StabilityCertificate(Verdict.UNKNOWN, Criterion.TOTAL_GAUSS, inputs, tuple(notes))
    a = ar.proportion(0.5 * (bp.aL + bp.aR))
    cert = classify_by_areas(a, a)
    notes.append(f"balanced at t0 = {bp.t0:.6g}")
    return StabilityCertificate(cert.verdict, Criterion.TOTAL_GAUSS, {**inputs, "t0": bp.t0, "a": a}, tuple(notes))


def random_rotation_path(rng: np.random.Generator, scale: float = 1.0) -> IsotopyPath:
    X = rng.standard_normal((4, 4)) * scale
    return IsotopyPath(0.5 * (X - X.T))

