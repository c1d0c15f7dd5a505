"""Stability criteria for minimal surfaces in R^4.

Sufficient conditions (eigenvalue bounds from spherical areas, their
harmonic-mean combination, the area hyperbola, the total Gauss area
threshold) only ever certify Stable; instability is asserted only for
surfaces with flat normal bundle, where the first Dirichlet eigenvalue of
the Gauss image decides.  Two discretizations back the certificates up:
a P1 finite-element Dirichlet eigenvalue on the sphere mesh, and a
finite-difference second variation of area on the parameter lattice.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .area import SphereMesh
from .errors import (EmptyDomain, FrameConstructionFailed, FullSphere, NotFlatNormal,
                     OutOfRange, SingularMass)
from .holo import Lattice, ParamDomain, build_lattice
from .quat import qdot, qmul, qnorm
from .surface import SurfaceSamples, WeierstrassData, surface_at

FOUR_PI = 4.0 * math.pi
MIN_SECOND_VARIATION_GRID = 16


class Verdict(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    UNKNOWN = "Unknown"


class Criterion(str, enum.Enum):
    HARMONIC_MEAN = "HarmonicMean"
    AREA_SUM = "AreaSum"
    HYPERBOLA = "Hyperbola"
    TOTAL_GAUSS = "TotalGauss"
    FLAT_NORMAL = "FlatNormal"


@dataclass(frozen=True)
class StabilityCertificate:
    verdict: Verdict
    criterion: Criterion
    inputs: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def stable(self) -> bool:
        return self.verdict is Verdict.STABLE

    def recheck(self) -> bool:
        """Re-evaluate the recorded criterion on the recorded inputs."""
        i = self.inputs
        if self.criterion is Criterion.HARMONIC_MEAN:
            ok = harmonic_mean_criterion(i["lambda"], i["mu"])
        elif self.criterion is Criterion.HYPERBOLA:
            ok = hyperbola_value(i["a"], i["b"]) <= 1.0
        elif self.criterion is Criterion.AREA_SUM:
            ok = i["a"] + i["b"] <= 1.0 / 3.0
        elif self.criterion is Criterion.TOTAL_GAUSS:
            ok = i["total_grassmannian"] < 2.0 * math.pi
        else:
            bound, num = i.get("lower_bound"), i.get("numeric")
            if self.verdict is Verdict.UNSTABLE:
                return num is not None and num < 2.0
            ok = (bound is not None and bound > 2.0) or (num is not None and num > 2.0)
        return ok if self.verdict is Verdict.STABLE else True

    def as_dict(self) -> dict:
        return {"verdict": self.verdict.value, "criterion": self.criterion.value,
                **{k: v for k, v in self.inputs.items()}, "notes": "; ".join(self.notes)}


# ---------------------------------------------------------------------------
# closed-form criteria


def lambda_lower_bound(A_unit: float) -> float:
    """Isoperimetric eigenvalue bound 2(4π - A)/A for a spherical domain of area A."""
    if not (0.0 < A_unit < FOUR_PI):
        raise OutOfRange(f"area {A_unit!r} outside (0, 4π)")
    return 2.0 * (FOUR_PI - A_unit) / A_unit


def harmonic_mean_criterion(lam: float, mu: float) -> bool:
    """True iff λμ/(λ+μ) > 1, i.e. the harmonic mean of λ and μ exceeds 2."""
    if lam <= 0 or mu <= 0:
        return False
    if math.isinf(lam) or math.isinf(mu):
        return min(lam, mu) > 1.0
    return lam * mu / (lam + mu) > 1.0


def hyperbola_value(a: float, b: float) -> float:
    """a/(2(1-a)) + b/(2(1-b)); the area criterion holds when this is ≤ 1."""
    if a >= 1.0 or b >= 1.0:
        return math.inf
    return a / (2.0 * (1.0 - a)) + b / (2.0 * (1.0 - b))


def hyperbola_boundary(a):
    """Upper edge b = (2-3a)/(3-4a) of the area stability domain, for 0 ≤ a ≤ 2/3."""
    a = np.asarray(a, float)
    return (2.0 - 3.0 * a) / (3.0 - 4.0 * a)


def equilateral_hyperbola(x0: float):
    """``(c, k)`` with (a-c)(b-c) = k through (x0, 0), (0, x0) and (1/2, 1/2)."""
    c = 1.0 / (4.0 * (1.0 - x0))
    return c, (0.5 - c) ** 2


def _check_prop(a, name):
    if not (0.0 <= a <= 1.0) or math.isnan(a):
        raise OutOfRange(f"{name} = {a!r} outside [0, 1]")


def classify_by_areas(aL_prop: float, aR_prop: float) -> StabilityCertificate:
    _check_prop(aL_prop, "aL_prop")
    _check_prop(aR_prop, "aR_prop")
    val = hyperbola_value(aL_prop, aR_prop)
    cor = aL_prop + aR_prop <= 1.0 / 3.0
    inputs = {"a": aL_prop, "b": aR_prop, "hyperbola": val, "area_sum_one_third": cor}
    verdict = Verdict.STABLE if val <= 1.0 else Verdict.UNKNOWN
    return StabilityCertificate(verdict, Criterion.HYPERBOLA, inputs)


def classify_area_sum(aL_prop: float, aR_prop: float) -> StabilityCertificate:
    _check_prop(aL_prop, "aL_prop")
    _check_prop(aR_prop, "aR_prop")
    ok = aL_prop + aR_prop <= 1.0 / 3.0
    return StabilityCertificate(Verdict.STABLE if ok else Verdict.UNKNOWN, Criterion.AREA_SUM,
                                {"a": aL_prop, "b": aR_prop})


def classify_harmonic_mean(lam: float, mu: float) -> StabilityCertificate:
    ok = harmonic_mean_criterion(lam, mu)
    return StabilityCertificate(Verdict.STABLE if ok else Verdict.UNKNOWN, Criterion.HARMONIC_MEAN,
                                {"lambda": lam, "mu": mu})


def bound_or_inf(A_unit: float) -> float:
    """Eigenvalue bound, extended by +inf for empty images (A = 0)."""
    if A_unit <= 0.0:
        return math.inf
    if A_unit >= FOUR_PI:
        return 0.0
    return lambda_lower_bound(A_unit)


def classify_total_gauss(total_grassmannian: float) -> StabilityCertificate:
    if total_grassmannian < 0:
        raise OutOfRange("total area must be nonnegative")
    ok = total_grassmannian < 2.0 * math.pi
    return StabilityCertificate(Verdict.STABLE if ok else Verdict.UNKNOWN, Criterion.TOTAL_GAUSS,
                                {"total_grassmannian": total_grassmannian})


# ---------------------------------------------------------------------------
# spherical Dirichlet eigenvalue


@dataclass(frozen=True)
class EigenvalueEstimate:
    lower_bound: float | None
    numeric: float | None = None
    mesh_level: int | None = None

    @property
    def consistent(self) -> bool:
        if self.lower_bound is None or self.numeric is None:
            return True
        return self.numeric >= self.lower_bound - 0.05 * self.numeric


def _p1_matrices(V, F):
    """Cotangent stiffness and consistent mass matrices of a triangle mesh."""
    a, b, c = V[F[:, 0]], V[F[:, 1]], V[F[:, 2]]
    n = len(V)
    area = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    rows, cols, vals = [], [], []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        # angle at vertex k is opposite edge (i, j)
        u = V[F[:, i]] - V[F[:, k]]
        v = V[F[:, j]] - V[F[:, k]]
        cot = np.einsum("ij,ij->i", u, v) / np.linalg.norm(np.cross(u, v), axis=1)
        w = 0.5 * cot
        rows += [F[:, i], F[:, j], F[:, i], F[:, j]]
        cols += [F[:, j], F[:, i], F[:, i], F[:, j]]
        vals += [-w, -w, w, w]
    K = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    mr, mc, mv = [], [], []
    for i in range(3):
        for j in range(3):
            mr.append(F[:, i])
            mc.append(F[:, j])
            mv.append(area * (2.0 if i == j else 1.0) / 12.0)
    M = sp.csr_matrix((np.concatenate(mv), (np.concatenate(mr), np.concatenate(mc))), shape=(n, n))
    return K, M


def spherical_lambda1(mesh: SphereMesh, occupancy, rtol: float = 1e-8, max_iter: int = 20000) -> float:
    """First Dirichlet eigenvalue of the Laplace-Beltrami operator on occupied cells."""
    occ = np.asarray(occupancy, bool)
    if not occ.any():
        raise EmptyDomain("no occupied cells")
    if occ.all():
        raise FullSphere("occupancy covers the whole sphere; no Dirichlet boundary")
    F = mesh.faces[occ]
    boundary = np.zeros(len(mesh.vertices), bool)
    boundary[mesh.faces[~occ].ravel()] = True
    used = np.zeros(len(mesh.vertices), bool)
    used[F.ravel()] = True
    free = np.flatnonzero(used & ~boundary)
    if not len(free):
        raise EmptyDomain("occupied region has no interior vertex")
    K, M = _p1_matrices(np.asarray(mesh.vertices), F)
    K = K[free][:, free].tocsc()
    M = M[free][:, free].tocsr()
    lu = spla.splu(K)
    x = np.full(len(free), 1.0)
    lam_old = math.inf
    for _ in range(max_iter):
        y = lu.solve(M @ x)
        x = y / math.sqrt(float(y @ (M @ y)))
        lam_new = float(x @ (K @ x)) / float(x @ (M @ x))
        if abs(lam_new - lam_old) <= rtol * abs(lam_new):
            return lam_new
        lam_old = lam_new
    return lam_old


def eigenvalue_estimate(A_unit: float, mesh: SphereMesh | None = None, occupancy=None) -> EigenvalueEstimate:
    lb = bound_or_inf(A_unit)
    num = None
    if mesh is not None and occupancy is not None:
        occ = np.asarray(occupancy, bool)
        if occ.any() and not occ.all():
            try:
                num = spherical_lambda1(mesh, occ)
            except EmptyDomain:
                num = math.inf
    return EigenvalueEstimate(lb, num, None if mesh is None else mesh.level)


# ---------------------------------------------------------------------------
# flat normal bundle


def normal_flatness(samples: SurfaceSamples) -> float:
    kt = float(np.max(np.abs(samples.KT)))
    kn = float(np.max(np.abs(samples.KN)))
    return kn / kt if kt > 0 else 0.0


def classify_flat_normal(samples: SurfaceSamples, lambda1: EigenvalueEstimate,
                         tol: float = 0.1, flat_tol: float = 1e-6) -> StabilityCertificate:
    ratio = normal_flatness(samples)
    if ratio >= flat_tol:
        raise NotFlatNormal(f"max|KN|/max|KT| = {ratio:.3g}")
    lb, num = lambda1.lower_bound, lambda1.numeric
    inputs = {"lower_bound": lb, "numeric": num, "KN_ratio": ratio}
    if lb is not None and lb > 2.0:
        return StabilityCertificate(Verdict.STABLE, Criterion.FLAT_NORMAL, inputs, ("eigenvalue bound > 2",))
    if num is not None:
        if num > 2.0 + tol:
            return StabilityCertificate(Verdict.STABLE, Criterion.FLAT_NORMAL, inputs, ("numeric λ > 2",))
        if num < 2.0 - tol:
            return StabilityCertificate(Verdict.UNSTABLE, Criterion.FLAT_NORMAL, inputs, ("numeric λ < 2",))
    return StabilityCertificate(Verdict.UNKNOWN, Criterion.FLAT_NORMAL, inputs, ("λ within tolerance of 2",))


# ---------------------------------------------------------------------------
# discretized second variation


@dataclass(frozen=True)
class SecondVariation:
    min_eig: float
    scale: float
    n_unknowns: int
    frame: str

    @property
    def relative(self) -> float:
        return self.min_eig / self.scale


def _unit(v):
    return v / qnorm(v)[:, None]


def normal_frame(s: SurfaceSamples, tol: float = 1e-3):
    """Orthonormal normal frame (ν1, ν2) with ν2 = gL ν1 over all sample nodes."""
    nb = qnorm(s.Bxx)
    top = float(nb.max(initial=0.0))
    if top > 0 and float(nb.min()) > tol * top:
        nu1, kind = _unit(s.Bxx), "second_form"
    else:
        E = s.E[:, None]
        best, best_min = None, -1.0
        for k in range(4):
            a = np.zeros_like(s.Xx)
            a[:, k] = 1.0
            p = a - (qdot(a, s.Xx)[:, None] / E) * s.Xx - (qdot(a, s.Xy)[:, None] / E) * s.Xy
            m = float(qnorm(p).min())
            if m > best_min:
                best, best_min = p, m
        if best_min < tol:
            raise FrameConstructionFailed(f"no ambient axis stays off the tangent plane (min {best_min:.3g})")
        nu1, kind = _unit(best), "ambient"
    nu2 = qmul(s.gL, nu1)
    err = max(float(np.max(np.abs(qdot(nu2, s.Xx)))) / float(np.sqrt(s.E).max()),
              float(np.max(np.abs(qdot(nu1, nu2)))))
    if err > 1e-8:
        raise FrameConstructionFailed(f"gL ν1 is not a normal unit vector orthogonal to ν1 (err {err:.3g})")
    return nu1, nu2, kind


def _lattice_edges(lat: Lattice):
    ny, nx = lat.shape
    idx = np.arange(ny * nx).reshape(ny, nx)
    keep = lat.active.ravel()
    out = []
    for p, q, h in ((idx[:, :-1], idx[:, 1:], lat.hx), (idx[:-1, :], idx[1:, :], lat.hy)):
        p, q = p.ravel(), q.ravel()
        m = keep[p] | keep[q]
        out.append((p[m], q[m], h))
    return out


def _inside_lattice(lat: Lattice):
    """Nodes that carry geometry: active nodes and their lattice neighbours."""
    ny, nx = lat.shape
    a = lat.active
    need = a.copy()
    need[:, 1:] |= a[:, :-1]
    need[:, :-1] |= a[:, 1:]
    need[1:, :] |= a[:-1, :]
    need[:-1, :] |= a[1:, :]
    return need


def _lattice_samples(w: WeierstrassData, lat: Lattice):
    need = _inside_lattice(lat).ravel()
    z = lat.z.ravel()
    # for disks, neighbours just outside are pulled radially onto the circle
    zz = z.copy()
    if lat.domain.kind == "disk":
        r = np.abs(zz)
        out = need & (r > lat.domain.R)
        zz[out] = zz[out] / r[out] * lat.domain.R
    s = surface_at(w, zz[need])
    return s, np.flatnonzero(need)


def _solve_generalized_min(K, Mdiag, scale):
    n = K.shape[0]
    if np.any(Mdiag <= 0):
        raise SingularMass("nonpositive mass entry")
    dinv = 1.0 / np.sqrt(Mdiag)
    if n <= 2500:
        A = K.toarray() * dinv[:, None] * dinv[None, :]
        return float(sla.eigh(0.5 * (A + A.T), eigvals_only=True, subset_by_index=[0, 0])[0])
    D = sp.diags(dinv)
    A = (D @ K @ D).tocsc()
    sigma = -(scale + 1.0) * 1.01
    # fixed start vector keeps ARPACK reproducible run to run
    val = spla.eigsh(A, k=1, sigma=sigma, which="LM", v0=np.ones(n), return_eigenvectors=False)
    return float(val[0])


def second_variation_min_eig(w: WeierstrassData, n: int = 32, domain: ParamDomain | None = None) -> SecondVariation:
    """Smallest eigenvalue of the discretized second variation of area.

    Normal sections ξ = u ν1 + v ν2 vanish on the boundary; the energy
    ∫ |∇^N ξ|² - (2/E)(<Bxx,ξ>² + <Bxy,ξ>²) dx dy is taken relative to the
    mass ∫ E |ξ|² dx dy.  The normal connection enters through
    ω = <∂ν1, ν2> on each lattice edge.
    """
    if n < MIN_SECOND_VARIATION_GRID:
        raise ValueError(f"grid {n} below minimum {MIN_SECOND_VARIATION_GRID}")
    lat = build_lattice(w.domain if domain is None else domain, n)
    s, nodes = _lattice_samples(w, lat)
    nu1s, nu2s, kind = normal_frame(s)
    N = lat.z.size
    nu1 = np.zeros((N, 4))
    nu2 = np.zeros((N, 4))
    nu1[nodes], nu2[nodes] = nu1s, nu2s
    E = np.zeros(N)
    E[nodes] = s.E
    bxx = np.zeros((N, 4))
    bxy = np.zeros((N, 4))
    bxx[nodes], bxy[nodes] = s.Bxx, s.Bxy
    cell = lat.hx * lat.hy

    rows, cols, vals = [], [], []
    r = 0
    for p, q, h in _lattice_edges(lat):
        omega = qdot(nu1[q] - nu1[p], 0.5 * (nu2[p] + nu2[q])) / h
        m = len(p)
        er1 = r + 2 * np.arange(m)
        er2 = er1 + 1
        up, vp, uq, vq = 2 * p, 2 * p + 1, 2 * q, 2 * q + 1
        # r1 = Δu/h - ω v̄,  r2 = Δv/h + ω ū
        for rr, cc, vv in ((er1, uq, 1.0 / h), (er1, up, -1.0 / h), (er1, vp, -0.5 * omega),
                           (er1, vq, -0.5 * omega), (er2, vq, 1.0 / h), (er2, vp, -1.0 / h),
                           (er2, up, 0.5 * omega), (er2, uq, 0.5 * omega)):
            rows.append(rr)
            cols.append(cc)
            vals.append(np.broadcast_to(vv, rr.shape))
        r += 2 * m
    D = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(r, 2 * N))
    K = (D.T @ D) * cell

    act = np.flatnonzero(lat.active.ravel())
    # potential: -(2/E) (<Bxx,ξ>² + <Bxy,ξ>²)
    Pu = np.zeros((N, 2, 2))
    for B in (bxx, bxy):
        c = np.stack([qdot(B, nu1), qdot(B, nu2)], axis=-1)
        Pu += np.einsum("ni,nj->nij", c, c)
    with np.errstate(all="ignore"):
        Pu *= np.where(E > 0, -2.0 / np.where(E > 0, E, 1.0), 0.0)[:, None, None] * cell
    pr, pc, pv = [], [], []
    for i in range(2):
        for j in range(2):
            pr.append(2 * act + i)
            pc.append(2 * act + j)
            pv.append(Pu[act, i, j])
    P = sp.csr_matrix((np.concatenate(pv), (np.concatenate(pr), np.concatenate(pc))), shape=(2 * N, 2 * N))
    dofs = np.sort(np.concatenate([2 * act, 2 * act + 1]))
    A = (K + P).tocsr()[dofs][:, dofs]
    Mdiag = np.repeat(E[act] * cell, 2)
    scale = float(np.max(2.0 * np.abs(s.KT)))
    scale = scale if scale > 0 else 1.0
    lam = _solve_generalized_min(A, Mdiag, scale)
    return SecondVariation(lam, scale, len(dofs), kind)


def jacobi_scalar_spectrum(lat_samples: SurfaceSamples, lat: Lattice, nodes, k: int = 4):
    """Lowest eigenvalues of ∫|∇f|² + 2∫KT f² E relative to ∫ E f² (Dirichlet).

    The form depends on the surface only through E and KT, so it is a direct
    probe of spectral invariance along isometric deformations.
    """
    N = lat.z.size
    E = np.zeros(N)
    KT = np.zeros(N)
    E[nodes] = lat_samples.E
    KT[nodes] = lat_samples.KT
    cell = lat.hx * lat.hy
    rows, cols, vals = [], [], []
    r = 0
    for p, q, h in _lattice_edges(lat):
        m = len(p)
        er = r + np.arange(m)
        rows += [er, er]
        cols += [q, p]
        vals += [np.full(m, 1.0 / h), np.full(m, -1.0 / h)]
        r += m
    D = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(r, N))
    act = np.flatnonzero(lat.active.ravel())
    A = ((D.T @ D) * cell + sp.diags(2.0 * KT * E * cell)).tocsr()[act][:, act]
    Md = E[act] * cell
    if np.any(Md <= 0):
        raise SingularMass("nonpositive mass entry")
    dinv = 1.0 / np.sqrt(Md)
    Ad = A.toarray() * dinv[:, None] * dinv[None, :]
    return sla.eigh(0.5 * (Ad + Ad.T), eigvals_only=True, subset_by_index=[0, min(k, len(act)) - 1])


def scalar_jacobi_spectrum(w: WeierstrassData, n: int = 24, k: int = 4, domain=None):
    lat = build_lattice(w.domain if domain is None else domain, n)
    s, nodes = _lattice_samples(w, lat)
    return jacobi_scalar_spectrum(s, lat, nodes, k)
