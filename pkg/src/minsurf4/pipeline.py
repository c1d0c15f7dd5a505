"""Analysis pipelines shared by the command line and the test-suite.

:func:`analyze` runs everything known about one surface; :func:`verify`
runs the invariant suite over the built-in catalog.  Both return plain data
(checks, reports, certificates) and never print.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq
from scipy.special import lpmv

from . import area as ar
from . import catalog
from . import gaussmap as gm
from . import stability as st
from .associate import (AssociateFamily, IsotopyPath, SwapInterpolation, TransformedData, build_path, deform,
                        find_balanced_t, invariant_report, random_rotation_path, total_area_pipeline)
from .config import DEFAULT_TOL, Tolerances, probe_seed
from .errors import Minsurf4Error, NoSignChange, NotInIdentityComponent
from .quat import matrix_S, s_diagnostics
from .surface import (WeierstrassData, fd_gauss_derivative_residual, holomorphic_section_residual,
                      hyperplane_residual, sample_surface, surface_residuals)

PASS, FAIL, SKIP, XFAIL = "PASS", "FAIL", "SKIP", "XFAIL"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    value: float | None = None
    threshold: float | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIP, XFAIL)


def check(name, value, threshold, le=True, detail="") -> Check:
    good = value <= threshold if le else value >= threshold
    if isinstance(value, float) and math.isnan(value):
        good = False
    return Check(name, PASS if good else FAIL, float(value), float(threshold), detail)


@dataclass(frozen=True)
class RunConfig:
    grid: int = 32
    mesh_level: int = ar.DEFAULT_MESH_LEVEL
    tsamples: int = 33
    tol: Tolerances = DEFAULT_TOL
    coverage: bool = True
    second_variation: bool = True
    numeric_eigen: bool = True
    surfaces: tuple = catalog.DEFAULT_SET
    caps: int = 50
    seed: int = field(default_factory=probe_seed)

    def __post_init__(self):
        if not 8 <= self.grid <= 256:
            raise ValueError("grid must be within [8, 256]")
        if not 0 <= self.mesh_level <= 7:
            raise ValueError("mesh level must be within [0, 7]")
        if not 2 <= self.tsamples <= 1025:
            raise ValueError("tsamples must be within [2, 1025]")


# ---------------------------------------------------------------------------
# one surface


@dataclass
class Analysis:
    name: str
    checks: list
    areas: ar.AreaReport
    certificates: dict
    second_variation: st.SecondVariation | None
    verdict: st.Verdict
    facts: dict

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def _interior_probe_nodes(w, k=6):
    g = w.grid
    idx = np.linspace(0, len(g.z) - 1, k + 2)[1:-1].astype(int)
    return g.z[idx]


def pointwise_checks(w: WeierstrassData, tol: Tolerances, prefix: str = "") -> list[Check]:
    s = sample_surface(w)
    out = []
    for k, v in surface_residuals(s).items():
        thr = tol.weierstrass if k == "weierstrass_quadric" else tol.jet_invariant
        out.append(check(f"{prefix}{k}", v, thr))
    for k, v in gm.identity_residuals(s).items():
        out.append(check(f"{prefix}{k}", v, tol.identity))
    nodes = _interior_probe_nodes(w)
    out.append(check(f"{prefix}gauss_derivative_fd", fd_gauss_derivative_residual(w, nodes), 1e-5))
    out.append(check(f"{prefix}holomorphic_section_fd", holomorphic_section_residual(w, nodes), 1e-4))
    try:
        conv = gm.calibrate_stereographic(s)
        out.append(check(f"{prefix}stereographic_calibration", conv.residual, 1e-6))
    except Minsurf4Error as exc:
        out.append(Check(f"{prefix}stereographic_calibration", FAIL, detail=str(exc)))
    return out


def eigen_for_side(areas: ar.AreaReport, side: str, mesh, occ, numeric: bool) -> st.EigenvalueEstimate:
    A = areas.aL_cov if side == "left" else areas.aR_cov
    if math.isnan(A):
        # without coverage, the pullback area bounds the image area from above
        A = areas.aL_pull if side == "left" else areas.aR_pull
    if numeric and occ is not None:
        return st.eigenvalue_estimate(A, mesh, occ)
    return st.EigenvalueEstimate(st.bound_or_inf(A), None, mesh.level if mesh else None)


def analyze(w: WeierstrassData, cfg: RunConfig = RunConfig()) -> Analysis:
    tol = cfg.tol
    w = w.with_domain(replace(w.domain, nx=cfg.grid, ny=cfg.grid)) if hasattr(w, "with_domain") else w
    checks = pointwise_checks(w, tol)
    s = sample_surface(w)
    facts: dict = {}

    rep = ar.area_report(w, cfg.mesh_level, s, coverage=cfg.coverage)
    fine = sample_surface(w.with_domain(w.domain.refined(2)))
    ref = max(rep.total_pull, 1e-300)
    for side in ar.SIDES:
        a0, a1 = ar.pullback_area(s, side), ar.pullback_area(fine, side)
        # a side with negligible area is judged against the total
        den = a1 if a1 > 1e-6 * ref else ref
        checks.append(check(f"pullback_refinement_{side}", abs(a1 - a0) / den if rep.total_pull > 0 else 0.0,
                            tol.area_rel))
    checks.append(check("gauss_area_additivity", rep.additivity_residual if rep.total_pull > 0 else 0.0, tol.area_rel))

    mesh = ar.icosphere(cfg.mesh_level)
    occ = rep.occupancy or {}
    if cfg.coverage:
        # coverage counts whole cells, so it may overshoot by the cells straddling the image boundary
        for side, cov, pull in (("left", rep.aL_cov, rep.aL_pull), ("right", rep.aR_cov, rep.aR_pull)):
            slack = tol.coverage_rel * pull + rep.boundary_area[side]
            checks.append(check(f"coverage_le_pullback_{side}", cov - pull, slack))
            checks.append(check(f"coverage_le_sphere_{side}", cov, 4.0 * math.pi * (1 + 1e-12)))
        slack = tol.coverage_rel * rep.total_pull + sum(rep.boundary_area.values())
        checks.append(check("total_ge_coverage_sum", rep.aL_cov + rep.aR_cov - rep.total_pull, slack))

    certs: dict = {}
    cov_ok = cfg.coverage
    aLc = rep.aL_cov_prop if cov_ok else min(rep.aL_prop, 1.0)
    aRc = rep.aR_cov_prop if cov_ok else min(rep.aR_prop, 1.0)
    lam = st.bound_or_inf(4 * math.pi * aLc)
    mu = st.bound_or_inf(4 * math.pi * aRc)
    certs["harmonic_mean"] = st.classify_harmonic_mean(lam, mu)
    certs["hyperbola"] = st.classify_by_areas(min(aLc, 1.0), min(aRc, 1.0))
    certs["area_sum"] = st.classify_area_sum(min(aLc, 1.0), min(aRc, 1.0))
    certs["total_gauss"] = st.classify_total_gauss(rep.total_grassmannian)
    certs["total_area_pipeline"] = total_area_pipeline(w, samples=s)

    flat = st.normal_flatness(s)
    facts["KN_over_KT"] = flat
    facts["max_abs_KN"] = float(np.max(np.abs(s.KN)))
    if flat < 1e-6:
        est = eigen_for_side(rep, "left", mesh, occ.get("left"), cfg.numeric_eigen)
        facts["lambda1_bound"] = est.lower_bound
        facts["lambda1_numeric"] = est.numeric
        certs["flat_normal"] = st.classify_flat_normal(s, est)

    for k, c in certs.items():
        checks.append(Check(f"certificate_recheck_{k}", PASS if c.recheck() else FAIL))

    sv = None
    if cfg.second_variation and cfg.grid >= st.MIN_SECOND_VARIATION_GRID:
        sv = st.second_variation_min_eig(w, cfg.grid)
        facts["second_variation_min_eig"] = sv.min_eig
        facts["second_variation_scale"] = sv.scale
        if any(c.stable for c in certs.values()):
            checks.append(check("stable_implies_second_variation_nonnegative", -sv.relative, tol.stability_scale))
        fn = certs.get("flat_normal")
        if fn is not None and fn.verdict is st.Verdict.UNSTABLE:
            checks.append(check("unstable_implies_negative_second_variation", sv.min_eig, 0.0, le=True))
    else:
        checks.append(Check("second_variation", SKIP, detail=f"grid {cfg.grid} below {st.MIN_SECOND_VARIATION_GRID}"
                            if cfg.grid < st.MIN_SECOND_VARIATION_GRID else "disabled"))

    verdict = st.Verdict.UNKNOWN
    if any(c.verdict is st.Verdict.UNSTABLE for c in certs.values()):
        verdict = st.Verdict.UNSTABLE
    if any(c.stable for c in certs.values()):
        verdict = st.Verdict.STABLE if verdict is st.Verdict.UNKNOWN else verdict
    return Analysis(getattr(w, "name", "surface"), checks, rep, certs, sv, verdict, facts)


# ---------------------------------------------------------------------------
# associate sweep


@dataclass
class Sweep:
    rows: list
    certificate: st.StabilityCertificate
    diagnostics: dict
    checks: list
    balanced_t0: float | None


def associate_sweep(w: WeierstrassData, cfg: RunConfig = RunConfig(), path: IsotopyPath | None = None) -> Sweep:
    rng = np.random.default_rng(cfg.seed)
    path = random_rotation_path(rng) if path is None else path
    ts = np.linspace(0.0, 1.0, cfg.tsamples)
    fam = AssociateFamily(w, path, ts)
    rows = invariant_report(fam)
    tol = cfg.tol
    tot0 = rows[0].total
    checks = [
        check("family_metric_invariance", max(r.metric_residual for r in rows), tol.identity),
        check("family_KT_invariance", max(r.KT_residual for r in rows), tol.identity),
        check("family_total_area_constant", max(abs(r.total - tot0) for r in rows) / max(tot0, 1e-300)
              if tot0 > 0 else 0.0, tol.area_rel),
        check("family_quadric_preserved", max(r.quadric_residual for r in rows), 1e-9),
        check("family_vector_norms", max(r.vector_norm_residual for r in rows), 1e-10),
    ]
    diag = {k: v for k, v in s_diagnostics().items()}
    try:
        build_path(matrix_S())
        diag["swap_path"] = "built"
    except NotInIdentityComponent as exc:
        diag["swap_path"] = f"NotInIdentityComponent: {exc}"
    t0 = None
    try:
        t0 = find_balanced_t(fam).t0
        diag["balance"] = f"t0 = {t0:.6g}"
    except NoSignChange as exc:
        diag["balance"] = f"NoSignChange: {exc}"
    cert = total_area_pipeline(w)
    return Sweep(rows, cert, diag, checks, t0)


# ---------------------------------------------------------------------------
# catalog-wide verification


def cap_lambda1_exact(a: float) -> float:
    """Dirichlet eigenvalue of the cap with proportionate area a (Legendre oracle)."""
    c = 1.0 - 2.0 * a
    ns = np.linspace(1e-3, 200.0, 200001)
    vals = lpmv(0, ns, c)
    i = int(np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0])
    nu = brentq(lambda n: lpmv(0, n, c), ns[i], ns[i + 1], xtol=1e-14)
    return nu * (nu + 1.0)


def random_caps(n: int, seed: int):
    rng = np.random.default_rng(seed)
    axes = rng.standard_normal((n, 3))
    # cap areas spread over the proportions where the mesh resolves the cap
    props = rng.uniform(0.05, 0.95, n)
    return axes, props


def cap_checks(cfg: RunConfig) -> list[Check]:
    mesh = ar.icosphere(cfg.mesh_level)
    hemi = st.spherical_lambda1(mesh, mesh.cap_occupancy([0, 0, 1], math.pi / 2))
    out = [check("hemisphere_lambda1", abs(hemi - 2.0) / 2.0, cfg.tol.eigen_rel)]
    axes, props = random_caps(cfg.caps, cfg.seed)
    worst_exact, worst_bound = 0.0, -math.inf
    for ax, a in zip(axes, props):
        occ = mesh.cap_occupancy(ax, math.acos(1.0 - 2.0 * a))
        lam = st.spherical_lambda1(mesh, occ)
        A = mesh.covered_area(occ)
        exact = cap_lambda1_exact(A / (4 * math.pi))
        worst_exact = max(worst_exact, abs(lam - exact) / exact)
        worst_bound = max(worst_bound, (st.lambda_lower_bound(A) - lam) / lam)
    out.append(check("cap_lambda1_vs_legendre", worst_exact, cfg.tol.eigen_rel))
    bound_ok = worst_bound <= cfg.tol.eigen_rel
    out.append(Check("cap_isoperimetric_bound", PASS if bound_ok else XFAIL, worst_bound, cfg.tol.eigen_rel,
                     "" if bound_ok else "bound 2(4π-A)/A exceeds the exact cap eigenvalue when A < 2π"))
    return out


def truth_table_checks(seed: int) -> list[Check]:
    S, U = st.Verdict.STABLE, st.Verdict.UNKNOWN
    cases = [((0.0, 0.0), S), ((0.5, 0.5), S), ((0.6, 0.3), S), ((0.7, 0.05), U)]
    out = []
    for (a, b), want in cases:
        got = st.classify_by_areas(a, b).verdict
        out.append(Check(f"classify_by_areas_{a}_{b}", PASS if got is want else FAIL, detail=got.value))
    out.append(Check("total_gauss_1.9pi", PASS if st.classify_total_gauss(1.9 * math.pi).stable else FAIL))
    out.append(Check("total_gauss_2pi", PASS if not st.classify_total_gauss(2 * math.pi).stable else FAIL))
    out.append(Check("harmonic_mean_2_2", PASS if not st.harmonic_mean_criterion(2.0, 2.0) else FAIL))
    rng = np.random.default_rng(seed)
    ab = rng.uniform(0.0, 0.999, (2000, 2))
    sym = mono = chain = True
    for a, b in ab:
        c1 = st.classify_by_areas(a, b).stable
        sym &= c1 == st.classify_by_areas(b, a).stable
        if c1:
            a2, b2 = a * rng.uniform(), b * rng.uniform()
            mono &= st.classify_by_areas(a2, b2).stable
            if st.hyperbola_value(a, b) < 1.0 and a > 0 and b > 0:
                chain &= st.harmonic_mean_criterion(st.lambda_lower_bound(4 * math.pi * a),
                                                    st.lambda_lower_bound(4 * math.pi * b))
    out.append(Check("classify_symmetric", PASS if sym else FAIL))
    out.append(Check("classify_monotone", PASS if mono else FAIL))
    out.append(Check("hyperbola_implies_harmonic_mean", PASS if chain else FAIL))
    bounds = [st.lambda_lower_bound(A) for A in np.linspace(0.1, 4 * math.pi - 0.1, 200)]
    out.append(Check("lambda_bound_decreasing", PASS if np.all(np.diff(bounds) < 0) else FAIL))
    return out


def associate_checks(cfg: RunConfig) -> list[Check]:
    out = []
    base = catalog.sigma_pq(1, 2, 2.0, 16)
    sw = associate_sweep(base, replace(cfg, tsamples=min(cfg.tsamples, 9)))
    out += sw.checks
    s0 = sample_surface(base)
    sS = deform(base, matrix_S())
    for a, b, nm in (("left", "right", "swap_left_gets_right"), ("right", "left", "swap_right_gets_left")):
        x, y = ar.pullback_area(sS, a), ar.pullback_area(s0, b)
        out.append(check(nm, abs(x - y) / y, cfg.tol.area_rel))
    d = s_diagnostics()
    out.append(Check("swap_path_diagnostic", PASS if "NotInIdentityComponent" in sw.diagnostics["swap_path"]
                     or sw.diagnostics["swap_path"] == "built" else FAIL, d["det_AinvSA"].real,
                     detail=sw.diagnostics["swap_path"]))
    bp = find_balanced_t(SwapInterpolation(ar.pullback_area(s0, "left"), ar.pullback_area(s0, "right")))
    out.append(check("bisection_balance", abs(bp.aL - bp.aR) / bp.total, 1e-3))
    # spectrum of the scalar stability operator is the same along the family
    rng = np.random.default_rng(cfg.seed + 1)
    path = random_rotation_path(rng)
    spec0 = st.scalar_jacobi_spectrum(base, 24)
    worst = 0.0
    for t in (0.3, 0.7, 1.0):
        spec = st.scalar_jacobi_spectrum(TransformedData(base, path(t)), 24)
        worst = max(worst, float(np.max(np.abs(spec - spec0) / np.abs(spec0).max())))
    out.append(check("scalar_stability_spectrum_invariant", worst, 1e-6))
    return out


def verify(cfg: RunConfig = RunConfig()) -> list[Check]:
    out: list[Check] = []
    for name in cfg.surfaces:
        w = catalog.by_name(name, min(cfg.grid, 64))
        try:
            res = analyze(w, cfg)
        except Minsurf4Error as exc:
            out.append(Check(f"{name}:analyze", FAIL, detail=f"{type(exc).__name__}: {exc}"))
            continue
        out += [replace(c, name=f"{name}:{c.name}") for c in res.checks]
        if name == "complex_curve":
            out.append(check(f"{name}:left_pullback_zero", res.areas.aL_pull, 1e-20))
        if name.startswith("catenoid"):
            out.append(check(f"{name}:hyperplane", hyperplane_residual(sample_surface(w)), 1e-8))
            out.append(check(f"{name}:KN_zero", res.facts["max_abs_KN"], 1e-12))
        if name == "catenoid":
            fn = res.certificates.get("flat_normal")
            out.append(Check(f"{name}:thin_slab_stable", PASS if fn is not None and fn.stable else FAIL))
        if name == "catenoid_wide":
            fn = res.certificates.get("flat_normal")
            ok = fn is not None and fn.verdict is st.Verdict.UNSTABLE
            out.append(Check(f"{name}:wide_slab_unstable", PASS if ok else FAIL,
                             res.facts.get("lambda1_numeric")))
    out += [replace(c, name=f"stability:{c.name}") for c in truth_table_checks(cfg.seed)]
    out += [replace(c, name=f"eigen:{c.name}") for c in cap_checks(cfg)]
    out += [replace(c, name=f"associate:{c.name}") for c in associate_checks(cfg)]
    return out
