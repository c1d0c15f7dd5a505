"""Left and right Gauss maps, quaternionically and from Weierstrass quotients.

The quaternionic Gauss map of an immersion in isothermal coordinates is
``(X_y X_x^-1, X_x^-1 X_y)``; both values are pure unit quaternions.  The
holomorphic description uses the quotients

    gL = e'/h' = -g'/f',    gR = -e'/g' = h'/f'.

They are tied together through the stereographic map :func:`sigma` below.
With this choice of axes ``gL == sigma(gL_hol)`` and
``gR == diag(1,-1,1)·sigma(gR_hol)`` (an orientation-reversing isometry: the
right map is anti-conformal in these coordinates).  :func:`calibrate_stereographic`
recovers both isometries from data instead of assuming them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CalibrationFailed, DegenerateImmersion, TotallyDegeneratePoint
from .quat import Quaternion, qdot, qinv, qmul, qnorm, qnorm2

# ---------------------------------------------------------------------------
# array kernels


def gauss_arrays(Xx, Xy):
    inv = qinv(Xx)
    return qmul(Xy, inv), qmul(inv, Xy)


def gauss_derivative_arrays(Xx, Xy, Xxx, Xxy, Xyy, Bxx, Bxy, gL, gR):
    """``(gLx, gLy, gRx, gRy)``.

    x-derivatives use the second-fundamental-form expressions
    ``gLx = -gL (Bxx + gL Bxy) Xx^-1`` and ``gRx = -Xx^-1 (Bxx + Bxy gR) gR``;
    y-derivatives come straight from the quotient rule,
    ``gLy = (Xyy - gL Xxy) Xx^-1`` and ``gRy = Xx^-1 (Xyy - Xxy gR)``,
    so the anti-holomorphy identities relating them are genuine checks.
    """
    inv = qinv(Xx)
    gLx = -qmul(qmul(gL, Bxx + qmul(gL, Bxy)), inv)
    gRx = -qmul(qmul(inv, Bxx + qmul(Bxy, gR)), gR)
    gLy = qmul(Xyy - qmul(gL, Xxy), inv)
    gRy = qmul(inv, Xyy - qmul(Xxy, gR))
    return gLx, gLy, gRx, gRy


def gauss_x_direct(Xx, Xxx, Xxy, gL, gR):
    """Quotient-rule x-derivatives (no normal projection)."""
    inv = qinv(Xx)
    return qmul(Xxy - qmul(gL, Xxx), inv), qmul(inv, Xxy - qmul(Xxx, gR))


# ---------------------------------------------------------------------------
# scalar operations on a SurfaceJet


def _arr(q):
    return q.as_array() if isinstance(q, Quaternion) else np.asarray(q, float)


def gauss_quat(jet):
    """``(gL, gR)`` at a single jet, as quaternions."""
    if jet.E <= 0:
        raise DegenerateImmersion("E = 0")
    gl, gr = gauss_arrays(_arr(jet.Xx), _arr(jet.Xy))
    return Quaternion.from_array(gl), Quaternion.from_array(gr)


def gauss_derivatives(jet):
    """``(gLx, gLy, gRx, gRy)`` at a single jet."""
    if jet.E <= 0:
        raise DegenerateImmersion("E = 0")
    a = [_arr(q) for q in (jet.Xx, jet.Xy, jet.Xxx, jet.Xxy, jet.Xyy, jet.Bxx, jet.Bxy)]
    gl, gr = gauss_arrays(a[0], a[1])
    return tuple(Quaternion.from_array(v) for v in gauss_derivative_arrays(*a, gl, gr))


def normal_gauss(jet, tol: float = 1e-8):
    """Normal-bundle Gauss pair ``(gL, -gR)``.

    Checks ``gL·x = -x·gR`` on the normal plane (spanned by B or, when the
    second fundamental form vanishes, by a completed frame).
    """
    gl, gr = gauss_quat(jet)
    nu = normal_frame_at(jet)[0]
    lhs = qmul(gl.as_array(), nu)
    rhs = -qmul(nu, gr.as_array())
    if np.max(np.abs(lhs - rhs)) > tol:
        raise AssertionError(f"normal relation gL x = -x gR fails by {np.max(np.abs(lhs - rhs)):.3g}")
    return gl, -gr


def normal_frame_at(jet):
    """Orthonormal basis (nu1, nu1') of the normal plane at a jet."""
    xx, xy = _arr(jet.Xx), _arr(jet.Xy)
    E = qnorm2(xx)
    tx, ty = xx / np.sqrt(E), xy / np.sqrt(E)
    b = _arr(jet.Bxx)
    cands = [b] + list(np.eye(4))
    for c in cands:
        v = c - qdot(c, tx) * tx - qdot(c, ty) * ty
        n = qnorm(v)
        if n > 1e-6 * max(1.0, qnorm(c)):
            nu = v / n
            gl = qmul(xy, qinv(xx))
            return nu, qmul(gl, nu)
    raise DegenerateImmersion("could not complete a normal frame")


# ---------------------------------------------------------------------------
# holomorphic Gauss maps


class HolValue(NamedTuple):
    value: complex
    at_infinity: bool


def _pick(num_a, den_a, num_b, den_b, tiny):
    use_a = np.abs(den_a) >= np.abs(den_b)
    num = np.where(use_a, num_a, num_b)
    den = np.where(use_a, den_a, den_b)
    at_inf = np.abs(den) <= tiny
    with np.errstate(all="ignore"):
        val = np.where(at_inf, np.inf + 0j, num / np.where(at_inf, 1.0, den))
    return val, at_inf


def gauss_hol_arrays(W1, scale=None, rel: float = 1e-14):
    """Dual-quotient holomorphic Gauss maps from derivative data ``(..., 4)``.

    Returns ``(gL, gL_inf, gR, gR_inf)``; infinite entries carry ``inf``.
    """
    W1 = np.asarray(W1, complex)
    e1, f1, g1, h1 = (W1[..., k] for k in range(4))
    mags = np.abs(W1)
    if scale is None:
        scale = float(np.max(mags)) if mags.size else 1.0
    tiny = rel * scale
    dead = np.all(mags <= tiny, axis=-1)
    if np.any(dead):
        raise TotallyDegeneratePoint("all of e', f', g', h' vanish")
    gl, gl_inf = _pick(e1, h1, -g1, f1, tiny)
    gr, gr_inf = _pick(h1, f1, -e1, g1, tiny)
    return gl, gl_inf, gr, gr_inf


def gauss_hol(w, z, scale=None):
    """``(gL_hol, gR_hol)`` at a point, each as a :class:`HolValue`."""
    _, W1, _ = w.derivatives(z)
    gl, gli, gr, gri = gauss_hol_arrays(W1, scale=scale)
    return HolValue(complex(gl), bool(gli)), HolValue(complex(gr), bool(gri))


def hol_quotient_residual(W1, cond: float = 1e-3):
    """Max relative disagreement of the two quotients where both are well conditioned."""
    W1 = np.asarray(W1, complex)
    e1, f1, g1, h1 = (W1[..., k] for k in range(4))
    scale = np.max(np.abs(W1), axis=-1)
    worst = 0.0
    for na, da, nb, db in ((e1, h1, -g1, f1), (h1, f1, -e1, g1)):
        ok = (np.abs(da) > cond * scale) & (np.abs(db) > cond * scale)
        if np.any(ok):
            qa, qb = na[ok] / da[ok], nb[ok] / db[ok]
            res = np.abs(qa - qb) / (np.abs(qa) + np.abs(qb) + 1e-300)
            worst = max(worst, float(res.max()))
    return worst


def sigma(w, at_infinity=None):
    """Stereographic projection C∪{∞} -> unit sphere in span(I, J, K), ∞ ↦ I.

    Returned as ``(..., 3)`` arrays of (I, J, K) components.
    """
    w = np.asarray(w, complex)
    inf = np.isinf(w) if at_infinity is None else np.asarray(at_infinity, bool)
    ww = np.where(inf, 0.0, w)
    m2 = np.abs(ww) ** 2
    d = 1.0 + m2
    out = np.stack([(m2 - 1.0) / d, 2.0 * ww.imag / d, -2.0 * ww.real / d], axis=-1)
    out[inf] = (1.0, 0.0, 0.0)
    return out


@dataclass(frozen=True)
class StereographicConvention:
    """Orthogonal 3x3 maps with ``g_side ≈ M_side · sigma(g_side_hol)``.

    ``*_antipodal`` is True when the map has determinant -1, i.e. it is a
    rotation composed with the antipodal map.
    """

    left: np.ndarray
    right: np.ndarray
    left_antipodal: bool
    right_antipodal: bool
    residual: float  # max angle (radians) over the calibration samples

    def apply(self, side: str, w, at_infinity=None):
        m = self.left if side == "left" else self.right
        return sigma(w, at_infinity) @ m.T


DEFAULT_LEFT = np.eye(3)
DEFAULT_RIGHT = np.diag([1.0, -1.0, 1.0])


def _procrustes(P, Q):
    H = Q.T @ P
    U, s, Vt = np.linalg.svd(H)
    return U @ Vt, s


def _max_angle(M, P, Q):
    if not len(P):
        return 0.0
    # arccos loses precision near 1; go through the chord instead
    chord = np.linalg.norm(P @ M.T - Q, axis=1)
    return float(np.max(2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))))


def calibrate_stereographic(samples, tol: float = 1e-6, max_points: int = 2000):
    """Fit the sphere isometries linking holomorphic quotients to quaternionic values.

    Uses an orthogonal Procrustes fit over O(3).  When the sampled values are
    too concentrated to determine a map (fewer than three non-collinear
    directions), the default convention is tested instead.
    """
    gl, gli, gr, gri = gauss_hol_arrays(samples.W1)
    idx = np.arange(len(gl))
    if len(idx) > max_points:
        idx = idx[np.linspace(0, len(idx) - 1, max_points).astype(int)]
    mats, flags, worst = [], [], 0.0
    targets = (samples.gL[idx, 1:], samples.gR[idx, 1:])
    for hol, inf, Q, default in ((gl[idx], gli[idx], targets[0], DEFAULT_LEFT),
                                 (gr[idx], gri[idx], targets[1], DEFAULT_RIGHT)):
        P = sigma(hol, inf)
        M, s = _procrustes(P, Q)
        if s.size < 3 or s[1] < 1e-6 * max(s[0], 1e-300):
            M = default
        res = _max_angle(M, P, Q)
        if res > tol:
            raise CalibrationFailed(f"calibration residual {res:.3g} rad exceeds {tol:g}")
        worst = max(worst, res)
        mats.append(M)
        flags.append(bool(np.linalg.det(M) < 0))
    return StereographicConvention(mats[0], mats[1], flags[0], flags[1], worst)


# ---------------------------------------------------------------------------
# identity residuals over a sample set


def _rel(res, scale, ref: float = 0.0, floor_frac: float = 1e-8):
    """max res / (scale + floor); the floor is relative to max(scale) or ``ref``.

    ``ref`` matters when one Gauss map is (nearly) constant: its own scale is
    then pure rounding noise and the other map supplies the reference.
    """
    scale = np.asarray(scale, float)
    top = max(float(np.max(scale)) if scale.size else 0.0, ref)
    floor = floor_frac * top
    den = scale + floor
    with np.errstate(all="ignore"):
        out = np.where(den > 0, res / np.where(den > 0, den, 1.0), res)
    return float(np.max(out)) if out.size else 0.0


def identity_residuals(s) -> dict:
    """Max relative residual of every pointwise Gauss-map identity on a sample set."""
    out = {}
    one = np.zeros(4)
    one[0] = 1.0
    n_gLx, n_gLy = qnorm(s.gLx), qnorm(s.gLy)
    n_gRx, n_gRy = qnorm(s.gRx), qnorm(s.gRy)
    G = float(max(np.max(n_gLx), np.max(n_gRx)))
    out["pure_unit"] = float(max(
        np.max(np.abs(s.gL[:, 0])), np.max(np.abs(qnorm(s.gL) - 1.0)),
        np.max(np.abs(s.gR[:, 0])), np.max(np.abs(qnorm(s.gR) - 1.0)),
    ))
    out["square_minus_one"] = float(max(
        np.max(np.abs(qmul(s.gL, s.gL) + one)), np.max(np.abs(qmul(s.gR, s.gR) + one))
    ))
    out["left_maps_Xx_to_Xy"] = _rel(qnorm(qmul(s.gL, s.Xx) - s.Xy), np.sqrt(s.E))
    out["right_maps_Xx_to_Xy"] = _rel(qnorm(qmul(s.Xx, s.gR) - s.Xy), np.sqrt(s.E))
    out["anticommute"] = max(
        _rel(qnorm(qmul(s.gLx, s.gL) + qmul(s.gL, s.gLx)), n_gLx, G),
        _rel(qnorm(qmul(s.gRx, s.gR) + qmul(s.gR, s.gRx)), n_gRx, G),
    )
    out["antiholomorphic_left"] = _rel(qnorm(s.gLy + qmul(s.gL, s.gLx)), n_gLx + n_gLy, G)
    out["antiholomorphic_right"] = _rel(qnorm(s.gRy + qmul(s.gRx, s.gR)), n_gRx + n_gRy, G)
    out["conformal_gauss"] = max(
        _rel(np.abs(n_gLx - n_gLy), n_gLx + n_gLy, G),
        _rel(np.abs(qdot(s.gLx, s.gLy)), n_gLx * n_gLy + n_gLx**2, G * G),
        _rel(np.abs(n_gRx - n_gRy), n_gRx + n_gRy, G),
        _rel(np.abs(qdot(s.gRx, s.gRy)), n_gRx * n_gRy + n_gRx**2, G * G),
    )
    dLx, dRx = gauss_x_direct(s.Xx, s.Xxx, s.Xxy, s.gL, s.gR)
    out["gauss_x_closed_form"] = max(
        _rel(qnorm(dLx - s.gLx), n_gLx + qnorm(dLx), G),
        _rel(qnorm(dRx - s.gRx), n_gRx + qnorm(dRx), G),
    )
    hess_l = qnorm2(s.Xxx + qmul(s.gL, s.Xxy)) / s.E
    hess_r = qnorm2(s.Xxx + qmul(s.Xxy, s.gR)) / s.E
    out["gauss_speed_from_hessian"] = max(_rel(np.abs(n_gLx**2 - hess_l), n_gLx**2 + hess_l, G * G),
                      _rel(np.abs(n_gRx**2 - hess_r), n_gRx**2 + hess_r, G * G))
    half_b2 = qnorm2(s.Bxx) + qnorm2(s.Bxy)
    out["gauss_speed_from_B"] = max(
        _rel(np.abs(s.E * n_gLx**2 - (half_b2 + s.delta)), half_b2),
        _rel(np.abs(s.E * n_gRx**2 - (half_b2 - s.delta)), half_b2),
    )
    out["KT_from_gauss"] = _rel(np.abs(s.KT - s.KT_gauss), np.abs(s.KT))
    out["KN_from_gauss"] = _rel(np.abs(s.KN - s.KN_gauss), np.abs(s.KT))
    out["KT_ge_KN"] = _rel(np.maximum(np.abs(s.KN) - np.abs(s.KT), 0.0), np.abs(s.KT))
    # left multiplication by gLx swaps tangent and normal planes
    tx = qmul(s.gLx, s.Xx)
    out["tangent_normal_exchange"] = _rel(
        np.maximum(np.abs(qdot(tx, s.Xx)), np.abs(qdot(tx, s.Xy))), s.E * n_gLx, float(np.max(s.E)) * G
    )
    # normal pair relation gL x = -x gR on the normal plane
    nrm = s.Bxx + s.Bxy
    out["normal_relation"] = _rel(qnorm(qmul(s.gL, nrm) + qmul(nrm, s.gR)), qnorm(nrm))
    out["hol_quotients_agree"] = hol_quotient_residual(s.W1)
    return out

