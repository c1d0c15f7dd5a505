import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minsurf4 import catalog
from minsurf4.errors import DegenerateImmersion, WeierstrassViolation
from minsurf4.holo import ParamDomain
from minsurf4.quat import ONE, I, Quaternion
from minsurf4.surface import (WeierstrassData, curvatures, fd_gauss_derivative_residual,
                              holomorphic_section_residual, hyperplane_residual, immerse, sample_surface,
                              second_form, surface_residuals)


def test_flat_line_jet():
    j = immerse(catalog.flat_line(), 1 + 1j)
    assert j.X.isclose(ONE + I)
    assert j.Xx.isclose(ONE) and j.Xy.isclose(I)
    assert j.E == pytest.approx(1.0)
    bxx, bxy = second_form(j)
    assert bxx.norm() == 0 and bxy.norm() == 0
    assert tuple(curvatures(j)) == (0.0, 0.0, 0.0)


def test_catenoid_jet_at_origin():
    j = immerse(catalog.catenoid(), 0j)
    assert j.X.norm() == pytest.approx(2.0)
    assert j.E == pytest.approx(4.0)
    assert j.KT == pytest.approx(-0.25)
    bxx, _ = second_form(j)
    # at z = 0 the normal curvature direction is the real axis
    assert bxx.isclose(Quaternion(2.0))


def test_catenoid_profile():
    # |Re part + I part| = 2 cosh x and the J part = 2x, for every y
    w = catalog.catenoid()
    for z in (0.2 + 1.0j, -0.25 + 4.0j):
        X = immerse(w, z).X
        assert math.hypot(X.a, X.b) == pytest.approx(2 * math.cosh(z.real))
        assert X.c == pytest.approx(2 * z.real)
        assert X.d == pytest.approx(0.0, abs=1e-14)


def test_rejects_non_quadric():
    with pytest.raises(WeierstrassViolation):
        WeierstrassData.from_text("z", "z", "0", "0", ParamDomain.rect(0, 1, 0, 1))


def test_degenerate_immersion():
    with pytest.raises(DegenerateImmersion):
        # e' = 2z vanishes at the origin, which is not a quadrature node, so probe it directly
        immerse(WeierstrassData.from_text("z^2", "0", "0", "0", ParamDomain.disk(1.0)), 0j)


@pytest.mark.parametrize("name", catalog.DEFAULT_SET)
def test_catalog_residuals(name):
    s = sample_surface(catalog.by_name(name, 16))
    res = surface_residuals(s)
    assert res["weierstrass_quadric"] < 1e-10
    for k, v in res.items():
        assert v < 1e-8, k
    # the tangent curvature dominates the normal one
    assert np.all(np.abs(s.KT) + 1e-12 * np.abs(s.KT).max() >= np.abs(s.KN))
    assert np.all(s.KT <= 1e-15)


def test_curvature_cross_check_sigma():
    w = catalog.sigma_pq(1, 2, 2.0)
    c = curvatures(immerse(w, 1.0 + 0j))
    assert c.residual < 1e-12
    assert abs(c.KN) <= abs(c.KT)


def test_catenoid_in_hyperplane_and_flat_normal():
    s = sample_surface(catalog.catenoid())
    assert hyperplane_residual(s) < 1e-12
    assert np.max(np.abs(s.KN)) < 1e-12


def test_finite_difference_checks():
    w = catalog.sigma_pq(1, 2, 2.0)
    nodes = np.array([0.3 + 0.4j, -0.7 + 0.1j, 1.1 - 0.5j])
    assert fd_gauss_derivative_residual(w, nodes) < 1e-5
    assert holomorphic_section_residual(w, nodes) < 1e-4


coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


@settings(max_examples=25)
@given(coef, coef, st.integers(1, 3), st.integers(1, 3))
def test_random_quadric_data(a, b, p, q):
    """e' = ab z^{p+q}, f' = 1, g' = a z^p, h' = -b z^q satisfy the quadric for every a, b."""
    if abs(a) < 0.1 or abs(b) < 0.1:
        return
    n = p + q
    ta, tb = f"({a.real!r} + {a.imag!r}*i)", f"({b.real!r} + {b.imag!r}*i)"
    w = WeierstrassData.from_text(f"{ta}*{tb}*z^{n + 1}/{n + 1}", f"z + {tb}", f"{ta}*z^{p + 1}/{p + 1}",
                                  f"-{tb}*z^{q + 1}/{q + 1}", ParamDomain.disk(1.5, 8))
    s = sample_surface(w)
    for k, v in surface_residuals(s).items():
        assert v < 1e-8, k
    assert np.all(np.abs(s.KN) <= np.abs(s.KT) * (1 + 1e-9) + 1e-12)
