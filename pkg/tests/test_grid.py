import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minsurf4.holo import ParamDomain, build_grid, build_lattice


def test_unit_square_weights():
    g = build_grid(ParamDomain.rect(0, 1, 0, 1, 8))
    assert len(g) == 64 * 16
    assert g.w.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.all(g.w > 0)


def test_disk_area():
    assert build_grid(ParamDomain.disk(2.0, 8)).w.sum() == pytest.approx(4 * math.pi, abs=1e-10)
    assert build_grid(ParamDomain.disk(1.0, 8)).integrate(np.ones(1024)) == pytest.approx(math.pi, abs=1e-10)


def test_moment_converges():
    errs = []
    for n in (8, 16, 32):
        g = build_grid(ParamDomain.disk(1.0, n, points=1))
        errs.append(abs(g.integrate(np.abs(g.z) ** 2) - math.pi / 2))
    assert errs[0] > errs[1] > errs[2]
    g = build_grid(ParamDomain.disk(1.0, 8))
    assert g.integrate(np.abs(g.z) ** 2) == pytest.approx(math.pi / 2, abs=1e-13)


@given(st.floats(-3, 3), st.floats(0.1, 4), st.floats(-3, 3), st.floats(0.1, 4), st.integers(0, 3), st.integers(0, 3))
def test_rect_polynomials_exact(x0, wx, y0, wy, i, j):
    d = ParamDomain.rect(x0, x0 + wx, y0, y0 + wy, 8)
    g = build_grid(d)
    x, y = g.z.real, g.z.imag
    exact = ((x0 + wx) ** (i + 1) - x0 ** (i + 1)) / (i + 1) * ((y0 + wy) ** (j + 1) - y0 ** (j + 1)) / (j + 1)
    assert g.integrate(x**i * y**j) == pytest.approx(exact, rel=1e-11, abs=1e-11)


def test_domain_validation():
    with pytest.raises(ValueError):
        ParamDomain.rect(0, 1, 0, 1, 4)
    with pytest.raises(ValueError):
        ParamDomain.rect(1, 0, 0, 1)
    with pytest.raises(ValueError):
        ParamDomain.disk(-1.0)
    with pytest.raises(ValueError):
        ParamDomain(kind="annulus")


def test_from_unit_and_contains():
    d = ParamDomain.disk(2.0)
    z = d.from_unit(np.array([0.5, 1.0]), np.array([0.25, 0.0]))
    np.testing.assert_allclose(z, [1j, 2.0], atol=1e-15)
    assert list(d.contains(z, strict=False)) == [True, True]
    assert list(d.contains(z)) == [True, False]


def test_lattice_masks():
    lat = build_lattice(ParamDomain.rect(0, 1, 0, 2, 8), 10)
    assert lat.shape == (10, 10)
    assert lat.active.sum() == 64
    assert lat.hy == pytest.approx(2 * lat.hx)
    lat = build_lattice(ParamDomain.disk(1.0), 21)
    assert np.all(np.abs(lat.z[lat.active]) < 1.0)
    assert not lat.active[0, 0]
