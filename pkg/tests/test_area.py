import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from minsurf4 import area as ar
from minsurf4 import catalog
from minsurf4.errors import MeshTooCoarse
from minsurf4.surface import sample_surface


def radial_oracle(p: int, R: float) -> float:
    """Unit-sphere area of z ↦ z^p over |z| ≤ R by 1-D radial quadrature."""
    f = lambda r: 4 * p * p * r ** (2 * p - 2) / (1 + r ** (2 * p)) ** 2 * 2 * math.pi * r
    return quad(f, 0, R, limit=200, epsabs=1e-13, epsrel=1e-13)[0]


def test_radial_oracle_closed_form():
    for p, R in ((1, 1.0), (2, 3.0), (3, 0.7)):
        assert radial_oracle(p, R) == pytest.approx(4 * math.pi * p * R ** (2 * p) / (1 + R ** (2 * p)), rel=1e-10)


def test_normalizations():
    assert ar.to_grassmannian(4 * math.pi) == pytest.approx(2 * math.pi)
    assert ar.to_grassmannian(0.0) == 0.0
    assert ar.proportion(4 * math.pi) == pytest.approx(1.0)
    # full-plane limit of the (p, q) family: 4π(p+q) unit ↦ 2π(p+q)
    assert ar.to_grassmannian(4 * math.pi * 3) == pytest.approx(2 * math.pi * 3)


@pytest.mark.parametrize("level", [0, 2, 4, 5])
def test_icosphere_quality(level):
    m = ar.icosphere(level)
    assert m.n_cells == 20 * 4**level
    assert m.areas.sum() == pytest.approx(4 * math.pi, rel=1e-9)
    assert m.area_ratio < 1.4
    np.testing.assert_allclose(np.linalg.norm(m.vertices, axis=1), 1.0)


def test_neighbors_symmetric():
    m = ar.icosphere(3)
    n = m.neighbors
    assert np.all(n != np.arange(m.n_cells)[:, None])
    for j in range(0, m.n_cells, 37):
        for k in n[j]:
            assert j in n[k]
    occ = m.cap_occupancy([0, 0, 1], 0.5)
    b = m.boundary_cells(occ)
    assert b.sum() < occ.sum() and np.all(occ[b])


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_locate_contains_point(v):
    p = np.array(v)
    if np.linalg.norm(p) < 1e-3:
        return
    p = p / np.linalg.norm(p)
    m = ar.icosphere(4)
    c = m.locate(p[None])[0]
    a, b, cc = m.vertices[m.faces[c]]
    # inside the spherical triangle: same side of all three great circles
    for x, y in ((a, b), (b, cc), (cc, a)):
        assert np.dot(np.cross(x, y), p) >= -1e-12


@pytest.mark.parametrize("p,q,R", [(1, 1, 1.0), (1, 2, 2.0), (2, 1, 5.0), (2, 3, 1.3)])
def test_pullback_matches_radial_oracle(p, q, R):
    s = sample_surface(catalog.sigma_pq(p, q, R, 32))
    assert ar.pullback_area(s, "left") == pytest.approx(radial_oracle(p, R), rel=1e-5)
    assert ar.pullback_area(s, "right") == pytest.approx(radial_oracle(q, R), rel=1e-5)
    total = ar.gauss_curve_area(s)
    assert total == pytest.approx(ar.pullback_area(s, "left") + ar.pullback_area(s, "right"), rel=1e-12)


def test_flat_line_areas():
    w = catalog.flat_line()
    rep = ar.area_report(w, 4)
    assert rep.aL_pull == 0 and rep.aR_pull == 0 and rep.total_pull == 0
    m = ar.icosphere(4)
    assert rep.aL_cov <= 3 * m.areas.max()
    assert ar.area_report(w, 5).aL_cov <= rep.aL_cov


def test_complex_curve_left_area_zero():
    s = sample_surface(catalog.complex_curve())
    assert ar.pullback_area(s, "left") < 1e-20
    assert ar.pullback_area(s, "right") > 0.1


def test_hemisphere_coverage():
    w = catalog.sigma_pq(1, 1, 1.0, 16)
    cov = ar.coverage_area(w, "left", ar.icosphere(5))
    assert cov == pytest.approx(2 * math.pi, rel=0.02)


def test_degree_two_covering():
    w = catalog.sigma_pq(2, 1, 10.0, 32)
    s = sample_surface(w)
    pull = ar.pullback_area(s, "left")
    assert pull == pytest.approx(8 * math.pi, rel=0.01)
    cov = ar.coverage_area(s, "left", ar.icosphere(5))
    assert cov == pytest.approx(4 * math.pi, rel=0.02)
    assert cov <= 4 * math.pi


def test_report_fields():
    rep = ar.area_report(catalog.sigma_pq(1, 2, 2.0), 4)
    d = rep.as_dict()
    assert d["mesh_level"] == 4
    assert rep.additivity_residual < 1e-12
    assert rep.aL_cov <= rep.aL_pull + 0.02 * rep.aL_pull + rep.boundary_area["left"]
    assert rep.total_grassmannian == pytest.approx(0.5 * rep.total_pull)
    assert set(rep.occupancy) == set(ar.SIDES)


def test_mesh_too_coarse_guard():
    ctl = ar.CoverageSampling(base=2, max_depth=0, guard=0.1)
    with pytest.raises(MeshTooCoarse):
        ar.coverage_area(catalog.sigma_pq(1, 2, 2.0), "left", ar.icosphere(5), ctl=ctl)


@given(st.floats(0.2, 3.0), st.integers(1, 3))
def test_pullback_monotone_in_radius(R, p):
    a = ar.pullback_area(sample_surface(catalog.sigma_pq(p, 1, R, 16)), "left")
    b = ar.pullback_area(sample_surface(catalog.sigma_pq(p, 1, R * 1.2, 16)), "left")
    assert b > a
    assert b < 4 * math.pi * p
