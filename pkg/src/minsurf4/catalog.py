"""Built-in Weierstrass data used for examples, verification and tests."""
from __future__ import annotations

import math
from typing import Callable

from .holo import ParamDomain
from .surface import WeierstrassData

# catenoid slab giving pullback area 4π·0.45 on each sphere
BALANCED_HALF_WIDTH = math.atanh(0.45)


def flat_line(n: int = 16) -> WeierstrassData:
    """The complex line e = z over the unit square."""
    return WeierstrassData.from_text("z", "0", "0", "0", ParamDomain.rect(0.0, 1.0, 0.0, 1.0, n), "flat_line")


def complex_curve(R: float = 1.0, n: int = 16) -> WeierstrassData:
    """Graph of z ↦ z²: e = z, g = z², f = h = 0."""
    return WeierstrassData.from_text("z", "0", "z^2", "0", ParamDomain.disk(R, n), "complex_curve")


def catenoid(x0: float = -0.3, x1: float = 0.3, n: int = 16, name: str = "catenoid") -> WeierstrassData:
    """e = e^{-z}, f = e^{z}, g = h = z over x0 ≤ x ≤ x1, 0 ≤ y ≤ 2π; lies in span(1, I, J)."""
    d = ParamDomain.rect(x0, x1, 0.0, 2.0 * math.pi, n)
    return WeierstrassData.from_text("exp(-z)", "exp(z)", "z", "z", d, name)


def catenoid_wide(n: int = 16) -> WeierstrassData:
    return catenoid(-2.5, 2.5, n, "catenoid_wide")


def catenoid_balanced(n: int = 16) -> WeierstrassData:
    return catenoid(-BALANCED_HALF_WIDTH, BALANCED_HALF_WIDTH, n, "catenoid_balanced")


def sigma_pq_text(p: int, q: int):
    """Primitives of e' = z^{p+q}, f' = 1, g' = z^p, h' = -z^q."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive integers")
    n = p + q
    return (f"z^{n + 1}/{n + 1}", "z", f"z^{p + 1}/{p + 1}", f"-(z^{q + 1}/{q + 1})")


def sigma_pq(p: int = 1, q: int = 2, R: float = 10.0, n: int = 16) -> WeierstrassData:
    e, f, g, h = sigma_pq_text(p, q)
    return WeierstrassData.from_text(e, f, g, h, ParamDomain.disk(R, n), f"sigma_{p}_{q}")


CATALOG: dict[str, Callable[..., WeierstrassData]] = {
    "flat_line": flat_line,
    "complex_curve": complex_curve,
    "catenoid": catenoid,
    "catenoid_wide": catenoid_wide,
    "catenoid_balanced": catenoid_balanced,
    "sigma_pq": sigma_pq,
}

# default instances checked by the verification suite; sigma_2_1 has g_L ~ z²
DEFAULT_SET = ("flat_line", "complex_curve", "catenoid", "catenoid_wide", "catenoid_balanced",
               "sigma_1_2", "sigma_2_1")


def by_name(name: str, n: int = 16, **kw) -> WeierstrassData:
    if name.startswith("sigma_") and name != "sigma_pq":
        p, q = (int(x) for x in name.split("_")[1:3])
        return sigma_pq(p, q, kw.get("R", 10.0), n)
    if name not in CATALOG:
        raise KeyError(f"unknown catalog surface {name!r}; known: {', '.join(CATALOG)}")
    return CATALOG[name](n=n, **kw)


def default_surfaces(n: int = 16) -> list[WeierstrassData]:
    return [by_name(k, n) for k in DEFAULT_SET]
