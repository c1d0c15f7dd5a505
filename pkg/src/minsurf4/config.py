"""Run-wide tolerances and the reproducible probe seed."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

DEFAULT_SEED = 20210610


def probe_seed() -> int:
    """Seed for pseudorandom probe vectors; ``MINSURF4_SEED`` overrides it."""
    raw = os.environ.get("MINSURF4_SEED")
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


@dataclass(frozen=True)
class Tolerances:
    # gates for "pure / unit / orthogonal" checks
    frame: float = 1e-8
    pure_unit: float = 1e-9
    zero_quaternion: float = 1e-300
    # Weierstrass quadric residual, relative to max |e'f'|+|g'h'|
    weierstrass: float = 1e-10
    degenerate_metric: float = 1e-14
    singular_denominator: float = 1e-12
    # pointwise analytic identities (conformality, Gauss-map identities ...)
    identity: float = 1e-6
    jet_invariant: float = 1e-8
    area_rel: float = 5e-3
    coverage_rel: float = 2e-2
    eigen_rel: float = 5e-2
    stability_scale: float = 1e-6

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)

    @classmethod
    def field_names(cls):
        return [f.name for f in dataclasses.fields(cls)]


DEFAULT_TOL = Tolerances()
