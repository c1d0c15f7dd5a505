import os

import pytest
from hypothesis import HealthCheck, settings

# derandomized so the suite is reproducible run to run
settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


@pytest.fixture(autouse=True)
def _fixed_seed(monkeypatch):
    monkeypatch.delenv("MINSURF4_SEED", raising=False)
