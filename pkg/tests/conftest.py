import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

# Flat modules live next to main.py, as in the runner's setup_environment
PACKAGE_DIR = Path(__file__).resolve().parent.parent / "patternrsa"
if str(PACKAGE_DIR) not in sys.path:
    sys.path.insert(0, str(PACKAGE_DIR))

settings.register_profile(
    "patternrsa",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("patternrsa")


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts and ends with default ceilings"""
    from settings import configure

    configure()
    yield
    configure()


@pytest.fixture
def rng():
    from primes import make_rng

    return make_rng(12345)
