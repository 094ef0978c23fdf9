import mpmath
import pytest
from hypothesis import HealthCheck, settings

from eulersum.rfparse import parse_ratfunc

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture(autouse=True)
def _mp_precision():
    # no test may leak a raised global precision into the next
    dps = mpmath.mp.dps
    yield
    mpmath.mp.dps = dps


def rf(text):
    return parse_ratfunc(text)
