import pytest

from epwaves import PressureLaw, make_profile, speed_from_k0


@pytest.fixture(scope="session")
def law():
    return PressureLaw(0.25, 2.0)


@pytest.fixture(scope="session")
def family_V(law):
    return speed_from_k0(law, 1.0)


@pytest.fixture(scope="session")
def wave_v1(law):
    return make_profile(law, 0.05, 1.0)


@pytest.fixture(scope="session")
def family_wave(law, family_V):
    return make_profile(law, 0.004, family_V)


@pytest.fixture(scope="session")
def flat_family(law, family_V):
    return make_profile(law, 0.0, family_V)
