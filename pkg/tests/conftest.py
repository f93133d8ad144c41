import pytest

from knalg.geometry import MarkedSphere, classical


@pytest.fixture(scope="session")
def sphere1():
    return classical()


@pytest.fixture(scope="session")
def sphere2():
    return MarkedSphere((0, 1))


@pytest.fixture(scope="session")
def sphere3():
    return MarkedSphere((0, 1, "2+I"))
