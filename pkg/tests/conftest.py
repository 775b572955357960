import pytest

from treegroups import Ball, builtin


@pytest.fixture(scope="session")
def G():
    return builtin("G")


@pytest.fixture(scope="session")
def H():
    return builtin("H")


@pytest.fixture(scope="session")
def I():
    return builtin("I")


@pytest.fixture(scope="session")
def ball_G(G):
    return Ball(G, G.standard_generators)


@pytest.fixture(scope="session")
def ball_H(H):
    return Ball(H, H.standard_generators)


@pytest.fixture(scope="session")
def ball_I_std(I):
    return Ball(I, I.standard_generators)


@pytest.fixture(scope="session")
def ball_I(I):
    return Ball(I, I.extended_generators)
