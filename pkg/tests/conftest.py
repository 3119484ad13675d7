import pytest

from virtchar.library import projective_space


@pytest.fixture(scope="session")
def p1():
    return projective_space(1)


@pytest.fixture(scope="session")
def p2():
    return projective_space(2)
