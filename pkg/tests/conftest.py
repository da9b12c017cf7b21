import pytest

from stratiforge.universe import make_frame


@pytest.fixture(scope="session")
def u03():
    """U(0,3) with W = every element: ids 0..3 are {}, {{}}, {{{}}}, {{},{{}}}."""
    return make_frame(0, 3, 0)


@pytest.fixture(scope="session")
def f1():
    return make_frame(2, 2, 1)


@pytest.fixture(scope="session")
def f0():
    return make_frame(2, 2, 0)


@pytest.fixture(scope="session")
def g0():
    return make_frame(0, 4, 0)


def ids(frame, *texts):
    """Element ids from brace strings, e.g. ids(fr, "{}", "{{}}")."""
    table = {frame.universe.show(i): i for i in range(len(frame.universe))}
    return frozenset(table[t] for t in texts)
