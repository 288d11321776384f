import pytest

from crbuild.geometries import build_geometry
from crbuild.gf import Flag


@pytest.fixture(scope="session")
def fano():
    return build_geometry("A2:p=2")


@pytest.fixture(scope="session")
def a32():
    return build_geometry("A3:p=2")


@pytest.fixture(scope="session")
def c22():
    return build_geometry("C2:p=2")


@pytest.fixture(scope="session")
def c23():
    return build_geometry("C2:p=3")


@pytest.fixture(scope="session")
def thin_a2():
    return build_geometry("thin:A2")


@pytest.fixture(scope="session")
def thin_a3():
    return build_geometry("thin:A3")


def flag_id(b, *chain):
    """Chamber id of a flag given as basis strings, e.g. flag_id(b, ["100"], ["100", "010"])."""
    g = b.geometry
    return g.chamber_of(Flag.deserialize(list(chain), g.p, g.ambient_dim).chain)


def vertex(b, *rows):
    """The vertex simplex spanned by the given rows, found through any chamber containing it."""
    from crbuild.gf import Subspace

    g = b.geometry
    u = Subspace.deserialize(list(rows), g.p, g.ambient_dim)
    t = u.dim
    for c in b.chambers:
        if g.subspace(c, t) == u:
            return b.vertex(c, t)
    raise LookupError(rows)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
