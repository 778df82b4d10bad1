import pytest

from dorbits import dspace as ds
from dorbits import fincat as fc
from dorbits import orbits as ob


@pytest.fixture(scope="session")
def J():
    return fc.walking_arrow()


@pytest.fixture(scope="session")
def C2():
    return fc.cyclic_group(2)


@pytest.fixture(scope="session")
def cospan():
    return fc.cospan_poset()


@pytest.fixture(scope="session")
def j_family(J):
    return {
        "[0]": ob.free_orbit(J, "t"),
        "[1]": ob.free_orbit(J, "s"),
        "[2]": ob.j_orbit(2, J),
    }


@pytest.fixture(scope="session")
def c2_family(C2):
    return {
        "C2/e": ob.free_orbit(C2, "*"),
        "C2/C2": ob.as_orbit(ds.terminal_dspace(C2)),
    }


@pytest.fixture(scope="session")
def j_oc(J, j_family):
    return ob.orbit_category(J, j_family)


@pytest.fixture(scope="session")
def j_oc01(J, j_family):
    return ob.orbit_category(J, {k: j_family[k] for k in ("[0]", "[1]")})


@pytest.fixture(scope="session")
def c2_oc(C2, c2_family):
    return ob.orbit_category(C2, c2_family)


@pytest.fixture(scope="session")
def j_spaces(J):
    return ds.enumerate_dspaces(J, 2)


@pytest.fixture(scope="session")
def c2_spaces(C2):
    return ds.enumerate_dspaces(C2, 2)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, verdict, detail, secs in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  ({secs:.2f} s)  {detail}")
