import re

import numpy as np
import pytest

from polyquad import meshes

_ACCEPT = {}


@pytest.fixture(scope="session")
def cube():
    return meshes.unit_cube()


@pytest.fixture(scope="session")
def tetra():
    return meshes.reference_tetrahedron()


@pytest.fixture(scope="session")
def ico():
    return meshes.icosahedron()


@pytest.fixture(scope="session")
def lprism():
    return meshes.l_prism()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        runs, failed = _ACCEPT.get(k, (0, []))
        if report.when == "call":
            runs += 1
        if report.outcome != "passed":
            failed = failed + [report.nodeid.split("::")[-1]]
        _ACCEPT[k] = (runs, failed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPT:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPT):
        runs, failed = _ACCEPT[k]
        if failed:
            line = f"criterion {k:2d}: FAIL  ({', '.join(failed)})"
        else:
            line = f"criterion {k:2d}: PASS  ({runs} case{'s' if runs > 1 else ''})"
        terminalreporter.write_line(line)
