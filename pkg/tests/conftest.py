import pytest

from superkac.serialize import cached_algebra

# filled by test_acceptance.py; printed at the end of the session
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def sl21():
    return cached_algebra("sl", (2, 1))


@pytest.fixture(scope="session")
def sl31():
    return cached_algebra("sl", (3, 1))


@pytest.fixture(scope="session")
def osp22():
    return cached_algebra("osp2", (1,))


@pytest.fixture(scope="session")
def osp24():
    return cached_algebra("osp2", (2,))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, secs, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({secs:.1f} s) {detail}")
