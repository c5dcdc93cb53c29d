import pytest

from cotor.engine import Engine

# criterion index -> (label, passed); printed at the end of the run
ACCEPTANCE_RESULTS = {}


def record_acceptance(index: int, label: str, ok: bool):
    ACCEPTANCE_RESULTS[index] = (label, ok)
    return ok


@pytest.fixture(scope="session")
def engine():
    """One shared session engine under the audited sign rule."""
    return Engine(convention="parity")


@pytest.fixture(scope="session")
def full_engine(engine):
    """The session engine with all matrices materialized through degree 81."""
    engine.build_range(81)
    return engine


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for index in sorted(ACCEPTANCE_RESULTS):
        label, ok = ACCEPTANCE_RESULTS[index]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {index}: {verdict} - {label}")
