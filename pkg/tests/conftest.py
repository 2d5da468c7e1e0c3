import pytest

from leibalg.exactfield import Field

ACCEPTANCE_LINES: list[str] = []

PRIMES = (2, 3, 5, 7)


@pytest.fixture(params=PRIMES, ids=lambda p: f"GF{p}")
def prime_field(request):
    return Field.gf(request.param)


@pytest.fixture
def QQ():
    return Field.rationals()


def pytest_runtest_logreport(report):
    # one line per acceptance criterion; setup errors count as failures
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        name = report.nodeid.split("::test_criterion_", 1)[1]
        num, _, label = name.partition("_")
        status = "PASS" if report.passed else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {num} [{label}]: {status} ({report.duration:.2f} s)")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
