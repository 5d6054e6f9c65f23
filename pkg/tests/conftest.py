import pytest

from commont import default_ontology, example_protocol, load_protocol


@pytest.fixture(scope="session")
def ont():
    return default_ontology()


@pytest.fixture(scope="session")
def asktime(ont):
    return example_protocol("asktime", ont)


@pytest.fixture(scope="session")
def p1(ont):
    return example_protocol("p1", ont)


@pytest.fixture(scope="session")
def p2(ont):
    return example_protocol("p2", ont)


TWO_ARMS = """\
protocol TwoArms
roles A B
state S0 initial
state S1
state S2
state S3 final
state S4
state S5
state S6 final
transition S0 -> S1 on TimeRequest from A to B
transition S1 -> S2 on TimeAccept from B to A
transition S2 -> S3 on TimeInform from B to A
transition S0 -> S4 on RequestTemp from A to B
transition S4 -> S5 on AcceptTemp from B to A
transition S5 -> S6 on TempInform from B to A
"""


@pytest.fixture(scope="session")
def two_arms(ont):
    return load_protocol(TWO_ARMS, ont, "two_arms.sts")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
