from fractions import Fraction as F

import pytest
from hypothesis import settings

from pbrevise.beliefs import BeliefBase, ProbFormula
from pbrevise.distance import PseudoDistance
from pbrevise.props import Vocabulary, parse_formula

# fixed example sequence so test logs are reproducible
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

ALPHA_QRS = "(q & r) | (q & !r & s)"
XOR_QR = "(q & !r) | (!q & r)"


def fr(*xs):
    """Tuple of exact rationals from decimal strings / ints."""
    return tuple(F(str(x)) for x in xs)


@pytest.fixture
def qr():
    return Vocabulary(["q", "r"])


@pytest.fixture
def qrs():
    return Vocabulary(["q", "r", "s"])


@pytest.fixture
def B1(qr):
    return BeliefBase(qr, [ProbFormula(parse_formula("q", qr), ">=", F(6, 10))])


@pytest.fixture
def B2(qr):
    return BeliefBase(qr, [ProbFormula(parse_formula("!q & !r", qr), "=", F(1, 10))])


@pytest.fixture
def xor_qr(qr):
    return parse_formula(XOR_QR, qr)


@pytest.fixture
def alpha_qrs(qrs):
    return parse_formula(ALPHA_QRS, qrs)


@pytest.fixture
def ham2(qr):
    return PseudoDistance.hamming(qr)


@pytest.fixture
def ham3(qrs):
    return PseudoDistance.hamming(qrs)


# --- acceptance summary ------------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str, float, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, title = mark.args
    notes = [line for key, value in rep.user_properties if key == "summary" for line in value]
    status = "PASS" if rep.passed else "FAIL"
    if n in _ACCEPTANCE:  # parametrized criterion: all cases must pass
        prev = _ACCEPTANCE[n]
        status = "PASS" if prev[0] == status == "PASS" else "FAIL"
        _ACCEPTANCE[n] = (status, title, prev[2] + rep.duration, prev[3] + notes)
    else:
        _ACCEPTANCE[n] = (status, title, rep.duration, notes)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, title, secs, notes = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {title}  ({secs:.2f}s)")
        for line in notes:
            terminalreporter.write_line("    " + line)
