import warnings

import pytest

from vlasov_sl.field import ChargeImbalanceWarning

# lines appended by the acceptance module, echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _quiet_imbalance():
    # under-resolved data legitimately trip the charge-imbalance warning
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ChargeImbalanceWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
