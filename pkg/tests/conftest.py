import numpy as np
import pytest

from projclust import kernels

ACCEPTANCE_RESULTS = []


@pytest.fixture(params=["compiled", "python"])
def backend(request):
    if request.param == "compiled" and not kernels.compiled_available():
        pytest.skip("compiled kernels not built")
    prev = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
