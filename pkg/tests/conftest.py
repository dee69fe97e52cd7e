import numpy as np
import pytest

from polarspinor.clifford import build_gamma_basis


@pytest.fixture(scope="session")
def basis():
    return build_gamma_basis()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
