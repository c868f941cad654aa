import sys

import numpy as np
import pytest

from lzbloch.dynamics import integrate
from lzbloch.presets import preset_scenario

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)


def run_preset(name, **overrides):
    s = preset_scenario(name)
    return integrate(s.system, s.drive, overrides.get("initial", s.initial), s.t_span, s.integrator), s


@pytest.fixture(scope="session")
def fig2_run():
    return run_preset("fig2")


@pytest.fixture(scope="session")
def fig3_run():
    return run_preset("fig3")


@pytest.fixture(scope="session")
def fig8_run():
    return run_preset("fig8")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.REPORT):
        terminalreporter.write_line(module.REPORT[n])
