import math

import numpy as np
import pytest

from robust_ising.circuit import LocalLayer, Pulse, PulseCircuit

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_layer(rng, max_pulses=2) -> LocalLayer:
    def train():
        n = int(rng.integers(0, max_pulses + 1))
        return tuple(Pulse(float(rng.uniform(-2 * math.pi, 2 * math.pi)), float(rng.uniform(0, 2 * math.pi))) for _ in range(n))

    return LocalLayer(train(), train())


def random_circuit(rng, n: int) -> PulseCircuit:
    couplings = tuple(float(x) for x in rng.uniform(-2 * math.pi, 2 * math.pi, n))
    return PulseCircuit(couplings, tuple(random_layer(rng) for _ in range(n - 1)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
