import math
import sys
from pathlib import Path

import numpy as np
from hypothesis import settings
from hypothesis import strategies as st

from qroulette.operators import GateParams
from qroulette.statevec import StateVector

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False, allow_infinity=False)
gammas = st.floats(0.0, math.pi, allow_nan=False, allow_infinity=False)


@st.composite
def gate_params(draw):
    return GateParams(draw(angles), draw(angles), draw(gammas))


@st.composite
def normalized_states(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, amps / np.linalg.norm(amps))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
