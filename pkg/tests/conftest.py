import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from passage_lab.sphere import SpherePoint

settings.register_profile(
    "lab",
    max_examples=200,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("lab")

probabilities = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
interior = st.floats(min_value=1e-6, max_value=1.0 - 1e-6, allow_nan=False)
colatitudes = st.floats(min_value=0.0, max_value=math.pi, allow_nan=False)
longitudes = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
sphere_points = st.builds(SpherePoint, colatitudes, longitudes)


@st.composite
def ensembles(draw, max_size=10):
    from passage_lab.qubit import Ensemble

    n = draw(st.integers(min_value=1, max_value=max_size))
    points = draw(st.lists(sphere_points, min_size=n, max_size=n))
    raw = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n)))
    w = raw / raw.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return Ensemble.of(w, points)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
