import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

S2, S3 = np.sqrt(2), np.sqrt(3)

# exceptional line x = -1/2 with a multiply generated round point, no segment
EXAMPLE_PARAMS = dict(alpha=1.0, a1=np.sqrt(2 + S3) / 2, a2=0.5, a3=S2 / 2, theta1=0.0, theta2=0.0)
EXAMPLE = np.array(
    [
        [0, np.sqrt(2 + S3) / 2, 0.5, S2 / 2],
        [0, 0, S2 / 2, S3 / 2],
        [0, 0, 0, np.sqrt(2 + S3) / 2],
        [0, 0, 0, 0],
    ],
    dtype=complex,
)

# one flat portion on x = -1/2
WITHFLAT_PARAMS = dict(alpha=1.0, a1=1.0, a2=0.5, a3=S3 / 2, theta1=0.0, theta2=0.0)
WITHFLAT = np.array(
    [[0, 1, 0.5, S3 / 2], [0, 0, 0.5, S3 / 2], [0, 0, 0, S3 / 2], [0, 0, 0, 0]], dtype=complex
)

J2 = np.array([[0, 1], [0, 0]], dtype=complex)
J4 = np.diag(np.ones(3), 1).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def cgauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_hermitian(rng, n):
    X = cgauss(rng, (n, n))
    return (X + X.conj().T) / 2


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
