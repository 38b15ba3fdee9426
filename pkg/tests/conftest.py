import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from braidcomp.alphabet import build_alphabet

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def complex_matrix(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="session")
def alphabet():
    return build_alphabet()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(verdicts):
        terminalreporter.write_line(verdicts[n])
