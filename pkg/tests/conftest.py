import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from dirichlet_spaces.polynomial import DirichletPolynomial

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = {}


def record_acceptance(number, passed, detail):
    ACCEPTANCE_LINES[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        ok, detail = ACCEPTANCE_LINES[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@st.composite
def polynomials(draw, max_terms=8, max_index=50, vanishing=False, real=False):
    lo = 2 if vanishing else 1
    idx = draw(st.lists(st.integers(lo, max_index), min_size=1, max_size=max_terms, unique=True))
    part = st.floats(-3, 3, allow_nan=False, allow_infinity=False).filter(lambda x: abs(x) > 1e-3)
    re = draw(st.lists(part, min_size=len(idx), max_size=len(idx)))
    im = [0.0] * len(idx) if real else draw(st.lists(part, min_size=len(idx), max_size=len(idx)))
    return DirichletPolynomial(idx, np.array(re) + 1j * np.array(im))


def random_poly(rng, max_terms=8, max_index=50, vanishing=False):
    lo = 2 if vanishing else 1
    k = int(rng.integers(1, max_terms + 1))
    n = rng.choice(np.arange(lo, max_index + 1), size=min(k, max_index - lo + 1), replace=False)
    c = rng.standard_normal(len(n)) + 1j * rng.standard_normal(len(n))
    return DirichletPolynomial(n, c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
