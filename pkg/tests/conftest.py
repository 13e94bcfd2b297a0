import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "heatlab", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("heatlab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    from .helpers import ACCEPTANCE
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        ok = all(p[1] for p in parts)
        failed = [f"{name}: {detail}" for name, good, detail in parts if not good]
        summary = "; ".join(failed) if failed else "; ".join(f"{n}: {d}" for n, _, d in parts)
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'} - {summary}")
