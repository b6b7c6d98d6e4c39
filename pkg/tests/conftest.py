import os
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# (at)^7 (cg)^11 (at)^7
RUNNING_EXAMPLE = b"at" * 7 + b"cg" * 11 + b"at" * 7


def naive_bwt(t):
    """Sort every rotation explicitly; ties keep the smaller start index."""
    n = len(t)
    order = sorted(range(n), key=lambda i: (t[i:] + t[:i], i))
    return bytes(t[i - 1] for i in order), order.index(0)


def random_text(rng, n, alphabet=None):
    alphabet = alphabet or bytes(range(256))
    return bytes(rng.choice(alphabet) for _ in range(n))


def edge_texts():
    return [b"", b"a", b"\x00", b"\xff", b"aaaaaaaa", b"ab" * 40, b"abc" * 33,
            RUNNING_EXAMPLE, bytes(range(256)), bytes(range(255, -1, -1)),
            random.Random(1).randbytes(700)]


@pytest.fixture
def running_example():
    return RUNNING_EXAMPLE


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion for the summary."""

    def record(label, ok, detail=""):
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        line = f"{status}  {label}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
