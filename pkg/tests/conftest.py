import os
import sys

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite", max_examples=1000, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "suite"))

import time

import pytest

from whitham_cap.cli import main


@pytest.fixture(scope="session")
def small_pipeline(tmp_path_factory):
    """prove then stability for the small gravity preset, run once for the session."""
    work = tmp_path_factory.mktemp("small")
    base = ["--preset", "whitham-small", "--set", f"workdir={work}"]
    t0 = time.time()
    codes = {"prove": main(base + ["--mode", "prove"])}
    codes["stability"] = main(base + ["--mode", "stability", "--set", "coeff_in=coefficients.txt",
                                      "--set", "cert_in=certificate.json"])
    (work / "seconds.txt").write_text(f"{time.time() - t0:.1f}\n")
    return work, codes


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
