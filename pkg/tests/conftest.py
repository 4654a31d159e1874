import os
import pathlib

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ROOT = pathlib.Path(__file__).resolve().parents[1]
IMAGE_DIR = pathlib.Path(os.environ.get("NLMEANS_TEST_IMAGES", ROOT / "test_images"))

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def image_path(name):
    return IMAGE_DIR / f"{name}.pgm"


def require_image(name):
    from nlmeans.image import load_pgm

    path = image_path(name)
    if not path.is_file():
        pytest.skip(f"{path} not found; run scripts/fetch_test_images.py or set NLMEANS_TEST_IMAGES")
    return load_pgm(path)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
