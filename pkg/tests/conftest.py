import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rampi.derive import derive  # noqa: E402
from rampi.modeq import find_equation  # noqa: E402

CERT_SPECS = {
    "3A23": ("chan-liaw-3-23", "alternating"),
    "2A7": ("berndt-2-7", "alternating"),
    "3A11": ("berndt-3-11", "alternating"),
    "3A5": ("berndt-3-5", "alternating"),
    "3P5": ("berndt-3-5", "positive"),
}


@pytest.fixture(scope="session")
def certs():
    return {label: derive(find_equation(name), cls) for label, (name, cls) in CERT_SPECS.items()}


@pytest.fixture(scope="session")
def cert_3a23(certs):
    return certs["3A23"]
