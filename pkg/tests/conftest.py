"""
Gemeinsame Fixtures: Pfad zu src und einmal pro Sitzung gebaute Nullstellen-Speicher
"""

import sys
from pathlib import Path

import pytest

# Pfad zu src hinzufügen
ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from zeros import build_store  # noqa: E402

HOEHE_KLEIN = 1000.0
HOEHE_LEITER = 11200.0      # T = 1e4: Fenster, HL-Fenster und beide Segmente
HOEHE_GROSS = 40600.0       # T = 4e4 mit H = T^0.6


@pytest.fixture(scope="session")
def speicher_klein():
    return build_store(HOEHE_KLEIN)


@pytest.fixture(scope="session")
def speicher():
    return build_store(HOEHE_LEITER, threads=4)


@pytest.fixture(scope="session")
def speicher_gross():
    return build_store(HOEHE_GROSS, threads=4)
