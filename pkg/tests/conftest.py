import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURE_DIR, name)
