from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from sgraft.textformat import load

CORPUS = Path(__file__).resolve().parents[1] / "src" / "sgraft" / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load(CORPUS / name)
        return cache[name]
    return get
