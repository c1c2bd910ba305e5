import pytest

from primebias.config import config

# Cutoffs that keep the series within table tolerance while staying fast
R_CUTOFF = 10 ** 6
EULER_CUTOFF = 10 ** 7


@pytest.fixture
def desk_cutoffs(monkeypatch):
    """Defaults for callers that do not pass cutoffs explicitly"""
    monkeypatch.setattr(config, 'CUTOFF_R', R_CUTOFF)
    monkeypatch.setattr(config, 'CUTOFF_EULER', EULER_CUTOFF)
    return R_CUTOFF, EULER_CUTOFF
