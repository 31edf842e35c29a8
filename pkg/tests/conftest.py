import pytest

from splda import gen_synth

# reference values frozen from the first run of the implementation
SHIFT_FIXTURE = dict(seed=42, n_per_class=50, num_classes=5, dim=64, shift=2.0, rotation=0.5)
SHIFT_BASELINE_ACC = 0.88
SHIFT_ADAPT_ACC = 0.996
ZERO_SHIFT_FIXTURE = dict(seed=7, n_per_class=50, num_classes=3, dim=16, shift=0.0, rotation=0.0)
ZERO_SHIFT_ADAPT_ACC = 1.0


@pytest.fixture(scope="session")
def shift_pair():
    return gen_synth(**SHIFT_FIXTURE)


@pytest.fixture(scope="session")
def zero_shift_pair():
    return gen_synth(**ZERO_SHIFT_FIXTURE)
