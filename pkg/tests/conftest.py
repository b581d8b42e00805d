import pytest

from recpomdp import _kernels

# The four true models exercised throughout, all with subsidy 0.3.
TRUE_MODELS = [(0.05, 0.25), (0.05, 0.15), (0.05, 0.35), (0.15, 0.35)]
LAM = 0.3
COARSE_AXES = (0.05, 0.15, 0.25, 0.35, 0.45)
FINE_AXES = tuple(round(0.05 * i, 2) for i in range(1, 11))


@pytest.fixture
def restore_backend():
    previous = _kernels.active_backend()
    yield
    _kernels.set_backend(previous)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running statistical checks")
