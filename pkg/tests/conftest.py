import numpy as np
import pytest

from gibbsnet import Architecture, ArchitecturePool, ParamDistribution, TrainingSet


def halfspace_set(q=50, seed=0, cut=0.3):
    """2-D points in [-1, 1]^2 labelled by x1 >= cut."""
    X = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(q, 2))
    return TrainingSet(X, (X[:, 0] >= cut).astype(int))


# small 2-D problem on a 5-value grid: 125 single neurons, 5^9 two-layer nets
GRID5 = (-1.0, -0.5, 0.0, 0.5, 1.0)
GRID_TS_X = [[0.2, 0.1], [0.8, 0.4], [-0.5, 0.7], [0.6, -0.9], [-0.3, -0.6], [0.9, 0.9]]
GRID_TS_Y = [0, 1, 0, 1, 0, 1]
GRID_PROBES = np.array([[0.0, 0.0], [0.5, 0.5], [-0.7, 0.2], [0.3, -0.4], [1.0, -1.0]])


@pytest.fixture
def xor():
    return TrainingSet([[0, 0], [0, 1], [1, 0], [1, 1]], [0, 1, 1, 0])


@pytest.fixture
def halfspace():
    return halfspace_set()


@pytest.fixture
def neuron2():
    return Architecture("neuron", 2, [1])


@pytest.fixture
def double2():
    return Architecture("double", 2, [2, 1])


@pytest.fixture
def grid_ts():
    return TrainingSet(GRID_TS_X, GRID_TS_Y)


@pytest.fixture
def normal():
    return ParamDistribution.normal()


@pytest.fixture
def single_pool(neuron2):
    return ArchitecturePool.single(neuron2)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance_report():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(_ACCEPTANCE.items(), key=lambda kv: int(kv[0].split("_")[1])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
