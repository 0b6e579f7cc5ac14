import pytest

from madelung.core import PhysicalParams, SolutionConstants


@pytest.fixture
def params():
    return PhysicalParams(m=1.0)


@pytest.fixture
def consts():
    return SolutionConstants(c1=1.0, c2=1.0)
