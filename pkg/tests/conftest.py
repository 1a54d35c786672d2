import pytest

from dualcat.linalg import Field


@pytest.fixture
def gf7():
    return Field(7)


@pytest.fixture
def qq():
    return Field(None)


@pytest.fixture(params=[7, None], ids=["gf7", "qq"])
def field(request):
    return Field(request.param)
