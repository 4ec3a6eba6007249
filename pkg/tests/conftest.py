import pytest

from desk import DESK


@pytest.fixture(params=sorted(DESK), ids=sorted(DESK))
def desk(request):
    return DESK[request.param]
