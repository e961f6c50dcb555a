import pytest

from pcspkit import kernels


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    if request.param == "numba" and not kernels.HAS_NUMBA:
        pytest.skip("numba missing")
    previous = kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)
