import pytest

from radialbc.numerov import warmup


@pytest.fixture(scope="session", autouse=True)
def _jit_warmup():
    # compile (or load from cache) the sweep kernel once, so timing-sensitive
    # tests never pay the JIT cost
    warmup()
