import pytest

from conewave.band_profile import Shape, make_profile
from conewave.symbols import Symbol


@pytest.fixture(scope="session")
def sym_fs():
    return Symbol.free_schrodinger()


@pytest.fixture(scope="session")
def sym_kg():
    return Symbol.klein_gordon(1.0)


@pytest.fixture(scope="session")
def prof_bump():
    return make_profile(1.0, 2.0)


@pytest.fixture(scope="session")
def prof_shift3():
    return make_profile(1.0, 2.0, Shape.SHIFTED_BUMP, xc=3.0)


@pytest.fixture(scope="session")
def prof_chirp2(sym_fs):
    return make_profile(1.0, 2.0, Shape.CHIRPED_BUMP, tau=2.0, sym=sym_fs)
