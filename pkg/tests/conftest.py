from pathlib import Path

import pytest

from causalworlds import modelfile

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str):
    return modelfile.load(FIXTURES / name)


@pytest.fixture(scope="session")
def medical():
    return load_fixture("medical.world.json")


@pytest.fixture(scope="session")
def medical_that():
    return load_fixture("medical_that.world.json")


@pytest.fixture(scope="session")
def medical_g():
    return load_fixture("medical_g.world.json")


@pytest.fixture(scope="session")
def omelet():
    return load_fixture("omelet.world.json")


@pytest.fixture(scope="session")
def smoking():
    return load_fixture("smoking.world.json")


@pytest.fixture(scope="session")
def coin():
    return load_fixture("coin.world.json")


@pytest.fixture(scope="session")
def medical_canonical():
    return load_fixture("medical.canonical.json")


@pytest.fixture(scope="session")
def medical_g_canonical():
    return load_fixture("medical_g.canonical.json")


@pytest.fixture(scope="session")
def medical_g_sem():
    return load_fixture("medical_g.sem.json")


@pytest.fixture(scope="session")
def medical_g_functional():
    return load_fixture("medical_g.functional.json")


@pytest.fixture(scope="session")
def coin_diagram():
    return load_fixture("coin.diagram.json")
