"""
Fixture condivise dei test.

I test di massa girano sul gruppo giocattolo a 64 bit; BLS12-381 (accoppiamenti
in puro Python) è usato con pochi casi ed è saltato con --toy-group.
"""

import random
from itertools import count

import pytest
from py_ecc.bls.point_compression import compress_G2, modular_squareroot_in_FQ2
from py_ecc.optimized_bls12_381 import FQ2, b2

import keyauthority
from groups import toy_group
from model_schema import SecurityLevel
from settings import get_settings

TINY_ORDER = 1009
SWEEP_ORDER = 11


def pytest_addoption(parser):
    parser.addoption("--toy-group", action="store_true", default=False,
                     help="Esegue solo i test sul gruppo giocattolo")


def pytest_configure(config):
    config.addinivalue_line("markers", "curve: test su BLS12-381 (lento)")


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--toy-group"):
        return
    skip = pytest.mark.skip(reason="--toy-group: BLS12-381 escluso")
    for item in items:
        if "curve" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Impostazioni ricaricate a ogni test, senza leggere un .env locale."""
    monkeypatch.setenv("IDGSC_VERBOSE", "0")
    monkeypatch.setenv("IDGSC_SCRYPT_LOG_N", "10")
    monkeypatch.delenv("IDGSC_PASSPHRASE", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def toy_setup():
    """(params, master) sul gruppo giocattolo a 64 bit, condivisi nella sessione."""
    return keyauthority.setup(SecurityLevel.TOY, random.Random(1), toy_order_bits=64)


@pytest.fixture(scope="session")
def toy_params(toy_setup):
    return toy_setup[0]


@pytest.fixture(scope="session")
def toy_master(toy_setup):
    return toy_setup[1]


@pytest.fixture(scope="session")
def tiny_setup():
    """Gruppo di ordine enumerabile per gli oracoli a forza bruta."""
    return keyauthority.setup(SecurityLevel.TOY, random.Random(2), toy_order=TINY_ORDER)


@pytest.fixture(scope="session")
def sweep_group():
    return toy_group(SWEEP_ORDER)


@pytest.fixture(scope="session")
def curve_setup():
    return keyauthority.setup(SecurityLevel.BLS12_381, random.Random(3))


@pytest.fixture(scope="session")
def toy_keys(toy_setup):
    params, master = toy_setup
    return {name: keyauthority.extract(master, params, params.identity(name))
            for name in ("alice", "bob", "carol")}


@pytest.fixture(scope="session")
def off_subgroup_x() -> bytes:
    """Punto di G2 sulla curva ma fuori dal sottogruppo di ordine primo (cofattore non rimosso)."""
    for k in count(1):
        x = FQ2([k, 0])
        y = modular_squareroot_in_FQ2(x ** 3 + b2)
        if y is not None:
            z1, z2 = compress_G2((x, y, FQ2.one()))
            return z1.to_bytes(48, "big") + z2.to_bytes(48, "big")
