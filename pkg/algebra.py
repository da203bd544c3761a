"""
algebra.py - Operazioni sul gruppo con accoppiamento e aritmetica degli scalari

Interfaccia simmetrica dello schema: g1_mul, pair, scalar_invert, gt_pow.
Ogni chiamata a queste funzioni viene conteggiata nel contatore attivo
(count_operations); le operazioni interne dei backend non lo sono.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional

from errors import InvalidScalar
from groups import G1Point, GtElement
from model_schema import OpCounter

# Scalar: intero in [0, q)
Scalar = int

_ACTIVE_COUNTER: ContextVar[Optional[OpCounter]] = ContextVar("idgsc_op_counter", default=None)
_SUSPENDED: ContextVar[bool] = ContextVar("idgsc_op_suspended", default=False)


def _tally(field: str) -> None:
    counter = _ACTIVE_COUNTER.get()
    if counter is not None and not _SUSPENDED.get():
        setattr(counter, field, getattr(counter, field) + 1)


@contextmanager
def count_operations(counter: Optional[OpCounter] = None) -> Iterator[OpCounter]:
    """Conta le operazioni dominanti eseguite nel blocco (nel thread corrente)."""
    counter = counter if counter is not None else OpCounter()
    token = _ACTIVE_COUNTER.set(counter)
    try:
        yield counter
    finally:
        _ACTIVE_COUNTER.reset(token)


@contextmanager
def uncounted() -> Iterator[None]:
    """Sospende il conteggio (calcolo dei valori precalcolabili)."""
    token = _SUSPENDED.set(True)
    try:
        yield
    finally:
        _SUSPENDED.reset(token)


def tally_precomputed_pairing() -> None:
    _tally("precomputed_pairing")


def g1_mul(k: Scalar, point: G1Point) -> G1Point:
    """k·Q in G1."""
    _tally("g1_mul")
    return point.group.mul(k, point)


def g1_add(a: G1Point, b: G1Point) -> G1Point:
    """Somma di punti (non è un'operazione dominante)."""
    return a.group.add(a, b)


def pair(first: G1Point, second: G1Point) -> GtElement:
    """ê(A, B): A nel primo slot, B nel secondo."""
    _tally("pairing")
    return first.group.pair(first, second)


def gt_pow(w: GtElement, k: Scalar) -> GtElement:
    """w^k nel gruppo bersaglio."""
    _tally("gt_pow")
    return w.group.gt_pow(w, k)


def scalar_invert(k: Scalar, q: int) -> Scalar:
    """k^-1 mod q; solleva InvalidScalar per k ≡ 0."""
    k %= q
    if k == 0:
        raise InvalidScalar("Lo scalare 0 non è invertibile")
    return pow(k, -1, q)


def random_scalar(q: int, rng) -> Scalar:
    """Scalare uniforme in Z_q^* (lo zero non viene mai estratto)."""
    return rng.randrange(1, q)
