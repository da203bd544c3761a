"""
Backend dei gruppi con accoppiamento.

`load_group` ricostruisce un gruppo dal descrittore salvato nei file
(curve id + ordine); le istanze sono condivise tramite cache.
"""

from functools import lru_cache

import sympy

from errors import DecodeError
from groups.base import G1Point, GtElement, PairingGroup, Slot
from groups.bls12_381 import Bls12381Group
from groups.toy import ToyGroup

__all__ = ["G1Point", "GtElement", "PairingGroup", "Slot", "Bls12381Group", "ToyGroup",
           "bls12_381", "toy_group", "toy_group_bits", "load_group"]


@lru_cache(maxsize=1)
def bls12_381() -> Bls12381Group:
    return Bls12381Group()


@lru_cache(maxsize=16)
def toy_group(order: int) -> ToyGroup:
    return ToyGroup(order)


@lru_cache(maxsize=16)
def toy_group_bits(bits: int) -> ToyGroup:
    return toy_group(int(sympy.prevprime(2 ** bits)))


def load_group(curve_id: int, order: int) -> PairingGroup:
    """Gruppo corrispondente a un descrittore letto da file."""
    if curve_id == Bls12381Group.curve_id:
        group = bls12_381()
        if order != group.order:
            raise DecodeError("field", "ordine non coerente con BLS12-381")
        return group
    if curve_id == ToyGroup.curve_id:
        try:
            return toy_group(order)
        except ValueError as e:
            raise DecodeError("field", str(e)) from e
    raise DecodeError("field", f"curve id sconosciuto: {curve_id}")
