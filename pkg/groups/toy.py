"""
groups/toy.py - Gruppo giocattolo di ordine piccolo per gli oracoli a forza bruta

Gli elementi di G1 sono rappresentati dal loro logaritmo discreto modulo q,
Gt è il sottogruppo di ordine q di Z_p^* (p = kq + 1 primo) e
ê(aP, bP) = g^(ab). È un gruppo bilineare simmetrico a tutti gli effetti,
ma privo di sicurezza: serve solo ai test e alle verifiche esaustive.
"""

import hashlib
from itertools import count
from typing import Any

import sympy

from errors import DecodeError
from groups.base import PairingGroup, Slot


class ToyGroup(PairingGroup):
    """Gruppo simmetrico "esponente" di ordine primo q."""

    curve_id = 2
    name = "toy"
    symmetric = True

    def __init__(self, order: int):
        if order < 3 or not sympy.isprime(order):
            raise ValueError(f"L'ordine del gruppo giocattolo deve essere un primo >= 3, non {order}")
        self._q = order
        k = 2
        while not sympy.isprime(k * order + 1):
            k += 2
        self._p = k * order + 1
        self._g = next(pow(h, k, self._p) for h in count(2) if pow(h, k, self._p) != 1)
        self._point_bytes = (order.bit_length() + 7) // 8
        self._gt_bytes = (self._p.bit_length() + 7) // 8

    @property
    def order(self) -> int:
        return self._q

    @property
    def modulus(self) -> int:
        return self._p

    def point_width(self, slot: Slot) -> int:
        return self._point_bytes

    @property
    def gt_width(self) -> int:
        return self._gt_bytes

    def _generator(self, slot: Slot) -> Any:
        return 1

    def _identity(self, slot: Slot) -> Any:
        return 0

    def _mul(self, raw: Any, k: int, slot: Slot) -> Any:
        return (raw * k) % self._q

    def _add(self, a: Any, b: Any, slot: Slot) -> Any:
        return (a + b) % self._q

    def _point_eq(self, a: Any, b: Any, slot: Slot) -> bool:
        return a == b

    def _point_is_identity(self, raw: Any, slot: Slot) -> bool:
        return raw == 0

    def _serialize(self, raw: Any, slot: Slot) -> bytes:
        return raw.to_bytes(self._point_bytes, "big")

    def _deserialize(self, data: bytes, slot: Slot) -> Any:
        value = int.from_bytes(data, "big")
        if value >= self._q:
            raise DecodeError("point", "valore fuori dal gruppo giocattolo")
        return value

    def _pair(self, first: Any, second: Any) -> Any:
        return pow(self._g, (first * second) % self._q, self._p)

    def _gt_identity(self) -> Any:
        return 1

    def _gt_mul(self, a: Any, b: Any) -> Any:
        return (a * b) % self._p

    def _gt_pow(self, a: Any, k: int) -> Any:
        return pow(a, k, self._p)

    def _gt_eq(self, a: Any, b: Any) -> bool:
        return a == b

    def _gt_serialize(self, raw: Any) -> bytes:
        return raw.to_bytes(self._gt_bytes, "big")

    def _hash_to_point(self, data: bytes, dst: bytes, slot: Slot) -> Any:
        wide = (self._q.bit_length() + 128 + 7) // 8
        for counter in count():
            digest = hashlib.shake_256(dst + data + counter.to_bytes(4, "big")).digest(wide)
            value = int.from_bytes(digest, "big") % self._q
            if value:
                return value
