"""
groups/bls12_381.py - Backend BLS12-381 basato su py_ecc

Mappa l'interfaccia simmetrica dello schema sulla curva asimmetrica:
- Slot.FIRST  -> G2 (P, P_pub, X), codifica compressa da 96 byte
- Slot.SECOND -> G1 (P, Q, S, V), codifica compressa da 48 byte
Tutte le equazioni dello schema confrontano valori calcolati con la stessa
disposizione degli slot, quindi restano valide parola per parola.
"""

import hashlib
from typing import Any

from py_ecc.bls.hash_to_curve import hash_to_G1, hash_to_G2
from py_ecc.bls.point_compression import (
    compress_G1, compress_G2, decompress_G1, decompress_G2)
from py_ecc.optimized_bls12_381 import (
    FQ12, G1, G2, Z1, Z2, add, curve_order, eq, field_modulus, is_inf,
    multiply, pairing)

from errors import DecodeError
from groups.base import PairingGroup, Slot

FQ_BYTES = 48


def _coeff_int(c: Any) -> int:
    """Le implementazioni ottimizzate di py_ecc conservano coefficienti int o FQ."""
    return c if isinstance(c, int) else int(c.n)


class Bls12381Group(PairingGroup):
    """Curva BLS12-381 (sicurezza ~128 bit), accoppiamento ottimale di Ate."""

    curve_id = 1
    name = "bls12-381"
    symmetric = False

    @property
    def order(self) -> int:
        return curve_order

    def point_width(self, slot: Slot) -> int:
        return 2 * FQ_BYTES if slot is Slot.FIRST else FQ_BYTES

    @property
    def gt_width(self) -> int:
        return 12 * FQ_BYTES

    def _generator(self, slot: Slot) -> Any:
        return G2 if slot is Slot.FIRST else G1

    def _identity(self, slot: Slot) -> Any:
        return Z2 if slot is Slot.FIRST else Z1

    def _mul(self, raw: Any, k: int, slot: Slot) -> Any:
        return multiply(raw, k)

    def _add(self, a: Any, b: Any, slot: Slot) -> Any:
        return add(a, b)

    def _point_eq(self, a: Any, b: Any, slot: Slot) -> bool:
        return eq(a, b)

    def _point_is_identity(self, raw: Any, slot: Slot) -> bool:
        return is_inf(raw)

    def _serialize(self, raw: Any, slot: Slot) -> bytes:
        if slot is Slot.FIRST:
            z1, z2 = compress_G2(raw)
            return z1.to_bytes(FQ_BYTES, "big") + z2.to_bytes(FQ_BYTES, "big")
        return compress_G1(raw).to_bytes(FQ_BYTES, "big")

    def _deserialize(self, data: bytes, slot: Slot) -> Any:
        try:
            if slot is Slot.FIRST:
                z1 = int.from_bytes(data[:FQ_BYTES], "big")
                z2 = int.from_bytes(data[FQ_BYTES:], "big")
                point = decompress_G2((z1, z2))
            else:
                point = decompress_G1(int.from_bytes(data, "big"))
        except (ValueError, AssertionError, ZeroDivisionError) as e:
            raise DecodeError("point", f"codifica non valida: {e}") from e

        if not is_inf(multiply(point, curve_order)):
            raise DecodeError("point", "punto fuori dal sottogruppo di ordine primo")
        # Solo codifiche canoniche: bit di flag e coordinate devono rifare gli stessi byte
        if self._serialize(point, slot) != data:
            raise DecodeError("point", "codifica non canonica")
        return point

    def _pair(self, first: Any, second: Any) -> Any:
        # py_ecc vuole (punto di G2, punto di G1)
        return pairing(first, second)

    def _gt_identity(self) -> Any:
        return FQ12.one()

    def _gt_mul(self, a: Any, b: Any) -> Any:
        return a * b

    def _gt_pow(self, a: Any, k: int) -> Any:
        return a ** k

    def _gt_eq(self, a: Any, b: Any) -> bool:
        return a == b

    def _gt_serialize(self, raw: Any) -> bytes:
        return b"".join(
            (_coeff_int(c) % field_modulus).to_bytes(FQ_BYTES, "big") for c in raw.coeffs)

    def _hash_to_point(self, data: bytes, dst: bytes, slot: Slot) -> Any:
        if slot is Slot.FIRST:
            return hash_to_G2(data, dst, hashlib.sha256)
        return hash_to_G1(data, dst, hashlib.sha256)
