"""
utils.py - Funzioni di utilità per diagnostica, file e stringhe di bit.

Contiene:
- Stampa diagnostica su stderr (fasi, avvisi, errori, debug)
- XOR di blocchi a larghezza fissa
- Scrittura atomica dei file (permessi ristretti per il materiale privato)
- Armatura esadecimale dei contenitori
"""

import os
import sys
import tempfile

from errors import DecodeError
from settings import get_settings

MAGIC_PREFIX = b"IDGSC"


def log_step(message: str) -> None:
    print(f"--- {message} ---", file=sys.stderr)


def log_info(message: str) -> None:
    print(message, file=sys.stderr)


def log_warning(message: str) -> None:
    print(f"ATTENZIONE: {message}", file=sys.stderr)


def log_error(message: str) -> None:
    print(f"ERRORE: {message}", file=sys.stderr)


def log_debug(message: str) -> None:
    if get_settings().verbose:
        print(f"DEBUG: {message}", file=sys.stderr)


def xor_bytes(a: bytes, b: bytes) -> bytes:
    """XOR di due stringhe della stessa lunghezza."""
    if len(a) != len(b):
        raise ValueError(f"XOR tra lunghezze diverse: {len(a)} e {len(b)}")
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(len(a), "big")


def write_atomic(path: str, data: bytes, private: bool = False) -> None:
    """
    Scrive il file tramite un temporaneo nella stessa directory e os.replace.

    Args:
        path: Percorso di destinazione
        data: Contenuto completo del file
        private: Se True il file viene creato con permessi 0600
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".idgsc-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.chmod(tmp_path, 0o600 if private else 0o644)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def read_file(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def armour(data: bytes, as_hex: bool) -> bytes:
    """Contenitore binario grezzo o in testo esadecimale (una riga)."""
    return data.hex().encode("ascii") + b"\n" if as_hex else data


def dearmour(data: bytes) -> bytes:
    """Riconosce automaticamente il formato binario o esadecimale."""
    if data.startswith(MAGIC_PREFIX):
        return data
    try:
        return bytes.fromhex(data.decode("ascii").strip())
    except (UnicodeDecodeError, ValueError) as e:
        raise DecodeError("magic", "né contenitore binario né testo esadecimale") from e
