"""
settings.py - Configurazione da variabili d'ambiente e file .env

Tutte le variabili hanno prefisso IDGSC_ (es. IDGSC_PASSPHRASE per l'uso
non interattivo della CLI). I flag da riga di comando hanno la precedenza.
"""

from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field, SecretStr
from pydantic_settings import BaseSettings, SettingsConfigDict


class IdgscSettings(BaseSettings):
    """Parametri di default per PKG, CLI e harness."""
    model_config = SettingsConfigDict(env_prefix="IDGSC_", env_file=".env", extra="ignore")

    passphrase: Optional[SecretStr] = Field(
        default=None, description="Passphrase della chiave master (modalità non interattiva)")
    identity_bits: int = Field(default=256, description="n1: bit di un'identità")
    message_bits: int = Field(default=256, description="n2: bit di un blocco messaggio")
    toy_order_bits: int = Field(default=64, ge=8, le=256,
                                description="Bit dell'ordine del gruppo giocattolo")
    scrypt_log_n: int = Field(default=15, ge=10, le=22, description="log2 del costo scrypt")
    workers: int = Field(default=4, ge=1, description="Thread per la cifratura a blocchi")
    verbose: bool = Field(default=False, description="Abilita le righe DEBUG")


@lru_cache(maxsize=1)
def get_settings() -> IdgscSettings:
    """Carica .env una sola volta e restituisce le impostazioni condivise."""
    load_dotenv()
    return IdgscSettings()
