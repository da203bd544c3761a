"""Test end-to-end della CLI sul gruppo giocattolo."""

import os
import stat

import pytest

import codec
import main
from model_schema import MIN_MESSAGE_BITS
from settings import get_settings

PASSPHRASE = "passphrase di prova"


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("IDGSC_PASSPHRASE", PASSPHRASE)
    monkeypatch.setenv("IDGSC_WORKERS", "2")
    get_settings.cache_clear()
    assert main.main(["setup", "--toy-group"]) == main.EXIT_OK
    for name in ("alice", "bob"):
        assert main.main(["extract", "--id", name, "--out", f"{name}.key"]) == main.EXIT_OK
    return tmp_path


def _write(path, data: bytes) -> str:
    path.write_bytes(data)
    return str(path)


def _flip_last_byte(path) -> None:
    data = bytearray(path.read_bytes())
    data[-1] ^= 0x01
    path.write_bytes(bytes(data))


SIZES = [0, 1, 32, 1024 * 1024]


@pytest.mark.parametrize("size", SIZES)
def test_signcrypt_round_trip(workspace, size):
    payload = os.urandom(size)
    src = _write(workspace / "in.bin", payload)
    assert main.main(["signcrypt", "--from", "alice", "--to", "bob", "--key", "alice.key",
                      "--in", src, "--out", "msg.sc"]) == main.EXIT_OK
    assert main.main(["unsigncrypt", "--key", "bob.key", "--in", "msg.sc",
                      "--out", "out.bin"]) == main.EXIT_OK
    assert (workspace / "out.bin").read_bytes() == payload


@pytest.mark.parametrize("size", SIZES)
def test_sign_verify_with_public_values_only(workspace, size):
    payload = os.urandom(size)
    src = _write(workspace / "doc.txt", payload)
    assert main.main(["sign", "--from", "alice", "--key", "alice.key", "--in", src,
                      "--out", "doc.sig"]) == main.EXIT_OK
    assert main.main(["verify", "--from", "alice", "--in", "doc.sig",
                      "--out", "doc.out"]) == main.EXIT_OK
    assert (workspace / "doc.out").read_bytes() == payload
    assert main.main(["verify", "--from", "bob", "--in", "doc.sig"]) == main.EXIT_REJECT


@pytest.mark.parametrize("size", SIZES)
def test_encrypt_decrypt(workspace, size):
    payload = os.urandom(size)
    src = _write(workspace / "secret.txt", payload)
    assert main.main(["encrypt", "--to", "bob", "--in", src, "--out", "secret.enc"]) == main.EXIT_OK
    assert main.main(["decrypt", "--key", "bob.key", "--in", "secret.enc",
                      "--out", "secret.out"]) == main.EXIT_OK
    assert (workspace / "secret.out").read_bytes() == payload
    assert main.main(["decrypt", "--key", "alice.key", "--to", "alice", "--in", "secret.enc",
                      "--out", "wrong.out"]) == main.EXIT_REJECT
    assert not (workspace / "wrong.out").exists()


def test_tampered_envelope_exits_one(workspace, capsys):
    src = _write(workspace / "in.bin", b"x" * 100)
    main.main(["signcrypt", "--from", "alice", "--to", "bob", "--key", "alice.key",
               "--in", src, "--out", "msg.sc"])
    _flip_last_byte(workspace / "msg.sc")
    capsys.readouterr()
    assert main.main(["unsigncrypt", "--key", "bob.key", "--in", "msg.sc",
                      "--out", "out.bin"]) == main.EXIT_REJECT
    err = capsys.readouterr().err
    assert err.strip().splitlines()[-1] == "ERRORE: RIFIUTATO"


def test_tampered_x_exits_one(workspace, capsys):
    src = _write(workspace / "in.bin", b"x" * 10)
    main.main(["signcrypt", "--from", "alice", "--to", "bob", "--key", "alice.key",
               "--in", src, "--out", "msg.sc"])
    data = bytearray((workspace / "msg.sc").read_bytes())
    first_x = len(codec.BUNDLE_MAGIC) + 2 + 2 * 32 + 4
    data[first_x:first_x + 8] = b"\xff" * 8
    (workspace / "msg.sc").write_bytes(bytes(data))
    capsys.readouterr()
    assert main.main(["unsigncrypt", "--key", "bob.key", "--in", "msg.sc",
                      "--out", "out.bin"]) == main.EXIT_REJECT
    assert capsys.readouterr().err.strip().splitlines()[-1] == "ERRORE: RIFIUTATO"
    assert main.main(["verify", "--from", "alice", "--in", "msg.sc"]) == main.EXIT_REJECT
    assert not (workspace / "out.bin").exists()


def test_hex_armour(workspace):
    src = _write(workspace / "in.bin", b"armatura")
    assert main.main(["signcrypt", "--hex", "--from", "alice", "--to", "bob", "--key", "alice.key",
                      "--in", src, "--out", "msg.hex"]) == main.EXIT_OK
    bytes.fromhex((workspace / "msg.hex").read_text().strip())
    assert main.main(["unsigncrypt", "--key", "bob.key", "--in", "msg.hex",
                      "--out", "out.bin"]) == main.EXIT_OK
    assert (workspace / "out.bin").read_bytes() == b"armatura"


def test_private_files_are_restricted(workspace):
    assert stat.S_IMODE(os.stat(workspace / "alice.key").st_mode) == 0o600
    assert stat.S_IMODE(os.stat(workspace / main.DEFAULT_MASTER).st_mode) == 0o600
    assert main.main(["extract", "--id", "carol", "--public-only", "--out", "carol.pub"]) == 0
    assert stat.S_IMODE(os.stat(workspace / "carol.pub").st_mode) == 0o644


# --- Errori d'uso ---


@pytest.mark.parametrize("argv", [
    ["signcrypt", "--from", "alice", "--to", "bob", "--in", "in.bin"],
    ["signcrypt", "--to", "bob", "--key", "alice.key", "--in", "in.bin"],
    ["signcrypt", "--in", "in.bin"],
    ["signcrypt", "--from", "alice", "--to", "alice", "--key", "alice.key", "--in", "in.bin"],
    ["signcrypt", "--from", "alice", "--to", "bob", "--key", "bob.key", "--in", "in.bin"],
    ["signcrypt", "--from", "alice", "--to", "bob", "--key", "alice.key", "--mode", "signature",
     "--in", "in.bin"],
    ["signcrypt", "--from", "alice", "--to", "bob", "--key", "alice.key", "--in", "missing.bin"],
    ["sign", "--from", "alice", "--key", "alice.key"],
])
def test_usage_errors_exit_two(workspace, argv):
    _write(workspace / "in.bin", b"dati")
    assert main.main(argv) == main.EXIT_USAGE
    assert not (workspace / "msg.sc").exists()


def test_mode_override_agreeing(workspace):
    src = _write(workspace / "in.bin", b"dati")
    assert main.main(["signcrypt", "--from", "alice", "--key", "alice.key", "--mode", "signature",
                      "--in", src, "--out", "msg.sig"]) == main.EXIT_OK
    assert main.main(["unsigncrypt", "--from", "alice", "--mode", "signature",
                      "--in", "msg.sig", "--out", "out.bin"]) == main.EXIT_OK


@pytest.mark.parametrize("argv", [
    ["setup", "--toy-group", "--identity-bits", "12"],
    ["setup", "--toy-group", "--identity-bits", "20"],
    ["setup", "--toy-group", "--message-bits", "16"],
    ["setup", "--toy-group", "--toy-bits", "1"],
    ["setup", "--toy-bits", "32"],
    ["setup", "--toy-group", "--workers", "0"],
])
def test_setup_bad_flags_exit_two(tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("IDGSC_PASSPHRASE", PASSPHRASE)
    get_settings.cache_clear()
    assert main.main(argv) == main.EXIT_USAGE
    assert not (tmp_path / main.DEFAULT_PARAMS).exists()


def test_setup_smallest_message_width(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("IDGSC_PASSPHRASE", PASSPHRASE)
    get_settings.cache_clear()
    assert main.main(["setup", "--toy-group", "--message-bits", str(MIN_MESSAGE_BITS)]) == 0
    assert main.main(["extract", "--id", "alice", "--out", "alice.key"]) == main.EXIT_OK
    src = _write(tmp_path / "in.bin", b"blocchi da cinque byte")
    assert main.main(["sign", "--from", "alice", "--key", "alice.key", "--in", src,
                      "--out", "doc.sig"]) == main.EXIT_OK
    assert main.main(["verify", "--in", "doc.sig", "--out", "doc.out"]) == main.EXIT_OK
    assert (tmp_path / "doc.out").read_bytes() == b"blocchi da cinque byte"


def test_unsigncrypt_garbage_exits_two(workspace):
    _write(workspace / "junk", b"IDGSCB1 non valido")
    assert main.main(["unsigncrypt", "--key", "bob.key", "--in", "junk"]) == main.EXIT_USAGE


def test_wrong_passphrase_exits_two(workspace, monkeypatch):
    monkeypatch.setenv("IDGSC_PASSPHRASE", "sbagliata")
    get_settings.cache_clear()
    assert main.main(["extract", "--id", "carol", "--out", "carol.key"]) == main.EXIT_USAGE


def test_passphrase_prompt_fallback(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    get_settings.cache_clear()
    prompts = []
    monkeypatch.setattr(main.getpass, "getpass", lambda prompt: prompts.append(prompt) or "pw")
    assert main.main(["setup", "--toy-group"]) == main.EXIT_OK
    assert main.main(["extract", "--id", "alice", "--out", "alice.key"]) == main.EXIT_OK
    assert len(prompts) == 2


# --- inspect e bench ---


def test_inspect_redacts_private_key(workspace, capsys):
    assert main.main(["inspect", "--in", "alice.key"]) == main.EXIT_OK
    out = capsys.readouterr().out
    assert "identità: alice" in out
    assert "S: <redatto>" in out
    private_hex = (workspace / "alice.key").read_bytes()[-8:].hex()
    assert private_hex not in out


def test_inspect_bundle_and_master(workspace, capsys):
    src = _write(workspace / "in.bin", b"dati")
    main.main(["encrypt", "--to", "bob", "--in", src, "--out", "msg.enc"])
    capsys.readouterr()
    assert main.main(["inspect", "--in", "msg.enc"]) == main.EXIT_OK
    out = capsys.readouterr().out
    assert "modalità: ENCRYPTION_ONLY" in out
    assert "blocchi: 1" in out
    assert main.main(["inspect", "--in", main.DEFAULT_MASTER]) == main.EXIT_OK
    assert "s: <cifrato>" in capsys.readouterr().out


def test_bench_prints_table(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main.main(["bench", "--toy-group", "--rounds", "3"]) == main.EXIT_OK
    captured = capsys.readouterr()
    out = captured.out
    assert "ATTENZIONE: gruppo giocattolo" in captured.err
    assert "signcrypt" in out and "unsigncrypt" in out
    assert "conforme alla tabella: sì" in out


@pytest.mark.parametrize("rounds", ["0", "-3", "tre"])
def test_bench_rejects_bad_rounds(tmp_path, monkeypatch, rounds):
    monkeypatch.chdir(tmp_path)
    assert main.main(["bench", "--toy-group", "--rounds", rounds]) == main.EXIT_USAGE


def test_bad_subcommand_exits_two():
    assert main.main(["frobnicate"]) == main.EXIT_USAGE
