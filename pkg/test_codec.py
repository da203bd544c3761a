"""Test del padding e dei contenitori binari (parametri, chiavi, envelope, bundle)."""

import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import codec
import gsc
import keyauthority
from errors import DecodeError, PaddingError
from groups import Slot
from model_schema import Mode, PaddedPayload
from utils import armour, dearmour

BLOCK = 32


# --- Padding ---


def test_pad_empty_input():
    padded = codec.pad(b"", BLOCK)
    assert len(padded.blocks) == 1
    assert codec.unpad(padded) == b""


def test_pad_full_block_spills():
    padded = codec.pad(bytes(BLOCK), BLOCK)
    assert len(padded.blocks) == 2
    assert codec.unpad(padded) == bytes(BLOCK)


def test_pad_layout():
    block = codec.pad(b"abc", BLOCK).blocks[0]
    assert block[:4] == b"abc\x80"
    assert block[-4:] == (3).to_bytes(4, "big")
    assert not any(block[4:-4])


@settings(max_examples=1000, deadline=None)
@given(st.binary(max_size=300), st.sampled_from([8, 16, 32, 64]))
def test_pad_round_trip(data, block_bytes):
    padded = codec.pad(data, block_bytes)
    assert all(len(b) == block_bytes for b in padded.blocks)
    assert codec.unpad(codec.blocks_to_payload(list(padded.blocks))) == data


def test_unpad_rejects_bad_marker():
    block = bytearray(codec.pad(b"abc", BLOCK).blocks[0])
    block[3] = 0x81
    with pytest.raises(PaddingError):
        codec.unpad(PaddedPayload(blocks=(bytes(block),), original_length=3))


def test_unpad_rejects_nonzero_filler():
    block = bytearray(codec.pad(b"abc", BLOCK).blocks[0])
    block[10] = 1
    with pytest.raises(PaddingError):
        codec.unpad(PaddedPayload(blocks=(bytes(block),), original_length=3))


def test_unpad_rejects_wrong_length():
    blocks = codec.pad(b"x" * 40, BLOCK).blocks
    with pytest.raises(PaddingError):
        codec.unpad(codec.blocks_to_payload(list(blocks[:1])))


def test_pad_rejects_tiny_blocks():
    with pytest.raises(PaddingError):
        codec.pad(b"", 4)


# --- Parametri e chiavi ---


def test_params_canonical(toy_params):
    data = codec.encode_params(toy_params)
    decoded = codec.decode_params(data)
    assert decoded.p_pub == toy_params.p_pub
    assert (decoded.n1, decoded.n2, decoded.n3, decoded.n4) == \
        (toy_params.n1, toy_params.n2, toy_params.n3, toy_params.n4)
    assert codec.encode_params(decoded) == data


def test_params_bad_magic_and_version(toy_params):
    data = bytearray(codec.encode_params(toy_params))
    with pytest.raises(DecodeError) as info:
        codec.decode_params(b"XXXXXXX" + bytes(data[7:]))
    assert info.value.category == "magic"
    data[7] = 9
    with pytest.raises(DecodeError) as info:
        codec.decode_params(bytes(data))
    assert info.value.category == "version"


def test_params_truncated_and_extended(toy_params):
    data = codec.encode_params(toy_params)
    with pytest.raises(DecodeError) as info:
        codec.decode_params(data[:-1])
    assert info.value.category == "truncated"
    with pytest.raises(DecodeError) as info:
        codec.decode_params(data + b"\x00")
    assert info.value.category == "width"


def test_params_identity_p_pub_rejected(toy_params):
    data = codec.encode_params(toy_params)
    width = toy_params.group.point_width(Slot.FIRST)
    with pytest.raises(DecodeError) as info:
        codec.decode_params(data[:-width] + bytes(width))
    assert info.value.category == "field"


def test_params_unknown_curve(toy_params):
    data = bytearray(codec.encode_params(toy_params))
    data[8] = 77
    with pytest.raises(DecodeError) as info:
        codec.decode_params(bytes(data))
    assert info.value.category == "field"


def test_user_key_round_trip(toy_keys):
    key = toy_keys["alice"]
    full = codec.decode_user_key(codec.encode_user_key(key))
    assert full == key
    public = codec.decode_user_key(codec.encode_user_key(key, include_private=False))
    assert not public.has_private
    assert public.public_point == key.public_point


def test_master_key_container(toy_setup):
    params, master = toy_setup
    data = keyauthority.seal_master_key(master, params, "pw", log_n=10)
    sealed = codec.decode_master_key(data)
    assert (sealed.curve_id, sealed.order) == params.group.descriptor
    assert codec.encode_master_key(sealed) == data


# --- Envelope e bundle ---


@pytest.fixture(scope="module")
def envelope(toy_params, toy_keys):
    alice, bob = toy_params.identity("alice"), toy_params.identity("bob")
    env = gsc.gsc_payload(toy_params, toy_keys["alice"], alice, bob, b"ciao", random.Random(4))[0]
    return env


def test_envelope_canonical(toy_params, envelope):
    data = codec.encode_envelope(toy_params, envelope)
    decoded = codec.decode_envelope(toy_params, data)
    assert decoded.x == envelope.x and decoded.y == envelope.y
    assert decoded.header == envelope.header
    assert codec.encode_envelope(toy_params, decoded) == data


def test_envelope_truncated(toy_params, envelope):
    data = codec.encode_envelope(toy_params, envelope)
    with pytest.raises(DecodeError) as info:
        codec.decode_envelope(toy_params, data[:-3])
    assert info.value.category == "truncated"


def test_envelope_bad_point(toy_params, envelope):
    data = bytearray(codec.encode_envelope(toy_params, envelope))
    header_len = 7 + 2 + 2 * toy_params.identity_bytes
    width = toy_params.group.point_width(Slot.FIRST)
    data[header_len:header_len + width] = b"\xff" * width
    with pytest.raises(DecodeError) as info:
        codec.decode_envelope(toy_params, bytes(data))
    assert info.value.category == "point"


def test_envelope_bad_mode(toy_params, envelope):
    data = bytearray(codec.encode_envelope(toy_params, envelope))
    data[8] = 7
    with pytest.raises(DecodeError) as info:
        codec.decode_envelope(toy_params, bytes(data))
    assert info.value.category == "field"


def test_bundle_canonical(toy_params, toy_keys):
    alice, bob = toy_params.identity("alice"), toy_params.identity("bob")
    envs = gsc.gsc_payload(toy_params, toy_keys["alice"], alice, bob, bytes(90), random.Random(8))
    data = codec.encode_bundle(toy_params, envs[0].header, envs)
    header, decoded = codec.decode_bundle(toy_params, data)
    assert header == envs[0].header
    assert [(e.x, e.y) for e in decoded] == [(e.x, e.y) for e in envs]
    assert codec.encode_bundle(toy_params, header, decoded) == data
    assert gsc.guc_payload(toy_params, alice, toy_keys["bob"], bob, decoded) == bytes(90)


LABELS = st.sampled_from([None, "alice", "bob", "carol"])


@settings(max_examples=1000, deadline=None)
@given(sender=LABELS, receiver=LABELS, payload=st.binary(max_size=96),
       seed=st.integers(min_value=0, max_value=2 ** 32))
def test_random_envelopes_canonical(toy_params, toy_keys, sender, receiver, payload, seed):
    assume(sender != receiver)
    id_a = toy_params.identity(sender) if sender else toy_params.vacant()
    id_b = toy_params.identity(receiver) if receiver else toy_params.vacant()
    key = toy_keys[sender] if sender else None
    envs = gsc.gsc_payload(toy_params, key, id_a, id_b, payload, random.Random(seed))

    for env in envs:
        data = codec.encode_envelope(toy_params, env)
        decoded = codec.decode_envelope(toy_params, data)
        assert (decoded.x, decoded.y, decoded.header) == (env.x, env.y, env.header)
        assert codec.encode_envelope(toy_params, decoded) == data

    bundle = codec.encode_bundle(toy_params, envs[0].header, envs)
    header, decoded = codec.decode_bundle(toy_params, bundle)
    assert codec.encode_bundle(toy_params, header, decoded) == bundle


@pytest.mark.parametrize("kind,encoder", [
    ("params", lambda p, k, e: codec.encode_params(p)),
    ("key", lambda p, k, e: codec.encode_user_key(k)),
    ("envelope", lambda p, k, e: codec.encode_envelope(p, e)),
])
def test_container_kind(toy_params, toy_keys, envelope, kind, encoder):
    assert codec.container_kind(encoder(toy_params, toy_keys["alice"], envelope)) == kind


def test_container_kind_unknown():
    with pytest.raises(DecodeError):
        codec.container_kind(b"nope")


def test_armour_detection(toy_params):
    data = codec.encode_params(toy_params)
    assert dearmour(armour(data, as_hex=True)) == data
    assert dearmour(armour(data, as_hex=False)) == data
    with pytest.raises(DecodeError):
        dearmour(b"\x00\x01 not hex")


@pytest.mark.curve
def test_curve_params_canonical(curve_setup):
    params, _ = curve_setup
    data = codec.encode_params(params)
    assert codec.encode_params(codec.decode_params(data)) == data
    assert params.n3 == 384 and params.n4 == 576 * 8


@pytest.mark.curve
def test_curve_envelope_rejects_x_outside_subgroup(curve_setup, off_subgroup_x):
    params, _ = curve_setup
    alice, bob = params.identity("alice"), params.identity("bob")
    data = (codec.ENVELOPE_MAGIC + bytes([codec.FORMAT_VERSION, Mode.SIGNCRYPTION.value])
            + alice.data + bob.data + off_subgroup_x + bytes(params.mask_bytes))
    with pytest.raises(DecodeError) as info:
        codec.decode_envelope(params, data)
    assert info.value.category == "point"
