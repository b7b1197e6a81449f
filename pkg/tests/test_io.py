import json
import struct

import numpy as np
import pytest

from pulseshape.gabor import PulsePair, make_lattice
from pulseshape.io import (channel_from_json, channel_to_json, dump_json, load_pulse_pair, read_signal,
                           save_pulse_pair, scattering_from_json, scattering_to_json, signal_from_bytes,
                           signal_to_bytes, write_signal)
from pulseshape.wssus import draw_channel, make_brick_scattering

from conftest import random_signal


def test_signal_bytes_layout():
    data = signal_to_bytes(np.array([1 + 2j, -3.5j]))
    assert struct.unpack("<Q", data[:8]) == (2,)
    assert struct.unpack("<4d", data[8:]) == (1.0, 2.0, 0.0, -3.5)


def test_signal_roundtrip_exact(rng, tmp_path):
    x = random_signal(rng, 37, unit=False)
    np.testing.assert_array_equal(signal_from_bytes(signal_to_bytes(x)), x)
    write_signal(tmp_path / "x.bin", x)
    np.testing.assert_array_equal(read_signal(tmp_path / "x.bin"), x)


def test_signal_header_checks():
    with pytest.raises(ValueError):
        signal_from_bytes(b"\x01\x02")
    good = signal_to_bytes(np.ones(4))
    with pytest.raises(ValueError):
        signal_from_bytes(good[:-16])
    with pytest.raises(ValueError):
        signal_from_bytes(good + b"\x00" * 16)


def test_pulse_pair_roundtrip(rng, tmp_path):
    pair = PulsePair(random_signal(rng, 16), random_signal(rng, 16), {"method": "svd", "gain": np.float64(0.5)})
    paths = save_pulse_pair(tmp_path / "sub" / "p", pair, {"lattice": make_lattice(16, 2, 1).shape})
    assert all(p.exists() for p in paths)
    back = load_pulse_pair(tmp_path / "sub" / "p")
    np.testing.assert_array_equal(back.g, pair.g)
    np.testing.assert_array_equal(back.gamma, pair.gamma)
    assert back.meta["method"] == "svd" and back.meta["gain"] == 0.5 and back.meta["L"] == 16


def test_scattering_roundtrip():
    C = make_brick_scattering(2, 3, 32)
    back = scattering_from_json(json.loads(json.dumps(scattering_to_json(C))))
    np.testing.assert_array_equal(back.support, C.support)
    np.testing.assert_array_equal(back.mass, C.mass)
    assert back.L == 32


def test_scattering_json_validates():
    with pytest.raises(ValueError):
        scattering_from_json({"L": 8, "cells": [[0, 0, 0.5]]})


def test_channel_roundtrip(rng):
    h = draw_channel(make_brick_scattering(1, 1, 16), rng)
    back = channel_from_json(json.loads(json.dumps(channel_to_json(h))))
    np.testing.assert_array_equal(back.coeffs, h.coeffs)
    np.testing.assert_array_equal(back.support, h.support)


def test_dump_json_handles_numpy(tmp_path):
    dump_json(tmp_path / "a.json", {"x": np.arange(3), 1: np.float32(2.5), "t": (1, 2)})
    assert json.loads((tmp_path / "a.json").read_text()) == {"x": [0, 1, 2], "1": 2.5, "t": [1, 2]}
