"""File formats.

Signals: 8-byte little-endian ``uint64`` length header followed by
interleaved real/imag ``float64`` little-endian samples. Pulse pairs are two
signal files (``<stem>.g.bin``, ``<stem>.gamma.bin``) plus a JSON sidecar
``<stem>.json``.
"""
import json
from pathlib import Path
import struct

import numpy as np

from .gabor import PulsePair
from .wssus import ChannelRealization, ScatteringMass

_HEADER = struct.Struct("<Q")


def signal_to_bytes(x):
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    body = np.empty(2 * x.size, dtype="<f8")
    body[0::2] = x.real
    body[1::2] = x.imag
    return _HEADER.pack(x.size) + body.tobytes()


def signal_from_bytes(data):
    if len(data) < _HEADER.size:
        raise ValueError("truncated signal header")
    (L,) = _HEADER.unpack_from(data)
    body = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if body.size != 2 * L:
        raise ValueError(f"header says L={L} but payload holds {body.size // 2} samples")
    return body[0::2] + 1j * body[1::2]


def write_signal(path, x):
    Path(path).write_bytes(signal_to_bytes(x))


def read_signal(path):
    return signal_from_bytes(Path(path).read_bytes())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def save_pulse_pair(stem, pair, sidecar=None):
    """Write ``pair`` next to ``stem``; returns the three paths."""
    stem = Path(stem)
    stem.parent.mkdir(parents=True, exist_ok=True)
    pg = stem.with_name(stem.name + ".g.bin")
    pgam = stem.with_name(stem.name + ".gamma.bin")
    pjs = stem.with_name(stem.name + ".json")
    write_signal(pg, pair.g)
    write_signal(pgam, pair.gamma)
    meta = dict(pair.meta)
    meta.update(sidecar or {})
    meta.setdefault("L", pair.L)
    meta["files"] = {"g": pg.name, "gamma": pgam.name}
    pjs.write_text(json.dumps(_jsonable(meta), indent=2, sort_keys=True))
    return pg, pgam, pjs


def load_pulse_pair(stem):
    stem = Path(stem)
    meta = json.loads(stem.with_name(stem.name + ".json").read_text())
    g = read_signal(stem.with_name(stem.name + ".g.bin"))
    gamma = read_signal(stem.with_name(stem.name + ".gamma.bin"))
    meta.pop("files", None)
    return PulsePair(g, gamma, meta)


def scattering_to_json(C):
    return {"L": int(C.L), "cells": [[int(k), int(l), float(p)] for (k, l), p in zip(C.support, C.mass)]}


def scattering_from_json(obj):
    cells = obj["cells"]
    return ScatteringMass([[c[0], c[1]] for c in cells], [c[2] for c in cells], int(obj["L"]))


def channel_to_json(h):
    return {
        "L": int(h.L),
        "cells": [[int(k), int(l)] for k, l in h.support],
        "coeffs": [[float(c.real), float(c.imag)] for c in h.coeffs],
    }


def channel_from_json(obj):
    coeffs = [complex(re, im) for re, im in obj["coeffs"]]
    return ChannelRealization(obj["cells"], coeffs, int(obj["L"]))


def dump_json(path, obj):
    Path(path).write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True))
