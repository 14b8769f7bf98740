"""Binary artifact container: magic + version + JSON header + raw arrays.

Layout::

    b"PVRC" | u32 format version | u64 header length | header JSON | array bytes

The header carries the artifact kind, caller metadata, the engine version,
and an array manifest (name, dtype, shape, byte order "C"/"F"). Readers
reject unknown magic and newer format versions.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from . import __version__
from .errors import ValidationError

MAGIC = b"PVRC"
FORMAT_VERSION = 1


def save_container(path, kind: str, meta: dict, arrays: dict,
                   orders: dict | None = None) -> None:
    orders = orders or {}
    manifest = []
    blobs = []
    for name, arr in arrays.items():
        arr = np.asarray(arr)
        order = orders.get(name, "C")
        blob = (np.asfortranarray(arr) if order == "F" else
                np.ascontiguousarray(arr)).tobytes(order=order)
        manifest.append({"name": name, "dtype": str(arr.dtype),
                         "shape": list(arr.shape), "order": order})
        blobs.append(blob)
    header = json.dumps({"kind": kind, "engine_version": __version__,
                         "meta": meta, "arrays": manifest},
                        sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


def load_container(path, expect_kind: str | None = None) -> tuple[dict, dict]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValidationError(f"{path}: not a pvisrec artifact (bad magic)")
        (version,) = struct.unpack("<I", fh.read(4))
        if version > FORMAT_VERSION:
            raise ValidationError(
                f"{path}: format version {version} is newer than supported "
                f"{FORMAT_VERSION}; upgrade the engine")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode())
        if expect_kind is not None and header.get("kind") != expect_kind:
            raise ValidationError(
                f"{path}: expected a {expect_kind!r} artifact, found "
                f"{header.get('kind')!r}")
        arrays = {}
        for spec in header["arrays"]:
            count = int(np.prod(spec["shape"])) if spec["shape"] else 1
            dtype = np.dtype(spec["dtype"])
            raw = fh.read(count * dtype.itemsize)
            arrays[spec["name"]] = np.frombuffer(raw, dtype=dtype).reshape(
                spec["shape"], order=spec["order"]).copy(order=spec["order"])
    return header, arrays
