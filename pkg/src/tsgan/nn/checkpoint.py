"""Binary checkpoint files: named float32 tensors behind a TSG1 magic.

Record layout, little-endian throughout:

    magic   4 bytes   b"TSG1"
    repeat:
        name_len  u64
        name      utf-8 bytes
        rank      u64
        extents   rank * u64
        data      prod(extents) * f32

Records are written in sorted name order so identical tensor sets always
serialize to identical bytes.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"TSG1"


class CheckpointError(RuntimeError):
    pass


def save_tensors(path, tensors: dict[str, np.ndarray]) -> None:
    chunks = [MAGIC]
    for name in sorted(tensors):
        # np.require keeps 0-d arrays 0-d (ascontiguousarray would not)
        arr = np.require(np.asarray(tensors[name], dtype="<f4"), requirements=["C"])
        encoded = name.encode("utf-8")
        chunks.append(struct.pack("<Q", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<Q", arr.ndim))
        chunks.append(struct.pack(f"<{arr.ndim}Q", *arr.shape) if arr.ndim else b"")
        chunks.append(arr.tobytes())
    Path(path).write_bytes(b"".join(chunks))


def load_tensors(path) -> dict[str, np.ndarray]:
    blob = Path(path).read_bytes()
    if blob[:4] != MAGIC:
        raise CheckpointError(f"{path}: bad magic {blob[:4]!r}")
    out: dict[str, np.ndarray] = {}
    off = 4
    total = len(blob)
    while off < total:
        (name_len,) = struct.unpack_from("<Q", blob, off)
        off += 8
        name = blob[off : off + name_len].decode("utf-8")
        off += name_len
        (rank,) = struct.unpack_from("<Q", blob, off)
        off += 8
        extents = struct.unpack_from(f"<{rank}Q", blob, off) if rank else ()
        off += 8 * rank
        count = int(np.prod(extents)) if extents else 1
        nbytes = 4 * count
        if off + nbytes > total:
            raise CheckpointError(f"{path}: truncated data for '{name}'")
        arr = np.frombuffer(blob, dtype="<f4", count=count, offset=off).reshape(extents)
        out[name] = arr.astype(np.float32)
        off += nbytes
    return out
