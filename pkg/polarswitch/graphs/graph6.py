"""graph6 encoding: size header N(n), then the upper triangle column by column in 6-bit chunks + 63."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .core import Graph

HEADER = b">>graph6<<"
MAX_VERTICES = 68719476735

_WEIGHTS = np.array([32, 16, 8, 4, 2, 1], dtype=np.uint8)


class Graph6Error(ValueError):
    pass


def _encode_size(n: int) -> bytes:
    if n < 0 or n > MAX_VERTICES:
        raise Graph6Error(f"graph6 cannot encode {n} vertices")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return b"~" + bytes(((n >> s) & 63) + 63 for s in (12, 6, 0))
    return b"~~" + bytes(((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0))


def _decode_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise Graph6Error("empty graph6 input")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        width, start = 6, 2
    else:
        width, start = 3, 1
    chunk = data[start : start + width]
    if len(chunk) != width:
        raise Graph6Error("truncated graph6 size header")
    n = 0
    for byte in chunk:
        if not 63 <= byte <= 126:
            raise Graph6Error(f"invalid byte {byte} in graph6 size header")
        n = (n << 6) | (byte - 63)
    return n, start + width


def graph6_encode(graph: Graph) -> bytes:
    n = graph.n
    head = _encode_size(n)
    if n < 2:
        return head
    a = graph.adjacency_matrix(np.uint8)
    bits = np.concatenate([a[:j, j] for j in range(1, n)])
    pad = (-bits.size) % 6
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    body = bits.reshape(-1, 6) @ _WEIGHTS + 63
    return head + body.astype(np.uint8).tobytes()


def graph6_decode(data: bytes | str, labels: Optional[Sequence[str]] = None) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(HEADER):
        data = data[len(HEADER) :]
    n, offset = _decode_size(data)
    if n < 0:
        raise Graph6Error("invalid graph6 size")
    body = np.frombuffer(data[offset:], dtype=np.uint8)
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if body.size != expected:
        raise Graph6Error(f"graph6 body has {body.size} bytes, expected {expected} for n={n}")
    if body.size and (body.min() < 63 or body.max() > 126):
        raise Graph6Error("graph6 body byte out of range 63..126")
    mat = np.zeros((n, n), dtype=bool)
    if nbits:
        bits = np.unpackbits((body - 63).astype(np.uint8)[:, None], axis=1)[:, 2:].ravel()
        if bits[nbits:].any():
            raise Graph6Error("graph6 padding bits must be zero")
        pos = 0
        for j in range(1, n):
            mat[:j, j] = bits[pos : pos + j]
            pos += j
        mat |= mat.T
    return Graph.from_matrix(mat, labels)
