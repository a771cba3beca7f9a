"""Minimal PNG support (optional image format).

Writes 8-bit truecolor PNGs and reads back the non-interlaced 8-bit RGB
subset, which covers files produced here and by common encoders. Palette,
alpha, 16-bit, and interlaced files are rejected with a clear error.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .color import RgbImage

_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _chunk(kind: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + kind
        + payload
        + struct.pack(">I", zlib.crc32(kind + payload) & 0xFFFFFFFF)
    )


def write_png(img: RgbImage, path: str | Path) -> None:
    ihdr = struct.pack(">IIBBBBB", img.width, img.height, 8, 2, 0, 0, 0)
    rows = img.pixels.astype(np.uint8)
    raw = b"".join(b"\x00" + rows[y].tobytes() for y in range(img.height))
    out = (
        _SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(raw, 6))
        + _chunk(b"IEND", b"")
    )
    Path(path).write_bytes(out)


def _unfilter(kind: int, row: np.ndarray, prev: np.ndarray, bpp: int) -> np.ndarray:
    out = row.astype(np.int64)
    if kind == 0:
        return out
    if kind == 2:
        return (out + prev) % 256
    n = len(row)
    res = np.zeros(n, dtype=np.int64)
    for i in range(n):
        a = res[i - bpp] if i >= bpp else 0
        b = prev[i]
        if kind == 1:
            res[i] = (out[i] + a) % 256
        elif kind == 3:
            res[i] = (out[i] + (a + b) // 2) % 256
        elif kind == 4:
            c = prev[i - bpp] if i >= bpp else 0
            p = a + b - c
            pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
            pred = a if pa <= pb and pa <= pc else (b if pb <= pc else c)
            res[i] = (out[i] + pred) % 256
        else:
            raise ValueError(f"unknown PNG filter type {kind}")
    return res


def read_png(path: str | Path) -> RgbImage:
    data = Path(path).read_bytes()
    if not data.startswith(_SIGNATURE):
        raise ValueError(f"{path}: not a PNG file")

    pos = len(_SIGNATURE)
    width = height = None
    idat = b""
    while pos + 8 <= len(data):
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        kind = data[pos + 4 : pos + 8]
        payload = data[pos + 8 : pos + 8 + length]
        pos += 12 + length
        if kind == b"IHDR":
            width, height, depth, color, _, _, interlace = struct.unpack(
                ">IIBBBBB", payload
            )
            if depth != 8 or color != 2 or interlace != 0:
                raise ValueError(
                    f"{path}: only 8-bit non-interlaced RGB PNGs supported"
                )
        elif kind == b"IDAT":
            idat += payload
        elif kind == b"IEND":
            break
    if width is None or not idat:
        raise ValueError(f"{path}: missing IHDR or IDAT chunk")

    raw = zlib.decompress(idat)
    stride = width * 3
    if len(raw) != height * (stride + 1):
        raise ValueError(f"{path}: decompressed size mismatch")

    pixels = np.zeros((height, stride), dtype=np.int64)
    prev = np.zeros(stride, dtype=np.int64)
    for y in range(height):
        line = raw[y * (stride + 1) : (y + 1) * (stride + 1)]
        row = np.frombuffer(line[1:], dtype=np.uint8)
        prev = _unfilter(line[0], row, prev, bpp=3)
        pixels[y] = prev
    return RgbImage(pixels=pixels.reshape(height, width, 3).astype(np.uint8))
