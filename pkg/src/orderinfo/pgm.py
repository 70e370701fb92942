"""Binary PGM (P5, maxval 255) reading and writing."""
from __future__ import annotations

import os
import re

import numpy as np

from .imaging import GrayImage

__all__ = ["read_pgm", "write_pgm", "PGMError"]

_TOKEN = re.compile(rb"(#[^\n\r]*[\n\r])|(\S+)")


class PGMError(ValueError):
    pass


def _header(data: bytes) -> tuple[list[int], int]:
    """Magic check plus width, height, maxval; returns them and the raster offset."""
    if data[:2] != b"P5":
        raise PGMError("not a binary PGM (missing P5 magic)")
    fields: list[int] = []
    pos = 2
    while len(fields) < 3:
        m = _TOKEN.search(data, pos)
        if m is None:
            raise PGMError("truncated PGM header")
        pos = m.end()
        if m.group(2) is not None:
            try:
                fields.append(int(m.group(2)))
            except ValueError as exc:
                raise PGMError(f"bad header field {m.group(2)!r}") from exc
    # exactly one whitespace byte separates maxval from the raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise PGMError("missing whitespace after maxval")
    return fields, pos + 1


def read_pgm(path: str | os.PathLike) -> GrayImage:
    with open(path, "rb") as fh:
        data = fh.read()
    (width, height, maxval), start = _header(data)
    if width < 1 or height < 1:
        raise PGMError("image dimensions must be positive")
    if maxval != 255:
        raise PGMError(f"only maxval 255 is supported, got {maxval}")
    raster = data[start:start + width * height]
    if len(raster) != width * height:
        raise PGMError("raster shorter than the header promises")
    return GrayImage(np.frombuffer(raster, dtype=np.uint8).reshape(height, width))


def write_pgm(path: str | os.PathLike, img: GrayImage) -> None:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(img.pixels).tobytes())
