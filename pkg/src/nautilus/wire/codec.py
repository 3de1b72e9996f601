"""Binary value codec.

MessagePack-compatible at the container level (nil, booleans, 64-bit signed
integers, 64-bit floats, UTF-8 strings, binary blobs, arrays, string-keyed
maps) plus one application extension, tag 42, carrying TensorValue. Byte
layout is documented in docs/wire-format.md; encoding is canonical so the
same value always produces the same bytes:

  * integers use the smallest format that fits the value
  * floats are always written as 64-bit (0xcb), never 32-bit
  * str/bin/array/map headers use the smallest length format
  * map keys keep insertion order; the encoder never sorts
  * extension containers use fixext1/2/4/8/16 when the payload length is
    exactly that size, else the smallest of ext8/ext16/ext32

Pure functions, no shared state; safe from any thread.
"""

from __future__ import annotations

import struct

from .errors import DepthExceeded, Malformed, UnknownExtension, UnsupportedType
from .tensor import TensorValue

DEFAULT_DEPTH_LIMIT = 32
TENSOR_TAG = 42

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


def encode(value, *, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> bytes:
    """Serialize one wire value to its canonical byte document."""
    out = bytearray()
    _encode_into(value, out, 1, depth_limit)
    return bytes(out)


def _encode_into(value, out: bytearray, depth: int, limit: int) -> None:
    if depth > limit:
        raise DepthExceeded(f"nesting depth {depth} exceeds limit {limit}")

    if value is None:
        out.append(0xC0)
    elif value is True:
        out.append(0xC3)
    elif value is False:
        out.append(0xC2)
    elif isinstance(value, TensorValue):
        _encode_ext(TENSOR_TAG, value.to_payload(), out)
    elif isinstance(value, bool):  # numpy.bool_ etc. never reach here; plain bool handled above
        out.append(0xC3 if value else 0xC2)
    elif isinstance(value, int):
        _encode_int(value, out)
    elif isinstance(value, float):
        out.append(0xCB)
        out += struct.pack(">d", value)
    elif isinstance(value, str):
        _encode_str(value, out)
    elif isinstance(value, (bytes, bytearray, memoryview)):
        _encode_bin(bytes(value), out)
    elif isinstance(value, (list, tuple)):
        _encode_header(len(value), out, fix_max=15, fix_base=0x90, wide=(0xDC, 0xDD))
        for item in value:
            _encode_into(item, out, depth + 1, limit)
    elif isinstance(value, dict):
        _encode_header(len(value), out, fix_max=15, fix_base=0x80, wide=(0xDE, 0xDF))
        for key, item in value.items():
            if not isinstance(key, str):
                raise UnsupportedType(f"map keys must be str, got {type(key).__name__}")
            _encode_str(key, out)
            _encode_into(item, out, depth + 1, limit)
    else:
        raise UnsupportedType(f"{type(value).__name__} is outside the wire value model")


def _encode_int(value: int, out: bytearray) -> None:
    if value < _INT64_MIN or value > _INT64_MAX:
        raise UnsupportedType(f"integer {value} outside signed 64-bit range")
    if value >= 0:
        if value <= 0x7F:
            out.append(value)
        elif value <= 0xFF:
            out += struct.pack(">BB", 0xCC, value)
        elif value <= 0xFFFF:
            out += struct.pack(">BH", 0xCD, value)
        elif value <= 0xFFFFFFFF:
            out += struct.pack(">BI", 0xCE, value)
        else:
            out += struct.pack(">BQ", 0xCF, value)
    else:
        if value >= -32:
            out.append(value & 0xFF)
        elif value >= -128:
            out += struct.pack(">Bb", 0xD0, value)
        elif value >= -32768:
            out += struct.pack(">Bh", 0xD1, value)
        elif value >= -(2**31):
            out += struct.pack(">Bi", 0xD2, value)
        else:
            out += struct.pack(">Bq", 0xD3, value)


def _encode_str(value: str, out: bytearray) -> None:
    raw = value.encode("utf-8")
    n = len(raw)
    if n <= 31:
        out.append(0xA0 | n)
    elif n <= 0xFF:
        out += struct.pack(">BB", 0xD9, n)
    elif n <= 0xFFFF:
        out += struct.pack(">BH", 0xDA, n)
    else:
        out += struct.pack(">BI", 0xDB, n)
    out += raw


def _encode_bin(value: bytes, out: bytearray) -> None:
    n = len(value)
    if n <= 0xFF:
        out += struct.pack(">BB", 0xC4, n)
    elif n <= 0xFFFF:
        out += struct.pack(">BH", 0xC5, n)
    else:
        out += struct.pack(">BI", 0xC6, n)
    out += value


def _encode_header(n: int, out: bytearray, *, fix_max: int, fix_base: int, wide: tuple[int, int]) -> None:
    if n <= fix_max:
        out.append(fix_base | n)
    elif n <= 0xFFFF:
        out += struct.pack(">BH", wide[0], n)
    else:
        out += struct.pack(">BI", wide[1], n)


_FIXEXT = {1: 0xD4, 2: 0xD5, 4: 0xD6, 8: 0xD7, 16: 0xD8}


def _encode_ext(tag: int, payload: bytes, out: bytearray) -> None:
    n = len(payload)
    if n in _FIXEXT:
        out += struct.pack(">Bb", _FIXEXT[n], tag)
    elif n <= 0xFF:
        out += struct.pack(">BBb", 0xC7, n, tag)
    elif n <= 0xFFFF:
        out += struct.pack(">BHb", 0xC8, n, tag)
    else:
        out += struct.pack(">BIb", 0xC9, n, tag)
    out += payload


def decode(data, *, depth_limit: int = DEFAULT_DEPTH_LIMIT):
    """Parse exactly one document; trailing bytes are an error."""
    reader = _Reader(bytes(data), depth_limit)
    value = reader.read_value(1)
    if reader.pos != len(reader.buf):
        raise Malformed(f"{len(reader.buf) - reader.pos} trailing bytes after the document")
    return value


class _Reader:
    def __init__(self, buf: bytes, depth_limit: int):
        self.buf = buf
        self.pos = 0
        self.depth_limit = depth_limit

    def _need(self, n: int) -> bytes:
        end = self.pos + n
        if end > len(self.buf):
            raise Malformed(f"truncated document: wanted {n} bytes at offset {self.pos}")
        chunk = self.buf[self.pos : end]
        self.pos = end
        return chunk

    def _unpack(self, fmt: str):
        return struct.unpack(fmt, self._need(struct.calcsize(fmt)))[0]

    def read_value(self, depth: int):
        if depth > self.depth_limit:
            raise DepthExceeded(f"nesting depth {depth} exceeds limit {self.depth_limit}")
        lead = self._unpack(">B")

        if lead <= 0x7F:
            return lead
        if lead >= 0xE0:
            return lead - 0x100
        if 0x80 <= lead <= 0x8F:
            return self._read_map(lead & 0x0F, depth)
        if 0x90 <= lead <= 0x9F:
            return self._read_array(lead & 0x0F, depth)
        if 0xA0 <= lead <= 0xBF:
            return self._read_str(lead & 0x1F)

        handler = _LEAD_HANDLERS.get(lead)
        if handler is None:
            raise Malformed(f"unassigned lead byte 0x{lead:02x}")
        return handler(self, depth)

    def _read_str(self, n: int) -> str:
        raw = self._need(n)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise Malformed(f"invalid UTF-8 in string: {exc}") from exc

    def _read_array(self, n: int, depth: int) -> list:
        return [self.read_value(depth + 1) for _ in range(n)]

    def _read_map(self, n: int, depth: int) -> dict:
        out: dict = {}
        for _ in range(n):
            key = self.read_value(depth + 1)
            if not isinstance(key, str):
                raise Malformed(f"map key must be a string, got {type(key).__name__}")
            if key in out:
                raise Malformed(f"duplicate map key {key!r}")
            out[key] = self.read_value(depth + 1)
        return out

    def _read_ext(self, n: int):
        tag = self._unpack(">b")
        payload = self._need(n)
        if tag != TENSOR_TAG:
            raise UnknownExtension(f"extension tag {tag} is not registered (only {TENSOR_TAG})")
        return TensorValue.from_payload(payload)

    def _read_uint64(self):
        value = self._unpack(">Q")
        if value > _INT64_MAX:
            # conforming encoders never emit these; the value model is signed 64-bit
            raise Malformed(f"unsigned integer {value} outside the signed 64-bit value model")
        return value


_LEAD_HANDLERS = {
    0xC0: lambda r, d: None,
    0xC2: lambda r, d: False,
    0xC3: lambda r, d: True,
    0xC4: lambda r, d: bytes(r._need(r._unpack(">B"))),
    0xC5: lambda r, d: bytes(r._need(r._unpack(">H"))),
    0xC6: lambda r, d: bytes(r._need(r._unpack(">I"))),
    0xC7: lambda r, d: r._read_ext(r._unpack(">B")),
    0xC8: lambda r, d: r._read_ext(r._unpack(">H")),
    0xC9: lambda r, d: r._read_ext(r._unpack(">I")),
    0xCA: lambda r, d: float(r._unpack(">f")),
    0xCB: lambda r, d: float(r._unpack(">d")),
    0xCC: lambda r, d: r._unpack(">B"),
    0xCD: lambda r, d: r._unpack(">H"),
    0xCE: lambda r, d: r._unpack(">I"),
    0xCF: lambda r, d: r._read_uint64(),
    0xD0: lambda r, d: r._unpack(">b"),
    0xD1: lambda r, d: r._unpack(">h"),
    0xD2: lambda r, d: r._unpack(">i"),
    0xD3: lambda r, d: r._unpack(">q"),
    0xD4: lambda r, d: r._read_ext(1),
    0xD5: lambda r, d: r._read_ext(2),
    0xD6: lambda r, d: r._read_ext(4),
    0xD7: lambda r, d: r._read_ext(8),
    0xD8: lambda r, d: r._read_ext(16),
    0xD9: lambda r, d: r._read_str(r._unpack(">B")),
    0xDA: lambda r, d: r._read_str(r._unpack(">H")),
    0xDB: lambda r, d: r._read_str(r._unpack(">I")),
    0xDC: lambda r, d: r._read_array(r._unpack(">H"), d),
    0xDD: lambda r, d: r._read_array(r._unpack(">I"), d),
    0xDE: lambda r, d: r._read_map(r._unpack(">H"), d),
    0xDF: lambda r, d: r._read_map(r._unpack(">I"), d),
}
