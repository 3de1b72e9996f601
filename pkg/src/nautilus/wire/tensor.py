"""Tensor payloads carried over the wire.

A TensorValue is an n-dimensional numeric array: dtype, shape, and the raw
row-major little-endian bytes. The codec transports it as extension tag 42
with payload [dtype code: 1 byte][rank: 1 byte][shape: rank x u32 LE][data].
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import Malformed, UnsupportedDtype

# dtype name -> (wire code, bytes per element)
DTYPES: dict[str, tuple[int, int]] = {
    "f32": (0, 4),
    "f64": (1, 8),
    "i32": (2, 4),
    "i64": (3, 8),
    "u8": (4, 1),
    "boolean": (5, 1),
}

_CODE_TO_DTYPE = {code: name for name, (code, _) in DTYPES.items()}

_NUMPY_NAMES = {
    "float32": "f32",
    "float64": "f64",
    "int32": "i32",
    "int64": "i64",
    "uint8": "u8",
    "bool": "boolean",
}


def itemsize(dtype: str) -> int:
    if dtype not in DTYPES:
        raise UnsupportedDtype(f"unknown dtype {dtype!r}; expected one of {sorted(DTYPES)}")
    return DTYPES[dtype][1]


@dataclass(frozen=True)
class TensorValue:
    """Immutable n-d array value; data length must equal prod(shape) * itemsize."""

    dtype: str
    shape: tuple[int, ...]
    data: bytes

    def __post_init__(self):
        size = itemsize(self.dtype)
        object.__setattr__(self, "shape", tuple(int(d) for d in self.shape))
        for dim in self.shape:
            if dim < 0:
                raise ValueError(f"negative dimension {dim} in shape {self.shape}")
        if len(self.shape) > 255:
            raise ValueError(f"rank {len(self.shape)} exceeds the wire limit of 255")
        expected = self.element_count() * size
        if len(self.data) != expected:
            raise ValueError(
                f"data is {len(self.data)} bytes but dtype={self.dtype} shape={self.shape} needs {expected}"
            )

    def element_count(self) -> int:
        count = 1
        for dim in self.shape:
            count *= dim
        return count

    def to_payload(self) -> bytes:
        code = DTYPES[self.dtype][0]
        out = bytearray([code, len(self.shape)])
        for dim in self.shape:
            out += struct.pack("<I", dim)
        out += self.data
        return bytes(out)

    @classmethod
    def from_payload(cls, payload: bytes) -> "TensorValue":
        if len(payload) < 2:
            raise Malformed("tensor payload shorter than its 2-byte header")
        code, rank = payload[0], payload[1]
        if code not in _CODE_TO_DTYPE:
            raise Malformed(f"unknown tensor dtype code {code}")
        header_end = 2 + 4 * rank
        if len(payload) < header_end:
            raise Malformed("tensor shape section truncated")
        shape = tuple(struct.unpack_from("<I", payload, 2 + 4 * i)[0] for i in range(rank))
        data = payload[header_end:]
        try:
            return cls(dtype=_CODE_TO_DTYPE[code], shape=shape, data=data)
        except ValueError as exc:
            raise Malformed(str(exc)) from exc

    @classmethod
    def from_numpy(cls, array) -> "TensorValue":
        name = _NUMPY_NAMES.get(array.dtype.name)
        if name is None:
            raise UnsupportedDtype(f"numpy dtype {array.dtype} has no wire equivalent")
        import numpy as np

        source = np.asarray(array)
        # ascontiguousarray promotes 0-d to 1-d; keep the source rank
        ordered = np.ascontiguousarray(source)
        if ordered.dtype.byteorder == ">":
            ordered = ordered.astype(ordered.dtype.newbyteorder("<"))
        return cls(dtype=name, shape=tuple(source.shape), data=ordered.tobytes())

    def to_numpy(self):
        import numpy as np

        np_dtype = {v: k for k, v in _NUMPY_NAMES.items()}[self.dtype]
        flat = np.frombuffer(self.data, dtype=np.dtype(np_dtype).newbyteorder("<"))
        return flat.reshape(self.shape).astype(np_dtype, copy=False)

    @classmethod
    def zeros(cls, dtype: str, shape: tuple[int, ...]) -> "TensorValue":
        size = itemsize(dtype)
        count = 1
        for dim in shape:
            count *= dim
        return cls(dtype=dtype, shape=tuple(shape), data=b"\x00" * (count * size))
