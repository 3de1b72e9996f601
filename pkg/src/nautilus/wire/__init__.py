"""Binary wire codec with the tensor extension."""

from .codec import DEFAULT_DEPTH_LIMIT, TENSOR_TAG, decode, encode
from .errors import (
    DepthExceeded,
    Malformed,
    UnknownExtension,
    UnsupportedDtype,
    UnsupportedType,
    WireCodecError,
)
from .tensor import DTYPES, TensorValue, itemsize

__all__ = [
    "DEFAULT_DEPTH_LIMIT",
    "DTYPES",
    "DepthExceeded",
    "Malformed",
    "TENSOR_TAG",
    "TensorValue",
    "UnknownExtension",
    "UnsupportedDtype",
    "UnsupportedType",
    "WireCodecError",
    "decode",
    "encode",
    "itemsize",
]
