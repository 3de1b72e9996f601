"""
Encoding documents and tensors on the wire
==========================================

Encode a nested document with array payloads to canonical bytes,
look at what the tensor extension actually contains, and confirm
the round trip is bit-exact.
"""

import numpy as np

from nautilus.wire import TensorValue, decode, encode

# A document is plain Python: dicts with string keys, lists, ints,
# floats, strings, bools, None, bytes, and TensorValue for arrays.
image = np.arange(12, dtype=np.uint8).reshape(2, 2, 3)
doc = {
    "type": "observation",
    "step": 7,
    "data": {
        "image": TensorValue.from_numpy(image),
        "state": TensorValue.from_numpy(np.array([0.1, -0.5], dtype=np.float32)),
    },
}

payload = encode(doc)
print(f"encoded {len(payload)} bytes")
print(payload[:16].hex(" "))

# Decoding gives the same document back. Tensor payloads survive
# byte-for-byte, not merely value-for-value.
back = decode(payload)
restored = back["data"]["image"].to_numpy()
assert restored.tobytes() == image.tobytes()
assert restored.shape == (2, 2, 3)
print("image round trip: bit-exact")

# Encoding is canonical: the same document always produces the same
# bytes, so payload hashes are stable across runs and machines.
assert encode(back) == payload
print("re-encode matches original bytes")

# Rank-0 tensors are legal. A scalar tensor keeps its empty shape
# through the codec rather than being promoted to a 1-vector.
scalar = TensorValue.from_numpy(np.float64(3.5))
again = decode(encode(scalar))
assert again.shape == ()
print(f"rank-0 tensor: shape {again.to_numpy().shape}, value {float(again.to_numpy())}")
