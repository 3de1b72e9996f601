"""Shared hypothesis strategies for wire-format values."""

from __future__ import annotations

from hypothesis import strategies as st

from nautilus.wire import DTYPES, TensorValue

_ITEMSIZE = {name: size for name, (_, size) in DTYPES.items()}


@st.composite
def tensor_values(draw, max_rank: int = 4, max_dim: int = 4):
    dtype = draw(st.sampled_from(sorted(DTYPES)))
    rank = draw(st.integers(min_value=0, max_value=max_rank))
    shape = tuple(draw(st.integers(min_value=0, max_value=max_dim)) for _ in range(rank))
    count = 1
    for dim in shape:
        count *= dim
    data = draw(st.binary(min_size=count * _ITEMSIZE[dtype], max_size=count * _ITEMSIZE[dtype]))
    return TensorValue(dtype=dtype, shape=shape, data=data)


def scalar_values():
    return st.one_of(
        st.none(),
        st.booleans(),
        st.integers(min_value=-(2**63), max_value=2**63 - 1),
        st.floats(allow_nan=True, allow_infinity=True),
        st.text(max_size=40),
        st.binary(max_size=40),
        tensor_values(),
    )


def wire_values(max_leaves: int = 20):
    return st.recursive(
        scalar_values(),
        lambda children: st.one_of(
            st.lists(children, max_size=5),
            st.dictionaries(st.text(max_size=8), children, max_size=5),
        ),
        max_leaves=max_leaves,
    )
