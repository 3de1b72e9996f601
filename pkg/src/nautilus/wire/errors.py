"""Codec error taxonomy."""


class WireCodecError(Exception):
    """Base class for every codec failure."""


class Malformed(WireCodecError):
    """Input bytes are not one well-formed document."""


class DepthExceeded(WireCodecError):
    """Container nesting exceeds the configured limit."""


class UnknownExtension(WireCodecError):
    """Document carries an extension tag this codec does not register."""


class UnsupportedDtype(WireCodecError):
    """Tensor dtype outside the six supported codes."""


class UnsupportedType(WireCodecError):
    """Python value outside the wire value model."""
