"""Exception types shared by all tcpkit modules."""


class TcpkitError(Exception):
    """Base class for all tcpkit errors."""


class DuplicateEntryError(TcpkitError):
    """The same index tuple was supplied more than once."""


class BadIndexError(TcpkitError):
    """An index tuple has the wrong length or an out-of-range component."""


class BadValueError(TcpkitError):
    """A supplied numeric value is non-finite or otherwise unusable."""


class DimMismatchError(TcpkitError):
    """A vector's length does not match the tensor dimension."""


class BadIndexSetError(TcpkitError):
    """An index set is empty or contains out-of-range indices."""


class BadToleranceError(TcpkitError):
    """A tolerance that must be positive is not."""


class BadEigenvectorError(TcpkitError):
    """An eigenvector candidate is the zero vector."""


class TooLargeError(TcpkitError):
    """The problem dimension exceeds the combinatorial-enumeration limit."""
