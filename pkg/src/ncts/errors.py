"""Exception types raised across the package."""


class NCTSError(Exception):
    """Base class for all errors raised by :mod:`ncts`."""


class NonAdjacentPair(NCTSError):
    """A step relation was requested between sites that are not neighbours."""


class OutOfWindow(NCTSError):
    """A site or projection falls outside the finite data window of a path."""


class BelowPath(NCTSError):
    """A lattice point lies strictly below the initial data path."""


class NotAdmissible(NCTSError):
    """A path operation would break the zigzag condition |m_{j+1} - m_j| = 1."""


class NotOnPath(NCTSError):
    """A reflection centre is not a vertex of the path."""


class SingularSample(NCTSError):
    """Random sampling failed to produce invertible matrices."""


class SingularIntermediate(NCTSError):
    """A matrix that must be inverted turned out singular."""


class AtomMissing(NCTSError):
    """An atom used by a polynomial has no value in the scene."""


class UndefinedCommutation(NCTSError):
    """No q-commutation rule is known for a pair of quantum letters."""
