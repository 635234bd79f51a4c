"""Non-commutative A1 T-system: closed-form solutions, networks, dimers and identity checks."""
from .connection import path_product, reflect, solve, solve_below, solve_bullet
from .errors import (AtomMissing, BelowPath, NCTSError, NonAdjacentPair, NotAdmissible, NotOnPath,
                     OutOfWindow, SingularIntermediate, SingularSample, UndefinedCommutation)
from .lattice import InitialPath, LatticePoint, fundamental_path, mutate, parse_path, projections
from .ncalgebra import Generator, NCPolynomial

__version__ = "0.1.0"

__all__ = [
    "AtomMissing", "BelowPath", "Generator", "InitialPath", "LatticePoint", "NCPolynomial", "NCTSError",
    "NonAdjacentPair", "NotAdmissible", "NotOnPath", "OutOfWindow", "SingularIntermediate", "SingularSample",
    "UndefinedCommutation", "fundamental_path", "mutate", "parse_path", "path_product", "projections",
    "reflect", "solve", "solve_below", "solve_bullet",
]
