"""The flat 2x2 connection: U/V chips, ordered path products and the solver."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotOnPath, OutOfWindow
from .lattice import InitialPath, projections
from .ncalgebra import Generator, NCPolynomial

_ONE = NCPolynomial.one()
_ZERO = NCPolynomial.zero()


def _mono(*letters: Generator) -> NCPolynomial:
    return NCPolynomial.monomial(letters)


@dataclass(frozen=True)
class ConnectionMatrix:
    """2x2 matrix with NCPolynomial entries; ``entry(i, j)`` is 1-based."""

    rows: tuple[tuple[NCPolynomial, NCPolynomial], tuple[NCPolynomial, NCPolynomial]]

    @classmethod
    def identity(cls) -> ConnectionMatrix:
        return cls(((_ONE, _ZERO), (_ZERO, _ONE)))

    def entry(self, i: int, j: int) -> NCPolynomial:
        return self.rows[i - 1][j - 1]

    def __mul__(self, other: ConnectionMatrix) -> ConnectionMatrix:
        a, b = self.rows, other.rows
        return ConnectionMatrix(tuple(
            tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)) for i in range(2)
        ))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConnectionMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def nonnegative(self) -> bool:
        return all(e.has_nonnegative_coefficients() for row in self.rows for e in row)


def chip_V(a: int, b: int) -> ConnectionMatrix:
    """V(a,b) = [[a b^-1, (b*)^-1], [0, 1]] for atom labels a, b."""
    return ConnectionMatrix((
        (_mono(Generator(a), Generator(b, False, -1)), _mono(Generator(b, True, -1))),
        (_ZERO, _ONE),
    ))


def chip_U(b: int, c: int) -> ConnectionMatrix:
    """U(b,c) = [[1, 0], [c^-1, b* (c*)^-1]] for atom labels b, c."""
    return ConnectionMatrix((
        (_ONE, _ZERO),
        (_mono(Generator(c, False, -1)), _mono(Generator(b, True, 1), Generator(c, True, -1))),
    ))


def chip(path: InitialPath, j: int) -> ConnectionMatrix:
    """Chip for the step j -> j+1: U on an up step, V on a down step."""
    a, b = path.label(j), path.label(j + 1)
    return chip_U(a, b) if path.step(j) == 1 else chip_V(a, b)


def path_product(path: InitialPath, x: int, y: int) -> ConnectionMatrix:
    """M(x, y): left-to-right product of the chips between sites x and y."""
    if x > y:
        raise ValueError("need x <= y")
    if not (path.contains(x) and path.contains(y)):
        raise OutOfWindow(f"[{x},{y}] not inside [{path.lo},{path.hi}]")
    m = ConnectionMatrix.identity()
    for j in range(x, y):
        m = m * chip(path, j)
    return m


def solve(path: InitialPath, p: tuple[int, int]) -> NCPolynomial:
    """T_{j,k} = (M(j0, j1))_{11} t_{j1} for a point weakly above the path."""
    j0, j1 = projections(path, p)
    top_left = _first_row_product(path, j0, j1)
    return top_left * NCPolynomial.atom(path.label(j1))


def _first_row_product(path: InitialPath, j0: int, j1: int) -> NCPolynomial:
    # only row 1 of the running product is needed for the (1,1) entry
    r1, r2 = _ONE, _ZERO
    for j in range(j0, j1):
        c = chip(path, j).rows
        r1, r2 = r1 * c[0][0] + r2 * c[1][0], r1 * c[0][1] + r2 * c[1][1]
    return r1


def solve_bullet(path: InitialPath, p: tuple[int, int]) -> NCPolynomial:
    """T*_{j,k}: the involution of :func:`solve`."""
    return solve(path, p).involution()


def reflect(path: InitialPath, a: int, b: int, require_vertex: bool = True) -> InitialPath:
    """Reflected initial data p_j = b - m_{a-j} carrying the atoms t_{a-j}.

    The reflection is a symmetry of the system for any (a, b) with a + b even;
    by default (a, b) must be a vertex, which is the case used to solve below
    the path.
    """
    if (a + b) % 2:
        raise ValueError("a + b must be even")
    if require_vertex and (not path.contains(a) or path.height(a) != b):
        raise NotOnPath(f"({a},{b}) is not a vertex of the path")
    lo = a - path.hi
    heights = tuple(b - path.height(a - j) for j in range(lo, a - path.lo + 1))
    labels = tuple(path.label(a - j) for j in range(lo, a - path.lo + 1))
    stale = frozenset(a - s for s in path.stale)
    return InitialPath(lo, heights, labels, stale)


def solve_below(path: InitialPath, p: tuple[int, int]) -> NCPolynomial:
    """T_{j,k} for a point weakly below the path, via reflection at (j, m_j)."""
    j, k = p
    a, b = j, path.height(j)
    return solve(reflect(path, a, b), (a - j, b - k))
