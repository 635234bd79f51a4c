"""Initial data paths, lattice points, projections and mutations."""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import BelowPath, NotAdmissible, OutOfWindow
from .ncalgebra import Generator


class LatticePoint(NamedTuple):
    j: int
    k: int


def point(j: int, k: int) -> LatticePoint:
    if (j + k) % 2:
        raise ValueError(f"({j},{k}) has odd parity; T is only defined for j+k even")
    return LatticePoint(j, k)


@dataclass(frozen=True)
class InitialPath:
    """A finite window ``[lo, hi]`` of an admissible path with its atom labels.

    ``heights[i]`` is m_j for site j = lo + i.  ``labels[i]`` is the atom index
    assigned at that site (the site itself for fresh paths, reversed after a
    reflection).  ``stale`` lists sites moved by :func:`mutate`.
    """

    lo: int
    heights: tuple[int, ...]
    labels: tuple[int, ...] | None = None
    stale: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "heights", tuple(int(h) for h in self.heights))
        if not self.heights:
            raise ValueError("a path needs at least one site")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(self.lo, self.lo + len(self.heights))))
        else:
            object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if len(self.labels) != len(self.heights):
            raise ValueError("labels and heights differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("atom labels must be distinct")
        for i, m in enumerate(self.heights):
            if (self.lo + i + m) % 2:
                raise NotAdmissible(f"j + m_j is odd at j={self.lo + i}")
        for i in range(len(self.heights) - 1):
            if abs(self.heights[i + 1] - self.heights[i]) != 1:
                raise NotAdmissible(f"|m_(j+1) - m_j| != 1 at j={self.lo + i}")
        object.__setattr__(self, "_site", {lab: self.lo + i for i, lab in enumerate(self.labels)})

    @property
    def hi(self) -> int:
        return self.lo + len(self.heights) - 1

    @property
    def sites(self) -> range:
        return range(self.lo, self.hi + 1)

    def contains(self, j: int) -> bool:
        return self.lo <= j <= self.hi

    def _check(self, j: int) -> int:
        if not self.contains(j):
            raise OutOfWindow(f"site {j} outside window [{self.lo},{self.hi}]")
        return j - self.lo

    def height(self, j: int) -> int:
        return self.heights[self._check(j)]

    def label(self, j: int) -> int:
        return self.labels[self._check(j)]

    def has_label(self, label: int) -> bool:
        return label in self._site

    def site_of(self, label: int) -> int:
        try:
            return self._site[label]
        except KeyError:
            raise OutOfWindow(f"atom label {label} is not assigned on the path") from None

    @property
    def site_key(self) -> dict[int, int]:
        """Label -> site; the ordering used for well-orderedness."""
        return dict(self._site)

    def step(self, j: int) -> int:
        """+1 for an up step j -> j+1, -1 for a down step."""
        return self.height(j + 1) - self.height(j)

    def atoms(self, j: int) -> tuple[Generator, Generator]:
        lab = self.label(j)
        return Generator(lab, False, 1), Generator(lab, True, 1)

    def vertices(self) -> list[LatticePoint]:
        return [LatticePoint(j, self.height(j)) for j in self.sites]

    # -- text / json ------------------------------------------------------
    def spec(self) -> str:
        return f"j0={self.lo}; heights=" + ",".join(str(m) for m in self.heights)

    def to_json_obj(self) -> dict:
        obj = {"j0": self.lo, "heights": list(self.heights)}
        if self.labels != tuple(self.sites):
            obj["labels"] = list(self.labels)
        if self.stale:
            obj["stale"] = sorted(self.stale)
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> InitialPath:
        return cls(obj["j0"], tuple(obj["heights"]), tuple(obj["labels"]) if "labels" in obj else None,
                   frozenset(obj.get("stale", ())))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


_FLAT = re.compile(r"\s*flat\s*:\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*")
_EXPLICIT = re.compile(r"\s*j0\s*=\s*(-?\d+)\s*;\s*heights\s*=\s*([-\d,\s]+)")


def parse_path(text: str) -> InitialPath:
    """Parse ``flat:<lo>..<hi>``, ``j0=<int>; heights=<list>`` or the JSON record."""
    m = _FLAT.fullmatch(text)
    if m:
        return fundamental_path(int(m[1]), int(m[2]))
    m = _EXPLICIT.fullmatch(text)
    if m:
        heights = tuple(int(x) for x in m[2].split(",") if x.strip())
        return InitialPath(int(m[1]), heights)
    if text.lstrip().startswith("{"):
        return InitialPath.from_json_obj(json.loads(text))
    raise ValueError(f"unrecognised path spec {text!r}")


def fundamental_path(lo: int, hi: int) -> InitialPath:
    """The flat path m_j = j mod 2 on [lo, hi]."""
    if lo >= hi:
        raise ValueError("need lo < hi")
    return InitialPath(lo, tuple(j % 2 for j in range(lo, hi + 1)))


def random_path(rng: random.Random, lo: int, width: int) -> InitialPath:
    m = [rng.choice((0, 2)) + (lo % 2)]
    for _ in range(width - 1):
        m.append(m[-1] + rng.choice((1, -1)))
    return InitialPath(lo, tuple(m))


def projections(path: InitialPath, p: tuple[int, int]) -> tuple[int, int]:
    """Lower/upper projections (j0, j1) of a point weakly above the path.

    j0 is the largest site l with m_l - l = k - j, j1 the smallest with
    m_l + l = k + j.
    """
    j, k = p
    if (j + k) % 2:
        raise ValueError(f"({j},{k}) has odd parity")
    m_j = path.height(j)
    if k < m_j:
        raise BelowPath(f"({j},{k}) lies below the path (m_{j}={m_j})")
    # m_l - l is non-increasing and m_l + l non-decreasing along the path
    j0 = j
    while path.height(j0) - j0 != k - j:
        j0 -= 1
        if j0 < path.lo:
            raise OutOfWindow(f"lower projection of ({j},{k}) leaves the window")
    j1 = j
    while path.height(j1) + j1 != k + j:
        j1 += 1
        if j1 > path.hi:
            raise OutOfWindow(f"upper projection of ({j},{k}) leaves the window")
    return j0, j1


def points_above(path: InitialPath, k_max: int | None = None, strict: bool = False) -> list[LatticePoint]:
    """All points weakly (or strictly) above the path whose projections fit the window."""
    out = []
    top = k_max if k_max is not None else max(path.heights) + len(path.heights)
    for j in path.sites:
        for k in range(path.height(j) + (2 if strict else 0), top + 1, 2):
            try:
                projections(path, (j, k))
            except OutOfWindow:
                break
            out.append(LatticePoint(j, k))
    return out


def mutate(path: InitialPath, site: int, direction: int) -> InitialPath:
    """Flip m_site by 2*direction; the value at ``site`` becomes stale."""
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    i = path._check(site)
    heights = list(path.heights)
    heights[i] += 2 * direction
    for nb in (i - 1, i + 1):
        if 0 <= nb < len(heights) and abs(heights[nb] - heights[i]) != 1:
            raise NotAdmissible(f"mutating site {site} by {direction:+d} breaks the zigzag condition")
    return InitialPath(path.lo, tuple(heights), path.labels, path.stale | {site})


def classical_mutation_value(t_prev, t_here, t_next):
    """Commutative exchange t' = (1 + t_prev t_next) / t_here."""
    if t_here == 0:
        raise ZeroDivisionError("t_here must be non-zero")
    return Fraction(1 + t_prev * t_next) / Fraction(t_here)
