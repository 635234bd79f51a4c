"""NC dimers on 4-6 ladders.

A ladder is a 2-row grid with columns 1..M.  Vertices are (row, col) with row
1 on top; (2, 1), the lower-left corner, is black.  Edges are ``("rung", c)``
joining (1,c)-(2,c) and ``("top", c)`` / ``("bottom", c)`` joining column c to
c+1.  A hexagonal face is two grid cells whose shared rung is removed.

Faces are listed left to right: a left boundary face, one square or hexagon
per interior site of the path section, and a right boundary face.  A face is
black or white according to its lower-left vertex; black faces sit right of
a V chip, white faces right of a U chip.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import OutOfWindow
from .lattice import InitialPath
from .ncalgebra import Generator, NCPolynomial, Word, concat, reduce_word, word_to_str
from .network import NetworkGraph, NetworkPath, build_network
from .network import enumerate_paths as enumerate_network_paths

Edge = tuple[str, int]


@dataclass(frozen=True)
class Face:
    site: int
    label: int
    kind: str  # boundary-left | square | hexagon | boundary-right
    color: str  # black | white
    left_col: int  # 0 for the left boundary face
    right_col: int  # M + 1 for the right boundary face


@dataclass(frozen=True)
class LadderGraph:
    columns: int
    removed_rungs: frozenset[int]
    faces: tuple[Face, ...]

    @property
    def face_vars(self) -> dict[int, tuple[Generator, Generator]]:
        return {f.site: (Generator(f.label), Generator(f.label, True)) for f in self.faces}

    def edges(self) -> list[Edge]:
        out: list[Edge] = [("rung", c) for c in range(1, self.columns + 1) if c not in self.removed_rungs]
        for c in range(1, self.columns):
            out += [("top", c), ("bottom", c)]
        return sorted(out, key=lambda e: (e[1], e[0]))

    def vertices(self) -> list[tuple[int, int]]:
        return [(r, c) for c in range(1, self.columns + 1) for r in (1, 2)]

    @staticmethod
    def endpoints(e: Edge) -> tuple[tuple[int, int], tuple[int, int]]:
        kind, c = e
        if kind == "rung":
            return (1, c), (2, c)
        r = 1 if kind == "top" else 2
        return (r, c), (r, c + 1)

    @staticmethod
    def color(v: tuple[int, int]) -> str:
        return "black" if (v[0] + v[1]) % 2 == 1 else "white"


@dataclass(frozen=True)
class Matching:
    edges: frozenset[Edge]
    weight: Word


def build_ladder(path: InitialPath, j0: int, j1: int) -> LadderGraph:
    """Generalized ladder of the section [j0, j1].

    The section must start with a down step and end with an up step, which is
    always the case for the projection interval of a point above the path.
    """
    if j0 >= j1:
        raise ValueError("need j0 < j1")
    if not (path.contains(j0) and path.contains(j1)):
        raise OutOfWindow(f"[{j0},{j1}] not inside [{path.lo},{path.hi}]")
    if path.step(j0) != -1 or path.step(j1 - 1) != 1:
        raise ValueError("the section must start with a down step and end with an up step")
    chip_col = {j0: 1}  # column of the chip for step j -> j+1
    removed = set()
    faces = [Face(j0, path.label(j0), "boundary-left", "white", 0, 1)]
    for j in range(j0 + 1, j1):
        left = chip_col[j - 1]
        same = path.step(j - 1) == path.step(j)
        if same:
            removed.add(left + 1)
            chip_col[j] = left + 2
        else:
            chip_col[j] = left + 1
        color = LadderGraph.color((2, left))
        faces.append(Face(j, path.label(j), "hexagon" if same else "square", color, left, chip_col[j]))
    m = chip_col[j1 - 1]
    faces.append(Face(j1, path.label(j1), "boundary-right", LadderGraph.color((2, m)), m, m + 1))
    return LadderGraph(m, frozenset(removed), tuple(faces))


def _transfer(g: LadderGraph) -> Iterator[frozenset[Edge]]:
    # state: which vertices of the current column are already covered from the left
    def rec(col: int, covered: tuple[bool, bool], chosen: list[Edge]) -> Iterator[frozenset[Edge]]:
        if col > g.columns:
            if covered == (False, False):
                yield frozenset(chosen)
            return
        top, bot = covered
        if not top and not bot and col not in g.removed_rungs:
            yield from rec(col + 1, (False, False), chosen + [("rung", col)])
        if col < g.columns:
            extra = ([] if top else [("top", col)]) + ([] if bot else [("bottom", col)])
            if extra:
                yield from rec(col + 1, (not top, not bot), chosen + extra)
        if top and bot:
            yield from rec(col + 1, (False, False), chosen)

    yield from rec(1, (False, False), [])


def count_matchings(g: LadderGraph) -> int:
    """Number of perfect matchings by the same column transfer, counts only."""
    states = {(False, False): 1}
    for col in range(1, g.columns + 1):
        nxt: dict[tuple[bool, bool], int] = {}
        for (top, bot), n in states.items():
            if top and bot:
                nxt[(False, False)] = nxt.get((False, False), 0) + n
                continue
            if not top and not bot and col not in g.removed_rungs:
                nxt[(False, False)] = nxt.get((False, False), 0) + n
            if col < g.columns:
                s = (not top, not bot)
                nxt[s] = nxt.get(s, 0) + n
        states = nxt
    return states.get((False, False), 0)


# -- face weights -------------------------------------------------------------------
# pattern = occupied edges on the boundary of the face, by role.
# value = (bullet, exponent) of the face atom, or None for weight 1.
# Obtained by pushing every network path through matching_from_network_path
# on small sections and reading off the letters of each face; the tests
# rebuild this table from scratch and compare.
FACE_WEIGHTS: dict[tuple[str, str], dict[frozenset[str], tuple[bool, int] | None]] = {
    ("square", "black"): {
        frozenset({"T", "B"}): (False, -1),
        frozenset({"L", "R"}): (True, -1),
        frozenset(): (True, 1),
        frozenset({"L"}): None,
        frozenset({"R"}): None,
    },
    ("square", "white"): {
        frozenset({"T", "B"}): (True, -1),
        frozenset({"L", "R"}): (False, -1),
        frozenset(): (False, 1),
        frozenset({"L"}): None,
        frozenset({"R"}): None,
    },
    ("hexagon", "black"): {
        frozenset({"TL", "BL", "R"}): (False, -1),
        frozenset({"L", "TR", "BR"}): (True, -1),
        frozenset({"TL", "BL"}): None,
        frozenset({"TR", "BR"}): None,
    },
    ("hexagon", "white"): {
        frozenset({"TL", "BL", "R"}): (True, -1),
        frozenset({"L", "TR", "BR"}): (False, -1),
        frozenset({"TL", "BL"}): None,
        frozenset({"TR", "BR"}): None,
    },
}


def face_pattern(g: LadderGraph, face: Face, edges: frozenset[Edge]) -> frozenset[str]:
    """Roles of the occupied edges bounding ``face``."""
    l, r = face.left_col, face.right_col
    if face.kind == "boundary-left":
        return frozenset({"R"}) if ("rung", 1) in edges else frozenset()
    if face.kind == "boundary-right":
        return frozenset({"L"}) if ("rung", g.columns) in edges else frozenset()
    roles = {"L": ("rung", l), "R": ("rung", r)}
    if face.kind == "square":
        roles |= {"T": ("top", l), "B": ("bottom", l)}
    else:
        roles |= {"TL": ("top", l), "TR": ("top", l + 1), "BL": ("bottom", l), "BR": ("bottom", l + 1)}
    return frozenset(name for name, e in roles.items() if e in edges)


def face_weight(g: LadderGraph, face: Face, edges: frozenset[Edge]) -> Word:
    pattern = face_pattern(g, face, edges)
    if face.kind.startswith("boundary"):
        # t^(1 - D), D = number of dimers touching the boundary face
        return () if pattern else (Generator(face.label),)
    table = FACE_WEIGHTS[(face.kind, face.color)]
    if pattern not in table:
        raise ValueError(f"dimer pattern {sorted(pattern)} cannot occur on a {face.kind}")
    val = table[pattern]
    return () if val is None else (Generator(face.label, val[0], val[1]),)


def matching_weight(g: LadderGraph, edges: frozenset[Edge]) -> Word:
    """Ordered product of face weights, faces left to right."""
    w: Word = ()
    for f in g.faces:
        w = concat(w, face_weight(g, f, edges))
    return w


def enumerate_matchings(g: LadderGraph) -> list[Matching]:
    return [Matching(e, matching_weight(g, e)) for e in _transfer(g)]


def partition_function(g: LadderGraph) -> NCPolynomial:
    terms: dict[Word, int] = {}
    for m in enumerate_matchings(g):
        terms[m.weight] = terms.get(m.weight, 0) + 1
    return NCPolynomial(terms)


def is_perfect_matching(g: LadderGraph, edges: frozenset[Edge]) -> bool:
    allowed = set(g.edges())
    seen: list[tuple[int, int]] = []
    for e in edges:
        if e not in allowed:
            return False
        seen += g.endpoints(e)
    return sorted(seen) == sorted(g.vertices())


# -- bijection with network paths -------------------------------------------------------

def matching_from_network_path(g: LadderGraph, net: NetworkGraph, npath: NetworkPath) -> frozenset[Edge]:
    """Image of a 1 -> 1 network path under the local path/dimer correspondence.

    A chip whose connector changes puts a dimer on its rung.  A chip that keeps
    its connector is covered by a horizontal pair, paired to the right for V 1->1
    and U 2->2 and to the left for V 2->2 and U 1->1.
    """
    cols = [1]
    for f in g.faces[1:-1]:
        cols.append(f.right_col)
    edges: set[Edge] = set()
    for (pos, i, j), c in zip(npath.transitions, net.chips):
        col = cols[pos]
        if i != j:
            edges.add(("rung", col))
            continue
        right = (c.kind == "V") == (i == 1)
        base = col if right else col - 1
        edges |= {("top", base), ("bottom", base)}
    return frozenset(edges)


def face_contributions(net: NetworkGraph, npath: NetworkPath) -> dict[int, Word]:
    """Letters of each face label in a network path weight (before the t_{j1} factor)."""
    letters: list[Generator] = []
    for (pos, i, j), c in zip(npath.transitions, net.chips):
        letters += c.edges[(i, j)]
    out: dict[int, Word] = {lab: () for lab in net.faces}
    for lab in net.faces:
        out[lab] = reduce_word([g for g in letters if g.index == lab])
    return out


def derive_face_table(path: InitialPath, j0: int, j1: int) -> dict[tuple[str, str], dict[frozenset[str], tuple[bool, int] | None]]:
    """Interior face weights read off from network paths via the bijection.

    Raises ValueError if one pattern receives two different weights, i.e. if
    the weights are not local.
    """
    net, g = network_and_ladder(path, j0, j1)
    table: dict[tuple[str, str], dict[frozenset[str], tuple[bool, int] | None]] = {}
    for npath in enumerate_network_paths(net):
        edges = matching_from_network_path(g, net, npath)
        contrib = face_contributions(net, npath)
        for f in g.faces[1:-1]:
            pat = face_pattern(g, f, edges)
            w = contrib[f.label]
            if len(w) > 1:
                raise ValueError(f"face {f.site} collects more than one letter")
            val = (w[0].bullet, w[0].exponent) if w else None
            slot = table.setdefault((f.kind, f.color), {})
            if slot.setdefault(pat, val) != val:
                raise ValueError(f"face {f.site}: pattern {sorted(pat)} has two weights")
    return table


def ladder_for_point(path: InitialPath, p: tuple[int, int]) -> LadderGraph:
    from .lattice import projections

    j0, j1 = projections(path, p)
    return build_ladder(path, j0, j1)


def network_and_ladder(path: InitialPath, j0: int, j1: int) -> tuple[NetworkGraph, LadderGraph]:
    return build_network(path, j0, j1), build_ladder(path, j0, j1)


def to_dot(g: LadderGraph, matching: Matching | None = None) -> str:
    """Graphviz rendering with vertex colours, face labels and an optional matching."""
    lines = ["graph ladder {", "  node [shape=circle, width=0.2, label=\"\"];"]
    for (r, c) in g.vertices():
        fill = "black" if g.color((r, c)) == "black" else "white"
        lines.append(f'  v{r}_{c} [style=filled, fillcolor={fill}, pos="{c},{2 - r}!"];')
    for f in g.faces:
        x = (f.left_col + f.right_col) / 2
        lines.append(f'  face{f.site} [shape=plaintext, label="t{f.label}", pos="{x},0.5!"];')
    used = matching.edges if matching else frozenset()
    for e in g.edges():
        (r1, c1), (r2, c2) = g.endpoints(e)
        style = " [penwidth=4]" if e in used else ""
        lines.append(f"  v{r1}_{c1} -- v{r2}_{c2}{style};")
    if matching is not None:
        lines.append(f'  label="{word_to_str(matching.weight)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
