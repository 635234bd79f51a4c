"""NC networks: chains of U/V chips and their weighted connector paths."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfWindow
from .lattice import InitialPath
from .ncalgebra import Generator, NCPolynomial, Word, concat, word_to_str


@dataclass(frozen=True)
class Chip:
    kind: str  # "U" or "V"
    left: int  # atom label of the left face
    right: int  # atom label of the right face

    @property
    def edges(self) -> dict[tuple[int, int], Word]:
        """Non-zero matrix entries (i, j) -> single-word weight."""
        a, b = self.left, self.right
        if self.kind == "V":
            return {
                (1, 1): (Generator(a), Generator(b, False, -1)),
                (1, 2): (Generator(b, True, -1),),
                (2, 2): (),
            }
        return {
            (1, 1): (),
            (2, 1): (Generator(b, False, -1),),
            (2, 2): (Generator(a, True, 1), Generator(b, True, -1)),
        }


@dataclass(frozen=True)
class NetworkGraph:
    chips: tuple[Chip, ...]

    def __post_init__(self):
        for c, d in zip(self.chips, self.chips[1:]):
            if c.right != d.left:
                raise ValueError("face labels of consecutive chips must chain")

    @property
    def faces(self) -> list[int]:
        if not self.chips:
            return []
        return [self.chips[0].left] + [c.right for c in self.chips]


@dataclass(frozen=True)
class NetworkPath:
    transitions: tuple[tuple[int, int, int], ...]  # (chip position, i, j)
    weight: Word

    @property
    def connectors(self) -> tuple[int, ...]:
        if not self.transitions:
            return ()
        return (self.transitions[0][1],) + tuple(t[2] for t in self.transitions)


def build_network(path: InitialPath, j0: int, j1: int) -> NetworkGraph:
    """One chip per step of the section [j0, j1]: U for up steps, V for down."""
    if j0 > j1:
        raise ValueError("need j0 <= j1")
    if not (path.contains(j0) and path.contains(j1)):
        raise OutOfWindow(f"[{j0},{j1}] not inside [{path.lo},{path.hi}]")
    return NetworkGraph(tuple(
        Chip("U" if path.step(j) == 1 else "V", path.label(j), path.label(j + 1)) for j in range(j0, j1)
    ))


def enumerate_paths(net: NetworkGraph, entry: int = 1, exit: int = 1) -> list[NetworkPath]:
    """All connector paths entry -> exit, ordered by transition choices (1 before 2)."""
    out: list[NetworkPath] = []
    n = len(net.chips)
    edges = [c.edges for c in net.chips]

    def dfs(pos: int, conn: int, trans: list, weight: Word) -> None:
        if pos == n:
            if conn == exit:
                out.append(NetworkPath(tuple(trans), weight))
            return
        for target in (1, 2):
            w = edges[pos].get((conn, target))
            if w is None:
                continue
            trans.append((pos, conn, target))
            dfs(pos + 1, target, trans, concat(weight, w))
            trans.pop()

    dfs(0, entry, [], ())
    return out


def partition_function(net: NetworkGraph, entry: int = 1, exit: int = 1) -> NCPolynomial:
    """Sum of path weights, each taken in traversal order."""
    terms: dict[Word, int] = {}
    for p in enumerate_paths(net, entry, exit):
        terms[p.weight] = terms.get(p.weight, 0) + 1
    return NCPolynomial(terms)


def count_paths(net: NetworkGraph, entry: int = 1, exit: int = 1) -> int:
    counts = {entry: 1}
    for c in net.chips:
        nxt: dict[int, int] = {}
        for (i, j) in c.edges:
            if i in counts:
                nxt[j] = nxt.get(j, 0) + counts[i]
        counts = nxt
    return counts.get(exit, 0)


def to_dot(net: NetworkGraph, highlight: NetworkPath | None = None) -> str:
    """Graphviz rendering: chips left to right, connector 1 on top, 2 below."""
    lines = ["digraph network {", "  rankdir=LR;", "  node [shape=point];"]
    n = len(net.chips)
    for x in range(n + 1):
        for row in (1, 2):
            lines.append(f'  c{x}_{row} [pos="{2 * x},{2 - row}!", xlabel="{row}"];')
    for x, lab in enumerate(net.faces):
        lines.append(f'  f{x} [shape=plaintext, label="t{lab}", pos="{2 * x},0.5!"];')
    used = set(highlight.transitions) if highlight else set()
    for x, c in enumerate(net.chips):
        for (i, j), w in sorted(c.edges.items()):
            style = ", penwidth=3" if (x, i, j) in used else ""
            label = "" if not w else word_to_str(w)
            lines.append(f'  c{x}_{i} -> c{x + 1}_{j} [label="{label}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
