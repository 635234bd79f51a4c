"""Free non-commutative Laurent polynomials in the atoms t_j and t_j^*.

A word is a tuple of :class:`Generator` letters, each an atom raised to +1 or
-1.  Higher powers are written as repeated letters, so free reduction only
ever has to look at neighbouring letters.  An :class:`NCPolynomial` maps
freely reduced words to non-zero integer coefficients.

The involution ``*`` (the bullet) is the anti-automorphism that reverses a
word and toggles the bullet flag of every letter.
"""
from __future__ import annotations

import json
import random
import re
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, NamedTuple

from .errors import NonAdjacentPair, OutOfWindow

if TYPE_CHECKING:
    from .lattice import InitialPath


class Generator(NamedTuple):
    """One letter: atom ``t_index`` (or ``t_index^*``) to the power ``exponent``.

    Field order doubles as the canonical letter order: (index, bullet, exponent).
    """

    index: int
    bullet: bool = False
    exponent: int = 1

    def inverse(self) -> Generator:
        return Generator(self.index, self.bullet, -self.exponent)

    def star(self) -> Generator:
        return Generator(self.index, not self.bullet, self.exponent)

    def __str__(self) -> str:
        s = f"t{self.index}" + ("*" if self.bullet else "")
        return s if self.exponent == 1 else s + "^-1"


Word = tuple  # tuple[Generator, ...], freely reduced


def atom(index: int, bullet: bool = False, exponent: int = 1) -> Generator:
    if exponent not in (1, -1):
        raise ValueError(f"exponent must be +1 or -1, got {exponent}")
    return Generator(int(index), bool(bullet), exponent)


def _cancels(x: Generator, y: Generator) -> bool:
    return x[0] == y[0] and x[1] == y[1] and x[2] == -y[2]


def reduce_word(letters: Iterable[Generator]) -> Word:
    """Freely reduce a letter sequence (stack based, single pass)."""
    out: list[Generator] = []
    for g in letters:
        if out and _cancels(out[-1], g):
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def is_reduced(word: Word) -> bool:
    return not any(_cancels(word[i], word[i + 1]) for i in range(len(word) - 1))


def concat(u: Word, v: Word) -> Word:
    """Product of two reduced words: cancel across the seam only."""
    n = 0
    lu, lv = len(u), len(v)
    while n < lu and n < lv and _cancels(u[lu - 1 - n], v[n]):
        n += 1
    if n == 0:
        return u + v
    return u[: lu - n] + v[n:]


def word_involution(word: Word) -> Word:
    return tuple(Generator(g[0], not g[1], g[2]) for g in reversed(word))


def word_inverse(word: Word) -> Word:
    return tuple(Generator(g[0], g[1], -g[2]) for g in reversed(word))


def word_to_str(word: Word) -> str:
    return " ".join(str(g) for g in word) if word else "1"


class NCPolynomial:
    """Integer combination of freely reduced words.

    Instances are treated as immutable; every operation returns a new one.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, int] | None = None):
        clean: dict[Word, int] = {}
        if terms:
            for w, c in terms.items():
                if c:
                    w = reduce_word(w) if not is_reduced(w) else tuple(w)
                    clean[w] = clean.get(w, 0) + int(c)
            clean = {w: c for w, c in clean.items() if c}
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[Word, int]) -> NCPolynomial:
        # trusted constructor: words already reduced, no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        return p

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls) -> NCPolynomial:
        return cls._raw({})

    @classmethod
    def one(cls) -> NCPolynomial:
        return cls._raw({(): 1})

    @classmethod
    def monomial(cls, word: Iterable[Generator], coeff: int = 1) -> NCPolynomial:
        return cls({tuple(word): coeff})

    @classmethod
    def atom(cls, index: int, bullet: bool = False, exponent: int = 1) -> NCPolynomial:
        return cls._raw({(atom(index, bullet, exponent),): 1})

    # -- mapping-like access ----------------------------------------------
    @property
    def terms(self) -> dict[Word, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Word, int]]:
        """Terms in canonical (lexicographic) word order."""
        return sorted(self._terms.items())

    def words(self) -> list[Word]:
        return sorted(self._terms)

    def coefficient(self, word: Iterable[Generator]) -> int:
        return self._terms.get(tuple(word), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = NCPolynomial({(): other})
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: NCPolynomial | int) -> NCPolynomial:
        if isinstance(other, int):
            other = NCPolynomial({(): other})
        terms = dict(self._terms)
        for w, c in other._terms.items():
            s = terms.get(w, 0) + c
            if s:
                terms[w] = s
            else:
                terms.pop(w, None)
        return NCPolynomial._raw(terms)

    __radd__ = __add__

    def __neg__(self) -> NCPolynomial:
        return NCPolynomial._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: NCPolynomial | int) -> NCPolynomial:
        return self + (-other)

    def __rsub__(self, other: int) -> NCPolynomial:
        return (-self) + other

    def __mul__(self, other: NCPolynomial | int) -> NCPolynomial:
        if isinstance(other, int):
            if other == 0:
                return NCPolynomial.zero()
            return NCPolynomial._raw({w: c * other for w, c in self._terms.items()})
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other: int) -> NCPolynomial:
        return self * other

    # -- structure ------------------------------------------------------------
    def involution(self) -> NCPolynomial:
        return involution(self)

    def is_well_ordered(self, key: Mapping[int, int] | None = None) -> bool:
        return is_well_ordered(self, key)

    def has_nonnegative_coefficients(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def labels(self) -> set[int]:
        return {g[0] for w in self._terms for g in w}

    def relabel(self, mapping: Mapping[int, int]) -> NCPolynomial:
        """Rename atom indices (bullet flags and exponents untouched)."""
        return NCPolynomial._raw(
            {tuple(Generator(mapping[g[0]], g[1], g[2]) for g in w): c for w, c in self._terms.items()}
        )

    # -- serialization -----------------------------------------------------
    def to_json_obj(self) -> list[dict]:
        return [
            {"coeff": c, "word": [{"j": g.index, "bullet": g.bullet, "exp": g.exponent} for g in w]}
            for w, c in self.items()
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> NCPolynomial:
        terms: dict[Word, int] = {}
        for term in obj:
            w = tuple(atom(x["j"], x["bullet"], x["exp"]) for x in term["word"])
            terms[w] = terms.get(w, 0) + int(term["coeff"])
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> NCPolynomial:
        return cls.from_json_obj(json.loads(text))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            body = word_to_str(w)
            if c == 1:
                parts.append(body)
            elif not w:
                parts.append(str(c))
            else:
                parts.append(f"{c} {body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NCPolynomial({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> NCPolynomial:
        """Inverse of ``str``: ``"t1 t2^-1 t3 + 2 t4*^-1 + 1"``."""
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms: dict[Word, int] = {}
        for chunk in text.split(" + "):
            tokens = chunk.split()
            coeff = 1
            if tokens and re.fullmatch(r"-?\d+", tokens[0]):
                coeff = int(tokens.pop(0))
            letters = []
            for tok in tokens:
                m = _TOKEN.fullmatch(tok)
                if m is None:
                    raise ValueError(f"cannot parse letter {tok!r}")
                letters.append(atom(int(m[1]), bool(m[2]), -1 if m[3] else 1))
            w = reduce_word(letters)
            terms[w] = terms.get(w, 0) + coeff
        return cls(terms)


_TOKEN = re.compile(r"t(-?\d+)(\*)?(\^-1)?")


def multiply(p: NCPolynomial, q: NCPolynomial) -> NCPolynomial:
    """Distributive product; word pairs are concatenated and freely reduced."""
    out: dict[Word, int] = {}
    get = out.get
    for u, a in p._terms.items():
        for v, b in q._terms.items():
            w = concat(u, v)
            s = get(w, 0) + a * b
            if s:
                out[w] = s
            else:
                del out[w]
    return NCPolynomial._raw(out)


def involution(p: NCPolynomial) -> NCPolynomial:
    return NCPolynomial._raw({word_involution(w): c for w, c in p._terms.items()})


def is_well_ordered(p: NCPolynomial, key: Mapping[int, int] | None = None) -> bool:
    """True iff every word has strictly increasing letter positions.

    ``key`` maps atom labels to positions (site order along a path); by
    default the label itself is the position.
    """
    for w in p._terms:
        pos = [g[0] for g in w] if key is None else [key[g[0]] for g in w]
        if any(pos[i] >= pos[i + 1] for i in range(len(pos) - 1)):
            return False
    return True


# -- relation-aware rewriting ----------------------------------------------------

def _step_rules(a: int, b: int, up: bool) -> dict[tuple[Generator, Generator], tuple[Generator, Generator]]:
    """Oriented two-letter rewrites for the step between labels a (left) and b (right).

    Every left-hand side has the right-site letter first; the right-hand side is
    the same element with the letters in site order.
    """
    A, As = Generator(a, False, 1), Generator(a, True, 1)
    B, Bs = Generator(b, False, 1), Generator(b, True, 1)
    inv = Generator.inverse
    if up:
        # a^-1 b = b* (a*)^-1
        return {
            (B, As): (A, Bs),
            (inv(B), A): (As, inv(Bs)),
            (Bs, inv(As)): (inv(A), B),
            (inv(Bs), inv(A)): (inv(As), inv(B)),
        }
    # a b^-1 = (b*)^-1 a*
    return {
        (Bs, A): (As, B),
        (B, inv(A)): (inv(As), Bs),
        (inv(Bs), As): (A, inv(B)),
        (inv(B), inv(As)): (inv(A), inv(Bs)),
    }


def apply_relation(x: Generator, y: Generator, path: InitialPath) -> tuple[Generator, Generator] | None:
    """Rewrite the inverted pair ``x y`` into site order using the step relation.

    Returns ``None`` when the pair is not the left-hand side of a rule.
    Raises :class:`NonAdjacentPair` unless the letters sit on neighbouring sites.
    """
    sx, sy = path.site_of(x.index), path.site_of(y.index)
    if abs(sx - sy) != 1:
        raise NonAdjacentPair(f"sites {sx} and {sy} are not neighbours")
    left = min(sx, sy)
    rules = _step_rules(path.label(left), path.label(left + 1), path.step(left) == 1)
    return rules.get((x, y))


def inversions(word: Word, key: Mapping[int, int] | None = None) -> int:
    pos = [g[0] for g in word] if key is None else [key[g[0]] for g in word]
    return sum(1 for i in range(len(pos)) for j in range(i + 1, len(pos)) if pos[i] > pos[j])


def rewrite_word(word: Word, path: InitialPath) -> Word:
    """Apply step rewrites (leftmost first) until no inverted neighbour pair is rewritable.

    Each rewrite swaps one adjacent inverted pair, so the inversion count drops
    by one and the loop terminates.
    """
    for g in word:
        if not path.has_label(g.index):
            raise OutOfWindow(f"atom t{g.index} is not assigned on the path")
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            si, sj = path.site_of(w[i].index), path.site_of(w[i + 1].index)
            if si - sj != 1:
                continue
            new = apply_relation(w[i], w[i + 1], path)
            if new is not None:
                w[i : i + 2] = new
                w = list(reduce_word(w))
                changed = True
                break
    return tuple(w)


def rewrite_well_ordered(p: NCPolynomial, path: InitialPath) -> NCPolynomial:
    """Normalise every word with the nearest-neighbour relations of ``path``."""
    out: dict[Word, int] = {}
    for w, c in p._terms.items():
        r = rewrite_word(w, path)
        out[r] = out.get(r, 0) + c
    return NCPolynomial({w: c for w, c in out.items() if c})


def random_word(rng: random.Random, labels: list[int], length: int) -> Word:
    letters = [
        Generator(rng.choice(labels), rng.random() < 0.5, rng.choice((1, -1))) for _ in range(length)
    ]
    return reduce_word(letters)


def random_polynomial(rng: random.Random, labels: list[int], n_terms: int = 3, max_len: int = 4) -> NCPolynomial:
    terms: dict[Word, int] = {}
    for _ in range(n_terms):
        w = random_word(rng, labels, rng.randint(0, max_len))
        terms[w] = terms.get(w, 0) + rng.randint(-3, 3)
    return NCPolynomial(terms)
