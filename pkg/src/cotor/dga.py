"""The graded algebra under study, as a concrete rewriting system.

Generators: six commuting even ones (a4, a8, a10, b12, b16, b18) and two
odd word letters (a9, c17) that generate a free factor.  The defining
relations say every even generator commutes with everything except that
moving a b-generator left past a9 costs a correction term:

    b_j * a9  ->  a9 * b_j + c17 * a_{j-8}      (j = 12, 16, 18)

Since every commuting pair involves an even generator, no Koszul signs
ever enter the multiplication; signs only matter for the differential
(see ``differential``).  Normal-form monomials are a free word in
{a9, c17} followed by a commutative monomial, and the rewrite above only
ever lengthens words, so the commutative subalgebra S spanned by
word-free monomials is closed under multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

A9, C17 = 0, 1

WORD_NAMES = ("a9", "c17")
WORD_DEGREES = (9, 17)

COMM_NAMES = ("a4", "a8", "a10", "b12", "b16", "b18")
COMM_DEGREES = (4, 8, 10, 12, 16, 18)

GEN_NAMES = COMM_NAMES + WORD_NAMES
GEN_DEGREES = dict(zip(COMM_NAMES, COMM_DEGREES)) | dict(zip(WORD_NAMES, WORD_DEGREES))

# b12 -> a4, b16 -> a8, b18 -> a10 (index into the commutative block)
_B_TO_A = {3: 0, 4: 1, 5: 2}

ZERO_EXPS = (0, 0, 0, 0, 0, 0)

# weight of a generator under each filtration scheme:
# (a4, a8, a10, b12, b16, b18) block and (a9, c17) block
WEIGHT_SCHEMES = {
    "weight_s3": ((2, 2, 2, 0, 0, 0), (1, 2)),
    "may_s5": ((1, 1, 1, 1, 1, 1), (1, 2)),
    "trivial": ((0, 0, 0, 0, 0, 0), (0, 0)),
}


class Monomial(NamedTuple):
    """Normal-form basis monomial: free word then commutative exponents."""

    word: tuple
    exps: tuple

    def degree(self) -> int:
        d = sum(WORD_DEGREES[x] for x in self.word)
        return d + sum(e * g for e, g in zip(self.exps, COMM_DEGREES))

    def word_length(self) -> int:
        return len(self.word)

    def weight(self, scheme: str) -> int:
        cw, ww = WEIGHT_SCHEMES[scheme]
        return (sum(ww[x] for x in self.word)
                + sum(e * w for e, w in zip(self.exps, cw)))

    def text(self) -> str:
        word = " ".join(WORD_NAMES[x] for x in self.word)
        comm = " ".join(
            n if e == 1 else f"{n}^{e}"
            for n, e in zip(COMM_NAMES, self.exps) if e)
        if word and comm:
            return f"{word} | {comm}"
        return word or comm or "1"


ONE = Monomial((), ZERO_EXPS)


def _merge(acc: dict, m: Monomial, c: int):
    c = (acc.get(m, 0) + c) % 3
    if c:
        acc[m] = c
    else:
        acc.pop(m, None)


@lru_cache(maxsize=None)
def _push_gen(g: int, word: tuple):
    """Move one commutative generator g from the left of a word to the right.

    Returns a tuple of ((word, exps), coeff) terms in normal form; the
    moved generator (or its rewrite product) lands in the exps block.
    """
    if not word:
        exps = list(ZERO_EXPS)
        exps[g] = 1
        return (((word, tuple(exps)), 1),)
    head, rest = word[0], word[1:]
    if head == A9 and g in _B_TO_A:
        out = []
        for (w, e), c in _push_gen(g, rest):
            out.append((((A9,) + w, e), c))
        for (w, e), c in _push_gen(_B_TO_A[g], rest):
            out.append((((C17,) + w, e), c))
        return tuple(out)
    return tuple((((head,) + w, e), c) for (w, e), c in _push_gen(g, rest))


def mono_mul(m1: Monomial, m2: Monomial) -> dict:
    """Product of two normal-form monomials, as Monomial -> coeff."""
    # push the commutative part of m1 through the word of m2
    terms = {(m2.word, ZERO_EXPS): 1}
    for g, e in enumerate(m1.exps):
        for _ in range(e):
            nxt = {}
            for (w, q), c in terms.items():
                for (w2, dq), c2 in _push_gen(g, w):
                    key = (w2, tuple(a + b for a, b in zip(q, dq)))
                    cc = (nxt.get(key, 0) + c * c2) % 3
                    if cc:
                        nxt[key] = cc
                    else:
                        nxt.pop(key, None)
            terms = nxt
    out = {}
    for (w, q), c in terms.items():
        mono = Monomial(m1.word + w,
                        tuple(a + b for a, b in zip(q, m2.exps)))
        _merge(out, mono, c)
    return out


class Element:
    """Finite GF(3)-linear combination of normal-form monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {m: c % 3 for m, c in (terms or {}).items() if c % 3}

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    @classmethod
    def one(cls) -> "Element":
        return cls({ONE: 1})

    @classmethod
    def monomial(cls, m: Monomial, c: int = 1) -> "Element":
        return cls({m: c})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for m, c in other.terms.items():
            _merge(out, m, c)
        return Element(out)

    def __sub__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for m, c in other.terms.items():
            _merge(out, m, -c)
        return Element(out)

    def __neg__(self) -> "Element":
        return Element({m: -c for m, c in self.terms.items()})

    def scaled(self, c: int) -> "Element":
        return Element({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scaled(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                for m, c in mono_mul(m1, m2).items():
                    _merge(out, m, c12 * c)
        return Element(out)

    def __rmul__(self, c: int) -> "Element":
        return self.scaled(c)

    def __pow__(self, n: int) -> "Element":
        out = Element.one()
        for _ in range(n):
            out = out * self
        return out

    def degrees(self) -> set:
        return {m.degree() for m in self.terms}

    def degree(self) -> int | None:
        """Degree of a homogeneous element (None for 0)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def homogeneous_component(self, n: int) -> "Element":
        return Element({m: c for m, c in self.terms.items() if m.degree() == n})

    def weight(self, scheme: str) -> float:
        """min over terms; the zero element has weight +infinity."""
        if not self.terms:
            return math.inf
        return min(m.weight(scheme) for m in self.terms)

    def in_commutative_subalgebra(self) -> bool:
        return all(not m.word for m in self.terms)

    def min_word_length(self) -> float:
        if not self.terms:
            return math.inf
        return min(m.word_length() for m in self.terms)

    def text(self) -> str:
        if not self.terms:
            return "0"
        return " ".join(f"+{c}*{m.text()}"
                        for m, c in sorted(self.terms.items()))

    def __repr__(self):
        return f"Element({self.text()})"


@lru_cache(maxsize=None)
def gen(name: str) -> Element:
    """The generator with the given name, as an Element."""
    if name in WORD_NAMES:
        return Element({Monomial((WORD_NAMES.index(name),), ZERO_EXPS): 1})
    if name in COMM_NAMES:
        exps = list(ZERO_EXPS)
        exps[COMM_NAMES.index(name)] = 1
        return Element({Monomial((), tuple(exps)): 1})
    raise KeyError(f"unknown generator {name!r}")


def comm_monomial(**exps) -> Monomial:
    """Word-free monomial from keyword exponents, e.g. comm_monomial(b12=2)."""
    e = [0] * 6
    for name, k in exps.items():
        e[COMM_NAMES.index(name)] = k
    return Monomial((), tuple(e))


# -- basis enumeration ---------------------------------------------------

@lru_cache(maxsize=None)
def comm_monomials(n: int) -> tuple:
    """All commutative exponent vectors of total degree n, lex sorted."""
    out = []

    def rec(idx, remaining, acc):
        if idx == 5:
            if remaining % COMM_DEGREES[5] == 0:
                out.append(tuple(acc + [remaining // COMM_DEGREES[5]]))
            return
        d = COMM_DEGREES[idx]
        for e in range(remaining // d + 1):
            rec(idx + 1, remaining - e * d, acc + [e])

    if n >= 0:
        rec(0, n, [])
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def words_of_degree(k: int) -> tuple:
    """All words in {a9, c17} of total degree k, lex sorted."""
    if k == 0:
        return ((),)
    out = []
    if k >= 9:
        out.extend((A9,) + w for w in words_of_degree(k - 9))
    if k >= 17:
        out.extend((C17,) + w for w in words_of_degree(k - 17))
    return tuple(sorted(out))


@dataclass(frozen=True)
class DegreeBasis:
    """Ordered monomial basis of one total degree, with index lookup."""

    degree: int
    monomials: tuple
    index: dict

    def __len__(self):
        return len(self.monomials)


def enumerate_basis(n: int) -> DegreeBasis:
    """All normal-form monomials of total degree n, deterministically ordered
    (word lexicographic, then exponent lexicographic)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    monos = []
    for k in range(n + 1):
        words = words_of_degree(k)
        if not words:
            continue
        comms = comm_monomials(n - k)
        for w in words:
            monos.extend(Monomial(w, e) for e in comms)
    monos.sort()
    return DegreeBasis(n, tuple(monos),
                       {m: i for i, m in enumerate(monos)})


def element_vector(x: Element, basis: DegreeBasis):
    """Coefficient vector of a homogeneous element in a degree basis."""
    import numpy as np

    v = np.zeros(len(basis), dtype=np.uint8)
    for m, c in x.terms.items():
        v[basis.index[m]] = c
    return v


def parse_monomial(text: str) -> Monomial:
    """Inverse of Monomial.text()."""
    text = text.strip()
    if text == "1":
        return ONE
    if "|" in text:
        wpart, cpart = text.split("|")
    elif text.split()[0] in WORD_NAMES:
        wpart, cpart = text, ""
    else:
        wpart, cpart = "", text
    word = tuple(WORD_NAMES.index(t) for t in wpart.split())
    exps = [0] * 6
    for tok in cpart.split():
        name, _, e = tok.partition("^")
        exps[COMM_NAMES.index(name)] = int(e) if e else 1
    return Monomial(word, tuple(exps))
