"""The degree-+1 differential, its matrices, and the sign-rule audit.

On generators the differential is fixed: it kills a4, a8, a10 and a9,
sends c17 to a9^2 and b_j to -a9*a_{j-8}.  What the defining data do NOT
fix is how to extend it to products; the extension is by a Leibniz rule

    d(x * y) = d(x) * y + eps(x) * x * d(y)

over the canonical factor sequence of a normal-form monomial, and the
candidate rules for eps are audited mechanically: a rule is admissible
when the result is independent of the factorization used (a genuine
derivation on the quotient) and squares to zero.  The unsigned rule is
provably inconsistent with the rewrite b_j*a9 = a9*b_j + c17*a_{j-8};
the audit certifies the total-degree parity rule and pins down the
degree-26 word-type cocycle (a9*c17 +/- c17*a9) by kernel computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import random

from .dga import (
    A9, C17, COMM_DEGREES, COMM_NAMES, WORD_DEGREES, ZERO_EXPS,
    DegreeBasis, Element, Monomial, enumerate_basis, gen, mono_mul,
)
from .gf3 import SparseMatrixF3

CONVENTIONS = ("parity", "plus", "minus")
DEFAULT_CONVENTION = "parity"


def _eps_factor(convention: str, factor_degree: int) -> int:
    if convention == "parity":
        return -1 if factor_degree % 2 else 1
    if convention == "plus":
        return 1
    if convention == "minus":
        return -1
    raise KeyError(f"unknown sign convention {convention!r}")


# d on single generators: word letter -> Element (a9 -> 0, c17 -> a9^2),
# commutative index -> Element (b_j -> -a9 a_{j-8}, a_i -> 0)
_D_WORD = {C17: Element({Monomial((A9, A9), ZERO_EXPS): 1})}


def _d_comm(g: int) -> Element | None:
    if g < 3:
        return None
    exps = list(ZERO_EXPS)
    exps[g - 3] = 1
    return Element({Monomial((A9,), tuple(exps)): -1})


def _factors(m: Monomial):
    """Canonical factor sequence: word letters, then commutative generators."""
    for x in m.word:
        yield ("w", x, WORD_DEGREES[x])
    for g, e in enumerate(m.exps):
        for _ in range(e):
            yield ("c", g, COMM_DEGREES[g])


def d_mono(m: Monomial, convention: str = DEFAULT_CONVENTION) -> Element:
    """Differential of one normal-form monomial via the factor Leibniz rule."""
    factors = list(_factors(m))
    out = {}
    sign = 1
    for i, (kind, g, deg) in enumerate(factors):
        dg = _D_WORD.get(g) if kind == "w" else _d_comm(g)
        if dg is not None:
            # prefix and suffix are themselves normal-form monomials
            wsplit = i if kind == "w" else len(m.word)
            prefix = Monomial(m.word[:wsplit], _exps_of(factors[len(m.word):i]))
            suffix = Monomial(m.word[wsplit + 1:] if kind == "w" else (),
                              _exps_of(factors[i + 1:]))
            for dm, dc in dg.terms.items():
                for m1, c1 in mono_mul(prefix, dm).items():
                    for m2, c2 in mono_mul(m1, suffix).items():
                        c = (sign * dc * c1 * c2) % 3
                        cc = (out.get(m2, 0) + c) % 3
                        if cc:
                            out[m2] = cc
                        else:
                            out.pop(m2, None)
        sign *= _eps_factor(convention, deg)
    return Element(out)


def _exps_of(factors) -> tuple:
    exps = [0] * 6
    for kind, g, _ in factors:
        if kind == "c":
            exps[g] += 1
    return tuple(exps)


class Differential:
    """d with a fixed sign convention, plus per-degree matrices."""

    def __init__(self, convention: str = DEFAULT_CONVENTION):
        if convention not in CONVENTIONS:
            raise KeyError(f"unknown sign convention {convention!r}")
        self.convention = convention
        self._mono_cache: dict[Monomial, Element] = {}

    def of_mono(self, m: Monomial) -> Element:
        try:
            return self._mono_cache[m]
        except KeyError:
            v = d_mono(m, self.convention)
            self._mono_cache[m] = v
            return v

    def __call__(self, x: Element) -> Element:
        out = Element.zero()
        for m, c in x.terms.items():
            out = out + self.of_mono(m).scaled(c)
        return out

    def eps(self, x: Element) -> int:
        """Leibniz sign of a homogeneous element (per its monomials' factors)."""
        if self.convention == "parity":
            return -1 if x.degree() % 2 else 1
        if self.convention == "plus":
            return 1
        # "minus" is per-factor and need not be constant on a degree; it is
        # well-defined on single monomials only
        (m, _), = x.terms.items()
        s = 1
        for _ in _factors(m):
            s = -s
        return s

    def leibniz(self, x: Element, y: Element) -> Element:
        """d(x*y) computed through the product rule (for the audit)."""
        return self(x) * y + (x * self(y)).scaled(self.eps(x))

    def matrix(self, n: int, basis_n: DegreeBasis | None = None,
               basis_n1: DegreeBasis | None = None) -> SparseMatrixF3:
        """Matrix of d from degree n to degree n+1 in basis coordinates."""
        bn = basis_n or enumerate_basis(n)
        bn1 = basis_n1 or enumerate_basis(n + 1)
        triples = []
        for j, m in enumerate(bn.monomials):
            for t, c in self.of_mono(m).terms.items():
                triples.append((bn1.index[t], j, c))
        return SparseMatrixF3.from_triples(len(bn1), len(bn), triples)


# -- audit ----------------------------------------------------------------


@dataclass
class ConventionVerdict:
    convention: str
    admissible: bool
    factorization_failures: list = field(default_factory=list)
    dd_failures: list = field(default_factory=list)


@dataclass
class AuditReport:
    verdicts: list
    selected: str | None
    x26_coefficients: tuple | None   # coefficients on (a9*c17, c17*a9)
    x26: Element | None
    degree_bound: int

    @property
    def admissible(self) -> list:
        return [v.convention for v in self.verdicts if v.admissible]


def _random_homogeneous(rng, max_degree: int) -> Element:
    n = rng.choice([d for d in range(1, max_degree + 1)
                    if len(enumerate_basis(d)) > 0])
    basis = enumerate_basis(n)
    k = rng.randint(1, min(3, len(basis)))
    out = {}
    for m in rng.sample(list(basis.monomials), k):
        out[m] = rng.randint(1, 2)
    return Element(out)


def audit_conventions(degree_bound: int = 40, pair_samples: int = 1000,
                      pair_max_degree: int = 20, seed: int = 0,
                      candidates=CONVENTIONS) -> AuditReport:
    """Mechanically select an admissible Leibniz sign rule.

    Admissibility: (a) d(x*y) computed by the product rule agrees with d
    applied to the normalized product, for all ordered generator pairs and
    for ``pair_samples`` random homogeneous pairs; (b) d(d(m)) = 0 on every
    basis monomial of degree <= degree_bound.  Fails loudly if no candidate
    survives.
    """
    rng = random.Random(seed)
    gens = [gen(n) for n in COMM_NAMES] + [gen("a9"), gen("c17")]
    pairs = [(x, y) for x in gens for y in gens]
    pairs += [(_random_homogeneous(rng, pair_max_degree),
               _random_homogeneous(rng, pair_max_degree))
              for _ in range(pair_samples)]

    verdicts = []
    for name in candidates:
        d = Differential(name)
        v = ConventionVerdict(name, True)
        for x, y in pairs:
            try:
                lhs = d.leibniz(x, y)
            except ValueError:
                # non-homogeneous sign (cannot happen for our samples)
                v.admissible = False
                break
            rhs = d(x * y)
            if lhs != rhs:
                v.admissible = False
                diff = lhs - rhs
                if len(v.factorization_failures) < 3:
                    v.factorization_failures.append(
                        (x.text(), y.text(), diff.text()))
        if v.admissible:
            for n in range(degree_bound + 1):
                for m in enumerate_basis(n).monomials:
                    ddm = d(d.of_mono(m))
                    if not ddm.is_zero():
                        v.admissible = False
                        if len(v.dd_failures) < 3:
                            v.dd_failures.append((m.text(), ddm.text()))
                if not v.admissible:
                    break
        verdicts.append(v)

    admissible = [v.convention for v in verdicts if v.admissible]
    if not admissible:
        raise RuntimeError(
            "no candidate sign convention is admissible: "
            + "; ".join(f"{v.convention}: {v.factorization_failures or v.dd_failures}"
                        for v in verdicts))
    selected = admissible[0]
    coeffs, x26 = select_x26(Differential(selected))
    return AuditReport(verdicts, selected, coeffs, x26, degree_bound)


def select_x26(d: Differential):
    """The degree-26 word-type cocycle, by direct kernel computation.

    Exactly one of a9*c17 +/- c17*a9 is a cocycle; the sign is NOT a
    convention choice but a consequence of the admissible Leibniz rule.
    The representative is normalized to leading coefficient +1 on a9*c17.
    """
    m1 = Monomial((A9, C17), ZERO_EXPS)
    m2 = Monomial((C17, A9), ZERO_EXPS)
    kernel = []
    for mu, nu in ((1, 1), (1, 2)):
        x = Element({m1: mu, m2: nu})
        if d(x).is_zero():
            kernel.append(((mu, nu), x))
    if len(kernel) != 1:
        raise RuntimeError(
            f"degree-26 word kernel is {len(kernel)}-dimensional, expected 1")
    return kernel[0]
