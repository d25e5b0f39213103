"""Bosonic operator algebra and cumulant closures.

Operators are sums of normally ordered words; a word is a tuple of
letters ``(mode, dagger)``.  Expectations of words are reduced to
polynomials in first moments and *central* second moments by discarding
every fluctuation cumulant of order three and higher, the standard
mean-field-plus-Gaussian-fluctuations closure.  Working with central
moments keeps the compiled equations free of the huge mean-field
cancellations that raw moments would produce at bright inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "OpPoly",
    "MomentPoly",
    "mode_op",
    "normal_order",
    "closure_expectation",
    "closure3",
    "closure4",
]

Letter = tuple[int, bool]
Word = tuple[Letter, ...]
Atom = tuple  # ('m', i, conj) | ('s', i, j, conj) | ('n', i, j, conj)


def _order_key(letter: Letter) -> tuple[int, int]:
    mode, dagger = letter
    return (0 if dagger else 1, mode)


@lru_cache(maxsize=None)
def normal_order(word: Word) -> tuple[tuple[Word, complex], ...]:
    """Rewrite a word into normally ordered form (daggers left, by mode)."""
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if _order_key(a) <= _order_key(b):
            continue
        swapped = word[:i] + (b, a) + word[i + 2 :]
        if a[0] == b[0] and not a[1] and b[1]:
            # x x^dag = x^dag x + 1
            contracted = word[:i] + word[i + 2 :]
            terms: dict[Word, complex] = {}
            for w, c in normal_order(swapped):
                terms[w] = terms.get(w, 0.0) + c
            for w, c in normal_order(contracted):
                terms[w] = terms.get(w, 0.0) + c
            return tuple(terms.items())
        return normal_order(swapped)
    return ((word, 1.0 + 0.0j),)


class OpPoly:
    """Sum of normally ordered words with complex coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Word, complex] | None = None):
        self.terms: dict[Word, complex] = {}
        if terms:
            for word, coeff in terms.items():
                for w, c in normal_order(tuple(word)):
                    self._add(w, coeff * c)

    def _add(self, word: Word, coeff: complex) -> None:
        new = self.terms.get(word, 0.0) + coeff
        if new == 0:
            self.terms.pop(word, None)
        else:
            self.terms[word] = new

    @classmethod
    def _raw(cls, terms: dict[Word, complex]) -> "OpPoly":
        poly = cls()
        poly.terms = {w: c for w, c in terms.items() if c != 0}
        return poly

    def __add__(self, other: "OpPoly") -> "OpPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0.0) + c
        return OpPoly._raw({w: c for w, c in out.items() if c != 0})

    def __sub__(self, other: "OpPoly") -> "OpPoly":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "OpPoly":
        return OpPoly._raw({w: c * scalar for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "OpPoly") -> "OpPoly":
        out: dict[Word, complex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                for w, c in normal_order(w1 + w2):
                    key = w
                    out[key] = out.get(key, 0.0) + c1 * c2 * c
        return OpPoly._raw({w: c for w, c in out.items() if c != 0})

    def adjoint(self) -> "OpPoly":
        out: dict[Word, complex] = {}
        for w, c in self.terms.items():
            flipped = tuple((mode, not dag) for mode, dag in reversed(w))
            for nw, nc in normal_order(flipped):
                out[nw] = out.get(nw, 0.0) + nc * c.conjugate()
        return OpPoly._raw({w: c for w, c in out.items() if c != 0})

    def modes(self) -> frozenset[int]:
        return frozenset(mode for w in self.terms for mode, _ in w)

    def __repr__(self) -> str:
        return f"OpPoly({self.terms!r})"


def mode_op(mode: int, dagger: bool = False) -> OpPoly:
    return OpPoly._raw({((mode, dagger),): 1.0 + 0.0j})


# ---------------------------------------------------------------------------
# closure of expectations into mean / central-pair atoms


def mean_atom(letter: Letter) -> Atom:
    mode, dagger = letter
    return ("m", mode, dagger)


def pair_atom(first: Letter, second: Letter) -> Atom:
    """Central pair moment of two letters in normal order."""
    (i, da), (j, db) = first, second
    if da and db:
        return ("s", min(i, j), max(i, j), True)
    if da and not db:
        return ("n", i, j, False) if i <= j else ("n", j, i, True)
    if not da and not db:
        return ("s", min(i, j), max(i, j), False)
    raise AssertionError("pair extracted from a non-normal-ordered word")


def conj_atom(atom: Atom) -> Atom:
    return atom[:-1] + (not atom[-1],)


class MomentPoly:
    """Polynomial in moment atoms, keyed by sorted atom tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[Atom, ...], complex] | None = None):
        self.terms: dict[tuple[Atom, ...], complex] = dict(terms or {})

    def _add(self, key: tuple[Atom, ...], coeff: complex) -> None:
        new = self.terms.get(key, 0.0) + coeff
        if new == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def add_scaled(self, other: "MomentPoly", scale: complex = 1.0) -> None:
        for key, coeff in other.terms.items():
            self._add(key, coeff * scale)

    def times_atom(self, atom: Atom) -> "MomentPoly":
        out = MomentPoly()
        for key, coeff in self.terms.items():
            out._add(tuple(sorted(key + (atom,))), coeff)
        return out

    def conjugate(self) -> "MomentPoly":
        out = MomentPoly()
        for key, coeff in self.terms.items():
            out._add(tuple(sorted(conj_atom(a) for a in key)), coeff.conjugate())
        return out

    def __len__(self) -> int:
        return len(self.terms)


@lru_cache(maxsize=None)
def _word_closure(word: Word) -> tuple[tuple[tuple[Atom, ...], complex], ...]:
    """All partial pairings of the word: pairs -> central moments, singles -> means."""
    results: dict[tuple[Atom, ...], complex] = {}

    def rec(letters: tuple[Letter, ...], atoms: tuple[Atom, ...]):
        if not letters:
            key = tuple(sorted(atoms))
            results[key] = results.get(key, 0.0) + 1.0
            return
        first, rest = letters[0], letters[1:]
        rec(rest, atoms + (mean_atom(first),))
        for k in range(len(rest)):
            rec(rest[:k] + rest[k + 1 :], atoms + (pair_atom(first, rest[k]),))

    rec(word, ())
    return tuple(results.items())


def closure_expectation(op: OpPoly) -> MomentPoly:
    """Expectation of an operator polynomial under the Gaussian closure.

    Exact for words of length <= 2; for longer words all fluctuation
    cumulants of order >= 3 are set to zero.
    """
    out = MomentPoly()
    for word, coeff in op.terms.items():
        for key, c in _word_closure(word):
            out._add(key, coeff * c)
    return out


# ---------------------------------------------------------------------------
# raw-moment closure formulas (the printed three- and four-operator rules)


def closure3(m_a, m_b, m_c, ab, ac, bc):
    """<ABC> ~ <A><BC> + <B><AC> + <C><AB> - 2<A><B><C>.

    Arguments are the first moments and the raw pair moments with the
    original operator order preserved inside each bracket.
    """
    return m_a * bc + m_b * ac + m_c * ab - 2.0 * m_a * m_b * m_c


def closure4(m_a, m_b, m_c, m_d, ab, ac, ad, bc, bd, cd):
    """<ABCD> ~ <AB><CD> + <AC><BD> + <AD><BC> - 2<A><B><C><D>."""
    return ab * cd + ac * bd + ad * bc - 2.0 * m_a * m_b * m_c * m_d
