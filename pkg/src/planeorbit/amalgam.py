"""Normal forms in Aut(A^2) = Aff *_B J, where B = Aff n J is the group of
upper-triangular affine maps.

A word is ``head . s_1 ... s_r`` (leftmost applied last) with ``head`` in B and
each s_i a fixed representative of its right coset B.s_i:

* affine side: (x, a x + y) with a != 0, or the swap (y, x);
* triangular side: (x + p(y), y) with p free of constant and linear terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from enum import Enum

from .errors import InternalVerificationFailure, NotAnAutomorphism, PreconditionViolation
from .planeauto import (
    PlaneAutomorphism,
    compose,
    compose_all,
    invert_affine,
    invert_triangular,
)
from .poly2 import BiPoly, power_cache, proportional


class Factor(str, Enum):
    AFFINE = "Affine"
    JONQUIERES = "Jonquieres"
    INTERSECTION = "Intersection"


@dataclass(frozen=True)
class Letter:
    factor: Factor
    map: PlaneAutomorphism

    @property
    def degree(self) -> int:
        return self.map.degree

    def inverse(self) -> "Letter":
        if self.factor is Factor.JONQUIERES:
            return Letter(self.factor, invert_triangular(self.map))
        return Letter(self.factor, invert_affine(self.map))

    def to_json(self):
        return {"factor": self.factor.value, "map": self.map.to_json()}


@dataclass(frozen=True)
class Word:
    head: PlaneAutomorphism
    letters: tuple = dc_field(default=())

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def field(self):
        return self.head.field

    def compose(self) -> PlaneAutomorphism:
        return compose_all([self.head] + [l.map for l in self.letters])

    def factors(self):
        return [l.factor for l in self.letters]

    def to_json(self):
        return {
            "head": self.head.to_json(),
            "letters": [l.to_json() for l in self.letters],
            "length": self.length,
        }


def factor_of(phi: PlaneAutomorphism) -> Factor | None:
    """The factor phi lies in, if any (B reported as Intersection)."""
    if phi.is_affine():
        return Factor.INTERSECTION if phi.is_triangular() else Factor.AFFINE
    if phi.is_triangular():
        return Factor.JONQUIERES
    return None


# --- coset representatives ---------------------------------------------------

def _split_affine(alpha: PlaneAutomorphism):
    """alpha = h o s with h in B, s an affine representative."""
    K = alpha.field
    (_, _), (p, q) = alpha.linear_part()
    X, Y = BiPoly.x(K), BiPoly.y(K)
    if not q:
        s = PlaneAutomorphism(Y, X, check=False)
    else:
        s = PlaneAutomorphism(X, X.scale(p / q) + Y, check=False)
    h = compose(alpha, invert_affine(s))
    if not h.is_upper_triangular_affine():  # pragma: no cover - algebraic identity
        raise InternalVerificationFailure(f"affine coset split of {alpha} failed")
    return h, s


def _split_triangular(beta: PlaneAutomorphism):
    """beta = (a x + P(y), b y + c) = h o (x + p(y), y)."""
    K = beta.field
    a = beta.x_image.coeff(1, 0)
    ainv = a.inverse()
    high = {m: c for m, c in beta.x_image.terms.items() if m[0] == 0 and m[1] >= 2}
    p = BiPoly(K, high).scale(ainv)
    X, Y = BiPoly.x(K), BiPoly.y(K)
    s = PlaneAutomorphism(X + p, Y, check=False)
    rest = beta.x_image - BiPoly(K, high)
    h = PlaneAutomorphism(rest, beta.y_image, check=False)
    return h, s


# --- factorization -----------------------------------------------------------

def _raw_letters(phi: PlaneAutomorphism):
    """Alternating list of maps whose composition is phi (not yet normalized)."""
    K = phi.field
    X, Y = BiPoly.x(K), BiPoly.y(K)
    f, g = phi.x_image, phi.y_image
    letters = []
    while True:
        d1, d2 = f.degree, g.degree
        if d1 < 0 or d2 < 0:
            raise NotAnAutomorphism(f"{phi}: a component became zero while peeling")
        if d1 <= 1 and d2 <= 1:
            tail = PlaneAutomorphism(f, g, check=False)
            det = f.coeff(1, 0) * g.coeff(0, 1) - f.coeff(0, 1) * g.coeff(1, 0)
            if not det:
                raise NotAnAutomorphism(f"{phi}: affine tail {tail} is singular")
            letters.append(tail)
            return letters
        if d1 > d2:
            # peel (x + P(y), y) from the left: f <- f - P(g)
            if d2 == 0:
                raise NotAnAutomorphism(f"{phi}: constant component")
            P = BiPoly.zero(K)
            lead_g = g.leading_form()
            gpow = power_cache(K, g, lambda u, v: u * v, one=BiPoly.one(K))
            while f.degree > d2:
                k, r = divmod(f.degree, d2)
                if r:
                    raise NotAnAutomorphism(f"{phi}: degree {f.degree} not a multiple of {d2}")
                target = lead_g ** k
                c = proportional(f.leading_form(), target)
                if c is None:
                    raise NotAnAutomorphism(f"{phi}: leading forms are not proportional")
                f = f - gpow(k).scale(c)
                P = P + BiPoly.monomial(K, 0, k, c)
            letters.append(PlaneAutomorphism(X + P, Y, check=False))
        else:
            # peel an affine letter: (y + c x, x) o (g, f - c g)
            c = None
            if d1 == d2:
                c = proportional(f.leading_form(), g.leading_form())
                if c is None:
                    raise NotAnAutomorphism(f"{phi}: equal degrees with non-proportional leading forms")
                f = f - g.scale(c)
            if c is None:
                letters.append(PlaneAutomorphism(Y, X, check=False))
            else:
                letters.append(PlaneAutomorphism(Y + X.scale(c), X, check=False))
            f, g = g, f


def _shares_factor(a: PlaneAutomorphism, b: PlaneAutomorphism) -> bool:
    return (a.is_affine() and b.is_affine()) or (a.is_triangular() and b.is_triangular())


def normal_form(maps, field=None) -> Word:
    """Normal form of maps[0] o maps[1] o ..., each map lying in Aff or J.

    Adjacent maps from a common factor are merged first (only small letters are
    ever composed), then coset representatives are split off right to left.
    """
    maps = list(maps)
    K = field or maps[0].field
    stack = []
    for m in maps:
        cur = m
        while stack and _shares_factor(stack[-1], cur):
            cur = compose(stack.pop(), cur)
        if cur.is_identity() and stack:
            continue
        stack.append(cur)
    carry = PlaneAutomorphism.identity(K)
    letters = []
    for m in reversed(stack):
        m = compose(m, carry)
        if m.is_affine():
            if m.is_triangular():
                # only possible when the whole product lies in B
                carry = m
                continue
            carry, s = _split_affine(m)
            letters.append(Letter(Factor.AFFINE, s))
        else:
            carry, s = _split_triangular(m)
            letters.append(Letter(Factor.JONQUIERES, s))
    letters.reverse()
    return Word(carry, tuple(letters))


def factorize(phi: PlaneAutomorphism) -> Word:
    """Normal form head . s_1 ... s_r of phi; NotAnAutomorphism if none exists."""
    return normal_form(_raw_letters(phi), phi.field)


def word_maps(w: Word) -> list:
    return [w.head] + [l.map for l in w.letters]


def multiply(*words: Word) -> Word:
    """Normal form of the product of words (leftmost applied last)."""
    maps = []
    for w in words:
        maps.extend(word_maps(w))
    return normal_form(maps, words[0].field)


def length(phi: PlaneAutomorphism) -> int:
    return factorize(phi).length


def invert_word(w: Word) -> Word:
    """Normal form of the inverse."""
    maps = [l.inverse().map for l in reversed(w.letters)] + [invert_affine(w.head)]
    return normal_form(maps, w.field)


@lru_cache(maxsize=4096)
def inverse(phi: PlaneAutomorphism) -> PlaneAutomorphism:
    return invert_word(factorize(phi)).compose()


def conjugate_word(c: Word, w: Word) -> Word:
    """Normal form of c^-1 . w . c."""
    return multiply(invert_word(c), w, c)


def word_from_letters(head: PlaneAutomorphism, maps) -> Word:
    letters = tuple(Letter(factor_of(m) or Factor.JONQUIERES, m) for m in maps)
    return Word(head, letters)


# --- cyclic reduction and boundedness ----------------------------------------

def is_cyclically_reduced(w: Word) -> bool:
    return w.length <= 1 or w.length % 2 == 0


def cyclically_reduce(w: Word):
    """(conjugator, core) with conjugator . core . conjugator^-1 == w, core cyclically reduced."""
    K = w.field
    c = Word(PlaneAutomorphism.identity(K))
    current = w
    while not is_cyclically_reduced(current):
        k = normal_form([current.head, current.letters[0].map], K)
        current = conjugate_word(k, current)
        c = multiply(c, k)
    return c, current


def is_bounded(phi: PlaneAutomorphism) -> bool:
    """deg(phi o phi) <= deg(phi).

    phi o phi is composed letter by letter so that intermediate degrees stay small.
    """
    maps = word_maps(factorize(phi))
    return compose_all(maps + maps).degree <= phi.degree


def is_bounded_word(w: Word) -> bool:
    """Cyclically reduced core of length <= 1 (equivalent to is_bounded)."""
    return cyclically_reduce(w)[1].length <= 1


def core_length(phi: PlaneAutomorphism) -> int:
    return cyclically_reduce(factorize(phi))[1].length


# --- conjugacy into a factor -------------------------------------------------

class Verdict(str, Enum):
    AFFINE = "ConjugateIntoAffine"
    JONQUIERES = "ConjugateIntoJonquieres"
    NOT_CONJUGATE = "NotConjugate"


@dataclass(frozen=True)
class ConjugacyResult:
    verdict: Verdict
    conjugator: PlaneAutomorphism | None = None
    conjugated_generators: tuple | None = None
    detail: str = ""

    @property
    def conjugate(self) -> bool:
        return self.verdict is not Verdict.NOT_CONJUGATE

    def to_json(self):
        out = {"verdict": self.verdict.value}
        if self.conjugator is not None:
            out["conjugator"] = self.conjugator.to_json()
            out["conjugator_word"] = factorize(self.conjugator).to_json()
            out["conjugated_generators"] = [g.to_json() for g in self.conjugated_generators]
        if self.detail:
            out["detail"] = self.detail
        return out


def _common_factor(maps):
    if all(m.is_affine() for m in maps):
        return Verdict.AFFINE
    if all(m.is_triangular() for m in maps):
        return Verdict.JONQUIERES
    return None


def conjugate_into_factor(generators) -> ConjugacyResult:
    """Decide whether <generators> is conjugate into Aff or J, with a conjugator c
    such that c^-1 o g o c lies in that factor for every generator g."""
    if not generators:
        raise PreconditionViolation("empty generator list")
    K = generators[0].field
    conj = Word(PlaneAutomorphism.identity(K))
    all_words = [factorize(g) for g in generators]
    current = [w for w, g in zip(all_words, generators) if not g.is_identity()]
    for _ in range(64):
        if all(w.length <= 1 for w in current):
            verdict = _common_factor([w.compose() for w in current])
            if verdict is not None:
                return _finish(verdict, conj, all_words)
            # one generator strictly in Aff \ B and another strictly in J \ B:
            # their product has even length >= 2 and is unbounded
            return ConjugacyResult(Verdict.NOT_CONJUGATE, detail="generators in different factors")
        lengths = [w.length for w in current]
        top = max(lengths)
        i1 = lengths.index(top)
        w1 = current[i1]
        for j, w in enumerate(current):
            if not is_bounded_word(w):
                return ConjugacyResult(Verdict.NOT_CONJUGATE, detail=f"generator {j} is unbounded")
            if j != i1 and not is_bounded_word(multiply(w1, w)):
                return ConjugacyResult(Verdict.NOT_CONJUGATE, detail=f"product g1.g{j} is unbounded")
        if top % 2 == 0:  # pragma: no cover - even length >= 2 is unbounded
            raise InternalVerificationFailure("bounded generator with even length")
        s = top // 2
        prefix = normal_form([w1.head] + [l.map for l in w1.letters[:s]], K)
        conj = multiply(conj, prefix)
        new = [conjugate_word(prefix, w) for w in current]
        if max(w.length for w in new) >= top:
            raise InternalVerificationFailure("conjugation did not shorten the generators")
        current = new
    raise InternalVerificationFailure("conjugacy search did not terminate")  # pragma: no cover


def _finish(verdict, conj: Word, words) -> ConjugacyResult:
    conjugated = tuple(conjugate_word(conj, w).compose() for w in words)
    if _common_factor(conjugated) is not verdict:
        raise InternalVerificationFailure("conjugated generators left the claimed factor")
    return ConjugacyResult(verdict, conj.compose(), conjugated)


def _conjugate(c: PlaneAutomorphism, g: PlaneAutomorphism) -> PlaneAutomorphism:
    """c^-1 o g o c."""
    return conjugate_word(factorize(c), factorize(g)).compose()
