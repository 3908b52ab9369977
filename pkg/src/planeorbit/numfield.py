"""Exact arithmetic in a number field K = Q[t]/(m(t)).

Elements are stored as a *raw* value owned by the field: a ``gmpy2.mpq`` when
the field is Q, otherwise a tuple of ``mpq`` coefficients (constant term
first) reduced modulo the monic minimal polynomial.  Polynomial code works on
raw values directly and only wraps them in :class:`FieldElement` at the API
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from numbers import Rational

import sympy
from gmpy2 import mpq

from .errors import (
    DivisionByZero,
    FieldMismatch,
    RootOfUnityInput,
    ZeroElement,
)

ZERO = mpq(0)
ONE = mpq(1)


def to_mpq(value) -> mpq:
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, (int, Rational)) or type(value).__name__ == "mpq":
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


# --- dense univariate helpers over Q (lists, constant term first) ----------

def _qtrim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(a, b):
    a = list(a)
    _qtrim(a)
    b = _qtrim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        _qtrim(a)
    return _qtrim(q), a


def _qsub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else ZERO) - (b[i] if i < len(b) else ZERO) for i in range(n)]
    return _qtrim(out)


def _qmul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _qtrim(out)


def _qinverse_mod(a, m):
    """Inverse of a modulo m in Q[t] by the extended Euclidean algorithm."""
    r0, r1 = list(m), _qtrim(list(a))
    s0, s1 = [], [ONE]
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    # r0 is the gcd; for irreducible m it is a nonzero constant
    if len(r0) != 1:
        raise ArithmeticError("minimal polynomial is reducible: found a zero divisor")
    c = r0[0]
    return [s / c for s in s0]


# --- fields ----------------------------------------------------------------

@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int):
    t = sympy.Symbol("t")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, t), t)
    return tuple(mpq(int(c)) for c in reversed(poly.all_coeffs()))


@dataclass(frozen=True, eq=False)
class NumberField:
    """Field descriptor: Q, a cyclotomic field, or Q[t]/(custom minpoly)."""

    mode: str
    minpoly: tuple  # monic, constant term first
    n: int | None = None
    trusted: bool = True

    @classmethod
    def rationals(cls) -> "NumberField":
        return _RATIONALS

    @classmethod
    def cyclotomic(cls, n: int) -> "NumberField":
        if n < 1:
            raise ValueError("cyclotomic index must be positive")
        coeffs = _cyclotomic_coeffs(n)
        if len(coeffs) == 2:
            # Q(zeta_1) = Q(zeta_2) = Q
            return cls("cyclotomic", (ZERO, ONE), n=n)
        return cls("cyclotomic", coeffs, n=n)

    @classmethod
    def custom(cls, minpoly, trusted: bool = True) -> "NumberField":
        coeffs = _qtrim([to_mpq(c) for c in minpoly])
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have positive degree")
        lead = coeffs[-1]
        coeffs = [c / lead for c in coeffs]
        _sanity_check_irreducible(coeffs)
        return cls("custom", tuple(coeffs), trusted=trusted)

    @classmethod
    def from_descriptor(cls, desc) -> "NumberField":
        """Build from ``"Q"``, ``{"mode": "rationals"}``, ``{"mode": "cyclotomic", "n": 12}``
        or ``{"mode": "custom", "minpoly": [...], "trusted": true}``."""
        if desc is None or desc in ("Q", "rationals"):
            return cls.rationals()
        if not isinstance(desc, dict) or "mode" not in desc:
            raise ValueError(f"bad field descriptor {desc!r}")
        mode = desc["mode"]
        if mode == "rationals":
            return cls.rationals()
        if mode == "cyclotomic":
            return cls.cyclotomic(int(desc["n"]))
        if mode == "custom":
            return cls.custom(desc["minpoly"], bool(desc.get("trusted", True)))
        raise ValueError(f"unknown field mode {mode!r}")

    @cached_property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def is_rationals(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        if self.is_rationals:
            return "NumberField(Q)"
        if self.mode == "cyclotomic":
            return f"NumberField(Q(zeta_{self.n}))"
        return f"NumberField(Q[t]/({_format_qpoly(self.minpoly)}))"

    def describe(self) -> dict:
        if self.mode == "rationals" or (self.is_rationals and self.mode != "cyclotomic"):
            return {"mode": "rationals", "degree": 1}
        if self.mode == "cyclotomic":
            return {"mode": "cyclotomic", "n": self.n, "degree": self.degree}
        return {
            "mode": "custom",
            "minpoly": [str(c) for c in self.minpoly],
            "trusted": self.trusted,
            "degree": self.degree,
        }

    # raw-value arithmetic; hot paths for polynomial code

    @property
    def zero_raw(self):
        return ZERO if self.degree == 1 else (ZERO,) * self.degree

    @property
    def one_raw(self):
        return ONE if self.degree == 1 else (ONE,) + (ZERO,) * (self.degree - 1)

    def raw_from_rational(self, q):
        q = to_mpq(q)
        return q if self.degree == 1 else (q,) + (ZERO,) * (self.degree - 1)

    def raw_from_coeffs(self, coeffs):
        coeffs = [to_mpq(c) for c in coeffs]
        if len(coeffs) > self.degree:
            _, coeffs = _qdivmod(coeffs, self.minpoly)
        coeffs = coeffs + [ZERO] * (self.degree - len(coeffs))
        return coeffs[0] if self.degree == 1 else tuple(coeffs)

    def raw_coeffs(self, raw) -> tuple:
        return (raw,) if self.degree == 1 else raw

    def is_zero(self, raw) -> bool:
        if self.degree == 1:
            return not raw
        return not any(raw)

    def is_rational_raw(self, raw) -> bool:
        return self.degree == 1 or not any(raw[1:])

    def add(self, a, b):
        if self.degree == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        if self.degree == 1:
            return a - b
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        if self.degree == 1:
            return -a
        return tuple(-x for x in a)

    def mul(self, a, b):
        d = self.degree
        if d == 1:
            return a * b
        prod = [ZERO] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        m = self.minpoly
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                base = k - d
                for i in range(d):
                    if m[i]:
                        prod[base + i] -= c * m[i]
        return tuple(prod[:d])

    def scale(self, a, q):
        """Multiply raw ``a`` by a rational ``q``."""
        if self.degree == 1:
            return a * q
        return tuple(x * q for x in a)

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero("division by zero in number field")
        if self.degree == 1:
            return 1 / a
        if not any(a[1:]):
            c = 1 / a[0]
            return (c,) + (ZERO,) * (self.degree - 1)
        return self.raw_from_coeffs(_qinverse_mod(list(a), self.minpoly))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.one_raw
        while k:
            if k & 1:
                result = self.mul(result, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return result

    # element-level API

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.raw_from_coeffs(value))
        return FieldElement(self, self.raw_from_rational(value))

    def wrap(self, raw) -> "FieldElement":
        return FieldElement(self, raw)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, -self.minpoly[0])
        return FieldElement(self, (ZERO, ONE) + (ZERO,) * (self.degree - 2))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, self.zero_raw)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self.one_raw)

    def from_json(self, data) -> "FieldElement":
        if isinstance(data, (list, tuple)):
            return FieldElement(self, self.raw_from_coeffs([mpq(str(c)) for c in data]))
        return self(mpq(str(data)))


_RATIONALS = NumberField("rationals", (ZERO, ONE))


def _format_qpoly(coeffs, var="t"):
    parts = []
    for i, c in enumerate(coeffs):
        if c:
            parts.append(f"{c}*{var}^{i}" if i else str(c))
    return " + ".join(reversed(parts)) or "0"


def _sanity_check_irreducible(coeffs):
    """Reject minimal polynomials with a rational root (complete for degree <= 3)."""
    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(coeffs)], t, domain="QQ")
    if poly.degree() > 1 and poly.ground_roots():
        raise ValueError(f"minimal polynomial {poly.as_expr()} has a rational root")


# --- elements --------------------------------------------------------------

class FieldElement:
    """Immutable exact element of a :class:`NumberField`."""

    __slots__ = ("field", "raw")

    def __init__(self, field: NumberField, raw):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine elements of {self.field} and {other.field}")
            return other.raw
        try:
            return self.field.raw_from_rational(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.power(self.raw, int(k)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.raw))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.raw == other.raw
        o = self._coerce(other)
        return o is not None and self.raw == o

    def __hash__(self):
        return hash(self.raw)

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    @property
    def coeffs(self) -> tuple:
        return self.field.raw_coeffs(self.raw)

    @property
    def is_rational(self) -> bool:
        return self.field.is_rational_raw(self.raw)

    def as_rational(self) -> mpq:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def sort_key(self):
        return tuple(self.coeffs)

    def to_json(self) -> list:
        return [str(c) for c in self.coeffs]

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"FieldElement({self})"


def format_element(u: FieldElement, var: str = "t") -> str:
    """Render as ``a0 + a1*t + ...`` (rationals print bare)."""
    coeffs = u.coeffs
    if u.is_rational:
        return str(coeffs[0])
    out = ""
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


# --- decision subroutines --------------------------------------------------

def norm(u: FieldElement) -> mpq:
    """Field norm N_{K/Q}(u): determinant of multiplication by u."""
    K = u.field
    d = K.degree
    if d == 1:
        return u.raw
    basis = [K.raw_from_coeffs([ZERO] * i + [ONE]) for i in range(d)]
    rows = [list(K.mul(u.raw, e)) for e in basis]
    return _det(rows)


def _det(rows):
    m = [list(r) for r in rows]
    n = len(m)
    det = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


@lru_cache(maxsize=None)
def _totient(k: int) -> int:
    return int(sympy.totient(k))


def root_of_unity_order(u: FieldElement) -> int | None:
    """Multiplicative order of ``u`` if it is a root of unity, else None.

    Candidates are the k with phi(k) <= [K:Q]; since phi(k) >= sqrt(k/2)
    every such k is at most 2*[K:Q]**2.
    """
    if not u:
        raise ZeroElement("zero has no multiplicative order")
    K = u.field
    d = K.degree
    if u.is_rational:
        q = u.as_rational()
        return 1 if q == 1 else 2 if q == -1 else None
    one = K.one_raw
    acc = u.raw
    for k in range(1, 2 * d * d + 1):
        if _totient(k) <= d and acc == one:
            return k
        acc = K.mul(acc, u.raw)
    return None


@dataclass(frozen=True)
class Dependence:
    """Least relation a**r1 == b**r2 with r1, r2 > 0, or None.

    ``exhaustive`` is False when the answer came from the bounded search
    used for pairs of norm +-1, in which case None means "not found".
    """

    relation: tuple | None
    exhaustive: bool = True

    def __bool__(self):
        return self.relation is not None


def _exponent_vector(q: mpq) -> dict:
    vec = dict(sympy.factorint(int(q.numerator)))
    for p, e in sympy.factorint(int(q.denominator)).items():
        vec[p] = vec.get(p, 0) - e
    vec.pop(-1, None)
    return vec


def _rational_relation(qa: mpq, qb: mpq):
    """Least (R1, R2) > 0 with |qa|**R1 == |qb|**R2, or None."""
    ea, eb = _exponent_vector(abs(qa)), _exponent_vector(abs(qb))
    if not ea or not eb or set(ea) != set(eb):
        return None
    p = min(ea)
    ratio = Fraction(ea[p], eb[p])
    if ratio <= 0:
        return None
    if any(Fraction(ea[q], eb[q]) != ratio for q in ea):
        return None
    # r1 * ea == r2 * eb  <=>  r2 / r1 == ea / eb
    return ratio.denominator, ratio.numerator


def multiplicative_dependence(a: FieldElement, b: FieldElement, bound: int = 64) -> Dependence:
    """Decide whether a**r1 == b**r2 for some positive integers r1, r2.

    Norms reduce the question to a rational one: every relation is a multiple
    k*(R1, R2) of the least relation between |N(a)| and |N(b)|, and k must be a
    multiple of the order of the root of unity a**R1 / b**R2.  When both norms
    are units no such reduction exists and a bounded search is used.
    """
    if not a or not b:
        raise ZeroElement("multiplicative dependence of zero")
    if a.field != b.field:
        raise FieldMismatch("elements from different fields")
    if root_of_unity_order(a) is not None or root_of_unity_order(b) is not None:
        raise RootOfUnityInput("inputs must not be roots of unity")
    na, nb = norm(a), norm(b)
    unit_a, unit_b = abs(na) == 1, abs(nb) == 1
    if unit_a and unit_b:
        return _bounded_dependence(a, b, bound)
    if unit_a or unit_b:
        return Dependence(None)
    rel = _rational_relation(na, nb)
    if rel is None:
        return Dependence(None)
    r1, r2 = rel
    w = a ** r1 / b ** r2
    k = root_of_unity_order(w)
    if k is None:
        return Dependence(None)
    return Dependence((k * r1, k * r2))


def _bounded_dependence(a, b, bound):
    K = a.field
    b_powers = {}
    acc = b.raw
    for r2 in range(1, bound + 1):
        b_powers.setdefault(acc, r2)
        acc = K.mul(acc, b.raw)
    acc = a.raw
    for r1 in range(1, bound + 1):
        r2 = b_powers.get(acc)
        if r2 is not None:
            return Dependence((r1, r2), exhaustive=False)
        acc = K.mul(acc, a.raw)
    return Dependence(None, exhaustive=False)


# --- roots of univariate polynomials over K --------------------------------

def _kp_trim(p, K):
    while p and K.is_zero(p[-1]):
        p.pop()
    return p


def _kp_divmod(a, b, K):
    a = _kp_trim(list(a), K)
    b = _kp_trim(list(b), K)
    inv_lead = K.inv(b[-1])
    q = [K.zero_raw] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = K.mul(a[-1], inv_lead)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = K.sub(a[shift + i], K.mul(c, bc))
        a[-1] = K.zero_raw
        _kp_trim(a, K)
    return q, a


def _kp_gcd(a, b, K):
    a, b = _kp_trim(list(a), K), _kp_trim(list(b), K)
    while b:
        _, r = _kp_divmod(a, b, K)
        a, b = b, r
    inv = K.inv(a[-1])
    return [K.mul(c, inv) for c in a]


def _kp_derivative(p, K):
    return _kp_trim([K.scale(c, i) for i, c in enumerate(p)][1:], K)


def roots_in_field(coeffs, field: NumberField | None = None) -> list:
    """Distinct roots in K of sum(coeffs[i] * X**i), sorted canonically.

    Over Q this is rational root finding; over a proper extension the roots
    come from linear factors found by Trager's norm method, with the norm
    factored over Q by sympy.
    """
    K = field or coeffs[0].field
    p = _kp_trim([K(c).raw for c in coeffs], K)
    if len(p) <= 1:
        return []
    if len(p) == 2:
        return [K.wrap(K.neg(K.div(p[0], p[1])))]
    X = sympy.Symbol("X")
    if K.degree == 1:
        poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(p)], X, domain="QQ")
        roots = [K(mpq(int(r.p), int(r.q))) for r in poly.ground_roots()]
        return sorted(roots, key=FieldElement.sort_key)
    dp = _kp_derivative(p, K)
    g = _kp_gcd(p, dp, K)
    if len(g) > 1:
        p, _ = _kp_divmod(p, g, K)
    t = sympy.Symbol("t")
    m_expr = sum(_sym(c) * t ** i for i, c in enumerate(K.minpoly))
    theta = K.gen
    roots = []
    for shift in range(0, 32):
        # p(X - shift*theta)
        sub = [K.zero_raw]
        lin = [K.neg(K.scale(theta.raw, shift)), K.one_raw]
        for c in reversed(p):
            sub = _kp_mul(sub, lin, K)
            sub[0] = K.add(sub[0], c)
        expr = sum(
            sum(_sym(cc) * t ** j for j, cc in enumerate(K.raw_coeffs(c))) * X ** i
            for i, c in enumerate(sub)
        )
        N = sympy.Poly(sympy.resultant(m_expr, expr, t), X, domain="QQ")
        if sympy.degree(sympy.gcd(N, N.diff(X)), X) > 0:
            continue
        for factor, _ in N.factor_list()[1]:
            if factor.degree() > K.degree:
                continue
            q = [K.raw_from_rational(mpq(int(c.p), int(c.q))) for c in reversed(factor.all_coeffs())]
            h = _kp_gcd(sub, q, K)
            if len(h) == 2:
                s = K.neg(h[0])
                roots.append(K.wrap(K.add(s, K.scale(theta.raw, -shift))))
        break
    else:  # pragma: no cover - a good shift always exists among few candidates
        raise ArithmeticError("no separating shift found")
    return sorted(set(roots), key=FieldElement.sort_key)


def _kp_mul(a, b, K):
    out = [K.zero_raw] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = K.add(out[i + j], K.mul(x, y))
    return out


def _sym(q):
    return sympy.Rational(int(q.numerator), int(q.denominator))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
