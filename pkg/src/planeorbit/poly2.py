"""Sparse bivariate polynomials over a number field, plus their text syntax.

Terms live in a dict ``{(i, j): raw}`` for the monomial x^i y^j; raw values
are owned by the field (see :mod:`planeorbit.numfield`).  Zero coefficients
are never stored, so dict equality is structural equality.
"""

from __future__ import annotations

import re

from .errors import FieldMismatch, ParseError, ZeroPolynomial
from .numfield import FieldElement, NumberField, format_element, to_mpq


class BiPoly:
    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: NumberField, terms=None):
        self.field = field
        if terms is None:
            terms = {}
        self.terms = {k: v for k, v in terms.items() if not field.is_zero(v)}
        self._hash = None

    # constructors

    @classmethod
    def _raw(cls, field, terms):
        """Wrap a dict already known to have no zero entries."""
        p = cls.__new__(cls)
        p.field = field
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def x(cls, field):
        return cls._raw(field, {(1, 0): field.one_raw})

    @classmethod
    def y(cls, field):
        return cls._raw(field, {(0, 1): field.one_raw})

    @classmethod
    def const(cls, field, value):
        return cls(field, {(0, 0): field(value).raw})

    @classmethod
    def zero(cls, field):
        return cls._raw(field, {})

    @classmethod
    def one(cls, field):
        return cls._raw(field, {(0, 0): field.one_raw})

    @classmethod
    def monomial(cls, field, i, j, coeff=1):
        return cls(field, {(i, j): field(coeff).raw})

    @classmethod
    def parse(cls, text: str, field: NumberField):
        return parse_poly(text, field)

    # basic data

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, FieldElement)) or type(other).__name__ == "mpq":
            return self == BiPoly.const(self.field, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        """Terms in graded lexicographic order, highest first (x before y)."""
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def degree_in(self, var: str) -> int:
        k = 0 if var == "x" else 1
        return max((m[k] for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def constant_term(self) -> FieldElement:
        return self.field.wrap(self.terms.get((0, 0), self.field.zero_raw))

    def coeff(self, i: int, j: int) -> FieldElement:
        return self.field.wrap(self.terms.get((i, j), self.field.zero_raw))

    def leading_form(self) -> "BiPoly":
        d = self.degree
        return BiPoly._raw(self.field, {m: c for m, c in self.terms.items() if m[0] + m[1] == d})

    def homogeneous_part(self, d: int) -> "BiPoly":
        return BiPoly._raw(self.field, {m: c for m, c in self.terms.items() if m[0] + m[1] == d})

    def leading_coeff(self) -> FieldElement:
        """Coefficient of the graded-lex largest monomial."""
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.field.wrap(self.sorted_terms()[0][1])

    def monic(self) -> "BiPoly":
        return self.scale(self.leading_coeff().inverse())

    # arithmetic

    def _check(self, other):
        if isinstance(other, BiPoly):
            if other.field != self.field:
                raise FieldMismatch(f"polynomials over {self.field} and {other.field}")
            return other
        try:
            return BiPoly.const(self.field, other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        K = self.field
        out = dict(self.terms)
        for m, c in o.terms.items():
            if m in out:
                s = K.add(out[m], c)
                if K.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return BiPoly._raw(K, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.field
        return BiPoly._raw(K, {m: K.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        K = self.field
        if len(o.terms) == 1 and (0, 0) in o.terms:
            return self.scale_raw(o.terms[(0, 0)])
        if len(self.terms) == 1 and (0, 0) in self.terms:
            return o.scale_raw(self.terms[(0, 0)])
        out = {}
        get = out.get
        other = list(o.terms.items())
        if K.degree == 1:
            # rational coefficients: plain mpq arithmetic on the hot path
            for (i1, j1), c1 in self.terms.items():
                for (i2, j2), c2 in other:
                    m = (i1 + i2, j1 + j2)
                    out[m] = get(m, 0) + c1 * c2
            return BiPoly._raw(K, {m: c for m, c in out.items() if c})
        mul, add = K.mul, K.add
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other:
                m = (i1 + i2, j1 + j2)
                p = mul(c1, c2)
                prev = get(m)
                out[m] = p if prev is None else add(prev, p)
        return BiPoly._raw(K, {m: c for m, c in out.items() if not K.is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = BiPoly.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale_raw(self, raw) -> "BiPoly":
        K = self.field
        if K.is_zero(raw):
            return BiPoly.zero(K)
        return BiPoly._raw(K, {m: K.mul(c, raw) for m, c in self.terms.items()})

    def scale(self, c) -> "BiPoly":
        return self.scale_raw(self.field(c).raw)

    # evaluation and substitution

    def evaluate(self, px, py) -> FieldElement:
        K = self.field
        px, py = K(px).raw, K(py).raw
        return K.wrap(self._evaluate_raw(px, py))

    def _evaluate_raw(self, px, py):
        K = self.field
        xp, yp = power_cache(K, px, K.mul), power_cache(K, py, K.mul)
        total = K.zero_raw
        for (i, j), c in self.terms.items():
            total = K.add(total, K.mul(c, K.mul(xp(i), yp(j))))
        return total

    def substitute(self, x_image: "BiPoly", y_image: "BiPoly") -> "BiPoly":
        """f(x_image, y_image), grouped by x-power (Horner in x)."""
        K = self.field
        if x_image.field != K or y_image.field != K:
            raise FieldMismatch("substitution across fields")
        if not self.terms:
            return self
        ypow = power_cache(K, y_image, lambda a, b: a * b, one=BiPoly.one(K))
        by_i = {}
        for (i, j), c in self.terms.items():
            by_i.setdefault(i, []).append((j, c))
        # Horner over the x-powers that occur
        result = BiPoly.zero(K)
        prev = None
        for i in sorted(by_i, reverse=True):
            inner = BiPoly.zero(K)
            for j, c in by_i[i]:
                inner = inner + ypow(j).scale_raw(c)
            if prev is None:
                result = inner
            else:
                result = result * (x_image ** (prev - i)) + inner
            prev = i
        if prev:
            result = result * (x_image ** prev)
        return result

    def derivative(self, var: str) -> "BiPoly":
        K = self.field
        out = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i:
                out[(i - 1, j)] = K.scale(c, i)
            elif var == "y" and j:
                out[(i, j - 1)] = K.scale(c, j)
        return BiPoly._raw(K, out)

    def coefficient_height(self) -> int:
        """Largest bit length among numerators/denominators of the coefficients."""
        h = 0
        for c in self.terms.values():
            for q in self.field.raw_coeffs(c):
                h = max(h, q.numerator.bit_length(), q.denominator.bit_length())
        return h

    # text

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"BiPoly({format_poly(self)})"


def power_cache(K, base, mul, one=None):
    powers = [K.one_raw if one is None else one, base]

    def power(k):
        while len(powers) <= k:
            powers.append(mul(powers[-1], base))
        return powers[k]

    return power


def jacobian(f: BiPoly, g: BiPoly) -> BiPoly:
    return f.derivative("x") * g.derivative("y") - f.derivative("y") * g.derivative("x")


def proportional(f: BiPoly, g: BiPoly):
    """The constant c with f == c*g, or None."""
    if not f or not g:
        raise ZeroPolynomial("proportionality test needs nonzero polynomials")
    if f.terms.keys() != g.terms.keys():
        return None
    K = f.field
    m0 = next(iter(f.terms))
    c = K.div(f.terms[m0], g.terms[m0])
    for m, v in f.terms.items():
        if K.mul(c, g.terms[m]) != v:
            return None
    return K.wrap(c)


# --- exact linear algebra over K --------------------------------------------

def _row_reduce(K, rows, ncols):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not K.is_zero(rows[i][col])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = K.inv(rows[r][col])
        rows[r] = [K.mul(v, inv) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not K.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [K.sub(a, K.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_linear(K: NumberField, columns, target):
    """Raw coefficients c with sum c_k * columns[k] == target (vectors as dicts), or None."""
    keys = set(target)
    for col in columns:
        keys.update(col)
    keys = sorted(keys)
    n = len(columns)
    zero = K.zero_raw
    rows = [[col.get(k, zero) for col in columns] + [target.get(k, zero)] for k in keys]
    pivots = _row_reduce(K, rows, n + 1)
    if n in pivots:
        return None
    sol = [zero] * n
    for r, col in enumerate(pivots):
        sol[col] = rows[r][n]
    return sol


def nullspace(K: NumberField, columns):
    """Basis of {c : sum c_k * columns[k] == 0}, raw vectors."""
    keys = set()
    for col in columns:
        keys.update(col)
    keys = sorted(keys)
    n = len(columns)
    zero = K.zero_raw
    rows = [[col.get(k, zero) for col in columns] for k in keys]
    pivots = _row_reduce(K, rows, n) if rows else []
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * n
        v[fc] = K.one_raw
        for r, pc in enumerate(pivots):
            v[pc] = K.neg(rows[r][fc])
        basis.append(v)
    return basis


def solve_linear_coeffs(targets, basis, with_constant: bool = False):
    """Express each target as a K-linear combination of ``basis`` (and 1).

    Returns one coefficient list per target (the constant coefficient last
    when ``with_constant``), or None if some target is outside the span.
    """
    if not basis and not with_constant:
        return None
    K = (basis[0] if basis else targets[0]).field
    for b in basis:
        if not b:
            raise ZeroPolynomial("basis polynomial is zero")
    cols = [b.terms for b in basis]
    if with_constant:
        cols.append({(0, 0): K.one_raw})
    out = []
    for t in targets:
        sol = solve_linear(K, cols, t.terms)
        if sol is None:
            return None
        out.append([K.wrap(c) for c in sol])
    return out


# --- univariate view ----------------------------------------------------------

class UniPoly:
    """Dense polynomial in one variable; ``coeffs[i]`` is the raw coefficient of v^i."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        cs = [field(c).raw if not _is_raw(field, c) else c for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_bipoly(cls, f: BiPoly, var: str = "y"):
        k = 1 if var == "y" else 0
        if any(m[1 - k] for m in f.terms):
            raise ValueError(f"{f} is not a polynomial in {var} alone")
        deg = max((m[k] for m in f.terms), default=-1)
        cs = [f.field.zero_raw] * (deg + 1)
        for m, c in f.terms.items():
            cs[m[k]] = c
        return cls(f.field, cs)

    def to_bipoly(self, var: str = "y") -> BiPoly:
        K = self.field
        if var == "y":
            return BiPoly(K, {(0, i): c for i, c in enumerate(self.coeffs)})
        return BiPoly(K, {(i, 0): c for i, c in enumerate(self.coeffs)})

    def compose_into(self, image: BiPoly) -> BiPoly:
        """self(image) as a bivariate polynomial."""
        K = self.field
        result = BiPoly.zero(K)
        for c in reversed(self.coeffs):
            result = result * image + BiPoly(K, {(0, 0): c})
        return result

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def coeff(self, i) -> FieldElement:
        return self.field.wrap(self.coeffs[i] if i < len(self.coeffs) else self.field.zero_raw)

    def evaluate(self, v) -> FieldElement:
        K = self.field
        v = K(v).raw
        acc = K.zero_raw
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, v), c)
        return K.wrap(acc)

    def taylor_shift(self, s) -> "UniPoly":
        """Coefficients of self(v + s) in v."""
        K = self.field
        s = K(s).raw
        out = [K.zero_raw]
        for c in reversed(self.coeffs):
            # out = out * (v + s) + c
            nxt = [K.zero_raw] * (len(out) + 1)
            for i, a in enumerate(out):
                nxt[i + 1] = K.add(nxt[i + 1], a)
                nxt[i] = K.add(nxt[i], K.mul(a, s))
            nxt[0] = K.add(nxt[0], c)
            out = nxt
        return UniPoly(K, out)

    def __repr__(self):
        return f"UniPoly({format_poly(self.to_bipoly())})"


def _is_raw(K, c):
    if K.degree == 1:
        return type(c).__name__ == "mpq"
    return isinstance(c, tuple)


# --- printing -----------------------------------------------------------------

def _format_monomial(i, j):
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def format_poly(f: BiPoly) -> str:
    """Canonical text: graded-lex order, rational coefficients bare, others parenthesized."""
    if not f.terms:
        return "0"
    K = f.field
    out = []
    for (i, j), c in f.sorted_terms():
        mono = _format_monomial(i, j)
        u = K.wrap(c)
        if u.is_rational:
            q = u.as_rational()
            neg = q < 0
            mag = abs(q)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
        else:
            neg = False
            body = f"({format_element(u)})" + (f"*{mono}" if mono else "")
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# --- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([xyt])|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            nxt = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[nxt]!r}", text=text, pos=nxt)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("var", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent: expr := term (('+'|'-') term)*, term := unary (('*'|'/') unary)*,
    unary := ('-'|'+') unary | power, power := atom ('^' int)?"""

    def __init__(self, text, field):
        self.text = text
        self.field = field
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, text=self.text, pos=tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()
            rhs = self.unary()
            if op[1] == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or not rhs:
                    self.fail("division only by nonzero constants", op)
                value = value.scale(rhs.constant_term().inverse())
        return value

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a nonnegative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        K = self.field
        kind, val, _ = tok
        if kind == "num":
            return BiPoly.const(K, to_mpq(val))
        if kind == "var":
            if val == "x":
                return BiPoly.x(K)
            if val == "y":
                return BiPoly.y(K)
            if K.degree == 1:
                self.fail("field generator t used over the rationals", tok)
            return BiPoly(K, {(0, 0): K.gen.raw})
        if tok[:2] == ("op", "("):
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return value
        self.fail(f"unexpected token {val!r}" if kind != "end" else "unexpected end of input", tok)


def parse_poly(text: str, field: NumberField) -> BiPoly:
    """Parse a polynomial in x, y with coefficients built from rationals and t."""
    return _Parser(text, field).parse()


def parse_element(text: str, field: NumberField) -> FieldElement:
    p = parse_poly(text, field)
    if not p.is_constant():
        raise ParseError(f"expected a field element, got {text!r}", text=text)
    return p.constant_term()
