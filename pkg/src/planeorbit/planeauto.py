"""Polynomial automorphisms of the affine plane and points they act on."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatch, NotAnAutomorphism, ParseError
from .numfield import FieldElement, NumberField
from .poly2 import BiPoly, jacobian, parse_poly


@dataclass(frozen=True)
class PlanePoint:
    x: FieldElement
    y: FieldElement

    @classmethod
    def of(cls, field: NumberField, x, y) -> "PlanePoint":
        return cls(field(x), field(y))

    @property
    def field(self) -> NumberField:
        return self.x.field

    def sort_key(self):
        return (self.x.sort_key(), self.y.sort_key())

    def to_json(self):
        return [str(self.x), str(self.y)]

    def __str__(self):
        return f"({self.x}, {self.y})"


class PlaneAutomorphism:
    """phi = (x_image, y_image), acting on points by p -> (x_image(p), y_image(p)).

    Construction runs the Jacobian pre-filter; full certification is done by
    factorization (see :func:`planeorbit.amalgam.factorize`).
    """

    __slots__ = ("x_image", "y_image", "_hash")

    def __init__(self, x_image: BiPoly, y_image: BiPoly, check: bool = True):
        if x_image.field != y_image.field:
            raise FieldMismatch("components over different fields")
        self.x_image = x_image
        self.y_image = y_image
        self._hash = None
        if check:
            jac = jacobian(x_image, y_image)
            if not jac or not jac.is_constant():
                raise NotAnAutomorphism(f"Jacobian of {self} is not a nonzero constant")

    @classmethod
    def identity(cls, field: NumberField) -> "PlaneAutomorphism":
        return cls(BiPoly.x(field), BiPoly.y(field), check=False)

    @classmethod
    def parse(cls, text: str, field: NumberField) -> "PlaneAutomorphism":
        return parse_map(text, field)

    @classmethod
    def affine(cls, field, m11, m12, m21, m22, e1=0, e2=0) -> "PlaneAutomorphism":
        """(m11 x + m12 y + e1, m21 x + m22 y + e2)."""
        X, Y = BiPoly.x(field), BiPoly.y(field)
        return cls(X.scale(m11) + Y.scale(m12) + e1, X.scale(m21) + Y.scale(m22) + e2)

    @classmethod
    def triangular(cls, field, a, P: BiPoly, b, c) -> "PlaneAutomorphism":
        """(a x + P(y), b y + c) with P a polynomial in y."""
        X, Y = BiPoly.x(field), BiPoly.y(field)
        return cls(X.scale(a) + P, Y.scale(b) + c)

    @property
    def field(self) -> NumberField:
        return self.x_image.field

    @property
    def bidegree(self) -> tuple:
        return (self.x_image.degree, self.y_image.degree)

    @property
    def degree(self) -> int:
        return max(self.bidegree)

    def __eq__(self, other):
        return (
            isinstance(other, PlaneAutomorphism)
            and self.x_image == other.x_image
            and self.y_image == other.y_image
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.x_image, self.y_image))
        return self._hash

    def __str__(self):
        return f"({self.x_image}, {self.y_image})"

    def __repr__(self):
        return f"PlaneAutomorphism{self}"

    def is_identity(self) -> bool:
        K = self.field
        return self.x_image == BiPoly.x(K) and self.y_image == BiPoly.y(K)

    def is_affine(self) -> bool:
        return self.degree <= 1

    def is_triangular(self) -> bool:
        """Of the form (a x + P(y), b y + c)."""
        g = self.y_image
        if any(m not in ((0, 0), (0, 1)) for m in g.terms) or (0, 1) not in g.terms:
            return False
        f = self.x_image
        if (1, 0) not in f.terms:
            return False
        return all(m == (1, 0) or m[0] == 0 for m in f.terms)

    def is_upper_triangular_affine(self) -> bool:
        return self.is_affine() and self.is_triangular()

    def linear_part(self):
        """Rows (coefficients of x, y) of each component, for affine maps."""
        f, g = self.x_image, self.y_image
        return ((f.coeff(1, 0), f.coeff(0, 1)), (g.coeff(1, 0), g.coeff(0, 1)))

    def translation(self):
        return (self.x_image.constant_term(), self.y_image.constant_term())

    def __call__(self, p: PlanePoint) -> PlanePoint:
        return apply(self, p)

    def __matmul__(self, other):
        return compose(self, other)

    def power(self, n: int) -> "PlaneAutomorphism":
        base = self if n >= 0 else invert(self)
        n = abs(n)
        result = PlaneAutomorphism.identity(self.field)
        while n:
            if n & 1:
                result = compose(result, base)
            n >>= 1
            if n:
                base = compose(base, base)
        return result

    def pullback(self, f: BiPoly) -> BiPoly:
        """phi^* f = f o phi."""
        return f.substitute(self.x_image, self.y_image)

    def to_json(self):
        return [str(self.x_image), str(self.y_image)]


def compose(outer: PlaneAutomorphism, inner: PlaneAutomorphism) -> PlaneAutomorphism:
    """outer o inner: the map p -> outer(inner(p))."""
    if outer.field != inner.field:
        raise FieldMismatch("composition across fields")
    return PlaneAutomorphism(
        outer.x_image.substitute(inner.x_image, inner.y_image),
        outer.y_image.substitute(inner.x_image, inner.y_image),
        check=False,
    )


def compose_all(maps, field=None) -> PlaneAutomorphism:
    """maps[0] o maps[1] o ... (leftmost applied last)."""
    maps = list(maps)
    if not maps:
        return PlaneAutomorphism.identity(field)
    result = maps[-1]
    for m in reversed(maps[:-1]):
        result = compose(m, result)
    return result


def invert(phi: PlaneAutomorphism) -> PlaneAutomorphism:
    from .amalgam import factorize, invert_word

    return invert_word(factorize(phi)).compose()


def apply(phi: PlaneAutomorphism, p: PlanePoint) -> PlanePoint:
    K = phi.field
    if p.field != K:
        raise FieldMismatch("point and map over different fields")
    px, py = p.x.raw, p.y.raw
    return PlanePoint(
        K.wrap(phi.x_image._evaluate_raw(px, py)),
        K.wrap(phi.y_image._evaluate_raw(px, py)),
    )


def invert_affine(phi: PlaneAutomorphism) -> PlaneAutomorphism:
    (m11, m12), (m21, m22) = phi.linear_part()
    e1, e2 = phi.translation()
    det = m11 * m22 - m12 * m21
    if not det:
        raise NotAnAutomorphism(f"affine map {phi} is singular")
    i11, i12, i21, i22 = m22 / det, -m12 / det, -m21 / det, m11 / det
    return PlaneAutomorphism.affine(
        phi.field, i11, i12, i21, i22, -(i11 * e1 + i12 * e2), -(i21 * e1 + i22 * e2)
    )


def invert_triangular(phi: PlaneAutomorphism) -> PlaneAutomorphism:
    """(a x + P(y), b y + c)^-1 = (a^-1 x - a^-1 P(b^-1 y - b^-1 c), b^-1 y - b^-1 c)."""
    K = phi.field
    a = phi.x_image.coeff(1, 0)
    P = phi.x_image - BiPoly.x(K).scale(a)
    b = phi.y_image.coeff(0, 1)
    c = phi.y_image.constant_term()
    ainv, binv = a.inverse(), b.inverse()
    y_new = BiPoly.y(K).scale(binv) - c * binv
    x_new = BiPoly.x(K).scale(ainv) - P.substitute(BiPoly.x(K), y_new).scale(ainv)
    return PlaneAutomorphism(x_new, y_new, check=False)


def bidegree(phi: PlaneAutomorphism) -> tuple:
    return phi.bidegree


def _split_pair(text: str):
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("automorphism must be written as '(f, g)'", text=text, pos=0)
    inner = s[1:-1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i], inner[i + 1:], text.index(s) + 1, i
    raise ParseError("expected two components separated by ','", text=text, pos=len(text))


def parse_map(text, field: NumberField, check: bool = True) -> PlaneAutomorphism:
    """Parse '(f, g)' or a two-element list of polynomial strings."""
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise ParseError("automorphism needs exactly two components", text=str(text))
        f, g = (parse_poly(s, field) for s in text)
    else:
        left, right, offset, comma = _split_pair(text)
        try:
            f = parse_poly(left, field)
        except ParseError as e:
            raise ParseError(str(e).rsplit(" (line", 1)[0], text=text, pos=offset + e.pos) from None
        try:
            g = parse_poly(right, field)
        except ParseError as e:
            raise ParseError(str(e).rsplit(" (line", 1)[0], text=text, pos=offset + comma + 1 + e.pos) from None
    return PlaneAutomorphism(f, g, check=check)
