"""Independent reference implementations used to check the engine.

Everything here goes through sympy or fractions.Fraction and never calls the
package's arithmetic, so agreement is meaningful.
"""

from fractions import Fraction
from itertools import product

import sympy as sp

X, Y, T = sp.symbols("x y t")


def minpoly_expr(field):
    return sum(sp.Rational(str(c)) * T ** i for i, c in enumerate(field.minpoly))


def element_expr(u):
    return sum(sp.Rational(str(c)) * T ** i for i, c in enumerate(u.coeffs))


def poly_expr(f):
    """BiPoly -> sympy expression in x, y, t (t the field generator)."""
    out = sp.Integer(0)
    for (i, j), raw in f.terms.items():
        coeffs = f.field.raw_coeffs(raw)
        c = sum(sp.Rational(str(q)) * T ** k for k, q in enumerate(coeffs))
        out += c * X ** i * Y ** j
    return sp.expand(out)


def reduce_t(expr, field):
    """Reduce the coefficients of expr modulo the minimal polynomial of the field."""
    if field.degree == 1:
        return sp.expand(expr.subs(T, 0)) if expr.has(T) else sp.expand(expr)
    m = sp.Poly(minpoly_expr(field), T)
    p = sp.Poly(sp.expand(expr), X, Y)
    out = sp.Integer(0)
    for mon, c in p.terms():
        r = sp.Poly(c, T).rem(m).as_expr()
        out += r * X ** mon[0] * Y ** mon[1]
    return sp.expand(out)


def compose_expr(outer, inner, field):
    """outer o inner on pairs of sympy expressions."""
    f, g = outer
    u, v = inner
    sub = {X: u, Y: v}
    return (reduce_t(f.xreplace(sub), field), reduce_t(g.xreplace(sub), field))


def map_expr(phi):
    return (poly_expr(phi.x_image), poly_expr(phi.y_image))


def same_map(phi, pair, field):
    a, b = map_expr(phi)
    return sp.expand(a - reduce_t(pair[0], field)) == 0 and sp.expand(b - reduce_t(pair[1], field)) == 0


def total_degree(expr):
    expr = sp.expand(expr)
    if expr == 0:
        return -1
    return sp.Poly(expr, X, Y).total_degree()


# --- rational-only helpers on Fractions -------------------------------------------

def fraction_poly(f):
    """Dict {(i, j): Fraction} of a rational BiPoly."""
    out = {}
    for m, raw in f.terms.items():
        (q,) = f.field.raw_coeffs(raw)
        out[m] = Fraction(int(q.numerator), int(q.denominator))
    return out


def fraction_eval(poly, x, y):
    return sum(c * x ** i * y ** j for (i, j), c in poly.items())


def fraction_orbit(maps, start, count):
    """First `count` points of the breadth-first orbit of start under maps and inverses.

    maps: list of (forward, backward) pairs of Fraction polynomial dicts.
    """
    seen = [start]
    index = {start}
    queue = [start]
    head = 0
    while head < len(queue) and len(seen) < count:
        p = queue[head]
        head += 1
        for fwd, bwd in maps:
            for f, g in (fwd, bwd):
                q = (fraction_eval(f, *p), fraction_eval(g, *p))
                if q not in index:
                    index.add(q)
                    seen.append(q)
                    queue.append(q)
                    if len(seen) >= count:
                        return seen
    return seen


# --- number theory --------------------------------------------------------------------

def brute_order(u, limit=200):
    """Least k <= limit with u^k = 1 by repeated multiplication, else None."""
    acc = u
    for k in range(1, limit + 1):
        if acc == 1:
            return k
        acc = acc * u
    return None


def brute_dependence(a: Fraction, b: Fraction, limit=40):
    """Least (r1, r2) with a^r1 = b^r2, r1, r2 >= 1, scanning r1 first."""
    for r1 in range(1, limit + 1):
        for r2 in range(1, limit + 1):
            if a ** r1 == b ** r2:
                return (r1, r2)
    return None


def sympy_roots(coeffs):
    """Distinct rational roots of a rational polynomial (constant term first)."""
    p = sp.Poly(list(reversed([sp.Rational(str(c)) for c in coeffs])), X)
    return sorted({r for r in sp.roots(p, filter="Q")})


def grid(values):
    return list(product(values, values))


# --- closure containment -----------------------------------------------------------------

def fraction_point(p):
    """PlanePoint over Q as a pair of Fractions."""
    out = []
    for u in (p.x, p.y):
        (q,) = u.coeffs
        out.append(Fraction(int(q.numerator), int(q.denominator)))
    return tuple(out)


def closure_holds(closure, q):
    """Does the Fraction point q satisfy the equations of the (rational) subvariety?"""
    if closure.whole_plane:
        return True
    if any(fraction_eval(fraction_poly(f), *q) == 0 for f in closure.curves):
        return True
    return q in {fraction_point(p) for p in closure.points}
