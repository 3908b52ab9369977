"""Invariant-subvariety lattices of a single algebraic (bounded) automorphism.

Every triangular map phi = (a x + P(y), b y + c) is brought to a normal form
by an explicit coordinate change, and falls into one of four kinds:

* FiniteOrder
* OrbitFibration: orbit closures are grouped fibers of a map pi: A^2 -> A^1
  with phi^* pi = u pi (or pi itself invariant)
* ProjectiveQuotient: orbit closures are grouped fibers of a pencil
  [num : den] with phi^*(num/den) = zeta num/den
* NonFibration: finitely many invariant curves (and possibly a fixed point)

Affine maps are first conjugated to triangular form using an eigenvector of
the linear part; the resulting data is pulled back to the input coordinates.
All polynomial data on a descriptor lives in the ambient coordinates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field, replace
from enum import Enum
from functools import reduce
from math import gcd

from gmpy2 import mpq

from .amalgam import cyclically_reduce, factorize, inverse, is_bounded
from .errors import (
    ConstantPi,
    DegeneratePair,
    EigenvalueOutsideField,
    KindMismatch,
    PreconditionViolation,
)
from .numfield import (
    FieldElement,
    multiplicative_dependence,
    root_of_unity_order,
    roots_in_field,
)
from .planeauto import PlaneAutomorphism, PlanePoint, apply, compose, invert_affine
from .poly2 import BiPoly, UniPoly, nullspace, proportional, solve_linear, solve_linear_coeffs


def _lcm(a, b):
    return a * b // gcd(a, b)


# --- subvarieties --------------------------------------------------------------

def normalize_curve(f: BiPoly) -> BiPoly:
    """Canonical generator of V(f), independent of the scalar multiple given.

    Made monic first; when that leaves rational coefficients they are cleared
    to a primitive integer polynomial (the leading coefficient stays positive).
    """
    f = f.monic()
    K = f.field
    if not all(K.is_rational_raw(c) for c in f.terms.values()):
        return f
    qs = [K.raw_coeffs(c)[0] for c in f.terms.values()]
    den = reduce(lambda acc, q: acc * int(q.denominator) // gcd(acc, int(q.denominator)), qs, 1)
    num = reduce(gcd, (int(q * den) for q in qs), 0)
    return f.scale(mpq(den, num))


def _curve_key(f: BiPoly):
    return (f.degree, str(f))


@dataclass(frozen=True)
class Subvariety:
    """Closed subset of the plane: curves (irreducible generators) and isolated points."""

    curves: tuple = ()
    points: tuple = ()
    whole_plane: bool = False

    @classmethod
    def whole(cls) -> "Subvariety":
        return cls((), (), True)

    @classmethod
    def empty(cls) -> "Subvariety":
        return cls()

    @classmethod
    def build(cls, curves=(), points=()) -> "Subvariety":
        seen = {}
        for f in curves:
            if f.is_constant():
                continue
            g = normalize_curve(f)
            seen.setdefault(g, g)
        cs = tuple(sorted(seen, key=_curve_key))
        pts = {}
        for p in points:
            if not any(not f.evaluate(p.x, p.y) for f in cs):
                pts.setdefault(p, p)
        return cls(cs, tuple(sorted(pts, key=PlanePoint.sort_key)))

    @property
    def dimension(self) -> int:
        if self.whole_plane:
            return 2
        if self.curves:
            return 1
        if self.points:
            return 0
        return -1

    def contains(self, p: PlanePoint) -> bool:
        if self.whole_plane:
            return True
        if any(not f.evaluate(p.x, p.y) for f in self.curves):
            return True
        return p in self.points

    def union(self, other: "Subvariety") -> "Subvariety":
        if self.whole_plane or other.whole_plane:
            return Subvariety.whole()
        return Subvariety.build(self.curves + other.curves, self.points + other.points)

    def transport(self, c: PlaneAutomorphism, c_inv: PlaneAutomorphism) -> "Subvariety":
        """Image under the automorphism c (curves f -> f o c^-1, points q -> c(q))."""
        if self.whole_plane:
            return self
        return Subvariety.build(
            [f.substitute(c_inv.x_image, c_inv.y_image) for f in self.curves],
            [apply(c, q) for q in self.points],
        )

    def to_json(self):
        if self.whole_plane:
            return {"whole_plane": True, "dimension": 2, "curves": [], "points": []}
        return {
            "whole_plane": False,
            "dimension": self.dimension,
            "curves": [str(f) for f in self.curves],
            "points": [q.to_json() for q in self.points],
        }


def curve_image(f: BiPoly, phi_inv: PlaneAutomorphism) -> BiPoly:
    """Generator of phi(V(f)), given phi^-1: f o phi^-1, normalized."""
    return normalize_curve(f.substitute(phi_inv.x_image, phi_inv.y_image))


def is_invariant(phi: PlaneAutomorphism, s: Subvariety, phi_inv=None) -> bool:
    """phi permutes the curves and the points of s."""
    if s.whole_plane:
        return True
    phi_inv = phi_inv or inverse(phi)
    curves = set(s.curves)
    if {curve_image(f, phi_inv) for f in curves} != curves:
        return False
    pts = set(s.points)
    return {apply(phi, q) for q in pts} == pts


# --- triangular data and diagonalization --------------------------------------

@dataclass(frozen=True)
class TriangularData:
    a: FieldElement
    b: FieldElement
    c: FieldElement
    P: UniPoly

    @classmethod
    def of(cls, phi: PlaneAutomorphism) -> "TriangularData":
        if not phi.is_triangular():
            raise PreconditionViolation(f"{phi} is not triangular")
        K = phi.field
        a = phi.x_image.coeff(1, 0)
        P = phi.x_image - BiPoly.x(K).scale(a)
        return cls(a, phi.y_image.coeff(0, 1), phi.y_image.constant_term(), UniPoly.from_bipoly(P, "y"))

    def to_map(self) -> PlaneAutomorphism:
        K = self.a.field
        return PlaneAutomorphism.triangular(K, self.a, self.P.to_bipoly("y"), self.b, self.c)


@dataclass(frozen=True)
class Diagonalization:
    """phi^* x~ = a x~ + h1(y~), phi^* y~ = b y~, with x~ = x - h(y~)."""

    x_tilde: BiPoly
    y_tilde: BiPoly
    h: UniPoly
    h1: UniPoly
    shifted: UniPoly  # P written in y~
    shift: FieldElement  # y~ = y - shift
    a: FieldElement
    b: FieldElement

    @property
    def change_of_coords(self) -> PlaneAutomorphism:
        return PlaneAutomorphism(self.x_tilde, self.y_tilde, check=False)


def diagonalize(t: TriangularData) -> Diagonalization:
    a, b, c = t.a, t.b, t.c
    K = a.field
    if b == 1 and c:
        raise PreconditionViolation("b = 1 with c != 0 has no diagonalization")
    shift = c / (1 - b) if b != 1 else K.zero
    Pt = t.P.taylor_shift(shift)
    h, h1 = [], []
    bi = K.one
    for i in range(len(Pt.coeffs)):
        ai = Pt.coeff(i)
        if a == bi:
            h.append(K.zero)
            h1.append(ai)
        else:
            h.append(ai / (bi - a))
            h1.append(K.zero)
        bi = bi * b
    h, h1 = UniPoly(K, h), UniPoly(K, h1)
    y_tilde = BiPoly.y(K) - shift
    x_tilde = BiPoly.x(K) - h.compose_into(y_tilde)
    return Diagonalization(x_tilde, y_tilde, h, h1, Pt, shift, a, b)


# --- descriptors -----------------------------------------------------------------

class Kind(str, Enum):
    FINITE_ORDER = "FiniteOrder"
    ORBIT_FIBRATION = "OrbitFibration"
    PROJECTIVE_QUOTIENT = "ProjectiveQuotient"
    NON_FIBRATION = "NonFibration"


@dataclass(frozen=True)
class LatticeDescriptor:
    kind: Kind
    phi: PlaneAutomorphism
    order: int | None = None
    pi_affine: BiPoly | None = None
    pi_scaling: FieldElement | None = None
    pi_projective: tuple | None = None
    zeta: FieldElement | None = None
    exponents: tuple | None = None
    hyperbolic: bool = False
    grouping_order: int = 1
    transversal_curve: BiPoly | None = None
    torsion_locus: Subvariety | None = None
    distinguished_point: PlanePoint | None = None
    invariant_curves: tuple = ()
    coords: tuple | None = None  # the normal-form coordinates (x~, y~) as ambient polynomials
    branch: str = ""
    caveats: tuple = ()

    def special_curves(self) -> list:
        """Curves of the lattice that are not generic fibers."""
        out = []
        if self.transversal_curve is not None:
            out.append(self.transversal_curve)
        out.extend(self.invariant_curves)
        if self.torsion_locus is not None:
            out.extend(self.torsion_locus.curves)
        if self.kind is Kind.PROJECTIVE_QUOTIENT:
            out.extend(self.coords)
        return out

    def span(self):
        """Generators of the pencil whose members are the fibers."""
        if self.kind is Kind.ORBIT_FIBRATION:
            return [self.pi_affine, BiPoly.one(self.phi.field)]
        if self.kind is Kind.PROJECTIVE_QUOTIENT:
            return list(self.pi_projective)
        return None

    def fiber_components(self, F: BiPoly) -> list:
        """Irreducible components of a member F of the pencil."""
        if F.is_constant():
            return []
        if self.kind is Kind.PROJECTIVE_QUOTIENT:
            num, den = self.pi_projective
            xt, yt = self.coords
            if proportional(F, num) is not None:
                return [xt, yt] if self.hyperbolic else [xt]
            if not self.hyperbolic and proportional(F, den) is not None:
                return [yt]
        return [F]

    def fiber_through(self, p: PlanePoint) -> list:
        """Components of the (ungrouped) fiber through p; empty at the base point."""
        K = self.phi.field
        if self.kind is Kind.ORBIT_FIBRATION:
            return [self.pi_affine - self.pi_affine.evaluate(p.x, p.y)]
        if self.kind is Kind.PROJECTIVE_QUOTIENT:
            num, den = self.pi_projective
            t1, t2 = num.evaluate(p.x, p.y), den.evaluate(p.x, p.y)
            if not t1 and not t2:
                return []
            return self.fiber_components(num.scale(t2) - den.scale(t1))
        raise KindMismatch(f"{self.kind.value} has no fibers")

    def grouped_fiber_through(self, p: PlanePoint) -> list:
        K = self.phi.field
        if self.kind is Kind.ORBIT_FIBRATION:
            lam = self.pi_affine.evaluate(p.x, p.y)
            vals = []
            for j in range(self.grouping_order):
                v = lam * self.pi_scaling ** j
                if v not in vals:
                    vals.append(v)
            return [self.pi_affine - v for v in vals]
        if self.kind is Kind.PROJECTIVE_QUOTIENT:
            num, den = self.pi_projective
            t1, t2 = num.evaluate(p.x, p.y), den.evaluate(p.x, p.y)
            if not t1 and not t2:
                return []
            out = []
            for j in range(self.grouping_order):
                comps = self.fiber_components(num.scale(t2) - den.scale(t1 * self.zeta ** j))
                if len(comps) > 1:
                    # special fiber: each component is invariant on its own
                    comps = [f for f in comps if not f.evaluate(p.x, p.y)]
                out.extend(comps)
            return out
        raise KindMismatch(f"{self.kind.value} has no fibers")

    def summary(self) -> dict:
        out = {"kind": self.kind.value, "branch": self.branch}
        if self.order is not None:
            out["order"] = self.order
        if self.pi_affine is not None:
            out["pi"] = str(self.pi_affine)
            out["pi_scaling"] = str(self.pi_scaling)
        if self.pi_projective is not None:
            out["pi_projective"] = [str(self.pi_projective[0]), str(self.pi_projective[1])]
            out["zeta"] = str(self.zeta)
            out["exponents"] = list(self.exponents)
            out["hyperbolic"] = self.hyperbolic
        if self.kind in (Kind.ORBIT_FIBRATION, Kind.PROJECTIVE_QUOTIENT):
            out["grouping_order"] = self.grouping_order
        if self.transversal_curve is not None:
            out["transversal_curve"] = str(self.transversal_curve)
        if self.torsion_locus is not None:
            out["torsion_locus"] = self.torsion_locus.to_json()
        if self.distinguished_point is not None:
            out["distinguished_point"] = self.distinguished_point.to_json()
        if self.invariant_curves:
            out["invariant_curves"] = [str(f) for f in self.invariant_curves]
        if self.caveats:
            out["caveats"] = list(self.caveats)
        return out


# --- classification ----------------------------------------------------------------

def _solve_shift_equation(P: UniPoly, c: FieldElement, a: FieldElement, top: int) -> UniPoly:
    """g with g(y + c) - a g(y) = P(y), deg g <= top."""
    K = c.field
    Y = BiPoly.y(K)
    Yc = Y + c
    cols = [(Yc ** k - (Y ** k).scale(a)).terms for k in range(top + 1)]
    sol = solve_linear(K, cols, P.to_bipoly("y").terms)
    if sol is None:  # pragma: no cover - the system is triangular and solvable
        raise PreconditionViolation("shift equation has no solution")
    return UniPoly(K, sol)


def _torsion_lines(h1: UniPoly, y_tilde: BiPoly) -> Subvariety:
    K = y_tilde.field
    roots = roots_in_field([h1.coeff(i) for i in range(len(h1.coeffs))], K) if h1.degree >= 1 else []
    return Subvariety.build([y_tilde - r for r in roots])


def _classify_triangular(phi: PlaneAutomorphism, bound: int) -> LatticeDescriptor:
    t = TriangularData.of(phi)
    a, b, c, P = t.a, t.b, t.c, t.P
    K = a.field
    X, Y = BiPoly.x(K), BiPoly.y(K)
    if b == 1 and c:
        if a == 1:
            g = _solve_shift_equation(P, c, a, max(P.degree + 1, 0)) if P else UniPoly(K, [])
            pi = X - g.compose_into(Y)
            return LatticeDescriptor(
                Kind.ORBIT_FIBRATION, phi, pi_affine=pi, pi_scaling=K.one, grouping_order=1,
                coords=(pi, Y), branch="translation",
            )
        h = _solve_shift_equation(P, c, a, max(P.degree, 0)) if P else UniPoly(K, [])
        xbar = X - h.compose_into(Y)
        m = root_of_unity_order(a)
        if m is not None:
            return LatticeDescriptor(
                Kind.ORBIT_FIBRATION, phi, pi_affine=xbar, pi_scaling=a, grouping_order=m,
                coords=(xbar, Y), branch="translation-rotation",
            )
        return LatticeDescriptor(
            Kind.NON_FIBRATION, phi, invariant_curves=(xbar,), coords=(xbar, Y),
            branch="translation-scaling",
        )

    D = diagonalize(t)
    xt, yt = D.x_tilde, D.y_tilde
    origin = _solve_point(xt, yt)
    ra, rb = root_of_unity_order(a), root_of_unity_order(b)
    h1_zero = not D.h1
    if ra is not None and rb is not None:
        if h1_zero:
            return LatticeDescriptor(
                Kind.FINITE_ORDER, phi, order=_lcm(ra, rb), coords=(xt, yt), branch="finite",
            )
        return LatticeDescriptor(
            Kind.ORBIT_FIBRATION, phi, pi_affine=yt, pi_scaling=b, grouping_order=rb,
            torsion_locus=_torsion_lines(D.h1, yt), coords=(xt, yt), branch="unipotent-twist",
        )
    if ra is None and rb is not None:
        return LatticeDescriptor(
            Kind.ORBIT_FIBRATION, phi, pi_affine=yt, pi_scaling=b, grouping_order=rb,
            transversal_curve=xt, torsion_locus=Subvariety.build([xt]), coords=(xt, yt),
            branch="x-scaling",
        )
    if ra is not None and rb is None:
        if not h1_zero:
            # a = b^0 = 1 keeps the constant term: phi~ = (x~ + h1, b y~)
            return LatticeDescriptor(
                Kind.NON_FIBRATION, phi, invariant_curves=(yt,), coords=(xt, yt),
                branch="y-scaling-translation",
            )
        return LatticeDescriptor(
            Kind.ORBIT_FIBRATION, phi, pi_affine=xt, pi_scaling=a, grouping_order=ra,
            transversal_curve=yt, torsion_locus=Subvariety.build([yt]), coords=(xt, yt),
            branch="y-scaling",
        )
    # neither a nor b is a root of unity
    if not h1_zero:
        return LatticeDescriptor(
            Kind.NON_FIBRATION, phi, invariant_curves=(yt,), distinguished_point=origin,
            coords=(xt, yt), branch="resonant",
        )
    dep = multiplicative_dependence(a, b, bound)
    exhaustive = dep.exhaustive
    hyperbolic = False
    if dep.relation is None:
        inv = multiplicative_dependence(a, b.inverse(), bound)
        exhaustive = exhaustive and inv.exhaustive
        if inv.relation is not None:
            dep, hyperbolic = inv, True
    caveats = () if exhaustive else ("multiplicative dependence decided by bounded search",)
    if dep.relation is None:
        return LatticeDescriptor(
            Kind.NON_FIBRATION, phi, invariant_curves=(xt, yt), distinguished_point=origin,
            coords=(xt, yt), branch="independent", caveats=caveats,
        )
    r1, r2 = dep.relation
    d = gcd(r1, r2)
    s1, s2 = r1 // d, r2 // d
    if hyperbolic:
        pair = (xt ** s1 * yt ** s2, BiPoly.one(K))
        zeta = a ** s1 * b ** s2
    else:
        pair = (xt ** s1, yt ** s2)
        zeta = a ** s1 / b ** s2
    return LatticeDescriptor(
        Kind.PROJECTIVE_QUOTIENT, phi, pi_projective=pair, zeta=zeta, exponents=(s1, s2),
        hyperbolic=hyperbolic, grouping_order=d, distinguished_point=origin,
        coords=(xt, yt), branch="hyperbolic" if hyperbolic else "elliptic", caveats=caveats,
    )


def _solve_point(f: BiPoly, g: BiPoly) -> PlanePoint:
    """The common zero of x~ = x - h(y~) and y~ = y - s."""
    K = f.field
    y0 = -g.constant_term()  # g = y - s
    x0 = -(f - BiPoly.x(K)).evaluate(K.zero, y0)
    return PlanePoint(x0, y0)


def triangularizing_coords(phi: PlaneAutomorphism):
    """Affine gamma with gamma o phi o gamma^-1 triangular (gamma = identity if phi already is)."""
    K = phi.field
    X, Y = BiPoly.x(K), BiPoly.y(K)
    if phi.is_triangular():
        return PlaneAutomorphism.identity(K)
    (m11, m12), (m21, m22) = phi.linear_part()
    tr, det = m11 + m22, m11 * m22 - m12 * m21
    charpoly = [det, -tr, K.one]
    roots = roots_in_field(charpoly, K)
    if not roots:
        raise EigenvalueOutsideField(
            f"eigenvalues of the linear part of {phi} are not in {K}",
            charpoly=[str(c) for c in charpoly],
        )
    b = roots[0]
    # left eigenvector (l1, l2): (l1, l2) M = b (l1, l2)
    l1, l2 = m21, b - m11
    if not l1 and not l2:
        l1, l2 = b - m22, m12
    ell = X.scale(l1) + Y.scale(l2)
    other = X if l2 else Y
    return PlaneAutomorphism(other, ell)


def classify(phi: PlaneAutomorphism, bound: int = 64) -> LatticeDescriptor:
    """Lattice descriptor of a triangular or affine automorphism."""
    if phi.is_triangular():
        return _classify_triangular(phi, bound)
    if not phi.is_affine():
        raise PreconditionViolation(f"{phi} lies in neither factor; conjugate it first")
    gamma = triangularizing_coords(phi)
    gamma_inv = invert_affine(gamma)
    psi = compose(gamma, compose(phi, gamma_inv))
    local = _classify_triangular(psi, bound)
    return transport_descriptor(local, phi, gamma, gamma_inv)


def transport_descriptor(d: LatticeDescriptor, phi, gamma, gamma_inv) -> LatticeDescriptor:
    """Data for psi = gamma phi gamma^-1 rewritten for phi: f -> f o gamma, q -> gamma^-1(q)."""

    def pull(f):
        return None if f is None else f.substitute(gamma.x_image, gamma.y_image)

    def tsub(s):
        return None if s is None else s.transport(gamma_inv, gamma)

    return replace(
        d,
        phi=phi,
        pi_affine=pull(d.pi_affine),
        pi_projective=None if d.pi_projective is None else tuple(pull(f) for f in d.pi_projective),
        transversal_curve=pull(d.transversal_curve),
        torsion_locus=tsub(d.torsion_locus),
        distinguished_point=None if d.distinguished_point is None else apply(gamma_inv, d.distinguished_point),
        invariant_curves=tuple(pull(f) for f in d.invariant_curves),
        coords=None if d.coords is None else tuple(pull(f) for f in d.coords),
    )


# --- torsion -------------------------------------------------------------------------

def _affine_order(psi: PlaneAutomorphism) -> int | None:
    """Exact order of an affine map, without eigenvalues.

    A finite-order 2x2 matrix over K has eigenvalues that are roots of unity
    of degree <= 2[K:Q], so its order k satisfies phi(k) <= 2[K:Q].
    """
    from .numfield import _totient

    K = psi.field
    bound = 2 * K.degree
    lin = PlaneAutomorphism.affine(K, *[e for row in psi.linear_part() for e in row])
    acc = lin
    for k in range(1, 2 * bound * bound + 1):
        if _totient(k) <= bound and acc.is_identity():
            return k if psi.power(k).is_identity() else None
        acc = compose(acc, lin)
    return None


def is_torsion(phi: PlaneAutomorphism, bound: int = 64) -> int | None:
    """Order of phi if finite, else None."""
    if not is_bounded(phi):
        return None
    _, core = cyclically_reduce(factorize(phi))
    psi = core.compose()
    if psi.is_affine():
        n = _affine_order(psi)
    else:
        d = _classify_triangular(psi, bound)
        n = d.order if d.kind is Kind.FINITE_ORDER else None
    if n is not None and not phi.power(n).is_identity():  # pragma: no cover - verified identity
        raise PreconditionViolation(f"claimed order {n} of {phi} failed verification")
    return n


# --- equivariance ------------------------------------------------------------------------

def affine_equivariant(pi: BiPoly, phi: PlaneAutomorphism):
    """(u, v) with pi o phi = u pi + v, or None."""
    if pi.is_constant():
        raise ConstantPi("equivariant map must be nonconstant")
    sol = solve_linear_coeffs([phi.pullback(pi)], [pi], with_constant=True)
    if sol is None:
        return None
    u, v = sol[0]
    return (u, v) if u else None


def projective_equivariant(num: BiPoly, den: BiPoly, phi: PlaneAutomorphism):
    """((a1, a2), (a3, a4)) with num o phi = a1 num + a2 den and den o phi = a3 num + a4 den."""
    if not num or not den or num.is_constant() and den.is_constant():
        raise DegeneratePair("pair must be nonzero and nonconstant")
    if proportional(num, den) is not None:
        raise DegeneratePair("pair is proportional")
    sol = solve_linear_coeffs([phi.pullback(num), phi.pullback(den)], [num, den])
    if sol is None:
        return None
    (a1, a2), (a3, a4) = sol
    if not (a1 * a4 - a2 * a3):
        return None
    return ((a1, a2), (a3, a4))


def span_intersection(A, B):
    """Generators of span(A) n span(B) for lists of polynomials (each list independent)."""
    K = A[0].field
    cols = [f.terms for f in A] + [(-g).terms for g in B]
    out = []
    for v in nullspace(K, cols):
        F = BiPoly.zero(K)
        for coeff, f in zip(v[: len(A)], A):
            F = F + f.scale_raw(coeff)
        if F:
            out.append(F)
    return out


def equivalent_fibration(d1: LatticeDescriptor, d2: LatticeDescriptor) -> bool:
    if d1.kind is not d2.kind or d1.kind not in (Kind.ORBIT_FIBRATION, Kind.PROJECTIVE_QUOTIENT):
        raise KindMismatch(f"cannot compare {d1.kind.value} and {d2.kind.value} fibrations")
    if d1.kind is Kind.ORBIT_FIBRATION:
        sol = solve_linear_coeffs([d2.pi_affine], [d1.pi_affine], with_constant=True)
        return sol is not None and bool(sol[0][0])
    return len(span_intersection(d1.span(), d2.span())) == 2


# --- orbits ----------------------------------------------------------------------------

def finite_orbit(maps, p: PlanePoint, cap: int):
    """BFS orbit of p under maps; None if it exceeds cap points."""
    seen = {p: None}
    queue = deque([p])
    while queue:
        q = queue.popleft()
        for g in maps:
            r = apply(g, q)
            if r not in seen:
                if len(seen) >= cap:
                    return None
                seen[r] = None
                queue.append(r)
    return list(seen)


def minimal_invariant_through(d: LatticeDescriptor, phi: PlaneAutomorphism, p: PlanePoint,
                              cap: int = 10000) -> Subvariety:
    """Orbit closure of p under <phi>, read off from the descriptor."""
    if d.kind is Kind.FINITE_ORDER:
        raise PreconditionViolation("finite-order maps are handled by orbit enumeration")
    if d.kind is Kind.NON_FIBRATION:
        if d.distinguished_point is not None and p == d.distinguished_point:
            return Subvariety.build(points=[p])
        through = [f for f in d.invariant_curves if not f.evaluate(p.x, p.y)]
        if through:
            return Subvariety.build(curves=through[:1])
        return Subvariety.whole()
    if d.torsion_locus is not None and d.torsion_locus.contains(p):
        orbit = finite_orbit([phi, inverse(phi)], p, cap)
        if orbit is None:  # pragma: no cover - torsion points have finite orbits
            raise PreconditionViolation("torsion point with unbounded orbit")
        return Subvariety.build(points=orbit)
    if d.kind is Kind.PROJECTIVE_QUOTIENT and d.distinguished_point == p:
        return Subvariety.build(points=[p])
    return Subvariety.build(curves=d.grouped_fiber_through(p))


# --- common invariant curves of two maps ------------------------------------------------------

def invariant_curve_orbits(candidates, maps, cap: int = 256) -> list:
    """Union of the candidate curves whose orbit under the maps is finite (within cap).

    ``maps`` are pairs (g, g^-1); the image of V(f) under g is V(f o g^-1).
    """
    keep = {}
    dead = set()
    for f in candidates:
        f = normalize_curve(f)
        if f in keep or f in dead:
            continue
        orbit = {f: None}
        queue = deque([f])
        ok = True
        while queue and ok:
            h = queue.popleft()
            for g, g_inv in maps:
                for img in (curve_image(h, g_inv), curve_image(h, g)):
                    if img in dead:
                        ok = False
                        break
                    if img not in orbit:
                        if len(orbit) >= cap:
                            ok = False
                            break
                        orbit[img] = None
                        queue.append(img)
                if not ok:
                    break
        if ok:
            keep.update(orbit)
        else:
            dead.add(f)
    return list(keep)


def support_candidates(dA: LatticeDescriptor, dB: LatticeDescriptor) -> list:
    """Finite list of curves containing every common invariant curve of the two maps."""
    for d in (dA, dB):
        if d.kind is Kind.FINITE_ORDER:
            raise PreconditionViolation("finite-order descriptor in support intersection")
    if dA.kind is dB.kind and dA.kind is not Kind.NON_FIBRATION and equivalent_fibration(dA, dB):
        raise KindMismatch("equivalent fibrations: handled by the descent steps")
    cands = dA.special_curves() + dB.special_curves()
    sA, sB = dA.span(), dB.span()
    if sA is not None and sB is not None:
        for F in span_intersection(sA, sB):
            cands.extend(dA.fiber_components(F))
            cands.extend(dB.fiber_components(F))
    for d, other in ((dA, dB), (dB, dA)):
        q = other.distinguished_point
        if d.kind is Kind.ORBIT_FIBRATION and q is not None:
            cands.extend(d.grouped_fiber_through(q))
    return [f for f in cands if not f.is_constant()]


def support_intersection_dim1(dA: LatticeDescriptor, phiA, dB: LatticeDescriptor, phiB) -> Subvariety:
    """Union of the curves invariant (as grouped orbits) under both maps."""
    cands = support_candidates(dA, dB)
    maps = [(phiA, inverse(phiA)), (phiB, inverse(phiB))]
    return Subvariety.build(curves=invariant_curve_orbits(cands, maps))
