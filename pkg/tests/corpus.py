"""Seeded random corpora shared by the unit and acceptance tests."""

import random

from planeorbit.numfield import NumberField
from planeorbit.planeauto import PlaneAutomorphism, compose_all
from planeorbit.poly2 import BiPoly

Q = NumberField.rationals()


def rand_q(rng: random.Random, lo=-5, hi=5, nonzero=False):
    while True:
        v = Q(rng.randint(lo, hi)) / rng.randint(1, 3)
        if v or not nonzero:
            return v.as_rational()


def rand_poly_y(rng, field, degree, low=0, coeff=None):
    """sum_{i=low}^{degree} c_i y^i with nonzero top coefficient."""
    coeff = coeff or (lambda nonzero: field(rand_q(rng, nonzero=nonzero)))
    Yv = BiPoly.y(field)
    out = BiPoly.zero(field)
    for i in range(low, degree + 1):
        out = out + (Yv ** i).scale(coeff(i == degree))
    return out


def rand_triangular(rng, field, degree):
    """(a x + P(y), b y + c) with deg P = degree."""
    a = field(rand_q(rng, nonzero=True))
    b = field(rand_q(rng, nonzero=True))
    c = field(rand_q(rng))
    return PlaneAutomorphism.triangular(field, a, rand_poly_y(rng, field, degree), b, c)


def rand_affine_nonB(rng, field):
    """An affine map outside B: its y-image involves x."""
    while True:
        m11, m12, m22 = (field(rand_q(rng)) for _ in range(3))
        m21 = field(rand_q(rng, nonzero=True))
        if m11 * m22 - m12 * m21:
            e1, e2 = (field(rand_q(rng)) for _ in range(2))
            return PlaneAutomorphism.affine(field, m11, m12, m21, m22, e1, e2)


def rand_affine(rng, field):
    while True:
        m = [field(rand_q(rng)) for _ in range(4)]
        if m[0] * m[3] - m[1] * m[2]:
            e = [field(rand_q(rng)) for _ in range(2)]
            return PlaneAutomorphism.affine(field, *m, *e)


def reduced_word(rng, field=Q, max_letters=6, degrees=(2, 4)):
    """Letters [beta_l, alpha_l, ..., beta_1, alpha_1] (leftmost applied last) and the beta degrees.

    beta_i are triangular of degree in ``degrees``; alpha_i (i >= 2) are affine outside B;
    alpha_1 is an arbitrary affine map (dropped when the word has odd length).
    """
    n = rng.randint(1, max_letters)
    letters, betas = [], []
    for k in range(n):
        if k % 2 == 0:
            d = rng.randint(*degrees)
            betas.append(d)
            letters.append(rand_triangular(rng, field, d))
        elif k == n - 1:
            letters.append(rand_affine(rng, field))
        else:
            letters.append(rand_affine_nonB(rng, field))
    # betas listed outermost first: beta_l, ..., beta_1
    return letters, betas


def expected_bidegree(betas):
    """(prod deg beta_i, prod_{i<l} deg beta_i) with betas given outermost first."""
    full = 1
    for d in betas:
        full *= d
    return (full, full // betas[0])


def conjugating_word(rng, field, length, degree=2):
    """Alternating word of the given number of letters, starting with either factor."""
    letters = []
    start_affine = rng.random() < 0.5
    for k in range(length):
        if (k % 2 == 0) == start_affine:
            letters.append(rand_affine_nonB(rng, field))
        else:
            letters.append(rand_triangular(rng, field, degree))
    return compose_all(letters, field)


# --- triangular maps by classification branch -------------------------------------------------

BRANCHES = (
    "translation",
    "translation-rotation",
    "translation-scaling",
    "finite",
    "unipotent-twist",
    "x-scaling",
    "y-scaling",
    "y-scaling-translation",
    "resonant",
    "independent",
    "elliptic",
    "hyperbolic",
)

Q4 = NumberField.cyclotomic(4)
NON_UNITS = [2, 3, -2, -3]


def _map_from_shifted(rng, K, a, b, c, exponents, forced=()):
    """(a x + P(y), b y + c) where P(y) = P~(y~) uses the given exponents of y~."""
    from planeorbit.poly2 import UniPoly

    shift = c / (1 - b) if b != 1 else K.zero
    top = max(list(exponents) + list(forced) + [0])
    coeffs = []
    for i in range(top + 1):
        if i in forced:
            coeffs.append(K(rand_q(rng, nonzero=True)))
        elif i in exponents and rng.random() < 0.7:
            coeffs.append(K(rand_q(rng)))
        else:
            coeffs.append(K.zero)
    P = UniPoly(K, [u.raw for u in coeffs]).taylor_shift(-shift).to_bipoly("y")
    return PlaneAutomorphism.triangular(K, a, P, b, c)


def branch_map(rng, branch):
    """A random triangular map falling into the named classification branch."""
    use_i = rng.random() < 0.4
    K = Q4 if use_i else Q
    unit = K.gen if use_i else K(-1)  # a root of unity other than 1
    s = K(rng.choice(NON_UNITS))
    deg = rng.randint(0, 4)
    free = range(deg + 1)
    c = K(rand_q(rng))
    if branch == "translation":
        return _map_from_shifted(rng, K, K.one, K.one, K(rand_q(rng, nonzero=True)), free)
    if branch == "translation-rotation":
        return _map_from_shifted(rng, K, unit, K.one, K(rand_q(rng, nonzero=True)), free)
    if branch == "translation-scaling":
        return _map_from_shifted(rng, K, s, K.one, K(rand_q(rng, nonzero=True)), free)
    if branch == "finite":
        a, b = unit, rng.choice([K.one, unit, -K.one])
        if b == 1:
            c = K.zero
        allowed = [i for i in free if b ** i != a]
        return _map_from_shifted(rng, K, a, b, c, allowed)
    if branch == "unipotent-twist":
        a, b = rng.choice([(K.one, K.one), (K.one, -K.one), (-K.one, -K.one), (unit, unit)])
        if b == 1:
            c = K.zero
        hits = [i for i in range(5) if b ** i == a]
        return _map_from_shifted(rng, K, a, b, c, free, forced=(rng.choice(hits),))
    if branch == "x-scaling":
        return _map_from_shifted(rng, K, s, rng.choice([unit, -K.one]), c, free)
    if branch == "y-scaling":
        a = rng.choice([K.one, unit])
        allowed = [i for i in free if i > 0] if a == 1 else free
        return _map_from_shifted(rng, K, a, s, c, allowed)
    if branch == "y-scaling-translation":
        return _map_from_shifted(rng, K, K.one, s, c, free, forced=(0,))
    if branch == "resonant":
        k = rng.randint(1, 3)
        return _map_from_shifted(rng, K, s ** k, s, c, free, forced=(k,))
    if branch == "independent":
        a, b = rng.choice([(K(2), K(3)), (K(3), K(-2)), (K(5), K(6))])
        return _map_from_shifted(rng, K, a, b, c, free)
    if branch == "elliptic":
        a, b = rng.choice([(K(4), K(8)), (K(2), K(2)), (K(9), K(-27)), (K(3), K(9))])
        allowed = [i for i in free if b ** i != a]
        return _map_from_shifted(rng, K, a, b, c, allowed)
    if branch == "hyperbolic":
        a, b = rng.choice([(K(2), K(1) / 2), (K(4), K(1) / 2), (K(-3), K(1) / 9)])
        allowed = [i for i in free if b ** i != a]
        return _map_from_shifted(rng, K, a, b, c, allowed)
    raise ValueError(branch)


# --- worked closure examples -------------------------------------------------------------------
# (generators, their inverses written out by hand, point, expected closure)
# expected: "plane", ("curves", [...]) or ("points", [...])

CLOSURE_CASES = [
    (["(x, y + 1)"], ["(x, y - 1)"], (0, 0), ("curves", ["x"])),
    (["(y, x + y^2)"], ["(y - x^2, x)"], (0, 0), ("points", [(0, 0)])),
    (["(y, x + y^2)"], ["(y - x^2, x)"], (1, 0), "plane"),
    (["(2*x, 3*y)"], ["(1/2*x, 1/3*y)"], (1, 1), "plane"),
    (["(2*x, 2*y)"], ["(1/2*x, 1/2*y)"], (1, 1), ("curves", ["x - y"])),
    (["(2*x, 2*y)", "(y, x)"], ["(1/2*x, 1/2*y)", "(y, x)"], (1, 2), ("curves", ["2*x - y", "x - 2*y"])),
    (["(x, -y)", "(x, 1 - y)"], ["(x, -y)", "(x, 1 - y)"], (0, 0), ("curves", ["x"])),
    (["(-x, y)", "(x, 1 - y)"], ["(-x, y)", "(x, 1 - y)"], (1, 1),
     ("points", [(1, 1), (-1, 1), (1, 0), (-1, 0)])),
    (["(x + y^2, y)", "(y, x)"], ["(x - y^2, y)", "(y, x)"], (0, 0), ("points", [(0, 0)])),
    (["(x + y^2, y)", "(y, x)"], ["(x - y^2, y)", "(y, x)"], (1, 2), "plane"),
    (["(2*x, y)"], ["(1/2*x, y)"], (0, 3), ("points", [(0, 3)])),
    (["(2*x, y)"], ["(1/2*x, y)"], (1, 3), ("curves", ["y - 3"])),
    (["(2*x + y^2, 3*y)"], ["(1/2*x - 1/18*y^2, 1/3*y)"], (1, 0), ("curves", ["y"])),
    (["(x + 1, y)", "(x, 2*y)"], ["(x - 1, y)", "(x, 1/2*y)"], (5, 0), ("curves", ["y"])),
]


# --- finite-order triangular maps over Q(zeta_12) --------------------------------------------------

Q12 = NumberField.cyclotomic(12)


def torsion_map(rng, K=Q12, max_degree=4):
    """(a x + P(y), b y + c), a and b 12th roots of unity, a not in {1, b, ..., b^deg P}.

    When b = 1 the translation c is dropped: (a x + P(y), y + c) with c != 0 has infinite order.
    """
    z = K.gen
    while True:
        a, b = z ** rng.randrange(12), z ** rng.randrange(12)
        deg = rng.randint(0, max_degree)
        if a not in [b ** i for i in range(deg + 1)]:
            break
    c = K.zero if b == 1 else K(rand_q(rng)) + K(rand_q(rng)) * z
    P = rand_poly_y(rng, K, deg, coeff=lambda nonzero: K(rand_q(rng, nonzero=nonzero)) + K(rand_q(rng)) * z)
    return PlaneAutomorphism.triangular(K, a, P, b, c)
