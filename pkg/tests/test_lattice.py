import random

import pytest
from hypothesis import given, strategies as st

from conftest import triangulars
from checks import check_descriptor, check_diagonalization, check_power_law, diagonalizable
from corpus import BRANCHES, Q, branch_map, conjugating_word
from planeorbit.errors import (
    ConstantPi,
    DegeneratePair,
    EigenvalueOutsideField,
    KindMismatch,
    PreconditionViolation,
)
from planeorbit.lattice import (
    Kind,
    Subvariety,
    TriangularData,
    affine_equivariant,
    classify,
    diagonalize,
    equivalent_fibration,
    is_invariant,
    is_torsion,
    minimal_invariant_through,
    normalize_curve,
    projective_equivariant,
    support_intersection_dim1,
)
from planeorbit.numfield import NumberField
from planeorbit.planeauto import PlaneAutomorphism, PlanePoint, compose_all, invert, parse_map
from planeorbit.poly2 import BiPoly, parse_poly

Q4 = NumberField.cyclotomic(4)


def M(text, K=Q):
    return parse_map(text, K)


def P(text, K=Q):
    return parse_poly(text, K)


def pt(x, y, K=Q):
    return PlanePoint.of(K, x, y)


def curves(*texts):
    return Subvariety.build(curves=[P(t) for t in texts])


# --- normalization and subvarieties ------------------------------------------------------------------

def test_normalize_curve_is_primitive():
    assert normalize_curve(P("1/2*x - 1/2*y")) == P("x - y")
    assert normalize_curve(P("-4*x + 6")) == P("2*x - 3")


def test_normalize_curve_ignores_irrational_scalars():
    i = Q4.gen
    f = P("3*y - 1", Q4)
    assert normalize_curve(f.scale(i)) == normalize_curve(f) == f
    g = P("y - t", Q4)
    assert normalize_curve(g.scale(2 + i)) == g


def test_points_on_curves_are_absorbed():
    s = Subvariety.build(curves=[P("x")], points=[pt(0, 5), pt(1, 1)])
    assert s.points == (pt(1, 1),)
    assert s.dimension == 1


def test_subvariety_contains():
    s = curves("x - y")
    assert s.contains(pt(3, 3)) and not s.contains(pt(1, 2))
    assert Subvariety.whole().contains(pt(7, 1))
    assert Subvariety.empty().dimension == -1


# --- diagonalization -------------------------------------------------------------------------------

def test_diagonalize_generic():
    D = diagonalize(TriangularData.of(M("(2*x + y^2, 3*y)")))
    assert D.x_tilde == P("x - 1/7*y^2")
    assert D.y_tilde == P("y")
    assert not D.h1


def test_diagonalize_resonant_term():
    D = diagonalize(TriangularData.of(M("(3*x + y, 3*y)")))
    assert D.x_tilde == P("x")
    assert D.h1.to_bipoly("y") == P("y")


def test_diagonalize_identity():
    D = diagonalize(TriangularData.of(M("(x, y)")))
    assert D.x_tilde == P("x") and D.y_tilde == P("y") and not D.h1


def test_diagonalize_rejects_translation():
    with pytest.raises(PreconditionViolation):
        diagonalize(TriangularData.of(M("(x, y + 1)")))


@pytest.mark.parametrize("K", [Q, Q4])
@given(data=st.data())
def test_diagonalization_identities(K, data):
    phi = data.draw(triangulars(K, 0, 5))
    if diagonalizable(phi):
        check_diagonalization(phi)


def test_diagonalization_identities_by_branch():
    rng = random.Random(5)
    for branch in BRANCHES:
        for _ in range(10):
            phi = branch_map(rng, branch)
            if diagonalizable(phi):
                check_diagonalization(phi)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_power_law(n):
    rng = random.Random(n)
    for branch in ("unipotent-twist", "resonant", "y-scaling-translation", "independent"):
        check_power_law(branch_map(rng, branch), n)


# --- classification -----------------------------------------------------------------------------------

def test_classify_translation():
    d = classify(M("(x, y + 1)"))
    assert d.kind is Kind.ORBIT_FIBRATION
    assert normalize_curve(d.pi_affine) == P("x")
    assert d.grouping_order == 1


def test_classify_independent_scaling():
    d = classify(M("(2*x, 3*y)"))
    assert d.kind is Kind.NON_FIBRATION
    assert set(d.invariant_curves) == {P("x"), P("y")}
    assert d.distinguished_point == pt(0, 0)


def test_classify_homothety():
    d = classify(M("(2*x, 2*y)"))
    assert d.kind is Kind.PROJECTIVE_QUOTIENT
    assert d.pi_projective == (P("x"), P("y"))
    assert d.grouping_order == 1
    assert d.distinguished_point == pt(0, 0)


def test_classify_involution():
    d = classify(M("(-x, -y)"))
    assert d.kind is Kind.FINITE_ORDER and d.order == 2


def test_classify_translation_with_twist():
    d = classify(M("(x + y^2, y + 1)"))
    assert d.kind is Kind.ORBIT_FIBRATION
    assert affine_equivariant(d.pi_affine, d.phi) == (Q.one, Q.zero)


def test_classify_affine_via_jordan_form():
    d = classify(M("(y, x)"))
    assert d.kind is Kind.FINITE_ORDER and d.order == 2
    d = classify(M("(x + y, y)"))
    assert d.kind is Kind.ORBIT_FIBRATION


def test_classify_irrational_eigenvalues():
    with pytest.raises(EigenvalueOutsideField) as exc:
        classify(M("(y, x + y)"))
    assert exc.value.charpoly


@pytest.mark.parametrize("branch", BRANCHES)
def test_descriptors_by_branch(branch):
    rng = random.Random(branch)
    for _ in range(8):
        phi = branch_map(rng, branch)
        d = classify(phi)
        assert d.branch == branch
        check_descriptor(d, phi, rng)


def test_affine_descriptors_are_transported():
    rng = random.Random(9)
    for text in ["(y + 1, x)", "(2*y, 2*x)", "(x + y, y)", "(x + 2*y + 1, 3*y)", "(2*y, x)"]:
        phi = M(text)
        try:
            d = classify(phi)
        except EigenvalueOutsideField:
            continue
        check_descriptor(d, phi, rng)


# --- torsion ----------------------------------------------------------------------------------------------

def test_is_torsion_examples():
    assert is_torsion(M("(-x, -y)")) == 2
    assert is_torsion(M("(x, y + 1)")) is None
    assert is_torsion(M("(y, x + y^2)")) is None


def test_conjugated_involution_has_order_two():
    rng = random.Random(2)
    inv = M("(-x, -y)")
    for _ in range(5):
        s = conjugating_word(rng, Q, rng.randint(1, 3))
        assert is_torsion(compose_all([s, inv, invert(s)])) == 2


def test_torsion_orders_are_exact():
    K = NumberField.cyclotomic(12)
    z = K.gen
    for a, b in [(z, z ** 4), (z ** 3, -K.one), (z ** 2, z ** 6)]:
        phi = PlaneAutomorphism.triangular(K, a, BiPoly.zero(K), b, K.zero)
        n = is_torsion(phi)
        assert phi.power(n).is_identity()
        for j in range(1, n):
            if n % j == 0:
                assert not phi.power(j).is_identity()


# --- equivariant maps ----------------------------------------------------------------------------

def test_affine_equivariant_examples():
    assert affine_equivariant(P("x"), M("(2*x, y + 1)")) == (Q(2), Q(0))
    assert affine_equivariant(P("x - y^2"), M("(x + 1, y)")) == (Q(1), Q(1))
    assert affine_equivariant(P("x"), M("(y, x)")) is None
    with pytest.raises(ConstantPi):
        affine_equivariant(P("3"), M("(y, x)"))


def test_projective_equivariant_examples():
    assert projective_equivariant(P("x"), P("y"), M("(2*x, 3*y)")) == ((2, 0), (0, 3))
    assert projective_equivariant(P("x"), P("y"), M("(y, x)")) == ((0, 1), (1, 0))
    assert projective_equivariant(P("x"), P("y"), M("(x + 1, y)")) is None
    with pytest.raises(DegeneratePair):
        projective_equivariant(P("x"), P("2*x"), M("(y, x)"))


# --- invariance ------------------------------------------------------------------------------------

def test_is_invariant_examples():
    assert is_invariant(M("(2*x, 3*y)"), curves("x"))
    assert is_invariant(M("(y, x)"), curves("x", "y"))
    assert not is_invariant(M("(x + 1, y)"), curves("x"))
    assert is_invariant(M("(y, x)"), Subvariety.build(points=[pt(1, 2), pt(2, 1)]))
    assert not is_invariant(M("(y, x)"), Subvariety.build(points=[pt(1, 2)]))


# --- fibrations ---------------------------------------------------------------------------------------

def test_equivalent_affine_fibrations():
    d1 = classify(M("(x, y + 1)"))
    d2 = classify(M("(x, y + 2)"))
    d3 = classify(M("(x + 1, y)"))
    assert equivalent_fibration(d1, d2)
    assert not equivalent_fibration(d1, d3)


def test_equivalent_projective_fibrations():
    d1 = classify(M("(2*x, 2*y)"))
    d2 = classify(M("(2*y, 2*x)"))  # eigenvalues 2, -2: pair built from x + y, x - y
    assert d2.kind is Kind.PROJECTIVE_QUOTIENT
    assert equivalent_fibration(d1, d2)
    d3 = classify(M("(2*x, 4*y)"))
    assert not equivalent_fibration(d1, d3)


def test_span_equality_of_pairs():
    from planeorbit.lattice import span_intersection

    assert len(span_intersection([P("x"), P("y")], [P("x + y"), P("y")])) == 2
    assert len(span_intersection([P("x"), P("y")], [P("x^2"), P("y")])) == 1


def test_equivalent_fibration_kind_mismatch():
    with pytest.raises(KindMismatch):
        equivalent_fibration(classify(M("(x, y + 1)")), classify(M("(2*x, 2*y)")))


def test_minimal_invariant_examples():
    phi = M("(x, y + 1)")
    assert minimal_invariant_through(classify(phi), phi, pt(0, 0)) == curves("x")
    phi = M("(2*x, 2*y)")
    assert minimal_invariant_through(classify(phi), phi, pt(1, 1)) == curves("x - y")
    assert minimal_invariant_through(classify(phi), phi, pt(0, 0)) == Subvariety.build(points=[pt(0, 0)])
    phi = M("(2*x, 3*y)")
    assert minimal_invariant_through(classify(phi), phi, pt(1, 1)).whole_plane
    assert minimal_invariant_through(classify(phi), phi, pt(0, 1)) == curves("x")


def test_minimal_invariant_on_torsion_locus():
    phi = M("(-x + y, -y)")  # torsion points lie on y = 0
    d = classify(phi)
    assert d.kind is Kind.ORBIT_FIBRATION and d.torsion_locus == curves("y")
    s = minimal_invariant_through(d, phi, pt(3, 0))
    assert s == Subvariety.build(points=[pt(3, 0), pt(-3, 0)])


def test_support_intersection_examples():
    dA, phiA = classify(M("(2*x, 3*y)")), M("(2*x, 3*y)")
    dB, phiB = classify(M("(3*x, 2*y)")), M("(3*x, 2*y)")
    assert support_intersection_dim1(dA, phiA, dB, phiB) == curves("x", "y")
    tA = M("(x, y + 1)")
    assert support_intersection_dim1(classify(tA), tA, dB, phiB) == curves("x")
    rot = M("(x + 1, y)")
    assert support_intersection_dim1(classify(tA), tA, classify(rot), rot) == Subvariety.empty()


def test_support_intersection_rejects_equivalent_fibrations():
    tA, tB = M("(x, y + 1)"), M("(x, y + 3)")
    with pytest.raises(KindMismatch):
        support_intersection_dim1(classify(tA), tA, classify(tB), tB)
