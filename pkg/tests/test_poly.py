from __future__ import annotations

from fractions import Fraction

import pytest

from tripoint.exactnum import QOmega
from tripoint.poly import (
    Poly,
    UPoly,
    compose_rational,
    resultant,
    resultant_poly,
    squarefree_decomposition,
    squarefree_part,
    sylvester_matrix,
    determinant,
    univariate_gcd,
)

x, y, z = Poly.gens("x", "y", "z")


def up(*cs):
    return UPoly([QOmega(c) for c in cs])


def test_difference_of_squares():
    assert (x + y) * (x - y) == x ** 2 - y ** 2


def test_binomial_cube():
    assert (x + y) ** 3 == x ** 3 + x ** 2 * y * 3 + x * y ** 2 * 3 + y ** 3


def test_quartic_expansion():
    f = (x - y) * (x + y) ** 3 + (x * 2 + y * 3) * z ** 3
    assert f.degree() == 4 and f.is_homogeneous()
    assert f.terms[(4, 0, 0)] == 1 and f.terms[(0, 4, 0)] == -1
    assert f.terms[(3, 1, 0)] == 2 and f.terms[(1, 3, 0)] == -2
    assert (2, 2, 0) not in f.terms


def test_subst_line():
    t = Poly.var("t")
    g = (x ** 2 + y ** 2).subst({"x": t, "y": 1 - t}).with_vars(("t",))
    assert g == (t ** 2).scale(QOmega(2)) - t * 2 + 1


def test_subst_cubes_of_quartic():
    f = (x - y) * (x + y) ** 3 + (x * 2 + y * 3) * z ** 3
    g = f.subst({"x": x ** 3, "y": y ** 3, "z": z ** 3})
    assert g.degree() == 12
    assert all(all(e % 3 == 0 for e in ex) for ex in g.terms)


def test_derivatives():
    t = Poly.var("t")
    assert (t ** 3 + 2).derivative("t") == t ** 2 * 3
    assert up(1, 0, -3, 1).derivative() == up(0, -6, 3)
    assert up(7).derivative().is_zero()


def test_gcd_examples():
    assert univariate_gcd(up(-1, 0, 1), up(1, -2, 1)) == up(-1, 1)
    f = up(1, 2, 0, 1)
    assert univariate_gcd(f, f.derivative()) == up(1)


def test_gcd_over_q_omega():
    w = QOmega(0, 1)
    a = UPoly([-w, QOmega(1)])
    b = UPoly([QOmega(3), QOmega(1)])
    c = UPoly([QOmega(Fraction(1, 2), 1), QOmega(1)])
    assert univariate_gcd(a * b, a * c) == a


def test_resultant_linear_factor():
    g = up(3, -1, 0, 2)
    c = QOmega(Fraction(5, 3))
    assert resultant(UPoly([-c, QOmega(1)]), g) == g(c)


def test_resultant_small():
    assert resultant(up(-1, 0, 1), up(-2, 1)) == 3


def test_resultant_sign_convention():
    f, g = up(1, 2, 3), up(-1, 0, 0, 1)
    assert resultant(f, g) == determinant(sylvester_matrix(f, g))
    assert resultant(g, f) == resultant(f, g) * (-1) ** (f.degree() * g.degree())


def test_squarefree_part():
    assert squarefree_part(up(-1, 1) ** 2 * up(2, 1)) == up(-1, 1) * up(2, 1)
    assert squarefree_part(up(2, 4)) == up(Fraction(1, 2), 1)
    assert squarefree_part(up(1, 1, 1) ** 3) == up(1, 1, 1)


def test_squarefree_decomposition():
    f = up(-1, 1) * up(2, 1) ** 2 * up(1, 0, 1) ** 3
    parts = dict((k, q) for q, k in squarefree_decomposition(f))
    assert parts == {1: up(-1, 1), 2: up(2, 1), 3: up(1, 0, 1)}


def test_homogenize_roundtrip():
    F = x ** 2 * y - y + 3
    H = F.with_vars(("x", "y", "z")).homogenize("z")
    assert H.is_homogeneous() and H.degree() == 3
    assert H.dehomogenize("z").with_vars(("x", "y")) == F.with_vars(("x", "y"))
    assert (x * 2 + y * 2 - z).dehomogenize("z").with_vars(("x", "y")) == (x * 2 + y * 2 - 1).with_vars(("x", "y"))


def test_homogenize_degree_too_small():
    with pytest.raises(ValueError):
        (x ** 3 + y).homogenize("z", 2)


def test_compose_rational_identity_case():
    X, Y = Poly.gens("x", "y")
    q = X ** 3 - X ** 2 + X
    p = X ** 3 - X ** 2 * 3 + 1
    assert compose_rational(Y, Y - q, p, 1, var="y") == Y - q


def test_compose_rational_square():
    t = Poly.var("t", ("t", "y"))
    Y = Poly.var("y", ("t", "y"))
    two = Poly.const(QOmega(2), ("t", "y"))
    assert compose_rational(Y ** 2, t, two, 2, var="y").with_vars(("t",)) == Poly.var("t") ** 2


def test_compose_rational_zero_denominator():
    Y = Poly.var("y", ("x", "y"))
    with pytest.raises((ValueError, ZeroDivisionError)):
        compose_rational(Y, Y, Poly({}, ("x", "y")), 1, var="y")


def test_resultant_poly_implicit_line():
    t = Poly.var("t", ("t", "x", "y"))
    X = Poly.var("x", ("t", "x", "y"))
    Y = Poly.var("y", ("t", "x", "y"))
    # x = t/2, y = (1 - t)/2  ->  2x + 2y - 1 = 0
    R = resultant_poly(X * 2 - t, Y * 2 - 1 + t, "t")
    G = R.with_vars(("x", "y"))
    assert G.evaluate({"x": QOmega(Fraction(1, 4)), "y": QOmega(Fraction(1, 4))}) == 0
    assert G.degree() == 1


def test_json_roundtrip():
    F = (x - y.scale(QOmega(0, 1))) ** 2 + z * Fraction(1, 3)
    assert Poly.from_json(F.to_json()) == F
    assert F.to_json()["terms"] == sorted(F.to_json()["terms"], key=lambda d: d["exp"])
