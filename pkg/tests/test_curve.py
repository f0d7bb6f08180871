from __future__ import annotations

from fractions import Fraction

import pytest

from tripoint.curve import (
    BasePoint,
    IdenticallyZero,
    ParamCurve,
    PlaneCurve,
    ProjPoint,
    ShapeMismatch,
    SingularMatrix,
    apply_projective_linear,
    implicitize,
    intersection_multiplicity_param,
    lies_on,
    map_degree,
    param_eval,
    proportional,
    root_of_unity_components,
    tangent_line,
    twist_component,
)
from tripoint.exactnum import QOmega
from tripoint.poly import Poly, UPoly

W = QOmega(0, 1)
x, y, z = Poly.gens("x", "y", "z")


def up(*cs):
    return UPoly([QOmega(c) for c in cs])


L0 = ParamCurve(up(0, 1), up(1, -1), up(2), "L0")
QUARTIC = ParamCurve(up(0, -3, 0, 0, 1), up(0, 2, 0, 0, 1), up(-1, 0, 0, 2), "quartic")
QUARTIC_F = (x - y) * (x + y) ** 3 + (x * 2 + y * 3) * z ** 3


def test_line_at_minus_one():
    P = param_eval(L0, -1)
    assert P == ProjPoint.of(-1, 2, 2)
    assert P.coords[1] == P.coords[2]


def test_quartic_at_zero():
    assert param_eval(QUARTIC, 0) == ProjPoint.of(0, 0, 1)


def test_prop1a_curve_at_zero():
    t3 = up(0, 0, 0, 1)
    X = (t3 + up(2)) * (t3 * t3 + t3 * up(3) + up(3))
    Y = up(0, 1) * (t3 + up(1)) * (t3 + up(2)) * (t3 + up(3))
    Z = t3 ** 3 + t3 * t3 * up(3) - up(3)
    assert param_eval(ParamCurve(X, Y, Z), 0) == ProjPoint.of(-2, 0, 1)


def test_base_point():
    C = ParamCurve(up(0, 1), up(0, 2), up(0, 0, 1))
    with pytest.raises(BasePoint):
        param_eval(C, 0)


def test_lies_on():
    assert lies_on(QUARTIC_F, QUARTIC)
    assert not lies_on(x - y, ParamCurve(up(0, 1), up(1, 1), up(1)))


def test_implicitize_line():
    F = implicitize(L0)
    assert proportional(F.F, x * 2 + y * 2 - z) is not None


def test_implicitize_conic():
    F = implicitize(ParamCurve(up(0, 0, 1), up(0, 1), up(1)))
    assert proportional(F.F, x * z - y ** 2) is not None


def test_implicitize_quartic():
    F = implicitize(QUARTIC)
    assert F.degree == 4
    assert proportional(F.F, QUARTIC_F) is not None


def test_map_degree_of_improper_map():
    t2 = up(0, 0, 1)
    C = ParamCurve(t2, t2 * t2 + up(1), up(1))
    assert map_degree(C) == 2
    assert map_degree(L0) == 1


def test_tangents():
    conic = ParamCurve(up(0, 0, 1), up(0, 1), up(1))
    a, b, c = tangent_line(conic, 0)
    assert b == 0 and c == 0 and a != 0
    L = tangent_line(L0, Fraction(5, 7))
    assert proportional(x * 2 + y * 2 - z, x.scale(L[0]) + y.scale(L[1]) + z.scale(L[2])) is not None
    a, b, c = tangent_line(QUARTIC, 0)
    assert c == 0


def _p_q():
    return up(1, 0, -3, 1), up(0, 1, -1, 1)


def test_cubic_tangency_with_L2():
    p, q = _p_q()
    C2 = ParamCurve(-q, up(0, 1) * p, p)
    P = Poly.from_upoly(p, "x", ("x", "y", "z"))
    Q = Poly.from_upoly(q, "x", ("x", "y", "z"))
    L2 = PlaneCurve((P * y + Q).homogenize("z"))
    for s in (0, 1, -1):
        assert intersection_multiplicity_param(L2, C2, s) == 3


def test_tangency_with_antidiagonal():
    p, q = _p_q()
    C2 = ParamCurve(-q, up(0, 1) * p, p)
    assert intersection_multiplicity_param(x + y, C2, 0) == 2


def test_generic_line_meets_transversally():
    assert intersection_multiplicity_param(x - y, ParamCurve(up(0, 0, 1), up(0, 1), up(1)), 1) == 1


def test_identically_zero():
    with pytest.raises(IdenticallyZero):
        intersection_multiplicity_param(x * 2 + y * 2 - z, L0, 0)


def test_root_of_unity_components_of_lines():
    comps = root_of_unity_components(up(0, 1), up(0, 1), up(1), 2)
    got = {(c.x, c.y, c.z) for c in comps}
    assert got == {(up(0, 1), up(0, 1), up(1)), (up(0, -1), up(0, 1), up(1))}
    for c in comps:
        assert lies_on(x ** 2 - y ** 2, c)


def test_root_of_unity_identity():
    (C,) = root_of_unity_components(up(0, 1), up(1), up(3), 1)
    assert C.coords == (up(0, 1), up(1), up(3))


def test_root_of_unity_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        root_of_unity_components(up(0, 0, 1), up(0, 1), up(1), 2)


def test_root_of_unity_cubes_of_quartic():
    T = up(0, 1)
    comps = root_of_unity_components(T * (T - up(3)) ** 3, T * (T + up(2)) ** 3, (T * up(2) - up(1)) ** 3, 3)
    # the input lies on G with G(x^3, y^3, z^3) = f(x) f(wx) f(w^2 x)
    h = QUARTIC_F * QUARTIC_F.subst({"x": x.scale(W)}) * QUARTIC_F.subst({"x": x.scale(W * W)})
    assert all(lies_on(h, c) for c in comps)
    assert len({c.x for c in comps}) == 3


def test_twist():
    assert twist_component(QUARTIC, (1, 1, 1)).coords == QUARTIC.coords
    twisted = twist_component(QUARTIC, (W * W, 1, 1))
    assert lies_on(QUARTIC_F.subst({"x": x.scale(W)}), twisted)
    C = QUARTIC
    for _ in range(3):
        C = twist_component(C, (W, 1, 1))
    assert C.coords == QUARTIC.coords


def test_projective_linear():
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert apply_projective_linear(QUARTIC, I).coords == QUARTIC.coords
    cusp = PlaneCurve(x ** 3 - y ** 2 * z)
    swap = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert apply_projective_linear(cusp, swap).F == y ** 3 - x ** 2 * z
    M = [[1, 2, 0], [0, 1, W], [1, 0, 3]]
    C = apply_projective_linear(QUARTIC, M)
    assert lies_on(apply_projective_linear(PlaneCurve(QUARTIC_F), M), C)
    with pytest.raises(SingularMatrix):
        apply_projective_linear(QUARTIC, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_point_normalization_and_json():
    P = ProjPoint.of(2, 4, 2)
    assert P.coords == (QOmega(1), QOmega(2), QOmega(1))
    C = ParamCurve.from_json(QUARTIC.to_json())
    assert C.coords == QUARTIC.coords and C.label == "quartic"
    F = PlaneCurve.from_json(PlaneCurve(QUARTIC_F, "f").to_json())
    assert F.F == QUARTIC_F
