from __future__ import annotations

from fractions import Fraction

import pytest

from tripoint.exactnum import QOmega
from tripoint.poly import UPoly
from tripoint.series import (
    Inconsistent,
    LinExpr,
    NonlinearTermSurvives,
    NotDivisible,
    TruncSeries,
    TruncationMismatch,
    Underdetermined,
    series_substitute,
    solve_affine_system,
    unknown,
)

a, b = unknown("a"), unknown("b")


def S(cs, order):
    return TruncSeries([LinExpr.lift(c) for c in cs], order)


def test_product_truncates():
    assert S([1, 1], 3) * S([1, -1], 3) == S([1, 0, -1], 3)


def test_unknown_product_beyond_order_is_dropped():
    au = TruncSeries([LinExpr(), a], 1)
    bu = TruncSeries([LinExpr(), b], 1)
    assert au * bu == S([], 1)


def test_unknown_product_inside_order_raises():
    au = TruncSeries([LinExpr(), a], 2)
    bu = TruncSeries([LinExpr(), b], 2)
    with pytest.raises(NonlinearTermSurvives):
        au * bu


def test_orders_must_match():
    with pytest.raises(TruncationMismatch):
        S([1], 2) + S([1], 3)


def test_substitute_square():
    f = UPoly([QOmega(0), QOmega(0), QOmega(1)])
    assert series_substitute(f, QOmega(1), TruncSeries.u(2)) == S([1, 2, 1], 2)


def test_substitute_linear_factor_at_t4():
    tau = unknown("tau")
    f = UPoly([QOmega(-2), QOmega(1)])
    shift = TruncSeries([LinExpr(), tau], 1)
    assert series_substitute(f, QOmega(2), shift) == TruncSeries([LinExpr(), tau], 1)


def test_substitute_constant():
    f = UPoly([QOmega(7)])
    assert series_substitute(f, QOmega(3), TruncSeries.u(4)) == S([7], 4)


def test_substitute_needs_vanishing_shift():
    with pytest.raises(ValueError):
        series_substitute(UPoly([QOmega(1), QOmega(1)]), QOmega(0), S([1, 1], 2))


def test_div_upow():
    assert S([0, 0, 1, 1], 3).div_upow(2) == S([1, 1], 1)
    assert TruncSeries([LinExpr(), a], 1).div_upow(1) == TruncSeries([a], 0)
    with pytest.raises(NotDivisible):
        S([1, 1], 2).div_upow(1)


def test_solve_unique():
    x, y = unknown("x"), unknown("y")
    sol = solve_affine_system([x + y - 1, x - y], require_unique=True)
    assert sol.unique and sol.rank == 2
    assert sol.value("x") == QOmega(Fraction(1, 2)) == sol.value("y")


def test_solve_inconsistent():
    x = unknown("x")
    with pytest.raises(Inconsistent):
        solve_affine_system([x - 1, x - 2])


def test_solve_underdetermined_when_unique_required():
    x, y = unknown("x"), unknown("y")
    with pytest.raises(Underdetermined):
        solve_affine_system([x + y], require_unique=True)


def test_solve_with_restriction():
    x, y = unknown("x"), unknown("y")
    sol = solve_affine_system([x + y - 4], restrict_to={"y": x}, unknowns=["x"])
    assert sol.value("x") == 2


def test_rank_invariant_under_row_permutation():
    w = QOmega(0, 1)
    xs = [unknown(f"x{i}") for i in range(4)]
    eqs = [xs[0] + xs[1].scale(w), xs[1] - xs[2], xs[0] + xs[2].scale(w), xs[3] - 1]
    r1 = solve_affine_system(eqs).rank
    r2 = solve_affine_system(list(reversed(eqs))).rank
    assert r1 == r2 == 3


def test_solution_residual_is_exactly_zero():
    w = QOmega(0, 1)
    xs = [unknown(f"x{i}") for i in range(3)]
    eqs = [xs[0] + xs[1].scale(w) - 2, xs[1] - xs[2].scale(w * w) + w, xs[0] - xs[2] + Fraction(1, 3)]
    sol = solve_affine_system(eqs, require_unique=True)
    vals = {f"x{i}": sol.value(f"x{i}") for i in range(3)}
    assert all(e.evaluate(vals) == 0 for e in eqs)


def test_json_roundtrip():
    s = TruncSeries([a + 1, b.scale(QOmega(0, 2)), LinExpr(QOmega(Fraction(1, 3)))], 2)
    assert TruncSeries.from_json(s.to_json()) == s
