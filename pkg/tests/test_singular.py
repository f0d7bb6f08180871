from __future__ import annotations

import pytest

from tripoint.curve import ParamCurve, ProjPoint
from tripoint.exactnum import QOmega
from tripoint.poly import Poly, UPoly
from tripoint.singular import (
    CensusOptions,
    ImproperParametrization,
    PointNotOnCurve,
    census_pair,
    census_self,
    cusp_polynomial,
    delta_check,
    double_point_system,
    expected_delta,
    full_census,
    multiplicity_at_point_exact,
    ordinary_check,
    reparametrize,
    self_eliminant,
)


def up(*cs):
    return UPoly([QOmega(c) for c in cs])


NODAL = ParamCurve(up(-1, 0, 1), up(0, -1, 0, 1), up(1), "nodal")
CUSP = ParamCurve(up(0, 0, 1), up(0, 0, 0, 1), up(1), "cusp")
CONIC = ParamCurve(up(0, 0, 1), up(0, 1), up(1), "conic")


def test_options_validate_precision():
    with pytest.raises(ValueError):
        CensusOptions(precision_bits=32)


def test_double_point_system_symmetry():
    sys_ = double_point_system(NODAL)
    for g in sys_.polys:
        swapped = Poly({(b, a): c for (a, b), c in g.terms.items()}, ("s", "t"))
        assert swapped == g or swapped == -g
    assert sys_.vanishes_at(1, -1)
    assert not sys_.vanishes_at(1, 2)


def test_self_eliminant_and_cusp_polynomial():
    E = self_eliminant(NODAL)
    assert E(QOmega(1)) == 0 and E(QOmega(-1)) == 0
    assert cusp_polynomial(NODAL).degree() == 0
    assert cusp_polynomial(CUSP) == up(0, 1)


def test_nodal_cubic():
    c = census_self(NODAL)
    assert len(c.entries) == 1
    e = c.entries[0]
    assert e.point == ProjPoint.of(0, 0, 1)
    assert e.multiplicity == 2 and e.ordinary and e.certification == "exact"
    assert set(p.value for p in e.parameters) == {QOmega(-1), QOmega(1)}
    assert delta_check(c, [3])


def test_conic_is_smooth():
    assert census_self(CONIC).entries == []


def test_cuspidal_cubic():
    c = census_self(CUSP)
    assert len(c.entries) == 1
    e = c.entries[0]
    assert e.multiplicity == 2 and not e.ordinary
    assert [p.order for p in e.parameters] == [2]
    with pytest.raises(ValueError):
        delta_check(c, [3])


def test_parameter_at_infinity():
    K = reparametrize(NODAL, 1)
    c = census_self(K)
    assert len(c.entries) == 1
    values = {p.to_json()["t"] for p in c.entries[0].parameters}
    assert values == {"inf", "-1/2"}
    assert c.entries[0].ordinary


def test_lines_meet_once():
    X = ParamCurve(up(0), up(0, 1), up(1))
    Y = ParamCurve(up(0, 1), up(0), up(1))
    c = census_pair(X, Y)
    assert len(c.entries) == 1 and c.entries[0].multiplicity == 1
    assert c.entries[0].point == ProjPoint.of(0, 0, 1)


def test_tangent_line_and_conic():
    line = ParamCurve(up(0), up(0, 1), up(1))
    c = census_pair(CONIC, line)
    assert len(c.entries) == 1
    assert c.entries[0].multiplicity == 2 and not c.entries[0].ordinary


def test_concurrent_lines():
    lines = [ParamCurve(up(0, 1), up(0, k), up(1)) for k in (0, 1, 2)]
    c = full_census(lines)
    assert c.multiplicities() == [3] and c.all_ordinary
    assert delta_check(c, [1, 1, 1])


def test_improper_parametrization_refused():
    t2 = up(0, 0, 1)
    with pytest.raises(ImproperParametrization):
        census_self(ParamCurve(t2, t2 * t2 + up(1), up(1)))


def test_multiplicity_at_point():
    m, params = multiplicity_at_point_exact(NODAL, ProjPoint.of(0, 0, 1))
    assert m == 2 and set(params) == {QOmega(-1), QOmega(1)}
    with pytest.raises(PointNotOnCurve):
        multiplicity_at_point_exact(NODAL, ProjPoint.of(1, 1, 1))


def test_ordinary_check():
    assert ordinary_check([(NODAL, 1), (NODAL, -1)])
    assert not ordinary_check([(CUSP, 0)])
    # two branches with the same tangent
    C = ParamCurve(up(0, 1), up(0, 0, 1), up(1))
    assert not ordinary_check([(C, 0), (ParamCurve(up(0, 1), up(0, 0, -1), up(1)), 0)])


def test_expected_delta():
    assert expected_delta([10]) == 36
    assert expected_delta([4, 4, 4]) == 57
    assert expected_delta([(3, 1)]) == 0
    assert expected_delta([1] * 9) == 36


def test_census_json_shape():
    doc = census_self(NODAL).to_json()
    assert doc["totals"] == {"kind": "self", "points": 1, "multiplicities": {"2": 1}, "all_ordinary": True, "delta_sum": 1, "pair_count": 2}


def test_threads_do_not_change_result():
    lines = [ParamCurve(up(0, 1), up(0, k), up(1)) for k in (0, 1, 2)] + [ParamCurve(up(1), up(0, 1), up(1))]
    a = full_census(lines, CensusOptions(threads=1)).to_json()
    b = full_census(lines, CensusOptions(threads=4)).to_json()
    assert a == b
