from __future__ import annotations

import pytest

from tripoint import gallery
from tripoint.curve import ProjPoint, implicitize, lies_on, param_eval, proportional
from tripoint.exactnum import QOmega
from tripoint.singular import census_self, full_census


def test_prop1a_identity_and_shape():
    e = gallery.prop1a()
    C, F = e.params[0], e.implicit[0]
    assert C.degree() == 10 and F.degree == 10
    assert lies_on(F, C)
    assert F.F.terms[(1, 9, 0)] == 9  # leading term 9 (x - 1) y^9
    assert param_eval(C, 0) == ProjPoint.of(-2, 0, 1)


def test_prop1a_implicitization_matches():
    e = gallery.prop1a()
    c = proportional(e.implicit[0].F, implicitize(e.params[0]).F)
    assert c is not None and c.is_rational()


def test_pipeline():
    e = gallery.prop1a_pipeline()
    assert e.data["tangency_multiplicities"] == {"0": 3, "1": 3, "-1": 3}
    assert e.data["pipeline_param_equals_printed"]
    assert e.data["pipeline_F_vanishes_on_param"]
    assert e.data["F_scalar_to_printed"] == "3"
    C2 = e.params[1]
    # y = s and x = -q(s)/p(s)
    assert C2.y == C2.z * gallery.UPoly([QOmega(0), QOmega(1)])


def test_prop1b_components():
    e = gallery.prop1b()
    assert len(e.params) == 3
    for C, F in zip(e.params, e.implicit):
        assert lies_on(F, C)
    assert e.data["product_in_cubes"] and e.data["lemma_components_match"]
    assert e.implicit[3].degree == 12


def test_cremona():
    e = gallery.cremona_fixtures()
    assert e.data["q_on_C2"] and e.data["q"] == ProjPoint.of(3, 2, 8)
    assert e.data["C3_param_ok"] and e.data["C2_param_ok"]
    c3 = census_self(e.params[0])
    assert c3.multiplicities() == [2] and not c3.all_ordinary
    assert c3.entries[0].point == ProjPoint.of(0, 0, 1)
    assert census_self(e.params[1]).entries == []


def test_dual_hesse():
    e = gallery.dual_hesse()
    assert e.data["p1"] == ProjPoint.of(1, 1, 1)
    assert e.data["incidence"]["p1"] == "147"
    assert set(e.data["points_per_line"].values()) == {4}
    c = full_census(e.params)
    assert len(c.entries) == 12 and c.multiplicities() == [3] * 12 and c.all_ordinary
    found = {en.point for en in c.entries}
    expected = {v for k, v in e.data.items() if k.startswith("p") and isinstance(v, ProjPoint)}
    assert found == expected


def test_lines_param_on_their_equations():
    e = gallery.dual_hesse()
    for C, L in zip(e.params, e.implicit):
        assert lies_on(L, C)


def test_entries_and_json():
    assert sorted(gallery.ENTRIES) == ["cremona", "dual_hesse", "prop1a", "prop1a_pipeline", "prop1b"]
    doc = gallery.get_entry("prop1a").to_json()
    assert doc["expected"]["points"] == 12
    with pytest.raises(KeyError):
        gallery.get_entry("missing")
