from __future__ import annotations

import re

import pytest

from tripoint import gallery
from tripoint.curve import ParamCurve, ProjPoint
from tripoint.exactnum import QOmega
from tripoint.plot import parse_window, plot_svg
from tripoint.poly import UPoly

L0 = ParamCurve(UPoly([QOmega(0), QOmega(1)]), UPoly([QOmega(1), QOmega(-1)]), UPoly([QOmega(2)]), "L0")


def test_line_is_one_straight_polyline():
    svg = plot_svg([L0], samples=50)
    lines = re.findall(r'points="([^"]+)"', svg)
    assert len(lines) == 1
    pts = [tuple(map(float, p.split(","))) for p in lines[0].split()]
    (x0, y0), (x1, y1) = pts[0], pts[-1]
    for x, y in pts:
        assert abs((x - x0) * (y1 - y0) - (y - y0) * (x1 - x0)) < 1e-6 * 480 * 480


def test_prop1a_real_locus_nonempty():
    svg = plot_svg(gallery.prop1a().params, samples=400)
    assert "<polyline" in svg


def test_mark_on_dual_hesse():
    svg = plot_svg(gallery.dual_hesse().params, marks=[ProjPoint.of(1, 1, 1)], samples=100)
    assert 'data-point="1,1"' in svg


def test_deterministic():
    a = plot_svg(gallery.dual_hesse().params, samples=300)
    b = plot_svg(gallery.dual_hesse().params, samples=300)
    assert a == b


@pytest.mark.parametrize("bad", ["1,0,0,1", "0,1", "0,1,2,2", "a,b,c,d"])
def test_bad_window(bad):
    with pytest.raises(ValueError):
        parse_window(bad)


def test_bad_window_in_plot():
    with pytest.raises(ValueError):
        plot_svg([L0], window=(1.0, 0.0, 0.0, 1.0))
