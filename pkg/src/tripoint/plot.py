"""Deterministic SVG pictures of the real locus of parametrized curves."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .curve import ParamCurve, ProjPoint
from .exactnum import as_qomega

__all__ = ["plot_svg", "parse_window"]

_COLORS = ["#1f4e79", "#a23b2a", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f", "#5d4037", "#c2185b", "#455a64"]


def parse_window(text: str) -> tuple[float, float, float, float]:
    parts = [float(Fraction(p)) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("window must be xmin,xmax,ymin,ymax")
    xmin, xmax, ymin, ymax = parts
    if not (xmin < xmax and ymin < ymax):
        raise ValueError("window must satisfy xmin < xmax and ymin < ymax")
    return xmin, xmax, ymin, ymax


def _is_real(C: ParamCurve) -> bool:
    return all(as_qomega(c).wc == 0 for p in C.coords for c in p.coeffs)


def _real_coeffs(C: ParamCurve) -> list[list[float]]:
    return [[float(as_qomega(c).re) for c in p.coeffs] for p in C.coords]


def _horner(cs: list[float], t: float) -> float:
    acc = 0.0
    for c in reversed(cs):
        acc = acc * t + c
    return acc


def _segments(C: ParamCurve, window, t_range, samples: int) -> list[list[tuple[float, float]]]:
    xmin, xmax, ymin, ymax = window
    span = max(xmax - xmin, ymax - ymin)
    cs = _real_coeffs(C)
    t0, t1 = t_range
    segs, cur = [], []
    for k in range(samples + 1):
        t = t0 + (t1 - t0) * k / samples
        x, y, z = (_horner(c, t) for c in cs)
        inside = False
        if abs(z) > 1e-12:
            X, Y = x / z, y / z
            pad = 0.05 * span
            inside = xmin - pad <= X <= xmax + pad and ymin - pad <= Y <= ymax + pad
        if inside:
            if cur and (abs(X - cur[-1][0]) > span / 4 or abs(Y - cur[-1][1]) > span / 4):
                segs.append(cur)
                cur = []
            cur.append((X, Y))
        elif cur:
            segs.append(cur)
            cur = []
    if cur:
        segs.append(cur)
    return [s for s in segs if len(s) > 1]


def plot_svg(
    curves: Sequence[ParamCurve],
    window: tuple[float, float, float, float] = (-3.0, 3.0, -3.0, 3.0),
    t_range: tuple[float, float] = (-3.0, 3.0),
    samples: int = 2000,
    marks: Sequence[ProjPoint] = (),
    size: int = 480,
) -> str:
    """Polylines of the real points ``f(t)``, ``t`` real, in the affine chart ``z = 1``.

    Curves with non-real coefficients have at most finitely many real points and
    are skipped.  Marked points must be exact; those at infinity or with a
    non-real affine chart image are ignored.
    """
    xmin, xmax, ymin, ymax = window
    if not (xmin < xmax and ymin < ymax):
        raise ValueError("window must satisfy xmin < xmax and ymin < ymax")
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if not t_range[0] < t_range[1]:
        raise ValueError("t range must be increasing")

    def sx(x: float) -> float:
        return (x - xmin) / (xmax - xmin) * size

    def sy(y: float) -> float:
        return (ymax - y) / (ymax - ymin) * size

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black"/>',
        f'<clipPath id="w"><rect x="0" y="0" width="{size}" height="{size}"/></clipPath>',
        '<g clip-path="url(#w)" fill="none" stroke-width="1.5">',
    ]
    for idx, C in enumerate(curves):
        if not _is_real(C):
            continue
        color = _COLORS[idx % len(_COLORS)]
        label = C.label or f"curve{idx}"
        for seg in _segments(C, window, t_range, samples):
            pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in seg)
            out.append(f'<polyline data-curve="{label}" stroke="{color}" points="{pts}"/>')
    out.append("</g>")
    for p in marks:
        x, y, z = (as_qomega(c) for c in p.coords)
        if not z or x.wc or y.wc or z.wc:
            continue
        X, Y = float(x.re / z.re), float(y.re / z.re)
        if xmin <= X <= xmax and ymin <= Y <= ymax:
            out.append(f'<circle data-point="{X:g},{Y:g}" cx="{sx(X):.3f}" cy="{sy(Y):.3f}" r="4" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
