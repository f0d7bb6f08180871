"""Certified isolation of the complex roots of squarefree polynomials over Q(w).

Approximations come from :func:`mpmath.polyroots` followed by Newton polishing.
Enclosures use the Weierstrass correction: with approximations ``z_1..z_n`` of
the roots of ``p`` (degree ``n``), the disks ``D(z_i, n |W_i|)``, where
``W_i = p(z_i) / (lc(p) prod_{j != i}(z_i - z_j))``, contain all roots, and a
connected union of ``m`` of them contains exactly ``m`` roots.  When the disks
are pairwise disjoint every disk isolates one root.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exactnum import ComplexBall, QOmega, _mpf_to_fraction, as_qomega, embed
from .poly import UPoly, squarefree_part

__all__ = [
    "PrecisionExhausted",
    "Root",
    "BallPoly",
    "CurveBalls",
    "isolate_roots",
    "recognize_root",
    "newton_pair",
    "krawczyk_pair",
]


class PrecisionExhausted(RuntimeError):
    """Certification failed at the requested precision; retry with more bits."""


@dataclass
class Root:
    ball: ComplexBall
    exact: QOmega | None = None

    @property
    def value(self):
        return self.exact if self.exact is not None else self.ball

    def center(self) -> mpmath.mpc:
        return self.ball.center


class BallPoly:
    """A polynomial with coefficients pre-embedded as balls at one precision."""

    def __init__(self, p: UPoly, prec: int):
        self.poly = p
        self.prec = prec
        self.coeffs = [embed(c, prec) for c in p.coeffs]
        self._mp = [c.center for c in self.coeffs]

    def __call__(self, t: ComplexBall) -> ComplexBall:
        acc = embed(0, self.prec)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def mp(self, t: mpmath.mpc) -> mpmath.mpc:
        with mpmath.workprec(self.prec):
            acc = mpmath.mpc(0)
            for c in reversed(self._mp):
                acc = acc * t + c
            return acc

    def derivative(self) -> BallPoly:
        return BallPoly(self.poly.derivative(), self.prec)


def _approx_roots(p: UPoly, prec: int) -> list[mpmath.mpc]:
    n = p.degree()
    if n == 1:
        with mpmath.workprec(prec):
            return [-(p[0] / p[1]).to_mpc(prec)]
    coeffs = [as_qomega(c).to_mpc(prec) for c in reversed(p.coeffs)]
    steps, extra = 100 + 10 * n, 2 * prec
    for _ in range(4):
        try:
            with mpmath.workprec(prec):
                roots = mpmath.polyroots(coeffs, maxsteps=steps, extraprec=extra)
                return [mpmath.mpc(r) for r in roots]
        except mpmath.libmp.libhyper.NoConvergence:
            steps *= 3
            extra *= 2
    raise PrecisionExhausted(f"root approximation did not converge (degree {n})")


def _polish(bp: BallPoly, dbp: BallPoly, z: mpmath.mpc, steps: int = 12) -> mpmath.mpc:
    with mpmath.workprec(bp.prec + 32):
        for _ in range(steps):
            d = dbp.mp(z)
            if d == 0:
                break
            step = bp.mp(z) / d
            z = z - step
            if abs(step) <= abs(z) * mpmath.mpf(2) ** (-bp.prec) or step == 0:
                break
    return z


def isolate_roots(p: UPoly, prec: int = 192, squarefree: bool = False, recognize: bool = True) -> list[Root]:
    """Pairwise disjoint certified disks, one around each root of ``p``."""
    p = UPoly([as_qomega(c) for c in p.coeffs])
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    if not squarefree:
        p = squarefree_part(p)
    n = p.degree()
    if n <= 0:
        return []
    if n == 1:
        r = -p[0] / p[1]
        return [Root(embed(r, prec), r)]
    bp = BallPoly(p, prec)
    dbp = bp.derivative()
    zs = [_polish(bp, dbp, z) for z in _approx_roots(p, prec)]
    lc = embed(p.lc(), prec)
    balls = []
    for i, z in enumerate(zs):
        zb = ComplexBall(z, 0, prec)
        den = lc
        for j, w in enumerate(zs):
            if j != i:
                den = den * (zb - ComplexBall(w, 0, prec))
        if den.abs_lower() <= 0:
            raise PrecisionExhausted("coincident root approximations")
        W = bp(zb) / den
        balls.append(ComplexBall(z, n * W.abs_upper(), prec))
    for i in range(n):
        for j in range(i + 1, n):
            if balls[i].overlaps(balls[j]):
                raise PrecisionExhausted("root enclosures overlap; raise precision_bits")
    out = []
    for b in balls:
        exact = recognize_root(p, b) if recognize else None
        out.append(Root(b, exact))
    return out


def _limit(x: mpmath.mpf, bound: int) -> Fraction:
    return _mpf_to_fraction(x).limit_denominator(bound)


def recognize_root(p: UPoly, ball: ComplexBall, bound: int = 1 << 20) -> QOmega | None:
    """An exact root of ``p`` in Q(w) inside ``ball`` with small height, if any."""
    with mpmath.workprec(ball.prec):
        x, y = ball.center.real, ball.center.imag
        wc_f = 2 * y / mpmath.sqrt(3)
        re_f = x + wc_f / 2
    q = QOmega(_limit(re_f, bound), _limit(wc_f, bound))
    if not ball.contains(q):
        return None
    if p(q):
        return None
    return q


# ---------------------------------------------------------------------------
# Krawczyk certification of transversal pairs f_1(s) ~ f_2(t)


class CurveBalls:
    """Coordinates of a parametrized curve and their derivatives as :class:`BallPoly`."""

    def __init__(self, coords, prec: int):
        self.prec = prec
        self.P = [BallPoly(p, prec) for p in coords]
        self.D = [b.derivative() for b in self.P]

    def value(self, t: ComplexBall) -> list[ComplexBall]:
        return [p(t) for p in self.P]

    def slope(self, t: ComplexBall) -> list[ComplexBall]:
        return [p(t) for p in self.D]

    def value_mp(self, t) -> list:
        return [p.mp(t) for p in self.P]

    def slope_mp(self, t) -> list:
        return [p.mp(t) for p in self.D]


def _pair_system(c1: CurveBalls, c2: CurveBalls, s, t, chart: int, ball: bool):
    """Residual G and Jacobian J of the two chart minors of (f_1(s), f_2(t))."""
    if ball:
        A, dA, B, dB = c1.value(s), c1.slope(s), c2.value(t), c2.slope(t)
    else:
        A, dA, B, dB = c1.value_mp(s), c1.slope_mp(s), c2.value_mp(t), c2.slope_mp(t)
    c = chart
    G, J = [], []
    for a in (k for k in range(3) if k != c):
        G.append(A[a] * B[c] - B[a] * A[c])
        J.append([dA[a] * B[c] - B[a] * dA[c], A[a] * dB[c] - dB[a] * A[c]])
    return G, J


def newton_pair(c1: CurveBalls, c2: CurveBalls, s0, t0, chart: int, max_steps: int = 60):
    """Newton iteration for a common image point; returns (s, t, last step size)."""
    prec = c1.prec
    with mpmath.workprec(prec + 32):
        s, t = mpmath.mpc(s0), mpmath.mpc(t0)
        last = mpmath.mpf(1)
        tol = mpmath.mpf(2) ** (-prec)
        for _ in range(max_steps):
            G, J = _pair_system(c1, c2, s, t, chart, ball=False)
            det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
            if det == 0:
                break
            ds = (J[1][1] * G[0] - J[0][1] * G[1]) / det
            dt = (J[0][0] * G[1] - J[1][0] * G[0]) / det
            s, t = s - ds, t - dt
            last = max(abs(ds), abs(dt))
            if last <= tol * max(1, abs(s), abs(t)):
                break
    return s, t, last


def krawczyk_pair(c1: CurveBalls, c2: CurveBalls, s0, t0, max_steps: int = 60):
    """Certify a unique regular solution of ``f_1(s) ~ f_2(t)`` near ``(s0, t0)``.

    Returns ``(S, T)`` balls containing exactly one solution, or None.  A regular
    solution is a point where both branches are immersed with distinct tangents.
    """
    prec = c1.prec
    with mpmath.workprec(prec):
        vals = c1.value_mp(mpmath.mpc(s0))
        chart = max(range(3), key=lambda k: abs(vals[k]))
    s, t, last = newton_pair(c1, c2, s0, t0, chart, max_steps)
    with mpmath.workprec(prec):
        scale = max(mpmath.mpf(1), abs(s), abs(t))
        r = max(16 * last, mpmath.mpf(2) ** (-(3 * prec) // 4)) * scale
        r = _mpf_to_fraction(mpmath.mpf(r))
        Sc, Tc = ComplexBall(s, 0, prec), ComplexBall(t, 0, prec)
        SX, TX = ComplexBall(s, r, prec), ComplexBall(t, r, prec)
        G, _ = _pair_system(c1, c2, Sc, Tc, chart, ball=True)
        _, JX = _pair_system(c1, c2, SX, TX, chart, ball=True)
        Jm = [[JX[i][j].center for j in range(2)] for i in range(2)]
        det = Jm[0][0] * Jm[1][1] - Jm[0][1] * Jm[1][0]
        if det == 0:
            return None
        Y = [[Jm[1][1] / det, -Jm[0][1] / det], [-Jm[1][0] / det, Jm[0][0] / det]]
    Yb = [[ComplexBall(Y[i][j], 0, prec) for j in range(2)] for i in range(2)]
    box = ComplexBall(mpmath.mpc(0), r, prec)
    for i in range(2):
        step = -(Yb[i][0] * G[0] + Yb[i][1] * G[1])
        for j in range(2):
            m = (Yb[i][0] * JX[0][j] + Yb[i][1] * JX[1][j])
            m = (ComplexBall(mpmath.mpc(1), 0, prec) - m) if i == j else -m
            step = step + m * box
        if not step.abs_upper() < r:
            return None
    return SX, TX
