"""Rational parametrized plane curves and homogeneous implicit curves."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exactnum import ComplexBall, QOmega, as_qomega, embed, format_qomega
from .poly import Poly, UPoly, poly_root, resultant_poly, univariate_gcd

__all__ = [
    "ParamCurve",
    "PlaneCurve",
    "ProjPoint",
    "BasePoint",
    "DegenerateImage",
    "NotImmersed",
    "IdenticallyZero",
    "ShapeMismatch",
    "SingularMatrix",
    "param_eval",
    "lies_on",
    "implicitize",
    "map_degree",
    "tangent_line",
    "intersection_multiplicity_param",
    "root_of_unity_components",
    "twist_component",
    "apply_projective_linear",
    "proportional",
    "cross",
    "curve_from_json",
]

ZERO = QOmega(0)
ONE = QOmega(1)
XYZ = ("x", "y", "z")


class BasePoint(ValueError):
    pass


class DegenerateImage(ValueError):
    pass


class NotImmersed(ValueError):
    pass


class IdenticallyZero(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


def _upoly(p) -> UPoly:
    if isinstance(p, UPoly):
        return UPoly([as_qomega(c) for c in p.coeffs])
    return UPoly([as_qomega(c) for c in p])


def cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


@dataclass(frozen=True)
class ProjPoint:
    """A point of the projective plane, exact or enclosed in balls."""

    coords: tuple
    exact: bool = True

    def __post_init__(self):
        if self.exact:
            cs = tuple(as_qomega(c) for c in self.coords)
            if not any(cs):
                raise ValueError("(0:0:0) is not a projective point")
            k = max(i for i, c in enumerate(cs) if c)
            inv = cs[k].inverse()
            object.__setattr__(self, "coords", tuple(c * inv for c in cs))

    @classmethod
    def of(cls, *coords) -> ProjPoint:
        return cls(tuple(coords))

    def __str__(self) -> str:
        if self.exact:
            return "(" + ":".join(format_qomega(c) for c in self.coords) + ")"
        return "(" + ":".join(repr(c) for c in self.coords) + ")"

    def to_json(self) -> dict:
        if self.exact:
            return {"exact": True, "coords": [format_qomega(c) for c in self.coords]}
        return {"exact": False, "coords": [c.to_json() for c in self.coords]}

    def balls(self, prec: int) -> tuple:
        if self.exact:
            return tuple(embed(c, prec) for c in self.coords)
        return self.coords

    def affine(self, prec: int = 128) -> tuple:
        """Chart ``z = 1`` as complex balls."""
        x, y, z = self.balls(prec)
        return (x / z, y / z)


@dataclass
class ParamCurve:
    x: UPoly
    y: UPoly
    z: UPoly
    label: str = ""

    def __post_init__(self):
        self.x, self.y, self.z = _upoly(self.x), _upoly(self.y), _upoly(self.z)

    @classmethod
    def from_lists(cls, x, y, z, label: str = "") -> ParamCurve:
        return cls(UPoly(x), UPoly(y), UPoly(z), label)

    @property
    def coords(self) -> tuple[UPoly, UPoly, UPoly]:
        return (self.x, self.y, self.z)

    def degree(self) -> int:
        return max(p.degree() for p in self.coords)

    def is_primitive(self) -> bool:
        g = univariate_gcd(univariate_gcd(self.x, self.y), self.z)
        return g.degree() == 0

    def derivative(self) -> ParamCurve:
        return ParamCurve(self.x.derivative(), self.y.derivative(), self.z.derivative(), self.label + "'")

    def eval(self, t) -> tuple:
        return tuple(p(t) for p in self.coords)

    def eval_ball(self, t: ComplexBall) -> tuple:
        return tuple(_horner_ball(p, t) for p in self.coords)

    def leading_vector(self) -> tuple:
        d = self.degree()
        return tuple(p[d] for p in self.coords)

    def to_json(self) -> dict:
        return {
            "kind": "param",
            "label": self.label,
            "polys": [Poly.from_upoly(p, "t", ("t",)).to_json() for p in self.coords],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> ParamCurve:
        if data.get("kind") != "param":
            raise ValueError("not a parametrized curve")
        ps = [Poly.from_json(p) for p in data["polys"]]
        ups = []
        for p in ps:
            if p.vars and p.vars != ("t",):
                raise ValueError(f"parametrization must be in t, got {p.vars}")
            ups.append(p.with_vars(("t",)).to_upoly("t") if p.terms else UPoly([]))
        return cls(ups[0], ups[1], ups[2], data.get("label", ""))


def _horner_ball(p: UPoly, t: ComplexBall) -> ComplexBall:
    acc = embed(ZERO, t.prec)
    for c in reversed(p.coeffs):
        acc = acc * t + c
    return acc


@dataclass
class PlaneCurve:
    F: Poly
    label: str = ""
    degree: int = field(default=-1)

    def __post_init__(self):
        self.F = self.F.with_vars(XYZ)
        if self.F.is_zero():
            raise ValueError("zero polynomial")
        if not self.F.is_homogeneous():
            raise ValueError("implicit equation must be homogeneous")
        d = self.F.degree()
        if self.degree not in (-1, d):
            raise ValueError(f"stated degree {self.degree} != {d}")
        self.degree = d

    def __call__(self, x, y, z):
        return self.F.evaluate({"x": x, "y": y, "z": z})

    def to_json(self) -> dict:
        return {"kind": "implicit", "label": self.label, "poly": self.F.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> PlaneCurve:
        if data.get("kind") != "implicit":
            raise ValueError("not an implicit curve")
        return cls(Poly.from_json(data["poly"]), data.get("label", ""))


def curve_from_json(data: Mapping):
    return ParamCurve.from_json(data) if data.get("kind") == "param" else PlaneCurve.from_json(data)


# ---------------------------------------------------------------------------


def param_eval(C: ParamCurve, t) -> ProjPoint:
    if isinstance(t, ComplexBall):
        return ProjPoint(C.eval_ball(t), exact=False)
    vals = C.eval(as_qomega(t))
    if not any(vals):
        raise BasePoint(f"all coordinates vanish at t={t}")
    return ProjPoint(vals)


def compose_param(F: Poly, C: ParamCurve) -> UPoly:
    """``F(x(t), y(t), z(t))`` as a univariate polynomial."""
    F = F.with_vars(XYZ)
    d = F.degree() if not F.is_zero() else 0
    pw = []
    for p in C.coords:
        row = [UPoly([ONE])]
        for _ in range(d):
            row.append(row[-1] * p)
        pw.append(row)
    out = UPoly([])
    for (i, j, k), c in F.terms.items():
        out = out + pw[0][i] * pw[1][j] * pw[2][k] * UPoly([c])
    return out


def lies_on(F: PlaneCurve | Poly, C: ParamCurve) -> bool:
    poly = F.F if isinstance(F, PlaneCurve) else F
    return compose_param(poly, C).is_zero()


def _minors_at(C: ParamCurve, s0) -> list[UPoly]:
    vals = C.eval(s0)
    out = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        out.append(C.coords[a] * UPoly([vals[b]]) - C.coords[b] * UPoly([vals[a]]))
    return out


def map_degree(C: ParamCurve, probes: Sequence = (Fraction(7, 3), Fraction(-11, 5), Fraction(13, 17))) -> int:
    """Number of parameters over a generic image point (1 for proper maps)."""
    best = None
    for s0 in probes:
        s0 = as_qomega(s0)
        if not any(C.eval(s0)):
            continue
        g = UPoly([])
        for m in _minors_at(C, s0):
            g = univariate_gcd(g, m) if not g.is_zero() else m
        if g.is_zero():
            raise DegenerateImage("image is a point")
        k = g.degree()
        best = k if best is None else min(best, k)
    if best is None:
        raise BasePoint("every probe parameter is a base point")
    return best


def proportional(F: Poly, G: Poly):
    """The scalar c with G == c*F, or None."""
    F, G = F._align(G)
    if F.is_zero() or G.is_zero():
        return None
    if set(F.terms) != set(G.terms):
        return None
    e = next(iter(F.terms))
    c = as_qomega(G.terms[e]) / as_qomega(F.terms[e])
    for k, v in F.terms.items():
        if as_qomega(v) * c != as_qomega(G.terms[k]):
            return None
    return c


def _monic_lex(F: Poly) -> Poly:
    _, lc = F.leading_term()
    return F.scale(as_qomega(lc).inverse())


def implicitize(C: ParamCurve, label: str | None = None) -> PlaneCurve:
    """Implicit equation of the image, via a resultant in a suitable chart."""
    if not any(p.degree() > 0 for p in C.coords):
        raise DegenerateImage("constant parametrization")
    k = map_degree(C)
    d = C.degree()
    if d % k:
        raise DegenerateImage(f"map degree {k} does not divide {d}")
    # chart coordinate: one of top degree, so no image point is lost at infinity
    c = max(range(3), key=lambda i: (C.coords[i].degree(), -i))
    a, b = [i for i in range(3) if i != c]
    names = ("X", "Y")
    pc, pa, pb = C.coords[c], C.coords[a], C.coords[b]
    vars_ = ("t", "X", "Y")

    def lift(p: UPoly, var_index: int) -> Poly:
        # p_c(t) * V - p(t)
        terms = {}
        for deg, coef in enumerate(pc.coeffs):
            if coef:
                e = [deg, 0, 0]
                e[var_index] = 1
                terms[tuple(e)] = coef
        for deg, coef in enumerate(p.coeffs):
            if coef:
                key = (deg, 0, 0)
                terms[key] = terms.get(key, ZERO) - coef
        return Poly({e: v for e, v in terms.items() if v}, vars_)

    R = resultant_poly(lift(pa, 1), lift(pb, 2), "t")
    if R.is_zero():
        raise DegenerateImage("vanishing resultant")
    R = R.with_vars(names)
    if k > 1:
        root = poly_root(R, k)
        if root is None:
            raise DegenerateImage("resultant is not a perfect power")
        R = root
    R = _monic_lex(R)
    deg_img = d // k
    H = R.homogenize("W", deg_img) if R.degree() <= deg_img else None
    if H is None:
        raise DegenerateImage("resultant degree exceeds image degree")
    # rename (X, Y, W) back to the coordinate slots (a, b, c)
    slot = {"X": a, "Y": b, "W": c}
    terms = {}
    for e, v in H.terms.items():
        ex = [0, 0, 0]
        for name, k_ in zip(H.vars, e):
            ex[slot[name]] += k_
        terms[tuple(ex)] = v
    F = _monic_lex(Poly(terms, XYZ))
    out = PlaneCurve(F, label if label is not None else (C.label + ":implicit" if C.label else "implicit"))
    if not lies_on(out, C):
        raise DegenerateImage("implicit equation failed the a-posteriori incidence check")
    return out


def tangent_line(C: ParamCurve, t0) -> tuple:
    """Coefficients (a, b, c) of the tangent line at the branch through f(t0)."""
    t0 = as_qomega(t0)
    P = C.eval(t0)
    if not any(P):
        raise BasePoint(f"base point at t={t0}")
    D = C
    for _ in range(C.degree()):
        D = D.derivative()
        V = D.eval(t0)
        L = cross(P, V)
        if any(L):
            return L
    raise NotImmersed(f"no derivative leaves the point f({t0})")


def branch_order(C: ParamCurve, t0) -> int:
    """Multiplicity of the branch at t0: first derivative order not proportional to f(t0)."""
    t0 = as_qomega(t0)
    P = C.eval(t0)
    D = C
    for r in range(1, C.degree() + 1):
        D = D.derivative()
        if any(cross(P, D.eval(t0))):
            return r
    raise NotImmersed(f"branch at t={t0} never leaves its point")


def intersection_multiplicity_param(F: PlaneCurve | Poly, C: ParamCurve, t0) -> int:
    poly = F.F if isinstance(F, PlaneCurve) else F
    h = compose_param(poly, C)
    if h.is_zero():
        raise IdenticallyZero("curve is contained in the implicit curve")
    return h.order_at(as_qomega(t0))


# ---------------------------------------------------------------------------
# component lemmas and coordinate changes

_ROOTS_OF_UNITY = {
    1: ONE,
    2: QOmega(-1),
    3: QOmega(0, 1),
    6: QOmega(1, 1),  # -w^2 = 1 + w
}


def _rational_nth_root(c: QOmega, n: int) -> QOmega | None:
    if n == 1:
        return c
    if not c.is_rational():
        return None
    q = c.re
    neg = q < 0
    if neg and n % 2 == 0:
        return None
    num, den = abs(q.numerator), q.denominator

    def iroot(v: int) -> int | None:
        r = round(v ** (1.0 / n)) if v < (1 << 1000) else None
        if r is None:
            lo, hi = 0, 1 << (v.bit_length() // n + 1)
            while lo < hi:
                mid = (lo + hi) // 2
                if mid ** n < v:
                    lo = mid + 1
                else:
                    hi = mid
            r = lo
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == v:
                return cand
        return None

    rn, rd = iroot(num), iroot(den)
    if rn is None or rd is None:
        return None
    return QOmega(Fraction(-rn if neg else rn, rd))


def _upoly_nth_root(p: UPoly, n: int) -> UPoly | None:
    if p.is_zero():
        return None
    root = poly_root(Poly.from_upoly(p, "t", ("t",)), n)
    if root is None:
        return None
    r = root.with_vars(("t",)).to_upoly("t")
    scale = _rational_nth_root(as_qomega(p.lc()), n)
    if scale is None:
        return None
    r = r * UPoly([scale])
    return r if r ** n == p else None


def root_of_unity_components(x: UPoly, y: UPoly, z: UPoly, n: int) -> list[ParamCurve]:
    """Components of ``h(x^n, y^n, z^n) = 0`` from a parametrization of ``h = 0``.

    The input must have the shape ``(t X(t)^n : t Y(t)^n : Z(t)^n)``.
    """
    if n not in _ROOTS_OF_UNITY:
        raise ValueError(f"primitive {n}-th roots of unity are not in Q(w)")
    x, y, z = _upoly(x), _upoly(y), _upoly(z)
    if n == 1:
        return [ParamCurve(x, y, z)]
    tpoly = UPoly([ZERO, ONE])
    try:
        X = _upoly_nth_root(x.exact_div(tpoly), n)
        Y = _upoly_nth_root(y.exact_div(tpoly), n)
    except ArithmeticError as exc:
        raise ShapeMismatch("x or y is not divisible by t") from exc
    Z = _upoly_nth_root(z, n)
    if X is None or Y is None or Z is None:
        raise ShapeMismatch("factors are not exact n-th powers")
    tn = UPoly.monomial(n)
    Xn, Yn, Zn = X.compose(tn), Y.compose(tn), Z.compose(tn)
    zeta = _ROOTS_OF_UNITY[n]
    out = []
    for k in range(1, n + 1):
        out.append(ParamCurve(tpoly * Xn * UPoly([zeta ** k]), tpoly * Yn, Zn, f"component{k}"))
    return out


def twist_component(C: ParamCurve, scale: Sequence) -> ParamCurve:
    sx, sy, sz = (as_qomega(s) for s in scale)
    if not (sx and sy and sz):
        raise ValueError("scales must be nonzero")
    return ParamCurve(C.x * UPoly([sx]), C.y * UPoly([sy]), C.z * UPoly([sz]), C.label)


def _det3(M) -> QOmega:
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def inverse3(M) -> list[list[QOmega]]:
    M = [[as_qomega(v) for v in row] for row in M]
    d = _det3(M)
    if not d:
        raise SingularMatrix("determinant is zero")
    inv = d.inverse()
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = M[rows[0]][cols[0]] * M[rows[1]][cols[1]] - M[rows[0]][cols[1]] * M[rows[1]][cols[0]]
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    return [[cof[j][i] * inv for j in range(3)] for i in range(3)]


def apply_projective_linear(obj, M):
    """Push a curve forward along ``p -> M p``."""
    M = [[as_qomega(v) for v in row] for row in M]
    if not _det3(M):
        raise SingularMatrix("determinant is zero")
    if isinstance(obj, ParamCurve):
        cs = obj.coords
        new = [UPoly([]) for _ in range(3)]
        for i in range(3):
            for j in range(3):
                if M[i][j]:
                    new[i] = new[i] + cs[j] * UPoly([M[i][j]])
        return ParamCurve(new[0], new[1], new[2], obj.label)
    if isinstance(obj, PlaneCurve):
        Minv = inverse3(M)
        g = Poly.gens(*XYZ)
        subs = {}
        for i, name in enumerate(XYZ):
            acc = Poly({}, XYZ)
            for j in range(3):
                if Minv[i][j]:
                    acc = acc + g[j].scale(Minv[i][j])
            subs[name] = acc
        return PlaneCurve(obj.F.subst(subs).with_vars(XYZ), obj.label)
    if isinstance(obj, ProjPoint) and obj.exact:
        c = obj.coords
        return ProjPoint(tuple(sum((M[i][j] * c[j] for j in range(3)), ZERO) for i in range(3)))
    raise TypeError(f"cannot transform {type(obj).__name__}")
