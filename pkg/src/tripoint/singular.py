"""Singularity census for rational plane curves and unions of them.

A self-intersection of ``C: t -> f(t)`` is an ordered pair ``s != t`` with
``f(s) ~ f(t)``; these are the common zeros of the three 2x2 minors of the rows
``f(s), f(t)`` after dividing out ``s - t``.  Intersections of two components
come from ``F_j(f_i(t)) = 0`` with ``F_j`` the implicit equation of ``C_j``.
Special parameters are isolated as certified disks; parameters with the same
image are grouped.  A grouping is accepted only when Krawczyk certifies it, or
when both parameters are exact.  Distinct images must be separated by
``cluster_separation_factor`` times the enclosure radius; otherwise the
census refuses with :class:`PrecisionExhausted`.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .curve import (
    DegenerateImage,
    ParamCurve,
    PlaneCurve,
    ProjPoint,
    branch_order,
    compose_param,
    cross,
    implicitize,
    map_degree,
    proportional,
    tangent_line,
)
from .exactnum import ComplexBall, QOmega, as_qomega, embed, format_qomega
from .isolate import CurveBalls, PrecisionExhausted, Root, isolate_roots, krawczyk_pair
from .poly import Poly, UPoly, resultant_poly, squarefree_decomposition, squarefree_part, univariate_gcd

__all__ = [
    "CensusOptions",
    "CensusEntry",
    "BranchParam",
    "SingularCensus",
    "DoublePointSystem",
    "HesseCensus",
    "PrecisionExhausted",
    "ImproperParametrization",
    "SharedComponent",
    "PointNotOnCurve",
    "ParameterAtInfinity",
    "double_point_system",
    "self_eliminant",
    "cusp_polynomial",
    "census_self",
    "census_pair",
    "full_census",
    "multiplicity_at_point_exact",
    "ordinary_check",
    "delta_check",
    "hesse_census",
    "reparametrize",
]

ZERO = QOmega(0)
ONE = QOmega(1)


class ImproperParametrization(ValueError):
    """The map is not birational onto its image (infinitely many double pairs)."""


class SharedComponent(ValueError):
    """Two components have the same image."""


class PointNotOnCurve(ValueError):
    pass


class ParameterAtInfinity(ValueError):
    """A special point sits at t = infinity and no reparametrization avoided it."""


@dataclass
class CensusOptions:
    precision_bits: int = 192
    cluster_separation_factor: int = 1 << 16
    max_newton_steps: int = 60
    threads: int = 1

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        if self.cluster_separation_factor < 1:
            raise ValueError("cluster_separation_factor must be >= 1")


# ---------------------------------------------------------------------------
# double point system


@dataclass(frozen=True)
class DoublePointSystem:
    g1: Poly
    g2: Poly
    g3: Poly

    @property
    def polys(self) -> tuple[Poly, Poly, Poly]:
        return (self.g1, self.g2, self.g3)

    def vanishes_at(self, s, t) -> bool:
        b = {"s": as_qomega(s), "t": as_qomega(t)}
        return all(g.evaluate(b) == 0 for g in self.polys)


def _divided_minor(p: UPoly, q: UPoly) -> Poly:
    """``(p(s) q(t) - q(s) p(t)) / (s - t)`` in the variables (s, t)."""
    n = max(len(p.coeffs), len(q.coeffs))
    terms: dict = {}
    for i in range(n):
        for j in range(i):
            c = p[i] * q[j] - p[j] * q[i]
            if not c:
                continue
            # (s^i t^j - s^j t^i) / (s - t)
            for k in range(i - j):
                e = (j + k, i - 1 - k)
                terms[e] = terms.get(e, ZERO) + c
    return Poly(terms, ("s", "t"))


def double_point_system(C: ParamCurve) -> DoublePointSystem:
    x, y, z = C.coords
    return DoublePointSystem(_divided_minor(x, y), _divided_minor(x, z), _divided_minor(y, z))


def _to_upoly(p: Poly, var: str) -> UPoly:
    if p.is_zero():
        return UPoly([])
    return p.with_vars((var,)).to_upoly(var)


def self_eliminant(C: ParamCurve) -> UPoly:
    """Squarefree polynomial in s vanishing at every parameter of a double pair."""
    if C.degree() < 2:
        return UPoly([ONE])
    system = double_point_system(C)
    gs = [g for g in system.polys if not g.is_zero()]
    if len(gs) < 2:
        raise ImproperParametrization("double point system has fewer than two nonzero equations")
    E = UPoly([])
    for a in range(len(gs)):
        for b in range(a + 1, len(gs)):
            if gs[a].degree("t") <= 0 and gs[b].degree("t") <= 0:
                continue
            R = _to_upoly(resultant_poly(gs[a], gs[b], "t"), "s")
            if R.is_zero():
                continue
            E = R if E.is_zero() else univariate_gcd(E, R)
            if E.degree() == 0:
                return UPoly([ONE])
    if E.is_zero():
        raise ImproperParametrization("every resultant of the double point system vanishes")
    return squarefree_part(E)


def cusp_polynomial(C: ParamCurve) -> UPoly:
    """Monic gcd of the coordinates of ``f x f'``: the non-immersed parameters."""
    comps = cross(C.coords, C.derivative().coords)
    g = UPoly([])
    for c in comps:
        g = univariate_gcd(g, c)
    if g.is_zero():
        raise DegenerateImage("f and f' are everywhere proportional")
    return g


# ---------------------------------------------------------------------------
# behaviour at t = infinity


def reparametrize(C: ParamCurve, c0) -> ParamCurve:
    """The curve in the parameter ``tau`` with ``t = c0 + 1/tau``."""
    c0 = as_qomega(c0)
    d = C.degree()
    polys = [p.taylor_shift(c0).reverse(d) for p in C.coords]
    return ParamCurve(polys[0], polys[1], polys[2], C.label)


def _infinity_ok(C: ParamCurve, others: Sequence[PlaneCurve]) -> bool:
    d = C.degree()
    v = tuple(p[d] for p in C.coords)
    w = tuple(p[d - 1] for p in C.coords)
    if not any(cross(v, w)):
        return False
    g = UPoly([])
    for c in cross(tuple(UPoly([a]) for a in v), C.coords):
        g = univariate_gcd(g, c)
    if g.degree() > 0:
        return False
    return all(F.F.evaluate(dict(zip(("x", "y", "z"), v))) != 0 for F in others)


_SHIFTS = [QOmega(c) for c in (0, 1, -1, 2, -2, Fraction(1, 2), 3, Fraction(-1, 2), 5, Fraction(1, 3), 7)]


@dataclass
class _Working:
    index: int
    original: ParamCurve
    curve: ParamCurve
    shift: QOmega | None

    def report(self, value):
        """Map a working parameter back to the user's parameter (None is infinity)."""
        if self.shift is None:
            return value
        if isinstance(value, ComplexBall):
            return value.inverse() + self.shift
        value = as_qomega(value)
        if not value:
            return None
        return self.shift + value.inverse()


def _prepare(C: ParamCurve, index: int, others: Sequence[PlaneCurve]) -> _Working:
    if C.degree() < 1:
        raise DegenerateImage("constant parametrization")
    if not C.is_primitive():
        raise DegenerateImage("parametrization has a base point; divide out the common factor")
    if map_degree(C) != 1:
        raise ImproperParametrization("map degree is not 1")
    if _infinity_ok(C, others):
        return _Working(index, C, C, None)
    for c0 in _SHIFTS:
        if any(C.eval(c0)):
            R = reparametrize(C, c0)
            if _infinity_ok(R, others):
                return _Working(index, C, R, c0)
    raise ParameterAtInfinity("no shift moved the parameter at infinity to a generic point")


# ---------------------------------------------------------------------------
# records


@dataclass
class BranchParam:
    component: int
    value: object  # QOmega, ComplexBall, or None for t = infinity
    order: int = 1

    @property
    def exact(self) -> bool:
        return not isinstance(self.value, ComplexBall)

    def to_json(self) -> dict:
        if self.value is None:
            t = "inf"
        elif isinstance(self.value, ComplexBall):
            t = self.value.to_json()
        else:
            t = format_qomega(self.value)
        return {"component": self.component, "t": t, "order": self.order}


@dataclass
class CensusEntry:
    point: ProjPoint
    multiplicity: int
    ordinary: bool
    parameters: list[BranchParam]
    certification: str
    intersections: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "point": self.point.to_json(),
            "multiplicity": self.multiplicity,
            "ordinary": self.ordinary,
            "parameters": [p.to_json() for p in self.parameters],
            "certification": self.certification,
        }
        if self.intersections:
            out["intersections"] = {f"{i},{j}": m for (i, j), m in sorted(self.intersections.items())}
        return out

    def branch_count(self) -> int:
        return sum(p.order for p in self.parameters)


@dataclass
class SingularCensus:
    kind: str
    degrees: list[int]
    entries: list[CensusEntry]
    precision_bits: int
    complete: bool = True

    @property
    def pair_count(self) -> int:
        return sum(e.multiplicity * (e.multiplicity - 1) for e in self.entries)

    @property
    def delta_sum(self) -> int:
        return self.pair_count // 2

    @property
    def all_ordinary(self) -> bool:
        return all(e.ordinary for e in self.entries)

    def multiplicities(self) -> list[int]:
        return sorted((e.multiplicity for e in self.entries), reverse=True)

    def summary(self) -> dict:
        counts: dict[int, int] = {}
        for e in self.entries:
            counts[e.multiplicity] = counts.get(e.multiplicity, 0) + 1
        out = {
            "kind": self.kind,
            "points": len(self.entries),
            "multiplicities": {str(k): v for k, v in sorted(counts.items())},
            "all_ordinary": self.all_ordinary,
        }
        if self.kind == "pair":
            out["intersection_total"] = sum(e.multiplicity for e in self.entries)
        else:
            out["delta_sum"] = self.delta_sum
            out["pair_count"] = self.pair_count
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "degrees": self.degrees,
            "precision_bits": self.precision_bits,
            "complete": self.complete,
            "totals": self.summary(),
            "entries": [e.to_json() for e in self.entries],
        }


# ---------------------------------------------------------------------------
# special parameters per component


@dataclass
class _Special:
    comp: int
    root: Root
    self_pair: bool = False
    cusp: bool = False
    cross_mult: dict = field(default_factory=dict)  # j -> multiplicity in F_j(f_i(t))
    image: tuple | None = None
    order: int = 1

    @property
    def exact(self) -> bool:
        return self.root.exact is not None


def _member_roots(q: UPoly, roots: list[Root], prec: int) -> list[int]:
    """Indices of the isolated roots of P that are roots of the divisor q of P."""
    if q.degree() <= 0:
        return []
    out = []
    exact_idx = [k for k, r in enumerate(roots) if r.exact is not None]
    exact_hits = [k for k in exact_idx if q(roots[k].exact) == 0]
    out.extend(exact_hits)
    remaining = q.degree() - len(exact_hits)
    if remaining == 0:
        return sorted(out)
    qs = q
    for k in exact_hits:
        qs = qs.exact_div(UPoly([-roots[k].exact, ONE]))
    numeric = [k for k, r in enumerate(roots) if r.exact is None]
    for r in isolate_roots(qs, prec, squarefree=True, recognize=False):
        hits = [k for k in numeric if r.ball.overlaps(roots[k].ball)]
        if len(hits) != 1:
            raise PrecisionExhausted("cannot match a root enclosure uniquely; raise precision_bits")
        out.append(hits[0])
    if len(set(out)) != len(out):
        raise PrecisionExhausted("two root enclosures matched the same parameter")
    return sorted(out)


def _specials(w: _Working, implicit: dict[int, PlaneCurve], opts: CensusOptions, with_self: bool) -> list[_Special]:
    C = w.curve
    prec = opts.precision_bits
    sources: list[tuple[str, UPoly, int]] = []
    if with_self:
        E = self_eliminant(C)
        if E.degree() > 0:
            sources.append(("self", E, 1))
    K = cusp_polynomial(C)
    if K.degree() > 0:
        sources.append(("cusp", squarefree_part(K), 1))
    for j, F in implicit.items():
        h = compose_param(F.F, C)
        if h.is_zero():
            raise SharedComponent(f"components {w.index} and {j} share their image")
        for q, m in squarefree_decomposition(h):
            sources.append((f"cross{j}", q, m))
    if not sources:
        return []
    P = UPoly([ONE])
    for _, q, _ in sources:
        P = P * q
    P = squarefree_part(P)
    roots = isolate_roots(P, prec, squarefree=True)
    specials = [_Special(w.index, r) for r in roots]
    for kind, q, m in sources:
        for k in _member_roots(q, roots, prec):
            sp = specials[k]
            if kind == "self":
                sp.self_pair = True
            elif kind == "cusp":
                sp.cusp = True
            else:
                sp.cross_mult[int(kind[5:])] = m
    cb = CurveBalls(C.coords, prec)
    for sp in specials:
        if sp.exact:
            sp.image = ProjPoint(C.eval(sp.root.exact))
            sp.order = branch_order(C, sp.root.exact) if sp.cusp else 1
        else:
            sp.image = tuple(cb.value(sp.root.ball))
            if sp.cusp:
                sp.order = _numeric_cusp_order(C, sp.root.ball, prec)
    return specials


def _numeric_cusp_order(C: ParamCurve, t: ComplexBall, prec: int) -> int:
    # f' ~ f holds exactly at a root of the cusp polynomial; order 2 iff f'' leaves the point
    cb = CurveBalls(C.coords, prec)
    P = cb.value(t)
    D2 = CurveBalls(C.derivative().derivative().coords, prec).value(t)
    if any(not m.contains_zero() for m in cross(P, D2)):
        return 2
    raise PrecisionExhausted("cusp of order > 2 at a non-exact parameter is not supported")


# ---------------------------------------------------------------------------
# grouping by image


def _separated(m: ComplexBall, factor: int) -> bool:
    return m.abs_lower() > factor * m.radius


def _same_image(a: _Special, b: _Special, curves: dict[int, ParamCurve], balls: dict[int, CurveBalls], opts: CensusOptions):
    """True/False for same/different image point; raises when undecidable."""
    prec = opts.precision_bits
    if a.exact and b.exact:
        return a.image == b.image, "exact"
    A = a.image.balls(prec) if isinstance(a.image, ProjPoint) else a.image
    B = b.image.balls(prec) if isinstance(b.image, ProjPoint) else b.image
    minors = cross(A, B)
    if any(_separated(m, opts.cluster_separation_factor) for m in minors):
        return False, None
    if any(not m.contains_zero() for m in minors):
        raise PrecisionExhausted("image points are neither separated nor provably equal; raise precision_bits")
    sol = krawczyk_pair(balls[a.comp], balls[b.comp], a.root.ball.center, b.root.ball.center, opts.max_newton_steps)
    if sol is None:
        raise PrecisionExhausted("could not certify a coincidence of image points; raise precision_bits")
    S, T = sol
    if not (_inside(S, a.root) and _inside(T, b.root)):
        raise PrecisionExhausted("certified solution does not match the isolated parameters")
    return True, "krawczyk"


def _inside(box: ComplexBall, r: Root) -> bool:
    if r.exact is not None:
        return box.contains(r.exact)
    return box.overlaps(r.ball)


def _group(specials: list[_Special], curves, balls, opts: CensusOptions):
    n = len(specials)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def test(pair):
        i, j = pair
        return _same_image(specials[i], specials[j], curves, balls, opts)

    if opts.threads > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as ex:
            results = list(ex.map(test, pairs))
    else:
        results = [test(p) for p in pairs]
    same = {}
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (i, j), (eq, how) in zip(pairs, results):
        same[(i, j)] = (eq, how)
        if eq:
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    for g in groups.values():
        for a in g:
            for b in g:
                if a < b and not same[(a, b)][0]:
                    raise PrecisionExhausted("inconsistent clustering of image points")
    return list(groups.values()), same


def _tangents_distinct(a: _Special, b: _Special, curves, how: str) -> bool:
    if a.order > 1 or b.order > 1:
        return False
    if how == "krawczyk":
        return True  # a regular solution of the pair system means transversal branches
    La = tangent_line(curves[a.comp], a.root.exact)
    Lb = tangent_line(curves[b.comp], b.root.exact)
    return any(cross(La, Lb))


def _point_key(p: ProjPoint):
    vals = [complex(c) for c in p.coords]
    k = max(range(3), key=lambda i: abs(vals[i]))
    v = [c / vals[k] for c in vals]
    return tuple((round(c.real, 9), round(c.imag, 9)) for c in v)


def _census(components: Sequence[ParamCurve], opts: CensusOptions, kind: str) -> SingularCensus:
    comps = list(components)
    implicit = {i: implicitize(C) for i, C in enumerate(comps)} if len(comps) > 1 else {}
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            if implicit[i].degree == implicit[j].degree and proportional(implicit[i].F, implicit[j].F) is not None:
                raise SharedComponent(f"components {i} and {j} share their image")
    work = []
    for i, C in enumerate(comps):
        others = [implicit[j] for j in implicit if j != i]
        work.append(_prepare(C, i, others))
    with_self = kind != "pair"
    specials: list[_Special] = []
    for w in work:
        others = {j: implicit[j] for j in implicit if j != w.index}
        specials.extend(_specials(w, others, opts, with_self))
    curves = {w.index: w.curve for w in work}
    balls = {w.index: CurveBalls(w.curve.coords, opts.precision_bits) for w in work}
    groups, same = _group(specials, curves, balls, opts)
    entries = []
    for g in groups:
        members = [specials[k] for k in g]
        comp_set = {m.comp for m in members}
        mult = sum(m.order for m in members)
        if kind == "pair" and len(comp_set) < 2:
            continue
        if kind != "pair" and mult < 2:
            continue
        ordinary = True
        for x in range(len(g)):
            for y in range(x + 1, len(g)):
                a, b = sorted((g[x], g[y]))
                if not _tangents_distinct(specials[a], specials[b], curves, same[(a, b)][1]):
                    ordinary = False
        if any(m.order > 1 for m in members):
            ordinary = False
        exact_members = [m for m in members if m.exact]
        if exact_members:
            point = exact_members[0].image
        else:
            point = ProjPoint(members[0].image, exact=False)
        params = []
        for m in sorted(members, key=lambda m: (m.comp, _param_key(m))):
            w = work[m.comp]
            params.append(BranchParam(m.comp, w.report(m.root.value), m.order))
        cert = "exact" if all(m.exact for m in members) else "certified-numeric"
        inter = {}
        for i in sorted(comp_set):
            for j in sorted(comp_set):
                if i < j:
                    inter[(i, j)] = sum(m.cross_mult.get(j, 0) for m in members if m.comp == i)
        if kind == "pair":
            mult = inter.get((0, 1), 0)
        entries.append(CensusEntry(point, mult, ordinary, params, cert, inter))
    entries.sort(key=lambda e: (-e.multiplicity, _point_key(e.point)))
    degrees = [C.degree() for C in comps]
    census = SingularCensus(kind, degrees, entries, opts.precision_bits)
    _bezout_check(census, degrees, specials)
    return census


def _param_key(m: _Special):
    c = complex(m.root.ball)
    return (round(c.real, 12), round(c.imag, 12))


def _bezout_check(census: SingularCensus, degrees: list[int], specials: list[_Special]) -> None:
    n = len(degrees)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            total = sum(sp.cross_mult.get(j, 0) for sp in specials if sp.comp == i)
            if total != degrees[i] * degrees[j]:
                raise RuntimeError(f"Bezout count failed for components {i},{j}: {total}")
            grouped = sum(e.intersections.get((min(i, j), max(i, j)), 0) for e in census.entries) if i < j else None
            if grouped is not None and grouped != total:
                raise PrecisionExhausted("intersection parameters did not group into common points")


def census_self(C: ParamCurve, opts: CensusOptions | None = None) -> SingularCensus:
    """All singular points of one rational curve with multiplicities and ordinariness."""
    return _census([C], opts or CensusOptions(), "self")


def census_pair(C1: ParamCurve, C2: ParamCurve, opts: CensusOptions | None = None) -> SingularCensus:
    """Common points of two components; entry multiplicity is the intersection multiplicity."""
    return _census([C1, C2], opts or CensusOptions(), "pair")


def full_census(components: Sequence[ParamCurve], opts: CensusOptions | None = None) -> SingularCensus:
    """Singular points of a union; multiplicity counts branches over all components."""
    return _census(list(components), opts or CensusOptions(), "full")


# ---------------------------------------------------------------------------
# exact point checks and accounting


def multiplicity_at_point_exact(C: ParamCurve, p: ProjPoint, prec: int = 128) -> tuple[int, list]:
    """Multiplicity of ``C`` at the exact point ``p`` and its branch parameters."""
    if not p.exact:
        raise ValueError("point must be exact")
    P = tuple(UPoly([c]) for c in p.coords)
    g = UPoly([])
    for c in cross(P, C.coords):
        g = univariate_gcd(g, c)
    if g.is_zero():
        raise DegenerateImage("the curve is the point itself")
    m = g.degree()
    if m == 0:
        raise PointNotOnCurve(f"{p} is not on the curve")
    params = []
    for q, k in squarefree_decomposition(g):
        for r in isolate_roots(q, prec, squarefree=True):
            params.extend([r.value] * k)
    return m, params


def ordinary_check(branches: Sequence[tuple[ParamCurve, object]], opts: CensusOptions | None = None) -> bool:
    """True iff every branch is immersed and the tangent lines are pairwise distinct."""
    opts = opts or CensusOptions()
    prec = opts.precision_bits
    lines = []
    for C, t in branches:
        if isinstance(t, ComplexBall):
            cb = CurveBalls(C.coords, prec)
            L = cross(cb.value(t), cb.slope(t))
            if all(c.contains_zero() for c in L):
                raise PrecisionExhausted("cannot decide immersion at a numeric parameter")
            lines.append(L)
        else:
            if branch_order(C, t) != 1:
                return False
            lines.append(tangent_line(C, t))
    for a in range(len(lines)):
        for b in range(a + 1, len(lines)):
            La, Lb = lines[a], lines[b]
            if all(not isinstance(c, ComplexBall) for c in La + Lb):
                if not any(cross(La, Lb)):
                    return False
                continue
            Ba = [c if isinstance(c, ComplexBall) else embed(c, prec) for c in La]
            Bb = [c if isinstance(c, ComplexBall) else embed(c, prec) for c in Lb]
            m = cross(Ba, Bb)
            if any(_separated(c, opts.cluster_separation_factor) for c in m):
                continue
            raise PrecisionExhausted("tangent lines not separated at this precision")
    return True


def expected_delta(components: Sequence) -> int:
    """``sum (d_i-1)(d_i-2)/2 - g_i + sum_{i<j} d_i d_j`` for (degree, genus) pairs."""
    pairs = [(c, 0) if isinstance(c, int) else tuple(c) for c in components]
    total = sum((d - 1) * (d - 2) // 2 - g for d, g in pairs)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            total += pairs[i][0] * pairs[j][0]
    return total


def delta_check(census: SingularCensus, components: Sequence) -> bool:
    """Genus-formula accounting; requires a complete census of ordinary points."""
    if not census.complete or not census.all_ordinary:
        raise ValueError("delta_check needs a complete census of ordinary points")
    return census.delta_sum == expected_delta(components)


# ---------------------------------------------------------------------------
# seeded census for instantiated Hesse deformations


@dataclass
class HesseCensus:
    census: SingularCensus
    vertex_entries: list[CensusEntry]
    node_entries: dict[int, list[CensusEntry]]
    cluster_diameters: dict[int, mpmath.mpf]
    expected_delta: int

    @property
    def total_clusters(self) -> int:
        return len(self.vertex_entries) + len(self.node_entries)

    def to_json(self) -> dict:
        out = self.census.to_json()
        out["clusters"] = {
            "vertex_triple_points": len(self.vertex_entries),
            "near_triple": {str(k): {"nodes": len(v), "diameter": mpmath.nstr(self.cluster_diameters[k], 8)} for k, v in self.node_entries.items()},
            "total": self.total_clusters,
        }
        return out


def _affine(P: Sequence[ComplexBall]) -> tuple[ComplexBall, ComplexBall]:
    return (P[0] / P[2], P[1] / P[2])


def hesse_census(state, u0, opts: CensusOptions | None = None, curve: ParamCurve | None = None) -> HesseCensus:
    """Census of an instantiated deformation, seeded by the predicted branch parameters.

    The three vertex triple points are verified exactly.  Near each of the nine
    other triple points the three nodes are found from the predicted parameter
    pairs and certified by Krawczyk.  Completeness follows from the genus
    formula: 3 ordinary triple points and 27 nodes give delta 36 = 9*8/2,
    the maximum for a rational curve of degree 10.
    """
    from .hesse import VERTICES, branch_parameters, instantiate, vertex_parameters

    opts = opts or CensusOptions()
    prec = opts.precision_bits
    C = curve if curve is not None else instantiate(state, u0)
    d = C.degree()
    if not C.is_primitive() or map_degree(C) != 1:
        raise ImproperParametrization("instantiated curve is not properly parametrized")
    vparams = vertex_parameters(state, u0)
    vertex_entries = []
    for group, v in zip((1, 2, 3), VERTICES.values()):
        p = ProjPoint(tuple(v))
        m, _ = multiplicity_at_point_exact(C, p, prec)
        params = vparams[group]
        on_point = all(not any(cross(p.coords, C.eval(t))) for t in params)
        if m != 3 or not on_point or len(set(params)) != 3:
            raise RuntimeError(f"vertex {p}: multiplicity {m}, predicted parameters do not account for it")
        ordinary = ordinary_check([(C, t) for t in params], opts)
        vertex_entries.append(CensusEntry(p, 3, ordinary, [BranchParam(0, t) for t in params], "exact"))
    seeds = branch_parameters(state, u0)
    cb = CurveBalls(C.coords, prec)
    node_entries: dict[int, list[CensusEntry]] = {}
    node_images = []
    for k in range(1, 10):
        node_entries[k] = []
        for j1, j2 in ((1, 2), (1, 3), (2, 3)):
            s0 = seeds[(k, j1)].to_mpc(prec)
            t0 = seeds[(k, j2)].to_mpc(prec)
            sol = krawczyk_pair(cb, cb, s0, t0, opts.max_newton_steps)
            if sol is None:
                raise PrecisionExhausted(f"node near triple point {k} not certified; raise precision_bits")
            S, T = sol
            if S.overlaps(T):
                raise PrecisionExhausted("node parameters not separated")
            P = cb.value(S)
            entry = CensusEntry(ProjPoint(tuple(P), exact=False), 2, True, [BranchParam(0, S), BranchParam(0, T)], "certified-numeric")
            node_entries[k].append(entry)
            node_images.append((k, P))
    # all certified points pairwise distinct
    all_pts = [(0, p.balls(prec)) for p in (e.point for e in vertex_entries)] + node_images
    for a in range(len(all_pts)):
        for b in range(a + 1, len(all_pts)):
            minors = cross(all_pts[a][1], all_pts[b][1])
            if not any(_separated(m, opts.cluster_separation_factor) for m in minors):
                raise PrecisionExhausted("two certified singular points are not separated; raise precision_bits")
    # pairwise distinct parameter pairs: twelve branches through each cluster are distinct too
    diam = {}
    with mpmath.workprec(prec):
        for k, entries in node_entries.items():
            aff = [_affine(e.point.coords) for e in entries]
            best = mpmath.mpf(0)
            for a in range(3):
                for b in range(a + 1, 3):
                    dx = aff[a][0].center - aff[b][0].center
                    dy = aff[a][1].center - aff[b][1].center
                    best = max(best, mpmath.sqrt(abs(dx) ** 2 + abs(dy) ** 2))
            diam[k] = best
    expected = (d - 1) * (d - 2) // 2
    found = 3 * len(vertex_entries) + sum(len(v) for v in node_entries.values())
    entries = list(vertex_entries) + [e for k in sorted(node_entries) for e in node_entries[k]]
    census = SingularCensus("self", [d], entries, prec, complete=(found == expected))
    return HesseCensus(census, vertex_entries, node_entries, diam, expected)
