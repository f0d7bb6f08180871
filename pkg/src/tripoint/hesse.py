"""Deformation of the dual Hesse arrangement plus a line.

The nine lines ``(x^3-y^3)(y^3-z^3)(z^3-x^3) = 0`` together with a line
``L0`` are smoothed into rational curves of degree 10 through the family

    t -> (alpha(t) f_1(t) : beta(t) f_2(t) : gamma(t) f_3(t)),
    f_nu(t) = prod_i (t - t_i - (a_i + [L_i in group nu] b_i) u),

where ``(alpha : beta : gamma)`` is a linear parametrization of ``L0``.  The
linear stage finds ``a`` keeping the nine non-vertex triple points up to
``O(u^2)``; the recursion extends this order by order in ``u``.

Two placements of the ``b``-shifts are supported.  ``"fnu"`` gives the shift of
group ``nu`` to coordinate ``nu`` (x, y, z for groups 1, 2, 3), which is the
geometrically correct bubbling.  ``"printed"`` follows the alternative display
of the affine chart (group 1 on z, group 3 on x); with it most ``tau`` limits
have no solution, and it is kept only to document that difference.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .curve import ParamCurve, cross
from .exactnum import QOmega, as_qomega, format_qomega, parse_qomega
from .poly import UPoly, determinant
from .series import (
    AffineSolution,
    Inconsistent,
    LinExpr,
    TruncSeries,
    series_substitute,
    solve_affine_system,
    unknown,
)

__all__ = [
    "HesseConfig",
    "LinearReport",
    "PhiReport",
    "PerturbState",
    "LineNotAdmissible",
    "NoSolution",
    "ZeroB",
    "RecursionError_",
    "W",
    "WBAR",
    "A_HAT",
    "build_config",
    "family_curve",
    "compute_tau",
    "compute_p_prime",
    "compute_e",
    "solve_linear_stage",
    "recursion_init",
    "phi_stage",
    "phi_values",
    "recursion_step",
    "run_recursion",
    "verify_state_order",
    "instantiate",
    "split_scaling_probe",
    "check_line_admissible",
    "param_name",
    "E_COORDS",
]

ZERO = QOmega(0)
ONE = QOmega(1)
W = QOmega(0, 1)
WBAR = W.conj()

# line i: coefficient vector of its linear form
LINES: dict[int, tuple] = {
    1: (ZERO, ONE, -ONE),
    2: (ZERO, ONE, -W),
    3: (ZERO, ONE, -WBAR),
    4: (-ONE, ZERO, ONE),
    5: (-W, ZERO, ONE),
    6: (-WBAR, ZERO, ONE),
    7: (ONE, -ONE, ZERO),
    8: (ONE, -W, ZERO),
    9: (ONE, -WBAR, ZERO),
}
GROUP = {i: (i - 1) // 3 + 1 for i in range(1, 10)}

# the nine non-vertex triple points, with their three lines
TRIPLE_POINTS: dict[int, tuple[tuple, tuple]] = {
    1: ((ONE, ONE, ONE), (1, 4, 7)),
    2: ((ONE, WBAR, W), (2, 5, 8)),
    3: ((ONE, W, WBAR), (3, 6, 9)),
    4: ((WBAR, ONE, ONE), (1, 5, 9)),
    5: ((ONE, ONE, WBAR), (2, 6, 7)),
    6: ((ONE, WBAR, ONE), (3, 4, 8)),
    7: ((ONE, W, ONE), (2, 4, 9)),
    8: ((W, ONE, ONE), (1, 6, 8)),
    9: ((ONE, ONE, W), (3, 5, 7)),
}
VERTICES = {(1, 2, 3): (ONE, ZERO, ZERO), (4, 5, 6): (ZERO, ONE, ZERO), (7, 8, 9): (ZERO, ZERO, ONE)}

# coordinate (0=x, 1=y, 2=z) receiving the b-shift of each group
FORMS = {"fnu": {1: 0, 2: 1, 3: 2}, "printed": {1: 2, 2: 1, 3: 0}}

def _alpha() -> QOmega:
    return QOmega(Fraction(-5, 21), Fraction(38, 21))


A_HAT: tuple[QOmega, ...] = (
    QOmega(Fraction(-1, 3)), _alpha(), _alpha().conj(),
    QOmega(Fraction(-1, 3)), _alpha().conj(), _alpha(),
    QOmega(Fraction(37, 42)), ZERO, ZERO,
    ONE, ONE, ONE, ONE, ONE, ONE, QOmega(Fraction(-1, 2)), ONE, ONE,
)

# coordinates of the subspace E (a_4 tied to a_1, a_7 and most b's frozen)
E_COORDS = ("a1", "a2", "a3", "a5", "a6", "a8", "a9", "b2", "b3")


class LineNotAdmissible(ValueError):
    pass


class NoSolution(ArithmeticError):
    pass


class ZeroB(ValueError):
    pass


class RecursionError_(ArithmeticError):
    """A recursion invariant failed (lower orders disagree, or the matrix moved)."""


def param_name(kind: str, i: int, n: int) -> str:
    return f"{kind}_{i}_{n}"


def _dot(u, v) -> QOmega:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _on_line(p, line) -> bool:
    return not _dot(p, line)


# ---------------------------------------------------------------------------
# configuration


@dataclass
class HesseConfig:
    L0: tuple
    f0: tuple  # (alpha, beta, gamma) as UPolys in t
    t: tuple  # t_1 .. t_9
    incidence: dict  # (k, j) -> i
    lam: dict  # (k, j) -> lambda_{k,j}
    form: str = "fnu"

    @property
    def coord_of_group(self) -> dict:
        return FORMS[self.form]

    def p(self, k: int) -> tuple:
        return TRIPLE_POINTS[k][0]

    def p_affine(self, k: int) -> tuple:
        x, y, z = self.p(k)
        return (x / z, y / z)

    def w(self, k: int, j: int) -> tuple:
        """Affine direction of the line through p_k in group j."""
        if j == 1:
            return (ONE, ZERO)
        if j == 2:
            return (ZERO, ONE)
        return self.p_affine(k)

    def to_json(self) -> dict:
        return {
            "L0": [format_qomega(c) for c in self.L0],
            "t": [format_qomega(c) for c in self.t],
            "form": self.form,
        }


def build_config(L0: Sequence = (2, 2, -1), form: str = "fnu") -> HesseConfig:
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    L0 = tuple(as_qomega(c) for c in L0)
    if len(L0) != 3 or not any(L0):
        raise LineNotAdmissible("L0 must be a nonzero coefficient triple")
    for tri, v in VERTICES.items():
        if _on_line(v, L0):
            raise LineNotAdmissible(f"L0 passes through the vertex triple point {tri}")
    for k, (p, _) in TRIPLE_POINTS.items():
        if _on_line(p, L0):
            raise LineNotAdmissible(f"L0 passes through the triple point p_{k}")
    coord_lines = [(ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE)]
    for i, li in LINES.items():
        for c in coord_lines:
            q = cross(li, c)
            if any(q) and _on_line(q, L0):
                raise LineNotAdmissible(f"L0 passes through L_{i} meeting a coordinate line")
    cx, cy, cz = L0
    # t -> (t : 1 - t : -(cx t + cy (1 - t)) / cz), normalized so the default line gives (t : 1-t : 2)
    alpha = UPoly([ZERO, ONE])
    beta = UPoly([ONE, -ONE])
    gamma = UPoly([-cy / cz, -(cx - cy) / cz])
    f0 = (alpha, beta, gamma)
    ts = []
    for i in range(1, 10):
        li = LINES[i]
        lin = alpha * UPoly([li[0]]) + beta * UPoly([li[1]]) + gamma * UPoly([li[2]])
        if lin.is_zero():
            raise LineNotAdmissible(f"L0 coincides with L_{i}")
        if lin.degree() < 1:
            raise LineNotAdmissible(f"L0 meets L_{i} at the parameter t = infinity")
        ts.append(-lin[0] / lin[1])
    if len(set(ts)) != 9:
        raise LineNotAdmissible("two intersection parameters coincide")
    incidence = {}
    for k, (p, lines) in TRIPLE_POINTS.items():
        for i in lines:
            if not _on_line(p, LINES[i]):
                raise AssertionError(f"p_{k} not on L_{i}")
            incidence[(k, GROUP[i])] = i
    cfg = HesseConfig(L0=L0, f0=f0, t=tuple(ts), incidence=incidence, lam={}, form=form)
    for i in range(1, 10):
        P = tuple(c(cfg.t[i - 1]) for c in f0)
        if not _on_line(P, LINES[i]):
            raise AssertionError(f"f0(t_{i}) not on L_{i}")
    for (k, j) in incidence:
        try:
            cfg.lam[(k, j)] = _lambda(cfg, k, j)
        except NoSolution:
            cfg.lam[(k, j)] = None
    return cfg


def _lambda(cfg: HesseConfig, k: int, j: int) -> QOmega:
    """lambda with tau = a_i + lambda b_i, from the limit point condition."""
    i = cfg.incidence[(k, j)]
    c = cfg.coord_of_group[GROUP[i]]
    P0 = [f(cfg.t[i - 1]) for f in cfg.f0]
    pk = cfg.p(k)
    d = next(d for d in range(3) if d != c and pk[d] and P0[d])
    mu = pk[c] * P0[d] / (pk[d] * P0[c])
    Q = list(P0)
    Q[c] = Q[c] * mu
    if any(cross(Q, pk)) or mu == ONE or not mu:
        raise NoSolution(f"lim f(t_{i} + tau u) = p_{k} has no solution in this form")
    return (ONE - mu).inverse()


# ---------------------------------------------------------------------------
# the family


def _shift_poly(values: Sequence) -> list[LinExpr]:
    return [LinExpr.lift(v) for v in values]


def _series_of(poly: Sequence, order: int) -> TruncSeries:
    cs = list(poly)[: order + 1]
    return TruncSeries(cs, order)


def family_curve(cfg: HesseConfig, u, a: Sequence) -> ParamCurve:
    """The degree-10 parametrization at numeric ``u`` and ``a = (a_1..a_9; b_1..b_9)``."""
    u = as_qomega(u)
    a = [as_qomega(v) for v in a]
    coords = [UPoly([ONE]), UPoly([ONE]), UPoly([ONE])]
    cg = cfg.coord_of_group
    for i in range(1, 10):
        base = cfg.t[i - 1] + a[i - 1] * u
        shifted = base + a[9 + i - 1] * u
        for c in range(3):
            root = shifted if cg[GROUP[i]] == c else base
            coords[c] = coords[c] * UPoly([-root, ONE])
    x, y, z = (cfg.f0[c] * coords[c] for c in range(3))
    return ParamCurve(x, y, z, "hesse-family")


def _point_series(
    cfg: HesseConfig,
    k: int,
    j: int,
    a_poly: Mapping[str, Sequence],
    extra: Sequence,
    order: int,
) -> tuple[TruncSeries, TruncSeries]:
    """Affine chart of ``f_{u,a(u)}(t_i + u tau(a(u)) + u^2 extra(u))`` to ``O(u^(order+1))``.

    ``a_poly`` maps ``a1..a9, b1..b9`` to coefficient lists of polynomials in u.
    """
    i = cfg.incidence[(k, j)]
    lam = cfg.lam[(k, j)]
    if lam is None:
        raise NoSolution(f"tau_{{{k},{j}}} is undefined for form {cfg.form!r}")
    N = order

    def ser(name: str) -> TruncSeries:
        return _series_of(a_poly[name], N)

    ai, bi = ser(f"a{i}"), ser(f"b{i}")
    tau = ai + bi * lam
    ex = _series_of(extra, N)
    u = TruncSeries.u(N)
    delta = u * tau + u * u * ex  # t - t_i
    ti = cfg.t[i - 1]
    cg = cfg.coord_of_group
    ci = cg[GROUP[i]]
    base = [series_substitute(cfg.f0[c], ti, delta) for c in range(3)]
    own = _own_ratio(bi, ex, lam, u)

    def ratio(c: int) -> TruncSeries:
        out = base[c] * base[2].inverse()
        if ci == c and ci != 2:
            out = out * own
        elif ci == 2 and c != 2:
            out = out * own.inverse()
        for l in range(1, 10):
            if l == i:
                continue
            cl = cg[GROUP[l]]
            if cl != c and cl != 2:
                continue
            Al = delta + (ti - cfg.t[l - 1]) - u * ser(f"a{l}")
            Bl = Al - u * ser(f"b{l}")
            out = out * (Bl * Al.inverse() if cl == c else Al * Bl.inverse())
        return out

    return ratio(0), ratio(1)


def _own_ratio(bi: TruncSeries, ex: TruncSeries, lam: QOmega, u: TruncSeries) -> TruncSeries:
    """``B_i / A_i`` for the bubbled line itself.

    With ``A_i / u = lam b_i(u) + u ex(u)`` and ``B_i = A_i - u b_i(u)`` this is
    ``1 - 1/(lam + u ex / b_i)``; written this way every intermediate product
    stays affine in the unknowns.
    """
    b0 = bi[0]
    if b0.is_constant() and b0.const:
        N = bi.order
        if N == 0:
            D = TruncSeries.constant(lam, 0)
        else:
            q = ex.truncate(N - 1) * bi.truncate(N - 1).inverse()
            D = q.shift_up(1) + lam
        return 1 - D.inverse()
    if all(not c for c in ex.coeffs):
        # symbolic b with no extra shift: the ratio is the constant (lam - 1)/lam
        return TruncSeries.constant((lam - ONE) / lam, bi.order)
    from .series import NonlinearTermSurvives

    raise NonlinearTermSurvives("bubbled factor with symbolic b and a nonzero shift")


# ---------------------------------------------------------------------------
# linear stage


def _symbolic_a(n: int) -> dict[str, list]:
    out = {}
    for i in range(1, 10):
        out[f"a{i}"] = [unknown(param_name("a", i, n))]
        out[f"b{i}"] = [unknown(param_name("b", i, n))]
    return out


def compute_tau(cfg: HesseConfig, k: int, j: int, n: int = 0) -> tuple[LinExpr, QOmega]:
    i = cfg.incidence[(k, j)]
    lam = cfg.lam[(k, j)]
    if lam is None:
        raise NoSolution(f"tau_{{{k},{j}}} has no solution for form {cfg.form!r}")
    tau = unknown(param_name("a", i, n)) + unknown(param_name("b", i, n)).scale(lam)
    return tau, lam


def compute_p_prime(cfg: HesseConfig, k: int, j: int) -> tuple[LinExpr, LinExpr]:
    X, Y = _point_series(cfg, k, j, _symbolic_a(0), [], 1)
    px, py = cfg.p_affine(k)
    if X[0] != px or Y[0] != py:
        raise NoSolution(f"limit point of branch ({k},{j}) is not p_{k}")
    return X[1], Y[1]


def _e_from(cfg: HesseConfig, k: int, v: Sequence[tuple]) -> LinExpr:
    w1, w2, w3 = cfg.w(k, 1), cfg.w(k, 2), cfg.w(k, 3)
    d21 = (v[1][0] - v[0][0], v[1][1] - v[0][1])
    d31 = (v[2][0] - v[0][0], v[2][1] - v[0][1])
    rows = [
        [w1[0], -w2[0], ZERO, d21[0]],
        [w1[1], -w2[1], ZERO, d21[1]],
        [w1[0], ZERO, -w3[0], d31[0]],
        [w1[1], ZERO, -w3[1], d31[1]],
    ]
    total = LinExpr()
    for r in range(4):
        minor = [row[:3] for idx, row in enumerate(rows) if idx != r]
        m = determinant(minor)
        sign = 1 if (r + 3) % 2 == 0 else -1
        total = total + LinExpr.lift(rows[r][3]).scale(m * sign)
    return total


def compute_e(cfg: HesseConfig, k: int) -> LinExpr:
    v = [compute_p_prime(cfg, k, j) for j in (1, 2, 3)]
    return _e_from(cfg, k, v)


@dataclass
class LinearReport:
    tau: dict
    lam: dict
    p_prime: dict
    e: dict
    solution: AffineSolution
    a_hat: tuple
    a_hat_ok: bool

    @property
    def rank(self) -> int:
        return self.solution.rank

    @property
    def dimension(self) -> int:
        return 18 - self.solution.rank


def _assignment(a: Sequence, n: int) -> dict[str, QOmega]:
    vals = {}
    for i in range(1, 10):
        vals[param_name("a", i, n)] = as_qomega(a[i - 1])
        vals[param_name("b", i, n)] = as_qomega(a[9 + i - 1])
    return vals


def solve_linear_stage(cfg: HesseConfig, a_hat: Sequence | None = None) -> LinearReport:
    taus, pp, es = {}, {}, {}
    for (k, j) in sorted(cfg.incidence):
        taus[(k, j)] = compute_tau(cfg, k, j)[0]
        pp[(k, j)] = compute_p_prime(cfg, k, j)
    for k in range(1, 10):
        es[k] = _e_from(cfg, k, [pp[(k, j)] for j in (1, 2, 3)])
    names = [param_name("a", i, 0) for i in range(1, 10)] + [param_name("b", i, 0) for i in range(1, 10)]
    sol = solve_affine_system([es[k] for k in range(1, 10)], unknowns=names)
    a_hat = tuple(as_qomega(v) for v in (a_hat if a_hat is not None else A_HAT))
    vals = _assignment(a_hat, 0)
    ok = all(es[k].evaluate(vals) == 0 for k in es) and all(a_hat[9:])
    return LinearReport(tau=taus, lam=dict(cfg.lam), p_prime=pp, e=es, solution=sol, a_hat=a_hat, a_hat_ok=ok)


# ---------------------------------------------------------------------------
# recursion


@dataclass
class PerturbState:
    cfg: HesseConfig
    order: int
    a: list  # a[m] is an 18-tuple of QOmega
    S: dict  # (k, j) -> list of QOmega, one per order
    matrix: list | None = None  # homogeneous matrix of the order-n system, rows k, columns E_COORDS

    def a_poly(self, upto: int | None = None) -> dict[str, list]:
        m = self.order if upto is None else upto
        out = {}
        for i in range(1, 10):
            out[f"a{i}"] = [self.a[r][i - 1] for r in range(m + 1)]
            out[f"b{i}"] = [self.a[r][9 + i - 1] for r in range(m + 1)]
        return out

    def truncate(self, m: int) -> PerturbState:
        if m > self.order:
            raise ValueError("cannot extend a state by truncation")
        return PerturbState(
            self.cfg, m, [tuple(v) for v in self.a[: m + 1]], {key: list(v[: m + 1]) for key, v in self.S.items()}, self.matrix
        )

    def values_at(self, u0) -> tuple:
        u0 = as_qomega(u0)
        out = []
        for idx in range(18):
            acc = ZERO
            for r in range(self.order, -1, -1):
                acc = acc * u0 + self.a[r][idx]
            out.append(acc)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "L0": [format_qomega(c) for c in self.cfg.L0],
            "form": self.cfg.form,
            "a": [[format_qomega(v) for v in layer] for layer in self.a],
            "S": {f"{k},{j}": [format_qomega(v) for v in vals] for (k, j), vals in sorted(self.S.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PerturbState:
        cfg = build_config([parse_qomega(c) for c in data["L0"]], data.get("form", "fnu"))
        a = [tuple(parse_qomega(v) for v in layer) for layer in data["a"]]
        S = {}
        for key, vals in data["S"].items():
            k, j = (int(x) for x in key.split(","))
            S[(k, j)] = [parse_qomega(v) for v in vals]
        order = int(data["order"])
        if len(a) != order + 1 or any(len(v) != order + 1 for v in S.values()) or any(len(v) != 18 for v in a):
            raise ValueError("state layers do not match its order")
        return cls(cfg, order, a, S)


def _branch_coeffs(cfg, k, j, a_poly, S_prev: Sequence, n: int, s_name: str):
    """Series of branch j at order n+1 with the new S-coefficient left as unknown ``s_name``."""
    extra = list(S_prev) + [unknown(s_name)]
    X, Y = _point_series(cfg, k, j, a_poly, extra, n + 1)
    return X, Y


def _solve_k(cfg, k, a_poly, S, n: int, params: Sequence[str] | None):
    """Per triple point: the order-(n+1) matching of branches 1, 2 with branch 3.

    Returns affine forms (sA, sA*, sB, sB*) in the parameters still unknown.
    """
    ser = {}
    for j in (1, 2, 3):
        ser[j] = _branch_coeffs(cfg, k, j, a_poly, S[(k, j)][:n], n, f"s{j}")
    # lower orders must already agree
    for j in (1, 2):
        for comp in (0, 1):
            for m in range(n + 1):
                if ser[j][comp][m] != ser[3][comp][m]:
                    raise RecursionError_(f"p_{k}: branches {j} and 3 disagree at order {m}")
    eqs = []
    for j, (s3, sj) in ((1, ("sA", "sAs")), (2, ("sB", "sBs"))):
        for comp in (0, 1):
            lhs = ser[3][comp][n + 1].rename({"s3": s3})
            rhs = ser[j][comp][n + 1].rename({f"s{j}": sj})
            eqs.append(lhs - rhs)
    sol = solve_affine_system(eqs, unknowns=["sA", "sAs", "sB", "sBs"], require_unique=True)
    if sol.residual:
        raise Inconsistent(f"p_{k}: residual constraints {sol.residual}")
    return sol.values


def _e_params(n: int) -> dict[str, list]:
    """a_n restricted to E, expressed in the E coordinates at order n."""
    z = LinExpr()
    names = {c: unknown(f"{c}_{n}") for c in E_COORDS}
    vals = {
        "a1": names["a1"], "a2": names["a2"], "a3": names["a3"], "a4": names["a1"],
        "a5": names["a5"], "a6": names["a6"], "a7": z, "a8": names["a8"], "a9": names["a9"],
        "b1": z, "b2": names["b2"], "b3": names["b3"], "b4": z, "b5": z,
        "b6": z, "b7": z, "b8": z, "b9": z,
    }
    return vals


def _full_params(n: int) -> dict[str, LinExpr]:
    out = {}
    for i in range(1, 10):
        out[f"a{i}"] = unknown(param_name("a", i, n))
        out[f"b{i}"] = unknown(param_name("b", i, n))
    return out


def _extend_a(state: PerturbState, layer: Mapping[str, object]) -> dict[str, list]:
    ap = state.a_poly()
    for key in ap:
        ap[key] = list(ap[key]) + [LinExpr.lift(layer[key])]
    return ap


def _layer_tuple(layer: Mapping[str, object]) -> tuple:
    return tuple(as_qomega(layer[f"a{i}"]) for i in range(1, 10)) + tuple(
        as_qomega(layer[f"b{i}"]) for i in range(1, 10)
    )


def recursion_init(cfg: HesseConfig, a_hat: Sequence | None = None) -> PerturbState:
    a_hat = tuple(as_qomega(v) for v in (a_hat if a_hat is not None else A_HAT))
    state = PerturbState(cfg, 0, [a_hat], {key: [] for key in cfg.incidence})
    ap = state.a_poly()
    S = {}
    for k in range(1, 10):
        vals = _solve_k(cfg, k, ap, state.S, 0, None)
        sA, sB = vals["sA"].const, vals["sB"].const
        if sA != sB:
            raise Inconsistent(f"p_{k}: the four order-1 equations have no common solution")
        S[(k, 1)] = [vals["sAs"].const]
        S[(k, 2)] = [vals["sBs"].const]
        S[(k, 3)] = [sA]
    state.S = S
    return state


@dataclass
class PhiReport:
    linear: dict  # k -> LinExpr (linear part of Phi_k over the 18 order-1 unknowns)
    constant: dict  # k -> QOmega
    matrix_E: list
    det_E: QOmega
    proportional: dict  # k -> scalar c_k or None


def _phi_forms(state: PerturbState, layer: Mapping[str, LinExpr]) -> dict[int, LinExpr]:
    if state.order != 0:
        raise ValueError("Phi is defined from the order-0 state")
    ap = _extend_a(state, layer)
    out = {}
    for k in range(1, 10):
        vals = _solve_k(state.cfg, k, ap, state.S, 1, None)
        out[k] = vals["sB"] - vals["sA"]
    return out


def phi_values(state: PerturbState, a_tilde: Sequence) -> list[QOmega]:
    """Phi_k(0, a~) computed directly at a numeric a~ (18 entries)."""
    layer = {f"a{i}": as_qomega(a_tilde[i - 1]) for i in range(1, 10)}
    layer.update({f"b{i}": as_qomega(a_tilde[9 + i - 1]) for i in range(1, 10)})
    forms = _phi_forms(state, layer)
    return [forms[k].const for k in range(1, 10)]


def _matrix_on_E(forms: Mapping[int, LinExpr], n: int) -> tuple[list, list]:
    rows, consts = [], []
    for k in range(1, 10):
        f = forms[k]
        rows.append([f.coefficient(f"{c}_{n}") for c in E_COORDS])
        consts.append(f.const)
    return rows, consts


def phi_stage(state: PerturbState, report: LinearReport | None = None) -> PhiReport:
    forms = _phi_forms(state, _full_params(1))
    linear, const = {}, {}
    for k, f in forms.items():
        linear[k] = LinExpr(ZERO, f.lin)
        const[k] = f.const
    E_forms = {k: f.substitute(_e_substitution(1)) for k, f in forms.items()}
    rows, _ = _matrix_on_E(E_forms, 1)
    det = determinant(rows)
    prop = {}
    if report is not None:
        for k in range(1, 10):
            ek = report.e[k].rename({param_name(t, i, 0): param_name(t, i, 1) for t in "ab" for i in range(1, 10)})
            prop[k] = _proportional_lin(ek, linear[k])
    return PhiReport(linear=linear, constant=const, matrix_E=rows, det_E=det, proportional=prop)


def _e_substitution(n: int) -> dict[str, LinExpr]:
    ev = _e_params(n)
    return {param_name(key[0], int(key[1:]), n): v for key, v in ev.items()}


def _proportional_lin(e: LinExpr, f: LinExpr):
    if not e.lin:
        return None
    key = sorted(e.lin)[0]
    c = f.coefficient(key) / e.coefficient(key)
    if LinExpr(ZERO, f.lin) == LinExpr(ZERO, e.lin).scale(c):
        return c
    return None


def recursion_step(state: PerturbState) -> PerturbState:
    n = state.order + 1
    cfg = state.cfg
    ap = _extend_a(state, _e_params(n))
    per_k = {}
    forms = {}
    for k in range(1, 10):
        vals = _solve_k(cfg, k, ap, state.S, n, None)
        per_k[k] = vals
        forms[k] = vals["sB"] - vals["sA"]
    rows, consts = _matrix_on_E(forms, n)
    if state.matrix is not None and rows != state.matrix:
        raise RecursionError_(f"homogeneous matrix at order {n} differs from the stored one")
    sol = solve_affine_system([forms[k] for k in range(1, 10)], unknowns=[f"{c}_{n}" for c in E_COORDS], require_unique=True)
    values = {name: sol.value(name) for name in sol.values}
    layer = {key: LinExpr.lift(v).evaluate(values) if isinstance(v, LinExpr) else v for key, v in _e_params(n).items()}
    S = {key: list(v) for key, v in state.S.items()}
    for k in range(1, 10):
        vals = per_k[k]
        S[(k, 1)].append(vals["sAs"].evaluate(values))
        S[(k, 2)].append(vals["sBs"].evaluate(values))
        sA, sB = vals["sA"].evaluate(values), vals["sB"].evaluate(values)
        if sA != sB:
            raise RecursionError_(f"p_{k}: s_1 != s_2 after solving")
        S[(k, 3)].append(sA)
    a = list(state.a) + [_layer_tuple(layer)]
    return PerturbState(cfg, n, a, S, matrix=rows if state.matrix is None else state.matrix)


def run_recursion(cfg: HesseConfig, N: int, a_hat: Sequence | None = None, check: bool = False) -> PerturbState:
    if N < 0:
        raise ValueError("N must be >= 0")
    state = recursion_init(cfg, a_hat)
    for _ in range(N):
        state = recursion_step(state)
        if check:
            ok, where = verify_state_order(state)
            if not ok:
                raise RecursionError_(f"order check failed at {where}")
    return state


def verify_state_order(state: PerturbState) -> tuple[bool, tuple | None]:
    """Check that the three branches at every p_k agree through ``u^(n+1)``."""
    n = state.order
    ap = state.a_poly()
    pts = {}
    for k in range(1, 10):
        for j in (1, 2, 3):
            pts[(k, j)] = _point_series(state.cfg, k, j, ap, state.S[(k, j)], n + 1)
    # order-major scan, so the reported failure has the lowest order
    for m in range(n + 2):
        for k in range(1, 10):
            for j in (1, 2):
                for comp in (0, 1):
                    if pts[(k, j)][comp][m] != pts[(k, 3)][comp][m]:
                        return False, (k, m)
    return True, None


# ---------------------------------------------------------------------------
# instantiation and probes


def instantiate(state: PerturbState, u0) -> ParamCurve:
    u0 = as_qomega(u0)
    if not u0:
        raise ValueError("u0 must be nonzero")
    vals = state.values_at(u0)
    zero_b = [i for i in range(1, 10) if not vals[9 + i - 1]]
    if zero_b:
        raise ZeroB(f"b_{zero_b[0]} vanishes at u = {format_qomega(u0)}")
    C = family_curve(state.cfg, u0, vals)
    C.label = f"hesse-order{state.order}-u={format_qomega(u0)}"
    return C


def branch_parameters(state: PerturbState, u0) -> dict[tuple, QOmega]:
    """Predicted parameters T_{k,j}(u0) of the branches through the nine triple points."""
    u0 = as_qomega(u0)
    vals = state.values_at(u0)
    out = {}
    for (k, j), i in state.cfg.incidence.items():
        lam = state.cfg.lam[(k, j)]
        tau = vals[i - 1] + lam * vals[9 + i - 1]
        S = ZERO
        for c in reversed(state.S[(k, j)]):
            S = S * u0 + c
        out[(k, j)] = state.cfg.t[i - 1] + u0 * tau + u0 * u0 * S
    return out


def vertex_parameters(state: PerturbState, u0) -> dict[int, list[QOmega]]:
    """Exact parameters of the branches through the coordinate vertices."""
    u0 = as_qomega(u0)
    vals = state.values_at(u0)
    out = {}
    for c, group in ((0, 1), (1, 2), (2, 3)):
        out[group] = [state.cfg.t[i - 1] + vals[i - 1] * u0 for i in range(3 * group - 2, 3 * group + 1)]
    return out


def split_scaling_probe(state: PerturbState, u_list: Sequence, precision_bits: int = 256) -> dict:
    """Fit log(cluster diameter) against log(u) for the nine near-triple clusters."""
    from . import singular

    if len(u_list) < 3:
        raise ValueError("need at least three values of u")
    import mpmath

    diam = {k: [] for k in range(1, 10)}
    per_u = []
    for u0 in u_list:
        C = instantiate(state, u0)
        report = singular.hesse_census(state, u0, singular.CensusOptions(precision_bits=precision_bits), curve=C)
        per_u.append(report)
        for k, d in report.cluster_diameters.items():
            diam[k].append(d)
    slopes = {}
    with mpmath.workprec(precision_bits):
        xs = [mpmath.log(mpmath.mpf(Fraction(as_qomega(u).re).numerator) / Fraction(as_qomega(u).re).denominator) for u in u_list]
        for k in range(1, 10):
            ys = [mpmath.log(d) for d in diam[k]]
            mx = sum(xs) / len(xs)
            my = sum(ys) / len(ys)
            num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
            den = sum((x - mx) ** 2 for x in xs)
            slopes[k] = float(num / den)
    return {"slopes": slopes, "diameters": {k: [float(d) for d in v] for k, v in diam.items()}, "reports": per_u}


def _parametric_solution(report: LinearReport) -> tuple[list[str], dict[str, LinExpr]]:
    """Free unknowns of the linear stage and every unknown as an affine form in them."""
    names = [param_name("a", i, 0) for i in range(1, 10)] + [param_name("b", i, 0) for i in range(1, 10)]
    free = list(report.solution.free)
    pivots = [n for n in names if n not in free]
    sol = solve_affine_system([report.e[k] for k in range(1, 10)], unknowns=pivots)
    forms = {n: sol.values[n] for n in pivots}
    forms.update({n: unknown(n) for n in free})
    return free, forms


def check_line_admissible(L0: Sequence) -> dict:
    cfg = build_config(L0)
    report = solve_linear_stage(cfg)
    free, forms = _parametric_solution(report)
    # a solution with every b_i nonzero exists iff no b_i vanishes on the whole solution space
    forced_zero = [i for i in range(1, 10) if not forms[param_name("b", i, 0)]]
    has_nonzero_b = not forced_zero
    out = {"L0": [format_qomega(c) for c in cfg.L0], "linear_rank": report.rank, "b_all_nonzero_possible": has_nonzero_b}
    if not has_nonzero_b:
        out["phi_rank"] = None
        return out
    a_hat = _generic_solution(cfg, report)
    state = recursion_init(cfg, a_hat)
    phi = phi_stage(state)
    rows = phi.matrix_E
    out["phi_rank"] = _rank(rows)
    out["det_E"] = format_qomega(phi.det_E)
    out["a_hat"] = [format_qomega(v) for v in a_hat]
    return out


def _rank(rows: list) -> int:
    eqs = [LinExpr(ZERO, {str(c): v for c, v in enumerate(r)}) for r in rows]
    return solve_affine_system(eqs, unknowns=[str(c) for c in range(len(rows[0]))]).rank


def _generic_solution(cfg: HesseConfig, report: LinearReport) -> tuple:
    """A solution of the linear stage with all b_i nonzero, chosen deterministically."""
    free, forms = _parametric_solution(report)
    for seed in range(1, 50):
        vals = {name: QOmega(Fraction(seed + idx, 1 + (idx % 3))) for idx, name in enumerate(free)}
        a = tuple(forms[param_name("a", i, 0)].evaluate(vals) for i in range(1, 10))
        a += tuple(forms[param_name("b", i, 0)].evaluate(vals) for i in range(1, 10))
        if all(a[9:]):
            return a
    raise NoSolution("no solution with all b_i nonzero found")
