"""Truncated power series in ``u`` with affine-linear coefficients.

Coefficients are :class:`LinExpr` values ``c + sum(k_x * x)`` over Q(w), where
each ``x`` is a named unknown.  Products of two coefficients that both carry
unknowns are never formed silently: if such a product lands inside the
truncation window :class:`NonlinearTermSurvives` is raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exactnum import QOmega, as_qomega, format_qomega, parse_qomega
from .poly import UPoly

__all__ = [
    "LinExpr",
    "TruncSeries",
    "NonlinearTermSurvives",
    "NotDivisible",
    "TruncationMismatch",
    "Inconsistent",
    "Underdetermined",
    "AffineSolution",
    "unknown",
    "series_substitute",
    "solve_affine_system",
]

_ZERO = QOmega(0)


class NonlinearTermSurvives(ArithmeticError):
    """A product of two unknown-bearing coefficients falls inside the window."""


class NotDivisible(ArithmeticError):
    """A low-order coefficient is nonzero, so the series is not divisible by u^m."""


class TruncationMismatch(ValueError):
    pass


class Inconsistent(ArithmeticError):
    pass


class Underdetermined(ArithmeticError):
    pass


class LinExpr:
    """Affine form ``const + sum(lin[x] * x)`` with Q(w) coefficients."""

    __slots__ = ("const", "lin")

    def __init__(self, const=_ZERO, lin: Mapping[str, object] | None = None):
        self.const = as_qomega(const) if not isinstance(const, QOmega) else const
        if self.const is None:
            raise TypeError(f"bad constant {const!r}")
        self.lin = {}
        if lin:
            for k, v in lin.items():
                q = as_qomega(v)
                if q:
                    self.lin[k] = q

    @staticmethod
    def lift(x) -> LinExpr:
        if isinstance(x, LinExpr):
            return x
        return LinExpr(x)

    def is_constant(self) -> bool:
        return not self.lin

    def unknowns(self) -> set[str]:
        return set(self.lin)

    def coefficient(self, name: str) -> QOmega:
        return self.lin.get(name, _ZERO)

    def __add__(self, other):
        if isinstance(other, LinExpr):
            lin = dict(self.lin)
            for k, v in other.lin.items():
                s = lin.get(k, _ZERO) + v
                if s:
                    lin[k] = s
                else:
                    lin.pop(k, None)
            out = LinExpr.__new__(LinExpr)
            out.const = self.const + other.const
            out.lin = lin
            return out
        q = as_qomega(other)
        if q is None:
            return NotImplemented
        out = LinExpr.__new__(LinExpr)
        out.const = self.const + q
        out.lin = dict(self.lin)
        return out

    __radd__ = __add__

    def __neg__(self) -> LinExpr:
        out = LinExpr.__new__(LinExpr)
        out.const = -self.const
        out.lin = {k: -v for k, v in self.lin.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, LinExpr):
            return self + (-other)
        q = as_qomega(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> LinExpr:
        q = as_qomega(c)
        if not q:
            return LinExpr()
        out = LinExpr.__new__(LinExpr)
        out.const = self.const * q
        out.lin = {k: v * q for k, v in self.lin.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, LinExpr):
            if other.is_constant():
                return self.scale(other.const)
            if self.is_constant():
                return other.scale(self.const)
            raise NonlinearTermSurvives(f"product of {self} and {other} is not affine")
        q = as_qomega(other)
        if q is None:
            return NotImplemented
        return self.scale(q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LinExpr):
            if not other.is_constant():
                raise NonlinearTermSurvives("division by an unknown-bearing form")
            other = other.const
        return self.scale(as_qomega(other).inverse())

    def __eq__(self, other) -> bool:
        if isinstance(other, LinExpr):
            return self.const == other.const and self.lin == other.lin
        q = as_qomega(other)
        if q is None:
            return NotImplemented
        return not self.lin and self.const == q

    def __hash__(self):
        return hash((self.const, frozenset(self.lin.items())))

    def __bool__(self) -> bool:
        return bool(self.const) or bool(self.lin)

    def substitute(self, values: Mapping[str, object]) -> LinExpr:
        out = LinExpr(self.const)
        for k, v in self.lin.items():
            if k in values:
                out = out + LinExpr.lift(values[k]).scale(v)
            else:
                out = out + LinExpr(_ZERO, {k: v})
        return out

    def rename(self, mapping: Mapping[str, str]) -> LinExpr:
        lin: dict = {}
        for k, v in self.lin.items():
            nk = mapping.get(k, k)
            lin[nk] = lin.get(nk, _ZERO) + v
        return LinExpr(self.const, lin)

    def evaluate(self, values: Mapping[str, object]) -> QOmega:
        total = self.const
        for k, v in self.lin.items():
            total = total + v * values[k]
        return total

    def __repr__(self) -> str:
        return f"LinExpr({self})"

    def __str__(self) -> str:
        parts = []
        if self.const or not self.lin:
            parts.append(format_qomega(self.const))
        for k in sorted(self.lin):
            parts.append(f"({format_qomega(self.lin[k])})*{k}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"const": format_qomega(self.const), "lin": {k: format_qomega(self.lin[k]) for k in sorted(self.lin)}}

    @classmethod
    def from_json(cls, data: Mapping) -> LinExpr:
        return cls(parse_qomega(data["const"]), {k: parse_qomega(v) for k, v in data.get("lin", {}).items()})


def unknown(name: str) -> LinExpr:
    return LinExpr(_ZERO, {name: QOmega(1)})


class TruncSeries:
    """``c_0 + c_1 u + ... + c_N u^N`` modulo ``u^(N+1)``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = [LinExpr.lift(c) for c in coeffs]
        if len(cs) > order + 1:
            if any(c for c in cs[order + 1 :]):
                raise TruncationMismatch("coefficients beyond the truncation order")
            cs = cs[: order + 1]
        cs += [LinExpr() for _ in range(order + 1 - len(cs))]
        self.order = order
        self.coeffs = cs

    @classmethod
    def constant(cls, c, order: int) -> TruncSeries:
        return cls([c], order)

    @classmethod
    def u(cls, order: int) -> TruncSeries:
        return cls([0, 1], order) if order >= 1 else cls([0], order)

    def __getitem__(self, k: int) -> LinExpr:
        return self.coeffs[k] if 0 <= k <= self.order else LinExpr()

    def _check(self, other: TruncSeries) -> None:
        if other.order != self.order:
            raise TruncationMismatch(f"orders {self.order} and {other.order} differ")

    def _lift(self, other) -> TruncSeries:
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        return TruncSeries([other], self.order)

    def __add__(self, other) -> TruncSeries:
        o = self._lift(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self) -> TruncSeries:
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other) -> TruncSeries:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> TruncSeries:
        return self._lift(other) + (-self)

    def __mul__(self, other) -> TruncSeries:
        if not isinstance(other, TruncSeries):
            if isinstance(other, LinExpr) and not other.is_constant():
                other = TruncSeries([other], self.order)
            else:
                c = other.const if isinstance(other, LinExpr) else other
                return TruncSeries([x.scale(c) for x in self.coeffs], self.order)
        self._check(other)
        n = self.order
        out = [LinExpr() for _ in range(n + 1)]
        a, b = self.coeffs, other.coeffs
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if not bj:
                    continue
                out[i + j] = out[i + j] + ai * bj
        return TruncSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> TruncSeries:
        c0 = self.coeffs[0]
        if not c0.is_constant() or not c0.const:
            raise ZeroDivisionError("series inverse needs a nonzero unknown-free constant term")
        inv0 = c0.const.inverse()
        out = [LinExpr(inv0)]
        for m in range(1, self.order + 1):
            acc = LinExpr()
            for r in range(1, m + 1):
                if self.coeffs[r] and out[m - r]:
                    acc = acc + self.coeffs[r] * out[m - r]
            out.append(acc.scale(-inv0))
        return TruncSeries(out, self.order)

    def __truediv__(self, other) -> TruncSeries:
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return self * as_qomega(other).inverse()

    def __rtruediv__(self, other) -> TruncSeries:
        return self._lift(other) * self.inverse()

    def div_upow(self, m: int) -> TruncSeries:
        """Divide by ``u^m``; the result has truncation order ``N - m``."""
        if m > self.order:
            raise NotDivisible(f"cannot divide an order-{self.order} series by u^{m}")
        for k in range(m):
            if self.coeffs[k]:
                raise NotDivisible(f"coefficient of u^{k} is {self.coeffs[k]}")
        return TruncSeries(self.coeffs[m:], self.order - m)

    def mul_upow(self, m: int) -> TruncSeries:
        return TruncSeries([LinExpr()] * m + self.coeffs[: self.order + 1 - m], self.order)

    def shift_up(self, m: int = 1) -> TruncSeries:
        """Multiply by ``u^m``, raising the truncation order by ``m`` (exact)."""
        return TruncSeries([LinExpr()] * m + self.coeffs, self.order + m)

    def truncate(self, order: int) -> TruncSeries:
        if order > self.order:
            raise TruncationMismatch("cannot raise the truncation order")
        return TruncSeries(self.coeffs[: order + 1], order)

    def extend(self, order: int) -> TruncSeries:
        """Same coefficients, larger window; only valid for exact (polynomial) data."""
        return TruncSeries(self.coeffs, order)

    def substitute(self, values: Mapping[str, object]) -> TruncSeries:
        return TruncSeries([c.substitute(values) for c in self.coeffs], self.order)

    def rename(self, mapping: Mapping[str, str]) -> TruncSeries:
        return TruncSeries([c.rename(mapping) for c in self.coeffs], self.order)

    def unknowns(self) -> set[str]:
        out: set[str] = set()
        for c in self.coeffs:
            out |= c.unknowns()
        return out

    def is_numeric(self) -> bool:
        return all(c.is_constant() for c in self.coeffs)

    def values(self) -> list[QOmega]:
        if not self.is_numeric():
            raise ValueError("series carries unknowns")
        return [c.const for c in self.coeffs]

    def evaluate_poly(self, u0) -> QOmega:
        total = _ZERO
        for c in reversed(self.values()):
            total = total * u0 + c
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = [f"[{c}]u^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"TruncSeries({' + '.join(terms) or '0'}; O(u^{self.order + 1}))"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> TruncSeries:
        return cls([LinExpr.from_json(c) for c in data["coeffs"]], int(data["order"]))


def series_substitute(f: UPoly, t0, shift: TruncSeries) -> TruncSeries:
    """Expand ``f(t0 + shift)`` where ``shift`` vanishes at ``u = 0``."""
    if shift[0]:
        raise ValueError("substitution shift must vanish at u = 0")
    taylor = f.taylor_shift(as_qomega(t0)).coeffs
    acc = TruncSeries([], shift.order)
    for c in reversed(taylor):
        acc = acc * shift + c
    return acc


# ---------------------------------------------------------------------------
# exact affine solver


@dataclass
class AffineSolution:
    values: dict[str, LinExpr]
    rank: int
    unique: bool
    free: list[str] = field(default_factory=list)
    residual: list[LinExpr] = field(default_factory=list)

    def value(self, name: str) -> QOmega:
        v = self.values[name]
        if not v.is_constant():
            raise ValueError(f"{name} depends on parameters {sorted(v.unknowns())}")
        return v.const


def solve_affine_system(
    equations: Sequence,
    restrict_to: Mapping[str, object] | None = None,
    unknowns: Sequence[str] | None = None,
    require_unique: bool = False,
) -> AffineSolution:
    """Solve ``eq == 0`` for every affine form in ``equations``.

    ``restrict_to`` substitutes fixed values or equalities (``{"a4": a1}``)
    before solving.  ``unknowns`` lists the variables to solve for, in pivot
    order; any other variable is kept as a symbolic parameter of the result.
    Free unknowns of an underdetermined system are set to zero.
    """
    eqs = [LinExpr.lift(e) for e in equations]
    if restrict_to:
        eqs = [e.substitute(restrict_to) for e in eqs]
    if unknowns is None:
        seen: list[str] = []
        for e in eqs:
            for k in sorted(e.lin):
                if k not in seen:
                    seen.append(k)
        unknowns = sorted(seen)
    unknowns = list(unknowns)
    targets = set(unknowns)
    rows = []
    for e in eqs:
        coeffs = {k: v for k, v in e.lin.items() if k in targets}
        rest = LinExpr(e.const, {k: v for k, v in e.lin.items() if k not in targets})
        rows.append([coeffs, rest])
    pivots: list[tuple[str, int]] = []
    used = [False] * len(rows)
    for name in unknowns:
        best = None
        for r, (coeffs, _) in enumerate(rows):
            if used[r] or name not in coeffs:
                continue
            h = coeffs[name].height()
            if best is None or h < best[0]:
                best = (h, r)
        if best is None:
            continue
        r = best[1]
        used[r] = True
        coeffs, rest = rows[r]
        inv = coeffs[name].inverse()
        coeffs = {k: v * inv for k, v in coeffs.items()}
        rest = rest.scale(inv)
        rows[r] = [coeffs, rest]
        for r2 in range(len(rows)):
            if r2 == r or name not in rows[r2][0]:
                continue
            c2, rest2 = rows[r2]
            f = c2[name]
            new = dict(c2)
            for k, v in coeffs.items():
                s = new.get(k, _ZERO) - f * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            rows[r2] = [new, rest2 - rest.scale(f)]
        pivots.append((name, r))
    residual = []
    for r, (coeffs, rest) in enumerate(rows):
        if used[r] or coeffs:
            continue
        if rest:
            if rest.is_constant():
                raise Inconsistent(f"equation reduces to {rest} = 0")
            residual.append(rest)
    pivot_names = {n for n, _ in pivots}
    free = [n for n in unknowns if n not in pivot_names]
    rank = len(pivots)
    unique = not free
    if require_unique and not unique:
        raise Underdetermined(f"free unknowns {free}")
    values: dict[str, LinExpr] = {n: LinExpr() for n in free}
    for name, r in pivots:
        coeffs, rest = rows[r]
        # name + sum(other free coeffs) + rest = 0, free unknowns set to zero
        values[name] = -rest
    return AffineSolution(values=values, rank=rank, unique=unique, free=free, residual=residual)
