"""Exact polynomials.

:class:`Poly` is a sparse multivariate polynomial (exponent tuple -> coefficient)
over any commutative coefficient ring whose elements support ``+ - *`` and
compare equal to ``0`` when zero: ``int``, ``Fraction``, :class:`QOmega`,
affine forms, or other ``Poly`` objects.  :class:`UPoly` is the dense
univariate view used by gcd, resultant and series kernels.

Resultants follow the Sylvester convention with the rows of the first
argument on top: ``Res(f, g) = lc(f)^deg(g) * prod(g(r) for r in roots(f))``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exactnum import QOmega, as_qomega, format_qomega, parse_qomega

__all__ = [
    "Poly",
    "UPoly",
    "CoefficientMismatch",
    "univariate_gcd",
    "resultant",
    "resultant_poly",
    "squarefree_part",
    "squarefree_decomposition",
    "sylvester_matrix",
    "determinant",
    "interpolate",
    "compose_rational",
    "poly_root",
]


class CoefficientMismatch(TypeError):
    """Operands live over incompatible coefficient rings."""


def _is_zero(c) -> bool:
    return c == 0


# ---------------------------------------------------------------------------
# multivariate


class Poly:
    """Sparse polynomial in named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[tuple, object] | None = None, vars: Sequence[str] = ()):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match variables {self.vars}")
            if not _is_zero(c):
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def var(cls, name: str, vars: Sequence[str] | None = None) -> Poly:
        vars = tuple(vars) if vars is not None else (name,)
        e = tuple(1 if v == name else 0 for v in vars)
        return cls({e: QOmega(1)}, vars)

    @classmethod
    def const(cls, c, vars: Sequence[str] = ()) -> Poly:
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def gens(cls, *names: str) -> tuple[Poly, ...]:
        return tuple(cls.var(n, names) for n in names)

    # -- alignment -------------------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> Poly:
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for v in self.vars:
            if v not in vars:
                if all(e[self.vars.index(v)] == 0 for e in self.terms):
                    idx.append(None)
                    continue
                raise ValueError(f"variable {v} missing from {vars}")
            idx.append(vars.index(v))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for k, pos in enumerate(idx):
                if pos is not None:
                    ne[pos] = e[k]
            out[tuple(ne)] = c
        return Poly(out, vars)

    def _align(self, other: Poly) -> tuple[Poly, Poly]:
        if self.vars == other.vars:
            return self, other
        vars = list(self.vars)
        for v in other.vars:
            if v not in vars:
                vars.append(v)
        return self.with_vars(vars), other.with_vars(vars)

    def _lift(self, other) -> Poly | None:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, QOmega)):
            return Poly.const(other, self.vars)
        if hasattr(other, "__add__") and not isinstance(other, UPoly):
            return Poly.const(other, self.vars)
        return None

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        out = dict(a.terms)
        for e, c in b.terms.items():
            if e in out:
                s = out[e] + c
                if _is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(out, a.vars)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if self._lift(other) is None:
                return NotImplemented
            return Poly({e: c * other for e, c in self.terms.items()}, self.vars)
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return Poly(out, a.vars)

    def __rmul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Poly({e: other * c for e, c in self.terms.items()}, self.vars)

    def __pow__(self, n: int) -> Poly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(QOmega(1), self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> Poly:
        return Poly({e: c * v for e, v in self.terms.items()}, self.vars)

    def map_coeffs(self, fn: Callable) -> Poly:
        return Poly({e: fn(c) for e, c in self.terms.items()}, self.vars)

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            a, b = self._align(other)
            return a.terms == b.terms
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.vars), QOmega(0))

    # -- degrees ---------------------------------------------------------
    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        k = self.vars.index(var)
        return max(e[k] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogenize(self, var: str, degree: int | None = None) -> Poly:
        d = self.degree()
        if degree is None:
            degree = max(d, 0)
        if degree < d:
            raise ValueError(f"target degree {degree} below polynomial degree {d}")
        p = self if var in self.vars else self.with_vars(self.vars + (var,))
        k = p.vars.index(var)
        out = {}
        for e, c in p.terms.items():
            ne = list(e)
            ne[k] += degree - sum(e)
            out[tuple(ne)] = c
        return Poly(out, p.vars)

    def dehomogenize(self, var: str) -> Poly:
        return self.subst({var: QOmega(1)})

    # -- calculus / substitution ----------------------------------------
    def derivative(self, var: str) -> Poly:
        if var not in self.vars:
            return Poly({}, self.vars)
        k = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return Poly(out, self.vars)

    def subst(self, bindings: Mapping[str, object]) -> Poly:
        """Compose with ``bindings``; unbound variables are kept."""
        values = {}
        keep = [v for v in self.vars if v not in bindings]
        new_vars = list(keep)
        for v, b in bindings.items():
            if isinstance(b, Poly):
                for w in b.vars:
                    if w not in new_vars:
                        new_vars.append(w)
        new_vars = tuple(new_vars)

        def lift(b):
            if isinstance(b, Poly):
                return b.with_vars(new_vars)
            return Poly.const(b, new_vars)

        for v in self.vars:
            values[v] = lift(bindings[v]) if v in bindings else Poly.var(v, new_vars)
        powers: dict = {}

        def pw(v, k):
            key = (v, k)
            if key not in powers:
                powers[key] = values[v] ** k if k <= 1 else pw(v, k - 1) * values[v]
            return powers[key]

        result = Poly({}, new_vars)
        for e, c in self.terms.items():
            term = Poly.const(c, new_vars)
            for v, k in zip(self.vars, e):
                if k:
                    term = term * pw(v, k)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object] | Sequence):
        if not isinstance(values, Mapping):
            values = dict(zip(self.vars, values))
        total = None
        for e, c in self.terms.items():
            term = c
            for v, k in zip(self.vars, e):
                if k:
                    term = term * (values[v] ** k)
            total = term if total is None else total + term
        return QOmega(0) if total is None else total

    # -- univariate views ------------------------------------------------
    def to_upoly(self, var: str) -> UPoly:
        """Coefficients in ``var`` as polynomials in the remaining variables
        (or bare coefficients when ``var`` is the only variable)."""
        if self.vars == (var,) or (len(self.vars) == 1 and var in self.vars):
            d = self.degree(var)
            coeffs = [QOmega(0)] * (d + 1)
            for e, c in self.terms.items():
                coeffs[e[0]] = c
            return UPoly(coeffs)
        k = self.vars.index(var)
        rest = self.vars[:k] + self.vars[k + 1 :]
        d = self.degree(var)
        buckets: list[dict] = [dict() for _ in range(max(d, 0) + 1)]
        for e, c in self.terms.items():
            buckets[e[k]][e[:k] + e[k + 1 :]] = c
        return UPoly([Poly(b, rest) for b in buckets])

    @classmethod
    def from_upoly(cls, p: UPoly, var: str, vars: Sequence[str] | None = None) -> Poly:
        out = Poly({}, vars or (var,))
        vars = out.vars
        x = Poly.var(var, vars)
        xp = Poly.const(QOmega(1), vars)
        for c in p.coeffs:
            if isinstance(c, Poly):
                out = out + c.with_vars(vars) * xp
            else:
                out = out + xp.scale(c)
            xp = xp * x
        return out

    # -- display / serialization ---------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, object]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def leading_term(self) -> tuple[tuple, object]:
        e = max(self.terms)
        return e, self.terms[e]

    def __repr__(self) -> str:
        return f"Poly({self}, vars={self.vars})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k)
            cs = str(c)
            if not mon:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(mon)
            else:
                parts.append(f"({cs})*{mon}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        terms = sorted(self.terms.items(), key=lambda kv: kv[0])
        return {
            "vars": list(self.vars),
            "terms": [{"coef": format_qomega(as_qomega(c)), "exp": list(e)} for e, c in terms],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Poly:
        vars = tuple(data["vars"])
        terms = {}
        for t in data["terms"]:
            e = tuple(int(k) for k in t["exp"])
            terms[e] = terms.get(e, QOmega(0)) + parse_qomega(t["coef"])
        return cls(terms, vars)


# ---------------------------------------------------------------------------
# univariate (dense)


class UPoly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``t**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.coeffs = c

    @classmethod
    def from_roots(cls, roots: Iterable) -> UPoly:
        p = cls([QOmega(1)])
        for r in roots:
            p = p * cls([-r, QOmega(1)])
        return p

    @classmethod
    def monomial(cls, k: int, c=None) -> UPoly:
        return cls([QOmega(0)] * k + [QOmega(1) if c is None else c])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else QOmega(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else QOmega(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, QOmega)):
            return self.coeffs == ([] if other == 0 else [other])
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def _lift(self, other):
        if isinstance(other, UPoly):
            return other
        return UPoly([other])

    def __add__(self, other) -> UPoly:
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return UPoly(out)

    __radd__ = __add__

    def __neg__(self) -> UPoly:
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> UPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> UPoly:
        return self._lift(other) + (-self)

    def __mul__(self, other) -> UPoly:
        if not isinstance(other, UPoly):
            return UPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly([])
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                p = x * y
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        zero = a[-1] * 0
        return UPoly([zero if c is None else c for c in out])

    def __rmul__(self, other) -> UPoly:
        return UPoly([other * c for c in self.coeffs])

    def __pow__(self, n: int) -> UPoly:
        result = UPoly([QOmega(1)])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        if not self.coeffs:
            return QOmega(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> UPoly:
        return UPoly([c * k for k, c in enumerate(self.coeffs)][1:])

    def map(self, fn: Callable) -> UPoly:
        return UPoly([fn(c) for c in self.coeffs])

    def monic(self) -> UPoly:
        if not self.coeffs:
            raise ZeroDivisionError("monic of the zero polynomial")
        inv = as_qomega(self.lc()).inverse()
        return UPoly([c * inv for c in self.coeffs])

    def divmod(self, other: UPoly) -> tuple[UPoly, UPoly]:
        """Euclidean division over a field."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree()
        inv = as_qomega(other.lc()).inverse()
        q = [QOmega(0)] * max(len(r) - db, 0)
        b = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if _is_zero(c):
                continue
            f = c * inv
            q[k - db] = f
            for j in range(db + 1):
                r[k - db + j] = r[k - db + j] - f * b[j]
        return UPoly(q), UPoly(r[:db] if db > 0 else [])

    def __mod__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[1]

    def __floordiv__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[0]

    def exact_div(self, other: UPoly) -> UPoly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def compose(self, inner: UPoly) -> UPoly:
        acc = UPoly([])
        for c in reversed(self.coeffs):
            acc = acc * inner + UPoly([c])
        return acc

    def taylor_shift(self, t0) -> UPoly:
        """Coefficients of p(t0 + h) in h."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for k in range(n - 2, i - 1, -1):
                c[k] = c[k] + t0 * c[k + 1]
        return UPoly(c)

    def reverse(self, degree: int | None = None) -> UPoly:
        """``t^degree * p(1/t)``."""
        d = self.degree() if degree is None else degree
        c = list(self.coeffs) + [QOmega(0)] * (d + 1 - len(self.coeffs))
        return UPoly(list(reversed(c[: d + 1])))

    def order_at(self, t0) -> int:
        """Multiplicity of ``t0`` as a root (vanishing order)."""
        if self.is_zero():
            raise ValueError("zero polynomial vanishes to infinite order")
        shifted = self.taylor_shift(t0).coeffs
        k = 0
        while _is_zero(shifted[k]):
            k += 1
        return k

    def __repr__(self) -> str:
        return f"UPoly([{', '.join(str(c) for c in self.coeffs)}])"


# ---------------------------------------------------------------------------
# modular arithmetic helpers for the multi-modular gcd


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _inert_primes(start: int = (1 << 61)):
    """Primes p = 2 (mod 3); Z[w]/(p) is the field with p^2 elements."""
    p = start - (start % 3) + 2
    while True:
        p -= 3
        if _is_probable_prime(p):
            yield p


class _Fp2:
    """Arithmetic helpers on pairs (a, b) ~ a + b*w modulo an inert prime."""

    def __init__(self, p: int):
        self.p = p

    def mul(self, x, y):
        p = self.p
        bb = x[1] * y[1]
        return ((x[0] * y[0] - bb) % p, (x[0] * y[1] + x[1] * y[0] - bb) % p)

    def sub(self, x, y):
        p = self.p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def inv(self, x):
        p = self.p
        a, b = x
        n = (a * a - a * b + b * b) % p
        ni = pow(n, p - 2, p)
        return ((a - b) * ni % p, (-b) * ni % p)

    def is_zero(self, x) -> bool:
        return x[0] == 0 and x[1] == 0


def _gcd_mod(f: list, g: list, F: _Fp2) -> list:
    def strip(c):
        while c and F.is_zero(c[-1]):
            c.pop()
        return c

    a, b = strip(list(f)), strip(list(g))
    while b:
        inv = F.inv(b[-1])
        r = list(a)
        db = len(b) - 1
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if F.is_zero(c):
                continue
            fct = F.mul(c, inv)
            for j in range(db + 1):
                r[k - db + j] = F.sub(r[k - db + j], F.mul(fct, b[j]))
        a, b = b, strip(r[:db])
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def _rational_reconstruct(a: int, m: int) -> Fraction | None:
    a %= m
    bound = int((m // 2) ** 0.5) if m < (1 << 1000) else _isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    from math import gcd

    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _isqrt(n: int) -> int:
    from math import isqrt

    return isqrt(n)


def _to_integral_pairs(p: UPoly) -> list[tuple[int, int]]:
    from math import lcm

    qs = [as_qomega(c) for c in p.coeffs]
    den = 1
    for q in qs:
        den = lcm(den, q.denominator)
    out = []
    for q in qs:
        re_, wc = q.re * den, q.wc * den
        out.append((int(re_), int(wc)))
    return out


def _divides(d: UPoly, f: UPoly) -> bool:
    return (f % d).is_zero()


def _euclid_gcd(f: UPoly, g: UPoly) -> UPoly:
    a, b = f, g
    while not b.is_zero():
        a, b = b, (a % b)
        if not b.is_zero():
            b = b.monic()
    return a.monic()


def _modular_gcd(f: UPoly, g: UPoly) -> UPoly:
    F_int = _to_integral_pairs(f)
    G_int = _to_integral_pairs(g)
    best_deg = None
    modulus = 1
    last = None
    for p in _inert_primes():
        if (F_int[-1][0] % p == 0 and F_int[-1][1] % p == 0) or (G_int[-1][0] % p == 0 and G_int[-1][1] % p == 0):
            continue
        F = _Fp2(p)
        h = _gcd_mod([(a % p, b % p) for a, b in F_int], [(a % p, b % p) for a, b in G_int], F)
        dh = len(h) - 1
        if dh == 0:
            return UPoly([QOmega(1)])
        if best_deg is None or dh < best_deg:
            best_deg = dh
            modulus = p
            acc = [list(c) for c in h]
            last = None
            continue
        if dh > best_deg:
            continue
        # CRT each component into acc
        new_acc = []
        inv = pow(modulus, -1, p)
        for (x0, x1), (y0, y1) in zip(acc, h):
            n0 = x0 + modulus * (((y0 - x0) * inv) % p)
            n1 = x1 + modulus * (((y1 - x1) * inv) % p)
            new_acc.append([n0, n1])
        acc = new_acc
        modulus *= p
        cand = []
        ok = True
        for x0, x1 in acc:
            r0 = _rational_reconstruct(x0, modulus)
            r1 = _rational_reconstruct(x1, modulus)
            if r0 is None or r1 is None:
                ok = False
                break
            cand.append(QOmega(r0, r1))
        if not ok:
            continue
        cand_poly = UPoly(cand)
        if last is not None and cand_poly == last:
            if _divides(cand_poly, f) and _divides(cand_poly, g):
                return cand_poly
        last = cand_poly


def univariate_gcd(f: UPoly, g: UPoly) -> UPoly:
    """Monic gcd over Q or Q(w); gcd(0, 0) is 0."""
    if f.is_zero() and g.is_zero():
        return UPoly([])
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.degree() < g.degree():
        f, g = g, f
    if g.degree() == 0:
        return UPoly([QOmega(1)])
    size = max(as_qomega(c).height() for c in f.coeffs + g.coeffs)
    if g.degree() < 12 or (g.degree() < 30 and size < 64):
        return _euclid_gcd(f, g)
    return _modular_gcd(f, g)


def squarefree_part(f: UPoly) -> UPoly:
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if f.degree() == 0:
        return UPoly([QOmega(1)])
    g = univariate_gcd(f, f.derivative())
    return f.exact_div(g).monic()


def squarefree_decomposition(f: UPoly) -> list[tuple[UPoly, int]]:
    """Yun's algorithm: monic squarefree coprime ``q_k`` with ``f = lc * prod q_k^k``."""
    if f.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    if f.degree() == 0:
        return []
    df = f.derivative()
    a = univariate_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree() > 0:
        a = univariate_gcd(b, d)
        if a.degree() > 0:
            out.append((a.monic(), k))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        k += 1
    return out


# ---------------------------------------------------------------------------
# resultants


def resultant(f: UPoly, g: UPoly, deg_f: int | None = None, deg_g: int | None = None):
    """Sylvester resultant over a field, optionally with formal degrees.

    ``deg_f``/``deg_g`` default to the actual degrees; when an operand's
    leading coefficients vanish the formal-degree resultant is returned.
    """
    m = f.degree() if deg_f is None else deg_f
    n = g.degree() if deg_g is None else deg_g
    if f.degree() > m or g.degree() > n:
        raise ValueError("formal degree below actual degree")
    if m < 0 or n < 0:
        raise ValueError("resultant of the zero polynomial")
    mf, ng = f.degree(), g.degree()
    if f.is_zero() or g.is_zero():
        if (f.is_zero() and n == 0) or (g.is_zero() and m == 0):
            pass
        else:
            return QOmega(0)
    if mf < m and ng < n:
        return QOmega(0)
    if mf < m:
        # Res_{m,n}(f,g) = (-1)^{(m-mf) n} lc(g)^(m-mf) Res_{mf,n}(f,g)
        sign = -1 if ((m - mf) * n) % 2 else 1
        return _resultant_exact(f, g) * (as_qomega(g.lc()) ** (m - mf)) * sign
    if ng < n:
        return _resultant_exact(f, g) * (as_qomega(f.lc()) ** (n - ng))
    return _resultant_exact(f, g)


def _resultant_exact(f: UPoly, g: UPoly):
    m, n = f.degree(), g.degree()
    if m < 0 or n < 0:
        return QOmega(0)
    if m == 0:
        return as_qomega(f.lc()) ** n
    if n == 0:
        return as_qomega(g.lc()) ** m
    if m > n:
        sign = -1 if (m * n) % 2 else 1
        return _resultant_exact(g, f) * sign
    # m <= n: Res(f,g) = lc(f)^(n - deg r) Res(f, r), r = g mod f
    r = g % f
    if r.is_zero():
        return QOmega(0)
    return as_qomega(f.lc()) ** (n - r.degree()) * _resultant_exact(f, r)


def sylvester_matrix(f: UPoly, g: UPoly, deg_f: int | None = None, deg_g: int | None = None) -> list[list]:
    m = f.degree() if deg_f is None else deg_f
    n = g.degree() if deg_g is None else deg_g
    size = m + n
    zero = QOmega(0)
    rows = []
    fc = [f[m - k] for k in range(m + 1)]
    gc = [g[n - k] for k in range(n + 1)]
    for i in range(n):
        rows.append([zero] * i + fc + [zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([zero] * i + gc + [zero] * (size - i - n - 1))
    return rows


def determinant(matrix: Sequence[Sequence]):
    """Exact determinant by Gaussian elimination over a field."""
    a = [list(r) for r in matrix]
    n = len(a)
    det = QOmega(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not _is_zero(a[r][col]):
                piv = r
                break
        if piv is None:
            return QOmega(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = as_qomega(p).inverse()
        for r in range(col + 1, n):
            f = a[r][col]
            if _is_zero(f):
                continue
            f = f * inv
            row_c = a[col]
            row_r = a[r]
            for k in range(col, n):
                row_r[k] = row_r[k] - f * row_c[k]
    return det


def interpolate(xs: Sequence, ys: Sequence) -> UPoly:
    """Newton interpolation through the points (xs[i], ys[i])."""
    n = len(xs)
    coef = [as_qomega(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = UPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        p = p * UPoly([-as_qomega(xs[i]), QOmega(1)]) + UPoly([coef[i]])
    return p


def resultant_poly(f: Poly, g: Poly, var: str) -> Poly:
    """Eliminate ``var`` from ``f`` and ``g`` by evaluation and interpolation.

    Formal degrees in ``var`` are fixed from the inputs, so specializing the
    remaining variables commutes with taking the resultant.
    """
    f, g = f._align(g)
    rest = tuple(v for v in f.vars if v != var)
    m, n = f.degree(var), g.degree(var)
    if m < 0 or n < 0:
        raise ValueError("resultant of the zero polynomial")
    if not rest:
        return Poly.const(resultant(f.to_upoly(var), g.to_upoly(var), m, n), ())
    return _resultant_rec(f, g, var, rest, m, n).with_vars(rest)


def _resultant_rec(f: Poly, g: Poly, var: str, rest: tuple, m: int, n: int) -> Poly:
    if not rest:
        fu = f.with_vars((var,)).to_upoly(var) if f.terms else UPoly([])
        gu = g.with_vars((var,)).to_upoly(var) if g.terms else UPoly([])
        return Poly.const(resultant(fu, gu, m, n), ())
    v = rest[0]
    bound = n * max(f.degree(v), 0) + m * max(g.degree(v), 0)
    xs = list(range(bound + 1))
    vals = []
    sub_rest = rest[1:]
    for x in xs:
        fx = f.subst({v: QOmega(x)})
        gx = g.subst({v: QOmega(x)})
        vals.append(_resultant_rec(fx, gx, var, sub_rest, m, n))
    # interpolate coefficientwise in v
    if not sub_rest:
        ys = [r.constant_value() for r in vals]
        up = interpolate(xs, ys)
        return Poly.from_upoly(up, v, (v,))
    monos = set()
    for r in vals:
        monos.update(r.with_vars(sub_rest).terms)
    out = Poly({}, (v,) + sub_rest)
    for e in monos:
        ys = [r.with_vars(sub_rest).terms.get(e, QOmega(0)) for r in vals]
        up = interpolate(xs, ys)
        for k, c in enumerate(up.coeffs):
            if not _is_zero(c):
                out.terms[(k,) + e] = c
    return out


# ---------------------------------------------------------------------------
# transforms


def compose_rational(g: Poly, num: Poly, den: Poly, n: int, var: str = "y") -> Poly:
    """``g(..., var <- num/den) * den**n`` as an exact polynomial."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if n < g.degree(var):
        raise ValueError(f"n={n} is below deg_{var} g = {g.degree(var)}")
    gu = g.to_upoly(var) if len(g.vars) > 1 else None
    vars_out = list(v for v in g.vars if v != var)
    for w in num.vars + den.vars:
        if w not in vars_out:
            vars_out.append(w)
    vars_out = tuple(vars_out)
    num = num.with_vars(vars_out)
    den = den.with_vars(vars_out)
    if gu is None:
        coeffs = g.with_vars((var,)).to_upoly(var).coeffs
        coeffs = [Poly.const(c, vars_out) for c in coeffs]
    else:
        coeffs = [c.with_vars(vars_out) if isinstance(c, Poly) else Poly.const(c, vars_out) for c in gu.coeffs]
    result = Poly({}, vars_out)
    for k, c in enumerate(coeffs):
        if c.is_zero():
            continue
        result = result + c * (num ** k) * (den ** (n - k))
    return result


def poly_root(p: Poly, k: int) -> Poly | None:
    """Exact ``k``-th root of ``p / lc(p)`` (lex order), or None if none exists."""
    if k == 1:
        return p
    if p.is_zero():
        return p
    lead, lc = p.leading_term()
    if any(x % k for x in lead):
        return None
    norm = p.scale(as_qomega(lc).inverse())
    root_lead = tuple(x // k for x in lead)
    root = Poly({root_lead: QOmega(1)}, p.vars)
    kk = QOmega(k)
    deriv_lead = tuple(x * (k - 1) for x in root_lead)
    limit = len(p.terms) * 4 + 64
    last_added = root_lead
    for _ in range(limit):
        rem = norm - root ** k
        if rem.is_zero():
            return root
        e, c = rem.leading_term()
        t = tuple(a - b for a, b in zip(e, deriv_lead))
        if any(x < 0 for x in t) or not t < last_added:
            return None
        root = root + Poly({t: c / kk}, p.vars)
        last_added = t
    return None


def dense_grid(vars_: Sequence[str], degree: int) -> list[tuple]:
    """Exponent tuples of all homogeneous monomials of the given degree."""
    n = len(vars_)
    out = []
    for combo in itertools.product(range(degree + 1), repeat=n - 1):
        if sum(combo) <= degree:
            out.append(tuple(combo) + (degree - sum(combo),))
    return out
