"""Exact arithmetic in Q(w), w a primitive cube root of unity, and complex balls.

Elements of Q(w) are stored as ``(a + b*w) / d`` with integers a, b, d,
d > 0 and gcd(a, b, d) = 1, so equality and zero tests are plain tuple
comparisons.  ``re`` and ``wc`` expose the rational coordinates in the
basis {1, w}.

:class:`ComplexBall` is a midpoint-radius enclosure.  Centers are mpmath
complex numbers computed at an explicit binary precision; radii are exact
dyadic :class:`~fractions.Fraction` values rounded upward, so every bound
below is rigorous.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

import mpmath

__all__ = [
    "QOmega",
    "OMEGA",
    "OMEGA_BAR",
    "ComplexBall",
    "as_qomega",
    "embed",
    "parse_qomega",
]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class QOmega:
    """An element ``re + wc*w`` of Q(w) with w^2 + w + 1 = 0."""

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re=0, wc=0):
        re = Fraction(re)
        wc = Fraction(wc)
        d = _lcm(re.denominator, wc.denominator)
        self._set(re.numerator * (d // re.denominator), wc.numerator * (d // wc.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        if a == 0 and b == 0:
            d = 1
        self._a, self._b, self._d = a, b, d
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> QOmega:
        obj = cls.__new__(cls)
        obj._set(a, b, d)
        return obj

    # -- coordinates -----------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def wc(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def denominator(self) -> int:
        return self._d

    def is_rational(self) -> bool:
        return self._b == 0

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- field operations ------------------------------------------------
    def __add__(self, other):
        o = as_qomega(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return QOmega._raw(self._a + o._a, self._b + o._b, self._d)
        return QOmega._raw(self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d)

    __radd__ = __add__

    def __neg__(self) -> QOmega:
        return QOmega._raw(-self._a, -self._b, self._d)

    def __pos__(self) -> QOmega:
        return self

    def __sub__(self, other):
        o = as_qomega(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = as_qomega(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return QOmega._raw(self._a * other, self._b * other, self._d)
        o = as_qomega(other)
        if o is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        # (a1 + b1 w)(a2 + b2 w) with w^2 = -1 - w
        bb = b1 * b2
        return QOmega._raw(a1 * a2 - bb, a1 * b2 + a2 * b1 - bb, self._d * o._d)

    __rmul__ = __mul__

    def conj(self) -> QOmega:
        # a + b*conj(w) = a + b(-1 - w)
        return QOmega._raw(self._a - self._b, -self._b, self._d)

    def norm(self) -> Fraction:
        a, b = self._a, self._b
        return Fraction(a * a - a * b + b * b, self._d * self._d)

    def inverse(self) -> QOmega:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(w)")
        # 1/x = conj(x) / norm(x)
        a, b, d = self._a, self._b, self._d
        n = a * a - a * b + b * b
        return QOmega._raw((a - b) * d, -b * d, n)

    def __truediv__(self, other):
        o = as_qomega(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = as_qomega(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> QOmega:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other) -> bool:
        o = as_qomega(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self) -> int:
        if self._hash is None:
            if self._b == 0:
                self._hash = hash(Fraction(self._a, self._d))
            else:
                self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def height(self) -> int:
        """Bit size used to rank pivots and coefficient growth."""
        return max(abs(self._a).bit_length(), abs(self._b).bit_length()) + self._d.bit_length()

    # -- conversion ------------------------------------------------------
    def __complex__(self) -> complex:
        re_ = float(self.re) - float(self.wc) / 2
        im = float(self.wc) * 3 ** 0.5 / 2
        return complex(re_, im)

    def to_mpc(self, prec: int) -> mpmath.mpc:
        with mpmath.workprec(prec):
            r = self.re - self.wc / 2
            real = mpmath.mpf(r.numerator) / r.denominator
            s = Fraction(3) * self.wc * self.wc / 4
            im = mpmath.sqrt(mpmath.mpf(s.numerator) / s.denominator)
            if self._b < 0:
                im = -im
            return mpmath.mpc(real, im)

    def __repr__(self) -> str:
        return f"QOmega({self})"

    def __str__(self) -> str:
        return format_qomega(self)


def as_qomega(x) -> QOmega | None:
    if isinstance(x, QOmega):
        return x
    if isinstance(x, int):
        return QOmega._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return QOmega._raw(x.numerator, 0, x.denominator)
    return None


ZERO = QOmega()
ONE = QOmega(1)
OMEGA = QOmega(0, 1)
OMEGA_BAR = OMEGA.conj()


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_qomega(x: QOmega) -> str:
    """Text form ``a/b+c/d*w`` with zero parts omitted."""
    re_, wc = x.re, x.wc
    if wc == 0:
        return _format_rational(re_)
    if wc == 1:
        wpart = "w"
    elif wc == -1:
        wpart = "-w"
    else:
        wpart = f"{_format_rational(wc)}*w"
    if re_ == 0:
        return wpart
    sign = "" if wpart.startswith("-") else "+"
    return f"{_format_rational(re_)}{sign}{wpart}"


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*w)?")


def parse_qomega(text: str) -> QOmega:
    """Parse the text form produced by :func:`format_qomega`."""
    s = re.sub(r"\s*([+\-*/])\s*", r"\1", text.strip())
    if any(ch.isspace() for ch in s):
        raise ValueError(f"cannot parse Q(w) literal {text!r}")
    if not s:
        raise ValueError("empty Q(w) literal")
    re_ = Fraction(0)
    wc = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse Q(w) literal {text!r}")
        sign, num, w = m.groups()
        if num is None and w is None:
            raise ValueError(f"cannot parse Q(w) literal {text!r}")
        if w is not None and w.startswith("*") and num is None:
            raise ValueError(f"cannot parse Q(w) literal {text!r}")
        if num is not None and w is not None and not w.startswith("*"):
            raise ValueError(f"missing '*' in {text!r}")
        if pos > 0 and not sign:
            raise ValueError(f"missing sign in {text!r}")
        value = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            value = -value
        if w is not None:
            wc += value
        else:
            re_ += value
        pos = m.end()
    return QOmega(re_, wc)


# ---------------------------------------------------------------------------
# complex balls


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    # man_exp drops the sign; read it from the raw tuple
    sign, man, exp, _ = x._mpf_
    if not man:
        if exp:
            raise ValueError("cannot convert inf/nan to a fraction")
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -v if sign else v


def _round_up(r: Fraction, bits: int = 60) -> Fraction:
    """Smallest dyadic >= r with a `bits`-bit numerator (radius hygiene)."""
    if r <= 0:
        return Fraction(0)
    n, d = r.numerator, r.denominator
    shift = bits - (n.bit_length() - d.bit_length())
    if shift >= 0:
        num = -((-n << shift) // d)
        return Fraction(num, 1 << shift)
    num = -((-n) // (d << -shift))
    return Fraction(num << -shift)


def _abs1_upper(z: mpmath.mpc) -> Fraction:
    return abs(_mpf_to_fraction(z.real)) + abs(_mpf_to_fraction(z.imag))


def _abs_lower(z: mpmath.mpc) -> Fraction:
    return max(abs(_mpf_to_fraction(z.real)), abs(_mpf_to_fraction(z.imag)))


class ComplexBall:
    """Closed disk ``{z : |z - center| <= radius}`` with a working precision."""

    __slots__ = ("center", "radius", "prec")

    def __init__(self, center, radius: Fraction | int = 0, prec: int = 128):
        if prec < 32:
            raise ValueError("precision_bits must be >= 32")
        radius = Fraction(radius)
        if radius < 0:
            raise ValueError("negative radius")
        if isinstance(center, mpmath.mpc):
            self.center = center
        else:
            with mpmath.workprec(max(prec, 64)):
                self.center = mpmath.mpc(center)
        self.radius = _round_up(radius)
        self.prec = prec

    @classmethod
    def exact(cls, value, prec: int) -> ComplexBall:
        q = as_qomega(value)
        if q is None:
            raise TypeError(f"cannot embed {value!r}")
        return embed(q, prec)

    def _coerce(self, other) -> ComplexBall | None:
        if isinstance(other, ComplexBall):
            return other
        q = as_qomega(other)
        if q is not None:
            return embed(q, self.prec)
        return None

    def _eps(self, prec: int) -> Fraction:
        return Fraction(1, 1 << prec)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = max(self.prec, o.prec)
        with mpmath.workprec(prec):
            c = self.center + o.center
        err = 2 * self._eps(prec) * (_abs1_upper(self.center) + _abs1_upper(o.center))
        return ComplexBall(c, self.radius + o.radius + err, prec)

    __radd__ = __add__

    def __neg__(self) -> ComplexBall:
        b = ComplexBall.__new__(ComplexBall)
        with mpmath.workprec(self.prec):
            c = -self.center
        b.center, b.radius, b.prec = c, self.radius, self.prec
        return b

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = max(self.prec, o.prec)
        with mpmath.workprec(prec):
            c = self.center * o.center
        ma, mb = _abs1_upper(self.center), _abs1_upper(o.center)
        rad = ma * o.radius + mb * self.radius + self.radius * o.radius
        err = 4 * self._eps(prec) * ma * mb
        return ComplexBall(c, rad + err, prec)

    __rmul__ = __mul__

    def inverse(self) -> ComplexBall:
        low = self.abs_lower()
        if low <= 0:
            raise ZeroDivisionError("ball contains zero")
        with mpmath.workprec(self.prec):
            c = 1 / self.center
        # |1/z - 1/c| <= r / (|c| (|c| - r))
        rad = self.radius / (_abs_lower(self.center) * low)
        err = 8 * self._eps(self.prec) * _abs1_upper(c)
        return ComplexBall(c, rad + err, self.prec)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> ComplexBall:
        result = embed(ONE, self.prec)
        for _ in range(n):
            result = result * self
        return result

    # -- predicates ------------------------------------------------------
    def abs_upper(self) -> Fraction:
        return _abs1_upper(self.center) + self.radius

    def abs_lower(self) -> Fraction:
        """A lower bound for |z| over the ball (may be <= 0)."""
        return _abs_lower(self.center) - self.radius

    def contains_zero(self) -> bool:
        return self._exact_dist2_to(0, 0) <= self.radius ** 2

    def _exact_dist2_to(self, x: Fraction, y: Fraction) -> Fraction:
        dx = _mpf_to_fraction(self.center.real) - x
        dy = _mpf_to_fraction(self.center.imag) - y
        return dx * dx + dy * dy

    def contains(self, value) -> bool:
        """True when the exact value ``value`` (in Q(w)) lies in the ball."""
        q = as_qomega(value)
        if q is None:
            raise TypeError(f"cannot test membership of {value!r}")
        x = q.re - q.wc / 2
        # imaginary part wc*sqrt(3)/2 is irrational; compare squared distances exactly
        dx = _mpf_to_fraction(self.center.real) - x
        cy = _mpf_to_fraction(self.center.imag)
        # |cy - wc*sqrt3/2| <= sqrt(R^2 - dx^2)
        slack = self.radius ** 2 - dx * dx
        if slack < 0:
            return False
        y2 = Fraction(3) * q.wc * q.wc / 4
        # need (cy - y)^2 <= slack with y = sign(wc)*sqrt(y2)
        if q.wc == 0:
            return cy * cy <= slack
        sign = 1 if q.wc > 0 else -1
        # (cy - s*sqrt(y2))^2 = cy^2 + y2 - 2 s cy sqrt(y2) <= slack
        lhs = cy * cy + y2 - slack
        k = 2 * sign * cy
        # lhs <= k*sqrt(y2)
        if k <= 0:
            return lhs <= 0 and lhs * lhs >= k * k * y2
        return lhs <= 0 or lhs * lhs <= k * k * y2

    def overlaps(self, other: ComplexBall) -> bool:
        d2 = other._exact_dist2_to(_mpf_to_fraction(self.center.real), _mpf_to_fraction(self.center.imag))
        r = self.radius + other.radius
        return d2 <= r * r

    def distance_lower(self, other: ComplexBall) -> Fraction:
        """Lower bound on |z1 - z2| for z1, z2 in the two balls (0 if they overlap)."""
        diff = self - other
        return max(diff.abs_lower(), Fraction(0))

    def __complex__(self) -> complex:
        return complex(self.center)

    def __repr__(self) -> str:
        return f"ComplexBall({mpmath.nstr(self.center, 12)} +/- {float(self.radius):.3g})"

    def to_json(self) -> dict:
        with mpmath.workprec(self.prec):
            digits = max(15, int(self.prec * 0.30103))
            return {
                "re": mpmath.nstr(self.center.real, digits),
                "im": mpmath.nstr(self.center.imag, digits),
                "radius": f"{float(self.radius):.6e}",
            }


def embed(a, precision_bits: int) -> ComplexBall:
    """Enclose the complex value of ``a`` in Q(w) in a ball at the given precision."""
    if precision_bits < 32:
        raise ValueError("precision_bits must be >= 32")
    q = as_qomega(a)
    if q is None:
        raise TypeError(f"cannot embed {a!r}")
    c = q.to_mpc(precision_bits)
    eps = Fraction(1, 1 << precision_bits)
    rad = eps * abs(q.re - q.wc / 2) + 2 * eps * abs(q.wc)
    return ComplexBall(c, rad, precision_bits)
