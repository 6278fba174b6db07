"""Exact arithmetic in Q(sqrt 2) and the Cayley-Dickson tower.

Level 0 is the scalar field itself, level 1 the complex numbers, 2 the
quaternions, 3 the octonions and 4 the sedenions.  Every coordinate is an
:class:`ExactScalar`, so no floating point ever enters a product.

The doubling rule used throughout is::

    (a, b)(c, d) = (ac - d b*, a* d + c b),    (a, b)* = (a*, -b)

with ``a`` the first half of the coordinates and ``b`` the second half.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Rational
from typing import Iterable, Sequence

MAX_LEVEL = 4


class FieldOverflowError(ArithmeticError):
    """A square root left the field Q(sqrt 2)."""


class UnsupportedLevelError(ValueError):
    pass


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


_SCALAR_RE = re.compile(
    r"^(-?\d+)/(\d+)(?:([+-])(\d+)/(\d+)√2)?$"
)


class ExactScalar:
    """The number ``rat + irr * sqrt(2)`` with rational ``rat`` and ``irr``.

    Stored as integers ``(p + q sqrt2) / d`` with ``d > 0`` and
    ``gcd(p, q, d) == 1``; ``rat`` and ``irr`` are exposed as fractions.
    """

    __slots__ = ("_p", "_q", "_d")

    def __init__(self, rat: int | Fraction = 0, irr: int | Fraction = 0):
        if type(rat) is int and type(irr) is int:
            self._p, self._q, self._d = rat, irr, 1
            return
        rat, irr = Fraction(rat), Fraction(irr)
        d = math.lcm(rat.denominator, irr.denominator)
        self._set(rat.numerator * (d // rat.denominator),
                  irr.numerator * (d // irr.denominator), d)

    def _set(self, p: int, q: int, d: int) -> None:
        g = math.gcd(p, q, d)
        if g != 1:
            p, q, d = p // g, q // g, d // g
        self._p, self._q, self._d = p, q, d

    @classmethod
    def _raw(cls, p: int, q: int, d: int) -> "ExactScalar":
        out = object.__new__(cls)
        if d < 0:
            p, q, d = -p, -q, -d
        out._set(p, q, d)
        return out

    @property
    def rat(self) -> Fraction:
        return Fraction(self._p, self._d)

    @property
    def irr(self) -> Fraction:
        return Fraction(self._q, self._d)

    @staticmethod
    def coerce(x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, Rational):
            return ExactScalar(x)
        raise TypeError(f"cannot represent {x!r} exactly in Q(sqrt 2)")

    @classmethod
    def sqrt2(cls) -> "ExactScalar":
        return cls(0, 1)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExactScalar):
            if not isinstance(other, Rational):
                return NotImplemented
            other = ExactScalar(other)
        d1, d2 = self._d, other._d
        if d1 == d2:
            return ExactScalar._raw(self._p + other._p, self._q + other._q, d1)
        return ExactScalar._raw(self._p * d2 + other._p * d1, self._q * d2 + other._q * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(ExactScalar)
        out._p, out._q, out._d = -self._p, -self._q, self._d
        return out

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, ExactScalar):
            if not isinstance(other, Rational):
                return NotImplemented
            other = ExactScalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            if not isinstance(other, Rational):
                return NotImplemented
            other = ExactScalar(other)
        a, b, c, e = self._p, self._q, other._p, other._q
        if not b and not e:
            return ExactScalar._raw(a * c, 0, self._d * other._d)
        return ExactScalar._raw(a * c + 2 * b * e, a * e + b * c, self._d * other._d)

    __rmul__ = __mul__

    def conjugate_field(self) -> "ExactScalar":
        """Galois conjugate ``rat - irr * sqrt(2)``."""
        return ExactScalar._raw(self._p, -self._q, self._d)

    def field_norm(self) -> Fraction:
        return Fraction(self._p * self._p - 2 * self._q * self._q, self._d * self._d)

    def inverse(self) -> "ExactScalar":
        # 1 / ((p + q r2)/d) = d (p - q r2) / (p^2 - 2 q^2)
        p, q, d = self._p, self._q, self._d
        n = p * p - 2 * q * q
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return ExactScalar._raw(d * p, -d * q, n)

    def __truediv__(self, other):
        if not isinstance(other, ExactScalar):
            if not isinstance(other, Rational):
                return NotImplemented
            other = ExactScalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ExactScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sqrt(self) -> "ExactScalar":
        """Non-negative square root, or :class:`FieldOverflowError`."""
        s = self.sign()
        if s < 0:
            raise FieldOverflowError(f"square root of negative value {self}")
        if s == 0:
            return ExactScalar()
        a, b = self.rat, self.irr
        r = _rational_sqrt(self.field_norm())
        if r is not None:
            # (x + y sqrt2)^2 = a + b sqrt2  <=>  x^2 + 2y^2 = a, 2xy = b
            for x2 in ((a + r) / 2, (a - r) / 2):
                x = _rational_sqrt(x2)
                y = _rational_sqrt((a - x2) / 2) if x is not None else None
                if y is None:
                    continue
                if x * y * 2 != b:
                    y = -y
                cand = ExactScalar(x, y)
                if cand * cand == self:
                    return cand if cand.sign() > 0 else -cand
        raise FieldOverflowError(f"sqrt({self}) is not in Q(sqrt 2)")

    # comparison -----------------------------------------------------------

    def sign(self) -> int:
        a, b = self._p, self._q
        if not b:
            return (a > 0) - (a < 0)
        sb = 1 if b > 0 else -1
        if not a:
            return sb
        sa = 1 if a > 0 else -1
        if sa == sb:
            return sa
        return sa if a * a > 2 * b * b else sb

    def __bool__(self):
        return bool(self._p) or bool(self._q)

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self._p == other._p and self._q == other._q and self._d == other._d
        if isinstance(other, Rational):
            return not self._q and self._p * other.denominator == other.numerator * self._d
        return NotImplemented

    def __hash__(self):
        if not self._q:
            return hash(Fraction(self._p, self._d))
        return hash((self._p, self._q, self._d))

    def _cmp(self, other) -> int:
        other = ExactScalar.coerce(other)
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def is_rational(self) -> bool:
        return not self._q

    def is_integer(self) -> bool:
        return not self._q and self._d == 1

    def __float__(self):
        return self._p / self._d + (self._q / self._d) * math.sqrt(2)

    def __reduce__(self):
        return (ExactScalar, (self.rat, self.irr))

    # text form ------------------------------------------------------------

    def __str__(self):
        r = self.rat
        s = f"{r.numerator}/{r.denominator}"
        if not self._q:
            return s
        i = self.irr
        op = "+" if i > 0 else "-"
        i = abs(i)
        return f"{s}{op}{i.numerator}/{i.denominator}√2"

    def __repr__(self):
        return f"ExactScalar({self})"

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        """Inverse of ``str``: accepts ``p/q`` or ``p/q±r/s√2`` and nothing else."""
        m = _SCALAR_RE.match(text)
        if not m:
            raise ValueError(f"malformed exact scalar {text!r}")
        p, q, op, r, s = m.groups()
        if int(q) == 0 or (s is not None and int(s) == 0):
            raise ValueError(f"zero denominator in {text!r}")
        rat = Fraction(int(p), int(q))
        irr = Fraction(int(r), int(s)) if r is not None else Fraction(0)
        if op == "-":
            irr = -irr
        out = cls(rat, irr)
        if str(out) != text:
            raise ValueError(f"non-canonical exact scalar {text!r} (expected {out})")
        return out


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
HALF = ExactScalar(Fraction(1, 2))
SQRT2 = ExactScalar(0, 1)
INV_SQRT2 = ExactScalar(0, Fraction(1, 2))


# --------------------------------------------------------------------------
# Cayley-Dickson products on raw coordinate tuples


def _conj_coords(x: Sequence) -> tuple:
    return (x[0],) + tuple(-c for c in x[1:])


def cd_mul_recursive(x: Sequence, y: Sequence) -> tuple:
    """Doubling-rule product on raw coordinate sequences of equal length 2^n."""
    n = len(x)
    if n == 1:
        return (x[0] * y[0],)
    h = n // 2
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    ac = cd_mul_recursive(a, c)
    dbc = cd_mul_recursive(d, _conj_coords(b))
    acd = cd_mul_recursive(_conj_coords(a), d)
    cb = cd_mul_recursive(c, b)
    return tuple(p - q for p, q in zip(ac, dbc)) + tuple(p + q for p, q in zip(acd, cb))


@lru_cache(maxsize=None)
def basis_table(level: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """``table[i][j] = (sign, k)`` with ``e_i e_j = sign * e_k``, derived from the doubling rule."""
    n = 1 << level
    rows = []
    for i in range(n):
        ei = tuple(int(k == i) for k in range(n))
        row = []
        for j in range(n):
            ej = tuple(int(k == j) for k in range(n))
            prod = cd_mul_recursive(ei, ej)
            nz = [(k, v) for k, v in enumerate(prod) if v]
            assert len(nz) == 1 and nz[0][1] in (1, -1), (i, j, prod)
            row.append((nz[0][1], nz[0][0]))
        rows.append(tuple(row))
    return tuple(rows)


class Hyper:
    """Element of the level-``level`` Cayley-Dickson algebra, coordinates in Q(sqrt 2)."""

    __slots__ = ("level", "coords")

    def __init__(self, level: int, coords: Iterable):
        if not 0 <= level <= MAX_LEVEL:
            raise UnsupportedLevelError(f"level must be in 0..{MAX_LEVEL}, got {level}")
        coords = tuple(ExactScalar.coerce(c) for c in coords)
        if len(coords) != 1 << level:
            raise ValueError(f"level {level} needs {1 << level} coordinates, got {len(coords)}")
        self.level = level
        self.coords = coords

    @classmethod
    def zero(cls, level: int) -> "Hyper":
        return cls(level, [ZERO] * (1 << level))

    @classmethod
    def real(cls, level: int, value) -> "Hyper":
        return cls(level, [value] + [ZERO] * ((1 << level) - 1))

    @property
    def dim(self) -> int:
        return 1 << self.level

    @property
    def real_part(self) -> ExactScalar:
        return self.coords[0]

    def _check(self, other: "Hyper"):
        if not isinstance(other, Hyper):
            raise TypeError(f"expected Hyper, got {type(other).__name__}")
        if other.level != self.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def __add__(self, other):
        if not isinstance(other, Hyper):
            return NotImplemented
        self._check(other)
        return Hyper(self.level, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        if not isinstance(other, Hyper):
            return NotImplemented
        self._check(other)
        return Hyper(self.level, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return Hyper(self.level, [-c for c in self.coords])

    def __mul__(self, other):
        if isinstance(other, Hyper):
            return cd_mul(self, other)
        if isinstance(other, (ExactScalar, Rational)):
            return Hyper(self.level, [c * other for c in self.coords])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (ExactScalar, Rational)):
            return Hyper(self.level, [c * other for c in self.coords])
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (ExactScalar, Rational)):
            inv = ExactScalar.coerce(other).inverse()
            return Hyper(self.level, [c * inv for c in self.coords])
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Hyper):
            return NotImplemented
        return self.level == other.level and self.coords == other.coords

    def __hash__(self):
        return hash((self.level, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"Hyper({self.level}, [{', '.join(map(str, self.coords))}])"

    def conj(self) -> "Hyper":
        return cd_conj(self)

    def norm2(self) -> ExactScalar:
        return cd_norm2(self)


def cd_mul(x: Hyper, y: Hyper) -> Hyper:
    """Cayley-Dickson product, expanded bilinearly over the basis table."""
    x._check(y)
    table = basis_table(x.level)
    out = [ZERO] * x.dim
    ys = [(j, c) for j, c in enumerate(y.coords) if c]
    for i, xi in enumerate(x.coords):
        if not xi:
            continue
        row = table[i]
        for j, yj in ys:
            s, k = row[j]
            p = xi * yj
            out[k] = out[k] + p if s > 0 else out[k] - p
    return Hyper(x.level, out)


def cd_conj(x: Hyper) -> Hyper:
    return Hyper(x.level, _conj_coords(x.coords))


def cd_norm2(x: Hyper) -> ExactScalar:
    total = ZERO
    for c in x.coords:
        if c:
            total = total + c * c
    return total


def cd_inv(x: Hyper) -> Hyper:
    if x.level > 3:
        raise UnsupportedLevelError("sedenions are not a division algebra; no inverse")
    n = cd_norm2(x)
    if not n:
        raise ZeroDivisionError("inverse of zero")
    return cd_conj(x) / n


def basis_element(level: int, i: int) -> Hyper:
    if not 0 <= level <= MAX_LEVEL:
        raise UnsupportedLevelError(f"level must be in 0..{MAX_LEVEL}, got {level}")
    n = 1 << level
    if not 0 <= i < n:
        raise IndexError(f"basis index {i} out of range for level {level}")
    return Hyper(level, [ONE if k == i else ZERO for k in range(n)])


def find_zero_divisor(level: int) -> tuple[Hyper, Hyper] | None:
    """Search ``(e_i ± e_j)(e_k ± e_l)`` for a zero product; ``None`` if there is none.

    Candidates are screened with the signed basis table and the hit is
    re-checked with the full product before it is returned.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise UnsupportedLevelError(f"level must be in 0..{MAX_LEVEL}, got {level}")
    n = 1 << level
    table = basis_table(level)
    cands = [(i, j, s) for i, j in combinations(range(n), 2) for s in (1, -1)]
    for i, j, s in cands:
        for k, l, r in cands:
            acc: dict[int, int] = {}
            for (c1, p), (c2, q) in (((1, i), (1, k)), ((1, i), (r, l)),
                                     ((s, j), (1, k)), ((s, j), (r, l))):
                sign, idx = table[p][q]
                acc[idx] = acc.get(idx, 0) + c1 * c2 * sign
            if any(acc.values()):
                continue
            x = basis_element(level, i) + basis_element(level, j) * s
            y = basis_element(level, k) + basis_element(level, l) * r
            assert not cd_mul(x, y)
            return x, y
    return None
