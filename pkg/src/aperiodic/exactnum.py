"""Exact arithmetic for the golden field Q(phi) and the cyclotomic ring Z[zeta].

``GoldenRational`` represents a + b*phi with rational a, b, where
phi = (1+sqrt(5))/2 satisfies phi**2 = phi + 1.

``CycloPoint`` represents a plane point (complex number) as a combination
c0 + c1*zeta + c2*zeta**2 + c3*zeta**3 with GoldenRational coefficients,
where zeta = exp(i*pi/5) is a primitive 10th root of unity with minimal
polynomial zeta**4 = zeta**3 - zeta**2 + zeta - 1.

Because phi = 1 + zeta**2 - zeta**3, the golden-coefficient representation
is redundant; equality and hashing go through a canonical reduction to four
plain rationals.  Real and imaginary parts of any ring element are golden
rationals up to the fixed positive factor sin(pi/5), which gives exact sign
predicates (cross products, squared lengths) without floats.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

RationalLike = Union[int, Fraction]

# Float embedding constants, fixed once for cross-platform determinism.
_COS = (1.0, 0.8090169943749474, 0.30901699437494745, -0.30901699437494745)
_SIN = (0.0, 0.5877852522924731, 0.9510565162951535, 0.9510565162951535)
_PHI_FLOAT = 1.618033988749895

# zeta**k for k = 0..6 as rational coordinate vectors over {1, zeta, zeta^2, zeta^3}.
_ZPOW = (
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (-1, 1, -1, 1),
    (-1, 0, 0, 0),
    (0, -1, 0, 0),
)

# phi * zeta**k for k = 0..3, same coordinates (used by the canonical reduction).
_PHI_ZPOW = (
    (1, 0, 1, -1),
    (1, 0, 1, 0),
    (0, 1, 0, 1),
    (-1, 1, 0, 1),
)


class GoldenRational:
    """Exact element a + b*phi of the golden field."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0) -> None:
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    def __repr__(self) -> str:
        return f"GoldenRational({self._a}, {self._b})"

    def __str__(self) -> str:
        sign = "+" if self._b >= 0 else "-"
        return f"{self._a}{sign}{abs(self._b)}φ"

    @staticmethod
    def _coerce(x: GoldenRational | RationalLike) -> GoldenRational:
        if isinstance(x, GoldenRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GoldenRational(x, 0)
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GoldenRational(other, 0)
        if isinstance(other, GoldenRational):
            return self._a == other._a and self._b == other._b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __neg__(self) -> GoldenRational:
        return GoldenRational(-self._a, -self._b)

    def __add__(self, other: GoldenRational | RationalLike) -> GoldenRational:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GoldenRational(self._a + o._a, self._b + o._b)

    __radd__ = __add__

    def __sub__(self, other: GoldenRational | RationalLike) -> GoldenRational:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GoldenRational(self._a - o._a, self._b - o._b)

    def __rsub__(self, other: GoldenRational | RationalLike) -> GoldenRational:
        return (-self) + other

    def __mul__(self, other: GoldenRational | RationalLike) -> GoldenRational:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # (a1 + b1 phi)(a2 + b2 phi), reduced by phi^2 = phi + 1.
        return GoldenRational(
            self._a * o._a + self._b * o._b,
            self._a * o._b + self._b * o._a + self._b * o._b,
        )

    __rmul__ = __mul__

    def inverse(self) -> GoldenRational:
        """Exact inverse; the field norm a^2 + a*b - b^2 vanishes only at 0."""
        norm = self._a * self._a + self._a * self._b - self._b * self._b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero golden rational")
        return GoldenRational((self._a + self._b) / norm, -self._b / norm)

    def __truediv__(self, other: GoldenRational | RationalLike) -> GoldenRational:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: GoldenRational | RationalLike) -> GoldenRational:
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> GoldenRational:
        if n < 0:
            return self.inverse() ** (-n)
        out = GoldenRational(1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        """Exact sign of a + b*phi = ((2a+b) + b*sqrt(5)) / 2."""
        u = 2 * self._a + self._b
        v = self._b
        if v == 0:
            return (u > 0) - (u < 0)
        if u == 0:
            return 1 if v > 0 else -1
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        d = u * u - 5 * v * v
        if u > 0:  # v < 0
            return (d > 0) - (d < 0)
        return (d < 0) - (d > 0)

    def __lt__(self, other: GoldenRational | RationalLike) -> bool:
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other: GoldenRational | RationalLike) -> bool:
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other: GoldenRational | RationalLike) -> bool:
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other: GoldenRational | RationalLike) -> bool:
        return (self - self._coerce(other)).sign() >= 0

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * _PHI_FLOAT

    def to_tuple(self) -> tuple[int, int, int, int]:
        """Serialize as (a_num, a_den, b_num, b_den)."""
        return (
            self._a.numerator,
            self._a.denominator,
            self._b.numerator,
            self._b.denominator,
        )

    @classmethod
    def from_tuple(cls, t: Iterable[int]) -> GoldenRational:
        an, ad, bn, bd = t
        return cls(Fraction(an, ad), Fraction(bn, bd))


ZERO = GoldenRational(0, 0)
ONE = GoldenRational(1, 0)
PHI = GoldenRational(0, 1)
INV_PHI = GoldenRational(-1, 1)  # 1/phi = phi - 1
HALF = GoldenRational(Fraction(1, 2), 0)


def golden_mul(x: GoldenRational, y: GoldenRational) -> GoldenRational:
    return x * y


def golden_inv(x: GoldenRational) -> GoldenRational:
    return x.inverse()


def _as_golden(x) -> GoldenRational:
    if isinstance(x, GoldenRational):
        return x
    return GoldenRational(x, 0)


class CycloPoint:
    """Exact plane point c0 + c1*zeta + c2*zeta^2 + c3*zeta^3, zeta = e^{i pi/5}."""

    __slots__ = ("_c", "__dict__")

    def __init__(self, c0=0, c1=0, c2=0, c3=0) -> None:
        self._c = (_as_golden(c0), _as_golden(c1), _as_golden(c2), _as_golden(c3))

    @property
    def coeffs(self) -> tuple[GoldenRational, GoldenRational, GoldenRational, GoldenRational]:
        return self._c

    def __repr__(self) -> str:
        return f"CycloPoint({', '.join(map(str, self._c))})"

    @cached_property
    def key(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Canonical rational coordinates over {1, zeta, zeta^2, zeta^3}.

        Rewrites every phi-part through phi*zeta^k = zeta^k + zeta^{k+2} - zeta^{k+3},
        collapsing the redundancy of golden coefficients.
        """
        out = [Fraction(0)] * 4
        for k, g in enumerate(self._c):
            if g.a:
                out[k] += g.a
            if g.b:
                row = _PHI_ZPOW[k]
                for j in range(4):
                    if row[j]:
                        out[j] += g.b * row[j]
        return tuple(out)  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycloPoint):
            return self.key == other.key
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key)

    def __bool__(self) -> bool:
        return any(f != 0 for f in self.key)

    def __neg__(self) -> CycloPoint:
        return CycloPoint(*(-g for g in self._c))

    def __add__(self, other: CycloPoint) -> CycloPoint:
        if not isinstance(other, CycloPoint):
            return NotImplemented
        return CycloPoint(*(x + y for x, y in zip(self._c, other._c)))

    def __sub__(self, other: CycloPoint) -> CycloPoint:
        if not isinstance(other, CycloPoint):
            return NotImplemented
        return CycloPoint(*(x - y for x, y in zip(self._c, other._c)))

    def __mul__(self, other) -> CycloPoint:
        if isinstance(other, CycloPoint):
            acc = [ZERO, ZERO, ZERO, ZERO]
            for i, gi in enumerate(self._c):
                if not gi:
                    continue
                for j, gj in enumerate(other._c):
                    if not gj:
                        continue
                    prod = gi * gj
                    row = _ZPOW[i + j]
                    for k in range(4):
                        if row[k]:
                            acc[k] = acc[k] + prod * row[k]
            return CycloPoint(*acc)
        if isinstance(other, (int, Fraction, GoldenRational)):
            g = _as_golden(other)
            return CycloPoint(*(x * g for x in self._c))
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> CycloPoint:
        """Complex conjugate; zeta-bar = zeta^9 = -zeta^4 stays in the ring."""
        c0, c1, c2, c3 = self._c
        # conj(zeta)   = zeta^9 = 1 - zeta + zeta^2 - zeta^3
        # conj(zeta^2) = zeta^8 = -zeta^3
        # conj(zeta^3) = zeta^7 = -zeta^2
        return CycloPoint(c0 + c1, -c1, c1 - c3, -c1 - c2)

    def re(self) -> GoldenRational:
        """Exact real part (a golden rational)."""
        f = self.key
        # Re(zeta^k) = cos(36k deg): 1, phi/2, (phi-1)/2, (1-phi)/2.
        a = f[0] - Fraction(f[2], 2) + Fraction(f[3], 2)
        b = Fraction(f[1], 2) + Fraction(f[2], 2) - Fraction(f[3], 2)
        return GoldenRational(a, b)

    def im_unit(self) -> GoldenRational:
        """Exact imaginary part divided by sin(pi/5) > 0 (a golden rational)."""
        f = self.key
        # Im(zeta^k)/sin36 = 0, 1, phi, phi.
        return GoldenRational(f[1], f[2] + f[3])

    def norm2(self) -> GoldenRational:
        """Exact squared modulus |z|^2 = z * conj(z)."""
        return (self * self.conj()).re()

    def embed(self) -> tuple[float, float]:
        """Float (Re, Im) using the fixed constant table."""
        re = im = 0.0
        for k, g in enumerate(self._c):
            v = float(g)
            re += v * _COS[k]
            im += v * _SIN[k]
        return (re, im)

    def to_tuples(self) -> list[tuple[int, int, int, int]]:
        return [g.to_tuple() for g in self._c]

    @classmethod
    def from_tuples(cls, rows: Iterable[Iterable[int]]) -> CycloPoint:
        return cls(*(GoldenRational.from_tuple(r) for r in rows))

    @classmethod
    def zeta_pow(cls, k: int) -> CycloPoint:
        """Unit vector zeta^k for any integer k (zeta^10 = 1)."""
        k %= 10
        if k < 5:
            sign, k5 = 1, k
        else:
            sign, k5 = -1, k - 5
        row = _ZPOW[k5]
        return cls(*(sign * r for r in row))


ORIGIN = CycloPoint()
ZETA = CycloPoint.zeta_pow(1)
PHI_POINT = CycloPoint(PHI)  # the real number phi as a ring element


def cyclo_mul(p: CycloPoint, q: CycloPoint) -> CycloPoint:
    return p * q


def embed(p: CycloPoint) -> tuple[float, float]:
    return p.embed()


def cross_sign(u: CycloPoint, v: CycloPoint) -> int:
    """Exact sign of the 2D cross product u x v = Im(conj(u) * v)."""
    return (u.conj() * v).im_unit().sign()


def dot(u: CycloPoint, v: CycloPoint) -> GoldenRational:
    """Exact dot product Re(conj(u) * v)."""
    return (u.conj() * v).re()
