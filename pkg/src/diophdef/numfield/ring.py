"""Number rings Z[θ] presented by a monic minimal polynomial, and their elements."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import sympy

from ..errors import ReducibleOrNonMonogenic, RingMismatch, NotDivisible
from .linalg import det_bareiss, solve_rows

_T = sympy.Symbol("t")


@dataclass(frozen=True)
class NumberRing:
    """Z[θ] with θ a root of `minpoly` (coefficients c0, ..., c_{d-1}, 1)."""

    minpoly: tuple[int, ...]
    name: str = field(default="", compare=False)
    class_number_one: bool = field(default=False, compare=False)
    maximal: bool = True

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @cached_property
    def _reduction(self) -> list[list[int]]:
        # row k holds θ^(d+k) in the power basis, k = 0 .. d-2
        d = self.degree
        low = [-c for c in self.minpoly[:d]]
        rows = [low]
        for _ in range(d - 2):
            prev = rows[-1]
            top = prev[-1]
            nxt = [0] + prev[:-1]
            rows.append([n + top * l for n, l in zip(nxt, low)])
        return rows

    def mul_coords(self, a: Sequence[int], b: Sequence[int]) -> tuple:
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = conv[:d]
        red = self._reduction
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = red[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def __call__(self, value) -> "RingElement":
        return self.element(value)

    def element(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring != self:
                raise RingMismatch("element belongs to another ring")
            return value
        if isinstance(value, int):
            return RingElement(self, (value,) + (0,) * (self.degree - 1))
        coords = tuple(int(c) for c in value)
        if len(coords) != self.degree:
            raise RingMismatch(f"expected {self.degree} coordinates, got {len(coords)}")
        return RingElement(self, coords)

    def zero(self) -> "RingElement":
        return self.element(0)

    def one(self) -> "RingElement":
        return self.element(1)

    def theta(self) -> "RingElement":
        if self.degree == 1:
            return self.element((-self.minpoly[0],))
        return self.element(tuple(int(i == 1) for i in range(self.degree)))

    def basis(self) -> list["RingElement"]:
        return [self.element(tuple(int(i == j) for j in range(self.degree))) for i in range(self.degree)]

    @cached_property
    def discriminant(self) -> int:
        # determinant of the trace form on the power basis
        pw = [self.one()]
        for _ in range(2 * self.degree - 2):
            pw.append(pw[-1] * self.theta())
        tr = [p.trace() for p in pw]
        d = self.degree
        return det_bareiss([[tr[i + j] for j in range(d)] for i in range(d)])

    @cached_property
    def signature(self) -> tuple[int, int]:
        r = sympy.Poly(list(reversed(self.minpoly)), _T).count_roots()
        return r, (self.degree - r) // 2

    @property
    def is_totally_real(self) -> bool:
        return self.signature[1] == 0

    def sympy_poly(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.minpoly)), _T, domain="ZZ")

    def label(self) -> str:
        return self.name or "Z[t]/(" + str(self.sympy_poly().as_expr()) + ")"


def _is_maximal(f: sympy.Poly, disc: int) -> bool:
    """Dedekind's criterion at every prime whose square divides the discriminant."""
    for p, e in sympy.factorint(abs(disc)).items():
        if e < 2:
            continue
        fp = sympy.Poly(f.as_expr(), _T, modulus=p)
        _, facs = fp.factor_list()
        g = sympy.Poly(1, _T, modulus=p)
        for fac, _ in facs:
            g = g * fac
        h = fp.quo(g)
        gz = sympy.Poly([int(c) for c in g.all_coeffs()], _T, domain="ZZ")
        hz = sympy.Poly([int(c) for c in h.all_coeffs()], _T, domain="ZZ")
        diff = f - gz * hz
        coeffs = [int(c) for c in diff.all_coeffs()]
        if any(c % p for c in coeffs):
            raise AssertionError("lift mismatch")
        big_f = sympy.Poly([c // p for c in coeffs], _T, modulus=p)
        common = big_f.gcd(sympy.Poly(g.as_expr(), _T, modulus=p)).gcd(sympy.Poly(h.as_expr(), _T, modulus=p))
        if common.degree() > 0:
            return False
    return True


def make_field(minpoly: Sequence[int], name: str = "", class_number_one: bool = False,
               allow_nonmaximal: bool = False) -> NumberRing:
    """Validate and build Z[θ]. Rejects reducible polynomials and, unless
    allow_nonmaximal is set, presentations whose order is not maximal."""
    coeffs = tuple(int(c) for c in minpoly)
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise ReducibleOrNonMonogenic("minimal polynomial must be monic of degree >= 1")
    ring = NumberRing(coeffs, name=name, class_number_one=class_number_one, maximal=not allow_nonmaximal)
    f = ring.sympy_poly()
    if ring.degree > 1:
        _, facs = f.factor_list()
        if len(facs) != 1 or facs[0][1] != 1 or facs[0][0].degree() != ring.degree:
            raise ReducibleOrNonMonogenic(f"{f.as_expr()} is reducible")
        if not allow_nonmaximal and not _is_maximal(f, ring.discriminant):
            raise ReducibleOrNonMonogenic(f"Z[t]/({f.as_expr()}) is not the maximal order")
    return ring


def _coerce(ring: NumberRing, other) -> "RingElement | None":
    if isinstance(other, RingElement):
        if other.ring != ring:
            raise RingMismatch("operands live in different rings")
        return other
    if isinstance(other, int):
        return ring.element(other)
    return None


@dataclass(frozen=True)
class RingElement:
    ring: NumberRing
    coords: tuple[int, ...]

    def __add__(self, other):
        o = _coerce(self.ring, other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(self.ring, other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = _coerce(self.ring, other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RingElement(self.ring, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, tuple(a * other for a in self.coords))
        o = _coerce(self.ring, other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring.mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent in a ring")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coords == (other,) + (0,) * (len(self.coords) - 1)
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.minpoly, self.coords))

    def mult_matrix(self) -> list[list[int]]:
        """Rows are the coordinates of self·θ^j."""
        rows = []
        cur = self
        th = self.ring.theta()
        for _ in range(self.ring.degree):
            rows.append(list(cur.coords))
            cur = cur * th
        return rows

    def norm(self) -> int:
        return det_bareiss(self.mult_matrix())

    def trace(self) -> int:
        m = self.mult_matrix()
        return sum(m[i][i] for i in range(len(m)))

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def exact_div(self, other: "RingElement | int") -> "RingElement":
        """self / other, raising NotDivisible unless the quotient is integral."""
        o = _coerce(self.ring, other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero element")
        sol = solve_rows(o.mult_matrix(), list(self.coords))
        if sol is None or any(s.denominator != 1 for s in sol):
            raise NotDivisible("quotient is not integral")
        return RingElement(self.ring, tuple(int(s) for s in sol))

    def divides(self, other: "RingElement | int") -> bool:
        try:
            _coerce(self.ring, other).exact_div(self)
            return True
        except NotDivisible:
            return False

    def inverse(self) -> "RingElement":
        return self.ring.one().exact_div(self)

    def to_field(self) -> "FieldElement":
        return FieldElement(self.ring, tuple(Fraction(c) for c in self.coords))

    def __repr__(self):
        return f"{list(self.coords)}"


@dataclass(frozen=True)
class FieldElement:
    """Element of the fraction field, stored with rational power-basis coordinates."""

    ring: NumberRing
    coords: tuple[Fraction, ...]

    @staticmethod
    def of(ring: NumberRing, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, RingElement):
            return value.to_field()
        if isinstance(value, (int, Fraction)):
            return FieldElement(ring, (Fraction(value),) + (Fraction(0),) * (ring.degree - 1))
        return FieldElement(ring, tuple(Fraction(c) for c in value))

    def _o(self, other) -> "FieldElement":
        if isinstance(other, (RingElement, FieldElement)) and other.ring != self.ring:
            raise RingMismatch("operands live in different rings")
        return FieldElement.of(self.ring, other)

    def __add__(self, other):
        o = self._o(other)
        return FieldElement(self.ring, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._o(other)
        return FieldElement(self.ring, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return self._o(other) - self

    def __neg__(self):
        return FieldElement(self.ring, tuple(-a for a in self.coords))

    def __mul__(self, other):
        o = self._o(other)
        return FieldElement(self.ring, self.ring.mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._o(other).inverse()

    def __rtruediv__(self, other):
        return self._o(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldElement.of(self.ring, 1)
        for _ in range(e):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            other = FieldElement.of(self.ring, other)
        if isinstance(other, FieldElement):
            return self.ring == other.ring and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.minpoly, self.coords))

    def mult_matrix(self) -> list[list[Fraction]]:
        rows = []
        cur = self
        th = FieldElement.of(self.ring, self.ring.theta())
        for _ in range(self.ring.degree):
            rows.append(list(cur.coords))
            cur = cur * th
        return rows

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        one = [Fraction(int(i == 0)) for i in range(self.ring.degree)]
        sol = solve_rows(self.mult_matrix(), one)
        return FieldElement(self.ring, tuple(sol))

    def norm(self) -> Fraction:
        den = 1
        for c in self.coords:
            den = den * c.denominator // _gcd(den, c.denominator)
        num = RingElement(self.ring, tuple(int(c * den) for c in self.coords))
        return Fraction(num.norm(), den ** self.ring.degree)

    def is_integral_coords(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def to_ring(self) -> RingElement:
        if not self.is_integral_coords():
            raise NotDivisible("element has non-integral coordinates")
        return RingElement(self.ring, tuple(int(c) for c in self.coords))

    def __repr__(self):
        return "[" + ", ".join(str(c) for c in self.coords) + "]"


def _gcd(a: int, b: int) -> int:
    import math
    return math.gcd(a, b)


def evaluate_at(coords: Iterable, image):
    """Σ c_i image^i, with image any element supporting + and *."""
    coords = list(coords)
    acc = None
    for c in reversed(coords):
        acc = image * 0 + c if acc is None else acc * image + c
    return acc
