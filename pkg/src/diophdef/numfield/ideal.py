"""Integral ideals as integer lattices in row Hermite normal form."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from ..errors import RingMismatch, ZeroIdeal, NoSuchB
from .linalg import echelon, hnf_square
from .ring import NumberRing, RingElement


@dataclass(frozen=True)
class IntegralIdeal:
    """Rows of `hnf` span the ideal; lower triangular with positive diagonal,
    entries below each pivot reduced into [0, pivot). The zero ideal has the
    zero matrix."""

    ring: NumberRing
    hnf: tuple[tuple[int, ...], ...]

    @property
    def is_zero(self) -> bool:
        return not any(any(r) for r in self.hnf)

    def norm(self) -> int:
        if self.is_zero:
            return 0
        return math.prod(self.hnf[i][i] for i in range(self.ring.degree))

    @property
    def is_unit(self) -> bool:
        return self.norm() == 1

    def min_integer(self) -> int:
        """Positive generator of I ∩ Z."""
        if self.is_zero:
            return 0
        return self.hnf[0][0]

    def reduce(self, x: RingElement) -> RingElement:
        if self.is_zero:
            raise ZeroIdeal("reduction modulo the zero ideal")
        _same(self.ring, x.ring)
        v = list(x.coords)
        for i in range(self.ring.degree - 1, -1, -1):
            q = v[i] // self.hnf[i][i]
            if q:
                row = self.hnf[i]
                for j in range(i + 1):
                    v[j] -= q * row[j]
        return RingElement(self.ring, tuple(v))

    def contains(self, x) -> bool:
        if isinstance(x, int):
            x = self.ring.element(x)
        _same(self.ring, x.ring)
        if self.is_zero:
            return x.is_zero()
        return self.reduce(x).is_zero()

    def basis(self) -> list[RingElement]:
        return [RingElement(self.ring, r) for r in self.hnf]

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def subset(self, other: "IntegralIdeal") -> bool:
        _same(self.ring, other.ring)
        return all(other.contains(b) for b in self.basis())

    def __le__(self, other: "IntegralIdeal") -> bool:
        return self.subset(other)

    def __mul__(self, other):
        if isinstance(other, (int, RingElement)):
            other = principal(self.ring, other)
        return product(self, other)

    __rmul__ = __mul__

    def __add__(self, other: "IntegralIdeal") -> "IntegralIdeal":
        _same(self.ring, other.ring)
        return _from_rows(self.ring, [list(r) for r in self.hnf + other.hnf])

    def __pow__(self, e: int) -> "IntegralIdeal":
        out = unit_ideal(self.ring)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def congruent(self, x: RingElement, y: RingElement) -> bool:
        return self.contains(x - y)

    def inverse_mod(self, x: RingElement) -> RingElement:
        """y with x·y ≡ 1 mod I; NoSuchB when x is not invertible modulo I."""
        if self.is_zero:
            raise ZeroIdeal("inverse modulo the zero ideal")
        d = self.ring.degree
        rows = x.mult_matrix() + [list(r) for r in self.hnf]
        a, pivots, _, u = echelon(rows, d, transform=True)
        if len(pivots) < d or any(a[pivots[i]][i] != 1 for i in range(d)):
            raise NoSuchB("element is not invertible modulo the ideal")
        # the pivot row at column 0 is (1, 0, ..., 0) after reduction
        p = pivots[0]
        coeffs = u[p][:d]
        y = RingElement(self.ring, tuple(coeffs))
        if not self.contains(x * y - 1):
            raise AssertionError("inverse computation failed")
        return self.reduce(y)

    def __repr__(self):
        return f"Ideal(hnf={[list(r) for r in self.hnf]})"


def _same(a: NumberRing, b: NumberRing):
    if a != b:
        raise RingMismatch("ideal and element live in different rings")


def _from_rows(ring: NumberRing, rows: list[list[int]]) -> IntegralIdeal:
    d = ring.degree
    rows = [r for r in rows if any(r)]
    if not rows:
        return IntegralIdeal(ring, tuple((0,) * d for _ in range(d)))
    h = hnf_square(rows, d)
    if h is None:
        raise ValueError("generated lattice is not of full rank")
    return IntegralIdeal(ring, h)


def from_generators(ring: NumberRing, gens: Iterable) -> IntegralIdeal:
    """Ideal generated by gens: the lattice spanned by g·θ^j."""
    rows = []
    for g in gens:
        g = ring.element(g)
        rows.extend(g.mult_matrix())
    return _from_rows(ring, rows)


def principal(ring: NumberRing, x) -> IntegralIdeal:
    return from_generators(ring, [x])


def unit_ideal(ring: NumberRing) -> IntegralIdeal:
    return from_generators(ring, [1])


def zero_ideal(ring: NumberRing) -> IntegralIdeal:
    return from_generators(ring, [])


def product(a: IntegralIdeal, b: IntegralIdeal) -> IntegralIdeal:
    _same(a.ring, b.ring)
    if a.is_zero or b.is_zero:
        return zero_ideal(a.ring)
    gens = [x * y for x in a.basis() for y in b.basis()]
    return from_generators(a.ring, gens)


def contains(ideal: IntegralIdeal, x) -> bool:
    return ideal.contains(x)


def subset(a: IntegralIdeal, b: IntegralIdeal) -> bool:
    return a.subset(b)


def ideal_norm(ideal: IntegralIdeal) -> int:
    return ideal.norm()


def quotient_reduce(x: RingElement, ideal: IntegralIdeal) -> RingElement:
    return ideal.reduce(x)


def quotient_size(ideal: IntegralIdeal) -> int:
    if ideal.is_zero:
        raise ZeroIdeal("quotient by the zero ideal is infinite")
    return ideal.norm()


def congruent(x: RingElement, y: RingElement, ideal: IntegralIdeal) -> bool:
    if ideal.is_zero:
        raise ZeroIdeal("congruence modulo the zero ideal")
    return ideal.contains(x - y)


def extend(ideal: IntegralIdeal, inclusion) -> IntegralIdeal:
    """I·O_sup for an ideal I of the subring."""
    return from_generators(inclusion.sup, [inclusion(b) for b in ideal.basis()] if not ideal.is_zero else [])


def contract(ideal: IntegralIdeal, inclusion) -> IntegralIdeal:
    """I ∩ O_sub for an ideal I of the big ring."""
    from .linalg import left_kernel
    d_sub = inclusion.sub.degree
    d = inclusion.sup.degree
    if ideal.is_zero:
        return zero_ideal(inclusion.sub)
    lat = inclusion.lattice()
    rows = lat + [list(r) for r in ideal.hnf]
    ker = left_kernel(rows, d)
    # coefficients on the sub basis of vectors lying in both lattices
    gens = [inclusion.sub.element(tuple(k[:d_sub])) for k in ker]
    return from_generators(inclusion.sub, gens)
