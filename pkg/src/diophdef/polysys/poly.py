"""Sparse multivariate polynomials with coefficients in a NumberRing."""
from __future__ import annotations

from typing import Mapping, Sequence

from ..errors import RingMismatch
from ..numfield import NumberRing, RingElement


def _key(exps: tuple[int, ...]):
    # descending graded-lex
    return (-sum(exps), tuple(-e for e in exps))


def _pad(e: tuple[int, ...], n: int) -> tuple[int, ...]:
    return e + (0,) * (n - len(e))


class Poly:
    """Immutable polynomial: a normalized tuple of (exponent vector, coefficient)."""

    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring: NumberRing, nvars: int, terms: Mapping[tuple[int, ...], RingElement] | None = None):
        self.ring = ring
        self.nvars = nvars
        items = []
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                e = _pad(e, nvars)
            c = ring.element(c)
            if not c.is_zero():
                items.append((e, c))
        items.sort(key=lambda t: _key(t[0]))
        self.terms = tuple(items)

    @classmethod
    def const(cls, ring: NumberRing, c, nvars: int = 0) -> "Poly":
        return cls(ring, nvars, {(0,) * nvars: ring.element(c)})

    @classmethod
    def var(cls, ring: NumberRing, index: int, nvars: int | None = None) -> "Poly":
        n = index + 1 if nvars is None else nvars
        e = tuple(int(i == index) for i in range(n))
        return cls(ring, n, {e: ring.one()})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def padded(self, n: int) -> "Poly":
        if n == self.nvars:
            return self
        if n < self.nvars:
            raise ValueError("cannot shrink the variable count")
        return Poly(self.ring, n, {_pad(e, n): c for e, c in self.terms})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch("polynomials over different rings")
            return other
        if isinstance(other, (int, RingElement)):
            return Poly.const(self.ring, other, self.nvars)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        n = max(self.nvars, o.nvars)
        acc = {}
        for e, c in self.terms + o.terms:
            e = _pad(e, n)
            acc[e] = acc[e] + c if e in acc else c
        return Poly(self.ring, n, acc)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, self.nvars, {e: -c for e, c in self.terms})

    def __sub__(self, other) -> "Poly":
        try:
            return self + (-self._lift(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        n = max(self.nvars, o.nvars)
        acc: dict = {}
        for e1, c1 in self.terms:
            e1 = _pad(e1, n)
            for e2, c2 in o.terms:
                e2 = _pad(e2, n)
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                acc[e] = acc[e] + p if e in acc else p
        return Poly(self.ring, n, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.ring, 1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, RingElement)):
            other = Poly.const(self.ring, other, self.nvars)
        if not isinstance(other, Poly):
            return NotImplemented
        n = max(self.nvars, other.nvars)
        return self.ring == other.ring and self.padded(n).terms == other.padded(n).terms

    def __hash__(self):
        return hash((self.ring.minpoly, tuple((e, c.coords) for e, c in self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def variables(self) -> set[int]:
        return {i for e, _ in self.terms for i, k in enumerate(e) if k}

    def evaluate(self, values: Sequence[RingElement]) -> RingElement:
        ring = self.ring
        total = ring.zero()
        cache: dict = {}
        for e, c in self.terms:
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    p = cache.get(key)
                    if p is None:
                        p = values[i] ** k
                        cache[key] = p
                    term = term * p
            total = total + term
        return total

    def substitute(self, fixed: Mapping[int, RingElement]) -> "Poly":
        """Plug in values for some variables; the variable count is kept."""
        acc: dict = {}
        for e, c in self.terms:
            coef = c
            ne = list(e)
            for i, v in fixed.items():
                if i < len(ne) and ne[i]:
                    coef = coef * (v ** ne[i])
                    ne[i] = 0
            ne = tuple(ne)
            acc[ne] = acc[ne] + coef if ne in acc else coef
        return Poly(self.ring, self.nvars, acc)

    def reindex(self, mapping: Sequence[int], nvars: int) -> "Poly":
        """Send variable i to variable mapping[i] in a space of nvars variables."""
        acc: dict = {}
        for e, c in self.terms:
            ne = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    ne[mapping[i]] += k
            ne = tuple(ne)
            acc[ne] = acc[ne] + c if ne in acc else c
        return Poly(self.ring, nvars, acc)

    def map_coefficients(self, fn, ring: NumberRing) -> "Poly":
        return Poly(ring, self.nvars, {e: fn(c) for e, c in self.terms})

    def __repr__(self):
        return "Poly(" + " + ".join(f"{list(c.coords)}*{list(e)}" for e, c in self.terms) + ")"
