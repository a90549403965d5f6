"""Certified complex embeddings via interval arithmetic.

Each root of the minimal polynomial is enclosed in a disc whose radius comes
from the bound |z - root| <= d·|f(z)/f'(z)| (some root lies in that disc).
Pairwise disjoint discs, one per root, certify the enclosures. Values of
elements are then enclosed by interval Horner evaluation; a sign is only
reported once its interval excludes zero, doubling precision otherwise.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import iv

from ..errors import Undecidable
from .ring import NumberRing

START_PREC = 96


def precision_cap() -> int:
    return int(os.environ.get("DIOPHDEF_PREC_CAP", "8192"))


class _Prec:
    def __init__(self, prec: int):
        self.prec = prec

    def __enter__(self):
        self.saved = iv.prec, mpmath.mp.prec
        iv.prec = self.prec
        mpmath.mp.prec = self.prec

    def __exit__(self, *exc):
        iv.prec, mpmath.mp.prec = self.saved


def _ivq(c) -> "iv.mpf":
    if isinstance(c, Fraction):
        return iv.mpf(c.numerator) / iv.mpf(c.denominator)
    return iv.mpf(int(c))


class CI:
    """Rectangular complex interval (re, im)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re, self.im = re, im

    def __add__(self, o):
        if isinstance(o, CI):
            return CI(self.re + o.re, self.im + o.im)
        return CI(self.re + o, self.im)

    def __mul__(self, o):
        if isinstance(o, CI):
            return CI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        return CI(self.re * o, self.im * o)

    def abs_upper(self):
        return iv.sqrt(self.re ** 2 + self.im ** 2).b

    def abs_lower(self):
        return iv.sqrt(self.re ** 2 + self.im ** 2).a

    def abs(self):
        return iv.sqrt(self.re ** 2 + self.im ** 2)


def _horner(coeffs, z):
    acc = None
    for c in reversed(coeffs):
        acc = (z * 0 + c) if acc is None else acc * z + c
    return acc


@dataclass
class EmbeddingSet:
    ring: NumberRing
    precision: int
    real: list          # interval enclosures of real roots, largest first
    complex: list       # CI enclosures, one per conjugate pair (Im > 0)
    centers: list       # mpc approximations in the same order (real first)
    radii: list

    @property
    def count(self) -> int:
        return len(self.real) + len(self.complex)

    def _values(self, coords):
        with _Prec(self.precision):
            cs = [_ivq(c) for c in coords]
            reals = [_horner(cs, r) for r in self.real]
            comps = [_horner(cs, z) for z in self.complex]
        return reals, comps


def _certify(ring: NumberRing, prec: int) -> EmbeddingSet | None:
    d = ring.degree
    f = list(reversed(ring.minpoly))
    asc = list(ring.minpoly)
    fd = [i * c for i, c in enumerate(asc)][1:]
    with _Prec(prec):
        if d == 1:
            r = iv.mpf(-ring.minpoly[0])
            return EmbeddingSet(ring, prec, [r], [], [mpmath.mpc(-ring.minpoly[0])], [mpmath.mpf(0)])
        try:
            roots = mpmath.polyroots(f, maxsteps=200, extraprec=prec)
        except mpmath.libmp.NoConvergence:
            return None
        discs = []
        for z in roots:
            zi = CI(iv.mpf(z.real), iv.mpf(z.imag))
            fz = _horner([iv.mpf(c) for c in asc], zi)
            fdz = _horner([iv.mpf(c) for c in fd], zi)
            low = fdz.abs_lower()
            if low <= 0:
                return None
            rad = iv.mpf(d) * iv.mpf(fz.abs_upper()) / iv.mpf(low)
            discs.append((z, rad.b))
        for i in range(d):
            for j in range(i + 1, d):
                zi, ri = discs[i]
                zj, rj = discs[j]
                sep = CI(iv.mpf(zi.real) - iv.mpf(zj.real), iv.mpf(zi.imag) - iv.mpf(zj.imag)).abs_lower()
                if sep <= ri + rj:
                    return None
        real, comp, centers, radii = [], [], [], []
        reals, comps = [], []
        for z, r in discs:
            if abs(z.imag) <= r:
                # disc symmetric about the real axis after recentering holds a real root
                reals.append((mpmath.mpf(z.real), r + abs(z.imag)))
            elif z.imag > 0:
                comps.append((z, r))
        if len(reals) + 2 * len(comps) != d:
            return None
        reals.sort(key=lambda t: t[0], reverse=True)
        for c, r in reals:
            real.append(iv.mpf([c - r, c + r]))
            centers.append(mpmath.mpc(c))
            radii.append(r)
        comps.sort(key=lambda t: (t[0].real, t[0].imag))
        for z, r in comps:
            comp.append(CI(iv.mpf([z.real - r, z.real + r]), iv.mpf([z.imag - r, z.imag + r])))
            centers.append(z)
            radii.append(r)
    return EmbeddingSet(ring, prec, real, comp, centers, radii)


@lru_cache(maxsize=256)
def embeddings(ring: NumberRing, prec: int = START_PREC) -> EmbeddingSet:
    p = prec
    while p <= precision_cap():
        es = _certify(ring, p)
        if es is not None:
            return es
        p *= 2
    raise Undecidable(f"could not certify root enclosures for {ring.label()}")


def _coords(x) -> tuple:
    return x.coords


def _escalate(fn, ring: NumberRing):
    p = START_PREC
    while p <= precision_cap():
        out = fn(embeddings(ring, p))
        if out is not None:
            return out
        p *= 2
    raise Undecidable("precision cap reached before the comparison was certified")


def real_signs(x) -> tuple[int, ...]:
    """Certified signs of x at every real embedding (0 only for x = 0)."""
    if x.is_zero():
        return tuple(0 for _ in range(x.ring.signature[0]))

    def attempt(es):
        reals, _ = es._values(_coords(x))
        out = []
        for v in reals:
            if v.a > 0:
                out.append(1)
            elif v.b < 0:
                out.append(-1)
            else:
                return None
        return tuple(out)

    return _escalate(attempt, x.ring)


def abs_compare(x, bound) -> tuple[int, ...]:
    """Certified sign of |τ(x)| - bound for every embedding τ (real ones first,
    then one per complex pair). Returns 0 only when exact equality is proven
    by an exact test on the caller's side; here undecided intervals escalate."""
    def attempt(es):
        reals, comps = es._values(_coords(x))
        with _Prec(es.precision):
            b = _ivq(Fraction(bound))
            vals = [abs(v) for v in reals] + [z.abs() for z in comps]
            out = []
            for v in vals:
                diff = v - b
                if diff.a > 0:
                    out.append(1)
                elif diff.b < 0:
                    out.append(-1)
                else:
                    return None
        return tuple(out)

    return _escalate(attempt, x.ring)


def approximate(x, digits: int = 20) -> list[tuple[str, str]]:
    """Labelled approximations (value, error radius) of x under each embedding."""
    es = embeddings(x.ring)
    reals, comps = es._values(_coords(x))
    out = []
    with _Prec(es.precision):
        for v in reals:
            mid = (v.a + v.b) / 2
            out.append((mpmath.nstr(mpmath.mpf(mid.a), digits), mpmath.nstr(mpmath.mpf(v.delta.b) / 2, 3)))
        for z in comps:
            re = (z.re.a + z.re.b) / 2
            im = (z.im.a + z.im.b) / 2
            err = max(mpmath.mpf(z.re.delta.b), mpmath.mpf(z.im.delta.b)) / 2
            out.append((mpmath.nstr(mpmath.mpc(mpmath.mpf(re.a), mpmath.mpf(im.a)), digits), mpmath.nstr(err, 3)))
    return out


def norm_and_conjugates(x) -> tuple[int, list[tuple[str, str]]]:
    return x.norm(), approximate(x)


def first_real_value(x, prec: int = START_PREC):
    es = embeddings(x.ring, prec)
    reals, _ = es._values(_coords(x))
    return reals[0]


def max_abs_upper(x) -> float:
    """Certified upper bound on max |τ(x)| over all embeddings."""
    es = embeddings(x.ring)
    reals, comps = es._values(_coords(x))
    with _Prec(es.precision):
        vals = [abs(v).b for v in reals] + [z.abs_upper() for z in comps]
        return float(mpmath.mpf(max(vals))) * (1 + 1e-12) if vals else 0.0
