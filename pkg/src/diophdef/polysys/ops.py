"""Definability gadgets and combinators on polynomial systems."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import mpmath

from ..errors import AllZero, MissingInclusion, RingMismatch, SearchExhausted, ZeroInput
from ..numfield import NumberRing, RingElement, Inclusion, embeddings
from .poly import Poly
from .system import Builder, DiophDefinition, PolySystem, merge


@dataclass(frozen=True)
class RootlessPolynomial:
    ring: NumberRing
    coeffs: tuple[int, ...]  # ascending, a_0 .. a_n
    reason: str              # "real-embedding" | "exhaustive-root-search"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def combine_to_single(system: PolySystem, p: RootlessPolynomial) -> PolySystem:
    """One polynomial with the same zero set: F <- Σ a_k F^k g^(n-k) for each next g."""
    if p.degree < 2:
        raise ValueError("rootless polynomial must have degree >= 2")
    if not system.polys:
        raise ValueError("empty system")
    n = p.degree
    acc = system.polys[0]
    for g in system.polys[1:]:
        fp = [Poly.const(system.ring, 1, len(system.variables))]
        gp = [Poly.const(system.ring, 1, len(system.variables))]
        for _ in range(n):
            fp.append(fp[-1] * acc)
            gp.append(gp[-1] * g)
        new = Poly.const(system.ring, 0, len(system.variables))
        for k, a in enumerate(p.coeffs):
            if a:
                new = new + fp[k] * gp[n - k] * a
        acc = new
    return PolySystem(system.ring, system.variables, (acc,), ("combined",))


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _coordinate_bound(ring: NumberRing, modulus_bound: float) -> int:
    """Bound on |coordinates| of any element whose conjugates all have absolute
    value <= modulus_bound: coords = V^{-1}·(conjugates)."""
    es = embeddings(ring)
    with mpmath.workdps(50):
        roots = []
        for c in es.centers:
            roots.append(c)
            if abs(mpmath.im(c)) > 0:
                roots.append(mpmath.conj(c))
        d = ring.degree
        v = mpmath.matrix(d, d)
        for i, r in enumerate(roots):
            for j in range(d):
                v[i, j] = r ** j
        vinv = mpmath.inverse(v)
        worst = max(sum(abs(vinv[j, i]) for i in range(d)) for j in range(d))
        return int(mpmath.ceil(worst * modulus_bound * (1 + mpmath.mpf(10) ** -6))) + 1


def has_square_root(ring: NumberRing, c: int) -> bool:
    """Exhaustive search for x in O_K with x² = c over the certified coordinate box."""
    bound = _coordinate_bound(ring, math.sqrt(abs(c)))
    target = ring.element(c)
    for coords in product(range(-bound, bound + 1), repeat=ring.degree):
        x = RingElement(ring, coords)
        if x * x == target:
            return True
    return False


def find_rootless_quadratic(ring: NumberRing, search: int = 50) -> RootlessPolynomial:
    if ring.signature[0] > 0:
        return RootlessPolynomial(ring, (1, 0, 1), "real-embedding")
    for c in range(2, search):
        if _is_square(c):
            continue
        if ring.degree == 2:
            disc = ring.discriminant
            rootless = not _is_square(c) and not _is_square(c * disc)
            if rootless != (not has_square_root(ring, c)):
                raise AssertionError("square criterion disagrees with root search")
        else:
            rootless = not has_square_root(ring, c)
        if rootless:
            return RootlessPolynomial(ring, (-c, 0, 1), "exhaustive-root-search")
    raise SearchExhausted("no rootless t² - c found below the search bound")


# gadgets

def unit_gadget(ring: NumberRing, t: str = "t", s: str = "s") -> PolySystem:
    b = Builder(ring)
    tv = b.var(t, "fundamental")
    sv = b.var(s, "auxiliary")
    b.eq(tv * sv - 1, "unit")
    return b.build()


def nonzero_gadget(ring: NumberRing, x: str = "x", names: Sequence[str] = ("y", "z", "w")) -> PolySystem:
    b = Builder(ring)
    xv = b.var(x, "fundamental")
    y, z, w = (b.var(n, "auxiliary") for n in names)
    b.eq((2 * y - 1) * (3 * z - 1) - xv * w, "nonzero")
    return b.build()


def witness_nonzero(x: RingElement) -> tuple[RingElement, RingElement, RingElement]:
    """(y, z, w) with (2y-1)(3z-1) = x·w. With |N(x)| = 2^a·m (m odd), 2y ≡ 1
    mod m and 3z ≡ 1 mod 2^a make the left side a multiple of N(x) ∈ xO."""
    if x.is_zero():
        raise ZeroInput("0 has no nonzero witness")
    ring = x.ring
    n = abs(x.norm())
    a = (n & -n).bit_length() - 1
    m = n >> a
    y = pow(2, -1, m) if m > 1 else 0
    z = pow(3, -1, 1 << a) if a else 0
    lhs = ring.element((2 * y - 1) * (3 * z - 1))
    w = lhs.exact_div(x)
    return ring.element(y), ring.element(z), w


def total_positivity_system(ring: NumberRing, x: str = "x", z: str = "z") -> PolySystem:
    """y5²(x - z) = y1² + ... + y4² with y5 ≠ 0. Degenerate when x = z."""
    b = Builder(ring)
    xv = b.var(x, "fundamental")
    zv = b.var(z, "fundamental")
    ys = [b.var(f"y{i}", "auxiliary") for i in range(1, 6)]
    b.eq(ys[4] ** 2 * (xv - zv) - sum((y ** 2 for y in ys[:4]), Poly.const(ring, 0)), "four-squares")
    sysm = b.build()
    return merge(sysm, nonzero_gadget(ring, "y5", ("n_y", "n_z", "n_w")), {"y5": "y5"})


# combinators

def intersect_definitions(d1: DiophDefinition, d2: DiophDefinition) -> DiophDefinition:
    if d1.ring != d2.ring or d1.t != d2.t:
        raise RingMismatch("definitions must share the ring and the distinguished variable")
    sysm = merge(d1.system, d2.system, {d2.t: d1.t})
    return DiophDefinition(sysm, d1.t, f"({d1.descriptor}) ∩ ({d2.descriptor})")


def compose_transitive(def_k: DiophDefinition, def_l: DiophDefinition, inclusion: Inclusion | None) -> DiophDefinition:
    """def_k lives over O_L, def_l defines (the image of) O_L inside O_H."""
    if inclusion is None or inclusion.sub != def_k.ring or inclusion.sup != def_l.ring:
        raise MissingInclusion("no registered inclusion from the first definition's ring into the second's")
    base = def_k.system.map_ring(inclusion)
    sysm = base
    for v in def_k.system.variables:
        sysm = merge(sysm, def_l.system, {def_l.t: v.name})
    return DiophDefinition(sysm, def_k.t, f"{def_k.descriptor} over {def_l.descriptor}")


def superset_shrink(def_s: DiophDefinition, alpha: RingElement) -> DiophDefinition:
    """b·t = Σ a_i α^i with b, ±a_i in S and b ≠ 0."""
    ring = def_s.ring
    d = ring.degree
    b = Builder(ring)
    t = b.var("t", "fundamental")
    bv = b.var("b", "auxiliary")
    a_s = [b.var(f"a{i}", "auxiliary") for i in range(d)]
    s_s = [b.var(f"s{i}", "auxiliary") for i in range(d)]
    rhs = Poly.const(ring, 0)
    for i in range(d):
        rhs = rhs + a_s[i] * (alpha ** i)
        b.eq(a_s[i] ** 2 - s_s[i] ** 2, f"a{i} = ±s{i}")
    b.eq(bv * t - rhs, "shrink")
    sysm = b.build()
    sysm = merge(sysm, nonzero_gadget(ring, "b", ("n_y", "n_z", "n_w")), {"b": "b"})
    for name in ["b"] + [f"s{i}" for i in range(d)]:
        sysm = merge(sysm, def_s.system, {def_s.t: name})
    return DiophDefinition(sysm, "t", f"O_K via {def_s.descriptor}")


def transport(system_b: PolySystem, defn: DiophDefinition, inclusion: Inclusion | None = None) -> PolySystem:
    """Fiber product: each variable of B is tied to its own copy of the definition."""
    if system_b.ring != defn.ring:
        if inclusion is None:
            raise MissingInclusion("system and definition live over different rings")
        system_b = system_b.map_ring(inclusion)
    out = system_b
    for v in system_b.variables:
        out = merge(out, defn.system, {defn.t: v.name})
    return out


def veronese(coords: Sequence[RingElement], h: int) -> list[RingElement]:
    """All degree-h monomials of the coordinates, lexicographically descending exponents."""
    if h < 1:
        raise ValueError("h must be positive")
    if all(c.is_zero() for c in coords):
        raise AllZero("coordinates are all zero")
    n = len(coords)
    exps = [e for e in product(range(h, -1, -1), repeat=n) if sum(e) == h]
    out = []
    ring = coords[0].ring
    for e in exps:
        m = ring.one()
        for c, k in zip(coords, e):
            if k:
                m = m * c ** k
        out.append(m)
    return out
