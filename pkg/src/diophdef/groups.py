"""Pointed group instances with well-arranged coordinates.

Three kinds are supported: the multiplicative group (coordinates (u-1 : 1)),
the norm-one torus a^2 - c b^2 = 1 (coordinates (a-1 : b : 1)) and Weierstrass
elliptic curves (coordinates (X : Z : Y), so the identity is (0 : 0 : 1)).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product as iproduct
from math import lcm
from typing import Iterable, Sequence

import mpmath
import sympy

from .errors import (ArithmeticDomain, BadReduction, IdentityPoint, NoGoodPrimesFound, NonPrincipalCoordinateIdeal,
                     NotComputable, NotInKernel, PreconditionFailed, RingMismatch, SearchExhausted,
                     StabilityViolation, ZeroIdeal)
from .numfield import (Extension, FieldElement, Inclusion, IntegralIdeal, NumberRing, RingElement,
                       from_generators, identity_inclusion, make_field, principal, unit_group_order)
from .numfield.arith import fundamental_unit_real_quadratic
from .numfield.embed import embeddings, real_signs
from .numfield.units import free_unit_generators, torsion_units

KINDS = ("Gm", "NormOneTorus", "EllipticCurve")
BRUTE_FORCE_NORM = 10 ** 5
CURVE_ORDER_CAP = 10 ** 4


@dataclass(frozen=True)
class GroupInstance:
    kind: str
    ring: NumberRing                 # where coordinates live
    base_ring: NumberRing            # ring of definition
    base_inclusion: Inclusion
    twist: RingElement | None = None  # torus: c in ring, with M = L(sqrt c)
    a: tuple[RingElement, ...] | None = None  # curve: a1, a2, a3, a4, a6 in ring
    name: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return 1 if self.kind == "Gm" else 2

    @property
    def d(self) -> int:
        return 1

    def discriminant(self) -> RingElement:
        if self.kind != "EllipticCurve":
            raise ArithmeticDomain("discriminant is defined for curves only")
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + a2 * 4
        b4 = a4 * 2 + a1 * a3
        b6 = a3 * a3 + a6 * 4
        b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9

    def bad_primes(self) -> list[int]:
        if self.kind != "EllipticCurve":
            return []
        return sorted(int(p) for p in sympy.primefactors(abs(self.discriminant().norm())))

    def label(self) -> str:
        return self.name or f"{self.kind}/{self.ring.label()}"


def gm(ring: NumberRing, name: str = "") -> GroupInstance:
    return GroupInstance("Gm", ring, ring, identity_inclusion(ring), name=name)


def norm_one_torus(base: NumberRing, c, name: str = "") -> GroupInstance:
    c = base.element(c) if not isinstance(c, RingElement) else c
    if c.is_zero():
        raise PreconditionFailed("torus twist must be nonzero")
    return GroupInstance("NormOneTorus", base, base, identity_inclusion(base), twist=c, name=name)


def elliptic_curve(ring: NumberRing, a: Sequence, name: str = "") -> GroupInstance:
    if len(a) != 5:
        raise PreconditionFailed("need Weierstrass coefficients a1 a2 a3 a4 a6")
    coeffs = tuple(x if isinstance(x, RingElement) else ring.element(x) for x in a)
    g = GroupInstance("EllipticCurve", ring, ring, identity_inclusion(ring), a=coeffs, name=name)
    if g.discriminant().is_zero():
        raise PreconditionFailed("singular Weierstrass equation")
    return g


def base_change(g: GroupInstance, inc: Inclusion) -> GroupInstance:
    if inc.sub != g.ring:
        raise RingMismatch("inclusion does not start at the instance ring")
    return GroupInstance(g.kind, inc.sup, g.base_ring, g.base_inclusion.compose(inc),
                         twist=None if g.twist is None else inc(g.twist),
                         a=None if g.a is None else tuple(inc(x) for x in g.a), name=g.name)


# points

@dataclass(frozen=True)
class GroupPoint:
    instance: GroupInstance
    coords: tuple[RingElement, ...]

    @property
    def ring(self) -> NumberRing:
        return self.instance.ring

    @property
    def delta(self) -> RingElement:
        return self.coords[-1]

    def is_identity(self) -> bool:
        return all(c.is_zero() for c in self.coords[:-1])

    @property
    def arith(self):
        """Unit value (Gm), pair (a, b) (torus), affine (x, y) or None (curve)."""
        k = self.instance.kind
        if k == "Gm":
            return self.coords[0] + 1
        if k == "NormOneTorus":
            return (self.coords[0] + 1, self.coords[1])
        if self.is_identity():
            return None
        x, z, y = (c.to_field() for c in self.coords)
        return (x / z, y / z)

    def __repr__(self):
        return f"({' : '.join(str(list(c.coords)) for c in self.coords)})"


def _measure(coords: Sequence[RingElement]):
    ring = coords[0].ring
    if ring.degree == 1:
        return sum(abs(c.coords[0]) for c in coords)
    es = embeddings(ring)
    total = mpmath.mpf(0)
    with mpmath.workprec(64):
        for c in coords:
            reals, comps = es._values(c.coords)
            for v in reals:
                total += abs(mpmath.mpf((v.a + v.b) / 2))
            for z in comps:
                re = mpmath.mpf((z.re.a + z.re.b) / 2)
                im = mpmath.mpf((z.im.a + z.im.b) / 2)
                total += 2 * mpmath.sqrt(re * re + im * im)
        return Fraction(mpmath.nstr(total, 15))


def _associates(coords: tuple[RingElement, ...], window: int = 6):
    ring = coords[0].ring
    units = list(torsion_units(ring))
    for eps in free_unit_generators(ring):
        powers = [eps ** k for k in range(0, window + 1)] + [eps.inverse() ** k for k in range(1, window + 1)]
        units = [u * p for u in units for p in powers]
    for u in units:
        yield tuple(c * u for c in coords)


def _principal_generator(ideal: IntegralIdeal, search: int = 4) -> RingElement | None:
    ring = ideal.ring
    if ring.degree == 1:
        return ring.element(ideal.hnf[0][0])
    target = ideal.norm()
    basis = ideal.basis()
    for r in range(1, search + 1):
        for combo in iproduct(range(-r, r + 1), repeat=ring.degree):
            if max(abs(c) for c in combo) != r:
                continue
            x = reduce(lambda s, kb: s + kb[1] * kb[0], zip(combo, basis), ring.zero())
            if abs(x.norm()) == target:
                return x
    return None


def canonicalize(g: GroupInstance, raw: Sequence) -> tuple[RingElement, ...]:
    """Primitive coordinates with a deterministic choice of associate."""
    ring = g.ring
    fe = [c if isinstance(c, FieldElement) else FieldElement.of(ring, c) for c in raw]
    den = lcm(*[q.denominator for c in fe for q in c.coords]) or 1
    coords = tuple((c * den).to_ring() for c in fe)
    if all(c.is_zero() for c in coords):
        raise PreconditionFailed("all coordinates vanish")
    ideal = from_generators(ring, coords)
    if not ideal.is_unit:
        gen = _principal_generator(ideal)
        if gen is None:
            raise NonPrincipalCoordinateIdeal(f"coordinate ideal {ideal} has no small generator")
        coords = tuple(c.exact_div(gen) for c in coords)
    delta = coords[-1]
    if not delta.is_zero() and delta.is_unit():
        inv = delta.inverse()
        return tuple(c * inv for c in coords)
    best = None
    for cand in _associates(coords):
        key = (_measure(cand), tuple(-x for c in cand for x in c.coords))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def _on_variety(g: GroupInstance, coords: Sequence[RingElement]) -> bool:
    if g.kind == "Gm":
        x, d = coords
        return not d.is_zero() and (x + d).is_unit() and d.is_unit()
    if g.kind == "NormOneTorus":
        x, y, d = coords
        a = x + d
        return a * a - g.twist * y * y == d * d
    X, Z, Y = coords
    a1, a2, a3, a4, a6 = g.a
    lhs = Y * Y * Z + a1 * X * Y * Z + a3 * Y * Z * Z
    rhs = X * X * X + a2 * X * X * Z + a4 * X * Z * Z + a6 * Z * Z * Z
    return lhs == rhs


def point_from_coords(g: GroupInstance, coords: Sequence) -> GroupPoint:
    if len(coords) != g.n + 1:
        raise PreconditionFailed(f"{g.kind} needs {g.n + 1} coordinates")
    c = canonicalize(g, coords)
    if not _on_variety(g, c):
        raise PreconditionFailed("coordinates do not lie on the group")
    if g.kind != "EllipticCurve" and not c[-1].is_unit():
        raise PreconditionFailed("point is not integral")
    return GroupPoint(g, c)


def identity(g: GroupInstance) -> GroupPoint:
    ring = g.ring
    return GroupPoint(g, tuple([ring.zero()] * g.n + [ring.one()]))


def gm_point(g: GroupInstance, u) -> GroupPoint:
    u = u if isinstance(u, RingElement) else g.ring.element(u)
    if u.is_zero() or not u.is_unit():
        raise PreconditionFailed("not a unit")
    return GroupPoint(g, (u - 1, g.ring.one()))


def torus_point(g: GroupInstance, a, b) -> GroupPoint:
    ring = g.ring
    a = a if isinstance(a, RingElement) else ring.element(a)
    b = b if isinstance(b, RingElement) else ring.element(b)
    if a * a - g.twist * b * b != ring.one():
        raise PreconditionFailed("not of norm one")
    return GroupPoint(g, (a - 1, b, ring.one()))


def curve_point(g: GroupInstance, x, y) -> GroupPoint:
    ring = g.ring
    x = x if isinstance(x, FieldElement) else FieldElement.of(ring, x)
    y = y if isinstance(y, FieldElement) else FieldElement.of(ring, y)
    a1, a2, a3, a4, a6 = (c.to_field() for c in g.a)
    if y * y + a1 * x * y + a3 * y != x * x * x + a2 * x * x + a4 * x + a6:
        raise PreconditionFailed("point is not on the curve")
    return GroupPoint(g, canonicalize(g, (x, FieldElement.of(ring, 1), y)))


def _from_arith(g: GroupInstance, value) -> GroupPoint:
    if g.kind == "Gm":
        return GroupPoint(g, (value - 1, g.ring.one()))
    if g.kind == "NormOneTorus":
        a, b = value
        return GroupPoint(g, (a - 1, b, g.ring.one()))
    if value is None:
        return identity(g)
    return curve_point(g, *value)


def _curve_add(g: GroupInstance, p, q):
    if p is None:
        return q
    if q is None:
        return p
    a1, a2, a3, a4, a6 = (c.to_field() for c in g.a)
    x1, y1 = p
    x2, y2 = q
    if x1 == x2:
        if (y1 + y2 + a1 * x2 + a3).is_zero():
            return None
        den = y1 * 2 + a1 * x1 + a3
        if den.is_zero():
            raise ArithmeticDomain("tangent denominator vanished off the 2-torsion case")
        lam = (x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1) / den
        nu = (-(x1 * x1 * x1) + a4 * x1 + a6 * 2 - a3 * y1) / den
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -((lam + a1) * x3) - nu - a3
    return (x3, y3)


def _check_same(p: GroupPoint, q: GroupPoint):
    if p.instance != q.instance:
        raise RingMismatch("points live on different instances")


def compose(g: GroupInstance, p: GroupPoint, q: GroupPoint) -> GroupPoint:
    _check_same(p, q)
    if g.kind == "Gm":
        return _from_arith(g, p.arith * q.arith)
    if g.kind == "NormOneTorus":
        (a, b), (c, d) = p.arith, q.arith
        return _from_arith(g, (a * c + g.twist * b * d, a * d + b * c))
    return _from_arith(g, _curve_add(g, p.arith, q.arith))


def inverse(g: GroupInstance, p: GroupPoint) -> GroupPoint:
    if g.kind == "Gm":
        return _from_arith(g, p.arith.inverse())
    if g.kind == "NormOneTorus":
        a, b = p.arith
        return _from_arith(g, (a, -b))
    if p.is_identity():
        return p
    a1, _, a3, _, _ = (c.to_field() for c in g.a)
    x, y = p.arith
    return _from_arith(g, (x, -y - a1 * x - a3))


def power(g: GroupInstance, p: GroupPoint, nu: int) -> GroupPoint:
    if nu < 0:
        return power(g, inverse(g, p), -nu)
    if g.kind == "Gm":
        return _from_arith(g, p.arith ** nu)
    out = identity(g)
    base = p
    while nu:
        if nu & 1:
            out = compose(g, out, base)
        nu >>= 1
        if nu:
            base = compose(g, base, base)
    return out


def well_arranged_coords(p: GroupPoint) -> tuple[RingElement, ...]:
    return p.coords


# vanishing data and kernels

@dataclass(frozen=True)
class VanishingData:
    z: IntegralIdeal
    c: IntegralIdeal
    partial: tuple[RingElement, ...]


def _inverse_mod(ideal: IntegralIdeal, x: RingElement) -> RingElement:
    if ideal.is_unit:
        return ideal.ring.zero()
    return ideal.inverse_mod(x)


def vanishing_data(p: GroupPoint) -> VanishingData:
    g = p.instance
    z = from_generators(g.ring, p.coords[:g.n])
    if z.is_zero:
        raise IdentityPoint("the identity has vanishing ideal (0)")
    c = z * z
    inv = _inverse_mod(c, p.delta)
    partial = tuple(c.reduce(p.coords[i] * inv) for i in range(g.d))
    return VanishingData(z, c, partial)


def _as_ideal(g: GroupInstance, ideal) -> IntegralIdeal:
    if isinstance(ideal, IntegralIdeal):
        if ideal.ring == g.ring:
            return ideal
        if ideal.ring == g.base_ring:
            return from_generators(g.ring, [g.base_inclusion(b) for b in ideal.basis()])
        raise RingMismatch("ideal lives in an unrelated ring")
    return principal(g.ring, ideal if isinstance(ideal, RingElement) else g.ring.element(ideal))


def _check_reduction(g: GroupInstance, ideal: IntegralIdeal):
    if g.kind != "EllipticCurve":
        return
    primes = sympy.primefactors(ideal.norm())
    bad = [int(q) for q in primes if q in set(g.bad_primes())]
    if bad:
        raise BadReduction(bad)


def in_congruence_kernel(p: GroupPoint, ideal) -> bool:
    g = p.instance
    ideal = _as_ideal(g, ideal)
    if ideal.is_zero:
        raise ZeroIdeal("congruence kernel needs a nonzero ideal")
    _check_reduction(g, ideal)
    return all(ideal.contains(c) for c in p.coords[:g.n])


def _order_by_iteration(p: GroupPoint, ideal: IntegralIdeal, cap: int) -> int:
    g = p.instance
    if g.kind == "Gm":
        u = ideal.reduce(p.arith)
        acc = u
        for k in range(1, cap + 1):
            if ideal.contains(acc - 1):
                return k
            acc = ideal.reduce(acc * u)
    elif g.kind == "NormOneTorus":
        a0, b0 = (ideal.reduce(x) for x in p.arith)
        a, b = a0, b0
        c = g.twist
        for k in range(1, cap + 1):
            if ideal.contains(a - 1) and ideal.contains(b):
                return k
            a, b = ideal.reduce(a * a0 + c * b * b0), ideal.reduce(a * b0 + b * a0)
    else:
        q = p
        for k in range(1, cap + 1):
            if in_congruence_kernel(q, ideal):
                return k
            q = compose(g, q, p)
    raise SearchExhausted(f"no kernel multiple found below {cap}")


def _order_from_group(p: GroupPoint, ideal: IntegralIdeal) -> int:
    order = unit_group_order(ideal)
    u = p.arith

    def trivial(e: int) -> bool:
        acc, base = ideal.ring.one(), ideal.reduce(u)
        while e:
            if e & 1:
                acc = ideal.reduce(acc * base)
            e >>= 1
            if e:
                base = ideal.reduce(base * base)
        return ideal.contains(acc - 1)

    if not trivial(order):
        raise AssertionError("unit order does not divide the group order")
    for q in sympy.primefactors(order):
        while order % q == 0 and trivial(order // q):
            order //= q
    return order


def kernel_multiple(p: GroupPoint, ideal, method: str = "auto", cap: int | None = None) -> int:
    """Order k of P in G(O/I), so that P^k lies in the congruence kernel."""
    g = p.instance
    ideal = _as_ideal(g, ideal)
    if ideal.is_zero:
        raise ZeroIdeal("congruence kernel needs a nonzero ideal")
    _check_reduction(g, ideal)
    if method == "auto":
        method = "group" if g.kind == "Gm" and ideal.norm() > BRUTE_FORCE_NORM else "iterate"
    if method == "group":
        if g.kind != "Gm":
            raise NotComputable("group-order method is implemented for Gm only")
        return _order_from_group(p, ideal)
    if cap is None:
        cap = CURVE_ORDER_CAP if g.kind == "EllipticCurve" else 4 * ideal.norm() ** 2 + 4
    return _order_by_iteration(p, ideal, cap)


@dataclass(frozen=True)
class PowerWitness:
    point: GroupPoint
    root: GroupPoint
    r: int
    ideal: IntegralIdeal


def rth_power_coset(p: GroupPoint, ideal, r: int) -> PowerWitness:
    g = p.instance
    ideal = _as_ideal(g, ideal)
    if r < 1:
        raise PreconditionFailed("exponent must be positive")
    if not in_congruence_kernel(p, ideal):
        raise NotInKernel("point does not reduce to the identity")
    return PowerWitness(power(g, p, r), p, r, ideal)


# stability

@dataclass(frozen=True)
class StabilityExponent:
    r: int
    ideal: IntegralIdeal

    def __post_init__(self):
        if self.r < 1:
            raise PreconditionFailed("r must be positive")
        if self.ideal.is_zero:
            raise ZeroIdeal("stability ideal must be nonzero")


def descend(p: GroupPoint, inc: Inclusion, target: GroupInstance) -> GroupPoint | None:
    """The point over the subring with the same coordinates, if there is one."""
    pre = [inc.preimage(c) for c in p.coords]
    if any(x is None for x in pre):
        return None
    return GroupPoint(target, tuple(pre))


@dataclass
class StabilityReport:
    sampled: int = 0
    in_kernel: int = 0
    passed: int = 0
    failed: int = 0
    first_failure: GroupPoint | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0


def check_stability_exponent(g: GroupInstance, ext: Extension, exponent: StabilityExponent,
                             sample: Iterable[GroupPoint]) -> StabilityReport:
    """Sampling check: r-th powers of kernel points land in the subring points."""
    if g.ring != ext.big:
        raise RingMismatch("instance must live over the big ring")
    ideal = _as_ideal(g, exponent.ideal) if exponent.ideal.ring == g.ring else \
        from_generators(g.ring, [ext.inclusion(b) for b in exponent.ideal.basis()])
    rep = StabilityReport()
    for p in sample:
        rep.sampled += 1
        if not in_congruence_kernel(p, ideal):
            continue
        rep.in_kernel += 1
        q = power(g, p, exponent.r)
        if all(ext.inclusion.contains(c) for c in q.coords):
            rep.passed += 1
        else:
            rep.failed += 1
            if rep.first_failure is None:
                rep.first_failure = p
    return rep


def unit_sample(g: GroupInstance, units: Sequence[RingElement], k_bound: int) -> list[GroupPoint]:
    """Points t * eps^k for torsion units t and |k| <= k_bound (one free generator)."""
    ring = g.ring
    out = []
    eps = units[0]
    for t in torsion_units(ring):
        for k in range(-k_bound, k_bound + 1):
            out.append(gm_point(g, t * (eps ** k if k >= 0 else eps.inverse() ** (-k))))
    return out


# torus helpers

def _rational_twist(g: GroupInstance) -> int | None:
    x = g.twist
    return x.coords[0] if all(c == 0 for c in x.coords[1:]) else None


def norm_one_generators(g: GroupInstance) -> list[GroupPoint]:
    """Norm-one units built from the fundamental unit of Z[sqrt c] for a rational twist c."""
    if g.kind != "NormOneTorus":
        raise PreconditionFailed("not a torus")
    c = _rational_twist(g)
    if c is None:
        raise NotComputable("twist is not rational; no fundamental unit available")
    if c < 0:
        return []
    if sympy.sqrt(c).is_integer:
        raise NotComputable("twist is a square; the torus is split")
    quad = make_field((-c, 0, 1), allow_nonmaximal=True)
    eps = fundamental_unit_real_quadratic(quad)
    x, y = eps.coords
    if eps.norm() == 1:
        return [torus_point(g, x, y)]
    s = eps.norm()
    return [torus_point(g, s * (x * x + c * y * y), s * 2 * x * y)]


def torus_rank(base: NumberRing, c) -> int:
    """Number of real places of the base where the twist is positive."""
    c = c if isinstance(c, RingElement) else base.element(c)
    return sum(1 for s in real_signs(c) if s > 0)


@dataclass(frozen=True)
class BPair:
    point: GroupPoint
    i: int
    j: int

    @property
    def a(self) -> RingElement:
        return self.point.coords[self.i]

    @property
    def b(self) -> RingElement:
        return self.point.coords[self.j]

    def ratio(self) -> FieldElement:
        return self.a.to_field() / self.b.to_field()


def b_pairs_of(p: GroupPoint) -> list[BPair]:
    k = len(p.coords)
    return [BPair(p, i, j) for j in range(k) for i in range(k) if not p.coords[j].is_zero()]


def b_set_sample(g: GroupInstance, ext: Extension, n: int = 3, count: int = 3) -> list[BPair]:
    """Coordinate pairs of kernel points mod n of the torus over the big ring,
    each checked to have ratio in the subring's field."""
    if g.ring != ext.sub:
        raise RingMismatch("torus must be defined over the subring")
    if n < 3:
        raise PreconditionFailed("kernel modulus must be at least 3")
    big = base_change(g, ext.inclusion)
    gens = [GroupPoint(big, tuple(ext.inclusion(c) for c in p.coords)) for p in norm_one_generators(g)]
    ideal = principal(big.ring, big.ring.element(n))
    points = [identity(big)]
    for gen in gens:
        k = kernel_multiple(gen, ideal)
        base = power(big, gen, k)
        acc = base
        for _ in range(count):
            points.append(acc)
            acc = compose(big, acc, base)
    out = []
    for p in points:
        if not in_congruence_kernel(p, ideal):
            raise AssertionError("sampled point left the kernel")
        for pair in b_pairs_of(p):
            if ext.inclusion.preimage_field(pair.ratio()) is None:
                raise StabilityViolation(f"ratio of {pair} is not in the subfield")
            out.append(pair)
    return out


def pick_stability_modulus(g: GroupInstance, bound: int = 10 ** 4) -> int:
    if g.kind != "EllipticCurve":
        raise PreconditionFailed("modulus picker is for curves")
    bad = set(g.bad_primes())
    good = [p for p in sympy.primerange(2, bound) if p not in bad][:2]
    if len(good) < 2:
        raise NoGoodPrimesFound(f"fewer than two good primes below {bound}")
    return good[0] * good[1]
