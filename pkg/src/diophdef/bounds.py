"""Norm-bound constants and congruence capture.

Each capture function checks a certificate exactly and returns the captured
element in subring coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as iproduct
from typing import Iterable, Sequence

from .errors import (CapExceeded, CertificateInvalid, ConditionsNotCertified, MissingAutomorphisms, NotInSubring,
                     PreconditionFailed, SearchExhausted, SequenceExhausted, StabilityViolation)
from .groups import BPair, GroupInstance, base_change, in_congruence_kernel, _on_variety
from .numfield import (Automorphism, Extension, FieldElement, Inclusion, IntegralIdeal, NumberRing, RingElement,
                       extend, principal, real_signs, abs_compare)
from .numfield.embed import max_abs_upper
from .numfield.linalg import det_bareiss, solve_integral
from .polysys.ops import _coordinate_bound

M_CAP = 6
FOUR_SQUARES_BOUND = 12


# constants

def power_matrix(m: int) -> list[list[int]]:
    return [[r ** (m - k) for k in range(m + 1)] for r in range(m + 1)]


@lru_cache(maxsize=None)
def c_of_m(m: int, cap: int = M_CAP) -> int:
    """(m+1)^2 times one more than the largest |minor| of the power matrix, all orders."""
    if m < 1 or m > cap:
        raise CapExceeded(f"m={m} outside 1..{cap}")
    a = power_matrix(m)
    n = m + 1
    top = 0
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                top = max(top, abs(det_bareiss([[a[i][j] for j in cols] for i in rows])))
    return n * n * (top + 1)


@dataclass(frozen=True)
class BoundContext:
    m: int
    c_of_m: int
    power_matrix: tuple[tuple[int, ...], ...]


def bound_context(m: int) -> BoundContext:
    return BoundContext(m, c_of_m(m), tuple(tuple(r) for r in power_matrix(m)))


def u_of(m: int, alpha):
    """C(m)·α(1-α)···(m-α); works for ints, ring elements and polynomials."""
    out = alpha * c_of_m(m)
    for j in range(1, m + 1):
        out = out * (j - alpha)
    return out


def d_of(m: int, alpha):
    u = u_of(m, alpha)
    return u ** (m * m)


# norm gap and the le:Dbound-style inequality

@dataclass(frozen=True)
class NormGapReport:
    ideal_norm: int
    margins: tuple[int, ...]   # ideal norm minus |N(α - β)| per registered conjugate

    @property
    def holds(self) -> bool:
        return all(x > 0 for x in self.margins)


def check_norm_gap(alpha: RingElement, ideal: IntegralIdeal, automorphisms: Sequence[Automorphism],
                   m: int | None = None) -> NormGapReport:
    if not automorphisms:
        raise MissingAutomorphisms("register the automorphisms of the Galois field first")
    m = m or len(automorphisms)
    dval = d_of(m, alpha)
    if dval.is_zero():
        raise PreconditionFailed("D(m, α) = 0; the gap statement is vacuous")
    if not ideal.subset(principal(alpha.ring, dval)):
        raise PreconditionFailed("ideal is not contained in D(m, α)")
    n = ideal.norm()
    return NormGapReport(n, tuple(n - abs((alpha - g(alpha)).norm()) for g in automorphisms))


@dataclass(frozen=True)
class DBoundReport:
    lhs: tuple[int, ...]
    rhs: int

    @property
    def holds(self) -> bool:
        return all(x <= self.rhs for x in self.lhs)


def dbound_check(x: RingElement, automorphisms: Sequence[Automorphism]) -> DBoundReport:
    """|N(x - γx)| <= 2^m N(x^2) for x with every conjugate of modulus > 1."""
    ring = x.ring
    if not ring.is_totally_real:
        raise PreconditionFailed("field is not totally real")
    if not automorphisms:
        raise MissingAutomorphisms("register the automorphisms of the Galois field first")
    if any(s <= 0 for s in abs_compare(x, 1)):
        raise PreconditionFailed("some conjugate has modulus at most 1")
    m = ring.degree
    rhs = 2 ** m * abs((x * x).norm())
    return DBoundReport(tuple(abs((x - g(x)).norm()) for g in automorphisms), rhs)


# certificates

VARIANTS = ("finite", "totally_real", "quadratic")


@dataclass(frozen=True)
class CaptureCertificate:
    variant: str
    alpha: RingElement
    b: RingElement
    ideal_I: IntegralIdeal
    extras: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise PreconditionFailed(f"unknown variant {self.variant}")


def _big_ideal(cert: CaptureCertificate, ext: Extension) -> IntegralIdeal:
    if cert.ideal_I.ring != ext.sub:
        raise CertificateInvalid("ideal", "ideal must live in the subring")
    if cert.ideal_I.is_zero:
        raise CertificateInvalid("ideal", "ideal is zero")
    return extend(cert.ideal_I, ext.inclusion)


def _check_congruence(cert: CaptureCertificate, ext: Extension, big_ideal: IntegralIdeal):
    if cert.b.ring != ext.sub:
        raise CertificateInvalid("congruence", "b must live in the subring")
    if not big_ideal.contains(cert.alpha - ext.inclusion(cert.b)):
        raise CertificateInvalid("congruence", "alpha is not congruent to b")


def _in_subring(alpha: RingElement, ext: Extension) -> RingElement:
    pre = ext.inclusion.preimage(alpha)
    if pre is None:
        raise NotInSubring(f"{alpha} passed every check but is outside the subring")
    return pre


def _galois_m(ext: Extension) -> int:
    return ext.galois_degree or ext.big.degree


def capture_finite(cert: CaptureCertificate, ext: Extension) -> RingElement:
    if cert.variant != "finite":
        raise CertificateInvalid("variant", "expected a finite certificate")
    m = cert.extras.get("m")
    if m != _galois_m(ext):
        raise CertificateInvalid("m", f"m must be the Galois degree {_galois_m(ext)}")
    alpha = cert.alpha
    dval = d_of(m, alpha)
    if dval.is_zero():
        return _in_subring(alpha, ext)
    big = _big_ideal(cert, ext)
    if not big.subset(principal(ext.big, dval)):
        raise CertificateInvalid("ideal_containment", "I·O_L is not inside D(m, α)·O_L")
    _check_congruence(cert, ext, big)
    return _in_subring(alpha, ext)


def capture_totally_real(cert: CaptureCertificate, ext: Extension) -> RingElement:
    if cert.variant != "totally_real":
        raise CertificateInvalid("variant", "expected a totally real certificate")
    cm = not ext.big.is_totally_real
    if cm and not _is_cm_over_sub(ext):
        raise CertificateInvalid("totally_real", "big ring is neither totally real nor CM over the subring")
    u = cert.extras.get("u")
    alpha = cert.alpha
    if u is None or len(u) != 4:
        raise CertificateInvalid("four_squares", "need four elements u1..u4")
    if alpha != sum((x * x for x in u), ext.big.one()):
        raise CertificateInvalid("four_squares", "alpha != 1 + u1^2 + ... + u4^2")
    big = _big_ideal(cert, ext)
    t = alpha * 2 + 1
    if not big.subset(principal(ext.big, t * t)):
        raise CertificateInvalid("ideal_containment", "I·O_L is not inside (2α+1)^2·O_L")
    _check_congruence(cert, ext, big)
    if cm:
        # α - σα lies in I·O_F; a norm below N(I·O_F) forces it to vanish
        gap = alpha - ext.sigma(alpha)
        if not gap.is_zero() and abs(gap.norm()) >= big.norm():
            raise CertificateInvalid("norm_gap", "|N(α - σα)| is not below N(I·O_F)")
    return _in_subring(alpha, ext)


def _is_cm_over_sub(ext: Extension) -> bool:
    """Totally complex big ring, totally real subring of half degree fixed by σ."""
    big, sub = ext.big, ext.sub
    if ext.sigma is None or big.signature[0] != 0 or not sub.is_totally_real:
        return False
    return 2 * sub.degree == big.degree and ext.sigma(ext.inclusion.image) == ext.inclusion.image


# four squares

@dataclass(frozen=True)
class FourSquaresCert:
    x: RingElement
    z: RingElement
    ys: tuple[RingElement, RingElement, RingElement, RingElement]
    y5: RingElement

    def verify(self) -> bool:
        if self.y5.is_zero():
            return False
        lhs = self.y5 * self.y5 * (self.x - self.z)
        return lhs == sum((y * y for y in self.ys), self.x.ring.zero())


def _int_four_squares(n: int) -> tuple[int, int, int, int] | None:
    if n < 0:
        return None
    for a in range(math.isqrt(n), -1, -1):
        ra = n - a * a
        if 3 * a * a < ra:
            break
        for b in range(min(a, math.isqrt(ra)), -1, -1):
            rb = ra - b * b
            if 2 * b * b < rb:
                break
            for c in range(min(b, math.isqrt(rb)), -1, -1):
                rc = rb - c * c
                if c * c < rc:
                    break
                d = math.isqrt(rc)
                if d * d == rc:
                    return (a, b, c, d)
    return None


def _square_candidates(t: RingElement) -> list[RingElement]:
    ring = t.ring
    bound = _coordinate_bound(ring, math.sqrt(max_abs_upper(t)))
    if not ring.is_totally_real:
        bound = min(bound, 6)
    seen = {}
    for coords in iproduct(range(-bound, bound + 1), repeat=ring.degree):
        y = ring.element(coords)
        key = max(coords, (tuple(-c for c in coords)))
        if key in seen:
            continue
        if ring.is_totally_real and not y.is_zero() and any(s < 0 for s in real_signs(t - y * y)):
            continue
        seen[key] = y
    return list(seen.values())


def _mitm_four_squares(t: RingElement) -> tuple[RingElement, ...] | None:
    cands = _square_candidates(t)
    squares = [(y, y * y) for y in cands]
    pairs: dict[tuple, tuple[RingElement, RingElement]] = {}
    for i, (y1, s1) in enumerate(squares):
        for y2, s2 in squares[i:]:
            pairs.setdefault((s1 + s2).coords, (y1, y2))
    for key in sorted(pairs):
        rest = t - t.ring.element(key)
        hit = pairs.get(rest.coords)
        if hit is not None:
            return pairs[key] + hit
    return None


def _sqrt_minus_one(ring: NumberRing) -> RingElement | None:
    for coords in iproduct((-1, 0, 1), repeat=ring.degree):
        y = ring.element(coords)
        if y * y == ring.element(-1):
            return y
    return None


def four_squares(t: RingElement) -> tuple[RingElement, ...] | None:
    """t = y1^2 + ... + y4^2 exactly, or None when the bounded search fails."""
    ring = t.ring
    if all(c == 0 for c in t.coords[1:]):
        n = t.coords[0]
        scale = ring.one()
        if n < 0:
            scale = _sqrt_minus_one(ring)
            if scale is None:
                return None
        found = _int_four_squares(abs(n))
        return tuple(scale * v for v in found) if found else None
    return _mitm_four_squares(t)


def _multipliers(ring: NumberRing, bound: int) -> Iterable[RingElement]:
    if ring.degree == 1:
        for k in range(1, bound + 1):
            yield ring.element(k)
        return
    seen = set()
    elems = []
    for coords in iproduct(range(-bound, bound + 1), repeat=ring.degree):
        if not any(coords):
            continue
        key = max(coords, tuple(-c for c in coords))
        if key in seen:
            continue
        seen.add(key)
        elems.append(key)
    elems.sort(key=lambda c: (sum(abs(x) for x in c), [-x for x in c]))
    for c in elems:
        yield ring.element(c)


def four_squares_cert(x: RingElement, z: RingElement, bound: int = FOUR_SQUARES_BOUND) -> FourSquaresCert:
    ring = x.ring
    diff = x - z
    if ring.signature[0] and any(s <= 0 for s in real_signs(diff)):
        raise PreconditionFailed("x - z is not positive at every real embedding")
    if ring.degree == 1 and diff.coords[0] <= 0:
        raise PreconditionFailed("x - z is not positive")
    tried = 0
    for y5 in _multipliers(ring, bound):
        tried += 1
        ys = four_squares(diff * y5 * y5)
        if ys:
            cert = FourSquaresCert(x, z, ys, y5)
            if not cert.verify():
                raise AssertionError("four-squares identity failed")
            return cert
        if tried >= bound * ring.degree * 4:
            break
    raise SearchExhausted(f"no four-squares certificate within bound {bound}")


# quadratic extensions of totally real rings

@dataclass(frozen=True)
class QuadBoundReport:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def _to_big_field(w, ext: Extension) -> FieldElement:
    if isinstance(w, int):
        return FieldElement.of(ext.big, w)
    if w.ring == ext.big:
        return w if isinstance(w, FieldElement) else w.to_field()
    if w.ring == ext.sub:
        return ext.inclusion(w if isinstance(w, FieldElement) else w.to_field())
    raise PreconditionFailed("element lives in neither ring of the extension")


def _abs_at_least_one(w: FieldElement) -> bool:
    """|τ(w)| >= 1 at every non-real embedding, with equality handled exactly."""
    r1 = w.ring.signature[0]
    signs = abs_compare(w, 1) if not (w * w - 1).is_zero() else None
    if signs is None:
        return True
    return all(s > 0 for s in signs[r1:])


def embedding_conditions(x, w: FieldElement) -> bool:
    """1 < σ(x) < σ(w) at real embeddings and |τ(w)| >= 1 at complex ones."""
    xf = x if isinstance(x, FieldElement) else x.to_field()
    if xf.ring.signature[0]:
        if any(s <= 0 for s in real_signs(xf - 1)) or any(s <= 0 for s in real_signs(w - xf)):
            return False
    if xf.ring.signature[1] and not _abs_at_least_one(w):
        return False
    return True


def quad_ext_norm_bound(x: RingElement, w, ext: Extension) -> QuadBoundReport:
    if ext.sigma is None:
        raise PreconditionFailed("extension has no registered involution")
    wf = _to_big_field(w, ext)
    if ext.inclusion.preimage_field(wf) is None:
        raise ConditionsNotCertified("w", "w is not in the subfield")
    if not embedding_conditions(x, wf):
        raise ConditionsNotCertified("embedding", "1 < σ(x) < σ(w) or |τ(w)| >= 1 fails")
    dy1 = (x.to_field() - ext.sigma(x).to_field()) / 2
    lhs = abs(dy1.norm())
    rhs = abs((x.to_field() * wf).norm())
    return QuadBoundReport(lhs, rhs)


def _field(v, ring: NumberRing | None) -> FieldElement:
    if isinstance(v, FieldElement):
        return v
    if isinstance(v, RingElement):
        return v.to_field()
    if ring is None:
        raise PreconditionFailed("integers in Ω need a ring")
    return FieldElement.of(ring, v)


def big_w(u: FieldElement, v: FieldElement) -> tuple[FieldElement, FieldElement]:
    """((1/(u-v))^2 + 1)(u^2 + 1) as (numerator, (u-v)^2)."""
    den = (u - v) * (u - v)
    return (den + 1) * (u * u + 1), den


def _exceeds(w: FieldElement, n) -> bool:
    ring = w.ring
    if ring.degree == 1:
        return w.coords[0] > n
    return all(s > 0 for s in real_signs(w - n))


def find_big_w(omega: Iterable, n, ring: NumberRing | None = None, limit: int = 10_000):
    """Scan pairs u != v from Ω until w exceeds n at every real embedding."""
    seen: list[FieldElement] = []
    for k, raw in enumerate(omega):
        if k >= limit:
            break
        val = _field(raw, ring)
        if any(val == s for s in seen):
            continue
        for prev in seen:
            for u, v in ((prev, val), (val, prev)):
                num, den = big_w(u, v)
                if _exceeds(num / den, n):
                    return u, v, (num, den)
        seen.append(val)
    raise SequenceExhausted("Ω ran out before w exceeded the target")


def pair_ratio(pair: BPair) -> FieldElement:
    return pair.ratio()


def check_b_pairs(pairs: Sequence[BPair], torus: GroupInstance, ext: Extension, n: int = 3) -> list[FieldElement]:
    """Provenance of u and v: coordinates of torus points over the big ring in the
    kernel modulo n, with nonzero denominator coordinate."""
    big = base_change(torus, ext.inclusion)
    ideal = principal(ext.big, ext.big.element(n))
    out = []
    for pair in pairs:
        p = pair.point
        if p.instance != big:
            raise CertificateInvalid("b_pairs", "pair point is not on the torus over the big ring")
        if not _on_variety(big, p.coords) or not p.coords[-1].is_unit():
            raise CertificateInvalid("b_pairs", "pair point is not an integral torus point")
        if not in_congruence_kernel(p, ideal):
            raise CertificateInvalid("b_pairs", f"pair point is not in the kernel mod {n}")
        if pair.b.is_zero():
            raise CertificateInvalid("b_pairs", "pair has zero denominator")
        r = pair.ratio()
        if ext.inclusion.preimage_field(r) is None:
            raise StabilityViolation("kernel point ratio left the subfield")
        out.append(r)
    return out


def capture_quadratic(cert: CaptureCertificate, ext: Extension, torus: GroupInstance) -> RingElement:
    if cert.variant != "quadratic":
        raise CertificateInvalid("variant", "expected a quadratic certificate")
    ex = cert.extras
    alpha = cert.alpha
    pairs = ex.get("pairs")
    if not pairs or len(pairs) != 2:
        raise CertificateInvalid("b_pairs", "need two B-pairs")
    u, v = check_b_pairs(pairs, torus, ext)
    if u == v:
        raise CertificateInvalid("u_ne_v", "u and v coincide")
    x1, x2 = ex.get("X1"), ex.get("X2")
    if x2 is None or x2.is_zero():
        raise CertificateInvalid("x2_nonzero", "X2 is zero")
    num, den = big_w(u, v)
    if x1.to_field() * den != x2.to_field() * num:
        raise CertificateInvalid("x1_relation", "X1 != X2·w(u, v)")
    w = x1.to_field() / x2.to_field()
    if not embedding_conditions(alpha, w):
        raise CertificateInvalid("embedding", "embedding inequalities fail")
    if alpha.is_zero():
        raise CertificateInvalid("ideal_containment", "alpha is zero")
    big = _big_ideal(cert, ext)
    if not big.subset(principal(ext.big, x1 * alpha * 2)):
        raise CertificateInvalid("ideal_containment", "I·O_F is not inside 2·X1·α·O_F")
    _check_congruence(cert, ext, big)
    return _in_subring(alpha, ext)


def capture(cert: CaptureCertificate, ext: Extension, torus: GroupInstance | None = None) -> RingElement:
    if cert.variant == "finite":
        return capture_finite(cert, ext)
    if cert.variant == "totally_real":
        return capture_totally_real(cert, ext)
    if torus is None:
        raise PreconditionFailed("quadratic capture needs the torus instance")
    return capture_quadratic(cert, ext, torus)


# certificate search

def congruent_subring_element(alpha: RingElement, big_ideal: IntegralIdeal, inc: Inclusion) -> RingElement | None:
    """Some b of the subring with α ≡ b mod the ideal, found exactly by lattice solving."""
    rows = inc.lattice() + [list(r) for r in big_ideal.hnf]
    sol = solve_integral(rows, list(alpha.coords), inc.sup.degree)
    if sol is None:
        return None
    k = inc.sub.degree
    b = inc.sub.element(tuple(sol[:k]))
    return b


def largest_subring_ideal(target: IntegralIdeal, ext: Extension) -> IntegralIdeal:
    """The largest ideal I of the subring with I·O ⊆ target."""
    from .numfield import contract
    return contract(target, ext.inclusion)


def search_finite_certificate(alpha: RingElement, ext: Extension) -> CaptureCertificate | None:
    """Best possible finite certificate: the largest admissible I, then an exact b search."""
    m = _galois_m(ext)
    dval = d_of(m, alpha)
    if dval.is_zero():
        return None
    ideal = largest_subring_ideal(principal(ext.big, dval), ext)
    b = congruent_subring_element(alpha, extend(ideal, ext.inclusion), ext.inclusion)
    if b is None:
        return None
    return CaptureCertificate("finite", alpha, b, ideal, {"m": m})


def _subring_congruence(alpha: RingElement, target: IntegralIdeal, ext: Extension):
    ideal = largest_subring_ideal(target, ext)
    b = congruent_subring_element(alpha, extend(ideal, ext.inclusion), ext.inclusion)
    return ideal, b


def search_totally_real_certificate(alpha: RingElement, ext: Extension) -> CaptureCertificate | None:
    t = alpha * 2 + 1
    ideal, b = _subring_congruence(alpha, principal(ext.big, t * t), ext)
    if b is None:
        return None
    u = four_squares(alpha - 1)
    if u is None:
        return None
    return CaptureCertificate("totally_real", alpha, b, ideal, {"u": u})


def quadratic_extras(alpha: RingElement, ext: Extension, torus: GroupInstance) -> dict:
    """X1, X2 and the two B-pairs: w from sampled kernel ratios, large enough
    to exceed alpha at every real embedding."""
    from .groups import b_set_sample
    pairs = b_set_sample(torus, ext, 3, count=2)
    by_ratio: dict = {}
    omega = []
    for pr in pairs:
        r = ext.inclusion.preimage_field(pr.ratio())
        if r.coords not in by_ratio:
            by_ratio[r.coords] = pr
            omega.append(r)
    n = int(max_abs_upper(alpha)) + 1 if ext.big.signature[0] else 0
    u, v, (num, den) = find_big_w(omega, n)
    wl = num / den
    x2 = math.lcm(*[q.denominator for q in wl.coords])
    x1 = ext.inclusion((wl * x2).to_ring())
    return {"X1": x1, "X2": ext.big.element(x2), "pairs": (by_ratio[u.coords], by_ratio[v.coords])}


def search_quadratic_certificate(alpha: RingElement, ext: Extension, torus: GroupInstance,
                                 extras: dict | None = None) -> CaptureCertificate | None:
    if alpha.is_zero():
        return None
    ex = extras if extras is not None else quadratic_extras(alpha, ext, torus)
    ideal, b = _subring_congruence(alpha, principal(ext.big, ex["X1"] * alpha * 2), ext)
    if b is None:
        return None
    return CaptureCertificate("quadratic", alpha, b, ideal, dict(ex))


def search_certificate(variant: str, alpha: RingElement, ext: Extension,
                       torus: GroupInstance | None = None) -> CaptureCertificate | None:
    if variant == "finite":
        return search_finite_certificate(alpha, ext)
    if variant == "totally_real":
        return search_totally_real_certificate(alpha, ext)
    if torus is None:
        raise PreconditionFailed("quadratic search needs the torus instance")
    return search_quadratic_certificate(alpha, ext, torus)
