"""Factorization and unit computations: prime ideals via Dedekind-Kummer,
quadratic ideal factorization, and fundamental units of real quadratic rings."""
from __future__ import annotations

import math
from dataclasses import dataclass

import sympy

from ..errors import NormTooLargeToFactor, NotRealQuadratic, ZeroIdeal, RingMismatch
from .ideal import IntegralIdeal, from_generators, unit_ideal
from .ring import NumberRing, RingElement

FACTOR_BOUND = 10 ** 8
_T = sympy.Symbol("t")


def trial_factor(n: int, bound: int = FACTOR_BOUND) -> dict[int, int]:
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    if n > bound:
        raise NormTooLargeToFactor(f"norm with {len(str(n))} digits exceeds the factoring bound {bound}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class PrimeIdeal:
    ideal: IntegralIdeal
    p: int
    residue_degree: int
    ramification: int
    kind: str  # split | inert | ramified (quadratic) or "degree f, e" otherwise

    @property
    def norm(self) -> int:
        return self.p ** self.residue_degree


def primes_above(ring: NumberRing, p: int) -> list[PrimeIdeal]:
    """Dedekind-Kummer: valid because Z[θ] is the maximal order."""
    d = ring.degree
    if d == 1:
        return [PrimeIdeal(from_generators(ring, [p]), p, 1, 1, "split")]
    fp = sympy.Poly(list(reversed(ring.minpoly)), _T, modulus=p)
    _, facs = fp.factor_list()
    out = []
    for g, e in sorted(facs, key=lambda fe: [int(c) % p for c in fe[0].all_coeffs()]):
        coeffs = [int(c) % p for c in reversed(g.all_coeffs())]
        gx = ring.element(tuple(coeffs + [0] * (d - len(coeffs)))) if len(coeffs) <= d else None
        if gx is None:
            # g has degree d: f irreducible mod p, prime is (p)
            ideal = from_generators(ring, [p])
        else:
            ideal = from_generators(ring, [p, gx])
        f = g.degree()
        out.append(PrimeIdeal(ideal, p, f, e, _kind(d, len(facs), f, e)))
    return out


def _kind(d: int, count: int, f: int, e: int) -> str:
    if d == 2:
        if e == 2:
            return "ramified"
        return "inert" if f == 2 else "split"
    return f"f={f},e={e}"


def valuation(ideal: IntegralIdeal, prime: PrimeIdeal) -> int:
    if ideal.is_zero:
        raise ZeroIdeal("valuation of the zero ideal")
    v = 0
    power = prime.ideal
    while ideal.subset(power):
        v += 1
        power = power * prime.ideal
    return v


def factor_ideal(ideal: IntegralIdeal, bound: int = FACTOR_BOUND) -> list[tuple[PrimeIdeal, int]]:
    if ideal.is_zero:
        raise ZeroIdeal("cannot factor the zero ideal")
    n = ideal.norm()
    if n > FACTOR_BOUND and n <= bound:
        primes = {int(q): e for q, e in sympy.factorint(n).items()}
    else:
        primes = trial_factor(n, bound)
    out = []
    for p in sorted(primes):
        for pr in primes_above(ideal.ring, p):
            v = valuation(ideal, pr)
            if v:
                out.append((pr, v))
    check = unit_ideal(ideal.ring)
    for pr, v in out:
        check = check * (pr.ideal ** v)
    if check != ideal:
        raise AssertionError("factorization does not multiply back")
    return out


def factor_ideal_quadratic(ideal: IntegralIdeal, bound: int = FACTOR_BOUND) -> list[tuple[PrimeIdeal, int]]:
    if ideal.ring.degree != 2:
        raise RingMismatch("factor_ideal_quadratic needs a quadratic ring")
    return factor_ideal(ideal, bound)


def unit_group_order(ideal: IntegralIdeal) -> int:
    """|(O/I)^×| from the prime factorization of I."""
    order = 1
    for pr, v in factor_ideal(ideal, bound=10 ** 40):
        q = pr.norm
        order *= (q - 1) * q ** (v - 1)
    return order


# real quadratic units

def _floor_quad(P: int, Q: int, D: int) -> int:
    """floor((P + √D)/Q) for non-square D."""
    s = math.isqrt(D)
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // (-Q)) - 1


def fundamental_unit_real_quadratic(ring: NumberRing) -> RingElement:
    """Fundamental unit of Z[θ] from the period of the continued fraction of θ."""
    if ring.degree != 2 or ring.signature != (2, 0):
        raise NotRealQuadratic("ring is not real quadratic")
    c, b, _ = ring.minpoly  # θ² + bθ + c = 0
    D = b * b - 4 * c
    # θ = (-b + √D)/2 is the larger root; the first real embedding
    P, Q = -b, 2
    seen: dict[tuple[int, int], int] = {}
    states = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(states)
        states.append((P, Q))
        a = _floor_quad(P, Q, D)
        P = a * Q - P
        Q = (D - P * P) // Q
    period = states[seen[(P, Q)]:]
    # multiply the complete quotients (P + √D)/Q over one period, in Q(√D)
    num_r, num_s, den = 1, 0, 1  # (num_r + num_s √D) / den
    for P_k, Q_k in period:
        num_r, num_s = num_r * P_k + num_s * D, num_r + num_s * P_k
        den *= Q_k
    g = math.gcd(math.gcd(num_r, num_s), den)
    num_r, num_s, den = num_r // g, num_s // g, den // g
    # √D = 2θ + b
    # (r + s(2θ + b)) / den
    x0, x1 = num_r + num_s * b, 2 * num_s
    if x0 % den or x1 % den:
        raise AssertionError("period product is not integral")
    u = ring.element((x0 // den, x1 // den))
    if abs(u.norm()) != 1:
        raise AssertionError("period product is not a unit")
    return u
