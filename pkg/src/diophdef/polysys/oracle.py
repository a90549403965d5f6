"""Exhaustive box enumeration: the reference oracle for every derived test.

Free variables range over ring elements whose power-basis coordinates lie in
[-R, R], in lexicographic order of (variable, coordinates). Polynomials are
checked as soon as all of their free variables are assigned; this only skips
branches that cannot yield solutions, so the output equals that of the plain
sequential scan.
"""
from __future__ import annotations

import os
from itertools import product
from typing import Mapping, Sequence

import numpy as np
import sympy

from ..errors import BoxTooLarge
from ..numfield import NumberRing, RingElement
from .poly import Poly
from .system import PolySystem

DEFAULT_NODE_CAP = int(os.environ.get("DIOPHDEF_NODE_CAP", str(5_000_000)))


def box_elements(ring: NumberRing, radius: int) -> list[RingElement]:
    rng = range(-radius, radius + 1)
    return [RingElement(ring, c) for c in product(rng, repeat=ring.degree)]


def brute_force_solutions(system: PolySystem, box: int, fixed: Mapping[str, RingElement] | None = None,
                          node_cap: int | None = None, limit: int | None = None) -> list[dict]:
    fixed = {k: system.ring.element(v) for k, v in (fixed or {}).items()}
    cap = DEFAULT_NODE_CAP if node_cap is None else node_cap
    free = [i for i, v in enumerate(system.variables) if v.name not in fixed]
    fixed_idx = {system.index(k): v for k, v in fixed.items()}
    polys = [p.substitute(fixed_idx) for p in system.polys]
    level_of = {i: k for k, i in enumerate(free)}
    ready: list[list[Poly]] = [[] for _ in free]
    for p in polys:
        vs = p.variables()
        if not vs:
            if not p.is_zero():
                return []
            continue
        ready[max(level_of[i] for i in vs)].append(p)
    elems = box_elements(system.ring, box)
    values = [system.ring.zero()] * len(system.variables)
    for i, v in fixed_idx.items():
        values[i] = v
    out: list[dict] = []
    nodes = 0

    def rec(k: int) -> bool:
        nonlocal nodes
        if k == len(free):
            out.append({system.variables[i].name: values[i] for i in range(len(values))})
            return limit is not None and len(out) >= limit
        idx = free[k]
        for e in elems:
            nodes += 1
            if nodes > cap:
                raise BoxTooLarge(f"search exceeded the node cap {cap}")
            values[idx] = e
            if all(p.evaluate(values).is_zero() for p in ready[k]):
                if rec(k + 1):
                    return True
        return False

    if free:
        rec(0)
    else:
        out.append({system.variables[i].name: values[i] for i in range(len(values))})
    return out


def t_image(system: PolySystem, t: str, box: int, **kw) -> set[RingElement]:
    return {sol[t] for sol in brute_force_solutions(system, box, **kw)}


# vectorized zero sets, used where the plain scan is too slow

def _split_primes(ring: NumberRing, count: int = 3, start: int = 2 ** 31 - 1) -> list[tuple[int, int]]:
    """Primes p < 2^31 with a root r of the minimal polynomial mod p."""
    t = sympy.Symbol("t")
    out = []
    p = start
    while len(out) < count:
        p = sympy.prevprime(p)
        f = sympy.Poly(list(reversed(ring.minpoly)), t, modulus=p)
        _, facs = f.factor_list()
        for g, _ in facs:
            if g.degree() == 1:
                a, b = [int(c) % p for c in g.all_coeffs()]
                out.append((p, (-b * pow(a, -1, p)) % p))
                break
    return out


def grid_zero_sets(polys: Sequence[Poly], ring: NumberRing, nvars: int, radius: int) -> list[set[tuple]]:
    """For each polynomial, the set of box points (tuples of coordinate tuples)
    where it vanishes. Candidates are found modulo split primes with numpy and
    then confirmed by exact evaluation."""
    coords = list(product(range(-radius, radius + 1), repeat=ring.degree))
    m = len(coords)
    shape_of = lambda i: tuple(m if j == i else 1 for j in range(nvars))
    primes = _split_primes(ring)
    results = []
    for poly in polys:
        mask = np.ones((m,) * nvars, dtype=bool)
        for p, r in primes:
            rp = [pow(r, k, p) for k in range(ring.degree)]
            base = [np.array([sum(c * w for c, w in zip(cc, rp)) % p for cc in coords], dtype=np.int64).reshape(shape_of(i))
                    for i in range(nvars)]
            maxdeg = poly.degree()
            pw = []
            for i in range(nvars):
                row = [np.ones(shape_of(i), dtype=np.int64)]
                for _ in range(maxdeg):
                    row.append((row[-1] * base[i]) % p)
                pw.append(row)
            acc = np.zeros((m,) * nvars, dtype=np.int64)
            for e, c in poly.terms:
                cv = sum(ci * w for ci, w in zip(c.coords, rp)) % p
                term = np.full((1,) * nvars, cv, dtype=np.int64)
                for i, k in enumerate(e):
                    if k:
                        term = (term * pw[i][k]) % p
                acc = (acc + term) % p
            mask &= np.broadcast_to(acc == 0, mask.shape)
        zeros = set()
        for idx in zip(*np.nonzero(mask)):
            pt = tuple(coords[j] for j in idx)
            vals = [RingElement(ring, c) for c in pt]
            if poly.evaluate(vals).is_zero():
                zeros.add(pt)
        results.append(zeros)
    return results
