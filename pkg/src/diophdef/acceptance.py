"""The acceptance suite: ten seeded checks with exact oracles and time limits.

Every check takes (rng, scale) and returns (passed, detail). `scale` is 1.0 for
the full suite and smaller for the quick self-test, which shrinks sample counts
but never the tolerances.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import jsonio
from .bounds import (CaptureCertificate, c_of_m, capture, d_of, four_squares_cert, largest_subring_ideal,
                     quadratic_extras, search_certificate)
from .capture import (construct_witness_for_natural, emit_definition, problem_from_fixture, verify_emitted_solution,
                      witness_assignment)
from .errors import DiophError, IdentityPoint, NotInSubring, ResidualNonzero
from .fixtures import ZI, ZSQRT2, ZZETA8, extension, group
from .groups import (compose, gm, gm_point, in_congruence_kernel, norm_one_generators, norm_one_torus, power,
                     torus_point, torus_rank, vanishing_data)
from .numfield import ZZ, NumberRing, RingElement, integers_into, principal
from .numfield.units import free_unit_generators
from .polysys import (Builder, DiophDefinition, Poly, PolySystem, Var, brute_force_solutions, combine_to_single,
                      find_rootless_quadratic, grid_zero_sets, nonzero_gadget, t_image, transport, witness_nonzero)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} [{self.number:2d}] {self.title} ({self.seconds:.2f}s / {self.limit:g}s): {self.detail}"


def _count(n: int, scale: float) -> int:
    return max(1, int(round(n * scale)))


def _elem(rng: random.Random, ring: NumberRing, r: int) -> RingElement:
    return ring.element(tuple(rng.randint(-r, r) for _ in range(ring.degree)))


# 1

def check_c_of_m(rng, scale):
    got = (c_of_m(1), c_of_m(2))
    return got == (8, 45), f"C(1), C(2) = {got}"


# 2

def _random_poly(rng, ring, nvars, point=None) -> Poly:
    terms: dict = {}
    monos = [e for e in _monomials(nvars, 2)]
    for e in rng.sample(monos, rng.randint(1, min(4, len(monos)))):
        terms[e] = _elem(rng, ring, 3)
    p = Poly(ring, nvars, terms)
    if point is not None:
        # plant a common zero: shift the constant term
        p = p - Poly.const(ring, p.evaluate(point), nvars)
    return p


def _monomials(nvars: int, deg: int):
    out = []

    def rec(prefix, left):
        if len(prefix) == nvars:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k)

    rec([], deg)
    return out


def check_combiner(rng, scale):
    mismatches = 0
    total = _count(100, scale)
    planted = 0
    for k in range(total):
        ring = ZZ if k % 2 == 0 else ZSQRT2
        nvars = rng.randint(1, 3 if ring.degree == 1 else 2) if k % 10 else rng.randint(1, 3)
        neq = rng.randint(1, 3)
        point = None
        if rng.random() < 0.5:
            point = [_elem(rng, ring, 5) for _ in range(nvars)]
            planted += 1
        polys = tuple(_random_poly(rng, ring, nvars, point) for _ in range(neq))
        system = PolySystem(ring, tuple(Var(f"x{i}") for i in range(nvars)), polys)
        single = combine_to_single(system, find_rootless_quadratic(ring))
        sets = grid_zero_sets(list(polys) + [single.polys[0]], ring, nvars, 5)
        common = set.intersection(*sets[:-1])
        if common != sets[-1]:
            mismatches += 1
    return mismatches == 0, f"{total} systems ({planted} with a planted zero), {mismatches} mismatches"


# 3

def check_nonzero_gadget(rng, scale):
    bound = _count(10 ** 4, scale)
    checked = failures = 0
    for ring in (ZZ, ZI):
        sysm = nonzero_gadget(ring)
        if ring.degree == 1:
            xs = [ring.element(v) for v in range(-bound, bound + 1) if v]
        else:
            r = int(bound ** 0.5) + 1
            xs = [ring.element((a, b)) for a in range(-r, r + 1) for b in range(-r, r + 1)
                  if 0 < a * a + b * b <= bound]
        for x in xs:
            y, z, w = witness_nonzero(x)
            checked += 1
            if not sysm.is_satisfied({"x": x, "y": y, "z": z, "w": w}):
                failures += 1
        if brute_force_solutions(sysm, 3, fixed={"x": ring.zero()}):
            failures += 1
    return failures == 0, f"{checked} witnesses verified, zero has no box solution: {failures == 0}"


# 4

def check_partial_calculus(rng, scale):
    g = gm(ZSQRT2)
    eps = ZSQRT2.element((1, 1))
    n = _count(1000, scale)
    bad = []
    # worked identity
    p = gm_point(g, eps * eps)
    d = vanishing_data(p).partial[0]
    p2 = power(g, p, 2)
    lhs = ZSQRT2.element((17, 12)) - 1 - d * 2
    if d != ZSQRT2.element((2, 2)) or lhs != d * d or p2.arith != ZSQRT2.element((17, 12)):
        bad.append("worked identity")
    done = 0
    while done < n:
        sp, kp = rng.choice((1, -1)), rng.randint(-6, 6)
        sq, kq = rng.choice((1, -1)), rng.randint(-6, 6)
        if (sp, kp) == (1, 0) or (sq, kq) == (1, 0):
            continue
        P = gm_point(g, eps ** kp * sp if kp >= 0 else (eps.inverse() ** -kp) * sp)
        Q = gm_point(g, eps ** kq * sq if kq >= 0 else (eps.inverse() ** -kq) * sq)
        R = compose(g, P, Q)
        vp, vq = vanishing_data(P), vanishing_data(Q)
        if vp.c != vp.z * vp.z:
            bad.append("c_P != z_P^2")
        try:
            vr = vanishing_data(R)
            s = (vp.z + vq.z) ** 2
            if not s.contains(vr.partial[0] - vp.partial[0] - vq.partial[0]):
                bad.append("additivity")
        except IdentityPoint:
            pass
        acc = P
        for nu in range(1, 21):
            if nu > 1:
                acc = compose(g, acc, P)
            pa = acc.coords[0] if acc.is_identity() else vanishing_data(acc).partial[0]
            if not vp.c.contains(pa - vp.partial[0] * nu):
                bad.append(f"power law nu={nu}")
            if not vp.z.contains(acc.coords[0]) or not (vp.z * nu + vp.c).contains(acc.coords[0]):
                bad.append(f"z containment nu={nu}")
        done += 1
    return not bad, f"{n} points x 20 powers, worked identity checked; failures: {bad[:3] or 'none'}"


# 5

def check_cm_descent(rng, scale):
    ext = extension("cm-sqrt2")
    eps = free_unit_generators(ZZETA8)[0]
    zeta = ZZETA8.theta()
    three = principal(ZZETA8, ZZETA8.element(3))
    hits = exceptions = 0
    for j in range(8):
        for k in range(-12, 13):
            u = zeta ** j * (eps ** k if k >= 0 else eps.inverse() ** -k)
            if three.contains(u - 1):
                hits += 1
                if ext.inclusion.preimage(u * u) is None:
                    exceptions += 1
    return exceptions == 0 and hits > 1, f"{hits} units ≡ 1 mod 3, {exceptions} exceptions"


# 6

def check_torus_rank(rng, scale):
    fx = group("torus-triple")
    t = fx.group
    gens = norm_one_generators(t)
    notes = []
    ok = len(gens) == 1
    a, b = gens[0].arith
    if a * a - t.twist * b * b != ZZ.one():
        ok = False
        notes.append("norm != 1")
    if abs(a.coords[0]) <= 1:
        ok = False
        notes.append("finite order")
    # (1+√2)/(1-√2) = -(3+2√2)
    if (a.coords[0], b.coords[0]) not in ((-3, -2), (-3, 2), (3, 2), (3, -2)):
        ok = False
        notes.append(f"generator {a}, {b}")
    rank = torus_rank(ZZ, t.twist)
    ok &= rank == 1
    # kernel elements over Z[i]: units of Z[zeta8] of relative norm 1 and ≡ 1 mod 3
    tz = norm_one_torus(ZI, 2)
    zeta = ZZETA8.theta()
    eps = free_unit_generators(ZZETA8)[0]
    sqrt2 = ZZETA8.element((0, 1, 0, -1))
    sampled = outside = 0
    for j in range(8):
        for k in range(-6, 7):
            u = zeta ** j * (eps ** k if k >= 0 else eps.inverse() ** -k)
            conj = _neg_zeta(u)
            a8 = (u + conj).to_field() / 2
            b8 = (u - conj).to_field() / (sqrt2.to_field() * 2)
            if not (a8.is_integral_coords() and b8.is_integral_coords()):
                continue
            ai, bi = _to_zi(a8.to_ring()), _to_zi(b8.to_ring())
            if ai is None or bi is None or ai * ai - bi * bi * 2 != ZI.one():
                continue
            p = torus_point(tz, ai, bi)
            if not in_congruence_kernel(p, 3):
                continue
            sampled += 1
            if any(c.coords[1] for c in (ai, bi)):
                outside += 1
    ok &= sampled > 1 and outside == 0
    detail = f"generator ({a}, {b}), rank {rank}, {sampled} kernel points over Z[i], {outside} outside Z"
    return ok, detail + (f"; {', '.join(notes)}" if notes else "")


def _neg_zeta(u: RingElement) -> RingElement:
    # zeta -> -zeta fixes i = zeta^2 and negates sqrt2
    c = u.coords
    return ZZETA8.element((c[0], -c[1], c[2], -c[3]))


def _to_zi(x: RingElement):
    c = x.coords
    if c[1] or c[3]:
        return None
    return ZI.element((c[0], c[2]))


# 7

def _valid_certificate(rng, variant):
    if variant == "finite":
        ext = extension(rng.choice(("q-i", "q-sqrt2", "cm-sqrt2")))
        m = ext.galois_degree
        b0 = _elem(rng, ext.sub, 6 if ext.big.degree == 2 else 3)
        alpha = ext.inclusion(b0)
        dval = d_of(m, alpha)
        target = principal(ext.big, dval) if not dval.is_zero() else principal(ext.big, ext.big.one())
        extras = {"m": m}
        torus = None
    elif variant == "totally_real":
        ext = extension(rng.choice(("q-sqrt2", "cm-sqrt2")))
        us = [_elem(rng, ext.sub, 3) for _ in range(4)]
        b0 = sum((u * u for u in us), ext.sub.one())
        alpha = ext.inclusion(b0)
        t = alpha * 2 + 1
        target = principal(ext.big, t * t)
        extras = {"u": tuple(ext.inclusion(u) for u in us)}
        torus = None
    else:
        ext = extension("cm-sqrt2")
        torus = group("cm-sqrt2").torus
        b0 = _elem(rng, ext.sub, 8)
        if b0.is_zero():
            b0 = ext.sub.one()
        alpha = ext.inclusion(b0)
        extras = _quad_extras(ext, torus)
        target = principal(ext.big, extras["X1"] * alpha * 2)
    ideal = largest_subring_ideal(target, ext) * rng.randint(1, 3)
    basis = ideal.basis()
    b = b0 + sum((x * rng.randint(-2, 2) for x in basis), ext.sub.zero())
    return CaptureCertificate(variant, alpha, b, ideal, extras), ext, torus, b0


_QUAD_CACHE: dict = {}


def _quad_extras(ext, torus):
    if "x" not in _QUAD_CACHE:
        _QUAD_CACHE["x"] = quadratic_extras(ext.big.one(), ext, torus)
    return _QUAD_CACHE["x"]


def _external(rng, variant):
    while True:
        if variant == "finite":
            ext = extension(rng.choice(("q-i", "q-sqrt2", "cm-sqrt2")))
        elif variant == "totally_real":
            ext = extension(rng.choice(("q-sqrt2", "cm-sqrt2")))
        else:
            ext = extension("cm-sqrt2")
        alpha = _elem(rng, ext.big, 5)
        if ext.inclusion.preimage(alpha) is None:
            return alpha, ext


def check_capture(rng, scale):
    n_valid, n_ext = _count(10 ** 4, scale), _count(10 ** 3, scale)
    problems = []
    torus = group("cm-sqrt2").torus
    counts = {}
    for variant in ("finite", "totally_real", "quadratic"):
        for _ in range(n_valid):
            cert, ext, tor, b0 = _valid_certificate(rng, variant)
            try:
                got = capture(cert, ext, tor)
            except NotInSubring as e:
                problems.append(f"{variant}: {e}")
                continue
            if got != b0:
                problems.append(f"{variant}: extracted {got}, expected {b0}")
        found = 0
        for _ in range(n_ext):
            alpha, ext = _external(rng, variant)
            cert = search_certificate(variant, alpha, ext, torus if variant == "quadratic" else None)
            if cert is not None:
                found += 1
                try:
                    capture(cert, ext, torus)
                    problems.append(f"{variant}: external {alpha} captured")
                except NotInSubring:
                    problems.append(f"{variant}: external {alpha} reached extraction")
                except DiophError:
                    pass
        counts[variant] = found
    detail = f"{n_valid} valid + {n_ext} external per variant; external certificates found: {counts}"
    return not problems, detail + (f"; {problems[:3]}" if problems else "")


# 8

def check_four_squares(rng, scale):
    n = _count(25, scale)
    fails = 0
    for _ in range(n):
        z = rng.randint(-10 ** 6, 10 ** 6)
        x = z + rng.randint(1, 10 ** 6)
        cert = four_squares_cert(ZZ.element(x), ZZ.element(z))
        fails += not cert.verify()
    for _ in range(n):
        while True:
            b = rng.randint(-30, 30)
            a = rng.randint(1, 60)
            if a * a > 2 * b * b:
                break
        z = _elem(rng, ZSQRT2, 20)
        x = z + ZSQRT2.element((a, b))
        cert = four_squares_cert(x, z)
        fails += not cert.verify()
    return fails == 0, f"{2 * n} certificates, {fails} failures"


# 9

_TOY_DEFS = (
    ("squares", lambda t, s: t - s * s),
    ("units", lambda t, s: t * s - 1),
    ("multiples of 1+i", lambda t, s: t - s * ZI.element((1, 1))),
    ("s^2 + s", lambda t, s: t - s * s - s),
)


def _toy_definition(rng) -> DiophDefinition:
    name, fn = rng.choice(_TOY_DEFS)
    b = Builder(ZI)
    t = b.var("t", "fundamental")
    s = b.var("s", "auxiliary")
    b.eq(fn(t, s), name)
    return DiophDefinition(b.build(), "t", name)


def check_transport(rng, scale):
    n = _count(20, scale)
    box = 2
    inc = integers_into(ZI)
    mismatches = 0
    nonempty = 0
    for _ in range(n):
        nvars = rng.randint(1, 2)
        point = [ZZ.element(rng.randint(-2, 2)) for _ in range(nvars)] if rng.random() < 0.7 else None
        poly = _random_poly(rng, ZZ, nvars, point)
        bsys = PolySystem(ZZ, tuple(Var(f"x{i}", "fundamental") for i in range(nvars)), (poly,))
        defn = _toy_definition(rng)
        tsys = transport(bsys, defn, inc)
        names = [f"x{i}" for i in range(nvars)]
        got = {tuple(sol[v] for v in names) for sol in brute_force_solutions(tsys, box)}
        allowed = t_image(defn.system, "t", box)
        mapped = bsys.map_ring(inc)
        want = {tuple(sol[v] for v in names) for sol in brute_force_solutions(mapped, box)
                if all(sol[v] in allowed for v in names)}
        nonempty += bool(want)
        mismatches += got != want
    return mismatches == 0, f"{n} pairs ({nonempty} with solutions), {mismatches} mismatches"


# 10

def check_end_to_end(rng, scale):
    problem = problem_from_fixture("cm-sqrt2", "totally_real")
    em = emit_definition(problem)
    text = jsonio.dumps(jsonio.emitted_to_json(em))
    again = jsonio.dumps(jsonio.emitted_to_json(emit_definition(problem_from_fixture("cm-sqrt2", "totally_real"))))
    problems = []
    if text != again:
        problems.append("emission not byte-stable")
    top = 20 if scale >= 1 else 6
    assignments = {}
    for nu in range(top + 1):
        w = construct_witness_for_natural(problem, nu)
        a = witness_assignment(em, w)
        got, _ = verify_emitted_solution(em, a)
        if got != ZSQRT2.element(nu):
            problems.append(f"nu={nu} extracted {got}")
        assignments[nu] = a
    # box fuzz: free a few variables around a witness and check every solution found
    names = em.system.names
    solutions = 0
    rounds = _count(12, scale)
    for _ in range(rounds):
        nu = rng.choice(sorted(assignments))
        base = assignments[nu]
        free = rng.sample([v for v in names if v not in ("Z1",)], 2)
        fixed = {k: v for k, v in base.items() if k not in free}
        for sol in brute_force_solutions(em.system, 1, fixed=fixed, node_cap=10 ** 6):
            solutions += 1
            try:
                got, _ = verify_emitted_solution(em, sol)
            except NotInSubring as e:
                problems.append(f"box solution left the subring: {e}")
                continue
            if problem.ext.inclusion.preimage(sol["alpha"]) is None:
                problems.append("box solution with external alpha")
    try:
        bad = dict(assignments[2])
        bad["alpha"] = bad["alpha"] + 1
        verify_emitted_solution(em, bad)
        problems.append("corrupted assignment accepted")
    except ResidualNonzero:
        pass
    detail = f"alpha in 0..{top} round-trip, {solutions} box solutions from {rounds} fuzz rounds, byte-stable"
    return not problems, detail + (f"; {problems[:3]}" if problems else "")


CRITERIA: tuple[tuple[int, str, Callable, float], ...] = (
    (1, "C(m) values", check_c_of_m, 1),
    (2, "combiner equivalence", check_combiner, 120),
    (3, "nonzero gadget", check_nonzero_gadget, 120),
    (4, "partial calculus", check_partial_calculus, 60),
    (5, "CM descent", check_cm_descent, 30),
    (6, "torus ranks", check_torus_rank, 30),
    (7, "capture theorems", check_capture, 600),
    (8, "four-squares certificates", check_four_squares, 120),
    (9, "transport correspondence", check_transport, 120),
    (10, "end-to-end emitted definition", check_end_to_end, 300),
)

QUICK_SCALE = 0.02


def run_criterion(number: int, seed: int = 0, scale: float = 1.0) -> CriterionResult:
    for num, title, fn, limit in CRITERIA:
        if num == number:
            rng = random.Random(f"{seed}:{num}")
            start = time.perf_counter()
            try:
                ok, detail = fn(rng, scale)
            except DiophError as e:
                ok, detail = False, f"{type(e).__name__}: {e}"
            elapsed = time.perf_counter() - start
            passed = bool(ok) and elapsed < limit
            if ok and not passed:
                detail += " (over the time limit)"
            return CriterionResult(num, title, passed, elapsed, limit, detail)
    raise KeyError(f"no criterion {number}")


def run_all(seed: int = 0, scale: float = 1.0) -> list[CriterionResult]:
    return [run_criterion(num, seed, scale) for num, *_ in CRITERIA]
