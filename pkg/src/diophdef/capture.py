"""Witness verification, witness construction and emission of complete
definition systems for the congruence-capture pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .bounds import (CaptureCertificate, big_w, quadratic_extras, capture_finite, capture_quadratic, capture_totally_real, check_b_pairs,
                     d_of, four_squares)
from .errors import (CertificateInvalid, CrossCheckMismatch, NoInfiniteOrderGenerator, NoSuchB, NotABasisElement,
                     NotInSubring, PreconditionFailed, ResidualNonzero, SearchExhausted, StabilityViolation,
                     UnsupportedInstance, WitnessInvalid, ZeroIdeal, DiophError)
from .groups import (BPair, GroupInstance, GroupPoint, PowerWitness, StabilityExponent, base_change,
                     descend, gm_point, in_congruence_kernel, kernel_multiple, point_from_coords, power,
                     rth_power_coset)
from .numfield import (Extension, IntegralIdeal, RingElement, extend, from_generators, identity_inclusion)
from .numfield.linalg import solve_integral
from .numfield.units import free_unit_generators
from .polysys import Builder, DiophDefinition, Poly, PolySystem
from .polysys.ops import witness_nonzero

VARIANTS = ("finite", "totally_real", "quadratic")
WITNESS_EXPONENT_CAP = 500_000
PAIR_PATTERN = ((0, 2), (2, 2))


@dataclass(frozen=True)
class CaptureProblem:
    group: GroupInstance
    ext: Extension
    exponent: StabilityExponent
    variant: str
    m: int | None = None
    torus: GroupInstance | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise PreconditionFailed(f"unknown variant {self.variant}")
        if self.group.ring != self.ext.big:
            raise PreconditionFailed("group must live over the big ring")
        if self.exponent.ideal.ring != self.ext.sub:
            raise PreconditionFailed("stability ideal must live in the subring")
        if self.variant == "finite" and self.m is None:
            object.__setattr__(self, "m", self.ext.galois_degree or self.ext.big.degree)
        if self.variant == "quadratic" and self.torus is None:
            raise PreconditionFailed("quadratic variant needs a torus for B-pairs")

    @property
    def sub_group(self) -> GroupInstance:
        g = self.group
        return GroupInstance(g.kind, self.ext.sub, self.ext.sub, identity_inclusion(self.ext.sub),
                             twist=None if g.twist is None else self.ext.inclusion.preimage(g.twist),
                             a=None if g.a is None else tuple(self.ext.inclusion.preimage(x) for x in g.a),
                             name=g.name)


@dataclass(frozen=True)
class CaptureWitness:
    alpha: RingElement
    P: PowerWitness | None
    Q: PowerWitness | None
    side: dict = field(default_factory=dict, compare=False, hash=False)
    extracted_b: RingElement | None = field(default=None, compare=False)
    bypass: bool = False


# ideals

def _big(ext: Extension, ideal: IntegralIdeal) -> IntegralIdeal:
    return extend(ideal, ext.inclusion)


def ideal_generators(ideal: IntegralIdeal) -> list[RingElement]:
    """A short generating list: one integer for scalar HNFs, the HNF basis otherwise."""
    d = ideal.ring.degree
    h = ideal.hnf
    c = h[0][0]
    if all(h[i][j] == (c if i == j else 0) for i in range(d) for j in range(d)):
        return [ideal.ring.element(c)]
    return ideal.basis()


def kernel_factor(problem: CaptureProblem, alpha, side: Mapping):
    """The element multiplying I in the variant's kernel ideal (works on polynomials too)."""
    if problem.variant == "finite":
        return d_of(problem.m, alpha)
    if problem.variant == "totally_real":
        t = alpha * 2 + 1
        return t * t
    return side["X1"] * alpha * 2


def kernel_ideal(problem: CaptureProblem, alpha: RingElement, side: Mapping) -> IntegralIdeal:
    factor = kernel_factor(problem, alpha, side)
    if factor.is_zero():
        raise ZeroIdeal("kernel ideal vanishes; use the bypass")
    return _big(problem.ext, problem.exponent.ideal) * factor


def combination(x: RingElement, gens: list[RingElement]) -> list[RingElement] | None:
    """k_i with x = Σ k_i g_i, or None when x is outside the ideal they generate."""
    ring = x.ring
    basis = ring.basis()
    d = ring.degree
    rows = [list((g * b).coords) for g in gens for b in basis]
    sol = solve_integral(rows, list(x.coords), d)
    if sol is None:
        return None
    return [ring.element(tuple(sol[i * d:(i + 1) * d])) for i in range(len(gens))]


# the module-level congruence

def maincong2_check(alpha: RingElement, z: IntegralIdeal, v: RingElement, w: RingElement, ext: Extension,
                    lattice: IntegralIdeal | None = None, finish=None, m: int | None = None) -> RingElement:
    """W = A/zA over O_K/z (A = lattice, default O_K). Finds b with v = b·w in W,
    checks b ≡ α mod z·O_L, then hands (α, b, z) to the capture step."""
    sub = ext.sub
    if m is not None and d_of(m, alpha).is_zero():
        pre = ext.inclusion.preimage(alpha)
        if pre is None:
            raise NotInSubring("D(m, α) = 0 for an element outside the subring")
        return pre
    if z.ring != sub:
        raise PreconditionFailed("z must be an ideal of the subring")
    a = lattice if lattice is not None else from_generators(sub, [sub.one()])
    za = z * a
    if za.is_zero:
        raise ZeroIdeal("z is zero")
    if not a.contains(w) or from_generators(sub, [w] + za.basis()) != a:
        raise NotABasisElement("w does not generate W over O_K/z")
    rows = [list((w * bb).coords) for bb in sub.basis()] + [list(r) for r in za.hnf]
    sol = solve_integral(rows, list(v.coords), sub.degree)
    if sol is None:
        raise NoSuchB("v is not a multiple of w in W")
    b = z.reduce(sum((bb * c for bb, c in zip(sub.basis(), sol[:sub.degree])), sub.zero()))
    if not _big(ext, z).contains(alpha - ext.inclusion(b)):
        raise CertificateInvalid("congruence", "b is not congruent to alpha modulo z")
    if finish is None:
        mm = m or ext.galois_degree or ext.big.degree
        return capture_finite(CaptureCertificate("finite", alpha, b, z, {"m": mm}), ext)
    return finish(b)


# verification

def _bypass(problem: CaptureProblem, alpha: RingElement) -> bool:
    if problem.variant == "finite":
        return d_of(problem.m, alpha).is_zero()
    if problem.variant == "quadratic":
        return alpha.is_zero()
    return False


def _check_side(problem: CaptureProblem, w: CaptureWitness):
    side = w.side
    ring = problem.ext.big
    if problem.variant == "totally_real":
        u = side.get("u")
        if u is None or len(u) != 4 or w.alpha != sum((x * x for x in u), ring.one()):
            raise WitnessInvalid("four_squares", "alpha != 1 + u1^2 + ... + u4^2")
    elif problem.variant == "quadratic":
        x2 = side.get("X2")
        if side.get("X1") is None or x2 is None or x2.is_zero():
            raise WitnessInvalid("x2_nonzero", "X1/X2 missing or X2 = 0")
        pairs = side.get("pairs") or ()
        if len(pairs) != 2:
            raise WitnessInvalid("b_pairs", "need two B-pairs")
        u, v = check_b_pairs(pairs, problem.torus, problem.ext)
        if u == v:
            raise WitnessInvalid("u_ne_v", "u = v")
        num, den = big_w(u, v)
        if side["X1"].to_field() * den != x2.to_field() * num:
            raise WitnessInvalid("x1_relation", "X1 != X2·w(u, v)")


def _check_power(label: str, pw: PowerWitness, problem: CaptureProblem, j: IntegralIdeal):
    g = problem.group
    if pw is None:
        raise WitnessInvalid(f"kernel_{label}", f"{label} is missing")
    if pw.root.instance != g or pw.point.instance != g:
        raise WitnessInvalid(f"kernel_{label}", f"{label} lives on another instance")
    if pw.r != problem.exponent.r:
        raise WitnessInvalid(f"power_{label}", f"{label} uses r={pw.r}, expected {problem.exponent.r}")
    if not in_congruence_kernel(pw.root, j):
        raise WitnessInvalid(f"kernel_{label}", f"root of {label} is not in the congruence kernel")
    if power(g, pw.root, pw.r) != pw.point:
        raise WitnessInvalid(f"power_{label}", f"{label} is not the r-th power of its root")


def _partial_mod(q: GroupPoint, c: IntegralIdeal) -> RingElement:
    if c.is_unit:
        return c.ring.zero()
    try:
        inv = c.inverse_mod(q.delta)
    except DiophError:
        raise WitnessInvalid("partial_relation", "δ(Q) is not invertible modulo z_P^2")
    return c.reduce(q.coords[0] * inv)


def verify_capture(problem: CaptureProblem, witness: CaptureWitness) -> RingElement:
    ext = problem.ext
    alpha = witness.alpha
    if alpha.ring != ext.big:
        raise WitnessInvalid("alpha", "alpha must live in the big ring")
    if witness.bypass or _bypass(problem, alpha):
        if not _bypass(problem, alpha):
            raise WitnessInvalid("bypass", "bypass claimed but the kernel ideal is nonzero")
        pre = ext.inclusion.preimage(alpha)
        if pre is None:
            raise NotInSubring("bypass value outside the subring")
        return pre
    _check_side(problem, witness)
    j = kernel_ideal(problem, alpha, witness.side)
    _check_power("P", witness.P, problem, j)
    _check_power("Q", witness.Q, problem, j)
    p, q = witness.P.point, witness.Q.point
    if p.is_identity():
        raise WitnessInvalid("P_nontrivial", "P is the identity")
    g = problem.group
    zp = from_generators(g.ring, p.coords[:g.n])
    cp = zp * zp
    rel = p.delta * q.coords[0] - alpha * q.delta * p.coords[0]
    if not cp.contains(rel):
        raise WitnessInvalid("partial_relation", "∂Q != α·∂P modulo z_P^2")
    sub_g = problem.sub_group
    ps, qs = descend(p, ext.inclusion, sub_g), descend(q, ext.inclusion, sub_g)
    if ps is None or qs is None:
        raise StabilityViolation("r-th power of a kernel point left the subring")
    z = from_generators(ext.sub, ps.coords[:g.n])
    c = z * z
    w = _partial_mod(ps, c)
    v = _partial_mod(qs, c)
    return maincong2_check(alpha, z, v, w, ext, lattice=z, finish=_finisher(problem, witness, z))


def _finisher(problem: CaptureProblem, witness: CaptureWitness, z: IntegralIdeal):
    ext, alpha, side = problem.ext, witness.alpha, witness.side

    def finish(b: RingElement) -> RingElement:
        try:
            if problem.variant == "finite":
                return capture_finite(CaptureCertificate("finite", alpha, b, z, {"m": problem.m}), ext)
            if problem.variant == "totally_real":
                return capture_totally_real(CaptureCertificate("totally_real", alpha, b, z, {"u": side["u"]}), ext)
            cert = CaptureCertificate("quadratic", alpha, b, z,
                                      {"X1": side["X1"], "X2": side["X2"], "pairs": side["pairs"]})
            return capture_quadratic(cert, ext, problem.torus)
        except CertificateInvalid as e:
            raise WitnessInvalid(e.clause, str(e)) from e

    return finish


# construction

def infinite_order_generator(problem: CaptureProblem) -> GroupPoint:
    g = problem.group
    if g.kind != "Gm":
        raise NoInfiniteOrderGenerator(f"no generator registered for {g.kind}")
    units = free_unit_generators(problem.ext.sub)
    if not units:
        raise NoInfiniteOrderGenerator("subring has no known unit of infinite order")
    return gm_point(g, problem.ext.inclusion(units[0]))


def quadratic_side(problem: CaptureProblem, alpha: RingElement) -> dict:
    return quadratic_extras(alpha, problem.ext, problem.torus)


def construct_witness_for_natural(problem: CaptureProblem, nu: int,
                                  exponent_cap: int = WITNESS_EXPONENT_CAP) -> CaptureWitness:
    if nu < 0:
        raise PreconditionFailed("ν must be a natural number")
    ext = problem.ext
    alpha = ext.big.element(nu)
    if _bypass(problem, alpha):
        w = CaptureWitness(alpha, None, None, {}, bypass=True)
        return CaptureWitness(alpha, None, None, {}, verify_capture(problem, w), bypass=True)
    if problem.variant == "totally_real":
        u = four_squares(alpha - 1)
        if u is None:
            raise SearchExhausted(f"{nu} - 1 is not a sum of four squares here")
        side = {"u": u}
    elif problem.variant == "quadratic":
        side = quadratic_side(problem, alpha)
    else:
        side = {"m": problem.m}
    j = kernel_ideal(problem, alpha, side)
    gen = infinite_order_generator(problem)
    k = kernel_multiple(gen, j)
    if k * max(nu, 1) * problem.exponent.r > exponent_cap:
        raise SearchExhausted(f"kernel order {k} makes the witness too large to materialize")
    g = problem.group
    root = power(g, gen, k)
    pw = rth_power_coset(root, j, problem.exponent.r)
    qw = rth_power_coset(power(g, root, nu), j, problem.exponent.r)
    w = CaptureWitness(alpha, pw, qw, side)
    b = verify_capture(problem, w)
    return CaptureWitness(alpha, pw, qw, side, b)


# emission

@dataclass(frozen=True)
class EmittedDefinition:
    definition: DiophDefinition
    bindings: tuple[tuple[str, RingElement], ...]
    blocks: tuple[tuple[str, str], ...]
    layout: dict = field(compare=False, hash=False)
    problem: CaptureProblem | None = field(default=None, compare=False, hash=False)

    @property
    def system(self) -> PolySystem:
        return self.definition.system


BLOCK_SOURCES = (
    ("closure", "defining equations of the group chart for every point"),
    ("unit-ideal", "primitive coordinates: Σ r_i λ_i = 1"),
    ("kernel", "first coordinates of the roots lie in the variant ideal"),
    ("power", "P and Q are r-th powers of their roots"),
    ("partial", "δ(P)λ(Q) - α δ(Q)λ(P) lies in z_P^2"),
    ("nontrivial", "P is not the identity"),
    ("variant", "variant side conditions"),
    ("binding", "congruence variables equal the ideal generators"),
)


class _Emitter:
    def __init__(self, problem: CaptureProblem):
        self.p = problem
        self.ring = problem.ext.big
        self.b = Builder(self.ring)
        self.layout: dict = {}
        self.guard = None  # bypass factor multiplying the main blocks

    def eq(self, poly, label: str, guarded: bool = True):
        if guarded and self.guard is not None:
            poly = poly * self.guard
        self.b.eq(poly, label)

    def nonzero(self, x: Poly, prefix: str):
        y, z, w = (self.b.var(f"{prefix}_{s}") for s in ("y", "z", "w"))
        self.eq((y * 2 - 1) * (z * 3 - 1) - x * w, f"nontrivial:{prefix}")
        return [f"{prefix}_{s}" for s in ("y", "z", "w")]

    def point(self, name: str, cls: str) -> list[Poly]:
        g = self.p.group
        names = [f"{name}{i}" for i in range(1, g.n + 2)]
        vs = [self.b.var(nm, cls) for nm in names]
        self.layout[name] = names
        if g.kind == "Gm":
            x, d = vs
            e = self.b.var(f"{name}_e")
            f = self.b.var(f"{name}_f")
            self.eq(d * e - 1, f"closure:{name}:delta-unit")
            self.eq((x + d) * f - 1, f"closure:{name}:unit")
        elif g.kind == "EllipticCurve":
            x, z, y = vs
            a1, a2, a3, a4, a6 = g.a
            eqn = (y * y * z + x * y * z * a1 + y * z * z * a3
                   - x * x * x - x * x * z * a2 - x * z * z * a4 - z * z * z * a6)
            self.eq(eqn, f"closure:{name}:weierstrass")
        else:
            raise UnsupportedInstance(f"no closure equations for {g.kind} points")
        rs = [self.b.var(f"{name}_r{i}") for i in range(1, g.n + 2)]
        self.eq(sum((r * v for r, v in zip(rs, vs)), Poly.const(self.ring, 0)) - 1, f"unit-ideal:{name}")
        return vs


def _power_relation(g: GroupInstance, pt: list[Poly], root: list[Poly], r: int) -> Poly:
    if g.kind != "Gm":
        raise UnsupportedInstance("power blocks are implemented for Gm")
    (x, d), (y, e) = pt, root
    return (x + d) * e ** r - d * (y + e) ** r


def emit_definition(problem: CaptureProblem) -> EmittedDefinition:
    g = problem.group
    if g.kind not in ("Gm", "EllipticCurve"):
        raise UnsupportedInstance(f"{g.kind} is only used as a B-subsystem")
    if g.kind == "EllipticCurve" and problem.exponent.r != 1:
        raise UnsupportedInstance("curve emission supports r = 1 only")
    em = _Emitter(problem)
    b = em.b
    ring = em.ring
    alpha = b.var("alpha", "fundamental")
    if problem.variant == "finite":
        guard = Poly.const(ring, 1)
        for jj in range(problem.m + 1):
            guard = guard * (alpha - jj)
        em.guard = guard
    elif problem.variant == "quadratic":
        em.guard = alpha
    P = em.point("P", "fundamental")
    Q = em.point("Q", "fundamental")
    r = problem.exponent.r
    if r == 1:
        roots = {"P": P, "Q": Q}
        em.layout["rootP"], em.layout["rootQ"] = em.layout["P"], em.layout["Q"]
    else:
        roots = {"P": em.point("rootP", "auxiliary"), "Q": em.point("rootQ", "auxiliary")}
    # congruence variables and their bindings
    gens = [problem.ext.inclusion(x) for x in ideal_generators(problem.exponent.ideal)]
    zs = [b.var(f"Z{i}", "congruence") for i in range(1, len(gens) + 1)]
    bindings = [(f"Z{i}", gv) for i, gv in enumerate(gens, 1)]
    em.layout["Z"] = [nm for nm, _ in bindings]
    side_polys = {}
    if problem.variant == "quadratic":
        side_polys = _emit_quadratic(em, alpha, bindings, zs)
    factor = kernel_factor(problem, alpha, side_polys)
    for label in ("P", "Q"):
        root = roots[label]
        for i in range(g.n):
            ks = [b.var(f"k{label}{i + 1}_{jj}") for jj in range(1, len(zs) + 1)]
            comb = sum((z * k for z, k in zip(zs, ks)), Poly.const(ring, 0))
            em.eq(root[i] - factor * comb, f"kernel:{label}{i + 1}")
        if r != 1:
            em.eq(_power_relation(g, P if label == "P" else Q, root, r), f"power:{label}")
    a_vars = []
    for i in range(g.d):
        # z_P^2 is generated by the products λ_j λ_l of the first n coordinates
        terms = Poly.const(ring, 0)
        for j1 in range(g.n):
            for j2 in range(j1, g.n):
                a = b.var(f"a{i + 1}_{j1 + 1}{j2 + 1}")
                a_vars.append(a)
                terms = terms + a * P[j1] * P[j2]
        em.eq(P[-1] * Q[i] - alpha * Q[-1] * P[i] - terms, f"partial:{i + 1}")
    em.layout["nzP"] = em.nonzero(P[0] if g.n == 1 else _first_coords_sum(P, g.n), "nzP")
    if problem.variant == "totally_real":
        us = [b.var(f"u{i}") for i in range(1, 5)]
        em.layout["u"] = [f"u{i}" for i in range(1, 5)]
        em.eq(alpha - 1 - sum((u * u for u in us), Poly.const(ring, 0)), "variant:squares")
    for name, gv in bindings:
        em.eq(b.get(name) - Poly.const(ring, gv), f"binding:{name}", guarded=False)
    system = b.build()
    defn = DiophDefinition(system, "alpha", f"{problem.name or g.label()} {problem.variant}")
    return EmittedDefinition(defn, tuple(sorted(bindings, key=lambda t: t[0])), BLOCK_SOURCES, em.layout, problem)


def _first_coords_sum(P: list[Poly], n: int) -> Poly:
    raise UnsupportedInstance("nonzero block for n > 1 needs a disjunction; emit curves with the identity excluded")


def _emit_quadratic(em: _Emitter, alpha: Poly, bindings: list, zs: list[Poly]) -> dict:
    problem = em.p
    b, ring = em.b, em.ring
    torus = base_change(problem.torus, problem.ext.inclusion)
    three = b.var("ZT", "congruence")
    bindings.append(("ZT", ring.element(3)))
    em.layout["ZT"] = "ZT"
    tpts = []
    for name in ("T1", "T2"):
        names = [f"{name}{i}" for i in range(1, 4)]
        t1, t2, t3 = (b.var(nm) for nm in names)
        em.layout[name] = names
        gvar = b.var(f"{name}_g")
        em.eq((t1 + t3) * (t1 + t3) - t2 * t2 * torus.twist - t3 * t3, f"variant:{name}:norm-form")
        em.eq(t3 * gvar - 1, f"variant:{name}:delta-unit")
        ss = [b.var(f"{name}_s{i}") for i in range(1, 4)]
        em.eq(ss[0] * t1 + ss[1] * t2 + ss[2] * t3 - 1, f"variant:{name}:unit-ideal")
        for i, t in enumerate((t1, t2), 1):
            k = b.var(f"{name}_k{i}")
            em.eq(t - three * k, f"variant:{name}:kernel{i}")
        tpts.append((t1, t2, t3))
    (i1, j1), (i2, j2) = PAIR_PATTERN
    em.layout["pattern"] = PAIR_PATTERN
    a, bb = tpts[0][i1], tpts[0][j1]
    c, d = tpts[1][i2], tpts[1][j2]
    x1 = b.var("X1")
    x2 = b.var("X2")
    em.layout["X"] = ["X1", "X2"]
    diff = a * d - bb * c
    em.eq(x1 * diff * diff * bb * bb - x2 * (bb * bb * d * d + diff * diff) * (a * a + bb * bb), "variant:x1-relation")
    em.layout["nzX2"] = em.nonzero(x2, "nzX2")
    em.layout["nzB"] = em.nonzero(bb * d * diff, "nzB")
    if ring.signature[0]:
        _emit_positive(em, alpha - 1, "posA")
        _emit_positive(em, x1 * x2 - x2 * x2 * alpha, "posW")
    return {"X1": x1}


def _emit_positive(em: _Emitter, x: Poly, prefix: str):
    b = em.b
    ys = [b.var(f"{prefix}_y{i}") for i in range(1, 6)]
    em.layout[prefix] = [f"{prefix}_y{i}" for i in range(1, 6)]
    em.eq(ys[4] * ys[4] * x - sum((y * y for y in ys[:4]), Poly.const(em.ring, 0)), f"variant:{prefix}")
    em.layout[prefix + "_nz"] = em.nonzero(ys[4], f"{prefix}_nz")


# assignments

def _fill_point(out: dict, names: list[str], pt: GroupPoint):
    for nm, c in zip(names, pt.coords):
        out[nm] = c
    g = pt.instance
    if g.kind == "Gm":
        x, d = pt.coords
        out[f"{names[0][:-1]}_e"] = d.inverse()
        out[f"{names[0][:-1]}_f"] = (x + d).inverse()
    base = names[0][:-1]
    # Σ r_i λ_i = 1 with the unit δ
    for i in range(1, len(names) + 1):
        out[f"{base}_r{i}"] = pt.ring.zero()
    out[f"{base}_r{len(names)}"] = pt.delta.inverse()


def witness_assignment(em: EmittedDefinition, witness: CaptureWitness) -> dict[str, RingElement]:
    problem = em.problem
    ring = problem.ext.big
    lay = em.layout
    out: dict[str, RingElement] = {"alpha": witness.alpha}
    for name, gv in em.bindings:
        out[name] = gv
    names = em.system.names
    if witness.bypass:
        for nm in names:
            out.setdefault(nm, ring.zero())
        return out
    g = problem.group
    _fill_point(out, lay["P"], witness.P.point)
    _fill_point(out, lay["Q"], witness.Q.point)
    if problem.exponent.r != 1:
        _fill_point(out, lay["rootP"], witness.P.root)
        _fill_point(out, lay["rootQ"], witness.Q.root)
    side = dict(witness.side)
    if problem.variant == "quadratic":
        _fill_quadratic(out, lay, witness, problem)
        side = {"X1": witness.side["X1"]}
    factor = kernel_factor(problem, witness.alpha, side)
    gens = [gv for nm, gv in em.bindings if nm.startswith("Z") and nm != "ZT"]
    for label in ("P", "Q"):
        root = (witness.P if label == "P" else witness.Q).root
        for i in range(g.n):
            ks = combination(root.coords[i].exact_div(factor), gens)
            if ks is None:
                raise WitnessInvalid(f"kernel_{label}", "root coordinate outside the kernel ideal")
            for jj, k in enumerate(ks, 1):
                out[f"k{label}{i + 1}_{jj}"] = k
    p, q = witness.P.point, witness.Q.point
    rel = p.delta * q.coords[0] - witness.alpha * q.delta * p.coords[0]
    if g.n != 1:
        raise UnsupportedInstance("assignments are built for Gm witnesses")
    out["a1_11"] = rel.exact_div(p.coords[0] * p.coords[0])
    y, z, w = witness_nonzero(p.coords[0])
    out.update(dict(zip(lay["nzP"], (y, z, w))))
    if problem.variant == "totally_real":
        out.update(dict(zip(lay["u"], witness.side["u"])))
    missing = [nm for nm in names if nm not in out]
    if missing:
        raise AssertionError(f"assignment misses {missing}")
    return {nm: out[nm] for nm in names}


def _fill_quadratic(out: dict, lay: dict, witness: CaptureWitness, problem: CaptureProblem):
    pairs = witness.side["pairs"]
    pattern = tuple((pr.i, pr.j) for pr in pairs)
    if pattern != lay["pattern"]:
        raise UnsupportedInstance(f"witness pairs use pattern {pattern}, emitted {lay['pattern']}")
    ring = problem.ext.big
    for name, pr in zip(("T1", "T2"), pairs):
        pt = pr.point
        for nm, c in zip(lay[name], pt.coords):
            out[nm] = c
        out[f"{name}_g"] = pt.delta.inverse()
        out[f"{name}_s1"] = ring.zero()
        out[f"{name}_s2"] = ring.zero()
        out[f"{name}_s3"] = pt.delta.inverse()
        out[f"{name}_k1"] = pt.coords[0].exact_div(ring.element(3))
        out[f"{name}_k2"] = pt.coords[1].exact_div(ring.element(3))
    out["X1"], out["X2"] = witness.side["X1"], witness.side["X2"]
    out.update(dict(zip(lay["nzX2"], witness_nonzero(witness.side["X2"]))))
    (i1, j1), (i2, j2) = lay["pattern"]
    a, b = pairs[0].point.coords[i1], pairs[0].point.coords[j1]
    c, d = pairs[1].point.coords[i2], pairs[1].point.coords[j2]
    out.update(dict(zip(lay["nzB"], witness_nonzero(b * d * (a * d - b * c)))))
    if ring.signature[0]:
        raise UnsupportedInstance("positivity witnesses for real embeddings are not assembled automatically")


def verify_emitted_solution(em: EmittedDefinition, assignment: Mapping[str, RingElement]):
    """Residuals first, then reconstruction of the witness and an independent capture check."""
    system = em.system
    missing = [nm for nm in system.names if nm not in assignment]
    if missing:
        raise PreconditionFailed(f"assignment misses {missing}")
    for i, res in enumerate(system.residuals(assignment)):
        if not res.is_zero():
            raise ResidualNonzero(i, system.labels[i])
    problem = em.problem
    alpha = system.ring.element(assignment["alpha"])
    witness = reconstruct_witness(em, assignment)
    try:
        got = verify_capture(problem, witness)
    except DiophError as e:
        raise CrossCheckMismatch(f"system satisfied but witness verification failed: {e}") from e
    if problem.ext.inclusion(got) != alpha:
        raise CrossCheckMismatch("extracted value differs from the assignment")
    return got, witness


def reconstruct_witness(em: EmittedDefinition, assignment: Mapping[str, RingElement]) -> CaptureWitness:
    problem = em.problem
    g = problem.group
    lay = em.layout
    ring = problem.ext.big
    alpha = ring.element(assignment["alpha"])
    if _bypass(problem, alpha):
        return CaptureWitness(alpha, None, None, {}, bypass=True)

    def pt(name):
        return point_from_coords(g, [ring.element(assignment[nm]) for nm in lay[name]])

    P, Q = pt("P"), pt("Q")
    rootP, rootQ = (P, Q) if problem.exponent.r == 1 else (pt("rootP"), pt("rootQ"))
    side: dict = {}
    if problem.variant == "totally_real":
        side["u"] = tuple(ring.element(assignment[nm]) for nm in lay["u"])
    elif problem.variant == "quadratic":
        torus = base_change(problem.torus, problem.ext.inclusion)
        pts = [point_from_coords(torus, [ring.element(assignment[nm]) for nm in lay[name]]) for name in ("T1", "T2")]
        (i1, j1), (i2, j2) = lay["pattern"]
        side["pairs"] = (BPair(pts[0], i1, j1), BPair(pts[1], i2, j2))
        side["X1"] = ring.element(assignment["X1"])
        side["X2"] = ring.element(assignment["X2"])
    r = problem.exponent.r
    ideal = _big(problem.ext, problem.exponent.ideal)
    return CaptureWitness(alpha, PowerWitness(P, rootP, r, ideal), PowerWitness(Q, rootQ, r, ideal), side)


def problem_from_fixture(name: str, variant: str | None = None) -> CaptureProblem:
    from .fixtures import group
    fx = group(name)
    if fx.ext is None or fx.exponent is None or not fx.variants:
        raise UnsupportedInstance(f"fixture {name} carries no capture data")
    variant = variant or fx.variants[0]
    if variant not in fx.variants:
        raise UnsupportedInstance(f"fixture {name} supports {', '.join(fx.variants)}")
    return CaptureProblem(fx.group, fx.ext, fx.exponent, variant, torus=fx.torus, name=name)
