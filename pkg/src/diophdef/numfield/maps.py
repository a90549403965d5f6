"""Ring maps given by the image of θ: automorphisms, inclusions, and registered extensions."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..errors import NotAnInvolution, RingMismatch, NotInSubring, ReducibleOrNonMonogenic
from .linalg import solve_rows, left_kernel
from .ring import NumberRing, RingElement, FieldElement, make_field


def _evaluate(coords, image, one):
    acc = one * 0
    for c in reversed(coords):
        acc = acc * image + c
    return acc


@dataclass(frozen=True)
class Automorphism:
    ring: NumberRing
    image: RingElement  # image of θ
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.image.ring != self.ring:
            raise RingMismatch("automorphism image must live in its ring")
        if not _evaluate(self.ring.minpoly, self.image, self.ring.one()).is_zero():
            raise ValueError("image of θ is not a root of the minimal polynomial")

    def __call__(self, x):
        if isinstance(x, FieldElement):
            img = FieldElement.of(self.ring, self.image)
            return _evaluate(x.coords, img, FieldElement.of(self.ring, 1))
        if x.ring != self.ring:
            raise RingMismatch("element from another ring")
        return _evaluate(x.coords, self.image, self.ring.one())

    def matrix(self) -> list[list[int]]:
        return [list(self(b).coords) for b in self.ring.basis()]

    def is_identity(self) -> bool:
        return self.image == self.ring.theta()

    def is_involution(self) -> bool:
        return self(self.image) == self.ring.theta()

    def compose(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.ring, self(other.image))


def identity_automorphism(ring: NumberRing) -> Automorphism:
    return Automorphism(ring, ring.theta(), "id")


@dataclass(frozen=True)
class Inclusion:
    """Embedding sub -> sup determined by the image of the sub generator."""

    sub: NumberRing
    sup: NumberRing
    image: RingElement

    def __call__(self, x):
        if isinstance(x, int):
            return self.sup.element(x)
        if x.ring != self.sub:
            raise RingMismatch("element is not in the source ring")
        if isinstance(x, FieldElement):
            img = FieldElement.of(self.sup, self.image)
            return _evaluate(x.coords, img, FieldElement.of(self.sup, 1))
        return _evaluate(x.coords, self.image, self.sup.one())

    def lattice(self) -> list[list[int]]:
        return [list(self(b).coords) for b in self.sub.basis()]

    def preimage(self, x) -> RingElement | None:
        """The sub-element mapping to x, or None when x lies outside the image lattice."""
        if x.ring != self.sup:
            raise RingMismatch("element is not in the target ring")
        sol = solve_rows(self.lattice(), list(x.coords))
        if sol is None or any(s.denominator != 1 for s in sol):
            return None
        return self.sub.element(tuple(int(s) for s in sol))

    def preimage_field(self, x: FieldElement) -> FieldElement | None:
        sol = solve_rows(self.lattice(), list(x.coords))
        if sol is None:
            return None
        return FieldElement(self.sub, tuple(sol))

    def contains(self, x) -> bool:
        if isinstance(x, FieldElement):
            return self.preimage_field(x) is not None
        return self.preimage(x) is not None

    def compose(self, outer: "Inclusion") -> "Inclusion":
        if outer.sub != self.sup:
            raise RingMismatch("inclusions do not chain")
        return Inclusion(self.sub, outer.sup, outer(self.image))


def identity_inclusion(ring: NumberRing) -> Inclusion:
    return Inclusion(ring, ring, ring.theta())


def integers_into(ring: NumberRing) -> Inclusion:

    return Inclusion(ZZ, ring, ring.zero())


ZZ = make_field((0, 1), name="Z", class_number_one=True)


@dataclass(frozen=True)
class Extension:
    """A big ring with a registered subring, its inclusion, and (for relative
    degree 2) the nontrivial automorphism fixing the subring."""

    big: NumberRing
    sub: NumberRing
    inclusion: Inclusion
    sigma: Automorphism | None = None
    automorphisms: tuple[Automorphism, ...] = ()
    galois_degree: int = 0  # degree of the Galois closure of the big field over Q
    name: str = field(default="", compare=False)

    @property
    def relative_degree(self) -> int:
        return self.big.degree // self.sub.degree


def relative_norm_quadratic(x: RingElement, ext: Extension) -> RingElement:
    """x·σ(x), expressed in the subring."""
    if ext.sigma is None:
        raise RingMismatch("extension has no registered automorphism")
    n = x * ext.sigma(x)
    pre = ext.inclusion.preimage(n)
    if pre is None:
        raise NotInSubring("x·σ(x) is outside the registered subring; check the automorphism")
    return pre


def fixed_subring(ring: NumberRing, sigma: Automorphism, search: int = 3) -> tuple[NumberRing, Inclusion]:
    """The ring of σ-fixed elements as its own monogenic ring, with its inclusion."""
    if sigma.ring != ring:
        raise RingMismatch("automorphism of another ring")
    if not sigma.is_involution():
        raise NotAnInvolution("σ² is not the identity")
    if sigma.is_identity():
        return ring, identity_inclusion(ring)
    d = ring.degree
    s = sigma.matrix()
    diff = [[s[i][j] - int(i == j) for j in range(d)] for i in range(d)]
    kernel = left_kernel(diff, d)
    e = len(kernel)
    if e == 1:
        return ZZ, integers_into(ring)
    target = hnf_square_in(kernel, d)
    # look for θ' with Z[θ'] equal to the fixed lattice
    for combo in _small_vectors(e, search):
        vec = [sum(c * k[j] for c, k in zip(combo, kernel)) for j in range(d)]
        cand = ring.element(vec)
        pw = [ring.one()]
        for _ in range(e):
            pw.append(pw[-1] * cand)
        span = [list(p.coords) for p in pw[:e]]
        if hnf_square_in(span, d) != target:
            continue
        rel = solve_rows(span, list(pw[e].coords))
        if rel is None or any(r.denominator != 1 for r in rel):
            continue
        minpoly = tuple(-int(r) for r in rel) + (1,)
        try:
            sub = make_field(minpoly, name=f"fixed({ring.label()})")
        except ReducibleOrNonMonogenic:
            continue
        return sub, Inclusion(sub, ring, cand)
    raise ReducibleOrNonMonogenic("no power-basis generator found for the fixed ring")


def hnf_square_in(rows, d):
    """HNF of a lattice of rank e ≤ d, as a canonical tuple (non-square when e < d)."""
    from .linalg import echelon
    a, pivots, _, _ = echelon(rows, d)
    return tuple(tuple(a[pivots[c]]) for c in sorted(pivots))


def _small_vectors(e: int, bound: int):
    vecs = [v for v in product(range(-bound, bound + 1), repeat=e) if any(v)]
    vecs.sort(key=lambda v: (sum(abs(c) for c in v), [-c for c in v]))
    return vecs
