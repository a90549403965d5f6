"""Polynomial systems with tagged variables, diophantine definitions, and the merge
machinery used by every combinator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from ..errors import RingMismatch
from ..numfield import NumberRing, RingElement
from .poly import Poly

CLASSES = ("fundamental", "auxiliary", "congruence", "plain")


@dataclass(frozen=True)
class Var:
    name: str
    cls: str = "plain"

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise ValueError(f"unknown variable class {self.cls}")


@dataclass(frozen=True)
class PolySystem:
    ring: NumberRing
    variables: tuple[Var, ...]
    polys: tuple[Poly, ...]
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.variables)
        names = [v.name for v in self.variables]
        if len(set(names)) != n:
            raise ValueError("duplicate variable names")
        fixed = []
        for p in self.polys:
            if p.ring != self.ring:
                raise RingMismatch("polynomial over another ring")
            fixed.append(p.padded(n))
        object.__setattr__(self, "polys", tuple(fixed))
        if len(self.labels) != len(self.polys):
            object.__setattr__(self, "labels", tuple(self.labels) + ("",) * (len(self.polys) - len(self.labels)))

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def index(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise KeyError(name)

    def var_class(self, name: str) -> str:
        return self.variables[self.index(name)].cls

    def _values(self, assignment: Mapping[str, RingElement]) -> list[RingElement]:
        return [self.ring.element(assignment[v.name]) for v in self.variables]

    def residuals(self, assignment: Mapping[str, RingElement]) -> list[RingElement]:
        vals = self._values(assignment)
        return [p.evaluate(vals) for p in self.polys]

    def is_satisfied(self, assignment: Mapping[str, RingElement]) -> bool:
        return all(r.is_zero() for r in self.residuals(assignment))

    def renamed(self, mapping: Mapping[str, str]) -> "PolySystem":
        vs = tuple(Var(mapping.get(v.name, v.name), v.cls) for v in self.variables)
        return PolySystem(self.ring, vs, self.polys, self.labels)

    def with_classes(self, classes: Mapping[str, str]) -> "PolySystem":
        vs = tuple(Var(v.name, classes.get(v.name, v.cls)) for v in self.variables)
        return PolySystem(self.ring, vs, self.polys, self.labels)

    def map_ring(self, inclusion) -> "PolySystem":
        """Push coefficients into a bigger ring along an inclusion."""
        if inclusion.sub != self.ring:
            raise RingMismatch("inclusion does not start at the system's ring")
        polys = tuple(p.map_coefficients(inclusion, inclusion.sup) for p in self.polys)
        return PolySystem(inclusion.sup, self.variables, polys, self.labels)

    def normalized(self) -> "PolySystem":
        return PolySystem(self.ring, self.variables, tuple(Poly(self.ring, len(self.variables), p.as_dict()) for p in self.polys), self.labels)


def fresh_suffix(taken: set[str], names: Sequence[str]) -> int:
    """Smallest k >= 1 such that name#k is unused for every name."""
    k = 1
    while any(f"{n}#{k}" in taken for n in names):
        k += 1
    return k


def merge(base: PolySystem, other: PolySystem, identify: Mapping[str, str]) -> PolySystem:
    """Append other's equations to base. Variables of other listed in identify
    are glued to the named base variables; every other variable of other is
    renamed name#k with a fresh k, so no accidental sharing can occur."""
    if base.ring != other.ring:
        raise RingMismatch("systems over different rings")
    taken = set(base.names)
    renamed = [v.name for v in other.variables if v.name not in identify]
    k = fresh_suffix(taken, renamed)
    new_vars = list(base.variables)
    mapping = []
    pos = {v.name: i for i, v in enumerate(base.variables)}
    for v in other.variables:
        if v.name in identify:
            mapping.append(pos[identify[v.name]])
        else:
            new_vars.append(Var(f"{v.name}#{k}", v.cls))
            mapping.append(len(new_vars) - 1)
    n = len(new_vars)
    polys = [p.padded(n) for p in base.polys] + [p.reindex(mapping, n) for p in other.polys]
    return PolySystem(base.ring, tuple(new_vars), tuple(polys), base.labels + other.labels)


class Builder:
    """Incremental construction of a PolySystem with symbolic variables."""

    def __init__(self, ring: NumberRing):
        self.ring = ring
        self.vars: list[Var] = []
        self.polys: list[Poly] = []
        self.labels: list[str] = []

    def var(self, name: str, cls: str = "auxiliary") -> Poly:
        if any(v.name == name for v in self.vars):
            raise ValueError(f"variable {name} already exists")
        self.vars.append(Var(name, cls))
        return Poly.var(self.ring, len(self.vars) - 1)

    def get(self, name: str) -> Poly:
        for i, v in enumerate(self.vars):
            if v.name == name:
                return Poly.var(self.ring, i)
        raise KeyError(name)

    def const(self, c) -> Poly:
        return Poly.const(self.ring, c)

    def eq(self, p, label: str = "") -> None:
        if not isinstance(p, Poly):
            p = Poly.const(self.ring, p)
        self.polys.append(p)
        self.labels.append(label)

    def build(self) -> PolySystem:
        return PolySystem(self.ring, tuple(self.vars), tuple(self.polys), tuple(self.labels))


@dataclass(frozen=True)
class DiophDefinition:
    system: PolySystem
    t: str
    descriptor: str = ""
    oracle: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.t not in self.system.names:
            raise ValueError(f"distinguished variable {self.t} missing")
        if self.system.var_class(self.t) != "fundamental":
            object.__setattr__(self, "system", self.system.with_classes({self.t: "fundamental"}))

    @property
    def ring(self) -> NumberRing:
        return self.system.ring
