"""Unit groups where they are cheap: torsion units and, for real quadratic rings,
the fundamental unit."""
from __future__ import annotations

from functools import lru_cache
from itertools import product

from .ring import NumberRing, RingElement


@lru_cache(maxsize=64)
def torsion_units(ring: NumberRing) -> tuple[RingElement, ...]:
    """Roots of unity with coordinates in {-1, 0, 1}; enough for the small
    cyclotomic and quadratic rings used here."""
    one = ring.one()
    found = []
    for coords in product((-1, 0, 1), repeat=ring.degree):
        x = RingElement(ring, coords)
        if x.is_zero() or abs(x.norm()) != 1:
            continue
        p = x
        for _ in range(2 * ring.degree + 2):
            if p == one:
                found.append(x)
                break
            p = p * x
    found.sort(key=lambda u: tuple(-c for c in u.coords))
    return tuple(found)


_REGISTERED: dict[NumberRing, tuple[RingElement, ...]] = {}


def register_free_units(ring: NumberRing, units) -> None:
    """Record independent units of infinite order for rings where they are not computed."""
    for u in units:
        if u.ring != ring or not u.is_unit():
            raise ValueError("registered generators must be units of the ring")
    _REGISTERED[ring] = tuple(units)


def free_unit_generators(ring: NumberRing) -> tuple[RingElement, ...]:
    from .arith import fundamental_unit_real_quadratic
    if ring in _REGISTERED:
        return _REGISTERED[ring]
    if ring.degree == 2 and ring.signature == (2, 0):
        _REGISTERED[ring] = (fundamental_unit_real_quadratic(ring),)
        return _REGISTERED[ring]
    return ()
