"""Named rings, extensions and group instances used by the tests and the CLI."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .groups import GroupInstance, StabilityExponent, elliptic_curve, gm, norm_one_torus
from .numfield import (Automorphism, Extension, Inclusion, NumberRing, ZZ, identity_automorphism, integers_into,
                       identity_inclusion, make_field, principal)
from .numfield.units import register_free_units

ZI = make_field((1, 0, 1), name="Z[i]", class_number_one=True)
ZSQRT2 = make_field((-2, 0, 1), name="Z[sqrt2]", class_number_one=True)
ZZETA8 = make_field((1, 0, 0, 0, 1), name="Z[zeta8]", class_number_one=True)

# 1 + sqrt2 = 1 + zeta - zeta^3 generates the units of Z[zeta8] modulo roots of unity
register_free_units(ZZETA8, [ZZETA8.element((1, 1, 0, -1))])

RINGS: dict[str, NumberRing] = {"zz": ZZ, "zi": ZI, "zsqrt2": ZSQRT2, "zzeta8": ZZETA8}


def _zeta_power(k: int):
    return ZZETA8.theta() ** k


@lru_cache(maxsize=None)
def extensions() -> dict[str, Extension]:
    conj_i = Automorphism(ZI, ZI.element((0, -1)), name="conj")
    conj_s = Automorphism(ZSQRT2, ZSQRT2.element((0, -1)), name="sigma")
    zeta_auts = tuple(Automorphism(ZZETA8, _zeta_power(k), name=f"zeta->zeta^{k}") for k in (1, 3, 5, 7))
    sqrt2 = Inclusion(ZSQRT2, ZZETA8, ZZETA8.element((0, 1, 0, -1)))
    return {
        "q-i": Extension(ZI, ZZ, integers_into(ZI), conj_i, (identity_automorphism(ZI), conj_i), 2, name="q-i"),
        "q-sqrt2": Extension(ZSQRT2, ZZ, integers_into(ZSQRT2), conj_s,
                             (identity_automorphism(ZSQRT2), conj_s), 2, name="q-sqrt2"),
        "cm-sqrt2": Extension(ZZETA8, ZSQRT2, sqrt2, zeta_auts[3], zeta_auts, 4, name="cm-sqrt2"),
        "sqrt2-self": Extension(ZSQRT2, ZSQRT2, identity_inclusion(ZSQRT2), None,
                                (identity_automorphism(ZSQRT2), conj_s), 2, name="sqrt2-self"),
    }


@dataclass(frozen=True)
class GroupFixture:
    name: str
    group: GroupInstance
    ext: Extension | None
    exponent: StabilityExponent | None
    torus: GroupInstance | None = None   # source of B-pairs for the quadratic variant
    variants: tuple[str, ...] = ()


@lru_cache(maxsize=None)
def groups() -> dict[str, GroupFixture]:
    ext = extensions()
    cm = ext["cm-sqrt2"]
    return {
        "cm-sqrt2": GroupFixture("cm-sqrt2", gm(ZZETA8, "Gm/Z[zeta8]"), cm,
                                 StabilityExponent(2, principal(ZSQRT2, ZSQRT2.element(3))),
                                 norm_one_torus(ZSQRT2, 3, "torus c=3 over Z[sqrt2]"),
                                 ("totally_real", "quadratic", "finite")),
        "gm-sqrt2": GroupFixture("gm-sqrt2", gm(ZSQRT2, "Gm/Z[sqrt2]"), ext["sqrt2-self"],
                                 StabilityExponent(1, principal(ZSQRT2, ZSQRT2.element(1))), None,
                                 ("totally_real", "finite")),
        "torus-triple": GroupFixture("torus-triple", norm_one_torus(ZZ, 2, "torus c=2 over Z"), ext["q-i"],
                                     StabilityExponent(1, principal(ZZ, ZZ.element(3)))),
        "curve-32a": GroupFixture("curve-32a", elliptic_curve(ZZ, (0, 0, 0, -1, 0), "y^2 = x^3 - x"), None, None),
        "curve-11a": GroupFixture("curve-11a", elliptic_curve(ZZ, (0, -1, 1, 0, 0), "y^2 + y = x^3 - x^2"),
                                  None, None),
    }


def ring(name: str) -> NumberRing:
    if name not in RINGS:
        raise KeyError(f"unknown ring fixture {name}; choose from {sorted(RINGS)}")
    return RINGS[name]


def extension(name: str) -> Extension:
    table = extensions()
    if name not in table:
        raise KeyError(f"unknown extension fixture {name}; choose from {sorted(table)}")
    return table[name]


def group(name: str) -> GroupFixture:
    table = groups()
    if name not in table:
        raise KeyError(f"unknown group fixture {name}; choose from {sorted(table)}")
    return table[name]
