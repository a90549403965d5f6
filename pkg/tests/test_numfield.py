from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diophdef.errors import ReducibleOrNonMonogenic, RingMismatch
from diophdef.fixtures import ZI, ZSQRT2, ZZETA8, extension
from diophdef.numfield import (ZZ, Automorphism, FieldElement, approximate, congruent, factor_ideal,
                               factor_ideal_quadratic, fixed_subring, from_generators, fundamental_unit_real_quadratic,
                               identity_automorphism, ideal_norm, make_field, principal, product, quotient_reduce,
                               quotient_size, real_signs, relative_norm_quadratic, subset)

coord = st.integers(-30, 30)


def quad(ring):
    return st.tuples(coord, coord).map(ring.element)


def nonzero(s):
    return s.filter(lambda x: not x.is_zero())


# ring construction

def test_sqrt2_ring_invariants():
    r = make_field((-2, 0, 1))
    assert (r.degree, r.signature, r.discriminant) == (2, (2, 0), 8)


def test_gaussian_signature():
    assert make_field((1, 0, 1)).signature == (0, 1)


def test_reducible_rejected():
    with pytest.raises(ReducibleOrNonMonogenic):
        make_field((-4, 0, 1))


def test_non_maximal_order_rejected():
    with pytest.raises(ReducibleOrNonMonogenic):
        make_field((-5, 0, 1))


def test_zeta8_degree_and_signature():
    assert (ZZETA8.degree, ZZETA8.signature, ZZETA8.discriminant) == (4, (0, 2), 256)


# norms

@pytest.mark.parametrize("ring,coords,norm", [
    (ZSQRT2, (1, 1), -1),
    (ZSQRT2, (0, 0), 0),
    (ZI, (2, 1), 5),
    (ZSQRT2, (3, 2), 1),
    (ZZETA8, (1, 1, 0, 0), 2),
])
def test_absolute_norm(ring, coords, norm):
    assert ring.element(coords).norm() == norm


def test_relative_norm_over_gaussian_subfield():
    # sqrt2 = zeta + zeta^7 = zeta - zeta^3; the automorphism zeta -> zeta^5 negates it and fixes i
    sigma = Automorphism(ZZETA8, ZZETA8.theta() ** 5)
    sqrt2 = ZZETA8.element((0, 1, 0, -1))
    x = 1 + sqrt2
    assert x * sigma(x) == -1


def test_relative_norm_cm_conjugation():
    ext = extension("cm-sqrt2")
    i = ZZETA8.element((0, 0, 1, 0))
    assert relative_norm_quadratic(i, ext) == ZSQRT2.one()
    assert relative_norm_quadratic(ZZETA8.one(), ext) == ZSQRT2.one()


# ideals

def test_from_generators_gcd():
    assert from_generators(ZZ, [6, 4]) == principal(ZZ, 2)


def test_subset_divisibility():
    assert subset(principal(ZZ, 4), principal(ZZ, 2))
    assert not subset(principal(ZZ, 2), principal(ZZ, 4))


def test_gaussian_ideal_norm():
    assert ideal_norm(principal(ZI, ZI.element((1, 1)))) == 2
    assert quotient_size(principal(ZI, 3)) == 9


def test_reduce_integer():
    assert quotient_reduce(ZZ.element(7), principal(ZZ, 3)) == 1


def test_congruence_in_sqrt2():
    assert congruent(ZSQRT2.element((3, 2)), ZSQRT2.one(), principal(ZSQRT2, 2))


def _factor_table(ideal):
    return sorted((pr.p, pr.kind, pr.residue_degree, e, pr.ideal.hnf) for pr, e in factor_ideal_quadratic(ideal))


def test_factor_five_splits():
    f = _factor_table(principal(ZI, 5))
    assert [(p, k, d, e) for p, k, d, e, _ in f] == [(5, "split", 1, 1), (5, "split", 1, 1)]
    gens = {principal(ZI, ZI.element((2, 1))).hnf, principal(ZI, ZI.element((2, -1))).hnf}
    assert {h for *_, h in f} == gens


def test_factor_three_inert():
    f = _factor_table(principal(ZI, 3))
    assert [(p, k, d, e) for p, k, d, e, _ in f] == [(3, "inert", 2, 1)]


def test_factor_two_ramified():
    f = _factor_table(principal(ZI, 2))
    assert [(p, k, d, e) for p, k, d, e, _ in f] == [(2, "ramified", 1, 2)]
    assert f[0][4] == principal(ZI, ZI.element((1, 1))).hnf


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        ZI.one() + ZSQRT2.one()


# subrings and units

def test_fixed_subring_of_gaussian_conjugation_is_z():
    sub, inc = fixed_subring(ZI, Automorphism(ZI, ZI.element((0, -1))))
    assert sub.degree == 1
    assert inc(sub.one()) == ZI.one()


def test_fixed_subring_of_cm_conjugation_is_sqrt2():
    ext = extension("cm-sqrt2")
    sub, inc = fixed_subring(ZZETA8, ext.sigma)
    assert sub.degree == 2 and sub.discriminant == 8
    image = inc(sub.theta())
    assert image * image == 2


def test_fixed_subring_of_identity_is_whole_ring():
    sub, _ = fixed_subring(ZI, identity_automorphism(ZI))
    assert sub.degree == 2


@pytest.mark.parametrize("minpoly,unit", [
    ((-2, 0, 1), (1, 1)),
    ((-3, 0, 1), (2, 1)),
    ((-5, 0, 1), (2, 1)),
])
def test_fundamental_units(minpoly, unit):
    ring = make_field(minpoly, allow_nonmaximal=True)
    assert fundamental_unit_real_quadratic(ring).coords == unit


def test_norm_plus_one_unit_of_sqrt5_is_the_square():
    # 2+sqrt5 has norm -1; the smallest norm +1 unit 9+4sqrt5 is its square
    ring = make_field((-5, 0, 1), allow_nonmaximal=True)
    u = fundamental_unit_real_quadratic(ring)
    assert u.norm() == -1
    assert (u * u).coords == (9, 4)


def test_fundamental_unit_is_minimal_above_one():
    # no unit a + b*sqrt2 with 1 < a + b*sqrt2 < 1 + sqrt2 in a small box
    for a in range(-20, 21):
        for b in range(-20, 21):
            x = ZSQRT2.element((a, b))
            if abs(x.norm()) == 1:
                v = a + b * 2 ** 0.5
                assert not (1 + 1e-9 < v < 1 + 2 ** 0.5 - 1e-9)


# embeddings

def test_real_signs_of_conjugates():
    assert sorted(real_signs(ZSQRT2.element((1, 1)))) == [-1, 1]


def test_approximations_carry_radii():
    vals = approximate(ZSQRT2.element((1, 1)), 15)
    assert len(vals) == 2
    got = sorted(float(v) for v, _ in vals)
    assert got == pytest.approx([1 - 2 ** 0.5, 1 + 2 ** 0.5], abs=1e-12)
    assert all(float(r) < 1e-12 for _, r in vals)


def test_field_inverse_exact():
    x = FieldElement.of(ZSQRT2, (Fraction(1, 2), Fraction(3)))
    assert (x * x.inverse()) == FieldElement.of(ZSQRT2, 1)


# properties

@given(quad(ZSQRT2), quad(ZSQRT2))
def test_norm_multiplicative_sqrt2(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@given(quad(ZI), quad(ZI))
def test_norm_multiplicative_gaussian(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@given(nonzero(quad(ZSQRT2)))
def test_norm_matches_embeddings(x):
    a, b = x.coords
    approx = (a + b * 2 ** 0.5) * (a - b * 2 ** 0.5)
    assert abs(approx - x.norm()) < 1e-6 * max(1, abs(approx))


@given(nonzero(quad(ZI)), nonzero(quad(ZI)))
def test_ideal_norm_multiplicative(x, y):
    a, b = principal(ZI, x), principal(ZI, y)
    assert ideal_norm(product(a, b)) == ideal_norm(a) * ideal_norm(b)


@given(nonzero(quad(ZSQRT2)))
def test_factorization_remultiplies(x):
    ideal = principal(ZSQRT2, x)
    acc = principal(ZSQRT2, 1)
    for pr, e in factor_ideal(ideal):
        for _ in range(e):
            acc = product(acc, pr.ideal)
    assert acc == ideal


@given(quad(ZSQRT2), quad(ZSQRT2), quad(ZSQRT2), nonzero(quad(ZSQRT2)))
def test_congruence_compatible_with_ring_ops(x, y, z, m):
    ideal = principal(ZSQRT2, m)
    y2 = y + m * z
    assert congruent(x, x, ideal)
    assert congruent(y, y2, ideal) and congruent(y2, y, ideal)
    assert congruent(x + y, x + y2, ideal)
    assert congruent(x * y, x * y2, ideal)
    assert quotient_reduce(y, ideal) == quotient_reduce(y2, ideal)


@given(st.tuples(coord, coord, coord, coord).map(ZZETA8.element))
def test_fixed_subring_elements_are_fixed(x):
    ext = extension("cm-sqrt2")
    s = ext.sigma
    fixed = x + s(x)
    assert s(fixed) == fixed
    assert ext.inclusion.preimage(fixed) is not None
