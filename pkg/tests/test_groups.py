import pytest
from hypothesis import given, strategies as st

from diophdef.errors import BadReduction, IdentityPoint, NotInKernel, PreconditionFailed
from diophdef.fixtures import ZSQRT2, ZZETA8, extension, group
from diophdef.groups import (StabilityExponent, b_pairs_of, b_set_sample, base_change, canonicalize,
                             check_stability_exponent, compose, curve_point, elliptic_curve, gm, gm_point, identity,
                             in_congruence_kernel, kernel_multiple, norm_one_generators, norm_one_torus,
                             pick_stability_modulus, power, rth_power_coset, torus_point, torus_rank, unit_sample,
                             vanishing_data)
from diophdef.numfield import ZZ, from_generators, principal
from diophdef.numfield.units import torsion_units

G = gm(ZSQRT2)
EPS = ZSQRT2.element((1, 1))
E32 = group("curve-32a").group


def unit_point(sign, k):
    u = EPS ** k if k >= 0 else EPS.inverse() ** (-k)
    return gm_point(G, u * sign)


units = st.builds(unit_point, st.sampled_from([1, -1]), st.integers(-8, 8)).filter(lambda p: not p.is_identity())


# group law

def test_gm_compose():
    p = gm_point(G, EPS)
    assert compose(G, p, p) == gm_point(G, ZSQRT2.element((3, 2)))


def test_power_zero_is_identity():
    assert power(G, gm_point(G, EPS), 0) == identity(G)


def test_curve_chord():
    got = compose(E32, curve_point(E32, 0, 0), curve_point(E32, 1, 0))
    assert got == curve_point(E32, -1, 0)


def test_off_curve_rejected():
    with pytest.raises(PreconditionFailed):
        curve_point(E32, 1, 1)


# coordinates

def test_gm_coordinates():
    assert identity(G).coords == (ZSQRT2.zero(), ZSQRT2.one())
    p = gm_point(G, ZSQRT2.element((3, 2)))
    assert p.coords == (ZSQRT2.element((2, 2)), ZSQRT2.one())


def test_curve_coordinates_keep_identity_last():
    assert identity(E32).coords == (ZZ.zero(), ZZ.zero(), ZZ.one())
    assert curve_point(E32, 0, 0).coords == (ZZ.zero(), ZZ.one(), ZZ.zero())


@given(units, st.sampled_from([1, -1]))
def test_canonical_coordinates_scale_free(p, s):
    scaled = tuple(c * s for c in p.coords)
    assert canonicalize(G, scaled) == p.coords


# vanishing ideal and the partial

def test_vanishing_data_of_three_plus_two_sqrt2():
    p = gm_point(G, ZSQRT2.element((3, 2)))
    vd = vanishing_data(p)
    gen = ZSQRT2.element((2, 2))
    assert vd.z == principal(ZSQRT2, gen)
    assert vd.c == principal(ZSQRT2, gen * gen)
    assert vd.partial == (vd.c.reduce(gen),)


def test_identity_has_no_partial():
    with pytest.raises(IdentityPoint):
        vanishing_data(identity(G))


def test_worked_square_identity():
    u = ZSQRT2.element((3, 2))
    lhs = u * u - 1 - 2 * (u - 1)
    assert lhs == ZSQRT2.element((2, 2)) ** 2


@given(units, units)
def test_partial_additive(p, q):
    pq = compose(G, p, q)
    if pq.is_identity():
        return
    vp, vq, vpq = vanishing_data(p), vanishing_data(q), vanishing_data(pq)
    modulus = vp.c + vq.c
    assert modulus.contains(pq.coords[0] - p.coords[0] - q.coords[0])
    assert vpq.z.subset(vp.z + vq.z)


@given(units, st.integers(1, 20))
def test_partial_power_law(p, nu):
    pn = power(G, p, nu)
    if pn.is_identity():
        # torsion: -1 to an even power
        assert p.coords[0] == -2 and nu % 2 == 0
        return
    vp, vn = vanishing_data(p), vanishing_data(pn)
    assert vn.z.subset(vp.z)
    assert vp.c.contains(pn.coords[0] - p.coords[0] * nu)


@given(units)
def test_partial_generates_modulo_z(p):
    # the partial is a generator of z_P modulo c_P
    vd = vanishing_data(p)
    assert from_generators(ZSQRT2, [vd.partial[0]]) + vd.c == vd.z


# kernels

def test_kernel_multiple_of_fundamental_unit_mod_three():
    p = gm_point(G, EPS)
    k = kernel_multiple(p, principal(ZSQRT2, 3))
    assert 8 % k == 0
    assert in_congruence_kernel(power(G, p, k), principal(ZSQRT2, 3))
    assert kernel_multiple(p, principal(ZSQRT2, 3), method="iterate") == k


def test_identity_in_every_kernel():
    for n in (2, 3, 7):
        assert in_congruence_kernel(identity(G), principal(ZSQRT2, n))


def test_bad_reduction_at_two():
    with pytest.raises(BadReduction):
        in_congruence_kernel(curve_point(E32, 0, 0), principal(ZZ, 2))


@given(units, st.integers(2, 7))
def test_kernel_membership_implies_z_containment(p, n):
    ideal = principal(ZSQRT2, n)
    if in_congruence_kernel(p, ideal):
        assert vanishing_data(p).z.subset(ideal)


def test_rth_power_coset():
    p = power(G, gm_point(G, EPS), kernel_multiple(gm_point(G, EPS), principal(ZSQRT2, 3)))
    w = rth_power_coset(p, principal(ZSQRT2, 3), 2)
    assert w.point == power(G, p, 2)
    with pytest.raises(NotInKernel):
        rth_power_coset(gm_point(G, EPS), principal(ZSQRT2, 3), 2)


# stability

def test_cm_descent_exhaustive():
    fx = group("cm-sqrt2")
    zeta = ZZETA8.theta()
    eps = ZZETA8.element((1, 1, 0, -1))
    eps_inv = eps.inverse()
    sample = [gm_point(fx.group, zeta ** j * (eps ** k if k >= 0 else eps_inv ** -k))
              for j in range(8) for k in range(-12, 13)]
    rep = check_stability_exponent(fx.group, fx.ext, fx.exponent, sample)
    assert rep.ok and rep.in_kernel > 0 and rep.sampled == 200


def test_torsion_units_of_zeta8():
    assert len(torsion_units(ZZETA8)) == 8


def test_torus_triple_generator_and_rank():
    t = group("torus-triple").group
    gens = norm_one_generators(t)
    assert len(gens) == 1
    a, b = gens[0].coords[0] + 1, gens[0].coords[1]
    assert a * a - 2 * b * b == 1
    assert (a.coords, b.coords) in {((-3,), (-2,)), ((-3,), (2,)), ((3,), (2,)), ((3,), (-2,))}
    assert torus_rank(ZZ, 2) == 1
    assert power(t, gens[0], 5) != identity(t)


def test_torus_kernel_points_descend():
    fx = group("torus-triple")
    big = base_change(fx.group, fx.ext.inclusion)
    gen = norm_one_generators(fx.group)[0]
    g_big = type(gen)(big, tuple(fx.ext.inclusion(c) for c in gen.coords))
    sample = [power(big, g_big, k) for k in range(0, 9)]
    rep = check_stability_exponent(big, fx.ext, StabilityExponent(1, principal(ZZ, 3)), sample)
    assert rep.ok and rep.in_kernel >= 2


def test_bset_pairs_have_subfield_ratios():
    fx = group("cm-sqrt2")
    pairs = b_set_sample(fx.torus, fx.ext, 3, count=3)
    nonzero = [p for p in pairs if not p.ratio().is_zero()]
    assert nonzero
    for p in pairs:
        assert fx.ext.inclusion.preimage_field(p.ratio()) is not None


def test_identity_pair_ratio_zero():
    t = norm_one_torus(ZZ, 2)
    pairs = b_pairs_of(identity(t))
    assert [(p.i, p.j) for p in pairs] == [(0, 2), (1, 2), (2, 2)]
    assert all(p.ratio().is_zero() for p in pairs if p.i != p.j)


def test_torus_point_norm_check():
    t = norm_one_torus(ZZ, 2)
    assert torus_point(t, 3, 2).coords == (ZZ.element(2), ZZ.element(2), ZZ.one())
    with pytest.raises(PreconditionFailed):
        torus_point(t, 2, 1)


@pytest.mark.parametrize("a,n", [((0, 0, 0, -1, 0), 15), ((0, 0, 0, 0, -1), 35)])
def test_stability_modulus(a, n):
    assert pick_stability_modulus(elliptic_curve(ZZ, a)) == n


def test_unit_sample_size():
    eps = ZSQRT2.element((1, 1))
    assert len(unit_sample(G, [eps], 3)) == 2 * 7


def test_sqrt2_self_stability():
    fx = group("gm-sqrt2")
    rep = check_stability_exponent(fx.group, fx.ext, fx.exponent, unit_sample(fx.group, [EPS], 4))
    assert rep.ok and rep.sampled == rep.passed


def test_cm_extension_registered():
    assert extension("cm-sqrt2").galois_degree == 4
