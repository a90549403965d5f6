from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from diophdef.bounds import (CaptureCertificate, big_w, c_of_m, capture, check_norm_gap, d_of, dbound_check,
                             find_big_w, four_squares, four_squares_cert, power_matrix, quad_ext_norm_bound,
                             quadratic_extras, search_certificate)
from diophdef.errors import (CapExceeded, CertificateInvalid, ConditionsNotCertified, PreconditionFailed,
                             SearchExhausted, SequenceExhausted)
from diophdef.fixtures import ZSQRT2, ZZETA8, extension, group
from diophdef.numfield import ZZ, FieldElement, principal
from diophdef.numfield.linalg import det_bareiss

Q_SQRT2 = extension("q-sqrt2")
CM = extension("cm-sqrt2")
TORUS = group("cm-sqrt2").torus


def z(n):
    return ZZ.element(n)


def big(*coords):
    return ZZETA8.element(coords)


# constants

def test_c_of_m_values():
    assert (c_of_m(1), c_of_m(2)) == (8, 45)
    assert power_matrix(1) == [[0, 1], [1, 1]]
    assert power_matrix(2) == [[0, 0, 1], [1, 1, 1], [4, 2, 1]]


def test_c_of_m_zero_rejected():
    with pytest.raises(CapExceeded):
        c_of_m(0)


def largest_minor(a):
    n = len(a)
    best = 0
    for k in range(1, n + 1):
        for rs in combinations(range(n), k):
            for cs in combinations(range(n), k):
                best = max(best, abs(det_bareiss([[a[r][c] for c in cs] for r in rs])))
    return best


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_c_of_m_matches_enumeration(m):
    assert c_of_m(m) == (m + 1) ** 2 * (largest_minor(power_matrix(m)) + 1)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
       st.integers(0, 2), st.integers(0, 2))
def test_largest_minor_monotone_under_growth(rows, i, j):
    grown = [list(r) for r in rows]
    grown[i][j] = abs(grown[i][j]) + 10 ** 6
    assert largest_minor(grown) >= largest_minor(rows)


@pytest.mark.parametrize("m,alpha,d", [(1, 2, -16), (1, 1, 0), (2, 3, 270 ** 4)])
def test_d_of_values(m, alpha, d):
    assert d_of(m, z(alpha)) == d


@given(st.integers(1, 3), st.integers(-12, 12))
def test_d_vanishes_exactly_on_small_naturals(m, a):
    assert d_of(m, z(a)).is_zero() == (0 <= a <= m)


# norm gap and the D-bound

def test_norm_gap_sqrt2():
    alpha = ZSQRT2.element((0, 1))
    ideal = principal(ZSQRT2, d_of(2, alpha))
    rep = check_norm_gap(alpha, ideal, Q_SQRT2.automorphisms, 2)
    assert rep.holds


def test_norm_gap_trivial_conjugate():
    alpha = ZSQRT2.element(5)
    rep = check_norm_gap(alpha, principal(ZSQRT2, d_of(2, alpha)), Q_SQRT2.automorphisms, 2)
    assert rep.holds and rep.margins[0] == rep.ideal_norm


def test_dbound_rejects_small_conjugate():
    with pytest.raises(PreconditionFailed):
        dbound_check(ZSQRT2.element((3, 2)), Q_SQRT2.automorphisms)


def test_dbound_holds_for_three_plus_sqrt2():
    rep = dbound_check(ZSQRT2.element((3, 1)), Q_SQRT2.automorphisms)
    assert rep.lhs == (0, 8) and rep.rhs == 4 * 49
    assert rep.holds


# captures over Z in Z[sqrt2]

def test_finite_capture_seven():
    alpha = ZSQRT2.element(7)
    cert = CaptureCertificate("finite", alpha, z(7), principal(ZZ, d_of(2, z(7))), {"m": 2})
    assert capture(cert, Q_SQRT2) == 7


def test_finite_capture_rejects_sqrt2():
    assert search_certificate("finite", ZSQRT2.element((0, 1)), Q_SQRT2) is None


def test_finite_corrupted_congruence_names_clause():
    alpha = ZSQRT2.element(7)
    cert = CaptureCertificate("finite", alpha, z(8), principal(ZZ, d_of(2, z(7))), {"m": 2})
    with pytest.raises(CertificateInvalid) as e:
        capture(cert, Q_SQRT2)
    assert e.value.clause == "congruence"


def test_totally_real_capture_five():
    one = ZSQRT2.one()
    cert = CaptureCertificate("totally_real", ZSQRT2.element(5), z(5), principal(ZZ, 121), {"u": (one,) * 4})
    assert capture(cert, Q_SQRT2) == 5


def test_totally_real_capture_one():
    zero = ZSQRT2.zero()
    cert = CaptureCertificate("totally_real", ZSQRT2.one(), z(1), principal(ZZ, 9), {"u": (zero,) * 4})
    assert capture(cert, Q_SQRT2) == 1


def test_totally_real_search_on_cm_fixture():
    cert = search_certificate("totally_real", big(2, 0, 0, 0), CM)
    assert cert.b.coords == (2, 0)
    assert cert.ideal_I == principal(ZSQRT2, 25)
    assert capture(cert, CM).coords == (2, 0)


def test_totally_real_rejects_external_element():
    # i is not in Z[sqrt2]: no congruence b exists modulo the forced ideal
    assert search_certificate("totally_real", big(0, 0, 1, 0), CM) is None


# four squares

@pytest.mark.parametrize("x,zz,ys,y5", [(3, 1, [1, 1, 0, 0], 1), (8, 1, [2, 1, 1, 1], 1)])
def test_integer_four_squares(x, zz, ys, y5):
    cert = four_squares_cert(z(x), z(zz))
    assert sorted((abs(y.coords[0]) for y in cert.ys), reverse=True) == ys
    assert cert.y5 == y5 and cert.verify()


def test_four_squares_quadratic():
    cert = four_squares_cert(ZSQRT2.element((3, 1)), ZSQRT2.zero())
    assert cert.verify()


def test_four_squares_rejects_negative():
    with pytest.raises(PreconditionFailed):
        four_squares_cert(z(1), z(3))


@given(st.integers(0, 10 ** 6))
def test_integer_four_squares_exact(n):
    ys = four_squares(z(n))
    assert sum(y.coords[0] ** 2 for y in ys) == n


@given(st.integers(1, 40), st.integers(-20, 20))
def test_totally_positive_sqrt2_certified(a, b):
    x = ZSQRT2.element((a, b))
    if 2 * b * b >= a * a:
        return
    assert four_squares_cert(x, ZSQRT2.zero()).verify()


# the w construction

def test_find_big_w_integers():
    u, v, (num, den) = find_big_w(range(1, 100), 10, ZZ)
    assert (u, v) == (FieldElement.of(ZZ, 3), FieldElement.of(ZZ, 1))
    assert num / den == FieldElement.of(ZZ, Fraction(25, 2))


def test_find_big_w_zero_target_takes_first_pair():
    u, v, _ = find_big_w(range(1, 100), 0, ZZ)
    assert (u, v) == (FieldElement.of(ZZ, 1), FieldElement.of(ZZ, 2))


def test_find_big_w_constant_sequence():
    with pytest.raises(SequenceExhausted):
        find_big_w([5] * 50, 1, ZZ)


@given(st.integers(-50, 50), st.integers(-50, 50).filter(bool))
def test_big_w_is_large_when_u_large(u, gap):
    fu, fv = FieldElement.of(ZZ, u), FieldElement.of(ZZ, u + gap)
    num, den = big_w(fu, fv)
    assert (num / den).coords[0] > u * u


def test_quadratic_bound_on_cm_fixture():
    x = big(2, 1, 0, -1)  # 2 + sqrt2
    rep = quad_ext_norm_bound(x, 1, CM)
    assert rep.lhs == 0 and rep.holds


def test_quadratic_bound_rejects_small_w():
    with pytest.raises(ConditionsNotCertified):
        quad_ext_norm_bound(big(2, 0, 0, 0), FieldElement.of(ZZETA8, Fraction(1, 2)), CM)


def test_quadratic_capture_four():
    alpha = big(4, 0, 0, 0)
    cert = search_certificate("quadratic", alpha, CM, TORUS)
    assert cert.extras["X1"].coords == (2, 0, 0, 0) and cert.extras["X2"] == 1
    assert capture(cert, CM, TORUS).coords == (4, 0)


def test_quadratic_zero_x2_rejected():
    alpha = big(4, 0, 0, 0)
    cert = search_certificate("quadratic", alpha, CM, TORUS)
    bad = CaptureCertificate("quadratic", alpha, cert.b, cert.ideal_I, {**cert.extras, "X2": ZZETA8.zero()})
    with pytest.raises(CertificateInvalid) as e:
        capture(bad, CM, TORUS)
    assert e.value.clause == "x2_nonzero"


def test_quadratic_rejects_external_element():
    alpha = big(0, 0, 1, 0)
    extras = quadratic_extras(alpha, CM, TORUS)
    assert search_certificate("quadratic", alpha, CM, TORUS) is None
    assert extras["X2"] == 1


# soundness fuzz

@given(st.tuples(*[st.integers(-6, 6)] * 4).map(lambda c: ZZETA8.element(c)))
def test_no_certificate_extracts_outside_subring(alpha):
    for variant in ("totally_real", "finite"):
        try:
            cert = search_certificate(variant, alpha, CM)
        except SearchExhausted:
            continue
        if cert is not None:
            got = capture(cert, CM)
            assert CM.inclusion(got) == alpha
