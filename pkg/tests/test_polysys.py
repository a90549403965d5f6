import pytest
from hypothesis import given, strategies as st

from diophdef.errors import MissingInclusion
from diophdef.fixtures import ZI, ZSQRT2
from diophdef.numfield import ZZ, from_generators, integers_into
from diophdef.polysys import (Builder, DiophDefinition, Poly, PolySystem, Var, brute_force_solutions,
                              combine_to_single, compose_transitive, find_rootless_quadratic, grid_zero_sets,
                              has_square_root, intersect_definitions, nonzero_gadget, superset_shrink, t_image,
                              total_positivity_system, transport, unit_gadget, veronese, witness_nonzero)


def zz_def(name, fn):
    b = Builder(ZZ)
    t = b.var("t", "fundamental")
    s = b.var("s")
    b.eq(fn(t, s), name)
    return DiophDefinition(b.build(), "t", name)


EVENS = zz_def("evens", lambda t, s: t - 2 * s)
THIRDS = zz_def("multiples of 3", lambda t, s: t - 3 * s)
ANY = zz_def("everything", lambda t, s: s)


def values(xs):
    return sorted(x.coords[0] for x in xs)


# rootless polynomials and the combiner

@pytest.mark.parametrize("ring,coeffs", [(ZSQRT2, (1, 0, 1)), (ZZ, (1, 0, 1)), (ZI, (-2, 0, 1))])
def test_rootless_choice(ring, coeffs):
    assert find_rootless_quadratic(ring).coeffs == coeffs


def test_gaussian_non_squares():
    # neither 2 nor 3 has a square root in Q(i); the search takes c = 2 first
    assert not has_square_root(ZI, 2) and not has_square_root(ZI, 3)
    assert has_square_root(ZI, -4)


def _two_var_system(ring, polys):
    return PolySystem(ring, (Var("x", "fundamental"), Var("y")), tuple(polys))


def test_combine_two_is_sum_of_squares():
    x, y = Poly.var(ZZ, 0, 2), Poly.var(ZZ, 1, 2)
    f, g = x - 1, y + 2
    single = combine_to_single(_two_var_system(ZZ, [f, g]), find_rootless_quadratic(ZZ))
    assert single.polys == (f * f + g * g,)


def test_combine_single_unchanged():
    x = Poly.var(ZZ, 0, 2)
    sysm = _two_var_system(ZZ, [x * x - 4])
    assert combine_to_single(sysm, find_rootless_quadratic(ZZ)).polys == (x * x - 4,)


def test_combine_three_over_sqrt2_matches_box():
    x, y = Poly.var(ZSQRT2, 0, 2), Poly.var(ZSQRT2, 1, 2)
    polys = [x * y, x - y, x * x - 2 * y]
    single = combine_to_single(_two_var_system(ZSQRT2, polys), find_rootless_quadratic(ZSQRT2))
    f, g, h = polys
    assert single.polys[0] == (f * f + g * g) ** 2 + h * h
    sets = grid_zero_sets([*polys, single.polys[0]], ZSQRT2, 2, 1)
    assert sets[0] & sets[1] & sets[2] == sets[3]


# gadgets

def test_unit_gadget_examples():
    g = unit_gadget(ZZ)
    assert g.is_satisfied({"t": ZZ.element(-1), "s": ZZ.element(-1)})
    g2 = unit_gadget(ZSQRT2)
    assert g2.is_satisfied({"t": ZSQRT2.element((1, 1)), "s": ZSQRT2.element((-1, 1))})
    assert not brute_force_solutions(g, 1000, fixed={"t": ZZ.element(2)})


@pytest.mark.parametrize("x,witness", [(3, (2, 0, -1)), (1, (0, 0, 1))])
def test_nonzero_witness_values(x, witness):
    assert tuple(v.coords[0] for v in witness_nonzero(ZZ.element(x))) == witness


def test_nonzero_gadget_has_no_zero_solution():
    assert not brute_force_solutions(nonzero_gadget(ZZ), 6, fixed={"x": ZZ.zero()})


@given(st.tuples(st.integers(-40, 40), st.integers(-40, 40)).filter(any).map(ZI.element))
def test_nonzero_gadget_complete(x):
    y, z, w = witness_nonzero(x)
    assert nonzero_gadget(ZI).is_satisfied({"x": x, "y": y, "z": z, "w": w})


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_nonzero_gadget_sound(coords):
    # any gadget solution with small auxiliaries has x != 0
    y, z, w = (ZZ.element(c) for c in coords)
    g = nonzero_gadget(ZZ)
    assert not g.is_satisfied({"x": ZZ.zero(), "y": y, "z": z, "w": w})


def test_total_positivity_examples():
    g = total_positivity_system(ZZ)
    one = ZZ.one()
    sol = {"x": ZZ.element(3), "z": one, "y1": one, "y2": one, "y3": ZZ.zero(), "y4": ZZ.zero(), "y5": one}
    gadget_names = [n for n in g.names if n not in sol]
    sol.update(zip(gadget_names, witness_nonzero(one)))
    assert g.is_satisfied(sol)
    neg = brute_force_solutions(g, 2, fixed={"x": one, "z": ZZ.element(3)}, limit=1)
    assert neg == []


# combinators

def test_intersection_of_evens_and_thirds():
    assert values(t_image(intersect_definitions(EVENS, THIRDS).system, "t", 6)) == [-6, 0, 6]


def test_intersection_with_trivial_and_self():
    base = values(t_image(EVENS.system, "t", 6))
    assert values(t_image(intersect_definitions(EVENS, ANY).system, "t", 6)) == base
    assert values(t_image(intersect_definitions(EVENS, EVENS).system, "t", 6)) == base


def test_compose_transitive_evens_into_gaussian():
    b = Builder(ZI)
    t = b.var("t", "fundamental")
    b.var("s")
    b.eq(t - b.get("s") * b.get("s"), "squares")
    squares = DiophDefinition(b.build(), "t", "squares")
    composed = compose_transitive(EVENS, squares, integers_into(ZI))
    got = t_image(composed.system, "t", 4)
    # t and s both squares with t = 2s
    assert sorted(x.coords for x in got) == [(0, 0)]


def test_compose_mismatched_rings():
    with pytest.raises(MissingInclusion):
        compose_transitive(EVENS, EVENS, integers_into(ZI))


def test_transport_roots_of_t_times_t_minus_one():
    x = Poly.var(ZZ, 0, 1)
    bsys = PolySystem(ZZ, (Var("x", "fundamental"),), (x * (x - 1),))
    b = Builder(ZI)
    t = b.var("t", "fundamental")
    s = b.var("s")
    b.eq(t - s * s, "squares")
    tsys = transport(bsys, DiophDefinition(b.build(), "t", "squares"), integers_into(ZI))
    got = {sol["x"].coords for sol in brute_force_solutions(tsys, 2)}
    assert got == {(0, 0), (1, 0)}


def test_transport_without_inclusion():
    x = Poly.var(ZZ, 0, 1)
    bsys = PolySystem(ZZ, (Var("x", "fundamental"),), (x,))
    with pytest.raises(MissingInclusion):
        transport(bsys, DiophDefinition(unit_gadget(ZI), "t"))


def test_superset_shrink_contains_small_elements():
    b = Builder(ZSQRT2)
    t = b.var("t", "fundamental")
    b.eq(t * 0, "everything")
    shrunk = superset_shrink(DiophDefinition(b.build(), "t", "all"), ZSQRT2.element((0, 1)))
    sol = brute_force_solutions(shrunk.system, 1, fixed={"t": ZSQRT2.zero()}, limit=1)
    assert sol


# veronese

def test_veronese_examples():
    a, b = ZZ.element(5), ZZ.element(7)
    assert veronese([a, b], 2) == [a * a, a * b, b * b]
    zero, one = ZZ.zero(), ZZ.one()
    assert veronese([zero, zero, one], 3)[-1] == one
    assert all(v.is_zero() for v in veronese([zero, zero, one], 3)[:-1])
    u = ZI.element((1, 1))
    assert veronese([u, ZI.one()], 2) == [ZI.element((0, 2)), u, ZI.one()]


@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9)).filter(any).map(ZSQRT2.element),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9)).map(ZSQRT2.element),
       st.integers(1, 3))
def test_veronese_ideal_is_power(x, y, h):
    base = from_generators(ZSQRT2, [x, y])
    assert from_generators(ZSQRT2, veronese([x, y], h)) == base ** h


# oracle

def test_oracle_lexicographic_and_deterministic():
    g = unit_gadget(ZZ)
    first = brute_force_solutions(g, 2)
    assert [(s["t"].coords[0], s["s"].coords[0]) for s in first] == [(-1, -1), (1, 1)]
    assert first == brute_force_solutions(g, 2)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3))
def test_combiner_preserves_zero_sets(coeffs):
    x, y = Poly.var(ZZ, 0, 2), Poly.var(ZZ, 1, 2)
    polys = [a * x + b * y + c for a, b, c in coeffs]
    single = combine_to_single(_two_var_system(ZZ, polys), find_rootless_quadratic(ZZ)).polys[0]
    sets = grid_zero_sets([*polys, single], ZZ, 2, 3)
    common = set.intersection(*sets[:-1])
    assert common == sets[-1]
