from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from heckekms.number_field import (
    Form,
    as_fractional,
    canonical_mod_units,
    form_of_ideal,
    fundamental_unit,
    ideal_from_gens,
    ideal_of_form,
    ideals_of_norm,
    ideals_up_to,
    is_totally_positive,
    make_field,
    narrow_class_group,
    narrowly_principal,
    primes_above,
    principal_ideal,
    reduce_form,
    same_narrow_class,
    unit_ideal,
    unit_orbit,
    valuation,
)

TEST_FIELDS = [1, 2, 3, 5, -1, -5, -15]
FIELDS = st.sampled_from([2, 3, 5, 6, 7, 10, 13, -1, -2, -3, -5, -7, -15, -23])
small = st.integers(min_value=-12, max_value=12)


def elements(d):
    f = make_field(d)
    return st.builds(lambda x, y: f(x, 0 if f.is_rational else y), small, small)


def test_make_field_rejects_non_squarefree():
    with pytest.raises(ValueError):
        make_field(12)
    with pytest.raises(ValueError):
        make_field(0)


def test_discriminants():
    assert make_field(1).disc == 1
    assert make_field(5).disc == 5
    assert make_field(2).disc == 8
    assert make_field(-1).disc == -4
    assert make_field(-15).disc == -15


@pytest.mark.parametrize(
    "d, eps, norm, eps_plus",
    [
        (2, (1, 1), -1, (3, 2)),
        (3, (2, 1), 1, (2, 1)),
        (5, (0, 1), -1, (1, 1)),  # w = (1+sqrt5)/2, w^2 = (3+sqrt5)/2
        (6, (5, 2), 1, (5, 2)),
        (7, (8, 3), 1, (8, 3)),
    ],
)
def test_fundamental_units(d, eps, norm, eps_plus):
    f = make_field(d)
    ud = fundamental_unit(f)
    assert ud.fundamental_unit == f(*eps)
    assert ud.norm_of_epsilon == norm
    assert ud.eps_plus == f(*eps_plus)
    assert is_totally_positive(ud.eps_plus)


def test_large_unit_from_continued_fraction():
    f = make_field(94)
    u = fundamental_unit(f).fundamental_unit
    assert u == f(2143295, 221064)
    assert u.norm() == 1


def test_total_positivity():
    f = make_field(2)
    assert is_totally_positive(f(3, 2))
    assert not is_totally_positive(f(1, 1))  # 1 - sqrt2 < 0
    assert not is_totally_positive(f(-1))
    g = make_field(-5)
    assert is_totally_positive(g(-1, 3))  # no real places


@settings(max_examples=60)
@given(st.data())
def test_norm_multiplicative(data):
    d = data.draw(FIELDS)
    a = data.draw(elements(d))
    b = data.draw(elements(d))
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a * b).conj() == a.conj() * b.conj()


@settings(max_examples=60)
@given(st.data())
def test_ideal_norm_multiplicative(data):
    d = data.draw(FIELDS)
    f = make_field(d)
    ideals = ideals_up_to(30, f)
    I = data.draw(st.sampled_from(ideals))
    J = data.draw(st.sampled_from(ideals))
    assert (I * J).norm == I.norm * J.norm
    assert I.divides(I * J)


@pytest.mark.parametrize("d", TEST_FIELDS)
def test_principal_ideal_norm(d):
    f = make_field(d)
    pairs = [(3, 0)] if f.is_rational else [(3, 0), (2, 1), (5, -2)]
    for x, y in pairs:
        z = f(x, y)
        assert principal_ideal(z).norm == abs(z.norm())


def test_gaussian_ideal_count():
    f = make_field(-1)
    assert sum(len(ideals_of_norm(n, f)) for n in range(1, 6)) == 5


@pytest.mark.parametrize("d", [2, 3, 5, -1, -5, -15, 7])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_decomposition(d, p):
    f = make_field(d)
    ps = primes_above(p, f)
    total = 1
    for P in ps:
        total *= P.ideal.norm ** P.e
    assert total == p * p
    prod = unit_ideal(f)
    for P in ps:
        prod = prod * P.ideal ** P.e
    assert prod == principal_ideal(f(p))
    for P in ps:
        assert valuation(principal_ideal(f(p)), P) == P.e


def test_narrowly_principal_over_sqrt3():
    f = make_field(3)
    P2 = primes_above(2, f)[0].ideal
    assert narrowly_principal(P2) is None  # generated by 1+sqrt3 of norm -2
    g = narrowly_principal(P2 * P2)
    assert g is not None and is_totally_positive(g)
    assert principal_ideal(g) == P2 * P2


@pytest.mark.parametrize(
    "d, h",
    [(1, 1), (2, 1), (3, 2), (5, 1), (-1, 1), (-5, 2), (-15, 2), (-14, 4), (-23, 3), (-47, 5),
     (-71, 7), (6, 2), (7, 2), (10, 2), (15, 4), (21, 2), (30, 4), (34, 4), (79, 6), (82, 4), (105, 4)],
)
def test_narrow_class_numbers(d, h):
    assert narrow_class_group(make_field(d)).order == h


@pytest.mark.parametrize("d", [3, 6, 10, 15, -5, -14, -23, 34])
def test_class_assignment_agrees_with_ratio_test(d):
    f = make_field(d)
    G = narrow_class_group(f)
    ideals = ideals_up_to(20, f)
    for I in ideals:
        for J in ideals:
            assert (G.class_of(I) == G.class_of(J)) == same_narrow_class(I, J)


@pytest.mark.parametrize("d", [-5, -23, 15, 79])
def test_class_group_is_a_group(d):
    G = narrow_class_group(make_field(d))
    n = G.order
    for i in range(n):
        assert G.mul(i, 0) == i
        assert G.mul(i, G.inverse(i)) == 0
        for j in range(n):
            assert G.mul(i, j) == G.mul(j, i)


@pytest.mark.parametrize("d", [-5, -15, 3, 10, 15])
def test_class_product_matches_ideal_product(d):
    f = make_field(d)
    G = narrow_class_group(f)
    ideals = ideals_up_to(15, f)
    for I in ideals:
        for J in ideals:
            assert G.class_of(I * J) == G.mul(G.class_of(I), G.class_of(J))


def test_forms_round_trip():
    f = make_field(-5)
    for I in ideals_up_to(20, f):
        F = form_of_ideal(I)
        assert F.disc == f.disc
        J = ideal_of_form(F, f)
        assert J.norm == F.a


def test_reduced_form_is_equivalent_value():
    F = reduce_form(Form(6, 5, 2))
    assert F.disc == 25 - 48


def test_canonical_mod_units_is_idempotent():
    f = make_field(2)
    for z in (f(3), f(7, 4), f(17, 12), f(5, 1)):
        if not is_totally_positive(z):
            continue
        c, u = canonical_mod_units(z)
        assert c == z * u
        assert canonical_mod_units(c)[0] == c


def test_canonical_labels_positive_integers_in_imaginary_fields():
    f = make_field(-15)
    assert canonical_mod_units(f.one)[0] == f.one
    assert canonical_mod_units(f(-2))[0] == f(2)


def test_unit_orbit_sqrt2():
    f = make_field(2)
    O = as_fractional(unit_ideal(f))
    orb = unit_orbit(f(Fraction(1, 4)), O)
    assert orb == (f(Fraction(1, 4)), f(Fraction(3, 4), Fraction(1, 2)))


def test_ideal_normal_form_from_generators():
    f = make_field(-5)
    I = ideal_from_gens(f, [f(2), f(1, 1)])
    assert I.norm == 2
    assert ideal_from_gens(f, [f(1, 1), f(2), f(3, 1)]) == I
