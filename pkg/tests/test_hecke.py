import cmath
import math
import random
from fractions import Fraction

import pytest

from heckekms.hecke import (
    HeckeElement,
    InsufficientLevel,
    arithmetic_average,
    beta_action,
    check_relations,
    dc_canonicalize,
    e,
    element_from_json,
    element_to_json,
    grading_component,
    inverse_mod,
    involution,
    is_arithmetic_fixed,
    left_coset_reps,
    modulus_needed,
    mu,
    mu_star,
    orbit_size,
    residues_with_denominator,
    sigma_analytic,
    sigma_t,
    tau_u,
    totally_positive_integers,
    unit_residues,
)
from heckekms.number_field import make_field, principal_ideal

Q = make_field(1)
half = Fraction(1, 2)


def test_same_double_coset_over_q():
    assert dc_canonicalize(Q(1), Q(half)) == dc_canonicalize(Q(1), Q(Fraction(3, 2)))


def test_same_double_coset_over_sqrt2():
    f = make_field(2)
    assert dc_canonicalize(f.one, f(Fraction(1, 4))) == dc_canonicalize(f.one, f(Fraction(3, 4), half))


def test_rejects_non_positive_x():
    f = make_field(2)
    with pytest.raises(ValueError):
        dc_canonicalize(f(1, 1), f.zero)


def test_coset_counts_of_mu():
    D = dc_canonicalize(Q(6), Q(0))
    assert D.left_count * D.right_count == 6
    assert {D.left_count, D.right_count} == {1, 6}


def test_coset_count_of_e_equals_orbit_size():
    f = make_field(2)
    r = f(Fraction(1, 4))
    D = dc_canonicalize(f.one, r)
    assert len(left_coset_reps(D)) == orbit_size(r) == 2
    assert len(left_coset_reps(dc_canonicalize(f.one, f(3)))) == 1


def test_spec_products_over_q():
    one = HeckeElement.one(Q)
    assert mu_star(Q(2)) * mu(Q(2)) == one
    assert mu(Q(2)) * mu_star(Q(2)) == (e(Q(0)) + e(Q(half))).scale(half)
    assert e(Q(half)) * e(Q(half)) == one


def test_generator_identities():
    f = make_field(3)
    one = HeckeElement.one(f)
    assert e(f.zero) == one
    assert mu(f(2, 1)) == one  # 2+sqrt3 is a totally positive unit
    r = f(Fraction(1, 3), Fraction(2, 3))
    assert e(f(2, 1) * r + f(5, -1)) == e(r)
    assert e(r).star() == e(-r)


@pytest.mark.parametrize("d", [1, -5, 2])
def test_convolution_is_associative(d):
    f = make_field(d)
    rng = random.Random(d)
    As = totally_positive_integers(f, 8)
    rs = residues_with_denominator(f, 2) + residues_with_denominator(f, 3)
    gens = [mu(a) for a in As] + [mu_star(a) for a in As] + [e(r) for r in rs]
    for _ in range(200):
        a, b, c = (rng.choice(gens) for _ in range(3))
        assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("d", [1, -5, 2, -15])
def test_involution_is_anti_multiplicative(d):
    f = make_field(d)
    a = mu(totally_positive_integers(f, 6)[-1])
    b = e(residues_with_denominator(f, 2)[-1])
    assert involution(a * b) == involution(b) * involution(a)
    assert involution(involution(a * b)) == a * b


@pytest.mark.parametrize(
    "d, max_norm, max_den",
    [(1, 6, 8), (-5, 10, 4), (2, 10, 4)],
)
def test_relations_small(d, max_norm, max_den):
    rep = check_relations(make_field(d), max_norm, max_den)
    assert rep.ok, rep.failures[:3]
    assert len(rep.counts) == 9


def test_time_evolution():
    t = 0.7
    got = sigma_t(mu(Q(2)), t)
    (dc, c), = got.terms.items()
    assert abs(complex(c) - cmath.exp(1j * t * math.log(2)) / math.sqrt(2)) < 1e-12
    assert sigma_t(e(Q(half)), t) == e(Q(half))
    assert sigma_analytic(mu(Q(2)), 2) == mu(Q(2)).scale(Fraction(1, 4))


def test_grading_component():
    H = mu(Q(2)) * mu_star(Q(3))
    assert grading_component(H, Q(Fraction(2, 3))) == H
    assert grading_component(H, Q(1)) == HeckeElement.zero(Q)


def test_tau_examples():
    assert tau_u(e(Q(Fraction(1, 4))), Q(1), 4) == e(Q(Fraction(1, 4)))
    assert tau_u(e(Q(Fraction(1, 4))), Q(3), 4) == e(Q(Fraction(3, 4)))
    assert tau_u(mu(Q(5)), Q(3), 4) == mu(Q(5))


def test_tau_is_independent_of_lift():
    f = make_field(-5)
    H = e(f(Fraction(1, 6), Fraction(1, 3)))
    for u in unit_residues(f, 6):
        lifted = u + f(6, 6)
        assert tau_u(H, u, 6) == tau_u(H, lifted, 6)


def test_tau_needs_level():
    with pytest.raises(InsufficientLevel):
        tau_u(e(Q(Fraction(1, 4))), Q(3), 2)


def test_inverse_mod():
    for d in (1, 2, -5):
        f = make_field(d)
        mO = principal_ideal(f(12))
        for u in unit_residues(f, 12):
            assert mO.reduce(u * inverse_mod(u, 12)) == f.one


def test_arithmetic_action_over_q_fixes_every_e():
    for q in (2, 3, 8):
        for r in residues_with_denominator(Q, q):
            assert is_arithmetic_fixed(e(r), q)


def test_arithmetic_average_over_sqrt2_is_fixed():
    f = make_field(2)
    A = arithmetic_average(e(f(Fraction(1, 8))), 8)
    assert is_arithmetic_fixed(A, 8)
    for u in unit_residues(f, 8):
        assert beta_action(u, A, 8) == A


def test_modulus_needed():
    assert modulus_needed(e(Q(Fraction(1, 6))) + e(Q(Fraction(1, 4)))) == 12


def test_json_round_trip():
    f = make_field(-5)
    H = mu(f(3)) * e(f(Fraction(1, 3)))
    assert element_from_json(f, element_to_json(H)) == H


def test_mu_rejects_non_positive():
    with pytest.raises(ValueError):
        mu(make_field(2)(1, 1))
