import random
from fractions import Fraction

import numpy as np
import pytest

from heckekms.boundary import class_members, minimal_norm_ideals
from heckekms.hecke import (
    HeckeElement,
    InsufficientLevel,
    e,
    mu,
    mu_star,
    residues_with_denominator,
    sigma_analytic,
    tau_u,
    unit_residues,
)
from heckekms.number_field import make_field
from heckekms.scalars import CyclotomicValue
from heckekms.states import (
    CharacterSpec,
    KMSStateSpec,
    artin_twist,
    chi_eval,
    e_r_function,
    fabulous_check,
    ground_eval,
    ground_point,
    kms_eval,
    kms_ground_limit_check,
    weil_identity_check,
    y0_mass,
)

Q = make_field(1)


def _conj(v):
    return v if isinstance(v, (int, Fraction)) else v.conjugate()


def test_chi_on_integers_is_trivial():
    for d in (1, 2, -5, -15):
        f = make_field(d)
        spec = CharacterSpec(f, 6)
        pairs = [(1, 0), (7, 0)] if f.is_rational else [(1, 0), (7, 0), (0, 1), (3, -2)]
        for z in (f(x, y) for x, y in pairs):
            assert chi_eval(z, spec) == 1


def test_chi_examples():
    assert chi_eval(Q(Fraction(1, 3)), CharacterSpec(Q, 3)) == CyclotomicValue.root(3, 1)
    f = make_field(2)
    assert chi_eval(f(0, Fraction(1, 2)), CharacterSpec(f, 2)) == -1


def test_chi_is_a_character():
    f = make_field(-5)
    spec = CharacterSpec(f, 6)
    zs = residues_with_denominator(f, 6)[:12]
    for a in zs:
        for b in zs:
            assert chi_eval(a + b, spec) == chi_eval(a, spec) * chi_eval(b, spec)


def test_chi_needs_level():
    with pytest.raises(InsufficientLevel):
        chi_eval(Q(Fraction(1, 5)), CharacterSpec(Q, 2))


def test_e_r_function_examples():
    pQ = ground_point(Q, (0, 0), 1, 4).point
    assert e_r_function(Q(3), pQ) == 1
    assert e_r_function(Q(Fraction(1, 4)), pQ) == CyclotomicValue.root(4, 1)
    f = make_field(2)
    p2 = ground_point(f, (0, 0), 1, 4).point
    spec = CharacterSpec(f, 4)
    expected = (chi_eval(f(Fraction(1, 4)), spec) + chi_eval(f(Fraction(3, 4), Fraction(1, 2)), spec)) * Fraction(1, 2)
    assert e_r_function(f(Fraction(1, 4)), p2, spec) == expected


def test_ground_examples_over_q():
    p = ground_point(Q, (0, 0), 1, 6)
    assert ground_eval(p, HeckeElement.one(Q)) == 1
    assert ground_eval(p, mu(Q(2)) * mu_star(Q(2))) == 0
    assert ground_eval(p, mu(Q(3)) * mu_star(Q(3))) == 0
    assert ground_eval(p, e(Q(Fraction(1, 2)))) == -1


def test_ground_kills_nontrivial_grading():
    p = ground_point(Q, (0, 0), 1, 2)
    assert ground_eval(p, mu(Q(2))) == 0
    assert ground_eval(p, mu(Q(2)) * mu_star(Q(3))) == 0


def test_ground_point_must_lie_in_its_cell():
    f = make_field(-15)
    with pytest.raises(ValueError):
        ground_point(f, (0, 0), f(1, 1), 6)


def _words(f):
    a = [x for x in (f(2), f(3))]
    return [HeckeElement.one(f), mu(a[0]), mu(a[1]), e(f(Fraction(1, 2))), mu(a[0]) * e(f(Fraction(1, 3)))]


@pytest.mark.parametrize("d", [1, -5, -15])
def test_ground_state_axioms(d):
    f = make_field(d)
    for cell in [c[:2] for c in minimal_norm_ideals(f).cells()]:
        p = ground_point(f, cell, 1, 12)
        W = _words(f)
        for H in W:
            assert ground_eval(p, H.star()) == _conj(ground_eval(p, H))
        G = np.array([[complex(ground_eval(p, a.star() * b)) for b in W] for a in W])
        assert np.allclose(G, G.conj().T)
        assert np.linalg.eigvalsh(G).min() > -1e-10


def test_kms_unital_and_symmetric():
    p = ground_point(Q, (0, 0), 1, 4)
    spec = KMSStateSpec(2, p, 2000)
    assert kms_eval(spec, HeckeElement.one(Q)).value == 1
    H = e(Q(Fraction(1, 4)))
    a, b = kms_eval(spec, H), kms_eval(spec, H.star())
    assert abs(complex(a.value).conjugate() - complex(b.value)) <= a.error + b.error


def test_kms_gram_positive_over_q():
    p = ground_point(Q, (0, 0), 1, 12)
    spec = KMSStateSpec(3, p, 2000)
    W = _words(Q)
    G = np.array([[complex(kms_eval(spec, a.star() * b).value) for b in W] for a in W])
    assert np.allclose(G, G.conj().T, atol=1e-10)
    assert np.linalg.eigvalsh(G).min() > -1e-10


def test_kms_rejects_small_beta():
    with pytest.raises(ValueError):
        KMSStateSpec(1, ground_point(Q), 100)


@pytest.mark.parametrize("beta", [2, 3])
def test_kms_closed_forms_over_q(beta):
    p = ground_point(Q, (0, 0), 1, 2)
    spec = KMSStateSpec(beta, p, 10_000)
    k = kms_eval(spec, mu(Q(2)) * mu_star(Q(2)))
    assert abs(k.value - 2.0 ** -beta) <= k.error
    k = kms_eval(spec, e(Q(Fraction(1, 2))))
    assert abs(k.value - (2.0 ** (1 - beta) - 1)) <= k.error


@pytest.mark.parametrize("d, bound", [(1, 4000), (-5, 300)])
@pytest.mark.parametrize("beta", [2, 3])
def test_kms_condition_on_generators(d, bound, beta):
    f = make_field(d)
    p = ground_point(f, (0, 0), 1, 12)
    spec = KMSStateSpec(beta, p, bound)
    gens = [mu(f(2)), mu_star(f(2)), e(f(Fraction(1, 2))), mu(f(3)) * e(f(Fraction(1, 3)))]
    for H1 in gens:
        for H2 in gens:
            lhs = kms_eval(spec, H1 * H2)
            rhs = kms_eval(spec, H2 * sigma_analytic(H1, beta))
            assert abs(complex(lhs.value) - complex(rhs.value)) <= lhs.error + rhs.error + 1e-12


def test_radon_nikodym_scaling_over_q():
    p = ground_point(Q, (0, 0), 1, 6)
    for beta in (2, 3):
        spec = KMSStateSpec(beta, p, 10_000)
        E = mu(Q(3)) * mu_star(Q(3))
        lhs = kms_eval(spec, mu(Q(2)) * E * mu_star(Q(2)))
        rhs = kms_eval(spec, E)
        assert abs(lhs.value - 2.0 ** -beta * rhs.value) <= lhs.error + rhs.error


def test_radon_nikodym_scaling_sqrt_minus_5():
    f = make_field(-5)
    p = ground_point(f, (0, 0), 1, 6)
    spec = KMSStateSpec(3, p, 300)
    E = e(f(Fraction(1, 2)))
    lhs = kms_eval(spec, mu(f(3)) * E * mu_star(f(3)))
    rhs = kms_eval(spec, E)
    assert abs(complex(lhs.value) - 9.0 ** -3 * complex(rhs.value)) <= lhs.error + rhs.error


@pytest.mark.parametrize("d", [-5, -15])
def test_y0_mass_lower_bound(d):
    f = make_field(d)
    table = minimal_norm_ideals(f)
    beta, B = 2, 300
    for c, j, a in table.cells():
        p = ground_point(f, (c, j), 1, 1)
        mass, err = y0_mass(KMSStateSpec(beta, p, B))
        ratios = [Fraction(b.norm, a.norm) for b in class_members(f, c, B)]
        bound = 1 / (1 + sum(float(s) ** -beta for s in ratios if s > 1))
        assert mass + err >= bound - 1e-12


def test_limit_check_constant_element():
    p = ground_point(Q, (0, 0), 1, 1)
    rep = kms_ground_limit_check(p, HeckeElement.one(Q), [2, 4])
    assert rep.gaps == [0, 0] and rep.monotone


def test_fabulous_examples_over_q():
    p = ground_point(Q, (0, 0), 1, 4)
    H = e(Q(Fraction(1, 4))) + e(Q(Fraction(3, 4)))
    assert fabulous_check(Q(1), H, p)
    assert fabulous_check(Q(3), H, p)


def test_fabulous_wrong_exponent_is_detected():
    # with the exponent N(u) instead of N(u)^-1 the identity breaks at level 5
    p = ground_point(Q, (0, 0), 1, 5)
    H = e(Q(Fraction(1, 5)))
    u = Q(2)
    assert fabulous_check(u, H, p)
    wrong = artin_twist(ground_eval(p, H), 2)
    assert ground_eval(p, tau_u(H, u, 5)) != wrong


def test_fabulous_requires_fixed_element():
    f = make_field(2)
    p = ground_point(f, (0, 0), 1, 8)
    with pytest.raises(ValueError):
        fabulous_check(f(3), e(f(Fraction(1, 8))), p)


def test_weil_identity():
    rng = random.Random(5)
    for d in (1, 2, -5):
        f = make_field(d)
        for m in (3, 8, 12):
            zs = residues_with_denominator(f, m)
            for u in unit_residues(f, m)[:6]:
                assert weil_identity_check(u, rng.choice(zs), m)
            assert weil_identity_check(f.one, zs[-1], m)


def test_weil_rejects_nonunit():
    with pytest.raises(ValueError):
        weil_identity_check(Q(2), Q(Fraction(1, 4)), 4)


@pytest.mark.parametrize("d", [2, -5])
def test_fabulous_with_orbit_average(d):
    from heckekms.hecke import arithmetic_average

    f = make_field(d)
    p = ground_point(f, (0, 0), 1, 8)
    H = arithmetic_average(e(f(Fraction(1, 8))), 8)
    assert all(fabulous_check(u, H, p) for u in unit_residues(f, 8))
