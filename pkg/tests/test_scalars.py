import cmath
import math
from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import given

from heckekms.scalars import CyclotomicValue, SqrtSum, cyclotomic_poly, simplify_scalar, squarefree_split

orders = st.integers(min_value=1, max_value=30)


def test_squarefree_split():
    assert squarefree_split(72) == (6, 2)
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(13) == (1, 13)


@given(st.integers(min_value=1, max_value=10_000))
def test_squarefree_split_recombines(n):
    k, s = squarefree_split(n)
    assert k * k * s == n
    assert all(s % (p * p) for p in range(2, int(math.isqrt(s)) + 1))


def test_inv_sqrt_squares_to_reciprocal():
    for n in (2, 3, 8, 12, 20):
        x = SqrtSum.inv_sqrt(n)
        assert x * x == Fraction(1, n)


def test_sqrtsum_demotes_to_fraction():
    assert simplify_scalar(SqrtSum.sqrt(4)) == 2
    assert isinstance(simplify_scalar(SqrtSum.sqrt(4)), Fraction)


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert len(cyclotomic_poly(12)) - 1 == 4


@given(orders, st.integers(min_value=0, max_value=100))
def test_root_matches_complex(n, k):
    z = CyclotomicValue.root(n, k)
    assert abs(complex(z) - cmath.exp(2j * math.pi * k / n)) < 1e-9


@given(orders)
def test_root_sum_vanishes(n):
    total = sum((CyclotomicValue.root(n, k) for k in range(n)), CyclotomicValue.rational(0))
    assert total == (1 if n == 1 else 0)


@given(orders, st.integers(0, 50), st.integers(0, 50))
def test_roots_multiply_exactly(n, a, b):
    assert CyclotomicValue.root(n, a) * CyclotomicValue.root(n, b) == CyclotomicValue.root(n, a + b)


@given(st.integers(2, 24), st.integers(0, 30))
def test_galois_is_exponent_map(n, k):
    units = [u for u in range(1, n) if math.gcd(u, n) == 1]
    for u in units:
        assert CyclotomicValue.root(n, k).galois(u) == CyclotomicValue.root(n, k * u)


def test_lift_preserves_value():
    z = CyclotomicValue.root(3, 1)
    assert z.lift(12) == z
    assert z.lift(12).order == 12
    assert z == CyclotomicValue.root(12, 4)


def test_conjugate_and_rationality():
    i = CyclotomicValue.root(4, 1)
    assert i * i.conjugate() == 1
    assert (i + i.conjugate()).is_rational()
    assert not i.is_rational()
