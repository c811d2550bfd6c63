"""Exact scalar types used as Hecke algebra coefficients and state values.

Two exact tiers sit above :class:`fractions.Fraction`:

* :class:`SqrtSum` -- finite sums ``sum q_k * sqrt(k)`` over squarefree ``k``;
  closed under products, which is what the ``1/sqrt(N_a)`` normalization of
  the isometries needs.
* :class:`CyclotomicValue` -- elements of ``Q(zeta_n)`` reduced modulo the
  n-th cyclotomic polynomial, with the Galois action ``zeta -> zeta^k``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, s)`` with ``n == k*k*s`` and ``s`` squarefree."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    k, s, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return k, s * n


class SqrtSum:
    """Exact element of the form ``sum_k q_k sqrt(k)`` (``k`` squarefree)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, q in (terms or {}).items():
            q = Fraction(q)
            if q:
                clean[k] = clean.get(k, 0) + q
        self.terms = {k: q for k, q in clean.items() if q}

    @classmethod
    def sqrt(cls, n: int, coeff=1) -> "SqrtSum":
        k, s = squarefree_split(n)
        return cls({s: Fraction(coeff) * k})

    @classmethod
    def inv_sqrt(cls, n: int) -> "SqrtSum":
        # 1/sqrt(n) = sqrt(n)/n
        return cls.sqrt(n, Fraction(1, n))

    def _coerce(self, other):
        if isinstance(other, SqrtSum):
            return other
        if isinstance(other, (int, Rational)):
            return SqrtSum({1: Fraction(other)})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for k, q in o.terms.items():
            t[k] = t.get(k, 0) + q
        return SqrtSum(t)

    __radd__ = __add__

    def __neg__(self):
        return SqrtSum({k: -q for k, q in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        t: dict[int, Fraction] = {}
        for k1, q1 in self.terms.items():
            for k2, q2 in o.terms.items():
                g = math.gcd(k1, k2)
                k = (k1 // g) * (k2 // g)
                t[k] = t.get(k, 0) + q1 * q2 * g
        return SqrtSum(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def conjugate(self):
        return self

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.terms.get(1, Fraction(0))

    def __float__(self):
        return float(sum(float(q) * math.sqrt(k) for k, q in self.terms.items()))

    def __complex__(self):
        return complex(float(self))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return abs(complex(self) - other) < 1e-12
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            q = self.terms[k]
            parts.append(str(q) if k == 1 else f"{q}*sqrt({k})")
        return " + ".join(parts)


def simplify_scalar(c):
    """Demote a rational ``SqrtSum`` to ``Fraction``; leave others alone."""
    if isinstance(c, SqrtSum) and c.is_rational():
        return c.to_fraction()
    if isinstance(c, CyclotomicValue) and c.is_rational():
        return c.to_fraction()
    return c


# ---------------------------------------------------------------- cyclotomics

def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # integer polys, low degree first; den monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    return q, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, low degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


def _reduce_mod_phi(coeffs: dict[int, Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    full = [Fraction(0)] * n
    for e, c in coeffs.items():
        full[e % n] += c
    for i in range(n - 1, deg - 1, -1):
        c = full[i]
        if c:
            for j, pj in enumerate(phi):
                full[i - deg + j] -= c * pj
    return tuple(full[:deg])


class CyclotomicValue:
    """Exact element of ``Q(zeta_n)``, ``zeta_n = exp(2 pi i / n)``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, terms: dict[int, Fraction] | None = None):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        self.coeffs = _reduce_mod_phi({e: Fraction(c) for e, c in (terms or {}).items()}, order)

    @classmethod
    def root(cls, n: int, k: int = 1) -> "CyclotomicValue":
        return cls(n, {k % n: Fraction(1)})

    @classmethod
    def rational(cls, q, n: int = 1) -> "CyclotomicValue":
        return cls(n, {0: Fraction(q)})

    def terms(self) -> dict[int, Fraction]:
        return {e: c for e, c in enumerate(self.coeffs) if c}

    def lift(self, m: int) -> "CyclotomicValue":
        if m % self.order:
            raise ValueError(f"cannot lift order {self.order} to {m}")
        f = m // self.order
        return CyclotomicValue(m, {e * f: c for e, c in self.terms().items()})

    def _pair(self, other):
        if isinstance(other, (int, Rational)):
            other = CyclotomicValue.rational(other, self.order)
        if not isinstance(other, CyclotomicValue):
            return None
        m = math.lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b = p
        t = a.terms()
        for e, c in b.terms().items():
            t[e] = t.get(e, 0) + c
        return CyclotomicValue(a.order, t)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue(self.order, {e: -c for e, c in self.terms().items()})

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return p[0] + (-p[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        a, b = p
        t: dict[int, Fraction] = {}
        for e1, c1 in a.terms().items():
            for e2, c2 in b.terms().items():
                e = (e1 + e2) % a.order
                t[e] = t.get(e, 0) + c1 * c2
        return CyclotomicValue(a.order, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def galois(self, k: int) -> "CyclotomicValue":
        """Apply ``zeta_n -> zeta_n^k``; ``k`` must be prime to the order."""
        if math.gcd(k, self.order) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.order}")
        return CyclotomicValue(self.order, {e * k: c for e, c in self.terms().items()})

    def conjugate(self):
        return self.galois(-1)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.order)
        return complex(sum(float(c) * z**e for e, c in self.terms().items()))

    def __eq__(self, other):
        p = self._pair(other)
        if p is None:
            if isinstance(other, (float, complex)):
                return abs(complex(self) - other) < 1e-12
            return NotImplemented
        return p[0].coeffs == p[1].coeffs

    def __hash__(self):
        return hash(complex(self).real.__round__(9))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        t = self.terms()
        if not t:
            return "0"
        return " + ".join(f"{c}*z{self.order}^{e}" if e else str(c) for e, c in sorted(t.items()))


def to_complex(c) -> complex:
    return complex(c)
