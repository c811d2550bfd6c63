"""Exact arithmetic in Q and quadratic fields.

Elements are ``x + y*w`` with rational ``x, y`` where ``w`` generates the ring
of integers: ``w = sqrt(d)`` for ``d = 2, 3 mod 4`` and ``w = (1+sqrt(d))/2``
for ``d = 1 mod 4``.  ``w`` satisfies ``w^2 = t*w + n``.  The field Q is
encoded as ``d = 1`` with every element having ``y = 0``.

Integral ideals are kept in the normal form ``aZ + (b + c*w)Z`` with
``c | a``, ``c | b`` and ``0 <= b < a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product as iproduct


def is_squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def factorint(n: int) -> dict[int, int]:
    """Trial-division factorization; norms here stay small."""
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(p: int) -> bool:
    return p >= 2 and factorint(p) == {p: 1}


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    # returns g, s, t with s*a + t*b = g >= 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    return 0 if r == 0 else (1 if r == 1 else -1)


# ----------------------------------------------------------------- fields

@dataclass(frozen=True)
class Field:
    """K = Q (``d == 1``) or Q(sqrt(d)) for squarefree ``d``."""

    d: int

    def __post_init__(self):
        if self.d == 0 or (self.d != 1 and not is_squarefree(self.d)):
            raise ValueError(f"d={self.d} is not a squarefree integer != 0")

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def is_real(self) -> bool:
        return self.d > 1

    @property
    def is_imaginary(self) -> bool:
        return self.d < 0

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2

    @property
    def disc(self) -> int:
        if self.is_rational:
            return 1
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def signature(self) -> int:
        return 1 if self.is_rational else (2 if self.d > 1 else 0)

    @property
    def t(self) -> int:
        return 1 if (not self.is_rational and self.d % 4 == 1) else 0

    @property
    def n(self) -> int:
        if self.is_rational:
            return 0
        return (self.d - 1) // 4 if self.d % 4 == 1 else self.d

    @property
    def omega_str(self) -> str:
        if self.is_rational:
            return "1"
        return f"(1+sqrt({self.d}))/2" if self.d % 4 == 1 else f"sqrt({self.d})"

    def __call__(self, x=0, y=0) -> "FieldElement":
        return FieldElement(self, Fraction(x), Fraction(y))

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def omega(self) -> "FieldElement":
        if self.is_rational:
            raise ValueError("Q has no quadratic generator")
        return self(0, 1)

    def sqrt_d(self) -> "FieldElement":
        return self(-1, 2) if self.t else self(0, 1)

    def sqrt_disc(self) -> "FieldElement":
        """The generator ``sqrt(D)`` of the different (1 for Q)."""
        if self.is_rational:
            return self.one
        return self(-1, 2) if self.t else self(0, 2)

    def name(self) -> str:
        return "Q" if self.is_rational else f"Q(sqrt({self.d}))"

    def __repr__(self):
        return self.name()


def make_field(d: int) -> Field:
    return Field(d)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    x: Fraction
    y: Fraction = Fraction(0)

    def __post_init__(self):
        if self.field.is_rational and self.y:
            raise ValueError("elements of Q have no w-coordinate")

    # arithmetic
    def _c(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other
        return FieldElement(self.field, Fraction(other))

    def __add__(self, other):
        o = self._c(other)
        return FieldElement(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.x, -self.y)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        o = self._c(other)
        f = self.field
        a, b, c, e = self.x, self.y, o.x, o.y
        return FieldElement(f, a * c + b * e * f.n, a * e + b * c + b * e * f.t)

    __rmul__ = __mul__

    def conj(self) -> "FieldElement":
        return FieldElement(self.field, self.x + self.y * self.field.t, -self.y)

    def norm(self) -> Fraction:
        f = self.field
        if f.is_rational:
            return self.x
        return self.x * self.x + self.x * self.y * f.t - f.n * self.y * self.y

    def trace(self) -> Fraction:
        if self.field.is_rational:
            return self.x
        return 2 * self.x + self.y * self.field.t

    def inverse(self) -> "FieldElement":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.field.is_rational:
            return FieldElement(self.field, 1 / self.x)
        c = self.conj()
        return FieldElement(self.field, c.x / nm, c.y / nm)

    def __truediv__(self, other):
        return self * self._c(other).inverse()

    def __rtruediv__(self, other):
        return self._c(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def denominator(self) -> int:
        """Least ``m > 0`` with ``m * self`` integral."""
        return math.lcm(self.x.denominator, self.y.denominator)

    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def int_coords(self) -> tuple[int, int]:
        if not self.is_integral():
            raise ValueError(f"{self} is not integral")
        return (int(self.x), int(self.y))

    # the element as p + q*sqrt(d)
    def pq(self) -> tuple[Fraction, Fraction]:
        if self.field.t:
            return self.x + self.y / 2, self.y / 2
        return self.x, self.y

    def embeddings(self) -> tuple:
        """Float images: two reals (real field), one complex (imaginary), one real (Q)."""
        p, q = self.pq()
        d = self.field.d
        if self.field.is_rational:
            return (float(p),)
        if d > 0:
            r = math.sqrt(d)
            return (float(p) + float(q) * r, float(p) - float(q) * r)
        return (complex(float(p), float(q) * math.sqrt(-d)),)

    def sign(self) -> int:
        """Exact sign in the real embedding with ``sqrt(d) > 0`` (Q or real field)."""
        if self.field.is_imaginary:
            raise ValueError("no real embedding")
        p, q = self.pq()
        return _sign_sqrt(p, q, max(self.field.d, 1))

    def is_totally_positive(self) -> bool:
        return is_totally_positive(self)

    def __repr__(self):
        if self.field.is_rational:
            return str(self.x)
        return f"({self.x} + {self.y}*w)"


def _sign_sqrt(p: Fraction, q: Fraction, d: int) -> int:
    # sign of p + q*sqrt(d), d > 0 squarefree (d == 1 allowed)
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with q^2 d
    diff = p * p - q * q * d
    if diff == 0:
        return 0
    return sp if diff > 0 else sq


def is_totally_positive(x: FieldElement) -> bool:
    if x.is_zero():
        raise ValueError("zero is neither positive nor negative")
    f = x.field
    if f.is_rational:
        return x.x > 0
    if f.is_imaginary:
        return True
    return x.norm() > 0 and x.trace() > 0


# ----------------------------------------------------------------- ideals

def _hnf(vectors) -> tuple[int, int, int]:
    """Normal form (a, b, c) of the full-rank lattice spanned by integer pairs."""
    a = 0
    piv = None  # (b, c) with c > 0
    for x, y in vectors:
        x, y = int(x), int(y)
        if y == 0:
            a = math.gcd(a, x)
            continue
        if piv is None:
            piv = (x, y) if y > 0 else (-x, -y)
            continue
        b, c = piv
        g, s, t = _egcd(c, y)
        newpiv = (s * b + t * x, g)
        rest = (y // g) * b - (c // g) * x
        a = math.gcd(a, rest)
        piv = newpiv
    if piv is None or a == 0:
        raise ValueError("lattice is not of full rank")
    b, c = piv
    return a, b % a, c


@dataclass(frozen=True)
class Ideal:
    """Integral ideal ``aZ + (b + c*w)Z``; over Q it is ``aZ`` with ``(b, c) = (0, 1)``."""

    field: Field
    a: int
    b: int
    c: int

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def hnf(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def z_basis(self) -> tuple[FieldElement, FieldElement]:
        f = self.field
        if f.is_rational:
            return (f(self.a), f(self.a))
        return (f(self.a), f(self.b, self.c))

    def gens(self) -> list[FieldElement]:
        f = self.field
        if f.is_rational:
            return [f(self.a)]
        return [f(self.a), f(self.b, self.c)]

    def contains(self, z: FieldElement) -> bool:
        if not z.is_integral():
            return False
        x, y = z.int_coords()
        if self.field.is_rational:
            return x % self.a == 0
        if y % self.c:
            return False
        return (x - (y // self.c) * self.b) % self.a == 0

    def __contains__(self, z):
        return self.contains(z)

    def divides(self, other: "Ideal") -> bool:
        """``self | other``, i.e. ``other`` is contained in ``self``."""
        return all(self.contains(g) for g in other.gens())

    def __mul__(self, other: "Ideal") -> "Ideal":
        if not isinstance(other, Ideal):
            return NotImplemented
        _same(self, other)
        return ideal_from_gens(self.field, [g * h for g in self.gens() for h in other.gens()])

    def __pow__(self, k: int) -> "Ideal":
        out = unit_ideal(self.field)
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other: "Ideal") -> "Ideal":
        _same(self, other)
        return ideal_from_gens(self.field, self.gens() + other.gens())

    def conj(self) -> "Ideal":
        return ideal_from_gens(self.field, [g.conj() for g in self.gens()])

    def scale(self, k: int) -> "Ideal":
        return ideal_from_gens(self.field, [g * k for g in self.gens()])

    def div_int(self, k: int) -> "Ideal":
        if self.field.is_rational:
            if self.a % k:
                raise ValueError(f"{self} is not divisible by {k}")
            return Ideal(self.field, self.a // k, 0, 1)
        if self.a % k or self.b % k or self.c % k:
            raise ValueError(f"{self} is not divisible by {k}")
        a = self.a // k
        return Ideal(self.field, a, (self.b // k) % a, self.c // k)

    def content(self) -> int:
        """Largest integer ``k`` with ``self`` contained in ``kO``."""
        if self.field.is_rational:
            return self.a
        return math.gcd(self.a, self.b, self.c)

    def residues(self) -> list[FieldElement]:
        """Representatives of ``O / self``."""
        f = self.field
        if f.is_rational:
            return [f(i) for i in range(self.a)]
        return [f(i, j) for j in range(self.c) for i in range(self.a)]

    def reduce(self, z: FieldElement) -> FieldElement:
        """Canonical representative of an integral ``z`` modulo the ideal."""
        x, y = z.int_coords()
        f = self.field
        if f.is_rational:
            return f(x % self.a)
        q = y // self.c
        x -= q * self.b
        y -= q * self.c
        return f(x % self.a, y)

    def factor(self) -> dict["Ideal", int]:
        return factor_ideal(self)

    def is_prime(self) -> bool:
        fac = self.factor()
        return len(fac) == 1 and list(fac.values()) == [1]

    def sort_key(self):
        return (self.norm, self.a, self.b, self.c)

    def __repr__(self):
        if self.field.is_rational:
            return f"({self.a})"
        return f"[{self.a}, {self.b}+{self.c}w]"


def _same(I, J):
    if I.field != J.field:
        raise ValueError("ideals over different fields")


def ideal_from_gens(f: Field, gens) -> Ideal:
    """Ideal generated (over O) by integral elements."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("zero ideal")
    for g in gens:
        if not g.is_integral():
            raise ValueError(f"{g} is not integral")
    if f.is_rational:
        a = 0
        for g in gens:
            a = math.gcd(a, int(g.x))
        return Ideal(f, a, 0, 1)
    vecs = []
    w = f.omega
    for g in gens:
        vecs.append(g.int_coords())
        vecs.append((g * w).int_coords())
    a, b, c = _hnf(vecs)
    return Ideal(f, a, b, c)


def principal_ideal(z: FieldElement) -> Ideal:
    return ideal_from_gens(z.field, [z])


def unit_ideal(f: Field) -> Ideal:
    return Ideal(f, 1, 0, 1)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    return I * J


def ideal_gcd(I: Ideal, J: Ideal) -> Ideal:
    return I + J


def ideal_norm(I: Ideal) -> int:
    return I.norm


def ideal_equals(I: Ideal, J: Ideal) -> bool:
    _same(I, J)
    return I.hnf == J.hnf


def _inverse_parts(J: Ideal) -> tuple[Ideal, int]:
    """``(K, n)`` with ``J^{-1} = K / n``."""
    if J.field.is_rational:
        return unit_ideal(J.field), J.a
    return J.conj(), J.norm


def ideal_lcm(I: Ideal, J: Ideal) -> Ideal:
    K, n = _inverse_parts(I + J)
    return (I * J * K).div_int(n)


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    """``I * J^{-1}``, which must be integral."""
    K, n = _inverse_parts(J)
    return (I * K).div_int(n)


# --------------------------------------------------------- fractional ideals

@dataclass(frozen=True)
class FractionalIdeal:
    num: Ideal
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")

    @staticmethod
    def make(num: Ideal, den: int = 1) -> "FractionalIdeal":
        g = math.gcd(num.content(), den)
        if g > 1:
            num, den = num.div_int(g), den // g
        return FractionalIdeal(num, den)

    @property
    def field(self) -> Field:
        return self.num.field

    @property
    def norm(self) -> Fraction:
        return Fraction(self.num.norm, self.den ** self.num.field.degree)

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        return FractionalIdeal.make(self.num * other.num, self.den * other.den)

    def inverse(self) -> "FractionalIdeal":
        K, n = _inverse_parts(self.num)
        return FractionalIdeal.make(K.scale(self.den), n)

    def intersect(self, other: "FractionalIdeal") -> "FractionalIdeal":
        k = math.lcm(self.den, other.den)
        I = self.num.scale(k // self.den)
        J = other.num.scale(k // other.den)
        return FractionalIdeal.make(ideal_lcm(I, J), k)

    def __truediv__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        return self * other.inverse()

    def __add__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        L = math.lcm(self.den, other.den)
        return FractionalIdeal.make(self.num.scale(L // self.den) + other.num.scale(L // other.den), L)

    def is_integral(self) -> bool:
        return self.den == 1

    def as_ideal(self) -> Ideal:
        if self.den != 1:
            raise ValueError("not integral")
        return self.num

    def contains(self, z: FieldElement) -> bool:
        return self.num.contains(z * self.den)

    def reduce(self, z: FieldElement) -> FieldElement:
        """Canonical representative of ``z`` in ``K / self`` (coordinates in a box)."""
        f = self.field
        a = Fraction(self.num.a, self.den)
        if f.is_rational:
            return f(z.x - math.floor(z.x / a) * a)
        b = Fraction(self.num.b, self.den)
        c = Fraction(self.num.c, self.den)
        q = math.floor(z.y / c)
        x, y = z.x - q * b, z.y - q * c
        return f(x - math.floor(x / a) * a, y)

    def key(self):
        return (self.num.hnf, self.den)

    def __repr__(self):
        return f"{self.num}/{self.den}" if self.den != 1 else repr(self.num)


def as_fractional(I: Ideal) -> FractionalIdeal:
    return FractionalIdeal(I, 1)


def unit_fractional(f: Field) -> FractionalIdeal:
    return FractionalIdeal(unit_ideal(f), 1)


def principal_fractional(z: FieldElement) -> FractionalIdeal:
    m = z.denominator()
    return FractionalIdeal.make(principal_ideal(z * m), m)


# ------------------------------------------------------------ prime ideals

@dataclass(frozen=True)
class PrimeData:
    ideal: Ideal
    p: int
    kind: str  # "split" | "inert" | "ramified" | "rational"
    e: int
    f: int


@lru_cache(maxsize=None)
def primes_above(p: int, f: Field) -> tuple[PrimeData, ...]:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if f.is_rational:
        return (PrimeData(Ideal(f, p, 0, 1), p, "rational", 1, 1),)
    roots = [r for r in range(p) if (r * r - f.t * r - f.n) % p == 0]
    if not roots:
        return (PrimeData(ideal_from_gens(f, [f(p)]), p, "inert", 1, 2),)
    ideals = [ideal_from_gens(f, [f(p), f(-r, 1)]) for r in roots]
    if len(roots) == 1:
        return (PrimeData(ideals[0], p, "ramified", 2, 1),)
    ideals.sort(key=lambda I: I.hnf)
    return tuple(PrimeData(I, p, "split", 1, 1) for I in ideals)


def valuation(I: Ideal, P: PrimeData) -> int:
    """Exponent of the prime ``P`` in ``I``."""
    v = 0
    J = I
    while P.ideal.divides(J):
        J = ideal_quotient(J, P.ideal)
        v += 1
    return v


@lru_cache(maxsize=None)
def _factor_cached(I: Ideal) -> tuple:
    return tuple(_factor_uncached(I).items())


def factor_ideal(I: Ideal) -> dict[Ideal, int]:
    return dict(_factor_cached(I))


def _factor_uncached(I: Ideal) -> dict[Ideal, int]:
    out: dict[Ideal, int] = {}
    for p in factorint(I.norm):
        for P in primes_above(p, I.field):
            v = valuation(I, P)
            if v:
                out[P.ideal] = v
    return out


@lru_cache(maxsize=None)
def ideals_of_norm(n: int, f: Field) -> tuple[Ideal, ...]:
    if n < 1:
        raise ValueError("norm must be positive")
    choices = []
    for p, e in factorint(n).items():
        ps = primes_above(p, f)
        opts: list[Ideal] = []
        kind = ps[0].kind
        if kind in ("rational", "ramified"):
            opts = [ps[0].ideal ** e]
        elif kind == "inert":
            if e % 2 == 0:
                opts = [ps[0].ideal ** (e // 2)]
        else:
            P, Q = ps[0].ideal, ps[1].ideal
            opts = [P ** i * Q ** (e - i) for i in range(e + 1)]
        if not opts:
            return ()
        choices.append(opts)
    out = []
    for combo in iproduct(*choices):
        J = unit_ideal(f)
        for K in combo:
            J = J * K
        out.append(J)
    return tuple(sorted(set(out), key=lambda I: I.hnf))


def ideals_up_to(B: int, f: Field) -> list[Ideal]:
    out = []
    for n in range(1, B + 1):
        out.extend(ideals_of_norm(n, f))
    return out


# ------------------------------------------------------------------- units

@dataclass(frozen=True)
class UnitData:
    field: Field
    fundamental_unit: FieldElement | None
    norm_of_epsilon: int | None
    eps_plus: FieldElement | None
    torsion_units: tuple[FieldElement, ...]

    def tp_generators(self) -> tuple[FieldElement, ...]:
        """Generators of the totally positive unit group."""
        f = self.field
        if f.is_rational:
            return ()
        if f.is_real:
            return (self.eps_plus,)
        # torsion group of an imaginary field is cyclic; pick a generator
        order = len(self.torsion_units)
        for u in self.torsion_units:
            if _mult_order(u) == order:
                return (u,)
        raise AssertionError("no torsion generator")

    def tp_torsion(self) -> tuple[FieldElement, ...]:
        return tuple(u for u in self.torsion_units if is_totally_positive(u))


def _mult_order(u: FieldElement) -> int:
    k, z = 1, u
    while not (z.x == 1 and z.y == 0):
        z = z * u
        k += 1
        if k > 12:
            raise ValueError("not a root of unity")
    return k


def _solve_unit_x(f: Field, y: int) -> FieldElement | None:
    # x^2 + t*x*y - n*y^2 = +-1 with x + y*w > 1; smallest such unit for this y
    found = []
    for nn in (1, -1):
        disc = (f.t * y) ** 2 + 4 * (f.n * y * y + nn)
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc or (r - f.t * y) % 2:
            continue
        for x in ((r - f.t * y) // 2, (-r - f.t * y) // 2):
            u = f(x, y)
            if u.norm() == nn and (u - 1).sign() > 0:
                found.append(u)
    if not found:
        return None
    return min(found, key=lambda u: u.embeddings()[0])


def _quadratic_cf(P: int, Q: int, d: int):
    """Partial quotients of ``(P + sqrt(d)) / Q``; needs ``Q | d - P^2``."""
    m = math.isqrt(d)
    while True:
        a = (P + m) // Q if Q > 0 else -((P + m) // -Q + 1)
        yield a
        P = a * Q - P
        Q = (d - P * P) // Q


def _fundamental_unit_cf(f: Field) -> FieldElement:
    # small solutions first (the convergent criterion can miss tiny units)
    for y in range(1, 64):
        u = _solve_unit_x(f, y)
        if u is not None:
            return u
    # units x + y*w > 1 have x/y a convergent of -conj(w) = (P + sqrt(d))/Q
    P, Q = (-1, 2) if f.t else (0, 1)
    h0, h1, k0, k1 = 0, 1, 1, 0
    for i, a in enumerate(_quadratic_cf(P, Q, f.d)):
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        u = f(h1, k1)
        if abs(u.norm()) == 1 and (u - 1).sign() > 0:
            return u
        if i > 10**5:
            break
    raise RuntimeError(f"no unit found for d={f.d}")


@lru_cache(maxsize=None)
def fundamental_unit(f: Field) -> UnitData:
    if f.is_rational:
        return UnitData(f, None, None, None, (f(1), f(-1)))
    if f.is_imaginary:
        if f.d == -1:
            tors = (f(1), f(0, 1), f(-1), f(0, -1))
        elif f.d == -3:
            w = f.omega  # primitive sixth root of unity
            tors = tuple(w ** k for k in range(6))
        else:
            tors = (f(1), f(-1))
        return UnitData(f, None, None, None, tors)
    eps = _fundamental_unit_cf(f)
    ne = int(eps.norm())
    if is_totally_positive(eps):
        ep = eps
    elif ne == -1:
        ep = eps * eps
    else:
        ep = -eps
    return UnitData(f, eps, ne, ep, (f(1), f(-1)))


def unit_group_elements(f: Field) -> tuple[FieldElement, ...]:
    """Finite totally positive unit group (imaginary fields and Q only)."""
    if f.is_real:
        raise ValueError("infinite unit group")
    if f.is_rational:
        return (f.one,)
    return fundamental_unit(f).torsion_units


def canonical_mod_units(x: FieldElement) -> tuple[FieldElement, FieldElement]:
    """Return ``(x*u, u)`` with ``u`` a totally positive unit and ``x*u`` canonical.

    Real fields: ``x*u`` lies in the window ``sqrt(N) <= x < eps_plus*sqrt(N)``
    of the embedding with ``sqrt(d) > 0``.  Imaginary fields: lexicographic
    maximum of the coordinates over all units, so positive integers label themselves.
    """
    f = x.field
    if f.is_rational:
        return x, f.one
    if f.is_imaginary:
        best = None
        for u in unit_group_elements(f):
            z = x * u
            if best is None or (z.x, z.y) > (best[0].x, best[0].y):
                best = (z, u)
        return best
    N = x.norm()
    if N <= 0:
        raise ValueError(f"{x} is not totally positive")
    ep = fundamental_unit(f).eps_plus
    v = x.embeddings()[0]
    k = math.floor((math.log(v) - 0.5 * math.log(float(N))) / math.log(ep.embeddings()[0]))
    u = ep ** (-k)
    z = x * u
    ep2N = ep * ep * N
    # exact fix-up of the float estimate
    while (z * z - N).sign() < 0:
        z, u = z * ep, u * ep
    while (z * z - ep2N).sign() >= 0:
        z, u = z / ep, u / ep
    return z, u


@lru_cache(maxsize=200_000)
def _orbit_data(y: FieldElement, M: FractionalIdeal) -> tuple[int, tuple[tuple[int, int], ...]]:
    """``(L, sorted integer coordinates of L * orbit)`` for the orbit of ``y`` in ``K / M``."""
    f = y.field
    start = M.reduce(y)
    if f.is_rational:
        L = start.denominator()
        return L, ((int(start.x * L), 0),)
    # scale by L so that L*y and L*M are integral, then work with integer coordinates
    L = math.lcm(M.den, start.denominator())
    k = L // M.den
    A, Bs, C = k * M.num.a, k * M.num.b, k * M.num.c
    t, n = f.t, f.n

    def red(X: int, Y: int) -> tuple[int, int]:
        q = Y // C
        return ((X - q * Bs) % A, Y - q * C)

    gens = [g.int_coords() for g in fundamental_unit(f).tp_generators()]
    s0 = (int(start.x * L), int(start.y * L))
    seen = {s0}
    frontier = [s0]
    while frontier:
        nxt = []
        for X, Y in frontier:
            for p, q in gens:
                w = red(X * p + Y * q * n, X * q + Y * p + Y * q * t)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if len(seen) > 10**6:
            raise RuntimeError("orbit too large")
    return L, tuple(sorted(seen))


def unit_orbit(y: FieldElement, M: FractionalIdeal) -> tuple[FieldElement, ...]:
    """Orbit of ``y`` in ``K / M`` under the totally positive units, sorted."""
    L, pts = _orbit_data(y, M)
    f = y.field
    return tuple(f(Fraction(X, L), Fraction(Y, L)) for X, Y in pts)


def unit_orbit_min(y: FieldElement, M: FractionalIdeal) -> FieldElement:
    L, pts = _orbit_data(y, M)
    X, Y = pts[0]
    return y.field(Fraction(X, L), Fraction(Y, L))


def unit_orbit_size(y: FieldElement, M: FractionalIdeal) -> int:
    return len(_orbit_data(y, M)[1])


# --------------------------------------------------- narrow principality

def _lattice_points_in_box(I: Ideal, bounds: tuple[float, float]):
    """Nonzero elements ``s*a + t*beta`` of ``I`` inside an embedding box.

    Real fields bound the two real embeddings; imaginary fields bound the
    real and imaginary parts.  For each ``t`` the admissible ``s`` form an
    interval, so the scan is linear in the box width.
    """
    f = I.field
    A = I.a
    beta = f(I.b, I.c)
    B1, B2 = bounds
    slack = 1e-9
    if f.is_real:
        b1, b2 = beta.embeddings()
        tmax = int((B1 + B2) / abs(b1 - b2)) + 1
    else:
        z = beta.embeddings()[0]
        b1 = b2 = z.real
        tmax = int(B2 / abs(z.imag)) + 1
    for t in range(-tmax, tmax + 1):
        lo = max((-B1 - t * b1) / A, (-B2 - t * b2) / A if f.is_real else (-B1 - t * b1) / A)
        hi = min((B1 - t * b1) / A, (B2 - t * b2) / A if f.is_real else (B1 - t * b1) / A)
        for s in range(math.floor(lo - slack), math.ceil(hi + slack) + 1):
            if s == 0 and t == 0:
                continue
            yield f(s * A) + beta * t


def find_generator(I: Ideal) -> FieldElement | None:
    """Some generator of ``I`` if it is principal, else ``None``."""
    f = I.field
    N = I.norm
    if f.is_rational:
        return f(I.a)
    if f.is_imaginary:
        r = math.sqrt(N) * (1 + 1e-9) + 1e-9
        for z in _lattice_points_in_box(I, (r, r)):
            if z.norm() == N:
                return z
        return None
    eps = fundamental_unit(f).fundamental_unit
    e = eps.embeddings()[0]
    r = math.sqrt(N) * (1 + 1e-9) + 1e-9
    for z in _lattice_points_in_box(I, (e * r, r)):
        if abs(z.norm()) == N:
            return z
    return None


def narrowly_principal(I) -> FieldElement | None:
    """A totally positive generator of the (fractional) ideal, or ``None``."""
    if isinstance(I, FractionalIdeal):
        g = narrowly_principal(I.num)
        return None if g is None else g / I.den
    f = I.field
    g = find_generator(I)
    if g is None:
        return None
    if f.is_rational:
        return abs(g.x) * f.one
    if f.is_imaginary:
        return canonical_mod_units(g)[0]
    ud = fundamental_unit(f)
    for cand in (g, -g, g * ud.fundamental_unit, -g * ud.fundamental_unit):
        if is_totally_positive(cand):
            return canonical_mod_units(cand)[0]
    return None


def minkowski_bound(f: Field) -> float:
    if f.is_rational:
        return 1.0
    if f.is_real:
        return math.sqrt(f.disc) / 2
    return 2 / math.pi * math.sqrt(-f.disc)


# ------------------------------------------------- binary quadratic forms

def _gt_sqrt(k: int, D: int) -> bool:
    """``k > sqrt(D)`` for non-square ``D > 0``."""
    return k > 0 and k * k > D


def _lt_sqrt(k: int, D: int) -> bool:
    return k < 0 or k * k < D


@dataclass(frozen=True, order=True)
class Form:
    """``a x^2 + b xy + c y^2``."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


def form_of_ideal(I: Ideal) -> Form:
    """Oriented form ``N(x*a - y*(b + w)) / N(I')`` of the primitive part ``I'``."""
    f = I.field
    J = I.div_int(I.content())
    A, B = J.a, J.b
    C = int(f(B, 1).norm()) // A
    return Form(A, -(2 * B + f.t), C)


def ideal_of_form(F: Form, f: Field) -> Ideal:
    if F.a <= 0:
        raise ValueError("need a > 0")
    B2 = -F.b - f.t
    if B2 % 2:
        raise ValueError(f"{F} has the wrong discriminant parity")
    return ideal_from_gens(f, [f(F.a), f(B2 // 2, 1)])


def _is_reduced_indefinite(F: Form) -> bool:
    D = F.disc
    a = abs(F.a)
    return _lt_sqrt(F.b, D) and F.b > 0 and _lt_sqrt(2 * a - F.b, D) and _gt_sqrt(2 * a + F.b, D)


def _rho(F: Form) -> Form:
    D = F.disc
    c = F.c
    ac = abs(c)
    # r = -b mod 2c in the normalizing range
    if _gt_sqrt(ac, D):
        r = (-F.b) % (2 * ac)
        if r > ac:
            r -= 2 * ac
    else:
        s = math.isqrt(D)
        # largest r = -b mod 2|c| with r < sqrt(D), i.e. r <= s
        r = s - ((s + F.b) % (2 * ac))
    return Form(c, r, (r * r - D) // (4 * c))


def reduce_form(F: Form) -> Form:
    D = F.disc
    if D < 0:
        a, b, c = F.a, F.b, F.c
        if a < 0:
            raise ValueError("negative definite form")
        while True:
            if c < a:
                a, b, c = c, -b, a
                continue
            if not (-a < b <= a):
                k = (a - b) // (2 * a)
                c = a * k * k + b * k + c
                b = b + 2 * a * k
                continue
            if a == c and b < 0:
                b = -b
                continue
            return Form(a, b, c)
    for _ in range(10**6):
        if _is_reduced_indefinite(F):
            return F
        F = _rho(F)
    raise RuntimeError("reduction did not terminate")


def form_cycle(F: Form) -> tuple[Form, ...]:
    F = reduce_form(F)
    if F.disc < 0:
        return (F,)
    out = [F]
    G = _rho(F)
    while G != F:
        out.append(G)
        G = _rho(G)
    return tuple(out)


def canonical_form(F: Form) -> Form:
    """Canonical representative of the proper equivalence class."""
    return min(form_cycle(F))


def reduced_forms(D: int) -> list[Form]:
    """All reduced primitive forms of discriminant ``D``."""
    out = []
    if D < 0:
        amax = math.isqrt(-D // 3) + 1
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                F = Form(a, b, c)
                if c >= a and not (a == c and b < 0) and math.gcd(a, b, c) == 1:
                    out.append(F)
        return out
    s = math.isqrt(D)
    for b in range(1, s + 1):
        if (b * b - D) % 4:
            continue
        m = (D - b * b) // 4
        for a in range(1, s + 1):
            if m % a:
                continue
            for sa in (a, -a):
                F = Form(sa, b, -m // sa)
                if math.gcd(F.a, F.b, F.c) == 1 and _is_reduced_indefinite(F):
                    out.append(F)
    return out


# ------------------------------------------------------- narrow class group

@dataclass
class NarrowClassGroup:
    """Narrow ideal class group with classes labelled ``0..h-1`` (0 is trivial)."""

    field: Field
    forms: list[Form]
    reps: list[Ideal]
    table: list[list[int]] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.forms)

    def class_of(self, I) -> int:
        if isinstance(I, FractionalIdeal):
            # the denominator is a totally positive integer
            I = I.num
        if self.field.is_rational:
            return 0
        return self._index[canonical_form(form_of_ideal(I))]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.table[i].index(0)

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            k += 1
        return k

    def invariants(self) -> list[int]:
        """Invariant factors ``[n1, n2, ...]`` with ``n1 | n2 | ...``."""
        h = self.order
        per_prime: dict[int, list[int]] = {}
        for p in factorint(h):
            counts = []
            i = 0
            while True:
                i += 1
                q = p ** i
                counts.append(sum(1 for g in range(h) if self._pow(g, q) == 0))
                if len(counts) > 1 and counts[-1] == counts[-2]:
                    break
            # number of cyclic p-factors of order >= p^i is log_p(c_i / c_{i-1})
            ranks = []
            prev = 1
            for c in counts:
                ranks.append(round(math.log(c // prev, p)) if c > prev else 0)
                prev = c
            exps: list[int] = []
            for i, r in enumerate(ranks):
                nxt = ranks[i + 1] if i + 1 < len(ranks) else 0
                exps.extend([i + 1] * (r - nxt))
            per_prime[p] = sorted(exps, reverse=True)
        width = max((len(v) for v in per_prime.values()), default=0)
        inv = [1] * width
        for p, exps in per_prime.items():
            for k, e in enumerate(exps):
                inv[k] *= p ** e
        return sorted(inv)

    def _pow(self, g: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = self.mul(out, g)
        return out

    def __post_init__(self):
        self._index = {F: i for i, F in enumerate(self.forms)}


@lru_cache(maxsize=None)
def narrow_class_group(f: Field) -> NarrowClassGroup:
    if f.is_rational:
        G = NarrowClassGroup(f, [Form(1, 0, 0)], [unit_ideal(f)])
        G.table = [[0]]
        return G
    D = f.disc
    canon = sorted({canonical_form(F) for F in reduced_forms(D)})
    principal = canonical_form(form_of_ideal(unit_ideal(f)))
    canon.remove(principal)
    canon.insert(0, principal)
    reps = []
    for F in canon:
        pos = min((G for G in form_cycle(F) if G.a > 0), key=lambda G: (G.a, G.b))
        reps.append(ideal_of_form(pos, f))
    G = NarrowClassGroup(f, canon, reps)
    G.table = [[G.class_of(I * J) for J in reps] for I in reps]
    return G


def same_narrow_class(I, J) -> bool:
    """Ratio test: ``I * J^{-1}`` has a totally positive generator."""
    if isinstance(I, Ideal):
        I = as_fractional(I)
    if isinstance(J, Ideal):
        J = as_fractional(J)
    return narrowly_principal(I / J) is not None


def class_number_bound(f: Field) -> int:
    """Every narrow class contains an integral ideal of norm at most this."""
    if f.is_rational:
        return 1
    if f.is_real:
        return math.isqrt(f.disc)
    return math.isqrt(-f.disc // 3)


# ------------------------------------------------------------ serialization

def element_to_json(z: FieldElement) -> list[str]:
    return [str(z.x), str(z.y)]


def element_from_json(f: Field, data) -> FieldElement:
    return f(Fraction(data[0]), Fraction(data[1]))


def ideal_to_json(I: Ideal) -> list[int]:
    return [I.a, I.b, I.c]


def ideal_from_json(f: Field, data) -> Ideal:
    a, b, c = (int(v) for v in data)
    I = Ideal(f, a, b, c)
    if ideal_from_gens(f, I.gens()) != I:
        raise ValueError(f"{data} is not a normal form")
    return I
