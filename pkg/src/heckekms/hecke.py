"""The Hecke algebra of the affine pair ``(P_K^+, P_O^+)`` by explicit coset enumeration.

Group elements are pairs ``(y, x)`` standing for the matrix ``[[1, y], [0, x]]``
with ``x`` totally positive, so ``(y, x)(y', x') = (y' + y x', x x')``.
``Gamma`` is the subgroup with ``y`` in ``O`` and ``x`` a totally positive unit.

A left coset ``g Gamma`` is labelled by ``(x_c, y u mod O)`` where
``x u = x_c`` is the canonical representative of ``x`` modulo units.  A
double coset is labelled by ``x_c`` and the smallest point of the unit orbit
of ``y`` in ``K / (O + x_c O)``.

Convolution uses ``[A] * [B] = sum_C m_C [C]`` where ``m_C`` counts pairs of
left coset representatives ``(a_i, b_j)`` with ``a_i b_j Gamma`` equal to a
fixed left coset inside ``C``.
"""

from __future__ import annotations

import cmath
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .groupoid import rational_power
from .number_field import (
    Field,
    FieldElement,
    FractionalIdeal,
    canonical_mod_units,
    fundamental_unit,
    is_totally_positive,
    principal_fractional,
    principal_ideal,
    unit_fractional,
    unit_orbit,
    unit_orbit_min,
    unit_orbit_size,
)
from .scalars import CyclotomicValue, SqrtSum, simplify_scalar


class InsufficientLevel(ValueError):
    """The requested level does not control every denominator in play."""


# ------------------------------------------------------------ cosets

@dataclass(frozen=True)
class DoubleCoset:
    """Canonical label ``(x, y)`` of ``Gamma (y, x) Gamma``."""

    x: FieldElement
    y: FieldElement

    @property
    def field(self) -> Field:
        return self.x.field

    @property
    def norm(self) -> Fraction:
        return self.x.norm()

    def rep(self) -> tuple[FieldElement, FieldElement]:
        return (self.y, self.x)

    @property
    def left_count(self) -> int:
        return len(left_coset_reps(self))

    @property
    def right_count(self) -> int:
        return len(right_coset_labels(self))

    def modular(self) -> Fraction:
        """``Delta`` as the ratio of left to right coset counts."""
        return Fraction(self.left_count, self.right_count)

    def sort_key(self):
        return (self.x.x, self.x.y, self.y.x, self.y.y)

    def __repr__(self):
        return f"DC(x={self.x!r}, y={self.y!r})"


def _O(f: Field) -> FractionalIdeal:
    return unit_fractional(f)


@lru_cache(maxsize=None)
def _sum_module(x: FieldElement) -> FractionalIdeal:
    """``O + x O``."""
    return principal_fractional(x) + _O(x.field)


@lru_cache(maxsize=None)
def dc_canonicalize(x: FieldElement, y: FieldElement) -> DoubleCoset:
    if x.is_zero() or not is_totally_positive(x):
        raise ValueError(f"{x} is not totally positive")
    xc, u = canonical_mod_units(x)
    M = _sum_module(xc)
    yc = unit_orbit_min(y * u, M)
    return DoubleCoset(xc, yc)


def left_label(y: FieldElement, x: FieldElement) -> tuple[FieldElement, FieldElement]:
    xc, u = canonical_mod_units(x)
    return (xc, _O(x.field).reduce(y * u))


@lru_cache(maxsize=None)
def left_coset_reps(dc: DoubleCoset) -> tuple[tuple[FieldElement, FieldElement], ...]:
    """Representatives ``(y, x)`` of the left cosets ``g Gamma`` inside the double coset."""
    f = dc.field
    x, y = dc.x, dc.y
    O = _O(f)
    L = principal_fractional(1 / x).intersect(O)
    labels = set()
    for b in L.as_ideal().residues():
        labels.update(unit_orbit(y + b * x, O))
    return tuple((yy, x) for yy in sorted(labels, key=lambda z: (z.x, z.y)))


@lru_cache(maxsize=None)
def right_coset_labels(dc: DoubleCoset) -> tuple[FieldElement, ...]:
    """Labels ``y mod xO`` of the right cosets ``Gamma g`` inside the double coset."""
    f = dc.field
    x, y = dc.x, dc.y
    xO = principal_fractional(x)
    inner = xO.intersect(_O(f)).as_ideal()
    labels = set()
    for v in unit_orbit(y, xO):
        for b in inner.residues():
            labels.add(xO.reduce(v + b))
    return tuple(sorted(labels, key=lambda z: (z.x, z.y)))


def group_mul(g, h):
    (y, x), (y2, x2) = g, h
    return (y2 + y * x2, x * x2)


def group_inv(g):
    y, x = g
    return (-y / x, 1 / x)


# ------------------------------------------------------------ elements

class HeckeElement:
    """Finite linear combination of double cosets."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: dict | None = None):
        self.field = field
        clean = {}
        for dc, c in (terms or {}).items():
            c = simplify_scalar(c)
            if c != 0:
                clean[dc] = c
        self.terms = clean

    @classmethod
    def basis(cls, dc: DoubleCoset, coeff=Fraction(1)) -> "HeckeElement":
        return cls(dc.field, {dc: coeff})

    @classmethod
    def one(cls, f: Field) -> "HeckeElement":
        return cls.basis(dc_canonicalize(f.one, f.zero))

    @classmethod
    def zero(cls, f: Field) -> "HeckeElement":
        return cls(f, {})

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        t = dict(self.terms)
        for dc, c in other.terms.items():
            t[dc] = t[dc] + c if dc in t else c
        return HeckeElement(self.field, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "HeckeElement":
        return HeckeElement(self.field, {dc: k * c for dc, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return convolve(self, other)
        return self.scale(other)

    def __rmul__(self, k):
        return self.scale(k)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        d = self - other
        return all(_is_zero(c) for c in d.terms.values())

    def __hash__(self):
        return hash(frozenset(self.terms))

    def star(self) -> "HeckeElement":
        return involution(self)

    def support(self) -> list[DoubleCoset]:
        return sorted(self.terms, key=DoubleCoset.sort_key)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c!r})*{dc!r}" for dc, c in sorted(self.terms.items(), key=lambda t: t[0].sort_key()))


def _is_zero(c) -> bool:
    if isinstance(c, (complex, float)):
        return abs(c) < 1e-12
    return c == 0


@lru_cache(maxsize=None)
def _basis_product(A: DoubleCoset, B: DoubleCoset) -> tuple[tuple[DoubleCoset, int], ...]:
    f = A.field
    O = _O(f)
    # every product a_i b_j has x-part A.x * B.x, so one unit normalization serves all
    xc, u = canonical_mod_units(A.x * B.x)
    tally: Counter = Counter()
    for ya, xa in left_coset_reps(A):
        for yb, xb in left_coset_reps(B):
            tally[O.reduce((yb + ya * xb) * u)] += 1
    M = _sum_module(xc)
    seen: dict = {}
    out = {}
    for yl in tally:
        ym = M.reduce(yl)
        if ym in seen:
            continue
        C = dc_canonicalize(xc, ym)
        for v in unit_orbit(ym, M):
            seen[v] = C
        out[C] = tally[O.reduce(C.y)]
    return tuple(sorted(out.items(), key=lambda t: t[0].sort_key()))


def convolve(H1: HeckeElement, H2: HeckeElement) -> HeckeElement:
    if H1.field != H2.field:
        raise ValueError("elements over different fields")
    acc: dict = {}
    for A, a in H1.terms.items():
        for B, b in H2.terms.items():
            for C, m in _basis_product(A, B):
                v = a * b * m
                acc[C] = acc[C] + v if C in acc else v
    return HeckeElement(H1.field, acc)


# ------------------------------------------------------------ generators

def orbit_size(r: FieldElement) -> int:
    """``R(r)``: size of the totally positive unit orbit of ``r`` modulo ``O``."""
    return unit_orbit_size(r, _O(r.field))


def mu(a: FieldElement) -> HeckeElement:
    if not a.is_integral() or a.is_zero() or not is_totally_positive(a):
        raise ValueError(f"{a} is not a nonzero totally positive integer")
    f = a.field
    N = int(a.norm())
    return HeckeElement.basis(dc_canonicalize(a, f.zero), simplify_scalar(SqrtSum.inv_sqrt(N)))


def mu_star(a: FieldElement) -> HeckeElement:
    return involution(mu(a))


def e(r: FieldElement) -> HeckeElement:
    f = r.field
    return HeckeElement.basis(dc_canonicalize(f.one, r), Fraction(1, orbit_size(r)))


# ------------------------------------------------------ structure maps

def _conj_scalar(c):
    if isinstance(c, (int, Fraction)):
        return c
    return c.conjugate()


def involution(H: HeckeElement) -> HeckeElement:
    out = {}
    for dc, c in H.terms.items():
        y, x = group_inv(dc.rep())
        D = dc_canonicalize(x, y)
        out[D] = _conj_scalar(c)
    return HeckeElement(H.field, out)


def sigma_t(H: HeckeElement, t) -> HeckeElement:
    """Multiply the coset of ``(y, x)`` by ``N(x)**(i t)``."""
    out = {}
    for dc, c in H.terms.items():
        N = dc.norm
        ph = 1 if (N == 1 or t == 0) else cmath.exp(1j * float(t) * math.log(N))
        out[dc] = c * ph
    return HeckeElement(H.field, out)


def sigma_analytic(H: HeckeElement, beta) -> HeckeElement:
    """``sigma_{i beta}``: multiply the coset of ``(y, x)`` by ``N(x)**(-beta)``."""
    return HeckeElement(H.field, {dc: c * rational_power(dc.norm, -beta) for dc, c in H.terms.items()})


def grading_component(H: HeckeElement, x0: FieldElement) -> HeckeElement:
    xc = canonical_mod_units(x0)[0]
    return HeckeElement(H.field, {dc: c for dc, c in H.terms.items() if dc.x == xc})


def modulus_needed(H: HeckeElement) -> int:
    """Least level ``m`` with ``m y`` integral for every coset label ``y``."""
    m = 1
    for dc in H.terms:
        m = math.lcm(m, dc.y.denominator())
    return m


# -------------------------------------------------- residues mod m

def unit_residues(f: Field, m: int) -> list[FieldElement]:
    """Representatives of ``(O / mO)^*``."""
    mO = principal_ideal(f(m))
    return [z for z in mO.residues() if math.gcd(int(z.norm()), m) == 1]


def inverse_mod(u: FieldElement, m: int) -> FieldElement:
    """``v`` in ``O`` with ``u v = 1 mod mO``."""
    N = int(u.norm())
    if math.gcd(N, m) != 1:
        raise ValueError(f"{u} is not invertible modulo {m}")
    if m == 1:
        return u.field.one
    if u.field.is_rational:
        return u.field(pow(N % m, -1, m))
    v = u.conj() * pow(N % m, -1, m)
    return principal_ideal(u.field(m)).reduce(v)


def _check_level(H: HeckeElement, m: int):
    need = modulus_needed(H)
    if m % need:
        raise InsufficientLevel(f"level {m} is not a multiple of the needed level {need}")


def _twist_cosets(H: HeckeElement, v: FieldElement, coeff_map=None) -> HeckeElement:
    out = {}
    for dc, c in H.terms.items():
        D = dc_canonicalize(dc.x, v * dc.y)
        cc = coeff_map(c) if coeff_map else c
        out[D] = out[D] + cc if D in out else cc
    return HeckeElement(H.field, out)


def tau_u(H: HeckeElement, u: FieldElement, level: int) -> HeckeElement:
    """Symmetry ``y -> u^{-1} y`` with ``u`` a unit residue at the given level."""
    _check_level(H, level)
    return _twist_cosets(H, inverse_mod(u, level))


def _galois(c, k: int):
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, SqrtSum) and c.is_rational():
        return c.to_fraction()
    if isinstance(c, CyclotomicValue):
        return c.galois(k % c.order if c.order > 1 else 1)
    raise TypeError(f"coefficient {c!r} is not cyclotomic")


def beta_action(u: FieldElement, H: HeckeElement, level: int) -> HeckeElement:
    """Galois twist by ``N(u)`` on coefficients and ``y -> N(u) u^{-1} y`` on cosets.

    For quadratic fields ``N(u) u^{-1}`` is the conjugate of ``u``; over Q it is 1.
    """
    _check_level(H, level)
    N = int(u.norm())
    if math.gcd(N, level) != 1:
        raise ValueError(f"{u} is not a unit modulo {level}")
    for c in H.terms.values():
        if isinstance(c, CyclotomicValue) and math.gcd(N, c.order) != 1:
            raise InsufficientLevel(f"coefficient order {c.order} shares a factor with N(u)={N}")
    twist = H.field.one if H.field.is_rational else u.conj()
    return _twist_cosets(H, twist, lambda c: _galois(c, N))


def is_arithmetic_fixed(H: HeckeElement, level: int) -> bool:
    for u in unit_residues(H.field, level):
        if beta_action(u, H, level) != H:
            return False
    return True


def arithmetic_average(H: HeckeElement, level: int) -> HeckeElement:
    """Average of ``beta(u) H`` over ``(O / level O)^*``; always arithmetic-fixed."""
    us = unit_residues(H.field, level)
    acc = HeckeElement.zero(H.field)
    for u in us:
        acc = acc + beta_action(u, H, level)
    return acc.scale(Fraction(1, len(us)))


# --------------------------------------------------------- relations

@dataclass
class RelationReport:
    counts: dict
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def totally_positive_integers(f: Field, max_norm: int) -> list[FieldElement]:
    """Canonical totally positive integers of norm at most ``max_norm``, one per unit class."""
    from .number_field import ideals_up_to, narrowly_principal

    out = []
    for I in ideals_up_to(max_norm, f):
        g = narrowly_principal(I)
        if g is not None:
            out.append(g)
    return out


def residues_with_denominator(f: Field, q: int) -> list[FieldElement]:
    """Points of ``(1/q) O / O``."""
    return [z / q for z in principal_ideal(f(q)).residues()]


def check_relations(f: Field, max_norm: int = 6, max_den: int = 4, stop_on_failure: bool = False,
                    mu_pairs_limit: int | None = None, r_per_den: int | None = None,
                    seed: int = 0) -> RelationReport:
    """Verify the defining relations of ``mu_a`` and ``e_r`` by explicit convolution.

    ``r_per_den`` keeps that many unit-orbit representatives per exact
    denominator, drawn with a seeded RNG; ``None`` keeps every orbit.
    """
    counts: Counter = Counter()
    failures: list = []
    one = HeckeElement.one(f)

    def record(name, ok, witness):
        counts[name] += 1
        if not ok:
            failures.append((name, witness))
            if stop_on_failure:
                raise AssertionError(f"relation {name} fails at {witness}")

    ud = fundamental_unit(f)
    units = [f.one] if f.is_rational else list(ud.tp_torsion())
    if f.is_real:
        units += [ud.eps_plus, ud.eps_plus.inverse() * 1]
    units = [w for w in units if w.is_integral()]
    As = totally_positive_integers(f, max_norm)
    rng = random.Random(seed)
    rs = []
    for q in range(1, max_den + 1):
        reps = {}
        for r in residues_with_denominator(f, q):
            if r.denominator() == q:
                reps.setdefault(unit_orbit(r, _O(f))[0], r)
        level = [reps[k] for k in sorted(reps, key=lambda z: (z.x, z.y))]
        if r_per_den is not None and len(level) > r_per_den:
            level = rng.sample(level, r_per_den)
        rs += level

    for w in units:
        record("mu_w=1", mu(w) == one, w)
    for a in As:
        record("mu_a*mu_a=1", mu_star(a) * mu(a) == one, a)
    pairs = [(a, b) for a in As for b in As]
    if mu_pairs_limit is not None:
        pairs = pairs[:mu_pairs_limit]
    for a, b in pairs:
        record("mu_a mu_b=mu_ab", mu(a) * mu(b) == mu(a * b), (a, b))
    record("e_0=1", e(f.zero) == one, 0)
    shifts = [f.one] + ([f.omega] if not f.is_rational else [])
    for r in rs:
        for w in units:
            for b in shifts:
                record("e_wr+b=e_r", e(w * r + b) == e(r), (r, w, b))
        record("e_r*=e_-r", e(r).star() == e(-r), r)
    O = _O(f)
    for r in rs:
        for s in rs:
            lhs = e(r) * e(s)
            orb_r, orb_s = unit_orbit(r, O), unit_orbit(s, O)
            rhs = HeckeElement.zero(f)
            for u in orb_r:
                for v in orb_s:
                    rhs = rhs + e(u + v)
            rhs = rhs.scale(Fraction(1, len(orb_r) * len(orb_s)))
            record("e_r e_s", lhs == rhs, (r, s))
    for a in As:
        aO = principal_ideal(a)
        for r in rs:
            lhs = mu(a) * e(r) * mu_star(a)
            rhs = HeckeElement.zero(f)
            for b in aO.residues():
                rhs = rhs + e((r + b) / a)
            rhs = rhs.scale(Fraction(1, int(a.norm())))
            record("covariance", lhs == rhs, (a, r))
            record("mu_a* e_r mu_a=e_ar", mu_star(a) * e(r) * mu(a) == e(a * r), (a, r))
    return RelationReport(dict(counts), failures)


# ------------------------------------------------------------ JSON

def scalar_to_json(c):
    c = simplify_scalar(c)
    if isinstance(c, (int, Fraction)):
        q = Fraction(c)
        return str(q)
    if isinstance(c, SqrtSum):
        return {"sqrt_terms": {str(k): str(q) for k, q in sorted(c.terms.items())}}
    if isinstance(c, CyclotomicValue):
        return {"order": c.order, "coefficients": [str(q) for q in c.coeffs]}
    z = complex(c)
    return [z.real, z.imag]


def scalar_from_json(d):
    if isinstance(d, str):
        return Fraction(d)
    if isinstance(d, list):
        return complex(d[0], d[1])
    if "sqrt_terms" in d:
        return simplify_scalar(SqrtSum({int(k): Fraction(v) for k, v in d["sqrt_terms"].items()}))
    return CyclotomicValue(d["order"], {i: Fraction(v) for i, v in enumerate(d["coefficients"])})


def element_to_json(H: HeckeElement) -> list:
    from .number_field import element_to_json as ej

    return [{"x": ej(dc.x), "y": ej(dc.y), "coeff": scalar_to_json(c)} for dc, c in
            sorted(H.terms.items(), key=lambda t: t[0].sort_key())]


def element_from_json(f: Field, data) -> HeckeElement:
    from .number_field import element_from_json as ef

    out = {}
    for item in data:
        dc = dc_canonicalize(ef(f, item["x"]), ef(f, item["y"]))
        c = scalar_from_json(item["coeff"])
        out[dc] = out[dc] + c if dc in out else c
    return HeckeElement(f, out)
