"""Ground and KMS states of the Hecke system evaluated at finite level.

The additive character is ``chi(z) = exp(2 pi i Tr(z / delta))`` with
``delta = sqrt(D)`` (``delta = 1`` over Q).  Since ``delta`` generates the
different, ``chi`` is trivial exactly on ``O`` and ``chi((1/m) O)`` consists
of ``m``-th roots of unity.

Extremal states only see the part of a Hecke element graded by ``x = 1``.
Arrows ``(x, w)`` with ``x != 1`` modulo units never meet the unit space,
and points of ``Y_0`` have trivial isotropy (a finite valuation vector is
moved by every ``x`` with ``(x) != O``), so the other graded components
integrate to zero against both the point masses and the KMS measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .boundary import (
    INF,
    AdelePoint,
    MinimalIdealTable,
    class_members,
    divisor_tail_bound,
    minimal_norm_ideals,
    omega_membership,
)
from .hecke import DoubleCoset, HeckeElement, InsufficientLevel, _O, tau_u
from .number_field import (
    Field,
    FieldElement,
    Ideal,
    as_fractional,
    canonical_mod_units,
    narrow_class_group,
    narrowly_principal,
    principal_ideal,
    unit_orbit,
)
from .scalars import CyclotomicValue, SqrtSum, simplify_scalar

_EPS = 2.0 ** -52


# ------------------------------------------------------------ character

@dataclass(frozen=True)
class CharacterSpec:
    field: Field
    level: int = 1

    @property
    def delta(self) -> FieldElement:
        return self.field.sqrt_disc()


def chi_eval(z: FieldElement, spec: CharacterSpec) -> CyclotomicValue:
    """``chi(z)`` as an exact root of unity; ``z`` must lie in ``(1/level) O``."""
    m = spec.level
    if not (z * m).is_integral():
        raise InsufficientLevel(f"{z} is not in (1/{m})O")
    q = (z / spec.delta).trace() % 1
    return CyclotomicValue.root(q.denominator, q.numerator)


def _orbit_sum(z: FieldElement, y: FieldElement, spec: CharacterSpec) -> CyclotomicValue:
    # sum of chi(z v) over the unit orbit of y modulo O
    acc = CyclotomicValue.rational(0)
    for v in unit_orbit(y, _O(y.field)):
        acc = acc + chi_eval(z * v, spec)
    return acc


def e_r_function(r: FieldElement, omega: AdelePoint, spec: CharacterSpec | None = None) -> CyclotomicValue:
    """``(1/R(r)) sum_u chi(omega u r)`` over the unit orbit of ``r``."""
    spec = spec or CharacterSpec(omega.field, omega.level)
    if r.denominator() != 1 and omega.level % r.denominator():
        raise InsufficientLevel(f"level {omega.level} does not see denominators of {r}")
    orbit = unit_orbit(r, _O(r.field))
    return _orbit_sum(omega.global_rep(), r, spec) / len(orbit)


# ----------------------------------------------- identity-graded component

def _identity_label(f: Field) -> FieldElement:
    return canonical_mod_units(f.one)[0]


def identity_component(H: HeckeElement) -> dict[DoubleCoset, object]:
    # An arrow (x, omega) of the groupoid lies over a unit exactly when x omega = omega.
    # For omega with finite valuations this forces x to be a unit at every prime, and a
    # totally positive unit acting trivially is 1 modulo O*_+.  Points of Y_0 therefore have
    # trivial isotropy, and an extremal state at such a point sees only the x = 1 component.
    one = _identity_label(H.field)
    return {dc: c for dc, c in H.terms.items() if dc.x == one}


def _scale(c, v):
    if isinstance(c, (int, Fraction)):
        return v * c
    if isinstance(c, CyclotomicValue):
        return v * c
    if isinstance(c, SqrtSum) and c.is_rational():
        return v * c.to_fraction()
    return complex(v) * complex(c)


def _level_needed(comp: dict) -> int:
    m = 1
    for dc in comp:
        m = math.lcm(m, dc.y.denominator())
    return m


def _component_function(comp: dict, level: int):
    """``z -> sum c_dc sum_{v in orbit(y)} chi(z v)`` for integral ``z``, memoized mod ``level``."""
    if comp:
        f = next(iter(comp)).field
    need = _level_needed(comp)
    if level % need:
        raise InsufficientLevel(f"level {level} is not a multiple of the needed level {need}")
    spec = CharacterSpec(f, level) if comp else None
    mO = principal_ideal(f(level)) if comp else None
    memo: dict = {}

    def F(z: FieldElement):
        key = mO.reduce(z)
        if key not in memo:
            acc = CyclotomicValue.rational(0)
            for dc, c in sorted(comp.items(), key=lambda t: t[0].sort_key()):
                acc = acc + _scale(c, _orbit_sum(key, dc.y, spec))
            memo[key] = simplify_scalar(acc) if isinstance(acc, CyclotomicValue) else acc
        return memo[key]

    return F


def _sup_bound(comp: dict) -> float:
    return sum(abs(complex(c)) * len(unit_orbit(dc.y, _O(dc.field))) for dc, c in comp.items())


def _is_constant(comp: dict) -> bool:
    return all(dc.y.is_integral() for dc in comp)


def _constant_value(comp: dict):
    acc = Fraction(0)
    for c in comp.values():
        acc = acc + c
    return simplify_scalar(acc)


# ------------------------------------------------------------ ground states

@dataclass(frozen=True)
class GroundStatePoint:
    """A point ``omega`` of the cell ``Omega_{a_{c,j}}`` inside ``Y_0``."""

    cell: tuple[int, int]
    point: AdelePoint

    def __post_init__(self):
        table = minimal_norm_ideals(self.point.field)
        got = omega_membership(self.point, table)
        if got != tuple(self.cell):
            raise ValueError(f"point lies in cell {got}, not {self.cell}")

    @property
    def field(self) -> Field:
        return self.point.field

    @property
    def level(self) -> int:
        return self.point.level

    @property
    def ideal(self) -> Ideal:
        return minimal_norm_ideals(self.field).ideal(*self.cell)


def ground_point(f: Field, cell=(0, 0), unit_residue=None, level: int = 1) -> GroundStatePoint:
    """Build the point of cell ``(c, j)`` with valuations of ``a_{c,j}`` and the given unit residue."""
    table = minimal_norm_ideals(f)
    a = table.ideal(*cell)
    pt = AdelePoint.make(f, dict(a.factor()), unit_residue=unit_residue, level=level)
    return GroundStatePoint(tuple(cell), pt)


def ground_eval(p: GroundStatePoint, H: HeckeElement):
    """Extremal ground state at ``p``: the identity-graded part of ``H`` evaluated at ``omega``."""
    comp = identity_component(H)
    if not comp:
        return Fraction(0)
    if _is_constant(comp):
        return _constant_value(comp)
    F = _component_function(comp, p.level)
    return F(p.point.global_rep())


# --------------------------------------------------------------- KMS states

@dataclass(frozen=True)
class KMSStateSpec:
    """Extremal KMS_beta state attached to the narrow class and unit residue of ``point``.

    ``bound`` is the truncation norm ``B``; ``None`` picks a default.
    """

    beta: object
    point: GroundStatePoint
    bound: int | None = None

    def __post_init__(self):
        if float(self.beta) <= 1:
            raise ValueError(f"beta={self.beta} must exceed 1")

    def resolved_bound(self) -> int:
        if self.bound is not None:
            return self.bound
        return 10_000 if self.point.field.is_rational else 2_000


@dataclass(frozen=True)
class KMSValue:
    value: object
    error: float
    bound: int
    level: int

    def to_complex(self) -> complex:
        return complex(self.value)


def _fsum_complex(terms) -> complex:
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _em_tail(m: int, r: int, K: int, beta: float) -> tuple[float, float]:
    """``sum_{k >= K} (m k + r)^{-beta}`` by Euler-Maclaurin, with a remainder bound."""
    x = m * K + r
    integral = x ** (1 - beta) / (m * (beta - 1))
    g = x ** -beta
    g1 = -beta * m * x ** (-beta - 1)
    g3 = -beta * (beta + 1) * (beta + 2) * m ** 3 * x ** (-beta - 3)
    est = integral + g / 2 - g1 / 12 + g3 / 720
    return est, abs(g3) / 720


def _kms_rational(spec: KMSStateSpec, F, sup: float) -> KMSValue:
    beta = float(spec.beta)
    B = spec.resolved_bound()
    m = spec.point.level
    w = spec.point.point.global_rep()
    vals = {r: complex(F(w * r)) for r in range(1, m + 1)}
    S_terms = [vals[(n - 1) % m + 1] * n ** -beta for n in range(1, B + 1)]
    Z_terms = [n ** -beta for n in range(1, B + 1)]
    S_B, Z_B = _fsum_complex(S_terms), math.fsum(Z_terms)
    S_tail, Z_tail, S_err, Z_err = 0j, 0.0, 0.0, 0.0
    for r in range(1, m + 1):
        K = (B - r) // m + 1  # first k with m k + r > B
        est, rem = _em_tail(m, r, K, beta)
        S_tail += vals[r] * est
        Z_tail += est
        S_err += abs(vals[r]) * rem
        Z_err += rem
    fl = 8 * _EPS * (sum(abs(t) for t in S_terms) + sum(Z_terms)) * (1 + sup)
    S, Z = S_B + S_tail, Z_B + Z_tail
    S_err += fl
    Z_err += fl
    V = S / Z
    err = (S_err + abs(V) * Z_err) / (Z - Z_err)
    return KMSValue(_real_if_close(V, err), err, B, m)


def _real_if_close(v: complex, err: float):
    return v.real if abs(v.imag) <= err else v


def kms_terms(spec: KMSStateSpec):
    """Yield ``(N(b), x_b)`` for ideals ``b`` of the class of ``a_{c,j}`` with ``N(b) <= B``.

    ``x_b`` is a totally positive generator of ``b a^{-1}``; the point ``x_b omega``
    has valuation vector ``b``.
    """
    p = spec.point
    f = p.field
    a = p.ideal
    c = narrow_class_group(f).class_of(a)
    for b in class_members(f, c, spec.resolved_bound()):
        x = narrowly_principal(as_fractional(b) / as_fractional(a))
        if x is None:
            raise AssertionError(f"{b} and {a} are not narrowly equivalent")
        yield b.norm, x


def kms_eval(spec: KMSStateSpec, H: HeckeElement) -> KMSValue:
    """``phi_beta(H)`` with a rigorous error bound.

    Sums ``N(b)^{-beta} F(x_b omega)`` over the narrow class of the point and
    divides by the matching partial class zeta value.  Over Q the tails are
    summed per residue class modulo the level by Euler-Maclaurin; elsewhere
    a divisor-function majorant bounds them.
    """
    p = spec.point
    comp = identity_component(H)
    B = spec.resolved_bound()
    if not comp:
        return KMSValue(Fraction(0), 0.0, B, p.level)
    if _is_constant(comp):
        return KMSValue(_constant_value(comp), 0.0, B, p.level)
    F = _component_function(comp, p.level)
    sup = _sup_bound(comp)
    if p.field.is_rational:
        return _kms_rational(spec, F, sup)
    beta = float(spec.beta)
    w = p.point.global_rep()
    S_terms, Z_terms = [], []
    for n, x in kms_terms(spec):
        wt = n ** -beta
        S_terms.append(complex(F(x * w)) * wt)
        Z_terms.append(wt)
    S, Z = _fsum_complex(S_terms), math.fsum(Z_terms)
    tail = divisor_tail_bound(beta, B, False)
    fl = 8 * _EPS * (sum(abs(t) for t in S_terms) + Z) * (1 + sup)
    V = S / Z
    err = (sup * tail + fl + abs(V) * (tail + fl)) / Z
    return KMSValue(_real_if_close(V, err), err, B, p.level)


def kms_eval_mixture(weights, H: HeckeElement) -> KMSValue:
    """Convex combination ``sum w_i phi_i(H)`` of extremal KMS states ``(w_i, spec_i)``."""
    weights = list(weights)
    total = sum(Fraction(w) for w, _ in weights)
    if total != 1 or any(Fraction(w) < 0 for w, _ in weights):
        raise ValueError("weights must form a probability vector")
    vals = [(Fraction(w), kms_eval(s, H)) for w, s in weights]
    v = sum(float(w) * complex(k.value) for w, k in vals)
    err = sum(float(w) * k.error for w, k in vals)
    return KMSValue(_real_if_close(v, err), err, min(k.bound for _, k in vals), vals[0][1].level)


def y0_mass(spec: KMSStateSpec) -> tuple[float, float]:
    """Truncated ``mu_beta(Y_0)``: weight of the minimal ideals of the class over the class zeta sum.

    Returns ``(mass, error)``; the partial sum overestimates the true mass by at most ``error``.
    """
    beta = float(spec.beta)
    a_norm = spec.point.ideal.norm
    Z, top = 0.0, 0.0
    for n, _ in kms_terms(spec):
        Z += n ** -beta
        if n == a_norm:
            top += n ** -beta
    tail = divisor_tail_bound(beta, spec.resolved_bound(), spec.point.field.is_rational)
    mass = top / Z
    return mass, mass * tail / Z


# ---------------------------------------------------------- limits, Galois

@dataclass
class LimitReport:
    betas: list
    values: list
    errors: list
    ground: object
    gaps: list
    monotone: bool

    def to_json(self) -> dict:
        return {
            "betas": [str(b) for b in self.betas],
            "values": [_num(v) for v in self.values],
            "errors": self.errors,
            "ground": _num(self.ground),
            "gaps": self.gaps,
            "monotone": self.monotone,
        }


def _num(v):
    if isinstance(v, Fraction):
        return str(v)
    c = complex(v)
    return c.real if c.imag == 0 else [c.real, c.imag]


def kms_ground_limit_check(p: GroundStatePoint, H: HeckeElement, betas, bound: int | None = None) -> LimitReport:
    """``|phi_beta(H) - phi_infinity(H)|`` along an increasing grid of ``beta``."""
    betas = list(betas)
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])) or float(betas[0]) <= 1:
        raise ValueError("beta grid must be increasing and exceed 1")
    g = complex(ground_eval(p, H))
    vals, errs, gaps = [], [], []
    for b in betas:
        k = kms_eval(KMSStateSpec(b, p, bound), H)
        vals.append(k.value)
        errs.append(k.error)
        gaps.append(abs(complex(k.value) - g))
    mono = all(gaps[i + 1] <= gaps[i] + errs[i] + errs[i + 1] for i in range(len(gaps) - 1))
    return LimitReport(betas, vals, errs, ground_eval(p, H), gaps, mono)


def _galois_value(v, k: int):
    if isinstance(v, (int, Fraction)):
        return v
    if isinstance(v, CyclotomicValue):
        return v.galois(k % v.order if v.order > 1 else 1)
    raise TypeError(f"value {v!r} is not cyclotomic")


def artin_twist(v, w: int):
    """``r_Q(w)`` on a cyclotomic value: ``zeta -> zeta^w``, so that ``r_Q(w) chi(1) = chi(w)``."""
    return _galois_value(v, w)


def fabulous_check(u: FieldElement, H: HeckeElement, p: GroundStatePoint) -> bool:
    """``phi(tau_u H) == r_K(u^{-1}) phi(H)`` with ``r_K(u^{-1})`` acting by exponent ``N(u)^{-1}``."""
    from .hecke import is_arithmetic_fixed

    m = p.level
    if not is_arithmetic_fixed(H, m):
        raise ValueError("element is not fixed by the arithmetic action")
    lhs = ground_eval(p, tau_u(H, u, m))
    rhs = ground_eval(p, H)
    if isinstance(rhs, CyclotomicValue):
        k = pow(int(u.norm()) % rhs.order, -1, rhs.order) if rhs.order > 1 else 1
        rhs = _galois_value(rhs, k)
    else:
        rhs = _galois_value(rhs, 1)
    return lhs == rhs


def weil_identity_check(u: FieldElement, z: FieldElement, m: int) -> bool:
    """``r_K(u) chi(z) == chi(N(u) z)``, the left side through the norm ``N(u)`` mod ``m``."""
    N = int(u.norm())
    if math.gcd(N, m) != 1:
        raise ValueError(f"{u} is not a unit modulo {m}")
    spec = CharacterSpec(z.field, m)
    lhs = artin_twist(chi_eval(z, spec), N % m)
    rhs = chi_eval(z * N, spec)
    return lhs == rhs


# ---------------------------------------------- off-diagonal ground states

@dataclass(frozen=True)
class BoundaryArrow:
    """Arrow of the boundary groupoid from cell ``(c, j)`` to cell ``(c, i)`` labelled by ``s``."""

    target: tuple[int, int]
    source: tuple[int, int]
    s: FieldElement


def boundary_arrows(table: MinimalIdealTable) -> list[BoundaryArrow]:
    out = []
    for e in table.entries:
        for i, A in enumerate(e.ideals):
            for j, Bj in enumerate(e.ideals):
                s = narrowly_principal(as_fractional(A) / as_fractional(Bj))
                out.append(BoundaryArrow((e.class_index, i), (e.class_index, j), s))
    return out


def offdiagonal_ground_state(f: Field, c: int, v, norm_bound: int = 12):
    """Vector state ``<v, . v>`` on the ``M_{k_c}`` block, as a functional on the truncated Hecke groupoid.

    Experimental: the functional lives on the level-one truncation, whose
    units are integral ideals; the block sits on the minimal ideals of class ``c``.
    Returns ``(groupoid, cocycle, phi, arrows)``.
    """
    from .boundary import hecke_groupoid_truncation
    from .groupoid import vector_state

    table = minimal_norm_ideals(f)
    G, cocycle = hecke_groupoid_truncation(f, norm_bound)
    cells = [I.hnf for I in table.entry(c).ideals]
    if len(v) != len(cells):
        raise ValueError(f"vector length {len(v)} does not match k_c={len(cells)}")
    block = G.restrict_to([(hi, hj) for hi in cells for hj in cells])
    phi = vector_state(block, dict(zip(cells, v)))
    return G, cocycle, phi, boundary_arrows(table)
