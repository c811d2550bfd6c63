"""Boundary data of the Hecke system: minimal-norm ideals, cells, S_0, zeta sums.

Finite-level points of ``Y = O^/closure(O*_+)`` are described by their
valuations at finitely many primes (an explicit ``INF`` marks a vanishing
local component) together with a unit residue modulo a level ``m``.
Valuations at primes outside the declared support are zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .groupoid import Cocycle, FiniteGroupoid, rational_power
from .number_field import (
    Field,
    FieldElement,
    FractionalIdeal,
    Ideal,
    PrimeData,
    as_fractional,
    class_number_bound,
    fundamental_unit,
    ideal_lcm,
    ideals_of_norm,
    ideals_up_to,
    narrow_class_group,
    narrowly_principal,
    primes_above,
    principal_ideal,
    same_narrow_class,
    unit_ideal,
    valuation,
)

INF = math.inf


# ------------------------------------------------------ minimal ideals

@dataclass(frozen=True)
class ClassEntry:
    class_index: int
    min_norm: int
    ideals: tuple[Ideal, ...]

    @property
    def k(self) -> int:
        return len(self.ideals)


@dataclass(frozen=True)
class MinimalIdealTable:
    field: Field
    entries: tuple[ClassEntry, ...]

    @property
    def shape(self) -> list[int]:
        return [e.k for e in self.entries]

    def entry(self, c: int) -> ClassEntry:
        return self.entries[c]

    def ideal(self, c: int, j: int) -> Ideal:
        return self.entries[c].ideals[j]

    def cells(self) -> list[tuple[int, int, Ideal]]:
        return [(e.class_index, j, I) for e in self.entries for j, I in enumerate(e.ideals)]

    def locate(self, I: Ideal) -> tuple[int, int] | None:
        for c, j, J in self.cells():
            if J == I:
                return (c, j)
        return None

    def to_json(self) -> list[dict]:
        return [
            {"class": e.class_index, "min_norm": e.min_norm, "ideals": [list(I.hnf) for I in e.ideals], "k": e.k}
            for e in self.entries
        ]


def _sort_ideals(ideals) -> tuple[Ideal, ...]:
    return tuple(sorted(set(ideals), key=lambda I: I.hnf))


@lru_cache(maxsize=None)
def minimal_norm_ideals(f: Field) -> MinimalIdealTable:
    """First-hit enumeration by increasing norm, classes from the form class group."""
    G = narrow_class_group(f)
    best: dict[int, tuple[int, list[Ideal]]] = {}
    for n in range(1, class_number_bound(f) + 1):
        for I in ideals_of_norm(n, f):
            c = G.class_of(I)
            if c not in best:
                best[c] = (n, [I])
            elif best[c][0] == n:
                best[c][1].append(I)
        if len(best) == G.order:
            # every class is hit; finish this norm level and stop
            break
    if len(best) != G.order:
        raise AssertionError("enumeration bound missed a narrow class")
    entries = tuple(ClassEntry(c, best[c][0], _sort_ideals(best[c][1])) for c in range(G.order))
    return MinimalIdealTable(f, entries)


def minimal_norm_ideals_by_ratios(f: Field, bound: int | None = None) -> list[tuple[int, tuple[Ideal, ...]]]:
    """Independent route: group ideals into narrow classes by ratio tests, then take minima.

    Returns ``(min_norm, ideals)`` per class, sorted by the pair.  No forms are used.
    """
    bound = class_number_bound(f) if bound is None else bound
    classes: list[list[Ideal]] = []
    for I in ideals_up_to(bound, f):
        for cl in classes:
            if same_narrow_class(I, cl[0]):
                cl.append(I)
                break
        else:
            classes.append([I])
    out = []
    for cl in classes:
        m = min(I.norm for I in cl)
        out.append((m, _sort_ideals(I for I in cl if I.norm == m)))
    return sorted(out, key=lambda t: (t[0], [I.hnf for I in t[1]]))


# --------------------------------------------------------------- S_0

@dataclass(frozen=True)
class SZeroElement:
    ideal: FractionalIdeal
    generator: FieldElement
    cls: int
    pair: tuple[int, int]


def s_zero(table: MinimalIdealTable) -> list[SZeroElement]:
    """Ratios ``a_{c,i} a_{c,j}^{-1}`` with their totally positive generators of norm 1."""
    seen: dict = {}
    for e in table.entries:
        for i, A in enumerate(e.ideals):
            for j, B in enumerate(e.ideals):
                R = as_fractional(A) / as_fractional(B)
                if R.key() in seen:
                    continue
                g = narrowly_principal(R)
                if g is None:
                    raise AssertionError(f"{A} / {B} is not narrowly principal")
                if g.norm() != 1:
                    raise AssertionError(f"{A} / {B} has generator of norm {g.norm()}")
                seen[R.key()] = SZeroElement(R, g, e.class_index, (i, j))
    return list(seen.values())


def s_denominator(table: MinimalIdealTable) -> int:
    """A positive integer ``d`` with ``(d)`` inside every minimal ideal; bounds ``S`` by ``(1/d)O``."""
    f = table.field
    L = unit_ideal(f)
    for _, _, I in table.cells():
        L = ideal_lcm(L, I)
    return L.norm


# ------------------------------------------------------ finite-level points

class UndeterminedValuation(ValueError):
    """A valuation outside the declared window was needed."""


@dataclass(frozen=True)
class AdelePoint:
    """Point of ``Y`` at level ``m``: valuations on a finite support plus a unit residue.

    ``support`` maps prime ideals to exponents (``INF`` allowed).  If ``window``
    is given, every support prime must lie over a rational prime in it.
    """

    field: Field
    support: tuple[tuple[Ideal, float], ...]
    unit_residue: FieldElement
    level: int
    window: tuple[int, ...] | None = None

    @staticmethod
    def make(f: Field, support: dict | None = None, unit_residue=None, level: int = 1,
             window=None) -> "AdelePoint":
        support = support or {}
        items = []
        for P, e in support.items():
            if e != INF and (e < 0 or int(e) != e):
                raise ValueError(f"bad exponent {e}")
            if e == 0:
                continue
            if not P.is_prime():
                raise ValueError(f"{P} is not prime")
            items.append((P, e))
        items.sort(key=lambda t: t[0].hnf)
        u = f.one if unit_residue is None else unit_residue
        if not isinstance(u, FieldElement):
            u = f(u)
        if level > 1 and math.gcd(int(u.norm()), level) != 1:
            raise ValueError(f"{u} is not a unit modulo {level}")
        pt = AdelePoint(f, tuple(items), u, level, tuple(window) if window is not None else None)
        if window is not None:
            for P, _ in items:
                if P.norm.bit_length() and _rational_prime(P) not in window:
                    raise UndeterminedValuation(f"{P} lies outside the window {window}")
        return pt

    def valuation(self, P: Ideal):
        for Q, e in self.support:
            if Q == P:
                return e
        if self.window is not None and _rational_prime(P) not in self.window:
            raise UndeterminedValuation(f"valuation at {P} is outside the window")
        return 0

    def has_infinite(self) -> bool:
        return any(e == INF for _, e in self.support)

    def ideal(self) -> Ideal:
        """The integral ideal with the same valuations; needs finite support values."""
        if self.has_infinite():
            raise ValueError("point has an infinite valuation")
        I = unit_ideal(self.field)
        for P, e in self.support:
            I = I * P ** int(e)
        return I

    def global_rep(self) -> FieldElement:
        """An element of ``O`` congruent to the point modulo ``level``."""
        return point_representative(self)


def _rational_prime(P: Ideal) -> int:
    n = P.norm
    for p in range(2, n + 1):
        if n % p == 0:
            return p
    return 1


def _prime_factors_of_level(f: Field, m: int) -> list[Ideal]:
    from .number_field import factorint

    out = []
    for p in factorint(m):
        out += [pd.ideal for pd in primes_above(p, f)]
    return out


@lru_cache(maxsize=None)
def point_representative(pt: AdelePoint) -> FieldElement:
    f = pt.field
    m = pt.level
    targets: dict[Ideal, int] = {}
    mO = principal_ideal(f(m)) if m > 1 else unit_ideal(f)
    for P, e in pt.support:
        if e == INF:
            targets[P] = max(valuation(mO, _pd(P)), 1)
        else:
            targets[P] = int(e)
    for Q in _prime_factors_of_level(f, m):
        targets.setdefault(Q, 0)
    A = unit_ideal(f)
    for P, e in targets.items():
        A = A * P ** e
    finite = {P: e for P, e in pt.support if e != INF}

    def good(z: FieldElement) -> bool:
        for P, e in targets.items():
            v = _elem_valuation(z, P)
            if P in finite or (P not in dict(pt.support)):
                if v != e:
                    return False
            elif v < e:
                return False
        return True

    alpha = _small_element(A, good)
    if m == 1:
        return alpha
    rep = alpha * pt.unit_residue
    return mO.reduce(rep) if rep.is_integral() else rep


def _pd(P: Ideal) -> PrimeData:
    p = _rational_prime(P)
    for pd in primes_above(p, P.field):
        if pd.ideal == P:
            return pd
    raise ValueError(f"{P} is not prime")


def _elem_valuation(z: FieldElement, P: Ideal) -> int:
    return valuation(principal_ideal(z), _pd(P))


def _small_element(A: Ideal, ok) -> FieldElement:
    """Preferred element of ``A`` passing ``ok``: totally positive, then smallest norm and coordinates.

    Candidates are collected from the first box that contains any, doubled once.
    """
    f = A.field
    if f.is_rational:
        for k in range(1, 10**6):
            if ok(f(A.a * k)):
                return f(A.a * k)
        raise RuntimeError(f"no element with prescribed valuations in {A}")
    e1, e2 = A.z_basis()
    for R in range(1, 200):
        found = [z for s in range(-R, R + 1) for t in range(-R, R + 1)
                 if not (s == 0 and t == 0) and ok(z := e1 * s + e2 * t)]
        if found:
            R2 = 2 * R
            found = [z for s in range(-R2, R2 + 1) for t in range(-R2, R2 + 1)
                     if not (s == 0 and t == 0) and ok(z := e1 * s + e2 * t)]
            return min(found, key=lambda z: (not z.is_totally_positive(), abs(z.norm()),
                                             abs(z.x) + abs(z.y), -z.x, -z.y))
    raise RuntimeError(f"no element with prescribed valuations in {A}")


# -------------------------------------------------------- cell membership

def omega_membership(pt: AdelePoint, table: MinimalIdealTable) -> tuple[int, int] | None:
    """The cell ``(c, j)`` of ``Y_0`` containing the point, or ``None`` if it lies outside ``Y_0``."""
    if pt.has_infinite():
        return None
    b = pt.ideal()
    hits = [(c, j) for c, j, I in table.cells() if I == b]
    if len(hits) > 1:
        raise AssertionError("cells are not disjoint")
    return hits[0] if hits else None


@lru_cache(maxsize=None)
def _escaping_numerators(f: Field, norm_bound: int) -> tuple[Ideal, ...]:
    # c1 with some coprime c2, N(c2) < N(c1), and c1/c2 narrowly principal
    ideals = ideals_up_to(norm_bound, f)
    out = []
    for c1 in ideals:
        if c1.norm == 1:
            continue
        for c2 in ideals:
            if c2.norm >= c1.norm:
                break
            if (c1 + c2).norm != 1:
                continue
            if narrowly_principal(as_fractional(c1) / as_fractional(c2)) is not None:
                out.append(c1)
                break
    return tuple(out)


def in_Y0_brute(pt: AdelePoint, norm_bound: int = 200) -> bool:
    """Search for ``x`` totally positive, ``N(x) > 1``, with ``x^{-1} omega`` still integral.

    Writes ``(x) = c1 / c2`` with coprime integral ideals.  Integrality of
    ``x^{-1} omega`` means ``c1`` divides the valuation vector of the point.
    """
    support = dict(pt.support)
    for c1 in _escaping_numerators(pt.field, norm_bound):
        if all(support.get(P, 0) >= e for P, e in c1.factor().items()):
            return False
    return True


def escape_witness(P: Ideal) -> FieldElement:
    """A totally positive generator of ``P^{h_+}``."""
    f = P.field
    h = narrow_class_group(f).order
    x = narrowly_principal(P ** h)
    if x is None:
        raise AssertionError(f"{P}^{h} is not narrowly principal")
    return x


# ------------------------------------------------------ shapes and orbits

def unit_orbit_space(f: Field, m: int) -> list[tuple[FieldElement, ...]]:
    """Orbits of ``(O/m)^*`` under multiplication by totally positive units."""
    from .hecke import unit_residues

    mO = principal_ideal(f(m))
    gens = list(fundamental_unit(f).tp_generators())
    left = set(unit_residues(f, m))
    orbits = []
    for z in sorted(left, key=lambda z: (z.x, z.y)):
        if z not in left:
            continue
        orb = {z}
        frontier = [z]
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    v = mO.reduce(w * g)
                    if v not in orb:
                        orb.add(v)
                        nxt.append(v)
            frontier = nxt
        left -= orb
        orbits.append(tuple(sorted(orb, key=lambda z: (z.x, z.y))))
    return orbits


@dataclass(frozen=True)
class BoundaryAlgebraShape:
    matrix_sizes: list
    level: int
    orbit_count: int

    def to_json(self) -> dict:
        return {"shape": self.matrix_sizes, "level": self.level, "unit_orbits": self.orbit_count}


def boundary_algebra_shape(table: MinimalIdealTable, m: int = 1) -> BoundaryAlgebraShape:
    orbits = unit_orbit_space(table.field, m) if m > 1 else [()]
    return BoundaryAlgebraShape(table.shape, m, len(orbits))


# ------------------------------------------------------------ zeta sums

@dataclass(frozen=True)
class ZetaPartial:
    value: object
    tail_bound: float
    bound: int
    beta: object

    @property
    def converges(self) -> bool:
        return math.isfinite(self.tail_bound)


def divisor_tail_bound(beta, B: int, rational_field: bool) -> float:
    """Bound on ``sum_{n > B} a(n) n^{-beta}`` with ``a(n) <= 1`` over Q, ``a(n) <= d(n)`` otherwise.

    Uses ``sum_{n <= x} d(n) <= x (log x + 1)`` and partial summation.
    """
    b = float(beta)
    if b <= 1:
        return math.inf
    if rational_field:
        return B ** (1 - b) / (b - 1)
    return b * B ** (1 - b) * ((math.log(B) + 1) / (b - 1) + 1 / (b - 1) ** 2)


def _power(n: int, beta):
    return rational_power(Fraction(n), -beta) if not isinstance(beta, float) else n ** (-beta)


def zeta_partial(f: Field, beta, B: int) -> ZetaPartial:
    total = Fraction(0)
    for n in range(1, B + 1):
        k = len(ideals_of_norm(n, f))
        if k:
            total = total + k * _power(n, beta)
    return ZetaPartial(total, divisor_tail_bound(beta, B, f.is_rational), B, beta)


def zeta_class_partial(f: Field, c: int, beta, B: int) -> ZetaPartial:
    G = narrow_class_group(f)
    total = Fraction(0)
    for n in range(1, B + 1):
        for I in ideals_of_norm(n, f):
            if G.class_of(I) == c:
                total = total + _power(n, beta)
    return ZetaPartial(total, divisor_tail_bound(beta, B, f.is_rational), B, beta)


def class_members(f: Field, c: int, B: int) -> list[Ideal]:
    G = narrow_class_group(f)
    return [I for I in ideals_up_to(B, f) if G.class_of(I) == c]


# ------------------------------------------------ truncated Hecke groupoid

def hecke_groupoid_truncation(f: Field, norm_bound: int) -> tuple[FiniteGroupoid, Cocycle]:
    """Level-one truncation of ``K*_+/O*_+`` acting on ``Y``.

    Units are integral ideals of norm at most ``norm_bound`` (a point of
    ``Y`` seen only through its valuations).  There is one arrow ``b1 -> b2``
    whenever ``b2 b1^{-1}`` is narrowly principal; its cocycle is
    ``N(b2) / N(b1)`` in the multiplicative convention.
    """
    G = narrow_class_group(f)
    ideals = ideals_up_to(norm_bound, f)
    label = {I: I.hnf for I in ideals}
    by_class: dict[int, list[Ideal]] = {}
    for I in ideals:
        by_class.setdefault(G.class_of(I), []).append(I)
    arrows, r, s, inv, comp, vals = [], {}, {}, {}, {}, {}
    for members in by_class.values():
        for A in members:
            for B in members:
                g = (label[B], label[A])  # range B, source A
                arrows.append(g)
                r[g], s[g], inv[g] = (label[B], label[B]), (label[A], label[A]), (label[A], label[B])
                vals[g] = Fraction(B.norm, A.norm)
        for A in members:
            for B in members:
                for C in members:
                    comp[((label[C], label[B]), (label[B], label[A]))] = (label[C], label[A])
    units = [(label[I], label[I]) for I in ideals]
    return FiniteGroupoid(arrows, units, r, s, inv, comp), Cocycle(vals, multiplicative=True)
