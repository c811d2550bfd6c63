"""Finite étale groupoids with cocycles: convolution, dynamics, KMS and ground states.

Functionals on the convolution algebra are plain dicts ``arrow -> value``
recording ``phi(delta_g)``; this covers both states built from a measure plus
isotropy traces and general ground states with off-diagonal values.

Cocycles come in two conventions.  Additive cocycles store ``c(g)`` itself.
Multiplicative cocycles store a positive rational ``N(g)`` with
``c = log N``, so weights ``exp(-beta*c) = N**(-beta)`` stay exact for
rational ``beta`` whenever the power is rational.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Hashable, Iterable

Arrow = Hashable

TOL = 1e-12


# --------------------------------------------------------------- scalars

def _conj(z):
    if isinstance(z, complex):
        return z.conjugate()
    if hasattr(z, "conjugate") and not isinstance(z, (int, float, Fraction)):
        return z.conjugate()
    return z


def _is_exact(z) -> bool:
    return isinstance(z, (int, Rational))


def _abs(z) -> float:
    return abs(complex(z))


def _dev(a, b):
    """``|a - b|``, exact for rational inputs."""
    d = a - b
    if _is_exact(d):
        return abs(Fraction(d))
    return _abs(d)


def _max(a, b):
    return a if a >= b else b


def rational_power(N: Fraction, e) -> Fraction | float:
    """``N**e`` for a positive rational ``N``; exact whenever the result is rational."""
    N = Fraction(N)
    if N <= 0:
        raise ValueError("base must be positive")
    if isinstance(e, float) and not e.is_integer():
        return float(N) ** e
    e = Fraction(e)
    if e.denominator == 1:
        return N ** int(e)
    q = e.denominator
    num = _int_root(N.numerator, q)
    den = _int_root(N.denominator, q)
    if num is None or den is None:
        return float(N) ** float(e)
    return Fraction(num, den) ** e.numerator


def _int_root(n: int, q: int) -> int | None:
    r = round(n ** (1.0 / q))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** q == n:
            return c
    return None


# -------------------------------------------------------------- groupoid

@dataclass
class FiniteGroupoid:
    """Arrows with range, source, inverse and a composition table.

    ``compose[(g, h)]`` is defined exactly when ``s(g) == r(h)``.
    """

    arrows: list
    units: list
    r: dict
    s: dict
    inverse: dict
    compose: dict

    def __post_init__(self):
        self._by_range: dict = {x: [] for x in self.units}
        for g in self.arrows:
            self._by_range[self.r[g]].append(g)

    def range_fiber(self, x) -> list:
        return self._by_range[x]

    def source_fiber(self, x) -> list:
        return [g for g in self.arrows if self.s[g] == x]

    def isotropy(self, x) -> list:
        return [g for g in self._by_range[x] if self.s[g] == x]

    def unit_of(self, x):
        return x

    def mul(self, g, h):
        return self.compose.get((g, h))

    def orbits(self) -> list[list]:
        seen, out = set(), []
        for x in self.units:
            if x in seen:
                continue
            orb = sorted({self.s[g] for g in self._by_range[x]}, key=repr)
            seen.update(orb)
            out.append(orb)
        return out

    def reduction(self, Z: Iterable) -> "FiniteGroupoid":
        Z = set(Z)
        arrows = [g for g in self.arrows if self.r[g] in Z and self.s[g] in Z]
        return self.restrict_to(arrows)

    def restrict_to(self, arrows: list) -> "FiniteGroupoid":
        keep = set(arrows)
        units = [x for x in self.units if x in keep]
        return FiniteGroupoid(
            arrows=list(arrows),
            units=units,
            r={g: self.r[g] for g in arrows},
            s={g: self.s[g] for g in arrows},
            inverse={g: self.inverse[g] for g in arrows},
            compose={k: v for k, v in self.compose.items() if k[0] in keep and k[1] in keep},
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            set(self.arrows) == set(other.arrows)
            and set(self.units) == set(other.units)
            and self.compose == other.compose
        )


def pair_groupoid(n: int, labels: list | None = None) -> FiniteGroupoid:
    """``{(i, j)}`` with ``r(i, j) = i`` and ``s(i, j) = j``; units are ``(i, i)``."""
    labels = list(range(n)) if labels is None else list(labels)
    arrows = [(i, j) for i in labels for j in labels]
    units = [(i, i) for i in labels]
    return FiniteGroupoid(
        arrows=arrows,
        units=units,
        r={(i, j): (i, i) for i, j in arrows},
        s={(i, j): (j, j) for i, j in arrows},
        inverse={(i, j): (j, i) for i, j in arrows},
        compose={((i, j), (k, l)): (i, l) for i, j in arrows for k, l in arrows if j == k},
    )


def cyclic_group(n: int) -> FiniteGroupoid:
    """Z/n as a groupoid with one unit ``0``."""
    arrows = list(range(n))
    return FiniteGroupoid(
        arrows=arrows,
        units=[0],
        r={g: 0 for g in arrows},
        s={g: 0 for g in arrows},
        inverse={g: (-g) % n for g in arrows},
        compose={(g, h): (g + h) % n for g in arrows for h in arrows},
    )


def product(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    arrows = [(g, h) for g in G.arrows for h in H.arrows]
    units = [(x, y) for x in G.units for y in H.units]
    comp = {}
    for (g1, g2), gg in G.compose.items():
        for (h1, h2), hh in H.compose.items():
            comp[((g1, h1), (g2, h2))] = (gg, hh)
    return FiniteGroupoid(
        arrows=arrows,
        units=units,
        r={(g, h): (G.r[g], H.r[h]) for g, h in arrows},
        s={(g, h): (G.s[g], H.s[h]) for g, h in arrows},
        inverse={(g, h): (G.inverse[g], H.inverse[h]) for g, h in arrows},
        compose=comp,
    )


def disjoint_union(*parts: FiniteGroupoid) -> FiniteGroupoid:
    arrows, units, r, s, inv, comp = [], [], {}, {}, {}, {}
    for k, G in enumerate(parts):
        tag = lambda g, k=k: (k, g)
        arrows += [tag(g) for g in G.arrows]
        units += [tag(x) for x in G.units]
        for g in G.arrows:
            r[tag(g)], s[tag(g)], inv[tag(g)] = tag(G.r[g]), tag(G.s[g]), tag(G.inverse[g])
        for (g, h), gh in G.compose.items():
            comp[(tag(g), tag(h))] = tag(gh)
    return FiniteGroupoid(arrows, units, r, s, inv, comp)


# ---------------------------------------------------------------- cocycle

@dataclass
class Cocycle:
    values: dict
    multiplicative: bool = False

    def c(self, g) -> float:
        v = self.values[g]
        return math.log(v) if self.multiplicative else v

    def sign(self, g) -> int:
        v = self.values[g]
        if self.multiplicative:
            return (v > 1) - (v < 1)
        return (v > 0) - (v < 0)

    def weight(self, g, beta):
        """``exp(-beta * c(g))``; exact when possible."""
        v = self.values[g]
        if self.multiplicative:
            return rational_power(Fraction(v), -Fraction(beta) if not isinstance(beta, float) else -beta)
        if v == 0 or beta == 0:
            return Fraction(1)
        return math.exp(-float(beta) * float(v))

    def phase(self, g, t):
        """``exp(i t c(g))``; exact ``1`` when ``c(g) == 0``."""
        if self.sign(g) == 0 or t == 0:
            return Fraction(1)
        return cmath.exp(1j * float(t) * self.c(g))


def potential_cocycle(G: FiniteGroupoid, potential: dict, multiplicative: bool = False) -> Cocycle:
    """Coboundary ``c(g) = a(r(g)) - a(s(g))`` (or ``N(r)/N(s)`` multiplicatively)."""
    vals = {}
    for g in G.arrows:
        a, b = Fraction(potential[G.r[g]]), Fraction(potential[G.s[g]])
        vals[g] = a / b if multiplicative else a - b
    return Cocycle(vals, multiplicative)


def zero_cocycle(G: FiniteGroupoid, multiplicative: bool = False) -> Cocycle:
    return Cocycle({g: Fraction(1 if multiplicative else 0) for g in G.arrows}, multiplicative)


# -------------------------------------------------------------- validate

@dataclass
class Diagnostics:
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, kind: str, witness):
        self.errors.append((kind, witness))


def validate(G: FiniteGroupoid, c: Cocycle | None = None) -> Diagnostics:
    diag = Diagnostics()
    arrows = set(G.arrows)
    for x in G.units:
        if x not in arrows:
            diag.add("unit not an arrow", x)
        elif G.r[x] != x or G.s[x] != x:
            diag.add("unit not fixed by r, s", x)
    for g in G.arrows:
        for h in G.arrows:
            composable = G.s[g] == G.r[h]
            gh = G.compose.get((g, h))
            if composable and gh is None:
                diag.add("missing composition", (g, h))
            elif not composable and gh is not None:
                diag.add("composition of non-composable pair", (g, h))
            elif gh is not None and (G.r[gh] != G.r[g] or G.s[gh] != G.s[h]):
                diag.add("range/source of product", (g, h))
    for g in G.arrows:
        gi = G.inverse[g]
        if G.inverse.get(gi) != g:
            diag.add("inverse not an involution", g)
        if G.compose.get((g, gi)) != G.r[g]:
            diag.add("g g^-1 is not r(g)", g)
        if G.compose.get((G.r[g], g)) != g or G.compose.get((g, G.s[g])) != g:
            diag.add("units do not act trivially", g)
    for (g, h), gh in G.compose.items():
        for k in G.range_fiber(G.s[h]):
            left = G.compose.get((gh, k))
            hk = G.compose.get((h, k))
            right = G.compose.get((g, hk)) if hk is not None else None
            if left != right:
                diag.add("associativity", (g, h, k))
    if c is not None:
        zero = 1 if c.multiplicative else 0
        for g in G.arrows:
            if g not in c.values:
                diag.add("cocycle undefined", g)
        if diag.errors:
            return diag
        for x in G.units:
            if c.values[x] != zero:
                diag.add("cocycle nonzero on unit", x)
        for (g, h), gh in G.compose.items():
            lhs = c.values[gh]
            rhs = c.values[g] * c.values[h] if c.multiplicative else c.values[g] + c.values[h]
            if lhs != rhs:
                diag.add("cocycle not additive", (g, h))
        for g in G.arrows:
            vi = c.values[G.inverse[g]]
            want = 1 / Fraction(c.values[g]) if c.multiplicative else -c.values[g]
            if vi != want:
                diag.add("cocycle on inverse", g)
    return diag


# -------------------------------------------------------------- algebra

@dataclass
class AlgebraElement:
    groupoid: FiniteGroupoid
    coeffs: dict

    @staticmethod
    def delta(G: FiniteGroupoid, g, coeff=Fraction(1)) -> "AlgebraElement":
        return AlgebraElement(G, {g: coeff})

    @staticmethod
    def one(G: FiniteGroupoid) -> "AlgebraElement":
        return AlgebraElement(G, {x: Fraction(1) for x in G.units})

    def clean(self) -> "AlgebraElement":
        return AlgebraElement(self.groupoid, {g: v for g, v in self.coeffs.items() if v != 0})

    def __add__(self, other):
        out = dict(self.coeffs)
        for g, v in other.coeffs.items():
            out[g] = out.get(g, 0) + v
        return AlgebraElement(self.groupoid, out).clean()

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k) -> "AlgebraElement":
        return AlgebraElement(self.groupoid, {g: k * v for g, v in self.coeffs.items()}).clean()

    def __mul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        a, b = self.clean().coeffs, other.clean().coeffs
        if set(a) != set(b):
            return False
        return all(_close(a[g], b[g]) for g in a)

    def star(self) -> "AlgebraElement":
        return involution(self)


def _close(a, b) -> bool:
    if _is_exact(a) and _is_exact(b):
        return a == b
    return _abs(a - b) <= TOL


def convolve(f1: AlgebraElement, f2: AlgebraElement) -> AlgebraElement:
    G = f1.groupoid
    out: dict = {}
    for h, a in f1.coeffs.items():
        for k, b in f2.coeffs.items():
            hk = G.compose.get((h, k))
            if hk is not None:
                out[hk] = out.get(hk, 0) + a * b
    return AlgebraElement(G, out).clean()


def involution(f: AlgebraElement) -> AlgebraElement:
    G = f.groupoid
    return AlgebraElement(G, {G.inverse[g]: _conj(v) for g, v in f.coeffs.items()})


def apply_dynamics(f: AlgebraElement, c: Cocycle, t) -> AlgebraElement:
    return AlgebraElement(f.groupoid, {g: c.phase(g, t) * v for g, v in f.coeffs.items()})


def apply_analytic(f: AlgebraElement, c: Cocycle, beta) -> AlgebraElement:
    """``sigma_{i beta}``: multiply ``f(g)`` by ``exp(-beta c(g))``."""
    return AlgebraElement(f.groupoid, {g: c.weight(g, beta) * v for g, v in f.coeffs.items()})


# --------------------------------------------------------------- states

@dataclass
class StateSpec:
    """A measure on units together with a trace on each isotropy group."""

    measure: dict
    isotropy_traces: dict = field(default_factory=dict)

    def trace_at(self, G: FiniteGroupoid, x) -> dict:
        tr = self.isotropy_traces.get(x)
        if tr is None:
            return {x: Fraction(1)}
        return tr


def state_from_data(G: FiniteGroupoid, spec: StateSpec) -> dict:
    """The functional ``phi(delta_g) = mu(x) * phi_x(g)`` on isotropy arrows at ``x``."""
    total = sum(spec.measure.get(x, 0) for x in G.units)
    if not _close(total, 1):
        raise ValueError(f"measure has total mass {total}, expected 1")
    for x in G.units:
        if spec.measure.get(x, 0) < 0:
            raise ValueError(f"negative mass at {x}")
        tr = spec.trace_at(G, x)
        if not _close(tr.get(x, 0), 1):
            raise ValueError(f"isotropy trace at {x} is not 1 at the unit")
    phi = {}
    for x in G.units:
        m = spec.measure.get(x, 0)
        if m == 0:
            continue
        tr = spec.trace_at(G, x)
        for g in G.isotropy(x):
            v = tr.get(g, 0)
            if v != 0:
                phi[g] = m * v
    return phi


def evaluate(phi: dict, f: AlgebraElement):
    return sum((v * phi.get(g, 0) for g, v in f.coeffs.items()), Fraction(0))


def gibbs_measure(G: FiniteGroupoid, potential: dict, beta, multiplicative: bool = False) -> dict:
    """``mu(x)`` proportional to ``exp(-beta a_x)`` (``N_x**(-beta)`` multiplicatively) per orbit.

    Only defined for transitive groupoids.
    """
    if len(G.orbits()) != 1:
        raise ValueError("Gibbs measure needs a transitive groupoid")
    if multiplicative:
        w = {x: rational_power(Fraction(potential[x]), -beta) for x in G.units}
    else:
        w = {x: math.exp(-float(beta) * float(potential[x])) for x in G.units}
    Z = sum(w.values())
    return {x: w[x] / Z for x in G.units}


def check_quasi_invariance(G: FiniteGroupoid, spec: StateSpec, c: Cocycle, beta) -> float:
    """Max of ``|mu(r(g)) - exp(-beta c(g)) mu(s(g))|`` over arrows."""
    worst = Fraction(0)
    for g in G.arrows:
        lhs = spec.measure.get(G.r[g], 0)
        rhs = c.weight(g, beta) * spec.measure.get(G.s[g], 0)
        worst = _max(worst, _dev(lhs, rhs))
    return worst


def _product_value(G, phi, g, h):
    gh = G.compose.get((g, h))
    return phi.get(gh, 0) if gh is not None else 0


def check_KMS(G: FiniteGroupoid, phi: dict, c: Cocycle, beta, require_invariance: bool = True) -> float:
    """Max deviation of ``phi(d_g d_h) = exp(-beta c(g)) phi(d_h d_g)``.

    At ``beta == 0`` the condition only says ``phi`` is a trace; with
    ``require_invariance`` the violation also measures ``sigma``-invariance,
    i.e. ``phi(d_g) == 0`` whenever ``c(g) != 0``.
    """
    worst = Fraction(0)
    for g in G.arrows:
        w = c.weight(g, beta)
        for h in G.arrows:
            lhs = _product_value(G, phi, g, h)
            rhs = w * _product_value(G, phi, h, g)
            if lhs != 0 or rhs != 0:
                worst = _max(worst, _dev(lhs, rhs))
    if beta == 0 and require_invariance:
        for g, v in phi.items():
            if c.sign(g) != 0:
                worst = _max(worst, _dev(v, 0))
    return worst


def check_state(G: FiniteGroupoid, phi: dict, tol: float = 1e-10) -> bool:
    """Positivity and normalization of a functional.

    ``phi(f^* f)`` splits over common ranges, so positivity is positive
    semi-definiteness of each matrix ``[phi(d_{g^-1} d_h)]`` over ``G^x``.
    """
    import numpy as np

    if not _close(sum((phi.get(x, 0) for x in G.units), Fraction(0)), 1):
        return False
    for x in G.units:
        fib = G.range_fiber(x)
        M = np.array(
            [[complex(_product_value(G, phi, G.inverse[g], h)) for h in fib] for g in fib]
        )
        if not np.allclose(M, M.conj().T, atol=tol):
            return False
        if np.linalg.eigvalsh(M).min() < -tol:
            return False
    return True


# ------------------------------------------------------ linear algebra

def _rref(rows: list[list[Fraction]], ncols: int):
    """Exact reduced row echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    i = 0
    for j in range(ncols):
        p = next((k for k in range(i, len(rows)) if rows[k][j] != 0), None)
        if p is None:
            continue
        rows[i], rows[p] = rows[p], rows[i]
        piv = rows[i][j]
        rows[i] = [v / piv for v in rows[i]]
        for k in range(len(rows)):
            if k != i and rows[k][j] != 0:
                f = rows[k][j]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
        pivots.append(j)
        i += 1
        if i == len(rows):
            break
    return rows[:i], pivots


@dataclass
class SolutionSpace:
    particular: dict | None
    dimension: int
    unknowns: list


def kms_solution_space(G: FiniteGroupoid, c: Cocycle, beta, require_invariance: bool = True) -> SolutionSpace:
    """Affine space of normalized functionals satisfying the KMS relations exactly.

    The unknowns are the values ``phi(d_g)`` for every arrow.  Weights must be
    rational.  ``dimension == 0`` means the KMS functional is unique.
    """
    arrows = list(G.arrows)
    idx = {g: i for i, g in enumerate(arrows)}
    n = len(arrows)
    rows = []
    for g in arrows:
        w = c.weight(g, beta)
        if not _is_exact(w):
            raise ValueError("exact solution space needs rational weights")
        for h in arrows:
            row = [Fraction(0)] * (n + 1)
            gh, hg = G.compose.get((g, h)), G.compose.get((h, g))
            if gh is not None:
                row[idx[gh]] += 1
            if hg is not None:
                row[idx[hg]] -= w
            if any(row):
                rows.append(row)
    if beta == 0 and require_invariance:
        for g in arrows:
            if c.sign(g) != 0:
                row = [Fraction(0)] * (n + 1)
                row[idx[g]] = Fraction(1)
                rows.append(row)
    norm = [Fraction(0)] * (n + 1)
    for x in G.units:
        norm[idx[x]] = Fraction(1)
    norm[n] = Fraction(1)
    rows.append(norm)
    red, piv = _rref(rows, n + 1)
    if n in piv:
        return SolutionSpace(None, -1, arrows)
    part = {g: Fraction(0) for g in arrows}
    for r, j in zip(red, piv):
        part[arrows[j]] = r[n]
    return SolutionSpace({g: v for g, v in part.items() if v != 0}, n - len(piv), arrows)


# ------------------------------------------------------- boundary & ground

class EmptyBoundary(ValueError):
    """No unit has ``c <= 0`` on all arrows ranging there; no ground states exist."""


def boundary_set(G: FiniteGroupoid, c: Cocycle) -> list:
    Z = [x for x in G.units if all(c.sign(g) <= 0 for g in G.range_fiber(x))]
    Z_src = [x for x in G.units if all(c.sign(g) >= 0 for g in G.source_fiber(x))]
    assert Z == Z_src, "range and source descriptions of the boundary set disagree"
    return Z


def boundary_groupoid(G: FiniteGroupoid, c: Cocycle) -> FiniteGroupoid:
    Z = boundary_set(G, c)
    if not Z:
        raise EmptyBoundary("boundary set is empty")
    direct = G.reduction(Z)
    kernel = G.restrict_to([g for g in G.arrows if c.sign(g) == 0])
    via_kernel = kernel.reduction(Z)
    assert direct == via_kernel, "reduction of G and of the kernel of c differ on Z"
    return direct


@dataclass
class GroundReport:
    ok: bool
    witnesses: list


def check_ground(G: FiniteGroupoid, phi: dict, c: Cocycle) -> GroundReport:
    """Vanishing of ``phi(d_{g^-1} d_h)`` over arrows ``g, h`` with ``c < 0`` and equal range."""
    neg = [g for g in G.arrows if c.sign(g) < 0]
    bad = []
    for g in neg:
        for h in neg:
            if G.r[g] != G.r[h]:
                continue
            v = _product_value(G, phi, G.inverse[g], h)
            if not _close(v, 0):
                bad.append((g, h, v))
    return GroundReport(not bad, bad)


def restrict_to_boundary(f: AlgebraElement, c: Cocycle) -> AlgebraElement:
    G = f.groupoid
    Z = set(boundary_set(G, c))
    return AlgebraElement(G, {g: v for g, v in f.coeffs.items() if G.r[g] in Z and G.s[g] in Z})


def ground_from_boundary_state(G: FiniteGroupoid, c: Cocycle, psi: dict) -> dict:
    """Extend a functional on the boundary groupoid by zero off it."""
    Z = set(boundary_set(G, c))
    if not Z:
        raise EmptyBoundary("boundary set is empty")
    for g in psi:
        if G.r[g] not in Z or G.s[g] not in Z:
            raise ValueError(f"{g!r} is not an arrow of the boundary groupoid")
    return dict(psi)


def boundary_restriction(G: FiniteGroupoid, c: Cocycle, phi: dict) -> dict:
    """The functional ``psi`` on the boundary groupoid induced by ``phi``."""
    Z = set(boundary_set(G, c))
    return {g: v for g, v in phi.items() if G.r[g] in Z and G.s[g] in Z}


def is_tracial(G: FiniteGroupoid, phi: dict) -> bool:
    return all(
        _close(_product_value(G, phi, g, h), _product_value(G, phi, h, g))
        for g in G.arrows
        for h in G.arrows
    )


def kms_infty_compat(G: FiniteGroupoid, c: Cocycle, phi: dict) -> bool:
    """Whether the boundary state induced by a ground state is a trace."""
    GZ = boundary_groupoid(G, c)
    return is_tracial(GZ, boundary_restriction(G, c, phi))


def vector_state(G: FiniteGroupoid, v: dict) -> dict:
    """Vector state ``phi(d_(i,j)) = conj(v_i) v_j / |v|^2`` on a pair groupoid."""
    norm2 = sum(_conj(a) * a for a in v.values())
    if _is_exact(norm2):
        norm2 = Fraction(norm2)
    out = {}
    for g in G.arrows:
        i, j = g
        val = _conj(v.get(i, 0)) * v.get(j, 0) / norm2
        if val != 0:
            out[g] = val
    return out


# ------------------------------------------------------------------ JSON

def _fr(s) -> Fraction:
    return Fraction(s)


def _fr_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _key(g) -> str:
    return g if isinstance(g, str) else json.dumps(g)


def groupoid_to_json(G: FiniteGroupoid, c: Cocycle | None = None, phi: dict | None = None) -> dict:
    data = {
        "units": [_key(x) for x in G.units],
        "arrows": [
            {"id": _key(g), "range": _key(G.r[g]), "source": _key(G.s[g]), "inverse": _key(G.inverse[g])}
            for g in G.arrows
        ],
        "compose": [[_key(g), _key(h), _key(gh)] for (g, h), gh in G.compose.items()],
    }
    if c is not None:
        data["cocycle"] = {
            "convention": "multiplicative" if c.multiplicative else "additive",
            "values": {_key(g): _fr_str(v) for g, v in c.values.items()},
        }
    if phi is not None:
        data["functional"] = {_key(g): _scalar_to_json(v) for g, v in phi.items()}
    return data


def _scalar_to_json(v):
    if _is_exact(v):
        return _fr_str(v)
    z = complex(v)
    return [z.real, z.imag]


def _scalar_from_json(v):
    if isinstance(v, str):
        return _fr(v)
    if isinstance(v, (int, float)):
        return v
    return complex(v[0], v[1])


def groupoid_from_json(data: dict) -> tuple[FiniteGroupoid, Cocycle | None, dict | None]:
    from .schemas import validate_json

    validate_json(data, "groupoid")
    arrows = [a["id"] for a in data["arrows"]]
    G = FiniteGroupoid(
        arrows=arrows,
        units=list(data["units"]),
        r={a["id"]: a["range"] for a in data["arrows"]},
        s={a["id"]: a["source"] for a in data["arrows"]},
        inverse={a["id"]: a["inverse"] for a in data["arrows"]},
        compose={(g, h): gh for g, h, gh in data["compose"]},
    )
    c = None
    if "cocycle" in data:
        cc = data["cocycle"]
        c = Cocycle({g: _fr(v) for g, v in cc["values"].items()}, cc.get("convention") == "multiplicative")
    phi = None
    if "functional" in data:
        phi = {g: _scalar_from_json(v) for g, v in data["functional"].items()}
    elif "state" in data:
        st = data["state"]
        spec = StateSpec(
            {x: _fr(v) for x, v in st["measure"].items()},
            {x: {g: _scalar_from_json(v) for g, v in tr.items()} for x, tr in st.get("isotropy_traces", {}).items()},
        )
        phi = state_from_data(G, spec)
    return G, c, phi


def groupoid_report(G: FiniteGroupoid, c: Cocycle | None, phi: dict | None, beta=None) -> dict:
    """Everything the CLI prints for a groupoid file."""
    diag = validate(G, c)
    rep = {"valid": diag.ok, "errors": [[k, repr(w)] for k, w in diag.errors]}
    if not diag.ok or c is None:
        return rep
    Z = boundary_set(G, c)
    rep["boundary_set"] = [_key(x) for x in Z]
    if Z:
        rep["boundary_arrows"] = len(boundary_groupoid(G, c).arrows)
    if phi is not None:
        rep["is_state"] = check_state(G, phi)
        g = check_ground(G, phi, c)
        rep["ground"] = g.ok
        rep["ground_witnesses"] = [[_key(a), _key(b)] for a, b, _ in g.witnesses]
        if beta is not None:
            rep["kms_violation"] = _scalar_to_json(check_KMS(G, phi, c, beta))
        if g.ok and Z:
            rep["kms_infty_compatible"] = kms_infty_compat(G, c, phi)
    return rep
