"""The scaling lattice of a linear form, certified successive minima,
reduced bases, and the finiteness bound checks.

Two lattice/norm shapes cover everything this library needs: the
determinant-one lattice generated by (t^-1 e_i, alpha_i t^n) and
(0, ..., 0, t^n) under the sup norm, and Z^ell under the re-weighted norm
G_m built from an order-m greedy matrix.  Both share the structure
F(c) = max(prefix scales, last scale, weight * |xi(c)|), which is what the
box enumeration exploits.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import intmat
from .errors import (BoundViolated, DimensionTooLarge, InconsistentInput,
                     ZeroBetaEll)
from .realnum import (FormTarget, RationalReal, Real, _lift, canonical_interval,
                      compare_abs, sign_of, xi)

MAX_ELL = 5


@dataclass(frozen=True)
class SupNorm:
    tag = "sup"


@dataclass(frozen=True)
class GmNorm:
    """G_m(x) = max(|x_1|, ..., |x_ell|, (m/|beta_ell|) |L_alpha(x) + x_ell|)."""

    tag = "gm"
    m: int
    abs_beta_ell: Real
    weight: Real


def gm_norm(m: int, beta_ell: Real, target: FormTarget) -> GmNorm:
    if m < 1:
        raise InconsistentInput("m must be >= 1")
    beta_ell = _lift(beta_ell)
    if sign_of(beta_ell) == 0:
        raise ZeroBetaEll("G_m norm needs beta_ell != 0")
    ab = abs(beta_ell)
    return GmNorm(m, ab, RationalReal(m) / ab)


class NormedLattice:
    """Full-rank lattice given by generator rows plus a norm descriptor."""

    def __init__(self, target: FormTarget, basis, norm, structure, t=None):
        self.target = target
        self.basis = tuple(tuple(row) for row in basis)
        self.norm = norm
        self.structure = structure      # "lambda" | "integer"
        self.t = t
        self.ell = target.ell
        if self.ell > MAX_ELL:
            raise DimensionTooLarge("ell=%d above the enumeration cap" % self.ell)

    def embed(self, coeffs):
        """Lattice vector (tuple of Real) for an integer coefficient vector."""
        out = []
        for j in range(self.ell):
            acc: Real = RationalReal(0)
            for i, c in enumerate(coeffs):
                if c:
                    acc = acc + c * self.basis[i][j]
            out.append(acc)
        return tuple(out)

    def norm_value(self, coeffs) -> Real:
        """F of the lattice vector with the given coefficients."""
        if self.structure == "lambda":
            tinv = Fraction(1, 1) / self.t
            parts = [RationalReal(abs(c) * tinv) for c in coeffs[:-1]]
            parts.append(RationalReal(self.t ** (self.ell - 1))
                         * abs(xi(self.target, coeffs)))
        else:
            parts = [RationalReal(abs(c)) for c in coeffs]
            parts.append(self.norm.weight * abs(xi(self.target, coeffs)))
        return _max_real(parts)


def _max_real(values):
    best = values[0]
    for v in values[1:]:
        if compare_abs(v, best) > 0:
            best = v
    return best


def lambda_lattice(target: FormTarget, t) -> NormedLattice:
    """Determinant-one lattice (t^-1 e_i, alpha_i t^n) Z + ... + t^n e_ell Z."""
    t = Fraction(t)
    if t <= 0:
        raise InconsistentInput("t must be positive")
    n = target.n
    tn = t ** n
    rows = []
    for i in range(n):
        row = [RationalReal(0)] * (n + 1)
        row[i] = RationalReal(1 / t)
        row[n] = target.alphas[i] * RationalReal(tn)
        rows.append(tuple(row))
    last = [RationalReal(0)] * (n + 1)
    last[n] = RationalReal(tn)
    rows.append(tuple(last))
    return NormedLattice(target, rows, SupNorm(), "lambda", t=t)


def integer_lattice(target: FormTarget, norm) -> NormedLattice:
    rows = []
    ell = target.ell
    for i in range(ell):
        row = [RationalReal(0)] * ell
        row[i] = RationalReal(1)
        rows.append(tuple(row))
    return NormedLattice(target, rows, norm, "integer")


@dataclass(frozen=True)
class MinimaReport:
    mu: tuple                 # Real values, nondecreasing
    coeffs: tuple             # integer coefficient vectors
    vectors: tuple            # embedded lattice vectors

    def intervals(self, bits=64):
        return tuple(canonical_interval(v, bits) for v in self.mu)


@dataclass(frozen=True)
class ReducedBasisReport:
    coeffs: tuple             # ell x ell unimodular integer matrix (rows)
    lam: tuple                # lambda_i = F(v_i), nondecreasing
    vectors: tuple

    def det(self):
        return intmat.det(self.coeffs)

    def intervals(self, bits=64):
        return tuple(canonical_interval(v, bits) for v in self.lam)


# ---------------------------------------------------------------------------
# enumeration

def _ub_fraction(x: Real, bits=48) -> Fraction:
    lo, hi = x.interval(bits)
    return max(abs(lo), abs(hi))


def _lb_fraction(x: Real, bits=48) -> Fraction:
    """Certified positive lower bound of |x| (refines until separated)."""
    b = bits
    while True:
        lo, hi = x.interval(b)
        if lo > 0:
            return lo
        if hi < 0:
            return -hi
        b *= 2


def _canonical(vec) -> bool:
    for v in vec:
        if v > 0:
            return True
        if v < 0:
            return False
    return False


def _enumerate_ball(lat: NormedLattice, u: Fraction):
    """Canonical nonzero coefficient vectors with F possibly <= u.

    Over-approximates via certified windows; callers compare exactly.
    """
    n = lat.ell - 1
    target = lat.target
    if lat.structure == "lambda":
        prefix_bound = [int(u * lat.t) for _ in range(n)]
        weight_lb = Fraction(lat.t ** n)
        last_bound = None
    else:
        prefix_bound = [int(u) for _ in range(n)]
        weight_lb = _lb_fraction(lat.norm.weight)
        last_bound = int(u)
    xi_rad = u / weight_lb
    bits = 32
    while Fraction(1, 1 << bits) > xi_rad / 4 and bits < 4096:
        bits *= 2
    approx = [a.interval(bits) for a in target.alphas]
    out = []
    for q in product(*[range(-b, b + 1) for b in prefix_bound]):
        llo = Fraction(0)
        lhi = Fraction(0)
        for c, (alo, ahi) in zip(q, approx):
            if c > 0:
                llo += c * alo
                lhi += c * ahi
            elif c < 0:
                llo += c * ahi
                lhi += c * alo
        pmin = math.ceil(-lhi - xi_rad)
        pmax = math.floor(-llo + xi_rad)
        if last_bound is not None:
            pmin = max(pmin, -last_bound)
            pmax = min(pmax, last_bound)
        for p in range(pmin, pmax + 1):
            vec = q + (p,)
            if _canonical(vec):
                out.append(vec)
    return out


def _sorted_by_norm(lat: NormedLattice, cands):
    vals = {c: lat.norm_value(c) for c in cands}

    def cmp(a, b):
        s = compare_abs(vals[a], vals[b])
        if s:
            return s
        aa, bb = tuple(map(abs, a)), tuple(map(abs, b))
        if aa != bb:
            return -1 if aa < bb else 1
        return -1 if a < b else (1 if a > b else 0)

    return sorted(cands, key=functools.cmp_to_key(cmp)), vals


def _rank_extends(basis, r) -> bool:
    row = [Fraction(v) for v in r]
    for piv_col, b in basis:
        if row[piv_col]:
            f = row[piv_col]
            row = [a - f * c for a, c in zip(row, b)]
    piv = next((j for j, v in enumerate(row) if v), None)
    if piv is None:
        return False
    inv = 1 / row[piv]
    basis.append((piv, [v * inv for v in row]))
    return True


def successive_minima(lat: NormedLattice) -> MinimaReport:
    """Exact successive minima by complete enumeration of a certified ball.

    The radius doubles until the enumerated set contains ell independent
    vectors; completeness of the final ball then certifies every mu_j.
    """
    ell = lat.ell
    u = Fraction(1)
    for _ in range(64):
        cands = _enumerate_ball(lat, u)
        order, vals = _sorted_by_norm(lat, cands)
        chosen = []
        basis = []
        for c in order:
            if compare_abs(vals[c], RationalReal(u)) > 0:
                continue
            if _rank_extends(basis, c):
                chosen.append(c)
                if len(chosen) == ell:
                    break
        if len(chosen) == ell:
            mu = tuple(vals[c] for c in chosen)
            return MinimaReport(mu, tuple(chosen),
                                tuple(lat.embed(c) for c in chosen))
        u *= 2
    raise InconsistentInput("enumeration ladder failed to reach full rank")


def reduced_basis(lat: NormedLattice) -> ReducedBasisReport:
    """Greedy reduced basis: v_k is norm-minimal among vectors whose
    coefficient stack extends to a unimodular matrix.

    The enumeration radius (3/2)^(ell-2) mu_ell covers the reduced basis by
    the norm-comparison lemma; a final certificate pass confirms that no
    enumerated vector eligible for slot k beats v_k.
    """
    ell = lat.ell
    minima = successive_minima(lat)
    radius = _ub_fraction(minima.mu[-1]) * Fraction(3, 2) ** max(0, ell - 2)
    for _ in range(16):
        cands = _enumerate_ball(lat, radius)
        order, vals = _sorted_by_norm(lat, cands)
        rows = []
        for c in order:
            if not intmat.is_basis_extendable(rows + [list(c)]):
                continue
            rows.append(list(c))
            if len(rows) == ell:
                break
        if len(rows) == ell:
            coeffs = tuple(tuple(r) for r in rows)
            if intmat.det(coeffs) not in (1, -1):
                raise BoundViolated("reduced basis coefficients not unimodular")
            lam = tuple(vals[tuple(r)] for r in rows)
            _certify_reduced(lat, coeffs, lam, order, vals)
            return ReducedBasisReport(coeffs, lam,
                                      tuple(lat.embed(c) for c in coeffs))
        radius *= Fraction(3, 2)
    raise InconsistentInput("reduced basis enumeration failed")  # pragma: no cover


def _certify_reduced(lat, coeffs, lam, order, vals):
    """Check F(v) >= lambda_k for every enumerated v in R_k."""
    inv = intmat.int_inverse_unimodular(coeffs)
    for c in order:
        a = intmat.mat_vec(tuple(zip(*inv)), c)   # coordinates in the v-basis
        for k in range(lat.ell):
            g = 0
            for v in a[k:]:
                g = math.gcd(g, v)
            if g == 1 and compare_abs(vals[c], lam[k]) < 0:
                raise BoundViolated(
                    "reduced-basis certificate failed at k=%d, v=%s" % (k + 1, c))


@dataclass(frozen=True)
class FinitenessRecord:
    value: Real
    lower: Fraction
    upper: Fraction

    def interval(self, bits=64):
        return canonical_interval(self.value, bits)


def first_finiteness_check(report: ReducedBasisReport,
                           vol_unit_ball: Real) -> FinitenessRecord:
    """Assert 2^ell/ell! <= vol(B) lambda_1...lambda_ell <= 2^ell (3/2)^e,
    e = (ell-1)(ell-2)/2.  Violation means an implementation bug."""
    ell = len(report.lam)
    value: Real = _lift(vol_unit_ball)
    for lam in report.lam:
        value = value * lam
    lower = Fraction(2 ** ell, math.factorial(ell))
    upper = Fraction(2 ** ell) * Fraction(3, 2) ** ((ell - 1) * (ell - 2) // 2)
    if sign_of(value - lower) < 0 or sign_of(RationalReal(upper) - value) < 0:
        raise BoundViolated("first finiteness bound violated")
    return FinitenessRecord(value, lower, upper)


def minkowski_second_check(minima: MinimaReport, vol_unit_ball: Real):
    """vol(B) mu_1...mu_ell <= 2^ell for determinant-one lattices."""
    ell = len(minima.mu)
    value: Real = _lift(vol_unit_ball)
    for mu in minima.mu:
        value = value * mu
    if sign_of(RationalReal(2 ** ell) - value) < 0:
        raise BoundViolated("Minkowski second-theorem bound violated")
    return value


def lambda1_trajectory(target: FormTarget, t_grid: Sequence, bits=64):
    """mu_1 of the scaling lattice per grid point, certified."""
    out = []
    for t in t_grid:
        t = Fraction(t)
        if t < 1:
            raise InconsistentInput("grid values must be >= 1")
        lat = lambda_lattice(target, t)
        rep = successive_minima(lat)
        out.append((t, rep.mu[0], canonical_interval(rep.mu[0], bits)))
    return out


# ---------------------------------------------------------------------------
# exact volume of the G_m unit ball (n <= 2)

def _piecewise_product_integral(f_pieces, g_pieces):
    """Integral over u >= 0 of f(u) g(u), both piecewise linear on segments
    [(lo, hi, a, b)] meaning a + b u, zero outside their segments."""
    points = []
    for lo, hi, _, _ in f_pieces + g_pieces:
        points.extend((lo, hi))
    uniq = []
    for p in points:
        if not any(sign_of(p - q) == 0 for q in uniq):
            uniq.append(p)
    uniq.sort(key=functools.cmp_to_key(lambda a, b: sign_of(a - b)))
    total: Real = RationalReal(0)

    def value_on(pieces, lo, hi):
        for plo, phi, a, b in pieces:
            if sign_of(lo - plo) >= 0 and sign_of(phi - hi) >= 0:
                return a, b
        return None

    for lo, hi in zip(uniq, uniq[1:]):
        f = value_on(f_pieces, lo, hi)
        g = value_on(g_pieces, lo, hi)
        if f is None or g is None:
            continue
        a1, b1 = f
        a2, b2 = g
        c0 = a1 * a2
        c1 = a1 * b2 + a2 * b1
        c2 = b1 * b2
        d1 = hi - lo
        d2 = (hi * hi - lo * lo) * Fraction(1, 2)
        d3 = (hi * hi * hi - lo * lo * lo) * Fraction(1, 3)
        total = total + c0 * d1 + c1 * d2 + c2 * d3
    return total


def _len_pieces(w: Real):
    """Overlap length of (c - w, c + w) with (-1, 1) as a function of |c|."""
    zero, one, two = RationalReal(0), RationalReal(1), RationalReal(2)
    if sign_of(one - w) >= 0:
        return [(zero, one - w, two * w, zero),
                (one - w, one + w, one + w, RationalReal(-1))]
    return [(zero, w - one, two, zero),
            (w - one, one + w, one + w, RationalReal(-1))]


def gm_ball_volume(norm: GmNorm, target: FormTarget) -> Real:
    """Exact volume of the G_m unit ball for n <= 2.

    Reduced to the integral of a density of L_alpha over the cube against
    the overlap-length profile of the xi slab.
    """
    n = target.n
    if n > 2:
        raise DimensionTooLarge("exact G_m ball volume implemented for n <= 2")
    w = _lift(1) / norm.weight          # = |beta_ell| / m
    zero = RationalReal(0)
    a = [abs(al) for al in target.alphas]
    if n == 1:
        f = [(zero, a[0], _lift(1) / (2 * a[0]), zero)]
    else:
        if compare_abs(a[0], a[1]) >= 0:
            amax, amin = a[0], a[1]
        else:
            amax, amin = a[1], a[0]
        diff = amax - amin
        s = a[0] + a[1]
        flat = _lift(1) / (2 * amax)
        slope_den = _lift(1) / (4 * a[0] * a[1])
        f = [(zero, diff, flat, zero),
             (diff, s, s * slope_den, RationalReal(-1) * slope_den)]
    integral = _piecewise_product_integral(f, _len_pieces(w))
    return RationalReal(2 ** (n + 1)) * integral
