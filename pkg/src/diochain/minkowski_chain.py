"""The Minkowski algorithm: greedy construction of the order-m matrix A_m,
extraction of the distinct chain B_k, projective iterates, and the
minimal-polynomial recovery used by the algebraicity criterion.

Row i of A_m is the integer vector of smallest |xi| in the box
[-m, m]^ell that is linearly independent of rows 1..i-1, with the first
nonzero entry of every row normalised positive.  Only primitive vectors can
ever be chosen (dividing out the content shrinks |xi| without changing
independence), so the candidate pool stores one representative per
direction and ties are impossible while the independence assumption holds.

The incremental engine keeps the best few candidates by |xi| with certified
dyadic-integer intervals, re-examining only vectors with a coordinate of
absolute value m+1 when the box grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import intmat
from .errors import (DegenerateScalar, InconsistentInput, NoRepetition,
                     PrecisionExhausted, ZeroDenominator)
from .realnum import (AlgebraicReal, FormTarget, RationalReal, Real,
                      canonical_interval, compare_abs, max_refine_bits,
                      scaled_bounds, sign_of, xi)


@dataclass(frozen=True)
class GreedyMatrix:
    """A_m: rows sorted by |xi|, sign-normalised, exact beta values."""

    m: int
    rows: tuple
    beta: tuple

    @property
    def ell(self):
        return len(self.rows)

    def det(self):
        return intmat.det(self.rows)


@dataclass(frozen=True)
class ChainEntry:
    """B_k = A_{m_k}, the k-th distinct matrix, with its projective tuple."""

    k: int
    m_k: int
    rows: tuple
    beta: tuple
    alpha_k: tuple

    def det(self):
        return intmat.det(self.rows)


def projective_action(rows, x: Sequence[Real]):
    """Linear-fractional action of an ell x ell matrix on an n-tuple."""
    ell = len(rows)
    n = ell - 1
    if len(x) != n:
        raise InconsistentInput("tuple length must be ell - 1")
    last = rows[-1]
    den: Real = RationalReal(last[-1])
    for j in range(n):
        den = den + last[j] * x[j]
    if sign_of(den) == 0:
        raise ZeroDenominator("projective action undefined: denominator is 0")
    out = []
    for i in range(n):
        num: Real = RationalReal(rows[i][-1])
        for j in range(n):
            num = num + rows[i][j] * x[j]
        out.append(num / den)
    return tuple(out)


# ---------------------------------------------------------------------------
# candidate generation

def _abs_bounds(lo: int, hi: int):
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return 0, max(-lo, hi)


def _canonical(vec) -> bool:
    for v in vec:
        if v > 0:
            return True
        if v < 0:
            return False
    return False


def _window_q(c0: int, c1: int, alo: int, ahi: int, vw: int):
    """All integers q for which [c0, c1] + q [alo, ahi] can meet [-vw, vw].

    Requires a sign-definite coefficient interval (alo > 0 or ahi < 0).
    Outward rounding only: the window may contain spurious candidates but
    never misses one.
    """
    if ahi < 0:
        lo, hi = _window_q(-c1, -c0, -ahi, -alo, vw)
        return -hi, -lo
    # constraint A: exists a with q a <= vw - c0
    num = vw - c0
    qhi = num // alo if num >= 0 else num // ahi
    # constraint B: exists a with q a >= -vw - c1
    num = -vw - c1
    qlo = -((-num) // alo) if num <= 0 else -((-num) // ahi)
    return qlo, qhi


class _Engine:
    """Incremental greedy state shared by chain() and greedy_matrix()."""

    def __init__(self, target: FormTarget, pool_extra=8, bits=192):
        self.target = target
        self.n = target.n
        self.ell = target.ell
        self.w = bits
        self._load_alpha()
        # upper bound on any chosen row's |xi|: some unit vector is always
        # independent of the previous rows, so max(1, |alpha_i|) suffices
        v = Fraction(1)
        for lo, hi in zip(self.alo, self.ahi):
            v = max(v, Fraction(max(abs(lo), abs(hi)) + 1, 1 << self.w))
        self.vbound = v
        self._vw = (v.numerator << self.w) // v.denominator + 1
        self.pool = []            # [abs_lo, abs_hi, lo, hi, r] ascending |xi|
        self._pool_set = set()
        self.pool_cap = self.ell + pool_extra
        self.m = 0
        self.rows = None
        self.entries = []
        self._mutated = False

    def _load_alpha(self):
        self.alo, self.ahi = [], []
        for a in self.target.alphas:
            lo, hi = scaled_bounds(a, self.w)
            self.alo.append(lo)
            self.ahi.append(hi)

    def _refine(self):
        if self.w * 2 > max_refine_bits():
            raise PrecisionExhausted(
                "chain comparison undecided at %d bits" % self.w)
        self.w *= 2
        self._load_alpha()
        self._vw = (self.vbound.numerator << self.w) // self.vbound.denominator + 1
        for item in self.pool:
            lo, hi = self._xi_scaled(item[4])
            item[0], item[1] = _abs_bounds(lo, hi)
            item[2], item[3] = lo, hi

    def _xi_scaled(self, r):
        lo = r[-1] << self.w
        hi = lo
        for i in range(self.n):
            q = r[i]
            if q > 0:
                lo += q * self.alo[i]
                hi += q * self.ahi[i]
            elif q < 0:
                lo += q * self.ahi[i]
                hi += q * self.alo[i]
        return lo, hi

    # -- pool ---------------------------------------------------------------

    def _less(self, a, b) -> bool:
        """Certified |xi(a)| < |xi(b)|, refining as needed."""
        while True:
            if a[1] < b[0]:
                return True
            if b[1] < a[0]:
                return False
            if a[4] == b[4]:
                return False
            self._refine()
            lo, hi = self._xi_scaled(a[4])
            a[0], a[1] = _abs_bounds(lo, hi)
            a[2], a[3] = lo, hi
            lo, hi = self._xi_scaled(b[4])
            b[0], b[1] = _abs_bounds(lo, hi)
            b[2], b[3] = lo, hi

    def _offer(self, r):
        lo, hi = self._xi_scaled(r)
        self._offer_bounds(r, lo, hi, self.w)

    def _offer_bounds(self, r, lo, hi, w):
        if r in self._pool_set:
            return
        if w != self.w:
            lo, hi = self._xi_scaled(r)
        alo, ahi = _abs_bounds(lo, hi)
        pool = self.pool
        if len(pool) == self.pool_cap and alo > pool[-1][1]:
            return
        item = [alo, ahi, lo, hi, r]
        i = len(pool)
        while i > 0 and self._less(item, pool[i - 1]):
            i -= 1
        pool.insert(i, item)
        self._pool_set.add(r)
        if len(pool) > self.pool_cap:
            dropped = pool.pop()
            self._pool_set.discard(dropped[4])
        self._mutated = True

    # -- generation of the order-m boundary ----------------------------------

    def _offer_q(self, q, m):
        w = self.w
        llo = 0
        lhi = 0
        for i in range(self.n):
            c = q[i]
            if c > 0:
                llo += c * self.alo[i]
                lhi += c * self.ahi[i]
            elif c < 0:
                llo += c * self.ahi[i]
                lhi += c * self.alo[i]
        pmin = max(-((lhi + self._vw) >> w), -m)
        pmax = min((self._vw - llo) >> w, m)
        g0 = 0
        for c in q:
            g0 = math.gcd(g0, c)
        for p in range(pmin, pmax + 1):
            if math.gcd(g0, p) != 1:
                continue
            self._offer_bounds(q + (p,), llo + (p << w), lhi + (p << w), w)

    def _step(self, m):
        """Offer every new candidate with some coordinate equal to +-m."""
        n = self.n
        if n == 1:
            self._offer_q((m,), m)
        else:
            # q-shells: max |q_i| = m, first nonzero positive
            for i in range(n):
                lower = [range(-(m - 1), m) for _ in range(i)]
                upper = [range(-m, m + 1) for _ in range(n - i - 1)]
                for pre in product(*lower):
                    for post in product(*upper):
                        q = pre + (m,) + post
                        if _canonical(q):
                            self._offer_q(q, m)
                        q = pre + (-m,) + post
                        if _canonical(q):
                            self._offer_q(q, m)
        # slab: |p| = m with the q-part strictly inside the smaller box
        self._slab(m)

    def _slab(self, m):
        """Vectors (q, +-m) with |xi| possibly <= vbound and max |q_i| < m."""
        n = self.n
        while not (self.alo[n - 1] > 0 or self.ahi[n - 1] < 0):
            self._refine()
        vw = self._vw
        prefix_ranges = [range(-(m - 1), m) for _ in range(n - 1)]
        for pre in product(*prefix_ranges):
            llo = 0
            lhi = 0
            for i, c in enumerate(pre):
                if c > 0:
                    llo += c * self.alo[i]
                    lhi += c * self.ahi[i]
                elif c < 0:
                    llo += c * self.ahi[i]
                    lhi += c * self.alo[i]
            for p_sig in (m, -m):
                c0 = (p_sig << self.w) + llo
                c1 = (p_sig << self.w) + lhi
                qlo, qhi = _window_q(c0, c1, self.alo[n - 1], self.ahi[n - 1], vw)
                for qn in range(max(qlo, -(m - 1)), min(qhi, m - 1) + 1):
                    vec = pre + (qn, p_sig)
                    if not _canonical(vec):
                        continue
                    g = 0
                    for c in vec:
                        g = math.gcd(g, c)
                    if g != 1:
                        continue
                    self._offer(vec)

    # -- greedy matrix --------------------------------------------------------

    def _greedy_rows(self):
        rows = []
        basis = []
        for item in self.pool:
            if _rank_extends(basis, item[4]):
                rows.append(item[4])
                if len(rows) == self.ell:
                    return tuple(rows)
        return None

    def advance(self, m_target=None, k_target=None):
        step = self._step_n1 if self.n == 1 else self._step
        while True:
            if m_target is not None and self.m >= m_target:
                return
            if k_target is not None and len(self.entries) >= k_target:
                return
            m = self.m + 1
            self._mutated = False
            step(m)
            self.m = m
            if self._mutated or self.rows is None:
                rows = self._greedy_rows()
                while rows is None:
                    self._rebuild()
                    rows = self._greedy_rows()
                if rows != self.rows:
                    self.rows = rows
                    self._record(m, rows)

    def _step_n1(self, m):
        """n = 1 shortcut: only p = round(-m alpha) can beat a sub-1/2 pool.

        Any other p differs from it by an integer, so |xi| >= 1 - 1/2; once
        the pool maximum is certified below 1/2 those candidates can never
        enter.  Falls back to the generic step when the certificates fail.
        """
        pool = self.pool
        w = self.w
        if len(pool) == self.pool_cap:
            half = 1 << (w - 1)
            if pool[-1][1] + 4 < half:
                alo, ahi = self.alo[0], self.ahi[0]
                llo, lhi = m * alo, m * ahi
                p = ((1 << w) - llo - lhi) >> (w + 1)   # round(-m alpha)
                if -m <= p <= m:
                    lo, hi = llo + (p << w), lhi + (p << w)
                    abs_lo, abs_hi = _abs_bounds(lo, hi)
                    if abs_hi <= half:
                        if abs_lo <= pool[-1][1] and math.gcd(m, p) == 1:
                            self._offer_bounds((m, p), lo, hi, w)
                        # slab vectors (q, +-m) need (m-1)|alpha| >= m - vbound
                        if (m - 1) * max(abs(alo), abs(ahi)) + self._vw < (m << w):
                            return
                        self._slab(m)
                        return
        self._step(m)

    def _rebuild(self):
        """Re-enumerate from scratch with a larger pool cap (rare)."""
        self.pool_cap *= 2
        self.pool = []
        self._pool_set = set()
        m_final = self.m
        self.m = 0
        for m in range(1, m_final + 1):
            self._step(m)
        self.m = m_final

    def _record(self, m, rows):
        beta = tuple(xi(self.target, r) for r in rows)
        alpha_k = tuple(beta[i] / beta[-1] for i in range(self.n))
        self.entries.append(ChainEntry(len(self.entries) + 1, m, rows, beta,
                                       alpha_k))


def _rank_extends(basis, r) -> bool:
    """Append r to the reduced Fraction basis if it raises the rank."""
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


# ---------------------------------------------------------------------------
# public operations

def greedy_matrix(target: FormTarget, m: int, full_scan=False) -> GreedyMatrix:
    """A_m from a fresh enumeration at order m.

    With full_scan the last coordinate runs over the whole box instead of
    the pruned window; this validates the pruning at desk scale.
    """
    if m < 1:
        raise InconsistentInput("m must be >= 1")
    if full_scan:
        return _greedy_full(target, m)
    eng = _Engine(target, pool_extra=8)
    eng.advance(m_target=m)
    rows = eng.rows
    beta = tuple(xi(target, r) for r in rows)
    return GreedyMatrix(m, rows, beta)


def _greedy_full(target, m):
    n, ell = target.n, target.ell
    cands = []
    for vec in product(range(-m, m + 1), repeat=ell):
        if not _canonical(vec):
            continue
        g = 0
        for c in vec:
            g = math.gcd(g, c)
        if g != 1:
            continue
        cands.append(vec)
    vals = {vec: abs(xi(target, vec)) for vec in cands}

    def key_cmp(a, b):
        c = compare_abs(vals[a], vals[b])
        if c:
            return c
        return -1 if a < b else (1 if a > b else 0)

    import functools
    cands.sort(key=functools.cmp_to_key(key_cmp))
    rows, basis = [], []
    for vec in cands:
        if _rank_extends(basis, vec):
            rows.append(vec)
            if len(rows) == ell:
                break
    beta = tuple(xi(target, r) for r in rows)
    return GreedyMatrix(m, tuple(rows), beta)


def chain(target: FormTarget, m_max=None, k_max=None):
    """Distinct matrices B_k = A_{m_k} in order of first appearance."""
    if m_max is None and k_max is None:
        raise InconsistentInput("need m_max or k_max")
    eng = _Engine(target)
    eng.advance(m_target=m_max, k_target=k_max)
    entries = eng.entries
    if k_max is not None:
        entries = entries[:k_max]
    return entries


def distinct_tuples(entries, mode="up_to_sign", tolerance_bits=None):
    """Distinct projective tuples over a chain, exactly or up to sign.

    Exact modes require algebraic targets.  For oracle targets pass
    tolerance_bits to get interval clustering, clearly labelled approximate.
    """
    if mode not in ("exact", "up_to_sign"):
        raise InconsistentInput("mode must be 'exact' or 'up_to_sign'")
    if tolerance_bits is not None:
        return _distinct_approx(entries, mode, tolerance_bits)
    groups = {}
    order = []
    for e in entries:
        tup = e.alpha_k
        if mode == "up_to_sign":
            # Example (ii) lists pairs by coordinate-wise absolute value
            tup = tuple(abs(x) for x in tup)
        key = tuple(_exact_key(x) for x in tup)
        if key not in groups:
            groups[key] = [tup, 0, []]
            order.append(key)
        groups[key][1] += 1
        groups[key][2].append(e.k)
    return [{"tuple": groups[k][0], "count": groups[k][1], "ks": groups[k][2],
             "approximate": False} for k in order]


def _exact_key(x: Real):
    if isinstance(x, RationalReal):
        return ("q", x.value)
    if isinstance(x, AlgebraicReal):
        return ("a", x.field.signature(), x.coords)
    raise InconsistentInput(
        "exact tuple comparison requires algebraic targets; "
        "pass tolerance_bits for oracle targets")


def _distinct_approx(entries, mode, bits):
    grid = 1 << bits
    groups = {}
    order = []
    for e in entries:
        tup = e.alpha_k
        if mode == "up_to_sign":
            tup = tuple(abs(x) for x in tup)
        key = []
        for x in tup:
            lo, hi = x.interval(bits + 2)
            mid = (lo + hi) / 2
            key.append((mid.numerator * grid) // mid.denominator)
        key = tuple(key)
        if key not in groups:
            groups[key] = [tup, 0, []]
            order.append(key)
        groups[key][1] += 1
        groups[key][2].append(e.k)
    return [{"tuple": groups[k][0], "count": groups[k][1], "ks": groups[k][2],
             "approximate": True} for k in order]


def find_repetition(entries):
    """First (k, k') with exactly equal projective tuples."""
    seen = {}
    for e in entries:
        key = tuple(_exact_key(x) for x in e.alpha_k)
        if key in seen:
            return seen[key], e.k
        seen[key] = e.k
    raise NoRepetition("no exact tuple repetition among %d entries" % len(entries))


def recover_minimal_polynomial(target: FormTarget, entries, k=None, kprime=None):
    """Integer polynomial of degree <= ell annihilating alpha, recovered from
    a repeated projective tuple via C = adj(B_k) B_k' and elimination.

    Content-normalised with positive leading coefficient; coefficients are
    returned highest degree first.
    """
    if target.powers_base is None:
        raise InconsistentInput("recovery requires the powers form target")
    if k is None or kprime is None:
        k, kprime = find_repetition(entries)
    by_k = {e.k: e for e in entries}
    ek, ekp = by_k[k], by_k[kprime]
    for a, b in zip(ek.alpha_k, ekp.alpha_k):
        if _exact_key(a) != _exact_key(b):
            raise InconsistentInput("tuples at k=%d and k'=%d differ" % (k, kprime))
    c = intmat.mat_mul(intmat.adjugate(ek.rows), ekp.rows)
    ell = target.ell
    n = target.n
    polys = []
    for i in range(n):
        # multiply row i+1 of C(alpha^n..1)^T = theta'(alpha^n..1)^T by alpha
        # and subtract row i: the theta' terms cancel
        coeffs = [0] * (ell + 1)          # degree ell, low first
        coeffs[ell] += c[i + 1][0]
        for j in range(1, ell):
            coeffs[ell - j] += c[i + 1][j] - c[i][j - 1]
        coeffs[0] -= c[i][ell - 1]
        if any(coeffs):
            polys.append(coeffs)
    if not polys:
        raise DegenerateScalar(
            "all eliminants vanished: B_k' is a scalar multiple of B_k")
    best = polys[0]
    g = 0
    for v in best:
        g = math.gcd(g, v)
    best = [v // g for v in best]
    while best and best[-1] == 0:
        best.pop()
    if best[-1] < 0:
        best = [-v for v in best]
    # sanity: the recovered polynomial must annihilate the base value
    alpha = target.powers_base
    acc: Real = RationalReal(0)
    for c0 in reversed(best):
        acc = acc * alpha + c0
    if sign_of(acc) != 0:
        raise InconsistentInput("recovered polynomial does not annihilate alpha")
    return tuple(reversed(best))


@dataclass(frozen=True)
class DiagnosticsRow:
    k: int
    m_k: int
    abs_alpha1: tuple
    scaled_beta1: tuple
    scaled_beta_ell: tuple
    running_min: tuple


@dataclass(frozen=True)
class DiagnosticsReport:
    """Certified trajectory of the quantities behind the badly-approximable
    and singular criteria.  No verdict is asserted: the criteria are
    asymptotic and only semi-decidable from a finite run."""

    target_n: int
    rows: tuple
    dets: tuple

    def final_running_min(self):
        return self.rows[-1].running_min if self.rows else None


def diagnose(target: FormTarget, m_max: int, bits=64) -> DiagnosticsReport:
    entries = chain(target, m_max=m_max)
    rows = []
    dets = []
    running = None
    n = target.n
    for e in entries:
        a1 = abs(e.alpha_k[0])
        if running is None or compare_abs(a1, running) < 0:
            running = a1
        mk_n = RationalReal(e.m_k ** n)
        rows.append(DiagnosticsRow(
            e.k, e.m_k,
            canonical_interval(a1, bits),
            canonical_interval(mk_n * abs(e.beta[0]), bits),
            canonical_interval(mk_n * abs(e.beta[-1]), bits),
            canonical_interval(running, bits)))
        dets.append(e.det())
    return DiagnosticsReport(n, tuple(rows), tuple(dets))
