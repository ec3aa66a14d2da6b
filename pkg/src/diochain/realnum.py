"""Exact real scalars with rigorous sign decisions.

Three kinds of values share one interface: exact rationals, elements of a
declared real number field (coordinates over the power basis of a primitive
element with an isolating interval), and interval oracles that refine on
demand with a certified tail bound.  Arithmetic folds back into the rational
or field representation whenever it can, so anything built from rationals
and a single field stays exactly decidable; expressions involving an oracle
become lazy nodes whose certified intervals shrink on demand.

No decision path ever touches floating point.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import InconsistentInput, PrecisionExhausted, UnknownName, ZeroDenominator

# Outcomes of compare_abs.
LT, EQ, GT = -1, 0, 1

DEFAULT_MAX_BITS = 4096
_max_refine_bits = DEFAULT_MAX_BITS


def set_max_refine_bits(bits: int) -> None:
    """Set the global refinement cap (width 2**-bits) for oracle decisions."""
    global _max_refine_bits
    if bits < 8:
        raise ValueError("precision cap below 8 bits is useless")
    _max_refine_bits = int(bits)


def max_refine_bits() -> int:
    return _max_refine_bits


def _width(lo: Fraction, hi: Fraction) -> Fraction:
    return hi - lo


def _ceil_log2(x: Fraction) -> int:
    """Smallest k with x <= 2**k, for x > 0."""
    n, d = x.numerator, x.denominator

    def le_pow(k):  # n/d <= 2**k
        return n <= (d << k) if k >= 0 else (n << -k) <= d

    k = n.bit_length() - d.bit_length() + 1
    while not le_pow(k):
        k += 1
    while le_pow(k - 1):
        k -= 1
    return k


def _imul(alo: Fraction, ahi: Fraction, blo: Fraction, bhi: Fraction):
    p = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return min(p), max(p)


# ---------------------------------------------------------------------------
# polynomial helpers (dense coefficient lists, low degree first, Fractions)

def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _poly_eval_interval(c, xlo: Fraction, xhi: Fraction):
    lo, hi = Fraction(0), Fraction(0)
    for coef in reversed(c):
        lo, hi = _imul(lo, hi, xlo, xhi)
        lo, hi = lo + coef, hi + coef
    return lo, hi


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] * inv
        q[i] = f
        if f:
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    return _poly_trim(q), _poly_trim(a)


def _poly_gcd(a, b):
    a, b = list(a), list(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_deriv(a):
    return [i * c for i, c in enumerate(a)][1:]


# ---------------------------------------------------------------------------


class NumberField:
    """Real number field Q(theta): integer minimal polynomial plus an
    isolating interval (rational endpoints, sign change) for the root theta.

    Irreducibility is asserted by the caller; squarefreeness is checked.
    Elements are coordinate vectors over the power basis 1, theta, ...,
    theta^(d-1), which keeps zero-testing exact.
    """

    def __init__(self, coeffs_high_to_low: Iterable[int], lo, hi):
        coeffs = [int(c) for c in coeffs_high_to_low]
        if not coeffs or coeffs[0] == 0:
            raise InconsistentInput("leading coefficient must be nonzero")
        g = 0
        for c in coeffs:
            g = math.gcd(g, c)
        coeffs = [c // g for c in coeffs]
        if coeffs[0] < 0:
            coeffs = [-c for c in coeffs]
        self.int_coeffs = tuple(coeffs)          # high degree first
        self.degree = len(coeffs) - 1
        if self.degree < 2:
            raise InconsistentInput(
                "degree-%d polynomial does not declare a field; use a rational"
                % self.degree)
        lo, hi = Fraction(lo), Fraction(hi)
        if not lo < hi:
            raise InconsistentInput("empty isolating interval")
        mono = [Fraction(c, coeffs[0]) for c in reversed(coeffs)]  # low first, monic
        self._monic = mono
        if len(_poly_gcd(mono, _poly_deriv(mono))) > 1:
            raise InconsistentInput("minimal polynomial must be squarefree")
        slo, shi = _poly_eval(mono, lo), _poly_eval(mono, hi)
        if slo == 0 or shi == 0 or (slo < 0) == (shi < 0):
            raise InconsistentInput("isolating interval must give a sign change")
        self._initial = (lo, hi)
        self._lo, self._hi = lo, hi
        self._slo_neg = slo < 0
        self._lock = threading.Lock()
        # reduction table: theta^(d-1+j) as coordinate vectors, j = 1..d-1
        d = self.degree
        self._red = []
        cur = [-c for c in mono[:-1]]  # theta^d
        self._red.append(tuple(cur))
        for _ in range(d - 2):
            shifted = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            cur = [shifted[i] + top * self._red[0][i] for i in range(d)]
            self._red.append(tuple(cur))

    def signature(self):
        return (self.int_coeffs, self._initial[0], self._initial[1])

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return "NumberField(%s, %s, %s)" % (list(self.int_coeffs), *self._initial)

    def root_interval(self, bits: int):
        """Isolating interval for theta narrowed to width <= 2**-bits."""
        target = Fraction(1, 1 << bits)
        with self._lock:
            lo, hi = self._lo, self._hi
            while hi - lo > target:
                mid = (lo + hi) / 2
                s = _poly_eval(self._monic, mid)
                if s == 0:
                    raise InconsistentInput("rational root; polynomial reducible")
                if (s < 0) == self._slo_neg:
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    def _reduce(self, poly):
        """Reduce a low-first Fraction polynomial modulo the minimal polynomial."""
        d = self.degree
        out = [Fraction(0)] * d
        for i, c in enumerate(poly):
            if not c:
                continue
            if i < d:
                out[i] += c
            else:
                tab = self._red[i - d]
                for j in range(d):
                    out[j] += c * tab[j]
        return tuple(out)

    def element(self, coords) -> "Real":
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.degree:
            raise InconsistentInput("coordinate vector has wrong length")
        if all(c == 0 for c in coords[1:]):
            return RationalReal(coords[0])
        return AlgebraicReal(self, coords)

    def gen(self) -> "AlgebraicReal":
        coords = [Fraction(0)] * self.degree
        coords[1] = Fraction(1)
        return AlgebraicReal(self, tuple(coords))

    def _mul(self, a, b):
        return self._reduce(_poly_mul(list(a), list(b)))

    def _inv(self, a):
        # extended Euclid in Q[x]: u*a + v*minpoly = 1
        r0, r1 = self._monic, _poly_trim(list(a))
        if not r1:
            raise ZeroDenominator("inverse of zero field element")
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            s = _poly_trim([(s0[i] if i < len(s0) else 0) -
                            sum(q[j] * s1[i - j] for j in range(max(0, i - len(s1) + 1), min(len(q), i + 1)))
                            for i in range(max(len(s0), len(q) + len(s1) - 1))])
            r0, r1, s0, s1 = r1, r, s1, s
        c = r1[0]
        return self._reduce([x / c for x in s1])


class Real:
    """Abstract exact real scalar."""

    __slots__ = ()

    kind = "abstract"

    def _interval(self, bits: int):
        raise NotImplementedError

    def interval(self, bits: int = 64):
        """Certified rational interval of width <= 2**-bits containing the value."""
        lo, hi = self._interval(bits)
        assert lo <= hi
        return lo, hi

    def sign(self) -> int:
        raise NotImplementedError

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        return _add(self, _lift(other))

    def __radd__(self, other):
        return _add(_lift(other), self)

    def __sub__(self, other):
        return _add(self, _neg(_lift(other)))

    def __rsub__(self, other):
        return _add(_lift(other), _neg(self))

    def __mul__(self, other):
        return _mul(self, _lift(other))

    def __rmul__(self, other):
        return _mul(_lift(other), self)

    def __truediv__(self, other):
        return _div(self, _lift(other))

    def __rtruediv__(self, other):
        return _div(_lift(other), self)

    def __neg__(self):
        return _neg(self)

    def __abs__(self):
        return _abs(self)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return _div(RationalReal(1), self.__pow__(-k))
        out: Real = RationalReal(1)
        base: Real = self
        while k:
            if k & 1:
                out = _mul(out, base)
            base = _mul(base, base)
            k >>= 1
        return out


class RationalReal(Real):
    __slots__ = ("value",)

    kind = "rational"

    def __init__(self, value):
        object.__setattr__(self, "value", Fraction(value))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def _interval(self, bits):
        return self.value, self.value

    def sign(self):
        v = self.value
        return -1 if v < 0 else (1 if v > 0 else 0)

    def as_fraction(self):
        return self.value

    def __eq__(self, other):
        return isinstance(other, RationalReal) and self.value == other.value

    def __hash__(self):
        return hash(("rational", self.value))

    def __repr__(self):
        return "RationalReal(%s)" % self.value


class AlgebraicReal(Real):
    """Nonrational element of a NumberField (rational coords fold away)."""

    __slots__ = ("field", "coords", "_sign")

    kind = "algebraic"

    def __init__(self, field: NumberField, coords):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", tuple(coords))
        object.__setattr__(self, "_sign", None)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def _interval(self, bits):
        target = Fraction(1, 1 << bits)
        b = bits + 2
        while True:
            rlo, rhi = self.field.root_interval(b)
            lo, hi = _poly_eval_interval(list(self.coords), rlo, rhi)
            if hi - lo <= target:
                return lo, hi
            b *= 2

    def sign(self):
        if self._sign is not None:
            return self._sign
        if all(c == 0 for c in self.coords):
            s = 0
        else:
            b = 16
            while True:
                lo, hi = self._interval(b)
                if lo > 0:
                    s = 1
                    break
                if hi < 0:
                    s = -1
                    break
                b *= 2
        object.__setattr__(self, "_sign", s)
        return s

    def __eq__(self, other):
        return (isinstance(other, AlgebraicReal) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash(("algebraic", self.field.signature(), self.coords))

    def __repr__(self):
        return "AlgebraicReal(%r)" % (self.coords,)


class OracleReal(Real):
    """Value known only through a certified refinement function.

    ``refine(bits)`` must return a rational interval of width <= 2**-bits
    containing the value.  Returned intervals are intersected with all
    previous ones, so the sequence handed out is always nested.
    """

    __slots__ = ("_refine", "asserted_irrational", "name", "_cache", "_lock")

    kind = "oracle"

    def __init__(self, refine: Callable[[int], tuple], asserted_irrational=False,
                 name="oracle"):
        object.__setattr__(self, "_refine", refine)
        object.__setattr__(self, "asserted_irrational", bool(asserted_irrational))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_cache", None)
        object.__setattr__(self, "_lock", threading.Lock())

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def _interval(self, bits):
        target = Fraction(1, 1 << bits)
        with self._lock:
            if self._cache is not None and _width(*self._cache) <= target:
                return self._cache
            lo, hi = self._refine(bits)
            lo, hi = Fraction(lo), Fraction(hi)
            if self._cache is not None:
                clo, chi = self._cache
                lo, hi = max(lo, clo), min(hi, chi)
                if lo > hi:
                    raise InconsistentInput(
                        "oracle %r returned non-nested intervals" % self.name)
            object.__setattr__(self, "_cache", (lo, hi))
            return lo, hi

    def sign(self):
        return _sign_by_refinement(self)

    def __repr__(self):
        return "OracleReal(%s)" % self.name


class _Derived(Real):
    """Lazy expression node; present only when an oracle is in the DAG."""

    __slots__ = ()

    kind = "derived"

    def sign(self):
        return _sign_by_refinement(self)


class _LinComb(_Derived):
    __slots__ = ("const", "terms")

    def __init__(self, const: Fraction, terms):
        # terms: tuple of (Fraction coeff, Real), coeff != 0
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "terms", tuple(terms))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def _interval(self, bits):
        total = sum((abs(c) for c, _ in self.terms), Fraction(0))
        sub = bits + max(0, _ceil_log2(total)) + 1 if total else bits
        lo, hi = self.const, self.const
        for c, x in self.terms:
            xlo, xhi = x._interval(sub)
            if c >= 0:
                lo, hi = lo + c * xlo, hi + c * xhi
            else:
                lo, hi = lo + c * xhi, hi + c * xlo
        return lo, hi


class _Product(_Derived):
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def _interval(self, bits):
        target = Fraction(1, 1 << bits)
        b = max(16, bits // 2)
        while True:
            xlo, xhi = self.x._interval(b)
            ylo, yhi = self.y._interval(b)
            lo, hi = _imul(xlo, xhi, ylo, yhi)
            if hi - lo <= target:
                return lo, hi
            # width <= |x| wy + |y| wx + wx wy: pick b from magnitudes
            mag = max(abs(xlo), abs(xhi), abs(ylo), abs(yhi), Fraction(1))
            b = max(b * 2, bits + _ceil_log2(2 * mag) + 2)


class _Quotient(_Derived):
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def _interval(self, bits):
        target = Fraction(1, 1 << bits)
        b = 16
        while True:
            ylo, yhi = self.y._interval(b)
            if ylo > 0 or yhi < 0:
                break
            b *= 2
            if b > _max_refine_bits:
                raise ZeroDenominator(
                    "denominator not separated from zero at %d bits" % _max_refine_bits)
        while True:
            xlo, xhi = self.x._interval(b)
            ylo, yhi = self.y._interval(b)
            if not (ylo > 0 or yhi < 0):
                b *= 2
                continue
            qlo, qhi = _imul(xlo, xhi, 1 / yhi, 1 / ylo)
            if qhi - qlo <= target:
                return qlo, qhi
            b *= 2


class _Abs(_Derived):
    __slots__ = ("x",)

    def __init__(self, x):
        object.__setattr__(self, "x", x)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def _interval(self, bits):
        lo, hi = self.x._interval(bits)
        if lo >= 0:
            return lo, hi
        if hi <= 0:
            return -hi, -lo
        return Fraction(0), max(-lo, hi)

    def sign(self):
        return 0 if self.x.sign() == 0 else 1


def _sign_by_refinement(x: Real) -> int:
    b = 16
    while b <= _max_refine_bits:
        lo, hi = x._interval(b)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == hi == 0:
            return 0
        b *= 2
    lo, hi = x._interval(_max_refine_bits)
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    raise PrecisionExhausted(
        "sign undecided at %d bits; possible hidden rational relation"
        % _max_refine_bits, interval=(lo, hi))


# ---------------------------------------------------------------------------
# arithmetic dispatch with folding

def _lift(v) -> Real:
    if isinstance(v, Real):
        return v
    if isinstance(v, (int, Fraction)):
        return RationalReal(v)
    raise TypeError("cannot interpret %r as a real scalar" % (v,))


def _embed(field: NumberField, x: Real):
    if isinstance(x, RationalReal):
        coords = [Fraction(0)] * field.degree
        coords[0] = x.value
        return tuple(coords)
    if isinstance(x, AlgebraicReal):
        if x.field != field:
            raise InconsistentInput("cross-field arithmetic rejected")
        return x.coords
    return None


def _add(x: Real, y: Real) -> Real:
    if isinstance(x, RationalReal) and isinstance(y, RationalReal):
        return RationalReal(x.value + y.value)
    if isinstance(x, AlgebraicReal) or isinstance(y, AlgebraicReal):
        field = x.field if isinstance(x, AlgebraicReal) else y.field
        cx, cy = _embed(field, x), _embed(field, y)
        if cx is not None and cy is not None:
            return field.element([a + b for a, b in zip(cx, cy)])
    terms = []
    const = Fraction(0)
    for v in (x, y):
        if isinstance(v, RationalReal):
            const += v.value
        elif isinstance(v, _LinComb):
            const += v.const
            terms.extend(v.terms)
        else:
            terms.append((Fraction(1), v))
    if not terms:
        return RationalReal(const)
    return _LinComb(const, terms)


def _neg(x: Real) -> Real:
    if isinstance(x, RationalReal):
        return RationalReal(-x.value)
    if isinstance(x, AlgebraicReal):
        return AlgebraicReal(x.field, tuple(-c for c in x.coords))
    if isinstance(x, _LinComb):
        return _LinComb(-x.const, tuple((-c, v) for c, v in x.terms))
    return _LinComb(Fraction(0), ((Fraction(-1), x),))


def _mul(x: Real, y: Real) -> Real:
    if isinstance(x, RationalReal) and isinstance(y, RationalReal):
        return RationalReal(x.value * y.value)
    if isinstance(x, RationalReal) or isinstance(y, RationalReal):
        r, v = (x, y) if isinstance(x, RationalReal) else (y, x)
        if r.value == 0:
            return RationalReal(0)
        if isinstance(v, AlgebraicReal):
            return v.field.element([r.value * c for c in v.coords])
        if isinstance(v, _LinComb):
            return _LinComb(r.value * v.const,
                            tuple((r.value * c, w) for c, w in v.terms))
        return _LinComb(Fraction(0), ((r.value, v),))
    if isinstance(x, AlgebraicReal) and isinstance(y, AlgebraicReal):
        if x.field != y.field:
            raise InconsistentInput("cross-field arithmetic rejected")
        return x.field.element(x.field._mul(x.coords, y.coords))
    return _Product(x, y)


def _div(x: Real, y: Real) -> Real:
    if isinstance(y, RationalReal):
        if y.value == 0:
            raise ZeroDenominator("division by exact zero")
        return _mul(x, RationalReal(1 / y.value))
    if isinstance(y, AlgebraicReal):
        inv = y.field.element(y.field._inv(y.coords))
        return _mul(x, inv)
    return _Quotient(x, y)


def _abs(x: Real) -> Real:
    if isinstance(x, (RationalReal, AlgebraicReal)):
        return x if x.sign() >= 0 else _neg(x)
    return _Abs(x)


# ---------------------------------------------------------------------------
# public operations

def sign_of(x: Real) -> int:
    """Exact sign in {-1, 0, +1}; may raise PrecisionExhausted for oracles."""
    return _lift(x).sign()


def compare_abs(x: Real, y: Real) -> int:
    """Exact comparison of |x| and |y|: returns LT, EQ or GT."""
    if x is y:
        return EQ
    x, y = _lift(x), _lift(y)
    return sign_of(_add(_mul(x, x), _neg(_mul(y, y))))


def floor_of(x: Real) -> int:
    """Exact floor; refines oracles until the integer part is certain."""
    x = _lift(x)
    if isinstance(x, RationalReal):
        return math.floor(x.value)
    b = 16
    while b <= _max_refine_bits:
        lo, hi = x._interval(b)
        flo, fhi = math.floor(lo), math.floor(hi)
        if flo == fhi:
            return flo
        if fhi == flo + 1 and hi == fhi:
            # half-open: value could equal the integer hi only if rational
            b *= 2
            continue
        b *= 2
    raise PrecisionExhausted("floor undecided at %d bits" % _max_refine_bits)


def scaled_bounds(x: Real, w: int):
    """Integer pair (lo, hi) with value in [lo, hi] / 2**w and hi - lo <= 3."""
    lo, hi = _lift(x)._interval(w + 1)
    l = (lo.numerator << w) // lo.denominator
    h = -((-hi.numerator << w) // hi.denominator)
    return l, h


def canonical_interval(x: Real, bits: int = 64):
    """Certified interval snapped outward to the 2**-bits grid."""
    lo, hi = _lift(x)._interval(bits + 2)
    scale = 1 << bits
    l = Fraction((lo.numerator * scale) // lo.denominator, scale)
    h = Fraction(-((-hi.numerator * scale) // hi.denominator), scale)
    return l, h


# ---------------------------------------------------------------------------
# targets

class FormTarget:
    """The tuple alpha = (alpha_1, ..., alpha_n) defining the linear form
    L_alpha(x) = alpha_1 x_1 + ... + alpha_n x_n, with ell = n + 1.

    Independence of {alpha_1, ..., alpha_n, 1} over Q is verified by exact
    linear algebra when every coordinate lives in one declared field (or is
    rational); otherwise the caller must assert it.
    """

    def __init__(self, alphas: Sequence[Real], assert_independent=False,
                 powers_base: Real | None = None):
        alphas = tuple(_lift(a) for a in alphas)
        if not alphas:
            raise InconsistentInput("need at least one coordinate")
        self.alphas = alphas
        self.n = len(alphas)
        self.ell = self.n + 1
        self.powers_base = powers_base
        fields = {a.field for a in alphas if isinstance(a, AlgebraicReal)}
        if len(fields) > 1:
            raise InconsistentInput("coordinates from different fields rejected")
        exact = all(isinstance(a, (RationalReal, AlgebraicReal)) for a in alphas)
        if exact and len(fields) == 1:
            field = next(iter(fields))
            rows = [list(_embed(field, a)) for a in alphas]
            one = [Fraction(0)] * field.degree
            one[0] = Fraction(1)
            rows.append(one)
            if _rank_q(rows) != self.ell:
                raise InconsistentInput(
                    "{alpha_1..alpha_n, 1} not linearly independent over Q")
            self.independence = "verified"
        elif exact:
            # all rational: {alpha, 1} can never be independent for n >= 1
            raise InconsistentInput(
                "all-rational target cannot satisfy the independence assumption")
        else:
            if not assert_independent:
                raise InconsistentInput(
                    "oracle coordinates need assert_independent=True")
            self.independence = "asserted"

    def __repr__(self):
        return "FormTarget(n=%d, %s)" % (self.n, self.independence)


def _rank_q(rows) -> int:
    rows = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def powers_target(alpha: Real, n: int, assert_independent=False) -> FormTarget:
    """Target (alpha^n, ..., alpha) used by the algebraicity machinery."""
    alpha = _lift(alpha)
    alphas = [alpha ** j for j in range(n, 0, -1)]
    return FormTarget(alphas, assert_independent=assert_independent,
                      powers_base=alpha)


def xi(target: FormTarget, r: Sequence[int]) -> Real:
    """xi(r) = r_ell + L_alpha(r_1, ..., r_n) for an integer vector r."""
    if len(r) != target.ell:
        raise InconsistentInput("vector length %d != ell = %d" % (len(r), target.ell))
    out: Real = RationalReal(int(r[-1]))
    for q, a in zip(r, target.alphas):
        if q:
            out = _add(out, _mul(RationalReal(int(q)), a))
    return out


# ---------------------------------------------------------------------------
# builtins and the input grammar

def _liouville_refine(bits: int):
    width = Fraction(1, 1 << bits)
    m = 1
    while True:
        tail = 2 * Fraction(1, 10 ** math.factorial(m + 1))
        if tail <= width:
            break
        m += 1
    s = sum(Fraction(1, 10 ** math.factorial(j)) for j in range(1, m + 1))
    return s, s + tail


def builtin(name: str) -> Real:
    """Named constants from the worked examples."""
    if name == "golden":
        return NumberField([1, 1, -1], 0, 1).gen()
    if name == "cos2pi7":
        return NumberField([1, 1, -2, -1], Fraction(6, 5), Fraction(13, 10)).gen()
    if name == "liouville":
        return OracleReal(_liouville_refine, asserted_irrational=True,
                          name="liouville")
    raise UnknownName("unknown builtin %r" % name)


_KINDS = ("rational", "algebraic", "builtin", "decimal")


def parse_scalar(spec: str) -> Real:
    """Parse one scalar from the CLI grammar.

    rational:<num>/<den> | algebraic:<c_d>,...,<c_0>:<lo>,<hi>
    | builtin:<name> | decimal:<digits>:tail=<rational bound>
    """
    kind, _, rest = spec.partition(":")
    if kind == "rational":
        try:
            return RationalReal(Fraction(rest))
        except (ValueError, ZeroDivisionError) as e:
            raise InconsistentInput("bad rational %r: %s" % (rest, e))
    if kind == "builtin":
        return builtin(rest)
    if kind == "algebraic":
        coeff_s, _, iv_s = rest.partition(":")
        if not iv_s:
            raise InconsistentInput("algebraic spec needs coefficients:lo,hi")
        try:
            coeffs = [int(c) for c in coeff_s.split(",")]
            lo_s, hi_s = iv_s.split(",")
            lo, hi = Fraction(lo_s), Fraction(hi_s)
        except ValueError as e:
            raise InconsistentInput("bad algebraic spec %r: %s" % (spec, e))
        if len(coeffs) == 2:
            # degree 1: the value is rational
            return RationalReal(Fraction(-coeffs[1], coeffs[0]))
        return NumberField(coeffs, lo, hi).gen()
    if kind == "decimal":
        digits, _, tail_s = rest.partition(":")
        if not tail_s.startswith("tail="):
            raise InconsistentInput("decimal spec needs :tail=<bound>")
        try:
            base = Fraction(digits)
            tail = Fraction(tail_s[len("tail="):])
        except (ValueError, ZeroDivisionError) as e:
            raise InconsistentInput("bad decimal spec %r: %s" % (spec, e))
        if tail <= 0:
            raise InconsistentInput("tail bound must be positive")

        def refine(bits, base=base, tail=tail):
            if Fraction(1, 1 << bits) < tail:
                raise PrecisionExhausted(
                    "decimal literal carries only tail bound %s" % tail)
            return base, base + tail

        return OracleReal(refine, asserted_irrational=True, name="decimal")
    raise InconsistentInput("unknown scalar kind %r" % kind)


_SPLIT_RE = re.compile(r",(?=(?:%s):)" % "|".join(_KINDS))


def parse_alpha_list(s: str):
    """Split a comma-joined list of scalar specs (specs may contain commas)."""
    return [parse_scalar(part) for part in _SPLIT_RE.split(s)]
