"""Farey neighbours, the mediant walk with its L/R word, and regular
continued fractions driven by exact sign evaluation.

The walk starts from the pair (0/1, 1/1) around an irrational alpha in
(0, 1) and repeatedly inserts the mediant, keeping the side that still
contains alpha.  A step is labelled R when the surviving old fraction sits
to the right of the inserted one and L when it sits to the left; the first
pair is labelled L by convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InconsistentInput
from .realnum import Real, RationalReal, _lift, floor_of, sign_of

L_MAT = ((1, 0), (1, 1))
R_MAT = ((1, 1), (0, 1))


@dataclass(frozen=True)
class FareyState:
    """One Farey neighbour pair p/q < alpha < pp/qp."""

    p: int
    q: int
    pp: int
    qp: int
    letter: str
    m: int                      # least Farey order containing the pair
    word_matrix: tuple          # ((pp, p), (qp, q)) as an L/R product

    def pair(self):
        return (Fraction(self.p, self.q), Fraction(self.pp, self.qp))


@dataclass(frozen=True)
class PartialQuotients:
    a0: int
    quotients: tuple


def _mul2(a, b):
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0],
             a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0],
             a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def word_to_matrix(prefix: str):
    """Product of L = (1 0; 1 1) and R = (1 1; 0 1) over a word prefix.

    Columns of the result give the fractions of the corresponding
    chain pair: ((pp, p), (qp, q)).
    """
    out = ((1, 0), (0, 1))
    for ch in prefix:
        if ch == "L":
            out = _mul2(out, L_MAT)
        elif ch == "R":
            out = _mul2(out, R_MAT)
        else:
            raise InconsistentInput("word may only contain L and R")
    return out


def _check_unit_interval(alpha: Real):
    if isinstance(alpha, RationalReal):
        raise InconsistentInput("alpha must be irrational")
    if sign_of(alpha) <= 0 or sign_of(alpha - 1) >= 0:
        raise InconsistentInput("alpha must lie strictly inside (0, 1)")


def _side(alpha: Real, p: int, q: int) -> int:
    """Sign of alpha - p/q, decided exactly."""
    s = sign_of(alpha * q - p)
    if s == 0:
        raise InconsistentInput("alpha equals a fraction; not irrational")
    return s


def _walk(alpha: Real):
    """Yield FareyState entries of the Hurwitz chain, first pair included."""
    p, q, pp, qp = 0, 1, 1, 1
    word_matrix = L_MAT
    yield FareyState(p, q, pp, qp, "L", 1, word_matrix)
    while True:
        mp, mq = p + pp, q + qp
        if _side(alpha, mp, mq) > 0:
            # alpha right of the mediant: keep the right fraction, old is right
            p, q = mp, mq
            letter = "R"
            word_matrix = _mul2(word_matrix, R_MAT)
        else:
            pp, qp = mp, mq
            letter = "L"
            word_matrix = _mul2(word_matrix, L_MAT)
        yield FareyState(p, q, pp, qp, letter, mq, word_matrix)


def hurwitz_chain(alpha: Real, k_max: int):
    """First k_max chain pairs and the corresponding L/R word."""
    alpha = _lift(alpha)
    _check_unit_interval(alpha)
    if k_max < 1:
        raise InconsistentInput("k_max must be >= 1")
    states = []
    for st in _walk(alpha):
        states.append(st)
        if len(states) == k_max:
            break
    return states, "".join(s.letter for s in states)


def farey_neighbors(alpha: Real, m: int) -> FareyState:
    """The unique successive pair of F_m with p/q < alpha < pp/qp."""
    alpha = _lift(alpha)
    _check_unit_interval(alpha)
    if m < 1:
        raise InconsistentInput("m must be >= 1")
    last = None
    for st in _walk(alpha):
        if st.m > m:
            break
        last = st
    return last


def word_blocks(word: str):
    """Lengths of the maximal runs of equal letters."""
    blocks = []
    for ch in word:
        if blocks and ch == word[sum(blocks) - 1]:
            blocks[-1] += 1
        else:
            blocks.append(1)
    return blocks


def continued_fraction(alpha: Real, j_max: int) -> PartialQuotients:
    """Partial quotients by exact Gauss-map iteration.

    Values outside (0, 1) are reduced first; a_0 reports the integer part.
    """
    alpha = _lift(alpha)
    if isinstance(alpha, RationalReal):
        raise InconsistentInput("alpha must be irrational")
    if j_max < 1:
        raise InconsistentInput("j_max must be >= 1")
    a0 = floor_of(alpha)
    x = alpha - a0
    out = []
    one = RationalReal(1)
    for _ in range(j_max):
        y = one / x
        a = floor_of(y)
        out.append(a)
        x = y - a
    return PartialQuotients(a0, tuple(out))
