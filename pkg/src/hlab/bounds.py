"""Numerical-polynomial toolkit and Euler-characteristic bound evaluators.

Forward differences, the two constructive lemmas about integer-valued
polynomials, exact real-root isolation (Sturm counts plus sign-change
bisection), and the closed-form lower bounds on (-1)^n chi(X) driven by a
curvature constant K, the commutator norm C and the dimensional constant
c_n.  Everything is exact rational arithmetic except the two square roots
in the primitive-bound interval, which are certified decimal enclosures.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial, floor, isqrt
from typing import Mapping, Optional, Sequence, Union

from .qpoly import QPoly

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Interval:
    """Certified rational enclosure lo <= value <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self):
        if self.lo == self.hi:
            return str(self.lo)
        return f"[{self.lo}, {self.hi}]"


def sqrt_enclosure(x: Scalar, eps: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Rational (lo, hi) with lo^2 <= x <= hi^2 and hi - lo <= eps.

    Exact (degenerate) when x is the square of a rational.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    num, den = x.numerator, x.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        root = Fraction(rn, rd)
        return root, root
    scale = max(1, ceil(Fraction(1) / (den * eps)))
    lo_int = isqrt(num * den * scale * scale)
    lo = Fraction(lo_int, den * scale)
    hi = Fraction(lo_int + 1, den * scale)
    return lo, hi


# -- numerical polynomials -----------------------------------------------------


def forward_difference(P: QPoly, order: int = 1) -> QPoly:
    """Iterated difference Delta P(m) = P(m+1) - P(m)."""
    if order < 0:
        raise ValueError("difference order must be nonnegative")
    out = P
    for _ in range(order):
        out = out.shift(1) - out
    return out


def is_integer_valued(P: QPoly) -> bool:
    """Exact test: all forward differences at 0 are integers."""
    values = [P(m) for m in range(P.degree + 2)]
    while values:
        if values[0].denominator != 1:
            return False
        values = [b - a for a, b in zip(values, values[1:])]
    return True


def lemma44_search(P: QPoly, m0: int, k: int) -> int:
    """Least m in [m0, m0+kn] with P(m) >= a_n k^n / 2^{n-1}.

    P must have degree n >= 1 with n! times the leading coefficient a
    positive integer, and be nonnegative at the scanned integers (this is
    spot-checked; the caller asserts nonnegativity beyond the window).
    """
    n = P.degree
    if n < 1:
        raise ValueError("polynomial must be non-constant")
    if k < 0:
        raise ValueError("k must be a natural number")
    a_n = P.leading() * factorial(n)
    if a_n.denominator != 1 or a_n <= 0:
        raise ValueError(f"n! * leading coefficient = {a_n} is not a positive integer")
    window = range(m0, m0 + k * n + 1)
    values = {m: P(m) for m in window}
    bad = next((m for m, v in values.items() if v < 0), None)
    if bad is not None:
        raise ValueError(f"P({bad}) = {values[bad]} < 0 violates the nonnegativity hypothesis")
    target = a_n * Fraction(k) ** n / Fraction(2) ** (n - 1)
    for m in window:
        if values[m] >= target:
            return m
    raise ValueError("no qualifying integer found; the lemma's hypotheses must be violated")


def lemma42_search(P: QPoly, candidates: Sequence[int], Lval: int) -> int:
    """Some integer i in the list with |P(i)| >= Lval.

    P must be a non-constant integer-valued polynomial.  |P| <= Lval - 1
    admits at most deg(P) solutions per attained integer value, hence at
    most deg(P)(2 Lval - 1) in total, so any list of deg(P)(2 Lval - 1) + 1
    distinct integers guarantees a hit (a list sized to the looser
    2 deg(P) Lval + 1 passes a fortiori).  The first qualifying candidate
    in list order is returned.
    """
    n = P.degree
    if n < 1:
        raise ValueError("polynomial must be non-constant")
    if Lval < 1:
        raise ValueError("the target bound must be a positive integer")
    if not is_integer_valued(P):
        raise ValueError("lemma applies to integer-valued polynomials only")
    distinct = set(candidates)
    needed = n * (2 * Lval - 1) + 1
    if len(distinct) < needed:
        raise ValueError(f"need at least {needed} distinct candidates, got {len(distinct)}")
    for m in candidates:
        if abs(P(m)) >= Lval:
            return m
    raise ValueError("no qualifying integer found; preconditions must be violated")


# -- real root isolation -------------------------------------------------------


def sturm_chain(P: QPoly) -> list[QPoly]:
    chain = [P, P.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        chain.append(-rem)
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _variations(chain: Sequence[QPoly], x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = poly(x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_between(chain: Sequence[QPoly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b]; endpoints must not be roots."""
    return _variations(chain, a) - _variations(chain, b)


def cauchy_bound(P: QPoly) -> Fraction:
    """All roots satisfy |z| < 1 + max |a_i| / |a_deg|."""
    lead = abs(P.leading())
    rest = [abs(c) for c in P.coeffs[:-1]]
    return 1 + (max(rest) / lead if rest else Fraction(0))


def isolate_real_roots(P: QPoly, width: Fraction = Fraction(1, 2**20)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, one distinct real root of P in each.

    Multiple roots are removed by dividing out gcd(P, P') first, so a
    simple sign change certifies each non-degenerate interval; a root hit
    exactly during bisection is returned as a degenerate [r, r] interval.
    Non-degenerate intervals are refined to at most ``width``.
    """
    if P.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    Q = P.squarefree_part()
    if Q.degree < 1:
        return []
    if Q.degree == 1:
        root = -Q.coeffs[0] / Q.coeffs[1]
        return [(root, root)]
    chain = sturm_chain(Q)
    B = cauchy_bound(Q)
    out: list[tuple[Fraction, Fraction]] = []
    total = count_roots_between(chain, -B, B)
    work = [(-B, B, total)]
    while work:
        a, b, cnt = work.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            out.append(_refine(Q, chain, a, b, width))
            continue
        mid = (a + b) / 2
        if Q(mid) == 0:
            out.append((mid, mid))
            # carve out a punctured neighbourhood holding only this root
            delta = (b - a) / 4
            while True:
                lo, hi = mid - delta, mid + delta
                if Q(lo) != 0 and Q(hi) != 0 and count_roots_between(chain, lo, hi) == 1:
                    break
                delta /= 2
            left = count_roots_between(chain, a, lo)
            work.append((a, lo, left))
            work.append((hi, b, cnt - 1 - left))
        else:
            left = count_roots_between(chain, a, mid)
            work.append((a, mid, left))
            work.append((mid, b, cnt - left))
    out.sort()
    return out


def _refine(Q: QPoly, chain, a: Fraction, b: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    while b - a > width:
        mid = (a + b) / 2
        v = Q(mid)
        if v == 0:
            return (mid, mid)
        if count_roots_between(chain, a, mid) == 1:
            b = mid
        else:
            a = mid
    return (a, b)


@dataclass(frozen=True)
class RootReport:
    """Isolating intervals and certified magnitude bounds for real roots."""

    intervals: tuple[tuple[Fraction, Fraction], ...]
    m_p: Fraction
    c_plus: Fraction
    c_minus: Fraction


def root_report(P: QPoly, chi_p: Scalar = 0, width: Fraction = Fraction(1, 2**20)) -> RootReport:
    """Analyse the real solutions of P(m) = chi_p.

    ``m_p`` is a certified upper bound on the largest |root|; ``c_plus``
    and ``c_minus`` bound the largest positive root and the largest
    |negative root|.  All three are 0 when the corresponding root set is
    empty.
    """
    shifted = P - Fraction(chi_p)
    if shifted.is_zero():
        raise ValueError("P - chi_p is identically zero; the root set is all of R")
    intervals = isolate_real_roots(shifted, width)
    intervals = [_sign_separated(shifted, iv) for iv in intervals]
    m_p = Fraction(0)
    c_plus = Fraction(0)
    c_minus = Fraction(0)
    for lo, hi in intervals:
        m_p = max(m_p, abs(lo), abs(hi))
        if lo >= 0 and hi > 0:
            c_plus = max(c_plus, hi)
        elif hi <= 0 and lo < 0:
            c_minus = max(c_minus, abs(lo))
    return RootReport(tuple(intervals), m_p, c_plus, c_minus)


def _sign_separated(Q: QPoly, interval):
    """Shrink an isolating interval until it does not straddle zero."""
    lo, hi = interval
    if lo == hi or lo >= 0 or hi <= 0:
        return interval
    sf = Q.squarefree_part()
    chain = sturm_chain(sf)
    v0 = sf(Fraction(0))
    if v0 == 0:
        return (Fraction(0), Fraction(0))
    if count_roots_between(chain, lo, Fraction(0)) == 1:
        return (lo, Fraction(0))
    return (Fraction(0), hi)


# -- theorem evaluators ---------------------------------------------------------


@dataclass(frozen=True)
class BoundsInput:
    """Scalar inputs for the Euler-characteristic bound evaluators.

    K is the curvature scale (sec <= -K), C the commutator norm, c_n the
    paper-level dimensional constant (always user-supplied), a_n the top
    self-intersection of c_1(L), chi_p the list of chi^p(X) values.
    """

    n: int
    K: Fraction
    C: Fraction
    c_n: Fraction
    a_n: Optional[Fraction] = None
    chi_p: Optional[tuple[Fraction, ...]] = None
    hilbert: Optional[Mapping[int, QPoly]] = None

    def __post_init__(self):
        object.__setattr__(self, "K", Fraction(self.K))
        object.__setattr__(self, "C", Fraction(self.C))
        object.__setattr__(self, "c_n", Fraction(self.c_n))
        if self.a_n is not None:
            object.__setattr__(self, "a_n", Fraction(self.a_n))
        if self.chi_p is not None:
            object.__setattr__(self, "chi_p", tuple(Fraction(v) for v in self.chi_p))
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.K <= 0:
            raise ValueError("K must be positive")
        if self.c_n <= 0:
            raise ValueError("c_n must be positive")
        if self.C < 0:
            raise ValueError("C must be nonnegative")


def _require_positive_C(b: BoundsInput):
    if b.C == 0:
        raise ValueError(
            "C = 0 makes the bound undefined (a non-flat line bundle has C > 0)"
        )


def bound_T4(b: BoundsInput) -> int:
    """(n+1) + floor(c_n K / (n C)), the basic Euler-characteristic bound."""
    _require_positive_C(b)
    return b.n + 1 + floor(b.c_n * b.K / (b.n * b.C))


def bound_T2(b: BoundsInput, c1sq_L: Scalar) -> Fraction:
    """Surface bound 3 + |int c_1^2(L)| floor(c_n K / C)^2; requires n = 2."""
    if b.n != 2:
        raise ValueError("this bound is specific to surfaces (n = 2)")
    _require_positive_C(b)
    f = floor(b.c_n * b.K / b.C)
    return 3 + abs(Fraction(c1sq_L)) * Fraction(f) ** 2


def bound_T5(b: BoundsInput, m_p: Scalar) -> Fraction:
    """Root-aware bound max(n+1, n+1 + 2|a_n| sign(..) |floor(..)|^n)."""
    _require_positive_C(b)
    if b.a_n is None:
        raise ValueError("bound_T5 needs a_n = int c_1^n(L)")
    if b.a_n == 0:
        warnings.warn("a_n = 0: Hilbert polynomial degenerates, returning n + 1")
        return Fraction(b.n + 1)
    x = b.c_n * b.K - b.C * Fraction(m_p)
    s = _sign(floor(x))
    inner = abs(floor(x / (2 * b.C * b.n)))
    value = b.n + 1 + 2 * abs(b.a_n) * s * Fraction(inner) ** b.n
    return max(Fraction(b.n + 1), value)


def bound_C1(b: BoundsInput, C_pm: Scalar) -> Fraction:
    """Signed-root bound 2|a_n| |floor((c_n K - C C^pm)/(2Cn))|^n + 1."""
    _require_positive_C(b)
    C_pm = Fraction(C_pm)
    if b.c_n * b.K < b.C * C_pm:
        raise ValueError("hypothesis c_n K >= C C^pm is violated")
    if b.a_n is None:
        raise ValueError("bound_C1 needs a_n = int c_1^n(L)")
    if b.a_n == 0:
        warnings.warn("a_n = 0: Hilbert polynomial degenerates, returning 1")
        return Fraction(1)
    inner = abs(floor((b.c_n * b.K - b.C * C_pm) / (2 * b.C * b.n)))
    return 2 * abs(b.a_n) * Fraction(inner) ** b.n + 1


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def e_theta_interval(b: BoundsInput, chi: int, eps: Fraction = Fraction(1, 10**12)) -> tuple[Interval, Interval]:
    """Certified enclosures of the primitive-norm bracket for E(theta).

    Returns (lower, upper) enclosing
    sqrt(c_n / (n C ((-1)^n chi - n)))  and  sqrt(n) K^{-1/2}.
    """
    _require_positive_C(b)
    signed = (-1) ** b.n * chi
    if signed <= b.n:
        raise ValueError(f"(-1)^n chi = {signed} must exceed n = {b.n}")
    lower = Interval(*sqrt_enclosure(b.c_n / (b.n * b.C * (signed - b.n)), eps))
    upper = Interval(*sqrt_enclosure(Fraction(b.n) / b.K, eps))
    if lower.lo > upper.hi:
        raise ValueError(
            "certified lower endpoint exceeds the upper endpoint: "
            "the input data cannot satisfy the theorem's hypotheses"
        )
    return lower, upper


@dataclass(frozen=True)
class T4ChainReport:
    """Trace of the floor(c_n K / nC) pipeline on a p-Hilbert polynomial."""

    p: int
    N: int
    m_tilde: Optional[int]
    delta: Optional[Fraction]
    branch: str
    bound: int


def t4_chain(b: BoundsInput, P: QPoly, p: int) -> T4ChainReport:
    """Reproduce the proof pipeline: N = floor(c_n K/(nC)), scan |m| <= nN.

    Finds an integer m with |P(m) - chi^p(X)| >= N and reports which
    Euler characteristic, untwisted ("chi_p") or twisted by L^m
    ("chi_p_twisted"), is certified to be at least N + 1 in absolute
    value with the sign (-1)^{n-p}.
    """
    if P.degree < 1:
        raise ValueError("the p-Hilbert polynomial must be non-constant")
    if P.degree > b.n:
        raise ValueError("polynomial degree exceeds the dimension")
    _require_positive_C(b)
    if b.chi_p is None or not 0 <= p < len(b.chi_p):
        raise ValueError("t4_chain needs the chi^p(X) table in BoundsInput")
    N = floor(b.c_n * b.K / (b.n * b.C))
    if N <= 0:
        return T4ChainReport(p, max(N, 0), None, None, "degenerate", 1)
    candidates = list(range(-b.n * N, b.n * N + 1))
    shifted = P - b.chi_p[p]
    m_tilde = lemma42_search(shifted, candidates, N)
    delta = shifted(m_tilde)
    s = Fraction((-1) ** (b.n - p + 1)) * delta
    branch = "chi_p" if s >= N else "chi_p_twisted"
    return T4ChainReport(p, N, m_tilde, delta, branch, N + 1)
