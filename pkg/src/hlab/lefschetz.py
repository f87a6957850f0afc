"""Pointwise model of the Hermitian exterior algebra Lambda^{p,q}(C^n) x C^r.

Basis monomials xi_J ^ xibar_K (J, K subsets of {1..n}) tensored with a
fiber index are declared orthonormal; all operators are sparse matrices
with exact complex-rational entries.  L wedges with the standard Kahler
form omega = i sum_j xi_j ^ xibar_j, Lambda is its basis adjoint, and the
Hodge star follows the convention  alpha ^ conj(star beta) = <alpha, beta> vol
with vol = omega^n / n!.  The identity Lambda = star^{-1} L star is then a
theorem about the convention, checked by the tests rather than assumed.

The ambient dimension is capped (the space has dimension 4^n r).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Sequence, Union

from .bounds import Interval, isolate_real_roots, sqrt_enclosure
from .qpoly import QPoly

MAX_N = 6  # 4^n r grows fast; paper-scale checks never need more

Scalar = Union[int, Fraction]


class CQ:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Scalar = 0, im: Scalar = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_cq(other)
        return CQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return CQ(-self.re, -self.im)

    def __sub__(self, other):
        other = _as_cq(other)
        return CQ(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_cq(other) - self

    def __mul__(self, other):
        other = _as_cq(other)
        return CQ(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_cq(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("complex division by zero")
        return CQ(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conj(self) -> "CQ":
        return CQ(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _as_cq(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _as_cq(x) -> CQ:
    if isinstance(x, CQ):
        return x
    if isinstance(x, (int, Fraction)):
        return CQ(x)
    raise TypeError(f"cannot coerce {x!r} to a complex rational")


CQ_ZERO = CQ(0)
CQ_ONE = CQ(1)
CQ_I = CQ(0, 1)


def i_power(k: int) -> CQ:
    return (CQ_ONE, CQ_I, CQ(-1), CQ(0, -1))[k % 4]


# -- monomial combinatorics ---------------------------------------------------


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int | None:
    """Sign of sorting the concatenation of two sorted disjoint tuples.

    Returns None when the tuples intersect (the wedge vanishes).
    """
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


def _merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(a + b))


def wedge_monomials(
    J1: tuple[int, ...], K1: tuple[int, ...], J2: tuple[int, ...], K2: tuple[int, ...]
):
    """(xi_J1 ^ xibar_K1) ^ (xi_J2 ^ xibar_K2) -> (sign, J, K) or None."""
    s1 = _merge_sign(J1, J2)
    s2 = _merge_sign(K1, K2)
    if s1 is None or s2 is None:
        return None
    sign = s1 * s2 * (-1 if (len(K1) * len(J2)) % 2 else 1)
    return sign, _merge(J1, J2), _merge(K1, K2)


def conj_monomial(J: tuple[int, ...], K: tuple[int, ...]):
    """conj(xi_J ^ xibar_K) = (-1)^{|J||K|} xi_K ^ xibar_J."""
    sign = -1 if (len(J) * len(K)) % 2 else 1
    return sign, K, J


class ExteriorBasis:
    """Orthonormal monomial basis of Lambda^{*,*}(C^n) tensor C^r."""

    def __init__(self, n: int, r: int):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must be in [1, {MAX_N}] (space has dimension 4^n r)")
        if r < 1:
            raise ValueError("fiber rank must be positive")
        self.n = n
        self.r = r
        self.monomials: list[tuple[tuple[int, ...], tuple[int, ...], int]] = []
        self.by_bidegree: dict[tuple[int, int], list[int]] = {}
        full = tuple(range(1, n + 1))
        for p in range(n + 1):
            for q in range(n + 1):
                block = []
                for J in itertools.combinations(full, p):
                    for K in itertools.combinations(full, q):
                        for s in range(r):
                            block.append(len(self.monomials))
                            self.monomials.append((J, K, s))
                self.by_bidegree[(p, q)] = block
        self.index = {mon: i for i, mon in enumerate(self.monomials)}
        self.dim = len(self.monomials)

    def by_degree(self, k: int) -> list[int]:
        out = []
        for (p, q), idxs in self.by_bidegree.items():
            if p + q == k:
                out.extend(idxs)
        return out

    def bidegree_of(self, idx: int) -> tuple[int, int]:
        J, K, _ = self.monomials[idx]
        return len(J), len(K)

    def __eq__(self, other):
        return (
            isinstance(other, ExteriorBasis) and self.n == other.n and self.r == other.r
        )

    def __hash__(self):
        return hash((self.n, self.r))


@lru_cache(maxsize=None)
def get_basis(n: int, r: int) -> ExteriorBasis:
    return ExteriorBasis(n, r)


class FormVector:
    """Element of the exterior algebra with exact complex coefficients."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: ExteriorBasis, terms: Mapping[int, CQ]):
        self.basis = basis
        self.terms = {i: v for i, v in terms.items() if v}

    def inner(self, other: "FormVector") -> CQ:
        """<u, v>, conjugate-linear in the second slot."""
        if self.basis != other.basis:
            raise ValueError("vectors from different bases")
        acc = CQ_ZERO
        for i, a in self.terms.items():
            b = other.terms.get(i)
            if b is not None:
                acc = acc + a * b.conj()
        return acc

    def norm2(self) -> Fraction:
        return sum((v.abs2() for v in self.terms.values()), Fraction(0))

    def __add__(self, other):
        out = dict(self.terms)
        for i, v in other.terms.items():
            s = out.get(i, CQ_ZERO) + v
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return FormVector(self.basis, out)

    def __eq__(self, other):
        return self.basis == other.basis and self.terms == other.terms


# -- sparse operators ---------------------------------------------------------


class Operator:
    """Sparse exact linear map on an :class:`ExteriorBasis`.

    Stored column-major: ``cols[c][r]`` is the coefficient of basis vector
    r in the image of basis vector c.
    """

    __slots__ = ("basis", "cols")

    def __init__(self, basis: ExteriorBasis, cols: Mapping[int, Mapping[int, CQ]]):
        self.basis = basis
        self.cols = {
            c: {r: v for r, v in col.items() if v} for c, col in cols.items() if col
        }
        self.cols = {c: col for c, col in self.cols.items() if col}

    def _check(self, other: "Operator"):
        if self.basis != other.basis:
            raise ValueError("operators on different bases")

    def entry(self, row: int, col: int) -> CQ:
        return self.cols.get(col, {}).get(row, CQ_ZERO)

    def apply(self, vec: FormVector) -> FormVector:
        out: dict[int, CQ] = {}
        for c, a in vec.terms.items():
            for r, v in self.cols.get(c, {}).items():
                s = out.get(r, CQ_ZERO) + v * a
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return FormVector(self.basis, out)

    def compose(self, other: "Operator") -> "Operator":
        """self after other (matrix product self @ other)."""
        self._check(other)
        cols: dict[int, dict[int, CQ]] = {}
        for c, col in other.cols.items():
            acc: dict[int, CQ] = {}
            for mid, v in col.items():
                for r, w in self.cols.get(mid, {}).items():
                    s = acc.get(r, CQ_ZERO) + w * v
                    if s:
                        acc[r] = s
                    else:
                        acc.pop(r, None)
            if acc:
                cols[c] = acc
        return Operator(self.basis, cols)

    def __add__(self, other):
        self._check(other)
        cols = {c: dict(col) for c, col in self.cols.items()}
        for c, col in other.cols.items():
            acc = cols.setdefault(c, {})
            for r, v in col.items():
                s = acc.get(r, CQ_ZERO) + v
                if s:
                    acc[r] = s
                else:
                    acc.pop(r, None)
        return Operator(self.basis, cols)

    def __sub__(self, other):
        return self + other.scale(CQ(-1))

    def scale(self, factor) -> "Operator":
        f = _as_cq(factor)
        if not f:
            return Operator(self.basis, {})
        return Operator(
            self.basis,
            {c: {r: v * f for r, v in col.items()} for c, col in self.cols.items()},
        )

    def adjoint(self) -> "Operator":
        cols: dict[int, dict[int, CQ]] = {}
        for c, col in self.cols.items():
            for r, v in col.items():
                cols.setdefault(r, {})[c] = v.conj()
        return Operator(self.basis, cols)

    def commutator(self, other: "Operator") -> "Operator":
        return self.compose(other) - other.compose(self)

    def power(self, k: int) -> "Operator":
        out = identity_operator(self.basis)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other):
        return (
            isinstance(other, Operator)
            and self.basis == other.basis
            and self.cols == other.cols
        )

    def diagonal(self) -> dict[int, CQ]:
        return {c: col[c] for c, col in self.cols.items() if c in col}

    def is_diagonal(self) -> bool:
        return all(set(col) <= {c} for c, col in self.cols.items())

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[CQ]]:
        """Dense submatrix (row-major) with the given index sets."""
        pos = {r: i for i, r in enumerate(rows)}
        out = [[CQ_ZERO] * len(cols) for _ in rows]
        for j, c in enumerate(cols):
            for r, v in self.cols.get(c, {}).items():
                if r in pos:
                    out[pos[r]][j] = v
        return out


def identity_operator(basis: ExteriorBasis) -> Operator:
    return Operator(basis, {i: {i: CQ_ONE} for i in range(basis.dim)})


# -- the Kahler package -------------------------------------------------------


@lru_cache(maxsize=None)
def op_L(n: int, r: int = 1) -> Operator:
    """Wedge with omega = i sum_j xi_j ^ xibar_j, with exact reordering signs."""
    basis = get_basis(n, r)
    cols: dict[int, dict[int, CQ]] = {}
    for c, (J, K, s) in enumerate(basis.monomials):
        col: dict[int, CQ] = {}
        for j in range(1, n + 1):
            w = wedge_monomials((j,), (j,), J, K)
            if w is None:
                continue
            sign, J2, K2 = w
            col[basis.index[(J2, K2, s)]] = CQ_I * sign
        if col:
            cols[c] = col
    return Operator(basis, cols)


@lru_cache(maxsize=None)
def op_Lambda(n: int, r: int = 1) -> Operator:
    """The adjoint of L in the orthonormal monomial basis (its definition)."""
    return op_L(n, r).adjoint()


def volume_phase(n: int) -> CQ:
    """vol = omega^n/n! = i^n (-1)^{n(n-1)/2} xi_1..xi_n ^ xibar_1..xibar_n."""
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return i_power(n) * sign


@lru_cache(maxsize=None)
def op_star(n: int, r: int = 1) -> Operator:
    """Hodge star fixed by  u ^ conj(star u) = <u, u> vol  on monomials."""
    basis = get_basis(n, r)
    full = set(range(1, n + 1))
    lam = volume_phase(n)
    cols: dict[int, dict[int, CQ]] = {}
    for c, (J, K, s) in enumerate(basis.monomials):
        Jc = tuple(sorted(full - set(J)))
        Kc = tuple(sorted(full - set(K)))
        # target monomial (Kc, Jc); conj then wedge against (J, K) gives the top cell
        csign, wJ, wK = conj_monomial(Kc, Jc)
        w = wedge_monomials(J, K, wJ, wK)
        assert w is not None, "complement wedge cannot vanish"
        sigma = csign * w[0]
        coeff = (lam / CQ(sigma)).conj()
        cols[c] = {basis.index[(Kc, Jc, s)]: coeff}
    return Operator(basis, cols)


def sl2_commutator_check(n: int, r: int = 1) -> bool:
    """True iff [Lambda, L] acts as (n-k) id on every k-form, exactly."""
    basis = get_basis(n, r)
    H = op_Lambda(n, r).commutator(op_L(n, r))
    for idx in range(basis.dim):
        p, q = basis.bidegree_of(idx)
        expected = CQ(n - (p + q))
        col = H.cols.get(idx, {})
        if expected:
            if col != {idx: expected}:
                return False
        elif col:
            return False
    return True


# -- curvature ---------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalCurvature:
    """iTheta(L) = i sum_j gamma_j xi_j ^ xibar_j for a line bundle (r = 1)."""

    gammas: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(Fraction(g) for g in self.gammas))
        if not 1 <= len(self.gammas) <= MAX_N:
            raise ValueError(f"need between 1 and {MAX_N} eigenvalues")

    @property
    def n(self) -> int:
        return len(self.gammas)

    @property
    def r(self) -> int:
        return 1

    def scaled(self, m: Scalar) -> "DiagonalCurvature":
        return DiagonalCurvature(tuple(g * Fraction(m) for g in self.gammas))


@dataclass(frozen=True)
class HermitianCurvature:
    """iTheta(E) = i sum_{j,k} theta[j][k] xi_j ^ xibar_k, theta[j][k] r x r.

    Hermitian symmetry theta[j][k] = theta[k][j]^dagger is validated.
    """

    theta: tuple[tuple[tuple[tuple[CQ, ...], ...], ...], ...]

    def __post_init__(self):
        theta = tuple(
            tuple(
                tuple(tuple(_as_cq(x) for x in row) for row in mat) for mat in line
            )
            for line in self.theta
        )
        object.__setattr__(self, "theta", theta)
        n = len(theta)
        if not 1 <= n <= MAX_N:
            raise ValueError(f"need between 1 and {MAX_N} base indices")
        r = len(theta[0][0])
        for j in range(n):
            if len(theta[j]) != n:
                raise ValueError("theta must be an n x n array of fiber matrices")
            for k in range(n):
                mat = theta[j][k]
                if len(mat) != r or any(len(row) != r for row in mat):
                    raise ValueError("fiber matrices must all be r x r")
                for a in range(r):
                    for b in range(r):
                        if mat[a][b] != theta[k][j][b][a].conj():
                            raise ValueError(
                                f"theta[{j}][{k}] is not the adjoint of theta[{k}][{j}]"
                            )

    @property
    def n(self) -> int:
        return len(self.theta)

    @property
    def r(self) -> int:
        return len(self.theta[0][0])


CurvatureSpec = Union[DiagonalCurvature, HermitianCurvature]


def curvature_operator(spec: CurvatureSpec) -> Operator:
    """Matrix of alpha -> iTheta(E) ^ alpha with the fiber matrix action."""
    n, r = spec.n, spec.r
    basis = get_basis(n, r)
    if isinstance(spec, DiagonalCurvature):

        def fiber(j, k):
            if j != k:
                return None
            g = spec.gammas[j - 1]
            return ((CQ(g),),) if g else None

    else:

        def fiber(j, k):
            mat = spec.theta[j - 1][k - 1]
            return mat if any(any(x for x in row) for row in mat) else None

    cols: dict[int, dict[int, CQ]] = {}
    for c, (J, K, s) in enumerate(basis.monomials):
        col: dict[int, CQ] = {}
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                mat = fiber(j, k)
                if mat is None:
                    continue
                w = wedge_monomials((j,), (k,), J, K)
                if w is None:
                    continue
                sign, J2, K2 = w
                phase = CQ_I * sign
                for s2 in range(r):
                    v = mat[s2][s]
                    if not v:
                        continue
                    tgt = basis.index[(J2, K2, s2)]
                    acc = col.get(tgt, CQ_ZERO) + phase * v
                    if acc:
                        col[tgt] = acc
                    else:
                        col.pop(tgt, None)
        if col:
            cols[c] = col
    return Operator(basis, cols)


def diagonal_commutator_eigenvalues(
    spec: DiagonalCurvature,
) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
    """Eigenvalue of [iTheta(L), Lambda] on xi_J ^ xibar_K, for every (J, K).

    The closed form is gamma_J + gamma_K - sum_j gamma_j.
    """
    n = spec.n
    total = sum(spec.gammas, Fraction(0))
    out = {}
    full = tuple(range(1, n + 1))
    for p in range(n + 1):
        for J in itertools.combinations(full, p):
            gJ = sum((spec.gammas[j - 1] for j in J), Fraction(0))
            for q in range(n + 1):
                for K in itertools.combinations(full, q):
                    gK = sum((spec.gammas[k - 1] for k in K), Fraction(0))
                    out[(J, K)] = gJ + gK - total
    return out


@dataclass(frozen=True)
class CommutatorNorm:
    """C = |[Lambda, iTheta(E)]| together with the per-bidegree table."""

    value: Union[Fraction, Interval]
    table: dict[tuple[int, int], Union[Fraction, Interval]]
    exact: bool


def commutator_norm(spec: CurvatureSpec, tol: Fraction = Fraction(1, 10**12)) -> CommutatorNorm:
    """Operator norm of [Lambda, iTheta(E)] and the C_{p,q} table.

    Diagonal specs are handled exactly through the eigenvalue enumeration;
    Hermitian specs get certified rational enclosures (width at most a few
    multiples of tol) via the characteristic polynomial of the Hermitian
    square on each bidegree block.
    """
    if isinstance(spec, DiagonalCurvature):
        eigs = diagonal_commutator_eigenvalues(spec)
        table: dict[tuple[int, int], Fraction] = {}
        for (J, K), val in eigs.items():
            key = (len(J), len(K))
            table[key] = max(table.get(key, Fraction(0)), abs(val))
        return CommutatorNorm(max(table.values()), table, exact=True)

    n, r = spec.n, spec.r
    basis = get_basis(n, r)
    T = op_Lambda(n, r).commutator(curvature_operator(spec))
    if T.adjoint() != T:
        raise AssertionError("[Lambda, iTheta] must be self-adjoint; convention bug")
    table2: dict[tuple[int, int], Interval] = {}
    for (p, q), idxs in basis.by_bidegree.items():
        block = T.block(idxs, idxs)
        table2[(p, q)] = _hermitian_norm_enclosure(block, tol)
    worst = max(table2.values(), key=lambda iv: iv.hi)
    return CommutatorNorm(worst, table2, exact=False)


def _hermitian_norm_enclosure(block: list[list[CQ]], tol: Fraction) -> Interval:
    """Certified enclosure of the operator norm of a self-adjoint block."""
    d = len(block)
    if d == 0 or all(not v for row in block for v in row):
        return Interval(Fraction(0), Fraction(0))
    # S = T^dagger T = T^2 is PSD; norm = sqrt(lambda_max(S))
    S = [
        [
            sum((block[i][k] * block[k][j] for k in range(d)), CQ_ZERO)
            for j in range(d)
        ]
        for i in range(d)
    ]
    char = _charpoly(S)
    lam = _largest_root_enclosure(char, tol * tol)
    lo = _sqrt_lower(lam.lo, tol)
    hi = _sqrt_upper(lam.hi, tol)
    return Interval(lo, hi)


def _charpoly(S: list[list[CQ]]) -> QPoly:
    """Characteristic polynomial det(xI - S) by Faddeev-LeVerrier, exact."""
    d = len(S)
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    M = [[CQ_ONE if i == j else CQ_ZERO for j in range(d)] for i in range(d)]
    for k in range(1, d + 1):
        # M <- S (M + c_{d-k+1} I) for k > 1; at k = 1, M = S
        if k > 1:
            prev = coeffs[d - k + 1]
            N = [row[:] for row in M]
            for i in range(d):
                N[i][i] = N[i][i] + CQ(prev)
            M = [
                [
                    sum((S[i][t] * N[t][j] for t in range(d)), CQ_ZERO)
                    for j in range(d)
                ]
                for i in range(d)
            ]
        else:
            M = [row[:] for row in S]
        tr = sum((M[i][i] for i in range(d)), CQ_ZERO)
        if tr.im != 0:
            raise AssertionError("characteristic polynomial must be real here")
        coeffs[d - k] = -tr.re / k
    return QPoly(coeffs, var="x")


def _largest_root_enclosure(poly: QPoly, tol: Fraction) -> Interval:
    """Enclosure of the largest real root of a polynomial with >= 1 real root."""
    intervals = isolate_real_roots(poly, width=tol)
    if not intervals:
        raise ValueError("polynomial has no real roots")
    lo, hi = max(intervals, key=lambda iv: iv[1])
    return Interval(max(lo, Fraction(0)), max(hi, Fraction(0)))


def _sqrt_lower(x: Fraction, tol: Fraction) -> Fraction:
    return sqrt_enclosure(max(x, Fraction(0)), tol)[0]


def _sqrt_upper(x: Fraction, tol: Fraction) -> Fraction:
    return sqrt_enclosure(max(x, Fraction(0)), tol)[1]


def flatness_test(spec: DiagonalCurvature) -> bool:
    """C = 0 iff Theta(L) = 0; both sides are computed and cross-checked."""
    if not isinstance(spec, DiagonalCurvature):
        raise TypeError("flatness test applies to diagonal line-bundle curvature")
    c = commutator_norm(spec).value
    flat = all(g == 0 for g in spec.gammas)
    if (c == 0) != flat:
        raise AssertionError("flatness lemma violated; eigenvalue enumeration bug")
    return c == 0


def tensor_power_norm(spec: DiagonalCurvature, m: int) -> Fraction:
    """|[Lambda, iTheta(L^{tensor m})]| = |m| C, checked against rescaling."""
    c = commutator_norm(spec).value
    scaled = commutator_norm(spec.scaled(m)).value
    if scaled != abs(Fraction(m)) * c:
        raise AssertionError("commutator norm failed to scale linearly")
    return scaled


# -- exact linear algebra ------------------------------------------------------


def cq_rank(rows: list[list[CQ]]) -> int:
    """Rank over Q(i) by Gaussian elimination with exact division."""
    mat = [row[:] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, nrows) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        pv = mat[row][col]
        for i in range(row + 1, nrows):
            if mat[i][col]:
                f = mat[i][col] / pv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def _int_matrix(block: list[list[CQ]], phase: CQ) -> list[list[int]]:
    """Strip a common unit phase, asserting all entries are integer multiples."""
    out = []
    for row in block:
        new = []
        for v in row:
            w = v / phase
            if w.im != 0 or w.re.denominator != 1:
                raise AssertionError("entries do not share the expected phase")
            new.append(int(w.re))
        out.append(new)
    return out


def int_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix (fraction-free Bareiss elimination)."""
    mat = [row[:] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    rank = 0
    row = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(row, nrows) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        pv = mat[row][col]
        for i in range(row + 1, nrows):
            mat[i] = [
                (pv * mat[i][j] - mat[i][col] * mat[row][j]) // prev
                for j in range(ncols)
            ]
        prev = pv
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


@dataclass(frozen=True)
class LefschetzPower:
    """Result of analysing L^{n-k} from k-forms to (2n-k)-forms."""

    k: int
    bijective: bool
    sigma_min: Interval
    sigma_max: Interval
    sigma_values: tuple[Fraction, ...]


class _SparseIntMap:
    """Integer matrix of L^{n-k} on one bidegree block, phase stripped."""

    def __init__(self, op: Operator, src: Sequence[int], dst: Sequence[int], phase: CQ):
        self.dim = len(src)
        src_pos = {g: i for i, g in enumerate(src)}
        dst_pos = {g: i for i, g in enumerate(dst)}
        self.cols: list[dict[int, int]] = [{} for _ in src]
        self.rows: list[dict[int, int]] = [{} for _ in dst]
        for g_col, col in op.cols.items():
            c = src_pos.get(g_col)
            if c is None:
                continue
            for g_row, value in col.items():
                rw = dst_pos.get(g_row)
                if rw is None:
                    continue
                w = value / phase
                if w.im != 0 or w.re.denominator != 1:
                    raise AssertionError("entries do not share the expected phase")
                self.cols[c][rw] = int(w.re)
                self.rows[rw][c] = int(w.re)

    def gram_apply(self, x: dict[int, int]) -> dict[int, int]:
        """(M^T M) x through two sparse passes."""
        mid: dict[int, int] = {}
        for c, a in x.items():
            for rw, w in self.cols[c].items():
                mid[rw] = mid.get(rw, 0) + w * a
        out: dict[int, int] = {}
        for rw, a in mid.items():
            for c, w in self.rows[rw].items():
                out[c] = out.get(c, 0) + w * a
        return {i: v for i, v in out.items() if v}


def lefschetz_power(n: int, r: int, k: int) -> LefschetzPower:
    """Bijectivity and extreme singular values of L^{n-k} on k-forms.

    The squared singular values are certified exactly per bidegree block:
    the candidates ((n-k+j)!/j!)^2 from the primitive decomposition are
    shown to exhaust the spectrum of B = M^T M by an exact annihilating-
    polynomial identity, and each candidate is witnessed by an explicit
    integer eigenvector (an L-power of a disjoint-index monomial, which
    is primitive).  All candidates are positive, so the identity also
    certifies that B is nonsingular, i.e. that L^{n-k} is bijective onto
    the (2n-k)-forms; small cases are cross-checked by a rank
    computation.  The returned enclosures are degenerate (exact).
    """
    if not 0 <= k <= n:
        raise ValueError(f"k = {k} outside [0, {n}]")
    basis = get_basis(n, r)
    if k == n:
        one = Interval(Fraction(1), Fraction(1))
        return LefschetzPower(k, True, one, one, (Fraction(1),))
    M_op = op_L(n, r).power(n - k)
    phase = i_power(n - k)
    sigmas: set[Fraction] = set()
    for p in range(min(k, n) + 1):
        q = k - p
        if q < 0 or q > n:
            continue
        src = basis.by_bidegree[(p, q)]
        dst = basis.by_bidegree[(p + n - k, q + n - k)]
        sparse = _SparseIntMap(M_op, src, dst, phase)
        candidates = [
            (j, Fraction(factorial(n - k + j), factorial(j)))
            for j in range(min(p, q) + 1)
        ]
        _certify_block_annihilator(sparse, [int(s * s) for _, s in candidates])
        for j, sigma in candidates:
            _certify_eigenvector(basis, sparse, src, n, r, p, q, j, int(sigma * sigma))
            sigmas.add(sigma)
    src_all = basis.by_degree(k)
    dst_all = basis.by_degree(2 * n - k)
    bijective = len(src_all) == len(dst_all)  # plus nonsingular B, certified above
    if bijective and len(src_all) <= 256:
        M = _int_matrix(M_op.block(dst_all, src_all), phase)
        if int_rank(M) != len(src_all):
            raise AssertionError("rank cross-check contradicts the spectral certificate")
    lo, hi = min(sigmas), max(sigmas)
    return LefschetzPower(
        k,
        bijective,
        Interval(lo, lo),
        Interval(hi, hi),
        tuple(sorted(sigmas)),
    )


def _certify_block_annihilator(sparse: _SparseIntMap, eigen_candidates: list[int]):
    """Check prod_c (B - c I) = 0 on every basis vector of the block; B is
    symmetric hence diagonalizable, so the spectrum is contained in the
    candidate set."""
    for start in range(sparse.dim):
        v = {start: 1}
        for c in eigen_candidates:
            nxt = sparse.gram_apply(v)
            for idx, a in v.items():
                acc = nxt.get(idx, 0) - c * a
                if acc:
                    nxt[idx] = acc
                else:
                    nxt.pop(idx, None)
            v = nxt
            if not v:
                break
        if v:
            raise AssertionError("annihilating polynomial check failed")


def _certify_eigenvector(basis, sparse, src, n, r, p, q, j, eigenvalue: int):
    """Witness the eigenvalue with v = L^j (xi_J ^ xibar_K), J, K disjoint.

    A monomial with disjoint index sets is primitive (contracting with the
    Kahler form needs a shared index), so v spans a weight line on which
    M^T M acts by the candidate scalar.
    """
    a, b = p - j, q - j
    J = tuple(range(1, a + 1))
    K = tuple(range(a + 1, a + b + 1))
    vec = FormVector(basis, {basis.index[(J, K, 0)]: CQ_ONE})
    L = op_L(n, r)
    for _ in range(j):
        vec = L.apply(vec)
    phase = i_power(j)
    src_pos = {g: i for i, g in enumerate(src)}
    v: dict[int, int] = {}
    for g_idx, value in vec.terms.items():
        w = value / phase
        if w.im != 0 or w.re.denominator != 1:
            raise AssertionError("eigenvector entries do not share the phase")
        v[src_pos[g_idx]] = int(w.re)
    if not v:
        raise AssertionError("empty eigenvector witness; primitive theory bug")
    got = sparse.gram_apply(v)
    expected = {i: eigenvalue * a2 for i, a2 in v.items()}
    if got != expected:
        raise AssertionError("eigenvector certificate failed")


def injectivity_scan(n: int, r: int = 1) -> dict[tuple[int, int], bool]:
    """Exact kernel test of L: Lambda^{p,q} -> Lambda^{p+1,q+1} for every (p,q)."""
    basis = get_basis(n, r)
    L = op_L(n, r)
    out = {}
    for (p, q), src in basis.by_bidegree.items():
        dst = basis.by_bidegree.get((p + 1, q + 1), [])
        if not dst:
            out[(p, q)] = False
            continue
        M = _int_matrix(L.block(dst, src), CQ_I)
        out[(p, q)] = int_rank(M) == len(src)
    return out
