"""Hirzebruch-Riemann-Roch engine over formal Chern data.

A "manifold" here is a dimension, a list of Chern classes in a truncated
graded ring, and a table of Chern numbers (the fundamental-class
functional).  No geometry is verified: consistency of the table is the
caller's burden and the only sanity check is that every holomorphic Euler
characteristic comes out an integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Union

from .qpoly import QPoly
from .ring import (
    GradedElement,
    RingSpec,
    elementary_from_power_sums,
    genus_product,
    power_sums_from_elementary,
    todd_series,
)

Scalar = Union[int, Fraction]


class IntegralityError(ValueError):
    """A holomorphic Euler characteristic came out non-integral.

    This always signals inconsistent input Chern data, never a rounding
    issue: all arithmetic is exact.
    """


class MissingChernNumber(KeyError):
    """The fundamental-class table lacks an assignment for a top monomial."""

    def __init__(self, monomial: str):
        super().__init__(monomial)
        self.monomial = monomial

    def __str__(self):
        return f"no Chern-number assignment for top monomial {self.monomial}"


@dataclass(frozen=True)
class FundamentalClass:
    """Linear functional on top-weight monomials: the integral over X."""

    spec: RingSpec
    assignments: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self):
        table = {}
        n = self.spec.truncation
        for exps, value in self.assignments.items():
            exps = tuple(exps)
            if self.spec.weight_of(exps) != n:
                raise ValueError(
                    f"monomial {self.spec.monomial_name(exps)} has weight "
                    f"{self.spec.weight_of(exps)}, expected {n}"
                )
            table[exps] = Fraction(value)
        object.__setattr__(self, "assignments", table)

    def scaled(self, factor: Scalar) -> "FundamentalClass":
        f = Fraction(factor)
        return FundamentalClass(
            self.spec, {e: c * f for e, c in self.assignments.items()}
        )


def integrate(x: GradedElement, fclass: FundamentalClass) -> Fraction:
    """Apply the fundamental class to the top-weight part of ``x``.

    Terms of weight below the truncation are ignored; a top-weight monomial
    with no table entry is an error naming the offending monomial.
    """
    if x.spec != fclass.spec:
        raise ValueError("element and fundamental class use different rings")
    top = x.graded_component(x.spec.truncation)
    total = Fraction(0)
    for exps, coeff in top.terms.items():
        if exps not in fclass.assignments:
            raise MissingChernNumber(x.spec.monomial_name(exps))
        total += coeff * fclass.assignments[exps]
    return total


@dataclass(frozen=True)
class ManifoldData:
    """Complex dimension, Chern classes c_1..c_n of TX, and the integral."""

    n: int
    chern: tuple[GradedElement, ...]
    fclass: FundamentalClass

    def __post_init__(self):
        object.__setattr__(self, "chern", tuple(self.chern))
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if len(self.chern) != self.n:
            raise ValueError(f"need c_1..c_{self.n}, got {len(self.chern)} classes")
        for i, c in enumerate(self.chern, start=1):
            if not c.is_homogeneous(i):
                raise ValueError(f"c_{i}(X) is not homogeneous of weight {i}")
        if self.fclass.spec.truncation != self.n:
            raise ValueError("fundamental class truncation disagrees with n")

    @property
    def spec(self) -> RingSpec:
        return self.fclass.spec

    def tangent_power_sums(self) -> list[GradedElement]:
        return power_sums_from_elementary(list(self.chern), self.n)


@dataclass(frozen=True)
class BundleData:
    """Rank and Chern classes c_1..c_r of a holomorphic bundle."""

    rank: int
    chern: tuple[GradedElement, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "chern", tuple(self.chern))
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if len(self.chern) > self.rank:
            raise ValueError("more Chern classes than the rank allows")
        for i, c in enumerate(self.chern, start=1):
            if not c.is_homogeneous(i):
                raise ValueError(f"c_{i}(E) is not homogeneous of weight {i}")

    @staticmethod
    def trivial(rank: int = 1) -> "BundleData":
        return BundleData(rank, ())


def bundle_power(line: BundleData, m: Scalar) -> BundleData:
    """L^{tensor m} of a line bundle: c_1 scales by m (m may be rational)."""
    if line.rank != 1:
        raise ValueError("tensor powers here are for line bundles only")
    if not line.chern:
        return line
    return BundleData(1, (line.chern[0] * Fraction(m),))


def _bundle_power_sums(e: BundleData, spec: RingSpec, n: int) -> list[GradedElement]:
    elem = [c for c in e.chern[:n]]
    elem += [spec.zero()] * (n - len(elem))
    return power_sums_from_elementary(elem, n)


def todd_class(x: ManifoldData) -> GradedElement:
    """td(X): the Todd genus product over the Chern roots of TX."""
    return genus_product(todd_series(x.n), x.tangent_power_sums())


def chern_character(e: BundleData, spec: RingSpec, n: int) -> GradedElement:
    """ch(E) = rank + sum_k p_k(E)/k! truncated at weight n."""
    out = spec.constant(e.rank)
    for k, pk in enumerate(_bundle_power_sums(e, spec, n), start=1):
        out = out + pk * Fraction(1, factorial(k))
    return out


def ch_hodge_sheaf(x: ManifoldData, p: int) -> GradedElement:
    """ch of the p-th exterior power of the cotangent bundle.

    Computed as e_p of the n quantities e^{-gamma_i}: their k-th power sums
    are q_k = n + sum_j (-k)^j p_j / j!, then inverse Newton.
    """
    if not 0 <= p <= x.n:
        raise ValueError(f"p = {p} outside [0, {x.n}]")
    spec = x.spec
    if p == 0:
        return spec.one()
    pX = x.tangent_power_sums()
    q = []
    for k in range(1, x.n + 1):
        acc = spec.constant(x.n)
        for j in range(1, x.n + 1):
            acc = acc + pX[j - 1] * Fraction((-k) ** j, factorial(j))
        q.append(acc)
    return elementary_from_power_sums(q, x.n)[p - 1]


def chi_p(x: ManifoldData, e: BundleData, p: int) -> Fraction:
    """chi^p(X, E) = integral of td(X) ch(Omega^{p,0}) ch(E); must be integral."""
    value = integrate(
        todd_class(x) * ch_hodge_sheaf(x, p) * chern_character(e, x.spec, x.n),
        x.fclass,
    )
    if value.denominator != 1:
        raise IntegralityError(
            f"chi^{p} = {value} is not an integer; the Chern data is inconsistent"
        )
    return value


def chi_y(x: ManifoldData, e: BundleData) -> QPoly:
    """The chi_y genus: sum_p chi^p(X, E) y^p."""
    td = todd_class(x)
    ch_e = chern_character(e, x.spec, x.n)
    coeffs = []
    for p in range(x.n + 1):
        value = integrate(td * ch_hodge_sheaf(x, p) * ch_e, x.fclass)
        if value.denominator != 1:
            raise IntegralityError(
                f"chi^{p} = {value} is not an integer; the Chern data is inconsistent"
            )
        coeffs.append(value)
    return QPoly(coeffs, var="y")


def k_coefficients(chi: QPoly, upto: int | None = None) -> list[Fraction]:
    """Re-expand chi_y about y = -1: chi_y = sum_j K_j (y+1)^j, exactly.

    K_j = sum_{p >= j} chi^p C(p, j) (-1)^{p-j}.
    """
    n = chi.degree if upto is None else upto
    coeffs = chi.padded(max(n + 1, chi.degree + 1))
    out = []
    for j in range(n + 1):
        kj = Fraction(0)
        for p in range(j, len(coeffs)):
            kj += coeffs[p] * comb(p, j) * (-1) ** (p - j)
        out.append(kj)
    return out


def k1_formula_check(x: ManifoldData, e: BundleData) -> bool:
    """K_1 against its closed form -(rank/2) n c_n[X] + <c_{n-1}(X)c_1(E), X>."""
    ks = k_coefficients(chi_y(x, e), upto=x.n)
    spec = x.spec
    c_n_top = integrate(x.chern[x.n - 1], x.fclass)
    c1e = e.chern[0] if e.chern else spec.zero()
    cn1 = x.chern[x.n - 2] if x.n >= 2 else spec.one()
    closed = -Fraction(e.rank, 2) * x.n * c_n_top + integrate(cn1 * c1e, x.fclass)
    return ks[1] == closed


def k2_surface_formula_check(x: ManifoldData, e: BundleData) -> bool:
    """Surface-only closed form of K_2(X, E); requires n = 2."""
    if x.n != 2:
        raise ValueError("the K_2 closed form is specific to surfaces")
    ks = k_coefficients(chi_y(x, e), upto=2)
    k2_x = k_coefficients(chi_y(x, BundleData.trivial()), upto=2)[2]
    spec = x.spec
    c1e = e.chern[0] if e.chern else spec.zero()
    c2e = e.chern[1] if len(e.chern) >= 2 else spec.zero()
    closed = (
        e.rank * k2_x
        - integrate(x.chern[0] * c1e, x.fclass) / 2
        + integrate(c1e * c1e - 2 * c2e, x.fclass) / 2
    )
    return ks[2] == closed


def hilbert_polynomial(x: ManifoldData, line: BundleData, p: int) -> QPoly:
    """The p-Hilbert polynomial of a line bundle: m -> chi^p(X, L^{tensor m}).

    Coefficient a_i is the integral of the weight-(n-i) part of
    td(X) ch(Omega^{p,0}) against c_1(L)^i / i!.  The result is checked to
    be integer-valued (exact forward differences at 0).
    """
    if line.rank != 1:
        raise ValueError("Hilbert polynomials are defined for line bundles")
    spec = x.spec
    base = todd_class(x) * ch_hodge_sheaf(x, p)
    c1 = line.chern[0] if line.chern else spec.zero()
    coeffs = []
    c1_pow = spec.one()
    for i in range(x.n + 1):
        a_i = integrate(base.graded_component(x.n - i) * c1_pow, x.fclass) * Fraction(
            1, factorial(i)
        )
        coeffs.append(a_i)
        c1_pow = c1_pow * c1
    poly = QPoly(coeffs, var="m")
    _check_integer_valued(poly, p)
    return poly


def _check_integer_valued(poly: QPoly, p: int):
    # integer-valued <=> all forward differences at 0 are integers
    values = [poly(m) for m in range(poly.degree + 2)]
    while values:
        if values[0].denominator != 1:
            raise IntegralityError(
                f"p-Hilbert polynomial for p={p} is not integer-valued: {poly}"
            )
        values = [b - a for a, b in zip(values, values[1:])]


def chern_inequality_check(
    x: ManifoldData, e: BundleData, j: int
) -> tuple[bool, Fraction, Fraction]:
    """Evaluate (-1)^{n+j} K_j(X, E) >= sum_{p=j..n} C(p, j).

    Pure arithmetic on the given Chern data; no curvature hypothesis is or
    can be verified here.
    """
    if not 0 <= j <= x.n:
        raise ValueError(f"j = {j} outside [0, {x.n}]")
    ks = k_coefficients(chi_y(x, e), upto=x.n)
    lhs = Fraction((-1) ** (x.n + j)) * ks[j]
    rhs = Fraction(sum(comb(p, j) for p in range(j, x.n + 1)))
    return lhs >= rhs, lhs, rhs


# -- builtin fixture ---------------------------------------------------------


def projective_space(n: int) -> tuple[ManifoldData, BundleData]:
    """Complex projective space with its hyperplane bundle O(1).

    One generator h of weight 1, c(TX) = (1+h)^{n+1}, integral of h^n = 1.
    """
    spec = RingSpec((("h", 1),), n)
    h = spec.gen("h")
    chern = tuple(spec.element({(i,): comb(n + 1, i)}) for i in range(1, n + 1))
    fclass = FundamentalClass(spec, {(n,): Fraction(1)})
    return ManifoldData(n, chern, fclass), BundleData(1, (h,))
