"""Built-in property suite behind the `verify` subcommand.

Runs a deterministic battery of the library's defining identities (seeded
random data, no network, no external files) and reports one line per
check.  The CLI exits nonzero iff any check fails.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

from . import bounds, genus, lefschetz, ring
from .qpoly import QPoly


def _random_element(rng, spec, max_terms=4, weight_min=0):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = []
        budget = spec.truncation
        for _, w in spec.generators:
            e = rng.randint(0, budget // w)
            exps.append(e)
            budget -= e * w
        if spec.weight_of(exps) < weight_min:
            continue
        terms[tuple(exps)] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return spec.element(terms)


def _random_homogeneous(rng, spec, weight):
    keys = [k for k in _weight_keys(spec, weight)]
    terms = {k: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for k in keys}
    return spec.element(terms)


def _weight_keys(spec, weight, prefix=(), start=0):
    if start == len(spec.generators):
        if weight == 0:
            yield prefix
        return
    _, w = spec.generators[start]
    for e in range(weight // w + 1):
        yield from _weight_keys(spec, weight - e * w, prefix + (e,), start + 1)


def _integralized_surface(rng):
    """Random rank-2 surface data rescaled so all chi^p come out integral."""
    spec = ring.RingSpec((("a", 1), ("b", 2), ("d", 1), ("e", 2)), 2)
    cx = (_random_homogeneous(rng, spec, 1), _random_homogeneous(rng, spec, 2))
    ce = (_random_homogeneous(rng, spec, 1), _random_homogeneous(rng, spec, 2))
    fclass = genus.FundamentalClass(
        spec, {k: Fraction(rng.randint(-5, 5)) for k in _weight_keys(spec, 2)}
    )
    x = genus.ManifoldData(2, cx, fclass)
    e = genus.BundleData(2, ce)
    scale = 1
    td = genus.todd_class(x)
    che = genus.chern_character(e, spec, 2)
    for p in range(3):
        for ch2 in (spec.one(), che):
            value = genus.integrate(td * genus.ch_hodge_sheaf(x, p) * ch2, fclass)
            scale = scale * value.denominator // _gcd(scale, value.denominator)
    x = genus.ManifoldData(2, cx, fclass.scaled(scale))
    return x, e


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def run_all() -> list[tuple[str, bool, str]]:
    rng = random.Random(20240601)
    results = []

    def check(name, fn):
        try:
            fn()
            results.append((name, True, ""))
        except Exception as exc:  # noqa: BLE001 - report, don't crash the suite
            results.append((name, False, f"{type(exc).__name__}: {exc}"))

    check("ring axioms", lambda: _check_ring_axioms(rng))
    check("exp/log inverse pair", lambda: _check_exp_log(rng))
    check("newton identity round-trip", lambda: _check_newton(rng))
    check("todd series bernoulli values", _check_todd_series)
    check("projective space genus suite", _check_cpn)
    check("serre symmetry", lambda: _check_serre(rng))
    check("flat bundle factorization", lambda: _check_flat(rng))
    check("K coefficient closed forms", lambda: _check_k_formulas(rng))
    check("hilbert polynomial consistency", _check_hilbert)
    check("sl2 commutator", _check_sl2)
    check("hodge star conjugation identity", _check_star)
    check("commutator closed form vs matrix", lambda: _check_commutator(rng))
    check("hard lefschetz bijectivity", _check_lefschetz_power)
    check("injectivity range", _check_injectivity)
    check("lemma44_search window and bound", _check_lemma44)
    check("root isolation", _check_roots)
    check("bound evaluator fixtures", _check_bound_fixtures)
    return results


def _check_sl2():
    for n in (1, 2, 3):
        assert lefschetz.sl2_commutator_check(n, 1), n


def _check_ring_axioms(rng):
    spec = ring.RingSpec((("u", 1), ("v", 2)), 4)
    for _ in range(25):
        a, b, c = (_random_element(rng, spec) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        for elt in (a + b, a * b):
            assert all(spec.weight_of(e) <= 4 for e in elt.terms)


def _check_exp_log(rng):
    spec = ring.RingSpec((("u", 1), ("v", 2)), 5)
    for _ in range(10):
        x = _random_element(rng, spec)
        x = x - spec.constant(x.constant_term())
        assert ring.log(ring.exp(x)) == x
        u = spec.one() + x
        assert ring.exp(ring.log(u)) == u


def _check_newton(rng):
    spec = ring.RingSpec((("c1", 1), ("c2", 2), ("c3", 3)), 3)
    for _ in range(10):
        e = [_random_homogeneous(rng, spec, i) for i in (1, 2, 3)]
        p = ring.power_sums_from_elementary(e, 3)
        assert ring.elementary_from_power_sums(p, 3) == e


def _check_todd_series():
    got = ring.todd_series(6).coeffs
    expected = (
        Fraction(1), Fraction(1, 2), Fraction(1, 12), Fraction(0),
        Fraction(-1, 720), Fraction(0), Fraction(1, 30240),
    )
    assert got == expected, got


def _check_cpn():
    for n in range(1, 5):
        x, _ = genus.projective_space(n)
        chi = genus.chi_y(x, genus.BundleData.trivial())
        assert chi.padded(n + 1) == [Fraction((-1) ** p) for p in range(n + 1)]
        assert chi(-1) == n + 1


def _check_serre(rng):
    x, _ = _integralized_surface(rng)
    chi = genus.chi_y(x, genus.BundleData.trivial())
    flipped = [Fraction((-1) ** 2) * c for c in reversed(chi.padded(3))]
    assert chi.padded(3) == flipped


def _check_flat(rng):
    x, e = _integralized_surface(rng)
    flat = genus.BundleData(e.rank, ())
    lhs = genus.chi_y(x, flat)
    rhs = genus.chi_y(x, genus.BundleData.trivial()) * e.rank
    assert lhs == rhs


def _check_k_formulas(rng):
    for _ in range(5):
        x, e = _integralized_surface(rng)
        ks = genus.k_coefficients(genus.chi_y(x, e), upto=2)
        c2_top = genus.integrate(x.chern[1], x.fclass)
        assert ks[0] == e.rank * c2_top
        assert genus.k1_formula_check(x, e)
        assert genus.k2_surface_formula_check(x, e)


def _check_hilbert():
    x, o1 = genus.projective_space(2)
    P = genus.hilbert_polynomial(x, o1, 0)
    assert P == QPoly([1, Fraction(3, 2), Fraction(1, 2)])
    for m in range(-5, 6):
        assert P(m) == genus.chi_p(x, genus.bundle_power(o1, m), 0)


def _check_star():
    for n in (1, 2, 3):
        star = lefschetz.op_star(n, 1)
        inv = star.adjoint()
        assert inv.compose(star) == lefschetz.identity_operator(lefschetz.get_basis(n, 1))
        assert inv.compose(lefschetz.op_L(n, 1)).compose(star) == lefschetz.op_Lambda(n, 1)


def _check_commutator(rng):
    for _ in range(5):
        gammas = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(2))
        spec = lefschetz.DiagonalCurvature(gammas)
        basis = lefschetz.get_basis(2, 1)
        T = lefschetz.curvature_operator(spec).commutator(lefschetz.op_Lambda(2, 1))
        eigs = lefschetz.diagonal_commutator_eigenvalues(spec)
        for (J, K), ev in eigs.items():
            idx = basis.index[(J, K, 0)]
            assert T.entry(idx, idx) == lefschetz.CQ(ev)
        norm = lefschetz.commutator_norm(spec)
        assert norm.value == max(abs(v) for v in eigs.values())
        assert max(abs(g) for g in gammas) <= norm.value


def _check_lefschetz_power():
    for n in (1, 2, 3):
        for k in range(n + 1):
            lp = lefschetz.lefschetz_power(n, 1, k)
            assert lp.bijective, (n, k)
            assert lp.sigma_min.lo >= 1


def _check_injectivity():
    for n in (1, 2, 3):
        scan = lefschetz.injectivity_scan(n, 1)
        for (p, q), ok in scan.items():
            if p + q <= n - 1:
                assert ok, (n, p, q)


def _check_lemma44():
    for coeffs, m0, k in [((0, 0, 1), 0, 1), ((0, 0, 1), 0, 3), ((0, 1), 0, 5)]:
        P = QPoly(coeffs)
        n = P.degree
        a_n = P.leading() * factorial(n)
        m = bounds.lemma44_search(P, m0, k)
        assert m0 <= m <= m0 + k * n
        assert P(m) >= a_n * Fraction(k) ** n / Fraction(2) ** (n - 1)


def _check_roots():
    rep = bounds.root_report(QPoly([-1, 0, 1]))
    assert rep.m_p >= 1 and rep.m_p - 1 <= Fraction(1, 2**18)
    rep = bounds.root_report(QPoly([1, 0, 1]))
    assert rep.intervals == () and rep.m_p == 0
    double = QPoly([1, -1]) * QPoly([1, -1]) * QPoly([2, 1])
    rep = bounds.root_report(double)
    assert len(rep.intervals) == 2


def _check_bound_fixtures():
    b = bounds.BoundsInput(n=2, K=Fraction(100), C=Fraction(2), c_n=Fraction(1, 10))
    assert bounds.bound_T4(b) == 5
    b2 = bounds.BoundsInput(n=2, K=Fraction(5), C=Fraction(2), c_n=Fraction(1))
    assert bounds.bound_T2(b2, 1) == 7
    b5 = bounds.BoundsInput(
        n=3, K=Fraction(61), C=Fraction(1), c_n=Fraction(1), a_n=Fraction(1)
    )
    assert bounds.bound_T5(b5, 1) == 2004
    bc = bounds.BoundsInput(
        n=2, K=Fraction(9), C=Fraction(1), c_n=Fraction(1), a_n=Fraction(1)
    )
    assert bounds.bound_C1(bc, 1) == 9
