"""Exterior algebra model: L, Lambda, star, curvature commutators."""

import random
from fractions import Fraction

import pytest

from hlab.lefschetz import (
    CQ,
    CQ_I,
    DiagonalCurvature,
    FormVector,
    HermitianCurvature,
    commutator_norm,
    curvature_operator,
    diagonal_commutator_eigenvalues,
    flatness_test,
    get_basis,
    identity_operator,
    injectivity_scan,
    lefschetz_power,
    op_L,
    op_Lambda,
    op_star,
    sl2_commutator_check,
    tensor_power_norm,
)

F = Fraction


def _random_vector(rng, basis):
    terms = {}
    for _ in range(rng.randint(1, 6)):
        idx = rng.randrange(basis.dim)
        terms[idx] = CQ(F(rng.randint(-5, 5), rng.randint(1, 3)),
                        F(rng.randint(-5, 5), rng.randint(1, 3)))
    return FormVector(basis, terms)


# -- L and Lambda ----------------------------------------------------------------


def test_L_on_scalar_n1():
    basis = get_basis(1, 1)
    col = op_L(1, 1).cols[basis.index[((), (), 0)]]
    assert col == {basis.index[((1,), (1,), 0)]: CQ_I}


def test_L_single_term_to_volume_n2():
    basis = get_basis(2, 1)
    src = basis.index[((1,), (1,), 0)]
    col = op_L(2, 1).cols[src]
    # only xi_2 ^ xibar_2 can be added; hand bookkeeping gives -i
    assert col == {basis.index[((1, 2), (1, 2), 0)]: CQ(0, -1)}


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_L_raises_bidegree(n, r):
    basis = get_basis(n, r)
    L = op_L(n, r)
    for c, col in L.cols.items():
        p, q = basis.bidegree_of(c)
        for row in col:
            assert basis.bidegree_of(row) == (p + 1, q + 1)


def test_lambda_lowers_and_kills_scalars():
    basis = get_basis(2, 1)
    lam = op_Lambda(2, 1)
    assert basis.index[((), (), 0)] not in lam.cols
    vol = basis.index[((1,), (1,), 0)]
    assert all(basis.bidegree_of(r) == (0, 0) for r in lam.cols[vol])


def test_lambda_inverts_first_L_example():
    basis = get_basis(1, 1)
    lam = op_Lambda(1, 1)
    vec = FormVector(basis, {basis.index[((1,), (1,), 0)]: CQ_I})
    out = lam.apply(vec)
    assert out.terms == {basis.index[((), (), 0)]: CQ(1)}


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_adjointness_random_vectors(n, r):
    rng = random.Random(31 * n + r)
    basis = get_basis(n, r)
    L, lam = op_L(n, r), op_Lambda(n, r)
    for _ in range(8):
        a, b = _random_vector(rng, basis), _random_vector(rng, basis)
        assert lam.apply(a).inner(b) == a.inner(L.apply(b))


# -- Hodge star -------------------------------------------------------------------


def test_star_of_one_is_volume():
    from hlab.lefschetz import volume_phase

    for n in (1, 2, 3):
        basis = get_basis(n, 1)
        col = op_star(n, 1).cols[basis.index[((), (), 0)]]
        ((row, coeff),) = col.items()
        full = tuple(range(1, n + 1))
        assert basis.monomials[row] == (full, full, 0)
        # star(1) is exactly the volume form omega^n / n!
        assert coeff == volume_phase(n)


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (3, 1), (2, 2)])
def test_star_defining_convention(n, r):
    # u ^ conj(star u) = <u, u> vol on every basis monomial
    from hlab.lefschetz import conj_monomial, volume_phase, wedge_monomials

    basis = get_basis(n, r)
    star = op_star(n, r)
    vol = volume_phase(n)
    for idx, (J, K, s) in enumerate(basis.monomials):
        ((row, coeff),) = star.cols[idx].items()
        tJ, tK, ts = basis.monomials[row]
        assert ts == s
        csign, wJ, wK = conj_monomial(tJ, tK)
        w = wedge_monomials(J, K, wJ, wK)
        assert w is not None
        sign, fullJ, fullK = w
        assert fullJ == fullK == tuple(range(1, n + 1))
        assert coeff.conj() * csign * sign == vol


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (3, 1), (2, 2)])
def test_star_square_sign(n, r):
    basis = get_basis(n, r)
    ss = op_star(n, r).compose(op_star(n, r))
    for idx in range(basis.dim):
        p, q = basis.bidegree_of(idx)
        assert ss.cols.get(idx, {}) == {idx: CQ((-1) ** (p + q))}


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2)])
def test_star_conjugation_gives_lambda(n, r):
    star = op_star(n, r)
    star_inv = star.adjoint()
    assert star_inv.compose(star) == identity_operator(get_basis(n, r))
    assert star_inv.compose(op_L(n, r)).compose(star) == op_Lambda(n, r)


# -- sl2 --------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sl2_multipliers(n):
    assert sl2_commutator_check(n, 1)


def test_sl2_explicit_table():
    basis = get_basis(3, 1)
    H = op_Lambda(3, 1).commutator(op_L(3, 1))
    seen = {}
    for idx in range(basis.dim):
        k = sum(basis.bidegree_of(idx))
        seen.setdefault(k, H.entry(idx, idx))
        assert H.entry(idx, idx) == CQ(3 - k)
    assert sorted(v.re for v in seen.values()) == [-3, -2, -1, 0, 1, 2, 3]


# -- hard Lefschetz ----------------------------------------------------------------


def test_lefschetz_power_identity_case():
    lp = lefschetz_power(2, 1, 2)
    assert lp.bijective
    assert lp.sigma_min.lo == lp.sigma_max.hi == 1


def test_lefschetz_power_n1():
    lp = lefschetz_power(1, 1, 0)
    assert lp.bijective
    assert lp.sigma_values == (F(1),)


def test_lefschetz_power_equal_dimensions():
    basis = get_basis(2, 1)
    assert len(basis.by_degree(1)) == len(basis.by_degree(3)) == 4
    lp = lefschetz_power(2, 1, 1)
    assert lp.bijective


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("r", [1, 2])
def test_hard_lefschetz_bijective(n, r):
    for k in range(n + 1):
        lp = lefschetz_power(n, r, k)
        assert lp.bijective, (n, r, k)
        # sigma are exact integers (n-k+j)!/j!
        assert lp.sigma_min.lo == lp.sigma_min.hi
        assert lp.sigma_max.lo == lp.sigma_max.hi


def test_lefschetz_power_sigma_closed_form():
    import math

    for n in (2, 3, 4):
        for k in range(n + 1):
            lp = lefschetz_power(n, 1, k)
            expected = tuple(
                F(math.factorial(n - k + j), math.factorial(j))
                for j in range(k // 2 + 1)
            )
            if k == n:
                assert lp.sigma_values == (F(1),)
            else:
                assert lp.sigma_values == tuple(sorted(expected))


def test_lefschetz_power_range_check():
    with pytest.raises(ValueError):
        lefschetz_power(2, 1, 3)


def test_lefschetz_power_guard_limit_spot():
    # the documented n = 6 region: spectral certificates instead of rank
    lp = lefschetz_power(5, 1, 2)
    assert lp.bijective
    assert lp.sigma_values == (F(6), F(24))


# -- injectivity ------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_injectivity_truth_table(n):
    scan = injectivity_scan(n, 1)
    for (p, q), injective in scan.items():
        if p + q <= n - 1:
            assert injective, (p, q)
    # at p+q = n the target is strictly smaller wherever pq > 0
    assert scan[(n, 0)] is False or n == 0


def test_injectivity_n2_examples():
    scan = injectivity_scan(2, 1)
    assert scan[(0, 0)] and scan[(1, 0)]
    assert not scan[(1, 1)]


# -- curvature --------------------------------------------------------------------


def test_zero_curvature_operator():
    spec = DiagonalCurvature((F(0), F(0)))
    assert curvature_operator(spec).is_zero()


def test_diagonal_curvature_is_weighted_wedges():
    spec = DiagonalCurvature((F(2),))
    basis = get_basis(1, 1)
    op = curvature_operator(spec)
    col = op.cols[basis.index[((), (), 0)]]
    assert col == {basis.index[((1,), (1,), 0)]: CQ(0, 2)}


def test_tensor_power_scales_operator():
    spec = DiagonalCurvature((F(1), F(-3)))
    assert curvature_operator(spec.scaled(4)) == curvature_operator(spec).scale(4)


def test_commutator_example_n2():
    cn = commutator_norm(DiagonalCurvature((F(1), F(2))))
    assert cn.value == 3
    assert cn.exact
    eigs = diagonal_commutator_eigenvalues(DiagonalCurvature((F(1), F(2))))
    assert eigs[((1, 2), (1, 2))] == 3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_commutator_closed_form_vs_matrix(n):
    rng = random.Random(600 + n)
    basis = get_basis(n, 1)
    lam = op_Lambda(n, 1)
    for _ in range(6):
        gammas = tuple(F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n))
        spec = DiagonalCurvature(gammas)
        T = curvature_operator(spec).commutator(lam)  # [iTheta, Lambda]
        eigs = diagonal_commutator_eigenvalues(spec)
        assert T.is_diagonal()
        for (J, K), ev in eigs.items():
            idx = basis.index[(J, K, 0)]
            assert T.entry(idx, idx) == CQ(ev)
        norm = commutator_norm(spec)
        assert norm.value == max(abs(v) for v in eigs.values())
        # flatness-lemma lower bound and triangle upper bound
        assert max(abs(g) for g in gammas) <= norm.value
        assert norm.value <= sum(abs(g) for g in gammas)


def test_commutator_norm_homogeneous():
    rng = random.Random(77)
    for _ in range(10):
        gammas = tuple(F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        spec = DiagonalCurvature(gammas)
        m = rng.randint(-5, 5)
        assert commutator_norm(spec.scaled(m)).value == abs(m) * commutator_norm(spec).value


def test_flatness():
    assert flatness_test(DiagonalCurvature((F(0), F(0), F(0))))
    assert not flatness_test(DiagonalCurvature((F(1), F(-1))))
    assert commutator_norm(DiagonalCurvature((F(1), F(-1)))).value >= 1


def test_tensor_power_norm_values():
    spec = DiagonalCurvature((F(1), F(2)))
    assert tensor_power_norm(spec, 0) == 0
    assert tensor_power_norm(spec, 1) == 3
    assert tensor_power_norm(spec, -3) == 9


# -- Hermitian curvature -----------------------------------------------------------


def _diag_embedding(gammas):
    n = len(gammas)
    return HermitianCurvature(
        tuple(
            tuple((((CQ(gammas[j]) if j == k else CQ(0)),),) for k in range(n))
            for j in range(n)
        )
    )


def _herm(entries):
    # entries: n x n x r x r nested lists of CQ
    return HermitianCurvature(
        tuple(tuple(tuple(tuple(row) for row in mat) for mat in line) for line in entries)
    )


def test_hermitian_requires_symmetry():
    with pytest.raises(ValueError):
        _herm([[[[CQ(0)]], [[CQ(1)]]], [[[CQ(2)]], [[CQ(0)]]]])


def test_hermitian_matches_diagonal():
    for gammas in [(F(1), F(2)), (F(-1), F(3)), (F(0), F(0))]:
        exact_norm = commutator_norm(DiagonalCurvature(gammas))
        enclosed = commutator_norm(_diag_embedding(gammas))
        assert enclosed.value.lo <= exact_norm.value <= enclosed.value.hi
        assert enclosed.value.width <= F(1, 10**10)
        for key, iv in enclosed.table.items():
            assert iv.lo <= exact_norm.table[key] <= iv.hi


def test_hermitian_offdiagonal_norm():
    # theta = [[0, 1], [1, 0]] on the base indices: eigenvalues +-1, so the
    # commutator norm must match the diagonal spec (1, -1) after rotation
    theta = _herm([[[[CQ(0)]], [[CQ(1)]]], [[[CQ(1)]], [[CQ(0)]]]])
    got = commutator_norm(theta).value
    exact = commutator_norm(DiagonalCurvature((F(1), F(-1)))).value
    assert got.lo <= exact <= got.hi


def test_hermitian_unitary_invariance_random():
    # base matrices [[a, b], [b, a]] diagonalize over the rationals with
    # eigenvalues a +- b; the commutator norm is frame-invariant, so the
    # enclosure must pin the exact diagonal value
    rng = random.Random(88)
    for _ in range(5):
        a = F(rng.randint(-5, 5), rng.randint(1, 3))
        b = F(rng.randint(-5, 5), rng.randint(1, 3))
        theta = _herm([[[[CQ(a)]], [[CQ(b)]]], [[[CQ(b)]], [[CQ(a)]]]])
        got = commutator_norm(theta).value
        exact = commutator_norm(DiagonalCurvature((a + b, a - b))).value
        assert got.lo <= exact <= got.hi
        assert got.width <= F(1, 10**10)


def test_hermitian_fiber_action():
    # r = 2, n = 1, theta_11 = diag(1, 2): two decoupled line bundles
    theta = _herm([[[[CQ(1), CQ(0)], [CQ(0), CQ(2)]]]])
    got = commutator_norm(theta).value
    assert got.lo <= 2 <= got.hi
    assert got.width <= F(1, 10**10)


def test_fiber_matrix_acts_by_columns():
    # theta_11 = [[0, 2i], [-2i, 0]]: e_0 must map to (-2i) e_1, so the
    # operator entry on the fiber-1 row is i * (-2i) = 2
    theta = _herm([[[[CQ(0), CQ(0, 2)], [CQ(0, -2), CQ(0)]]]])
    basis = get_basis(1, 2)
    op = curvature_operator(theta)
    src = basis.index[((), (), 0)]
    assert op.cols[src] == {basis.index[((1,), (1,), 1)]: CQ(2)}
    src1 = basis.index[((), (), 1)]
    assert op.cols[src1] == {basis.index[((1,), (1,), 0)]: CQ(-2)}


def test_annihilator_certifier_rejects_wrong_candidates():
    from hlab.lefschetz import _SparseIntMap, _certify_block_annihilator, i_power, op_L

    basis = get_basis(2, 1)
    M_op = op_L(2, 1).power(2)
    src = basis.by_bidegree[(0, 0)]
    dst = basis.by_bidegree[(2, 2)]
    sparse = _SparseIntMap(M_op, src, dst, i_power(2))
    _certify_block_annihilator(sparse, [4])  # sigma = 2! on scalars
    with pytest.raises(AssertionError):
        _certify_block_annihilator(sparse, [5])


def test_basis_guard():
    with pytest.raises(ValueError):
        get_basis(7, 1)
    with pytest.raises(ValueError):
        DiagonalCurvature(tuple(F(1) for _ in range(7)))
