import random
from fractions import Fraction as F

import pytest

from umbral.errors import ClosedFormRequired, DegenerateB, NodeAtZeroOfP
from umbral.indexfn import IndexPoly, IndexRatio, affine
from umbral.orthocore import (
    ClosedFormRecurrence,
    assoc_one_identity_holds,
    Recurrence,
    assoc_mgf_from_tails,
    assoc_one_from_moment_operator,
    assoc_recurrence,
    cd_kernel_identity_holds,
    cf_tails,
    christoffel_darboux,
    determinant_identity_holds,
    dual_recurrence,
    fn_family,
    gram_matrix,
    inner_product,
    moments_from_recurrence,
    numerator_functional_holds,
    polys_from_recurrence,
    recurrence_from_moments,
    tail_from_moment_gf,
    tail_from_partial_fractions,
)
from umbral.series import TruncSeries, exp_series


def catalan(n):
    c = [1]
    for m in range(n):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c


def chebyshev_rec(depth):
    return Recurrence([0] * (depth + 1), [F(1, n) for n in range(1, depth + 1)])


def hermite_rec(depth):
    return Recurrence([0] * (depth + 1), [1] * depth)


def random_recurrence(rng, depth):
    def frac(nonzero=False):
        while True:
            v = F(rng.randint(-7, 7), rng.randint(1, 7))
            if v != 0 or not nonzero:
                return v

    return Recurrence(
        [frac() for _ in range(depth + 1)],
        [frac(nonzero=True) for _ in range(depth)],
    )


# ---- polynomials -----------------------------------------------------------


def test_chebyshev_type_polynomials():
    fam = polys_from_recurrence(chebyshev_rec(6), 6)
    assert fam.polys[2] == [F(-1), F(0), F(1)]          # x^2 - 1
    assert fam.polys[3] == [F(0), F(-2), F(0), F(1)]    # x^3 - 2x


def test_hermite_polynomials():
    fam = polys_from_recurrence(hermite_rec(6), 6)
    assert fam.polys[2] == [F(-1), F(0), F(1)]
    assert fam.polys[3] == [F(0), F(-3), F(0), F(1)]    # x^3 - 3x


def test_determinant_identity():
    rng = random.Random(3)
    rec = random_recurrence(rng, 8)
    fam = polys_from_recurrence(rec, 8)
    for n in range(7):
        assert determinant_identity_holds(fam, rec, n)


# ---- moments ---------------------------------------------------------------


def test_catalan_moments():
    ms = moments_from_recurrence(chebyshev_rec(8), 8)
    cats = catalan(4)
    for k in range(4):
        assert ms.moment_gf.coeffs[2 * k] == cats[k]
        assert ms.moment_gf.coeffs[2 * k + 1] == 0


def test_gaussian_moments():
    ms = moments_from_recurrence(hermite_rec(8), 8)
    expected = TruncSeries.from_polynomial([0, 0, F(1, 2)], 8).exp()
    assert ms.f0 == expected
    assert ms.moments[4] == 3


def test_degenerate_b_is_point_mass():
    rec = Recurrence([F(2, 3)] * 7, [0] * 6)
    ms = moments_from_recurrence(rec, 6)
    assert ms.f0 == exp_series(F(2, 3), 6)


def test_recurrence_from_catalan_gf():
    gf = TruncSeries.from_function(lambda i: catalan(6)[i // 2] if i % 2 == 0 else 0, 12)
    rec = recurrence_from_moments(gf)
    assert all(v == 0 for v in rec.a[:5])
    assert rec.b[:5] == tuple(F(1, n) for n in range(1, 6))


def test_rank_one_hankel_degenerates():
    gf = TruncSeries.from_function(lambda i: 1, 8)
    with pytest.raises(DegenerateB) as err:
        recurrence_from_moments(gf)
    assert err.value.depth == 1


def test_half_exponential_moments():
    # f0 = (e^x + 1)/2, the s = 2 instance of the deformed-Legendre family
    # two-point measure: the fraction terminates at depth 2, so peel one level
    f0 = (exp_series(1, 10) + 1) / 2
    gf = f0.laplace()
    rec = recurrence_from_moments(gf, depth=1)
    assert rec.a[0] == F(1, 2)
    assert rec.b[0] == F(1, 4)


def test_moment_round_trip_random():
    rng = random.Random(11)
    for _ in range(10):
        rec = random_recurrence(rng, 9)
        gf = moments_from_recurrence(rec, 16).moment_gf
        back = recurrence_from_moments(gf)
        d = min(len(back.a) - 1, len(back.b), 6)
        assert back.a[: d + 1] == rec.a[: d + 1]
        assert back.b[:d] == rec.b[:d]


# ---- inner products -----------------------------------------------------------


def test_inner_product_unit():
    f0 = moments_from_recurrence(chebyshev_rec(6), 8).f0
    assert inner_product([1], [1], f0) == 1


def test_chebyshev_norm():
    rec = chebyshev_rec(9)
    fam = polys_from_recurrence(rec, 8)
    f0 = moments_from_recurrence(rec, 16).f0
    assert inner_product(fam.polys[2], fam.polys[2], f0) == 1  # 2! * 1 * 1/2
    assert inner_product(fam.polys[1], fam.polys[2], f0) == 0


def test_gram_diagonal_random():
    rng = random.Random(5)
    rec = random_recurrence(rng, 9)
    fam = polys_from_recurrence(rec, 8)
    f0 = moments_from_recurrence(rec, 16).f0
    g = gram_matrix(fam, f0, 6)
    for i in range(7):
        for j in range(7):
            assert g[i][j] == (fam.norms[i] if i == j else 0)


# ---- dual series family ----------------------------------------------------------


def test_fn_family_hermite():
    rec = hermite_rec(10)
    fam = polys_from_recurrence(rec, 10)
    f0 = moments_from_recurrence(rec, 16).f0
    fns = fn_family(fam, f0, 6)
    assert fns[0] == f0
    # f_1 = d/dy e^(y^2/2) = y e^(y^2/2)
    assert fns[1] == (f0 * TruncSeries.x(f0.order)).truncate(15)


def test_fn_leading_coefficients_random():
    rng = random.Random(7)
    rec = random_recurrence(rng, 9)
    fam = polys_from_recurrence(rec, 8)
    f0 = moments_from_recurrence(rec, 16).f0
    for n, fn in enumerate(fn_family(fam, f0, 6)):
        assert fn.coeffs[n] == 1


# ---- Christoffel-Darboux ------------------------------------------------------------


def test_cd_kernel_chebyshev_small():
    fam = polys_from_recurrence(chebyshev_rec(6), 6)
    assert cd_kernel_identity_holds(fam, 1)


def test_cd_kernel_random():
    rng = random.Random(13)
    rec = random_recurrence(rng, 8)
    fam = polys_from_recurrence(rec, 8)
    for n in range(1, 5):
        assert cd_kernel_identity_holds(fam, n)


def test_cd_deformation_matches_display():
    rec = hermite_rec(16)
    fam = polys_from_recurrence(rec, 16)
    kd = christoffel_darboux(fam, rec, F(1, 3), 8)
    assert kd.a == kd.expected_a
    assert kd.b == kd.expected_b
    # theta = 0 diagonal entry: a_1 - p_1(y0) + p_2(y0)/p_1(y0)
    y0 = F(1, 3)
    assert kd.a[0] == rec.a_at(1) - y0 + (y0 * y0 - 1) / y0


def test_cd_deformation_rejects_zero_node():
    rec = hermite_rec(16)
    fam = polys_from_recurrence(rec, 16)
    with pytest.raises(NodeAtZeroOfP):
        christoffel_darboux(fam, rec, 1, 8)  # p_2(1) = 0


# ---- numerator functional ------------------------------------------------------------


def test_numerator_functional():
    rec = hermite_rec(9)
    fam = polys_from_recurrence(rec, 8)
    f0 = moments_from_recurrence(rec, 16).f0
    for n in range(7):
        assert numerator_functional_holds(fam, f0, n)


# ---- tails and association ---------------------------------------------------------------


def test_tails_level_zero_is_moment_gf():
    rec = chebyshev_rec(12)
    tails = cf_tails(rec, 0, 10)
    assert tails[0] == moments_from_recurrence(rec, 10).moment_gf
    assert assoc_mgf_from_tails(rec, 0, 10) == moments_from_recurrence(rec, 10).f0


def test_chebyshev_self_similarity():
    rec = chebyshev_rec(14)
    assert assoc_mgf_from_tails(rec, 1, 10) == assoc_mgf_from_tails(rec, 0, 10)


def test_tails_have_correct_valuation():
    rng = random.Random(17)
    rec = random_recurrence(rng, 14)
    tails = cf_tails(rec, 3, 10)
    for k, t in enumerate(tails):
        assert t.valuation() == k
        assert t.coeffs[k] == 1


def test_assoc_recurrence_integer():
    rec = chebyshev_rec(10)
    shifted = assoc_recurrence(rec, 2)
    assert shifted.a == rec.a[2:]
    assert shifted.b[:4] == tuple((2 + n) * rec.b[1 + n] / n for n in range(1, 5))


def test_assoc_recurrence_closed_form():
    cf = ClosedFormRecurrence(IndexRatio.const(0), affine(0, 1).reciprocal())  # b_n = 1/n
    for c in (F(1, 2), F(2), F(-1, 3)):
        out = cf.assoc(c)
        for n in range(1, 6):
            assert out.b_fn(n) == F(1, n)  # self-similar family


def test_assoc_additivity_closed_form():
    a_fn = IndexRatio(IndexPoly([1, 2]))            # a_n = 1 + 2n
    b_fn = IndexRatio(IndexPoly([3, 1]), IndexPoly([1, 1]))  # b_n = (3+n)/(1+n)
    cf = ClosedFormRecurrence(a_fn, b_fn)
    one = cf.assoc(F(1, 2)).assoc(F(1, 3))
    two = cf.assoc(F(5, 6))
    assert one.equals(two)


def test_assoc_requires_closed_form_for_rational_c():
    with pytest.raises(ClosedFormRequired):
        assoc_recurrence(chebyshev_rec(6), F(1, 2))


def test_assoc_first_shift_display():
    rng = random.Random(23)
    rec = random_recurrence(rng, 10)
    shifted = assoc_recurrence(rec, 1)
    for n in range(1, 6):
        assert shifted.a[n] == rec.a[n + 1]
        assert shifted.b[n - 1] == (1 + n) * rec.b_at(1 + n) / n


# ---- the moment-operator route to the first associated family -----------------------------


def test_assoc_one_operator_hermite():
    rec = hermite_rec(20)
    fam = polys_from_recurrence(rec, 20)
    gf = moments_from_recurrence(rec, 12).moment_gf
    op = assoc_one_from_moment_operator(fam, gf, 12)
    assoc_fam = polys_from_recurrence(assoc_recurrence(rec, 1), 12)
    # hand-checked values
    assert op.apply_poly([1])[:1] == [F(1)]
    got_p2 = op.apply_poly([0, 0, 1])
    assert got_p2[:3] == [F(-2), F(0), F(1)]
    for n in range(10):
        col = op.apply_poly([0] * n + [1])
        expected = assoc_fam.polys[n] + [F(0)] * (len(col) - n - 1)
        assert col == expected


def test_assoc_one_operator_random():
    rng = random.Random(29)
    rec = random_recurrence(rng, 20)
    fam = polys_from_recurrence(rec, 20)
    gf = moments_from_recurrence(rec, 12).moment_gf
    op = assoc_one_from_moment_operator(fam, gf, 12)
    assoc_fam = polys_from_recurrence(assoc_recurrence(rec, 1), 12)
    for n in range(9):
        col = op.apply_poly([0] * n + [1])
        assert col[: n + 1] == assoc_fam.polys[n]
        assert all(v == 0 for v in col[n + 1 :])


# ---- duality -------------------------------------------------------------------------------


def test_duality_involution_polynomial():
    cf = ClosedFormRecurrence(IndexRatio(IndexPoly([0, 1])), IndexRatio(IndexPoly([1, 1])))
    dd = dual_recurrence(dual_recurrence(cf))
    assert dd.equals(cf)


def test_duality_hermite_sign_flip():
    b = F(5, 3)
    cf = ClosedFormRecurrence(IndexRatio.const(0), IndexRatio.const(b))
    dual = dual_recurrence(cf)
    assert dual.a_fn(4) == 0
    assert dual.b_fn(4) == -b


def test_chebyshev_type_is_self_dual():
    cf = ClosedFormRecurrence(IndexRatio.const(0), affine(0, 1).reciprocal())
    dual = dual_recurrence(cf)
    assert dual.equals(cf)


def test_negative_index_tail_identity_chebyshev():
    # self-dual family: tail of the moment gf == partial-fraction expansion
    rec = chebyshev_rec(16)
    fam = polys_from_recurrence(rec, 8)
    gf = moments_from_recurrence(rec, 12).moment_gf
    lhs = tail_from_moment_gf(gf, 8)
    rhs = tail_from_partial_fractions(fam, 8)
    assert lhs.coeffs == rhs.coeffs


def test_negative_index_tail_identity_hermite_dual():
    # dual of the constant-b family flips the sign of b
    depth = 16
    dual_rec = Recurrence([0] * (depth + 1), [-1] * depth)
    fam = polys_from_recurrence(dual_rec, 8)
    gf = moments_from_recurrence(dual_rec, 12).moment_gf
    lhs = tail_from_moment_gf(gf, 8)
    rhs = tail_from_partial_fractions(fam, 8)
    assert lhs.coeffs == rhs.coeffs


def test_assoc_one_identity_wrapper():
    rng = random.Random(31)
    assert assoc_one_identity_holds(random_recurrence(rng, 22), 10)


def test_negative_index_tail_values():
    from umbral.orthocore import negative_index_tail

    rec = chebyshev_rec(16)
    t0 = negative_index_tail(rec, 0, 8)
    assert t0.coeffs == moments_from_recurrence(rec, 7).moment_gf.coeffs[:8]
    t1 = negative_index_tail(rec, 1, 8)
    assert t1.coeffs[0] == 0 and t1.coeffs[1] == 1


def test_cd_zero_node_guard_at_origin():
    rec = hermite_rec(16)
    fam = polys_from_recurrence(rec, 16)
    with pytest.raises(NodeAtZeroOfP):
        christoffel_darboux(fam, rec, 0, 8)  # p_1(0) = 0


from hypothesis import given, settings
from hypothesis import strategies as st

rational = st.fractions(min_value=-3, max_value=3, max_denominator=4)
nonzero_rational = rational.filter(lambda v: v != 0)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(rational, min_size=8, max_size=8),
    st.lists(nonzero_rational, min_size=7, max_size=7),
)
def test_moment_round_trip_property(a, b):
    rec = Recurrence(a, b)
    gf = moments_from_recurrence(rec, 12).moment_gf
    back = recurrence_from_moments(gf)
    d = min(len(back.a) - 1, len(back.b), 4)
    assert back.a[: d + 1] == rec.a[: d + 1]
    assert back.b[:d] == rec.b[:d]


@settings(max_examples=20, deadline=None)
@given(
    st.lists(rational, min_size=7, max_size=7),
    st.lists(nonzero_rational, min_size=6, max_size=6),
)
def test_gram_diagonality_property(a, b):
    rec = Recurrence(a, b)
    fam = polys_from_recurrence(rec, 6)
    f0 = moments_from_recurrence(rec, 10).f0
    for i in range(5):
        for j in range(5):
            expected = fam.norms[i] if i == j else 0
            assert inner_product(fam.polys[i], fam.polys[j], f0) == expected


def test_dual_identity_check_wrapper():
    from umbral.indexfn import IndexRatio, affine
    from umbral.orthocore import dual_identity_check

    cheb = ClosedFormRecurrence(IndexRatio.const(0), affine(0, 1).reciprocal())
    assert dual_identity_check(cheb, terms=8)
    hermite = ClosedFormRecurrence(IndexRatio.const(0), IndexRatio.const(1))
    assert dual_identity_check(hermite, terms=8)


def test_assoc_zero_is_identity_on_closed_forms():
    cf = ClosedFormRecurrence(IndexRatio(IndexPoly([1, 2])), IndexRatio(IndexPoly([3, 1])))
    assert assoc_recurrence(cf, 0) is cf
    rec = chebyshev_rec(6)
    assert assoc_recurrence(rec, 0) is rec
