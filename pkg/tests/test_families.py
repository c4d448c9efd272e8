from fractions import Fraction as F

import pytest

from umbral.errors import SingularParams
from umbral.families import (
    JacobiParams,
    MultiTermParams,
    ShefferParams,
    WilsonParams,
    comment_generator_bands,
    hahn_family,
    hahn_mgf,
    jacobi_diffeq_op,
    jacobi_family,
    multiterm_family,
    sheffer_family,
    ultraspherical_family,
    wilson_family,
)
from umbral.opalg import OpMatrix
from umbral.orthocore import moments_from_recurrence, recurrence_from_moments
from umbral.series import TruncSeries, exp_series


def all_pass(result):
    bad = [(c.name, c.witness) for c in result.checks if not c.passed]
    assert not bad, bad
    return result


# ---- base family ----------------------------------------------------------------


def test_hermite_branch():
    fam = all_pass(sheffer_family(ShefferParams(0, 0, F(1, 2)), 10))
    assert all(v == 0 for v in fam.recurrence.a)
    assert all(v == 1 for v in fam.recurrence.b)
    assert fam.mgf == TruncSeries.from_polynomial([0, 0, F(1, 2)], fam.mgf.order).exp()


def test_exponential_branch_coefficients():
    fam = all_pass(sheffer_family(ShefferParams(1, 1, 0), 10))
    # a_n = a(1 + lam n) = 1 + n, so a_1 = 2
    assert fam.recurrence.a[1] == 2
    assert fam.recurrence.a[0] == 1


def test_tangent_branch_coefficients():
    fam = all_pass(sheffer_family(ShefferParams(1, 0, 1), 10))
    # x + (2+theta)D in display order: canonical b_n = n + 1
    assert fam.recurrence.b[:4] == (2, 3, 4, 5)


def test_sheffer_guard():
    with pytest.raises(SingularParams):
        sheffer_family(ShefferParams(F(-1, 3), 1, 1), 8)  # 1 + lam*3 = 0


# ---- first deformation ------------------------------------------------------------


def test_ultraspherical_catalan_moments():
    fam = all_pass(ultraspherical_family(ShefferParams(1, 0, 1), 12))
    cats = [1]
    for m in range(6):
        cats.append(sum(cats[i] * cats[m - i] for i in range(m + 1)))
    moments = fam.mgf.laplace()
    for n in range(6):
        assert moments.coeffs[2 * n] == cats[n]
    assert fam.recurrence.b[:4] == (1, F(1, 2), F(1, 3), F(1, 4))


def test_ultraspherical_exponential_factor():
    p = ShefferParams(F(1, 2), F(2, 3), F(3, 5))
    fam = all_pass(ultraspherical_family(p, 10))
    base = ultraspherical_family(ShefferParams(p.lam, 0, p.b), 10)
    assert fam.mgf == (exp_series(p.a, fam.mgf.order) * base.mgf).truncate(fam.mgf.order)


def test_ultraspherical_rejects_lam_zero():
    with pytest.raises(SingularParams):
        ultraspherical_family(ShefferParams(0, 0, 1), 8)


# ---- factorial-shift deformation ----------------------------------------------------


def test_hahn_closed_form_mgf():
    fam = all_pass(hahn_family(2, F(1, 2), F(7, 3), 12))
    assert fam.mgf.agrees_with(hahn_mgf(F(7, 3), 12), 12)


def test_hahn_rejects_small_integer_s():
    with pytest.raises(SingularParams):
        hahn_family(2, F(1, 2), 2, 10)


def test_hahn_carlitz_variance():
    f0 = hahn_mgf(2, 10)
    assert f0 == (exp_series(1, 10) + 1) / 2
    rec = recurrence_from_moments(f0.laplace(), depth=1)
    mu = f0.laplace()
    assert mu.coeffs[2] - mu.coeffs[1] ** 2 == rec.b[0] == F(1, 4)


def test_hahn_carlitz_b_display():
    # b_theta = theta(s^2 - theta^2)/(4(4 theta^2 - 1)) at theta = 1: (s^2-1)/12
    s = F(7, 3)
    fam = hahn_family(2, F(1, 2), s, 10)
    assert fam.recurrence.b[0] == (s * s - 1) / 12


def test_hahn_generic_parameters():
    all_pass(hahn_family(F(1, 2), F(2, 3), F(5, 7), 10))


# ---- two-parameter deformation --------------------------------------------------------


def test_jacobi_shifted_legendre():
    fam = all_pass(jacobi_family(JacobiParams(2, F(1, 2), 1), 12))
    moments = fam.mgf.laplace()
    assert all(moments.coeffs[n] == F(1, n + 1) for n in range(13))


def test_jacobi_kappa_branch_reduces_to_ultraspherical():
    # beta = kappa makes the diagonal ratio collapse to the one-parameter case
    p = JacobiParams(F(1, 2), F(2, 3), 1)
    assert p.beta == p.kappa
    fam = jacobi_family(p, 10)
    ultra = ultraspherical_family(ShefferParams(p.lam, p.a, p.b), 10)
    # recurrences agree even though the working chains differ
    assert fam.recurrence.a[:8] == ultra.recurrence.a[:8]
    assert fam.recurrence.b[:8] == ultra.recurrence.b[:8]


def test_jacobi_lambda_guard():
    with pytest.raises(SingularParams):
        JacobiParams(0, 1, 1)
    with pytest.raises(SingularParams):
        JacobiParams(-2, 1, 1)


def test_jacobi_diffeq_eigenvalues():
    p = JacobiParams(2, F(1, 2), 1)
    lhs, fam, checks = jacobi_diffeq_op(p, 12)
    assert all(c.passed for c in checks)
    # apply to p_1 = x - mu_1: eigenvalue (1+lam)^2 = 9
    col = lhs.apply_poly(fam.gop.column_poly(1))
    assert col[:2] == [9 * v for v in fam.gop.column_poly(1)[:2]]


def test_jacobi_exceptional_constant_term():
    # kappa = 1 with r != 1: the display is 0/0 at theta = 0 and the true
    # value is a, fixed by continuity in the parameter
    fam = all_pass(jacobi_family(JacobiParams(2, F(1, 2), 0), 10))
    assert fam.recurrence.a[0] == F(1, 2)
    assert fam.recurrence.a[1] == 1


# ---- mixed deformation ------------------------------------------------------------------


def test_wilson_generic_tridiagonal():
    fam = all_pass(wilson_family(WilsonParams(2, F(1, 3), F(1, 2), F(1, 5), F(1, 3)), 12))
    u = fam.gop.inverse() @ OpMatrix.x_op(fam.gop.nw) @ fam.gop
    up, down = u.band_profile(12)
    assert up == 1 and down == 1


def test_wilson_h_zero_reduction():
    p = WilsonParams(2, F(1, 3), F(1, 2), F(1, 5), 0)
    fam = all_pass(wilson_family(p, 10))
    red = jacobi_family(JacobiParams(2, F(1, 3), F(1, 5)), 10)
    assert fam.gop.equals(red.gop, 10)


def test_wilson_h_one_same_mixture():
    all_pass(wilson_family(WilsonParams(2, F(1, 3), F(1, 2), F(1, 2), 1), 10))


# ---- higher-order recurrences --------------------------------------------------------------


def test_multiterm_reduces_to_jacobi():
    m = multiterm_family(MultiTermParams(2, 2, F(1, 2), (F(1, 3), F(2, 3))), 10)
    j = jacobi_family(JacobiParams(2, F(1, 2), F(1, 3)), 10)
    assert m.gop.equals(j.gop, 10)


def test_multiterm_four_term_band():
    fam = all_pass(multiterm_family(MultiTermParams(3, 1, 1, (F(1, 3), F(1, 3), F(1, 3))), 10))
    u = fam.gop.inverse() @ OpMatrix.x_op(fam.gop.nw) @ fam.gop
    assert u.band_profile(10) == (1, 2)


def test_multiterm_extended_band():
    fam = all_pass(
        multiterm_family(MultiTermParams(3, 1, 1, (F(1, 4), F(1, 4), F(1, 4), F(1, 4))), 10)
    )
    u = fam.gop.inverse() @ OpMatrix.x_op(fam.gop.nw) @ fam.gop
    assert u.band_profile(10) == (1, 2)


def test_multiterm_weight_guard():
    with pytest.raises(SingularParams):
        MultiTermParams(3, 1, 1, (F(1, 2), F(1, 2), F(1, 2)))


# ---- generator probes ------------------------------------------------------------------------


def test_established_generators_are_tridiagonal():
    rows = comment_generator_bands(JacobiParams(2, F(1, 3), F(2, 5)), 8)
    for name, band, ok in rows:
        if ok is not None:
            assert ok, (name, band)


# ---- two-pipeline moment checks across families ------------------------------------------------


@pytest.mark.parametrize(
    "build",
    [
        lambda: sheffer_family(ShefferParams(F(1, 3), F(-2, 5), F(1, 7)), 10),
        lambda: ultraspherical_family(ShefferParams(F(2, 3), F(1, 5), F(-1, 2)), 10),
        lambda: jacobi_family(JacobiParams(F(3, 4), F(1, 2), F(2, 7)), 10),
    ],
)
def test_mgf_matches_recurrence_moments(build):
    fam = build()
    via_rec = moments_from_recurrence(fam.recurrence, 10).f0
    assert fam.mgf.agrees_with(via_rec, 10)


def test_raising_lowering_commutator_across_families():
    builders = (
        sheffer_family(ShefferParams(F(1, 3), F(-2, 5), F(1, 7)), 8),
        ultraspherical_family(ShefferParams(F(2, 3), F(1, 5), F(-1, 2)), 8),
        jacobi_family(JacobiParams(F(3, 4), F(1, 2), F(2, 7)), 8),
        wilson_family(WilsonParams(2, F(1, 3), F(1, 2), F(1, 5), F(1, 3)), 8),
    )
    for fam in builders:
        nw = fam.gop.nw
        inv = fam.gop.inverse()
        u = fam.gop @ OpMatrix.x_op(nw) @ inv
        d = fam.gop @ OpMatrix.d_op(nw) @ inv
        comm = d @ u - u @ d
        assert comm.equals(OpMatrix.identity(nw))
