from fractions import Fraction as F

import pytest

from umbral.associated import (
    change_of_variable_check,
    factorization_column,
    harder_generator_bands,
    jacobi_assoc,
    long_division_checks,
    sheffer_assoc,
    splitting_check,
    ultra_assoc,
    wilson_assoc,
)
from umbral.errors import SingularParams
from umbral.families import JacobiParams, ShefferParams, WilsonParams
from umbral.opalg import OpMatrix
from umbral.orthocore import assoc_recurrence
from umbral.series import TruncSeries, exp_series


def all_pass(checks):
    bad = [(c.name, c.witness) for c in checks if not c.passed]
    assert not bad, bad


# ---- long division lemma --------------------------------------------------------


def test_long_division_trivial_weight():
    all_pass(long_division_checks(lambda n: 1, TruncSeries.from_polynomial([1, 1], 20), 8))


def test_long_division_affine_weight():
    all_pass(long_division_checks(lambda n: F(2) + n, TruncSeries.from_polynomial([1, 1], 20), 8))


def test_long_division_generic():
    b = TruncSeries([1, F(1, 2), F(-1, 3), 2, F(1, 7), 0, 1] + [F(1, 5)] * 10)
    all_pass(long_division_checks(lambda n: (F(3, 2) + n) / (1 + 2 * n), b, 8))


def test_change_of_variable_exponential():
    assert change_of_variable_check(exp_series(1, 18) - 1, 8).passed


# ---- associated base family ------------------------------------------------------


def test_sheffer_assoc_zero_reduction():
    res = sheffer_assoc(ShefferParams(1, 1, 1), 0, 10)
    all_pass(res.checks)


def test_sheffer_assoc_laguerre_tails():
    res = sheffer_assoc(ShefferParams(1, 1, 0), 1, 12)
    all_pass(res.checks)
    names = [c.name for c in res.checks]
    assert any("tail" in n for n in names)


def test_sheffer_assoc_rational_c():
    res = sheffer_assoc(ShefferParams(1, 0, 1), F(1, 2), 10)
    all_pass(res.checks)
    base = assoc_recurrence(
        __import__("umbral.families", fromlist=["sheffer_family"]).sheffer_family(
            ShefferParams(1, 0, 1), 10
        ).closed_form,
        F(1, 2),
    )
    for n in range(1, 6):
        assert res.recurrence.b_at(n) == base.b_fn(n)
        assert res.recurrence.a_at(n) == base.a_fn(n)


def test_sheffer_assoc_guard():
    with pytest.raises(SingularParams):
        sheffer_assoc(ShefferParams(1, 1, 1), -3, 10)


# ---- associated first deformation ---------------------------------------------------


def test_ultra_assoc_chebyshev_self_similar():
    res = ultra_assoc(ShefferParams(1, 0, 1), 1, 10)
    all_pass(res.checks)
    assert res.recurrence.b[:5] == (1, F(1, 2), F(1, 3), F(1, 4), F(1, 5))


def test_ultra_assoc_third():
    res = ultra_assoc(ShefferParams(1, 0, 1), F(1, 3), 10)
    all_pass(res.checks)
    assert res.recurrence.b[:6] == tuple(F(1, n) for n in range(1, 7))


def test_ultra_assoc_generic_rational():
    res = ultra_assoc(ShefferParams(F(1, 2), F(2, 3), F(3, 5)), F(-1, 3), 10)
    all_pass(res.checks)


# ---- splitting --------------------------------------------------------------------------


def test_splitting_base_case():
    all_pass(splitting_check(JacobiParams(2, F(1, 2), F(1, 2)), 0, 8))


def test_splitting_pure_lambda():
    all_pass(splitting_check(JacobiParams(2, F(1, 2), 1), F(3, 2), 8))


def test_splitting_generic():
    all_pass(splitting_check(JacobiParams(2, F(1, 2), F(1, 2)), F(3, 2), 8))


# ---- associated Jacobi --------------------------------------------------------------------


def test_jacobi_assoc_pipelines():
    res = jacobi_assoc(JacobiParams(2, F(1, 2), 1), 1, 10)
    all_pass(res.checks)


def test_jacobi_assoc_integer_two_tails():
    res = jacobi_assoc(JacobiParams(2, F(1, 2), 1), 2, 10)
    all_pass(res.checks)


def test_jacobi_assoc_c_zero_hypergeometric_collapse():
    res = jacobi_assoc(JacobiParams(2, F(1, 2), 1), 0, 10)
    all_pass(res.checks)


def test_jacobi_assoc_rational_c():
    res = jacobi_assoc(JacobiParams(F(1, 3), F(2, 5), F(1, 2)), F(3, 2), 10)
    all_pass(res.checks)


# ---- associated Wilson ----------------------------------------------------------------------


def test_wilson_assoc_generic():
    res = wilson_assoc(WilsonParams(2, F(1, 3), F(1, 2), F(1, 5), F(1, 4)), F(3, 2), 12)
    all_pass(res.checks)
    u = res.gop.inverse() @ OpMatrix.x_op(res.gop.nw) @ res.gop
    up, down = u.band_profile(12)
    assert up <= 1 and down <= 1


def test_wilson_assoc_reductions():
    res = wilson_assoc(WilsonParams(2, F(1, 3), F(1, 2), F(1, 5), F(1, 4)), 0, 10)
    all_pass(res.checks)
    res_h0 = wilson_assoc(WilsonParams(2, F(1, 3), F(1, 2), F(1, 5), 0), F(3, 2), 10)
    all_pass(res_h0.checks)


def test_factorization_column_values():
    # y^1/((1+y)(1+2y)) = y(1 - 3y + 7y^2 - 15y^3 + ...)
    got = factorization_column([F(1), F(2)], 1, 5)
    assert got.coeffs[:5] == (0, 1, -3, 7, -15)


# ---- additivity across the explicit operators --------------------------------------------------


def test_assoc_recurrence_additivity_via_operators():
    p = ShefferParams(F(1, 2), F(2, 3), F(3, 5))
    one = ultra_assoc(p, F(1, 2), 10).recurrence
    from umbral.families import ultraspherical_family

    closed = ultraspherical_family(p, 10).closed_form
    two = closed.assoc(F(1, 4)).assoc(F(1, 4))
    for n in range(1, 6):
        assert one.b_at(n) == two.b_fn(n)
        assert one.a_at(n) == two.a_fn(n)


# ---- probe bands ---------------------------------------------------------------------------------


def test_harder_generator_bands_report_only():
    rows = harder_generator_bands(JacobiParams(2, F(1, 3), F(2, 5)), 6)
    assert len(rows) == 4
    for name, band in rows:
        assert isinstance(band, tuple) and len(band) == 2
