from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umbral.errors import DiagSingular, NotInvertible, NotMonic, NotThreeTerm
from umbral.opalg import DiagSeq, OpMatrix, mgf_from_gop
from umbral.series import TruncSeries, exp_series, riccati_series

NW = 10


# ---- oracles ---------------------------------------------------------------

def falling_factorial_poly(n):
    """Coefficients of x(x-1)...(x-n+1) by direct product."""
    poly = [F(1)]
    for k in range(n):
        nxt = [F(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= k * c
        poly = nxt
    return poly


def stirling_first_signed(n, k):
    return falling_factorial_poly(n)[k] if k <= n else F(0)


# ---- basic builders ---------------------------------------------------------

def test_commutator_d_x_is_identity():
    d, x = OpMatrix.d_op(NW), OpMatrix.x_op(NW)
    comm = d @ x - x @ d
    assert comm.equals(OpMatrix.identity(NW))
    assert comm.reliable == NW - 1


def test_delta_evaluates_at_zero():
    delta = OpMatrix.delta_op(NW)
    assert delta.apply_poly([3, 2, 1])[:3] == [F(3), F(0), F(0)]


def test_l_shifts_down_and_factorial_conjugation():
    l = OpMatrix.l_op(NW)
    out = l.apply_poly([0, 0, 0, 0, 0, 1])  # x^5
    assert out[4] == 1 and sum(1 for v in out if v != 0) == 1
    fact = OpMatrix.diag_op(DiagSeq.factorial(NW + 1), NW)
    conj = fact @ OpMatrix.d_op(NW) @ fact.inverse()
    assert conj.equals(l)


def test_diag_ratio_guard():
    with pytest.raises(DiagSingular):
        DiagSeq.from_ratio(lambda n: F(1) / (n - 3), NW)
    with pytest.raises(DiagSingular):
        DiagSeq.from_ratio(lambda n: n - 3, NW)  # zero value at n=3


# ---- umbral composition operator ---------------------------------------------

def test_umbral_identity():
    f = TruncSeries.x(NW)
    assert OpMatrix.umbral_compose(f, NW).equals(OpMatrix.identity(NW))


def test_umbral_falling_factorials():
    cf = OpMatrix.umbral_compose(exp_series(1, NW) - 1, NW)
    col = cf.column_poly(3)
    assert col[:4] == falling_factorial_poly(3) + [F(0)] * 0
    # full Stirling triangle
    for n in range(NW + 1):
        for k in range(NW + 1):
            expected = stirling_first_signed(n, k) if k <= n else F(0)
            assert cf.mat[k][n] == expected


def test_umbral_conjugation_of_x():
    f = riccati_series(1, 1, 0, NW)  # e^y - 1
    cf = OpMatrix.umbral_compose(f, NW)
    lhs = cf @ OpMatrix.x_op(NW) @ cf.inverse()
    fprime = TruncSeries.one(NW) + f  # f' = 1 + f
    rhs = OpMatrix.x_op(NW) @ OpMatrix.series_of_d(1 / fprime, NW)
    assert lhs.equals(rhs)


def test_umbral_inverse_is_reverse():
    f = TruncSeries.from_polynomial([0, 1, -1], NW)
    cf = OpMatrix.umbral_compose(f, NW)
    cr = OpMatrix.umbral_compose(f.reverse(), NW)
    assert cf.inverse().equals(cr)


def test_umbral_composition_law():
    # C_f C_g = C of the composite map (checked as matrices)
    f = TruncSeries.from_polynomial([0, 1, F(1, 2)], NW)
    g = TruncSeries.from_polynomial([0, 1, -1, F(1, 3)], NW)
    cf = OpMatrix.umbral_compose(f, NW)
    cg = OpMatrix.umbral_compose(g, NW)
    prod = cf @ cg
    comp = OpMatrix.umbral_compose(g.compose(f), NW)
    assert prod.equals(comp)


# ---- shifted factorial operator ----------------------------------------------

def test_shifted_product_trivial():
    assert OpMatrix.shifted_product([0] * NW, NW).equals(OpMatrix.identity(NW))


def test_shifted_product_rising():
    op = OpMatrix.shifted_product(list(range(NW)), NW)
    assert op.column_poly(2)[:3] == [F(0), F(1), F(1)]  # x(x+1)


def test_shifted_product_conjugation():
    ells = [F(k * k, 3) + 1 for k in range(NW)]
    c = OpMatrix.shifted_product(ells, NW)
    lhs = c.inverse() @ OpMatrix.x_op(NW) @ c
    rhs = OpMatrix.x_op(NW) - OpMatrix.diag_op(ells + [F(0)], NW)
    assert lhs.equals(rhs)


# ---- inverse guards ------------------------------------------------------------

def test_inverse_identity():
    assert OpMatrix.identity(NW).inverse().equals(OpMatrix.identity(NW))


def test_inverse_rejects_raising():
    with pytest.raises(NotInvertible):
        OpMatrix.x_op(NW).inverse()


def test_inverse_rejects_zero_diagonal():
    with pytest.raises(NotInvertible):
        OpMatrix.theta_op(NW).inverse()


def test_exp_type_conjugation_of_x():
    # ell(D) x ell(D)^(-1) = x + (ell'/ell)(D)
    ell = TruncSeries.from_polynomial([1, 2, F(1, 3), -1], NW + 1)
    lhs = OpMatrix.series_of_d(ell.truncate(NW), NW) @ OpMatrix.x_op(NW) @ OpMatrix.series_of_d(ell.truncate(NW), NW).inverse()
    rhs = OpMatrix.x_op(NW) + OpMatrix.series_of_d(ell.derivative() / ell.truncate(NW), NW)
    assert lhs.equals(rhs)


# ---- bar transform ---------------------------------------------------------------

def test_bar_of_d_is_multiplication_by_y():
    bar = OpMatrix.d_op(NW).bar()
    for b in range(1, NW + 1):
        assert bar.mat[b][b - 1] == 1
    assert bar.band_profile() == (1, 0)


def test_bar_of_x_is_y_derivative():
    bar = OpMatrix.x_op(NW).bar()
    for b in range(NW):
        assert bar.mat[b][b + 1] == b + 1


def test_bar_involution():
    f = riccati_series(1, 0, 1, NW)
    op = OpMatrix.umbral_compose(f, NW)
    assert op.bar().bar().equals(op)


def test_bar_antihomomorphism():
    d, x = OpMatrix.d_op(NW), OpMatrix.x_op(NW)
    lhs = (d @ x).bar()
    rhs = x.bar() @ d.bar()
    assert lhs.equals(rhs, through=lhs.reliable)


def test_bar_umbral_inverse_gives_powers_of_f():
    # bar(C_f^(-1)) . y^n = f(y)^n
    f = TruncSeries.from_polynomial([0, 1, F(2, 5), F(-1, 4)], NW)
    bar = OpMatrix.umbral_compose(f, NW).inverse().bar()
    power = TruncSeries.one(NW)
    for n in range(4):
        col = [bar.mat[b][n] for b in range(NW + 1)]
        assert col == list(power.coeffs)
        power = power * f


def test_mgf_of_hermite_type():
    # exp(-D^2/2) has mgf exp(y^2/2)
    gauss = TruncSeries.from_polynomial([0, 0, F(-1, 2)], NW).exp()
    gop = OpMatrix.series_of_d(gauss, NW)
    f0 = mgf_from_gop(gop)
    expected = TruncSeries.from_polynomial([0, 0, F(1, 2)], NW).exp()
    assert f0 == expected


# ---- band profile and three-term extraction ------------------------------------

def test_three_term_extraction():
    x = OpMatrix.x_op(NW)
    a_diag = OpMatrix.theta_op(NW)
    b_vals = [2 * F(n) for n in range(NW + 1)]
    t = x + a_diag + OpMatrix.d_op(NW) @ OpMatrix.diag_op(b_vals, NW)
    a, b = t.three_term()
    assert a == [F(n) for n in range(len(a))]
    assert b == [2 * F(n) for n in range(1, len(b) + 1)]
    assert t.apply_poly([0, 1])[:3] == [F(2), F(1), F(1)]  # t.x = x^2 + x + 2


def test_three_term_degenerate_x_only():
    a, b = OpMatrix.x_op(NW).three_term()
    assert all(v == 0 for v in a) and all(v == 0 for v in b)


def test_three_term_band_violation():
    t = OpMatrix.x_op(NW) @ OpMatrix.x_op(NW)
    with pytest.raises((NotThreeTerm, NotMonic)):
        t.three_term()


def test_not_monic():
    t = OpMatrix.x_op(NW).scale(2)
    with pytest.raises(NotMonic):
        t.three_term()


# ---- diagonal shift rule ----------------------------------------------------------

def test_diag_commutation_with_x():
    vals = [F(3 * n + 1, 2) for n in range(NW + 2)]
    h = OpMatrix.diag_op(vals[: NW + 1], NW)
    h_shift = OpMatrix.diag_op(vals[1:], NW)
    lhs = h @ OpMatrix.x_op(NW)
    rhs = OpMatrix.x_op(NW) @ h_shift
    assert lhs.equals(rhs)


# ---- reliability bookkeeping --------------------------------------------------------

def test_reliability_shrinks_with_raising_factors():
    x = OpMatrix.x_op(NW)
    prod = x @ x @ x
    assert prod.raised == 3
    assert prod.reliable == NW - 2
    assert prod.mat[3][0] == 1


def test_expand_in_family_stirling():
    cf = OpMatrix.umbral_compose(exp_series(1, NW) - 1, NW)
    xi = cf.expand_in(OpMatrix.identity(NW))
    for n in range(NW + 1):
        col = falling_factorial_poly(n)
        for k in range(n + 1):
            assert xi.mat[k][n] == col[k]


def test_json_round_trip():
    op = OpMatrix.umbral_compose(riccati_series(1, 1, 0, 4), 4)
    data = op.to_json()
    back = OpMatrix.from_json(data)
    assert back.equals(op) and back.raised == op.raised and back.reliable == op.reliable


# ---- property: bar respects products on random diagonal/triangular pairs ------------

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=20, deadline=None)
@given(st.lists(small, min_size=5, max_size=5))
def test_bar_round_trip_on_series_of_d(cs):
    ell = TruncSeries.from_polynomial([1] + cs, 8)
    op = OpMatrix.series_of_d(ell, 8)
    assert op.bar().bar().equals(op)


def test_unbar_inverts_bar():
    f = riccati_series(1, 1, 0, NW)
    op = OpMatrix.umbral_compose(f, NW)
    assert op.bar().unbar().equals(op)


def test_reliability_exhaustion_raises():
    from umbral.errors import ReliabilityExhausted

    op = OpMatrix.x_op(4)
    with pytest.raises(ReliabilityExhausted):
        for _ in range(6):
            op = op @ OpMatrix.x_op(4)


@settings(max_examples=15, deadline=None)
@given(st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_bar_reverses_products_property(cs, ds):
    nw = 6
    a = OpMatrix.series_of_d(TruncSeries.from_polynomial([1] + cs, nw), nw) @ OpMatrix.x_op(nw)
    b = OpMatrix.series_of_d(TruncSeries.from_polynomial([1] + ds, nw), nw)
    lhs = (a @ b).bar()
    rhs = b.bar() @ a.bar()
    assert lhs.equals(rhs, through=min(lhs.reliable, rhs.reliable))


def test_series_side_raising_acts_as_f_derivative():
    # bar of the raising operator C_f x C_f^(-1) must act on powers of f as
    # d/df: it sends f(y)^n to n f(y)^(n-1)
    f = riccati_series(1, 1, 0, NW)  # e^y - 1
    cf = OpMatrix.umbral_compose(f, NW)
    raising = cf @ OpMatrix.x_op(NW) @ cf.inverse()
    bar_u = raising.bar()
    power = TruncSeries.one(NW)
    powers = [power]
    for _ in range(5):
        power = power * f
        powers.append(power)
    for n in range(1, 5):
        got = [
            sum(bar_u.mat[b][a] * powers[n].coeffs[a] for a in range(min(b + 2, NW + 1)))
            for b in range(bar_u.reliable + 1)
        ]
        expected = [n * v for v in powers[n - 1].coeffs[: len(got)]]
        assert got == expected


def test_series_side_lowering_is_multiplication_by_f():
    # bar of f(D) is multiplication by f(y)
    f = riccati_series(1, 0, 1, NW)  # tan
    lowering = OpMatrix.series_of_d(f, NW)
    bar_d = lowering.bar()
    s = TruncSeries.from_polynomial([1, 2, F(1, 3)], NW)
    got = bar_d.apply_series(s)
    assert got == (f * s).truncate(got.order)


def test_expand_in_own_basis_is_identity():
    f = riccati_series(1, 1, 0, NW)
    g = OpMatrix.umbral_compose(f, NW)
    assert g.expand_in(g).equals(OpMatrix.identity(NW))
