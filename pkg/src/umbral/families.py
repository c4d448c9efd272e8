"""Construction and verification of the named orthogonal families.

Every constructor builds its basis-map operator from the defining product of
elementary factors, then re-derives the three-term data, the moment
generating function, and the closed-form displays independently and checks
them against each other.  All checks are exact; with strict=True (the
default) a failed identity raises IdentityFailure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .checks import ensure, flag_check, op_check, series_check, value_check
from .errors import SingularParams
from .indexfn import IndexPoly, IndexRatio
from .opalg import DiagSeq, OpMatrix, mgf_from_gop
from .orthocore import ClosedFormRecurrence, Recurrence, moments_from_recurrence, poly_mul
from .series import (
    TruncSeries,
    as_rat,
    exp_series,
    power_law_ode_series,
    riccati_series,
    t_and_omega,
)

FAMILY_MARGIN = 4


# -- parameters ---------------------------------------------------------------


@dataclass(frozen=True)
class ShefferParams:
    lam: Fraction
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rat(self.lam))
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "b", as_rat(self.b))

    def guard(self, nw: int):
        if self.lam != 0:
            for k in range(nw + 2):
                if 1 + self.lam * k == 0:
                    raise SingularParams("1+lambda*k", f"k={k}")


@dataclass(frozen=True)
class JacobiParams:
    """The square case: the quadratic coefficient is fixed to lam*a^2/4."""

    lam: Fraction
    a: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rat(self.lam))
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "r", as_rat(self.r))
        if self.lam == 0:
            raise SingularParams("lambda=0", "kappa undefined")
        if self.lam == -2:
            raise SingularParams("lambda=-2", "kappa infinite")

    @property
    def kappa(self) -> Fraction:
        return 2 * self.lam / (2 + self.lam)

    @property
    def beta(self) -> Fraction:
        return self.r * self.kappa + (1 - self.r) * self.lam

    @property
    def b(self) -> Fraction:
        return self.lam * self.a * self.a / 4

    def guard(self, nw: int):
        for k in range(nw + 2):
            for name, v in (("1+lambda*k", self.lam), ("1+kappa*k", self.kappa), ("1+beta*k", self.beta)):
                if 1 + v * k == 0:
                    raise SingularParams(name, f"k={k}")
            if 2 + self.kappa * k == 0:
                raise SingularParams("2+kappa*k", f"k={k}")


@dataclass(frozen=True)
class WilsonParams:
    lam: Fraction
    a: Fraction
    r: Fraction
    rt: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rat(self.lam))
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "r", as_rat(self.r))
        object.__setattr__(self, "rt", as_rat(self.rt))
        object.__setattr__(self, "h", as_rat(self.h))
        if self.lam in (0, -2):
            raise SingularParams("lambda", "kappa undefined")

    @property
    def kappa(self) -> Fraction:
        return 2 * self.lam / (2 + self.lam)

    @property
    def beta(self) -> Fraction:
        return self.r * self.kappa + (1 - self.r) * self.lam

    @property
    def beta_t(self) -> Fraction:
        return self.rt * self.kappa + (1 - self.rt) * self.lam

    def jacobi(self, which: str = "beta") -> JacobiParams:
        return JacobiParams(self.lam, self.a, self.r if which == "beta" else self.rt)

    def mixing_ratio(self, n) -> Fraction:
        lam, kappa = self.lam, self.kappa
        num = self.h * (1 + self.beta * n) * (1 + lam * (n + 1)) ** 2 + (1 - self.h) * (1 + self.beta_t * n)
        return num / ((1 + lam * n) * (1 + kappa * n))

    def guard(self, nw: int):
        self.jacobi("beta").guard(nw)
        self.jacobi("betat").guard(nw)
        for k in range(nw + 1):
            if self.mixing_ratio(k) == 0:
                raise SingularParams("mixing ratio", f"zero at k={k}")


@dataclass(frozen=True)
class MultiTermParams:
    n: int
    lam: Fraction
    a: Fraction
    t: tuple  # n weights (plus an optional extra one), summing to 1

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rat(self.lam))
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "t", tuple(as_rat(v) for v in self.t))
        if self.n < 2:
            raise SingularParams("n", "need n >= 2")
        if len(self.t) not in (self.n, self.n + 1):
            raise SingularParams("weights", f"need {self.n} or {self.n + 1} weights")
        if sum(self.t) != 1:
            raise SingularParams("weights", "must sum to 1")

    @property
    def extended(self) -> bool:
        return len(self.t) == self.n + 1

    def lam_k(self, k: int) -> Fraction:
        den = self.n + k * self.lam
        if den == 0:
            raise SingularParams("lambda_k", f"k={k}")
        return Fraction(self.n) * self.lam / den

    def ratio(self, m) -> Fraction:
        acc = self.t[self.n] if self.extended else Fraction(0)
        for k in range(self.n):
            acc += self.t[k] / (1 + self.lam_k(k) * m)
        return acc

    def guard(self, nw: int):
        for k in range(self.n):
            lk = self.lam_k(k)
            for m in range(nw + 2):
                if 1 + lk * m == 0:
                    raise SingularParams("1+lambda_k*m", f"k={k}, m={m}")
        for m in range(nw + 1):
            if self.ratio(m) == 0:
                raise SingularParams("weight ratio", f"zero at m={m}")


# -- shared operator kit ---------------------------------------------------------


def diag_of(fn, nw: int, inverse: bool = False) -> OpMatrix:
    """Diagonal operator with pointwise values fn(0), ..., fn(nw)."""
    vals = [as_rat(fn(n)) for n in range(nw + 1)]
    if inverse:
        vals = DiagSeq(vals).inverse_values()
    return OpMatrix.diag_op(vals, nw)


def diag_values(values: Sequence, nw: int, inverse: bool = False) -> OpMatrix:
    if inverse:
        values = DiagSeq(list(values)).inverse_values()
    return OpMatrix.diag_op(list(values), nw)


def x_times(values: Sequence, nw: int) -> OpMatrix:
    """x * g(theta): multiply then shift degree up."""
    return OpMatrix.x_op(nw) @ diag_values(values, nw)


def coeff_then_d(values: Sequence, nw: int) -> OpMatrix:
    """g(theta) * D in display order (D acts first)."""
    return diag_values(values, nw) @ OpMatrix.d_op(nw)


def d_then_coeff(values: Sequence, nw: int) -> OpMatrix:
    """D * b_theta in the canonical order (the coefficient acts first)."""
    return OpMatrix.d_op(nw) @ diag_values(values, nw)


@dataclass
class ShefferCore:
    """Series and operators shared by every deformation built over one f."""

    lam: Fraction
    f: TruncSeries
    fprime: TruncSeries
    tf: TruncSeries
    omega: TruncSeries
    c_f: OpMatrix
    c_tf: OpMatrix
    nw: int

    def fpow(self, alpha) -> OpMatrix:
        return OpMatrix.series_of_d(self.fprime.pow_fraction(alpha), self.nw)

    @property
    def inner(self) -> OpMatrix:
        """C_tf^(-1) f'(D)^(-1/lam) C_f, the common core of the deformations."""
        return self.c_tf.inverse() @ self.fpow(Fraction(-1) / self.lam) @ self.c_f

    def conjugate_generator(self, t: OpMatrix) -> OpMatrix:
        """C_f^(-1) f'(D)^(1/lam) C_tf . T . C_tf^(-1) f'(D)^(-1/lam) C_f."""
        left = self.c_f.inverse() @ self.fpow(Fraction(1) / self.lam) @ self.c_tf
        right = self.c_tf.inverse() @ self.fpow(Fraction(-1) / self.lam) @ self.c_f
        return left @ t @ right


def sheffer_core(f: TruncSeries, fprime: TruncSeries, lam, nw: int) -> ShefferCore:
    tf, omega = t_and_omega(f)
    return ShefferCore(
        lam=as_rat(lam),
        f=f,
        fprime=fprime,
        tf=tf,
        omega=omega,
        c_f=OpMatrix.umbral_compose(f, nw),
        c_tf=OpMatrix.umbral_compose(tf, nw),
        nw=nw,
    )


def conjugation_trick_checks(core: ShefferCore, sigma, through: Optional[int] = None) -> list:
    """The load-bearing lemma: for any nonzero sigma,

        C_tf x (1+sigma theta)^(-1) C_tf^(-1)
          = x f'(D)^(-1/sigma) (1 + sigma x (f/f')(D))^(-1) f'(D)^(1/sigma)
          = x f'(D)^(-1/sigma) C_f (1+sigma theta)^(-1) C_f^(-1) f'(D)^(1/sigma)

    verified as exact matrix equalities before each construction uses it.
    """
    sigma = as_rat(sigma)
    nw = core.nw
    inv_diag = diag_of(lambda n: 1 + sigma * n, nw, inverse=True)
    lhs = core.c_tf @ OpMatrix.x_op(nw) @ inv_diag @ core.c_tf.inverse()
    x_tf = OpMatrix.x_op(nw) @ OpMatrix.series_of_d(core.tf, nw)
    middle = (
        OpMatrix.x_op(nw)
        @ OpMatrix.series_of_d(core.fprime.pow_fraction(-1 / sigma), nw)
        @ (OpMatrix.identity(nw) + x_tf.scale(sigma)).inverse()
        @ OpMatrix.series_of_d(core.fprime.pow_fraction(1 / sigma), nw)
    )
    rhs = (
        OpMatrix.x_op(nw)
        @ OpMatrix.series_of_d(core.fprime.pow_fraction(-1 / sigma), nw)
        @ core.c_f
        @ inv_diag
        @ core.c_f.inverse()
        @ OpMatrix.series_of_d(core.fprime.pow_fraction(1 / sigma), nw)
    )
    return [
        op_check(f"conjugation-trick sigma={sigma} (resolvent form)", lhs, middle, through),
        op_check(f"conjugation-trick sigma={sigma} (composition form)", lhs, rhs, through),
    ]


# -- family result record -----------------------------------------------------------


@dataclass
class FamilyResult:
    name: str
    gop: OpMatrix
    recurrence: Recurrence
    mgf: TruncSeries
    closed_form: Optional[ClosedFormRecurrence] = None
    checks: list = field(default_factory=list)
    core: Optional[ShefferCore] = None

    @property
    def norms(self) -> list:
        out = [Fraction(1)]
        for n in range(1, len(self.recurrence.b) + 1):
            out.append(out[-1] * n * self.recurrence.b_at(n))
        return out

    def to_json(self, upto: Optional[int] = None) -> dict:
        upto = self.gop.reliable if upto is None else min(upto, self.gop.reliable)
        polys = [
            [str(self.gop.mat[i][n]) for i in range(n + 1)] for n in range(upto + 1)
        ]
        return {
            "name": self.name,
            "order": upto,
            "polys": polys,
            "recurrence": self.recurrence.to_json(),
            "f0": self.mgf.to_json(),
            "norms": [str(v) for v in self.norms],
            "checks": [c.to_json() for c in self.checks],
        }


def _extract(gop: OpMatrix, through: Optional[int] = None):
    u = gop.inverse() @ OpMatrix.x_op(gop.nw) @ gop
    a, b = u.three_term(through)
    return u, Recurrence(tuple(a), tuple(b))


def _mgf_pipeline_check(name: str, gop: OpMatrix, rec: Recurrence, order: int) -> tuple:
    """The two independent mgf pipelines: bar of the inverse operator versus
    moments of the extracted recurrence."""
    f0 = mgf_from_gop(gop).truncate(order)
    via_rec = moments_from_recurrence(rec, order).f0
    return f0, series_check(f"{name}: mgf pipelines agree", f0, via_rec)


# -- base family -----------------------------------------------------------------


def sheffer_family(p: ShefferParams, order: int, margin: int = FAMILY_MARGIN, strict: bool = True) -> FamilyResult:
    """The base three-term family with raising data x + a(1+lam theta) + b(2+lam theta)D."""
    nw = order + margin
    p.guard(nw)
    lam, a, b = p.lam, p.a, p.b
    checks = []
    if lam == 0:
        ell = TruncSeries.from_polynomial([0, -a, -b], nw).exp()
        gop = OpMatrix.series_of_d(ell, nw)
        core = None
        gen_weight = ell
        phi = TruncSeries.x(nw)
    else:
        f = riccati_series(lam, a, b, nw)
        fprime = (1 + lam * a * f + lam * b * (f * f)).truncate(nw)
        core = sheffer_core(f, fprime, lam, nw)
        gop = core.fpow(Fraction(-1) / lam) @ core.c_f
        phi = f.reverse()
        phiprime = 1 / TruncSeries.from_polynomial([1, lam * a, lam * b], nw)
        gen_weight = phiprime.pow_fraction(Fraction(1) / lam)
        checks.append(
            series_check("phi' closed form", phi.derivative(), phiprime)
        )
    u, rec = _extract(gop)
    expected = (
        OpMatrix.x_op(nw)
        + OpMatrix.diag_op([a * (1 + lam * n) for n in range(nw + 1)], nw)
        + coeff_then_d([b * (2 + lam * n) for n in range(nw + 1)], nw)
    )
    checks.append(op_check("dual raising display", u, expected, order))
    closed = ClosedFormRecurrence(
        IndexRatio(IndexPoly([a, a * lam])),
        IndexRatio(IndexPoly([b * (2 - lam), b * lam])),
    )
    for n in range(1, min(order, rec.depth) + 1):
        if closed.a_fn(n) != rec.a_at(n) or closed.b_fn(n) != rec.b_at(n):
            checks.append(flag_check("closed-form recurrence", False, f"mismatch at n={n}"))
            break
    else:
        checks.append(flag_check("closed-form recurrence", True))
    # generating function: column m of the bar transform against phi'^(1/lam) phi^m
    barg = gop.bar()
    power = TruncSeries.one(nw)
    for m in range(order + 1):
        got = TruncSeries([barg.mat[i][m] for i in range(barg.reliable + 1)])
        expect = (gen_weight * power).truncate(got.order)
        c = series_check(f"generating function column {m}", got, expect, order)
        if not c.passed:
            checks.append(c)
            break
        power = power * phi
    else:
        checks.append(flag_check(f"generating function to bidegree ({order},{order})", True))
    f0, pipe = _mgf_pipeline_check("sheffer", gop, rec, min(order, 2 * (rec.depth // 2)))
    checks.append(pipe)
    ensure(checks, strict)
    return FamilyResult("sheffer", gop, rec, f0, closed, checks, core)


# -- first deformation --------------------------------------------------------------


def ultraspherical_family(p: ShefferParams, order: int, margin: int = FAMILY_MARGIN, strict: bool = True) -> FamilyResult:
    nw = order + margin
    p.guard(nw)
    lam, a, b = p.lam, p.a, p.b
    if lam == 0:
        raise SingularParams("lambda=0", "the deformed family needs invertible 1+lambda*theta")
    f = riccati_series(lam, a, b, nw)
    fprime = (1 + lam * a * f + lam * b * (f * f)).truncate(nw)
    core = sheffer_core(f, fprime, lam, nw)
    checks = conjugation_trick_checks(core, lam, order)
    ratio = lambda n: 1 / (1 + lam * n)
    fvals = DiagSeq.from_ratio(ratio, nw + 2)
    gop = diag_values(fvals.values[: nw + 1], nw, inverse=True) @ core.inner @ diag_values(fvals.values[: nw + 1], nw)
    u, rec = _extract(gop)
    expected_u = (
        OpMatrix.x_op(nw)
        + OpMatrix.diag_op([a] * (nw + 1), nw)
        + coeff_then_d(
            [b * (2 + lam * n) / ((1 + lam * n) * (1 + lam + lam * n)) for n in range(nw + 1)], nw
        )
    )
    checks.append(op_check("dual raising display", u, expected_u, order))
    # dual derivative display
    d_star = gop.inverse() @ OpMatrix.d_op(nw) @ gop
    resolvent = TruncSeries.from_function(
        lambda i: (lam * b) ** (i // 2) if i % 2 == 1 else 0, nw
    )  # y/(1 - lam b y^2)
    expected_d = (
        diag_values(fvals.values[1 : nw + 2], nw, inverse=True)
        @ OpMatrix.series_of_d(resolvent, nw)
        @ diag_values(fvals.values[: nw + 1], nw)
    )
    checks.append(op_check("dual derivative display", d_star, expected_d, order))
    # boxed mgf: e^{ay} * sum_n prod-ratio terms y^(2n)
    even = [Fraction(0)] * (nw + 1)
    term = Fraction(1)
    for n in range(nw // 2 + 1):
        even[2 * n] = term
        term = term * b / ((n + 1) * (1 + lam * (n + 1)))
    boxed = (exp_series(a, nw) * TruncSeries(even)).truncate(order)
    f0, pipe = _mgf_pipeline_check("ultraspherical", gop, rec, order)
    checks.append(pipe)
    checks.append(series_check("boxed mgf", f0, boxed, order))
    # generating function display, column by column:
    # sum_n c_n q_n(x) y^n has x^m coefficient c_m y^m (1+lam a y+lam b y^2)^(-1/lam-m)
    amp = TruncSeries.from_polynomial([1, lam * a, lam * b], nw)
    c_vals = [Fraction(1)]
    for k in range(nw):
        c_vals.append(c_vals[-1] * (1 + k * lam) / (k + 1))
    gen_through = min(order, 8)
    ok = True
    for m in range(gen_through + 1):
        got = TruncSeries([c_vals[n] * gop.mat[m][n] for n in range(gen_through + 1)])
        expect = amp.pow_fraction(Fraction(-1) / lam - m).truncate(gen_through).shift_up(m).truncate(gen_through)
        expect = (expect * c_vals[m]).truncate(gen_through)
        c = series_check(f"generating function column {m}", got, expect)
        if not c.passed:
            checks.append(c)
            ok = False
            break
    if ok:
        checks.append(flag_check(f"generating function display to order {gen_through}", True))
    closed = ClosedFormRecurrence(
        IndexRatio.const(a),
        IndexRatio(
            IndexPoly([b * (2 - lam), b * lam]),
            IndexPoly([1 - lam, lam]) * IndexPoly([1, lam]),
        ),
    )
    ensure(checks, strict)
    return FamilyResult("ultraspherical", gop, rec, f0, closed, checks, core)


# -- the factorial-shift deformation ---------------------------------------------------


def hahn_mgf(s, order: int) -> TruncSeries:
    """(1/s)(e^{sx}-1)/(e^x-1), the closed-form mgf of the lam=2, a=1/2 case."""
    s = as_rat(s)
    num = (exp_series(s, order + 1) - 1) / s
    den = exp_series(1, order + 1) - 1
    return num / den


def hahn_family(lam, a, s, order: int, margin: int = FAMILY_MARGIN, strict: bool = True) -> FamilyResult:
    """Shifted-factorial deformation of the ultraspherical family (4b = lam a^2)."""
    nw = order + margin
    lam, a, s = as_rat(lam), as_rat(a), as_rat(s)
    if s.denominator == 1 and 1 <= s <= nw:
        raise SingularParams("(s-1)_theta", f"integer s={s} <= working order {nw}")
    b = lam * a * a / 4
    ultra = ultraspherical_family(ShefferParams(lam, a, b), order, margin, strict)
    nw = ultra.gop.nw
    svals = DiagSeq.from_ratio(lambda n: s - 1 - n, nw + 1)
    delta = ((exp_series(2 * a, nw) - 1) / (2 * a)) if a != 0 else TruncSeries.x(nw)
    c_delta = OpMatrix.umbral_compose(delta, nw)
    gop = c_delta @ diag_values(svals, nw, inverse=True) @ ultra.gop @ diag_values(svals, nw)
    u, rec = _extract(gop)
    checks = list(ultra.checks)
    expected_u = (
        OpMatrix.x_op(nw)
        + OpMatrix.diag_op([(s - 1) * a] * (nw + 1), nw)
        + coeff_then_d(
            [
                a * a / 4 * (2 + lam * n) * (2 + lam * (s + n)) * (s - 1 - n)
                / ((1 + lam * n) * (1 + lam * (n + 1)))
                for n in range(nw + 1)
            ],
            nw,
        )
    )
    checks.append(op_check("dual raising display", u, expected_u, order))
    # expansion law: coordinates in the shifted-exponential binomial basis
    xi = gop.expand_in(c_delta)
    law = diag_values(svals, nw, inverse=True) @ ultra.gop @ diag_values(svals, nw)
    checks.append(op_check("expansion in binomial basis", xi, law, order))
    f0, pipe = _mgf_pipeline_check("hahn", gop, rec, order)
    checks.append(pipe)
    if lam == 2 and a == Fraction(1, 2):
        checks.append(series_check("closed-form mgf", f0, hahn_mgf(s, order), order))
    closed = ClosedFormRecurrence(
        IndexRatio.const((s - 1) * a),
        IndexRatio(
            Fraction(1, 4) * a * a * IndexPoly([2 - lam, lam]) * IndexPoly([2 + lam * s - lam, lam]) * IndexPoly([s, -1]),
            IndexPoly([1 - lam, lam]) * IndexPoly([1, lam]),
        ),
    )
    ensure(checks, strict)
    return FamilyResult("hahn", gop, rec, f0, closed, checks, ultra.core)


# -- the two-parameter deformation ------------------------------------------------------


def jacobi_closed_form(p: JacobiParams) -> ClosedFormRecurrence:
    lam, kappa, beta, a, r = p.lam, p.kappa, p.beta, p.a, p.r
    theta = IndexPoly.theta()
    one = IndexPoly.const(1)
    a_fn = IndexRatio.const(r * a) + IndexRatio(
        (1 - r) * a * IndexPoly([1 - kappa, 2 * kappa]) + (1 - r) * a * lam * kappa * theta * theta,
        IndexPoly([1 - kappa, kappa]) * IndexPoly([1, kappa]),
    )
    bpart = IndexRatio(
        Fraction(1, 4) * lam * a * a * IndexPoly([2, lam])
        * (r * IndexPoly([1, kappa]) + (1 - r) * IndexPoly([1 + lam, lam])),
        IndexPoly([1 + lam, lam]) * IndexPoly([1, kappa]),
    )
    fr = IndexRatio(IndexPoly([1, beta]), IndexPoly([1, lam]) * IndexPoly([1, kappa]))
    b_fn = (bpart * fr).shift(-1)
    return ClosedFormRecurrence(a_fn, b_fn)


def jacobi_split_displays(p: JacobiParams, nw: int) -> tuple[OpMatrix, OpMatrix]:
    lam, kappa, a = p.lam, p.kappa, p.a
    lam_part = (
        x_times([1 / (1 + lam * n) for n in range(nw + 1)], nw)
        + OpMatrix.diag_op([a] * (nw + 1), nw)
        + coeff_then_d(
            [lam * a * a / 4 * (2 + lam * n) / (1 + lam * (n + 1)) for n in range(nw + 1)], nw
        )
    )
    # The kappa-part constant is a*(1-kappa)/(1-kappa) at theta=0: the
    # cancellation lives in the parameter, so its value there is a even when
    # kappa=1 makes the written form 0/0.
    def kappa_const(n):
        if n == 0:
            return a
        return (
            a * (1 + kappa * (2 * n - 1) + lam * kappa * n * n)
            / ((1 + kappa * (n - 1)) * (1 + kappa * n))
        )

    kappa_part = (
        x_times([1 / (1 + kappa * n) for n in range(nw + 1)], nw)
        + OpMatrix.diag_op([kappa_const(n) for n in range(nw + 1)], nw)
        + coeff_then_d(
            [lam * a * a / 4 * (2 + lam * n) / (1 + kappa * n) for n in range(nw + 1)], nw
        )
    )
    return lam_part, kappa_part


def jacobi_mgf_forms(p: JacobiParams, order: int) -> tuple[TruncSeries, TruncSeries]:
    """The two product-form expressions for the moment series: the
    ratio-weighted central-binomial sum and the hypergeometric-style one."""
    lam, kappa, beta, a = p.lam, p.kappa, p.beta, p.a
    fvals = DiagSeq.from_ratio(
        lambda n: (1 + beta * n) / ((1 + lam * n) * (1 + kappa * n)), order + 1, strict=False
    )
    coeffs = []
    binom = Fraction(1)  # binom(2/lam + 2n, n) rebuilt per n below
    for n in range(order + 1):
        binom = Fraction(1)
        for j in range(1, n + 1):
            binom = binom * (2 / lam + n + j) / j
        coeffs.append(fvals[n] / (1 + lam * n) * binom * (lam * a / 2) ** n)
    form1 = TruncSeries(coeffs)
    moments = [Fraction(1)]
    for n in range(order):
        moments.append(moments[-1] * 2 * a * (1 + beta * n) / (2 + kappa * n))
    form2 = TruncSeries(moments).borel()
    return form1, form2


def jacobi_a_values(p: JacobiParams, count: int) -> list:
    """Diagonal coefficients of the dual raising operator; the index-0 value
    is a by parameter continuity (the display is 0/0 there when kappa=1)."""
    closed = jacobi_closed_form(p)
    return [p.a if n == 0 else closed.a_fn(n) for n in range(count)]


def jacobi_family(p: JacobiParams, order: int, margin: int = FAMILY_MARGIN, strict: bool = True) -> FamilyResult:
    nw = order + margin
    p.guard(nw)
    lam, kappa, beta, a = p.lam, p.kappa, p.beta, p.a
    f = riccati_series(lam, a, p.b, nw)
    fprime = (1 + lam * a * f + lam * p.b * (f * f)).truncate(nw)
    core = sheffer_core(f, fprime, lam, nw)
    checks = conjugation_trick_checks(core, lam, order)
    checks += conjugation_trick_checks(core, kappa, order)
    ratio = lambda n: (1 + beta * n) / ((1 + lam * n) * (1 + kappa * n))
    fvals = DiagSeq.from_ratio(ratio, nw + 1, strict=False)
    gop = diag_values(fvals, nw, inverse=True) @ core.inner @ diag_values(fvals, nw)
    u, rec = _extract(gop)
    closed = jacobi_closed_form(p)
    expected_u = (
        OpMatrix.x_op(nw)
        + OpMatrix.diag_op(jacobi_a_values(p, nw + 1), nw)
        + d_then_coeff([Fraction(0)] + [closed.b_fn(n) for n in range(1, nw + 1)], nw)
    )
    checks.append(op_check("dual raising closed form", u, expected_u, order))
    # affine split of the conjugated generator x (F_{theta+1}/F_theta)
    lam_part, kappa_part = jacobi_split_displays(p, nw)
    combo = core.conjugate_generator(x_times([ratio(n) for n in range(nw + 1)], nw))
    split = lam_part.scale(p.r) + kappa_part.scale(1 - p.r)
    checks.append(op_check("three-term split", combo, split, order))
    f0, pipe = _mgf_pipeline_check("jacobi", gop, rec, order)
    checks.append(pipe)
    form1, form2 = jacobi_mgf_forms(p, order)
    checks.append(series_check("mgf ratio-sum form", f0, form1, order))
    checks.append(series_check("mgf product form", f0, form2, order))
    ensure(checks, strict)
    return FamilyResult("jacobi", gop, rec, f0, closed, checks, core)


def jacobi_diffeq_op(p: JacobiParams, order: int, margin: int = FAMILY_MARGIN, strict: bool = True):
    """(1 + lam theta)^2 conjugated by the family operator: the closed form
    (1+lam theta)^2 - (2 a lam^2/kappa)(1+beta theta) D and its eigen-action."""
    fam = jacobi_family(p, order, margin, strict)
    nw = fam.gop.nw
    lam, kappa, beta, a = p.lam, p.kappa, p.beta, p.a
    sq = OpMatrix.diag_op([(1 + lam * n) ** 2 for n in range(nw + 1)], nw)
    lhs = fam.gop @ sq @ fam.gop.inverse()
    rhs = sq - coeff_then_d([2 * a * lam * lam / kappa * (1 + beta * n) for n in range(nw + 1)], nw)
    checks = [op_check("second-order operator closed form", lhs, rhs, order)]
    for n in range(min(order, lhs.reliable) + 1):
        col = lhs.apply_poly(fam.gop.column_poly(n))
        expected = [(1 + lam * n) ** 2 * v for v in fam.gop.column_poly(n)]
        if col != expected:
            checks.append(flag_check("eigen-action", False, f"column {n}"))
            break
    else:
        checks.append(flag_check("eigen-action", True))
    # omega'(y)^(-2) = 1 - 2 lam a y
    omega_prime = fam.core.omega.derivative()
    checks.append(
        series_check(
            "omega derivative closed form",
            (1 / omega_prime) * (1 / omega_prime),
            TruncSeries.from_polynomial([1, -2 * lam * a], nw - 1),
        )
    )
    ensure(checks, strict)
    return lhs, fam, checks


# -- the mixed deformation ---------------------------------------------------------------


def wilson_family(p: WilsonParams, order: int, margin: int = FAMILY_MARGIN, strict: bool = True) -> FamilyResult:
    nw = order + margin
    p.guard(nw)
    lam, kappa, beta = p.lam, p.kappa, p.beta
    a, h = p.a, p.h
    f = riccati_series(lam, a, lam * a * a / 4, nw)
    fprime = (1 + lam * a * f + lam * (lam * a * a / 4) * (f * f)).truncate(nw)
    core = sheffer_core(f, fprime, lam, nw)
    checks = conjugation_trick_checks(core, lam, order)
    hvals = DiagSeq.from_ratio(p.mixing_ratio, nw + 1, strict=False)
    ells = [2 * a * h * lam * lam / kappa * (1 + k) * (1 + beta * k) for k in range(nw)]
    c2 = OpMatrix.shifted_product(ells, nw)
    gop = c2 @ diag_values(hvals, nw, inverse=True) @ core.inner @ diag_values(hvals, nw)
    u, rec = _extract(gop)
    up, down = u.band_profile(order)
    checks.append(flag_check("raising operator tridiagonal", up <= 1 and down <= 1, f"band ({up},{down})"))
    # bracket identity
    bracket = diag_values(hvals, nw) @ c2.inverse() @ OpMatrix.x_op(nw) @ c2 @ diag_values(hvals, nw, inverse=True)
    display = x_times([p.mixing_ratio(n) for n in range(nw + 1)], nw) - OpMatrix.diag_op(
        [2 * a * h * lam * lam / kappa * (1 + n) * (1 + beta * n) for n in range(nw + 1)], nw
    )
    checks.append(op_check("bracket identity", bracket, display, order))
    f0, pipe = _mgf_pipeline_check("wilson", gop, rec, order)
    checks.append(pipe)
    if h == 0:
        reduction = jacobi_family(p.jacobi("betat"), order, margin, strict)
        checks.append(op_check("h=0 reduction", gop, reduction.gop, order))
    ensure(checks, strict)
    return FamilyResult("wilson", gop, rec, f0, None, checks, core)


# -- the higher-order generalization --------------------------------------------------------


def multiterm_family(p: MultiTermParams, order: int, margin: int = FAMILY_MARGIN, strict: bool = True) -> FamilyResult:
    nw = order + margin
    p.guard(nw)
    n, lam, a = p.n, p.lam, p.a
    f = power_law_ode_series(n, lam, a, nw)
    fprime = TruncSeries.one(nw)
    base = 1 + (lam * a / n) * f
    for _ in range(n):
        fprime = (fprime * base).truncate(nw)
    core = sheffer_core(f, fprime, lam, nw)
    checks = conjugation_trick_checks(core, lam, min(order, 8))
    qvals = DiagSeq.from_ratio(p.ratio, nw + 1, strict=False)
    inner = diag_values(qvals, nw, inverse=True) @ core.inner @ diag_values(qvals, nw)
    if p.extended:
        cconst = -p.t[n] * lam * a * Fraction(n ** (n - 1), (n - 1) ** (n - 1))
        delta = ((exp_series(cconst, nw) - 1) / cconst) if cconst != 0 else TruncSeries.x(nw)
        c_delta = OpMatrix.umbral_compose(delta, nw)
        gop = c_delta @ inner
    else:
        gop = inner
    u = gop.inverse() @ OpMatrix.x_op(gop.nw) @ gop
    band = u.band_profile(order)
    checks.append(
        flag_check(
            f"band profile (1,{n - 1})", band == (1, n - 1), f"got {band}"
        )
    )
    # algebraic relation for the inverse transform:
    # (1 - 1/omega')(1/omega' + n - 1)^(n-1) = n^(n-1) lam a y
    w = 1 / core.omega.derivative()
    rel = (1 - w)
    powterm = w + (n - 1)
    acc = rel
    for _ in range(n - 1):
        acc = (acc * powterm).truncate(w.order)
    target = TruncSeries.from_polynomial([0, Fraction(n ** (n - 1)) * lam * a], w.order)
    checks.append(series_check("omega algebraic relation", acc, target, min(order, w.order)))
    # P(y) = (n-1)^(n-1) + (y-1)(y+n-1)^(n-1): P(0) = 0 and P(1/omega') closed form
    pcoeffs = [Fraction((n - 1) ** (n - 1))]
    factor = [Fraction(n - 1), Fraction(1)]
    acc_poly = [Fraction(-1), Fraction(1)]
    for _ in range(n - 1):
        acc_poly = poly_mul(acc_poly, factor)
    pcoeffs = [pcoeffs[0] + acc_poly[0]] + acc_poly[1:]
    checks.append(value_check("P(0) = 0", pcoeffs[0], Fraction(0)))
    pw = TruncSeries.constant(pcoeffs[0], w.order)
    wpow = TruncSeries.one(w.order)
    for c in pcoeffs[1:]:
        wpow = (wpow * w).truncate(w.order)
        pw = pw + c * wpow
    checks.append(
        series_check(
            "P(1/omega') closed form",
            pw,
            TruncSeries.from_polynomial(
                [Fraction((n - 1) ** (n - 1)), -Fraction(n ** (n - 1)) * lam * a], w.order
            ),
        )
    )
    try:
        at, bt = u.three_term(min(order, u.reliable))
        rec = Recurrence(tuple(at), tuple(bt))
    except Exception:
        rec = Recurrence((Fraction(0),), ())
    f0 = mgf_from_gop(gop)
    ensure(checks, strict)
    return FamilyResult("multiterm", gop, rec, f0, None, checks, core)


# -- generator band probes ---------------------------------------------------------------


def comment_generator_bands(p: JacobiParams, order: int, margin: int = FAMILY_MARGIN):
    """Band profiles of the established generators (which must be tridiagonal
    after conjugation) and of the harder probe operators (reported only)."""
    nw = order + margin
    p.guard(nw)
    lam, kappa, a = p.lam, p.kappa, p.a
    f = riccati_series(lam, a, p.b, nw)
    fprime = (1 + lam * a * f + lam * p.b * (f * f)).truncate(nw)
    core = sheffer_core(f, fprime, lam, nw)
    established = {
        "x/(1+lam theta)": x_times([1 / (1 + lam * k) for k in range(nw + 1)], nw),
        "x/(1+kappa theta)": x_times([1 / (1 + kappa * k) for k in range(nw + 1)], nw),
        "x - 2 lam a theta": OpMatrix.x_op(nw) - OpMatrix.diag_op([2 * lam * a * k for k in range(nw + 1)], nw),
        "x(1+lam theta) - lam a(2-lam+2 lam theta)theta": (
            x_times([1 + lam * k for k in range(nw + 1)], nw)
            - OpMatrix.diag_op([a * lam * (2 - lam + 2 * lam * k) * k for k in range(nw + 1)], nw)
        ),
    }
    out = []
    for name, t in established.items():
        band = core.conjugate_generator(t).band_profile(order)
        out.append((name, band, band <= (1, 1)))
    omega_prime = core.omega.derivative()
    inv_wp = (1 / omega_prime).truncate(nw - 1)
    probes = {
        "x/omega'(D)": OpMatrix.x_op(nw) @ OpMatrix.series_of_d(TruncSeries.from_polynomial(list(inv_wp.coeffs), nw), nw),
    }
    for name, t in probes.items():
        band = core.conjugate_generator(t).band_profile(min(order, nw - 2))
        out.append((name, band, None))
    return out
