"""Three-term recurrences: polynomials, numerators, moments, continued
fractions, inner products, kernel deformation, tails, and index duality.

Conventions.  The canonical dual raising operator is x + a_theta + D b_theta
with the b-sequence to the *right* of D, so the monic recurrence reads

    p_{n+1}(x) = (x - a_n) p_n(x) - n b_n p_{n-1}(x)

and the squared norm of p_n is n! * b_1 ... b_n.  Displays with D on the
other side are converted through the shift rule h_theta D = D h_{theta-1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ClosedFormRequired,
    DegenerateB,
    NodeAtZeroOfP,
    NotPolynomialCoefficients,
    OrderExhausted,
)
from .indexfn import IndexPoly, IndexRatio
from .opalg import OpMatrix
from .series import TruncSeries, as_rat

Poly = list  # univariate polynomial, low degree first


# -- polynomial helpers -------------------------------------------------------


def poly_mul(p: Sequence, q: Sequence) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b != 0:
                out[i + j] += a * b
    return out


def poly_add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return [
        (p[i] if i < len(p) else Fraction(0)) + (q[i] if i < len(q) else Fraction(0))
        for i in range(n)
    ]


def poly_scale(p: Sequence, c) -> Poly:
    c = as_rat(c)
    return [c * v for v in p]


def poly_eval(p: Sequence, x) -> Fraction:
    x = as_rat(x)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_trim(p: Sequence) -> Poly:
    out = list(p)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


# -- recurrence data ----------------------------------------------------------


@dataclass(frozen=True)
class Recurrence:
    """List-backed coefficients a_0..a_D and b_1..b_D (b may contain zeros,
    in which case the family is flagged degenerate but still runnable)."""

    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(as_rat(v) for v in self.a))
        object.__setattr__(self, "b", tuple(as_rat(v) for v in self.b))

    @property
    def depth(self) -> int:
        return min(len(self.a) - 1, len(self.b))

    def a_at(self, n: int) -> Fraction:
        return self.a[n]

    def b_at(self, n: int) -> Fraction:
        return self.b[n - 1]

    @property
    def degenerate(self) -> bool:
        return any(v == 0 for v in self.b)

    def norm_products(self, upto: int) -> list:
        """B_n = b_1 ... b_n for 0 <= n <= upto."""
        out = [Fraction(1)]
        for n in range(1, upto + 1):
            out.append(out[-1] * self.b_at(n))
        return out

    def shift(self, k: int) -> "Recurrence":
        """Integer association: a_n -> a_{n+k}, b_n -> (k+n) b_{k+n} / n."""
        if k == 0:
            return self
        a = self.a[k:]
        b = tuple(Fraction(k + n) * self.b[k + n - 1] / n for n in range(1, len(self.b) - k + 1))
        return Recurrence(a, b)

    def to_json(self) -> dict:
        return {"a": [str(v) for v in self.a], "b": [str(v) for v in self.b]}

    @classmethod
    def from_json(cls, data: dict) -> "Recurrence":
        return cls(tuple(data["a"]), tuple(data["b"]))


@dataclass(frozen=True)
class ClosedFormRecurrence:
    """Coefficients as rational functions of the index, so the recurrence can
    be associated by any rational shift and compared exactly."""

    a_fn: IndexRatio
    b_fn: IndexRatio

    def truncate(self, depth: int) -> Recurrence:
        return Recurrence(
            tuple(self.a_fn(n) for n in range(depth + 1)),
            tuple(self.b_fn(n) for n in range(1, depth + 1)),
        )

    def assoc(self, c) -> "ClosedFormRecurrence":
        c = as_rat(c)
        if c == 0:
            return self
        theta = IndexPoly.theta()
        shifted_b = self.b_fn.shift(c)
        b_new = IndexRatio(
            IndexPoly([c, Fraction(1)]) * shifted_b.num,
            theta * shifted_b.den,
        )
        return ClosedFormRecurrence(self.a_fn.shift(c), b_new)

    def equals(self, other: "ClosedFormRecurrence") -> bool:
        return self.a_fn.equals(other.a_fn) and self.b_fn.equals(other.b_fn)


def assoc_recurrence(rec, c):
    """Associated (corecursive) recurrence for rational or integer order c."""
    c = as_rat(c)
    if isinstance(rec, ClosedFormRecurrence):
        return rec.assoc(c)
    if c.denominator != 1 or c < 0:
        raise ClosedFormRequired("list-backed recurrences support only nonnegative integer association")
    return rec.shift(int(c))


# -- polynomials and numerators -------------------------------------------------


@dataclass
class OrthoFamily:
    polys: list      # p_0..p_N as coefficient lists
    numerators: list  # R_0..R_N
    reversed_q: list  # Q_0..Q_N with p_n(x) = x^n Q_n(1/x)
    norms: list      # n! B_n

    @property
    def size(self) -> int:
        return len(self.polys) - 1

    def poly_eval(self, n: int, x) -> Fraction:
        return poly_eval(self.polys[n], x)

    def gop(self, nw: int) -> OpMatrix:
        """Operator sending x^n to p_n(x)."""
        if nw > self.size:
            raise OrderExhausted("family too short for requested working order")
        m = [[Fraction(0)] * (nw + 1) for _ in range(nw + 1)]
        for n in range(nw + 1):
            for i, c in enumerate(self.polys[n]):
                m[i][n] = c
        return OpMatrix(m, nw, 0, nw)

    def to_json(self) -> dict:
        return {
            "polys": [[str(c) for c in p] for p in self.polys],
            "numerators": [[str(c) for c in p] for p in self.numerators],
            "norms": [str(v) for v in self.norms],
        }


def polys_from_recurrence(rec: Recurrence, upto: int, cross_check: bool = True) -> OrthoFamily:
    """Monic family plus numerator/denominator convergent polynomials.

    Computed by the direct three-term recurrences; when `cross_check` is on
    the 2x2 matrix-product form of the convergents is evaluated as well and
    must agree entry for entry.
    """
    if upto > rec.depth:
        raise OrderExhausted(f"recurrence depth {rec.depth} below requested {upto}")
    r = [[Fraction(0)], [Fraction(0), Fraction(1)]]
    q = [[Fraction(1)], [Fraction(1), -rec.a_at(0)]]
    for n in range(1, upto):
        lin = [Fraction(1), -rec.a_at(n)]
        quad = [Fraction(0), Fraction(0), -Fraction(n) * rec.b_at(n)]
        r.append(poly_add(poly_mul(r[n], lin), poly_mul(quad, r[n - 1])))
        q.append(poly_add(poly_mul(q[n], lin), poly_mul(quad, q[n - 1])))
    r = [poly_trim(v) for v in r[: upto + 1]]
    q = [poly_trim(v) for v in q[: upto + 1]]
    polys = []
    for n in range(upto + 1):
        rev = [Fraction(0)] * (n + 1)
        for i, c in enumerate(q[n]):
            rev[n - i] = c
        polys.append(rev)
    if cross_check and upto >= 1:
        top = [[Fraction(0)], [Fraction(0), Fraction(1)]]
        bot = [[Fraction(0), -rec.b_at(1)], [Fraction(1), -rec.a_at(0)]]
        for n in range(2, upto + 1):
            step_tl = [Fraction(0)]
            step_tr = [Fraction(0), Fraction(1)]
            step_bl = [Fraction(0), -Fraction(n) * rec.b_at(n)]
            step_br = [Fraction(1), -rec.a_at(n - 1)]
            new_top = [
                poly_add(poly_mul(top[0], step_tl), poly_mul(top[1], step_bl)),
                poly_add(poly_mul(top[0], step_tr), poly_mul(top[1], step_br)),
            ]
            new_bot = [
                poly_add(poly_mul(bot[0], step_tl), poly_mul(bot[1], step_bl)),
                poly_add(poly_mul(bot[0], step_tr), poly_mul(bot[1], step_br)),
            ]
            top, bot = new_top, new_bot
            if poly_trim(top[1]) != r[n] or poly_trim(bot[1]) != q[n]:
                raise AssertionError(f"matrix-product convergent disagrees at level {n}")
    norms = [math.factorial(n) * bn for n, bn in enumerate(rec.norm_products(upto))]
    return OrthoFamily(polys, r, q, norms)


def determinant_identity_holds(fam: OrthoFamily, rec: Recurrence, n: int) -> bool:
    """R_{n+1} Q_n - R_n Q_{n+1} == n! B_n x^(2n+1)."""
    lhs = poly_add(
        poly_mul(fam.numerators[n + 1], fam.reversed_q[n]),
        poly_scale(poly_mul(fam.numerators[n], fam.reversed_q[n + 1]), -1),
    )
    expected = [Fraction(0)] * (2 * n + 1) + [fam.norms[n]]
    return poly_trim(lhs) == poly_trim(expected)


# -- moments ------------------------------------------------------------------


@dataclass
class MomentSeries:
    f0: TruncSeries   # exponential-type generating function, f0(0) = 1
    moment_gf: TruncSeries  # ordinary generating function of the moments

    @property
    def moments(self) -> tuple:
        return self.moment_gf.coeffs


def moments_from_recurrence(rec: Recurrence, order: int) -> MomentSeries:
    """Moment generating function to the given order via a deep convergent.

    The convergent R_m/(x Q_m) matches the moment series through order
    2m - 1, so m is chosen with 2m > order.  Degenerate (b = 0) recurrences
    terminate the continued fraction early and are fine here.
    """
    m = order // 2 + 1
    usable = min(m, rec.depth)
    fam = polys_from_recurrence(rec, usable, cross_check=False)
    if usable < m:
        # the fraction terminated early only if the missing b's are zero
        if not rec.degenerate:
            raise OrderExhausted(f"recurrence depth {rec.depth} cannot reach order {order}")
    num = fam.numerators[usable]
    den = fam.reversed_q[usable]
    num_series = TruncSeries.from_polynomial(num, order + 1).shift_down(1)
    den_series = TruncSeries.from_polynomial(den, order)
    gf = (num_series / den_series).truncate(order)
    return MomentSeries(gf.borel(), gf)


def recurrence_from_moments(moment_gf: TruncSeries, depth: Optional[int] = None) -> Recurrence:
    """Peel the continued fraction 1/t_n = 1 - a_n x - (n+1) b_{n+1} x^2 t_{n+1}.

    Raises DegenerateB with the failing depth when a quadratic coefficient
    vanishes (finitely supported or defective functional).
    """
    if moment_gf.coefficient(0) != 1:
        raise DegenerateB(0)
    limit = (moment_gf.order - 1) // 2 if depth is None else depth
    a, b = [], []
    t = moment_gf
    n = 0
    while t.order >= 2 and n < limit:
        u = 1 / t
        a_n = -u.coefficient(1)
        a.append(a_n)
        rem = 1 - TruncSeries.from_polynomial([0, a_n], u.order) - u
        coeff = rem.coefficient(2)
        if coeff == 0:
            raise DegenerateB(n + 1)
        b.append(coeff / (n + 1))
        t = rem.shift_down(2) / coeff
        n += 1
    if t.order >= 1 and len(a) == len(b):
        a.append(-(1 / t).coefficient(1))
    return Recurrence(tuple(a), tuple(b))


# -- inner products --------------------------------------------------------------


def inner_product(h1: Sequence, h2: Sequence, f0: TruncSeries) -> Fraction:
    """<h1, h2> = sum_k mu_k [x^k](h1 h2), with mu_k = k! [y^k] f0."""
    prod = poly_mul(list(h1), list(h2))
    if len(prod) - 1 > f0.order:
        raise OrderExhausted("moment series too short for this product degree")
    acc = Fraction(0)
    fact = 1
    for k, c in enumerate(prod):
        if c != 0:
            acc += c * f0.coeffs[k] * fact
        fact *= k + 1
    return acc


def gram_matrix(fam: OrthoFamily, f0: TruncSeries, upto: int) -> list:
    return [
        [inner_product(fam.polys[i], fam.polys[j], f0) for j in range(upto + 1)]
        for i in range(upto + 1)
    ]


# -- the dual series family --------------------------------------------------------


def fn_family(fam: OrthoFamily, f0: TruncSeries, upto: int, verify: bool = True) -> list:
    """The series f_n = p_n(d/dy) f0 / B_n, each in y^n + y^(n+1)C[[y]].

    With verify on, the exponential expansion e^{xy} = sum p_n(x) f_n(y)/n!
    and the addition theorem f0(y+t) = sum (B_n/n!) f_n(y) f_n(t) are checked
    on the accessible truncation block.
    """
    fns = []
    for n in range(upto + 1):
        acc = TruncSeries.zero(f0.order - n)
        deriv = f0
        for k, c in enumerate(fam.polys[n]):
            if c != 0:
                acc = acc + c * deriv.truncate(f0.order - n)
            if k < len(fam.polys[n]) - 1:
                deriv = deriv.derivative()
        b_n = fam.norms[n] / math.factorial(n)
        fn = acc / b_n
        if verify:
            if any(fn.coeffs[i] != 0 for i in range(min(n, fn.order + 1))):
                raise AssertionError(f"f_{n} has terms below y^{n}")
            if fn.order >= n and fn.coeffs[n] != 1:
                raise AssertionError(f"f_{n} is not monic at y^{n}")
        fns.append(fn)
    if verify:
        _verify_exponential_expansion(fam, fns, upto)
        _verify_addition_theorem(fam, f0, fns, upto)
    return fns


def _verify_exponential_expansion(fam: OrthoFamily, fns: list, upto: int):
    """Coefficient of x^a y^b in sum_n p_n(x) f_n(y)/n! must be [a==b]/a!."""
    for a in range(upto + 1):
        for b in range(a, upto + 1):
            acc = Fraction(0)
            for n in range(a, min(b, upto) + 1):
                pa = fam.polys[n][a] if a < len(fam.polys[n]) else Fraction(0)
                if pa != 0 and b <= fns[n].order:
                    acc += pa * fns[n].coeffs[b] / math.factorial(n)
            expected = Fraction(1, math.factorial(a)) if a == b else Fraction(0)
            if acc != expected:
                raise AssertionError(f"exponential expansion fails at x^{a} y^{b}")


def _verify_addition_theorem(fam: OrthoFamily, f0: TruncSeries, fns: list, upto: int, t_degree: int = 4):
    """f0(y+t) = sum_n (B_n/n!) f_n(y) f_n(t), compared through t^t_degree.

    The t^j coefficient of the left side is f0^(j)(y)/j!, i.e. binom(i+j,j)
    times the (i+j)-th coefficient of f0; only terms with n <= j contribute
    on the right because f_n has valuation n.
    """
    t_degree = min(t_degree, upto, f0.order // 2)
    for j in range(t_degree + 1):
        for i in range(f0.order - j + 1):
            lhs = math.comb(i + j, j) * f0.coeffs[i + j]
            acc = Fraction(0)
            for n in range(j + 1):
                b_n = fam.norms[n] / math.factorial(n)
                acc += b_n / math.factorial(n) * fns[n].coeffs[i] * fns[n].coeffs[j]
            if lhs != acc:
                raise AssertionError(f"addition theorem fails at y^{i} t^{j}")


# -- Christoffel-Darboux ------------------------------------------------------------


def cd_kernel_identity_holds(fam: OrthoFamily, n: int) -> bool:
    """(x-y) * sum_k (n! B_n / k! B_k) p_k(x) p_k(y) equals
    p_n(y) p_{n+1}(x) - p_{n+1}(y) p_n(x), as bivariate polynomials.

    Multiplying the kernel sum by (x-y) instead of dividing the right side
    keeps everything polynomial."""
    size = n + 2  # max degree in either variable after multiplying by (x-y)
    acc = [[Fraction(0)] * (size + 1) for _ in range(size + 1)]
    for k in range(n + 1):
        w = fam.norms[n] / fam.norms[k]
        for i, ci in enumerate(fam.polys[k]):
            if ci == 0:
                continue
            for j, cj in enumerate(fam.polys[k]):
                if cj != 0:
                    acc[i][j] += w * ci * cj
    lhs = [[Fraction(0)] * (size + 1) for _ in range(size + 1)]
    for i in range(size):
        for j in range(size):
            v = acc[i][j]
            if v != 0:
                lhs[i + 1][j] += v
                lhs[i][j + 1] -= v
    rhs = [[Fraction(0)] * (size + 1) for _ in range(size + 1)]
    for j, cy in enumerate(fam.polys[n]):
        for i, cx in enumerate(fam.polys[n + 1]):
            rhs[i][j] += cy * cx
    for j, cy in enumerate(fam.polys[n + 1]):
        for i, cx in enumerate(fam.polys[n]):
            rhs[i][j] -= cy * cx
    return lhs == rhs


@dataclass
class KernelDeformation:
    gop: OpMatrix
    a: list
    b: list
    expected_a: list
    expected_b: list


def christoffel_darboux(fam: OrthoFamily, rec: Recurrence, y0, nw: int) -> KernelDeformation:
    """Deformed family operator G . diag(p(y0)/B) (1-D)^(-1) diag(B/p(y0)),
    with its extracted three-term data against the closed-form display."""
    y0 = as_rat(y0)
    values = []
    for n in range(nw + 3):
        if n >= len(fam.polys):
            raise OrderExhausted("family too short for kernel deformation")
        v = fam.poly_eval(n, y0)
        if v == 0 and n <= nw + 2:
            raise NodeAtZeroOfP(f"p_{n}(y0) = 0")
        values.append(v)
    b_prod = [fam.norms[n] / math.factorial(n) for n in range(nw + 1)]
    diag = [values[n] / b_prod[n] for n in range(nw + 1)]
    geom = OpMatrix.series_of_d(TruncSeries.from_function(lambda i: 1, nw), nw)
    gq = (
        fam.gop(nw)
        @ OpMatrix.diag_op(diag, nw)
        @ geom
        @ OpMatrix.diag_op([1 / v for v in diag], nw)
    )
    u = gq.inverse() @ OpMatrix.x_op(nw) @ gq
    a, b = u.three_term()
    expected_a = [
        rec.a_at(n + 1) - values[n + 1] / values[n] + values[n + 2] / values[n + 1]
        for n in range(len(a))
    ]
    expected_b = [
        values[n + 1] * values[n - 1] * rec.b_at(n) / values[n] ** 2
        for n in range(1, len(b) + 1)
    ]
    return KernelDeformation(gq, a, b, expected_a, expected_b)


# -- numerator functional -------------------------------------------------------------


def numerator_functional_holds(fam: OrthoFamily, f0: TruncSeries, n: int) -> bool:
    """y^n R_n(1/y) equals the moment functional applied to the divided
    difference (p_n(x) - p_n(y))/(x - y) in x."""
    p = fam.polys[n]
    rhs = [Fraction(0)] * max(n, 1)
    fact = [math.factorial(k) for k in range(len(p))]
    for k in range(1, len(p)):
        c = p[k]
        if c == 0:
            continue
        for i in range(k):
            j = k - 1 - i
            mu_i = f0.coeffs[i] * fact[i] if i <= f0.order else None
            if mu_i is None:
                raise OrderExhausted("moment series too short")
            rhs[j] += c * mu_i
    lhs = [Fraction(0)] * max(n, 1)
    for k, c in enumerate(fam.numerators[n]):
        if c != 0:
            lhs[n - k] = c
    return poly_trim(lhs) == poly_trim(rhs)


# -- continued-fraction tails ----------------------------------------------------------


def cf_tails(rec: Recurrence, c: int, order: int) -> list:
    """Tail generating functions F_0..F_c, each in y^k + y^(k+1)C[[y]].

    F_k/(y F_{k-1}) continues the fraction from level k (with F_{-1} = 1/y),
    so F_k = y F_{k-1} T_k where T_k is the moment generating function of the
    k-shifted recurrence.
    """
    tails = []
    prev = None
    for k in range(c + 1):
        t_k = moments_from_recurrence(rec.shift(k), order).moment_gf
        if k == 0:
            cur = t_k
        else:
            cur = (prev * t_k).shift_up(1)
        tails.append(cur)
        prev = cur
    return tails


def assoc_mgf_from_tails(rec: Recurrence, c: int, order: int) -> TruncSeries:
    """f0(y, c) = theta!^(-1) F_c / (y F_{c-1})."""
    if c == 0:
        return moments_from_recurrence(rec, order).f0
    return moments_from_recurrence(rec.shift(c), order).moment_gf.borel()


# -- index-shift operator identity -------------------------------------------------------


def assoc_one_identity_holds(rec: Recurrence, nw: int) -> bool:
    """The operator moment_gf(L) . L . G . x sends x^n to the n-th polynomial
    of the first associated family, checked column by column."""
    fam = polys_from_recurrence(rec, min(rec.depth, 2 * nw))
    gf = moments_from_recurrence(rec, nw).moment_gf
    op = assoc_one_from_moment_operator(fam, gf, nw)
    assoc_fam = polys_from_recurrence(rec.shift(1), min(rec.depth - 1, nw))
    for n in range(min(op.reliable, assoc_fam.size) + 1):
        col = op.apply_poly([0] * n + [1])
        if col[: n + 1] != assoc_fam.polys[n] or any(v != 0 for v in col[n + 1 :]):
            return False
    return True


def assoc_one_from_moment_operator(fam: OrthoFamily, moment_gf: TruncSeries, nw: int) -> OpMatrix:
    """The first associated family operator written through the 0-derivative:
    moment_gf(L) . L . G . x."""
    if moment_gf.order < nw:
        raise OrderExhausted("moment series must reach the working order")
    l = OpMatrix.l_op(nw)
    f0_of_l = OpMatrix.identity(nw).scale(moment_gf.coefficient(0))
    power = OpMatrix.identity(nw)
    for k in range(1, min(moment_gf.order, nw) + 1):
        power = power @ l
        ck = moment_gf.coefficient(k)
        if ck != 0:
            f0_of_l = f0_of_l + power.scale(ck)
    return f0_of_l @ l @ fam.gop(nw) @ OpMatrix.x_op(nw)


# -- duality ------------------------------------------------------------------------------


def dual_coefficients(coeffs: dict) -> dict:
    """Index duality on closed-form recurrence coefficients:
    the k-th coefficient function a^k(theta) maps to (-1)^k a^k(k-1-theta)."""
    out = {}
    for k, fn in coeffs.items():
        if not isinstance(fn, IndexRatio):
            raise NotPolynomialCoefficients("duality needs closed-form index functions")
        flipped = fn.substitute(IndexPoly([Fraction(k - 1), Fraction(-1)]))
        out[k] = flipped * Fraction((-1) ** k)
    return out


def dual_recurrence(cf: ClosedFormRecurrence) -> ClosedFormRecurrence:
    d = dual_coefficients({0: cf.a_fn, 1: cf.b_fn})
    return ClosedFormRecurrence(d[0], d[1])


def dual_identity_check(cf: ClosedFormRecurrence, terms: int = 8) -> bool:
    """The negative-index series of a family is the moment tail of its dual:
    both sides of sum_n n! B-hat_n / (p-hat_n p-hat_{n+1}) expanded in 1/x
    against the dual family's moment coefficients, to `terms` terms."""
    dual = dual_recurrence(cf)
    rec = dual.truncate(terms + 6)
    fam = polys_from_recurrence(rec, terms + 4)
    gf = moments_from_recurrence(rec, terms + 3).moment_gf
    lhs = tail_from_moment_gf(gf, terms)
    rhs = tail_from_partial_fractions(fam, terms)
    return lhs.coeffs == rhs.coeffs


@dataclass
class LaurentTail:
    """Finite expansion c_0/x + c_1/x^2 + ... of a formal tail at infinity."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_rat(v) for v in self.coeffs))

    def to_json(self) -> dict:
        return {"inv_x_coeffs": [str(v) for v in self.coeffs]}


def tail_from_moment_gf(moment_gf: TruncSeries, terms: int) -> LaurentTail:
    """x^(-1) F(x^(-1)) = sum mu_n x^(-n-1)."""
    if moment_gf.order < terms - 1:
        raise OrderExhausted("moment series too short for requested tail")
    return LaurentTail(moment_gf.coeffs[:terms])


def negative_index_tail(rec: Recurrence, n: int, terms: int, order: int = None) -> LaurentTail:
    """Formal negative-index series y^(-1) F_n(1/y) of the n-th tail, i.e.
    the coefficient list of x^(-k-1); the Laplace-integral reading of the
    same object is out of scope and only this formal identity is shipped."""
    order = terms + n if order is None else order
    f_n = cf_tails(rec, n, order)[n]
    if f_n.order < terms - 1:
        raise OrderExhausted("tail series too short")
    return LaurentTail(f_n.coeffs[:terms])


def tail_from_partial_fractions(fam: OrthoFamily, terms: int) -> LaurentTail:
    """Partial sums of sum_n n! B_n / (p_n(x) p_{n+1}(x)) expanded in 1/x."""
    needed = (terms + 1) // 2 + 1
    if fam.size < needed + 1:
        raise OrderExhausted("family too short for requested tail")
    acc = [Fraction(0)] * terms
    for n in range(needed):
        prod = poly_mul(fam.polys[n], fam.polys[n + 1])
        deg = len(prod) - 1  # 2n+1, monic
        rev = list(reversed(prod))  # 1 + lower-order corrections in u = 1/x
        inv = TruncSeries.one(terms - 1) / TruncSeries.from_polynomial(rev, terms - 1)
        # 1/(p_n p_{n+1}) = u^deg * inv(u); coefficient j of the tail is u^(j+1)
        for j in range(deg - 1, terms):
            acc[j] += fam.norms[n] * inv.coeffs[j + 1 - deg]
    return LaurentTail(acc)
