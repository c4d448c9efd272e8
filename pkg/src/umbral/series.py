"""Exact truncated formal power series over arbitrary-precision rationals.

A TruncSeries stores coefficients c_0..c_N of a series whose tail beyond
order N is *unknown*, not zero.  Binary operations therefore truncate to the
smaller operand order; nothing here ever fabricates a coefficient.  All
arithmetic is exact (fractions.Fraction), there is no floating point in this
module.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    CompositionNonNilpotent,
    DivisionByNonUnit,
    NonUnitBase,
    NotReversible,
    OrderExhausted,
)

Rat = Fraction


def as_rat(x) -> Fraction:
    """Coerce int / str ('p/q') / Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class TruncSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = tuple(as_rat(c) for c in coeffs)
        if not cs:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs = cs

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        return cls([Fraction(0)] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls([Fraction(1)] + [Fraction(0)] * order)

    @classmethod
    def constant(cls, value, order: int) -> "TruncSeries":
        return cls([as_rat(value)] + [Fraction(0)] * order)

    @classmethod
    def x(cls, order: int) -> "TruncSeries":
        if order < 1:
            raise ValueError("order must be >= 1 to hold the linear term")
        return cls([Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1))

    @classmethod
    def from_function(cls, fn: Callable[[int], object], order: int) -> "TruncSeries":
        return cls([as_rat(fn(i)) for i in range(order + 1)])

    @classmethod
    def from_polynomial(cls, coeffs: Sequence, order: int) -> "TruncSeries":
        """A polynomial is fully known: pad with exact zeros up to `order`."""
        cs = [as_rat(c) for c in coeffs]
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        return cls(cs + [Fraction(0)] * (order + 1 - len(cs)))

    # -- basics -------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, i: int) -> Fraction:
        if i < 0:
            return Fraction(0)
        if i > self.order:
            raise OrderExhausted(f"coefficient {i} beyond truncation order {self.order}")
        return self.coeffs[i]

    def valuation(self) -> int:
        """Index of the first nonzero known coefficient (order+1 if none)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return self.order + 1

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise OrderExhausted(f"cannot extend known order {self.order} to {order}")
        return TruncSeries(self.coeffs[: order + 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def agrees_with(self, other: "TruncSeries", through: int | None = None) -> bool:
        n = min(self.order, other.order)
        if through is not None:
            n = min(n, through)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.order > 5 else ""
        return f"TruncSeries([{head}{tail}], order={self.order})"

    def eval_at(self, x) -> Fraction:
        """Evaluate the truncated polynomial at a rational point."""
        x = as_rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- ring operations ----------------------------------------------

    def _aligned(self, other: "TruncSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.constant(other, self.order)
        n = self._aligned(other)
        return TruncSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.constant(other, self.order)
        n = self._aligned(other)
        return TruncSeries([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)])

    def __rsub__(self, other):
        return TruncSeries.constant(other, self.order) - self

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            v = as_rat(other)
            return TruncSeries([c * v for c in self.coeffs])
        n = self._aligned(other)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            v = as_rat(other)
            if v == 0:
                raise ZeroDivisionError("division of a series by zero")
            return TruncSeries([c / v for c in self.coeffs])
        if other.coeffs[0] == 0:
            # Division is still exact when the numerator carries at least the
            # divisor's valuation; cancel the common power of y.
            v = other.valuation()
            if v > other.order or self.valuation() < v:
                raise DivisionByNonUnit("divisor has zero constant term")
            return self.truncate(min(self.order, v + other.order)).shift_down(v) / other.shift_down(v)
        n = self._aligned(other)
        g0 = other.coeffs[0]
        out = [Fraction(0)] * (n + 1)
        for k in range(n + 1):
            acc = self.coeffs[k]
            for j in range(1, k + 1):
                b = other.coeffs[j]
                if b != 0:
                    acc -= b * out[k - j]
            out[k] = acc / g0
        return TruncSeries(out)

    def __rtruediv__(self, other):
        return TruncSeries.constant(other, self.order) / self

    # -- calculus -----------------------------------------------------

    def derivative(self) -> "TruncSeries":
        if self.order == 0:
            return TruncSeries.zero(0)
        return TruncSeries([(i + 1) * self.coeffs[i + 1] for i in range(self.order)])

    def integral(self, constant=0) -> "TruncSeries":
        out = [as_rat(constant)]
        out.extend(self.coeffs[i] / (i + 1) for i in range(self.order + 1))
        return TruncSeries(out)

    def shift_up(self, k: int = 1) -> "TruncSeries":
        """Multiply by y^k; the result is known through order + k."""
        return TruncSeries([Fraction(0)] * k + list(self.coeffs))

    def shift_down(self, k: int = 1) -> "TruncSeries":
        """Divide by y^k; requires valuation >= k."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise DivisionByNonUnit(f"valuation below {k}")
        return TruncSeries(self.coeffs[k:])

    # -- composition and reversion --------------------------------------

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """f(g) for g with g(0) = 0, exact to min(order_f, order_g)."""
        if inner.coeffs[0] != 0:
            raise CompositionNonNilpotent("inner series has nonzero constant term")
        n = self._aligned(inner)
        g = inner.truncate(n)
        acc = TruncSeries.constant(self.coeffs[n], n)
        for i in range(n - 1, -1, -1):
            acc = acc * g + self.coeffs[i]
        return acc

    def reverse(self) -> "TruncSeries":
        """Compositional inverse: the series phi with f(phi(y)) = y.

        Coefficients come from the Lagrange inversion formula
        [y^m] phi = (1/m) [y^(m-1)] (y/f)^m, valid whenever f(0)=0 and
        f'(0) != 0; this is exact through the input order.
        """
        if self.coeffs[0] != 0:
            raise NotReversible("series must vanish at 0")
        if self.order < 1 or self.coeffs[1] == 0:
            raise NotReversible("series must have nonzero linear term")
        n = self.order
        u = 1 / self.shift_down(1)  # y/f, constant term 1/f'(0), order n-1
        out = [Fraction(0)] * (n + 1)
        upow = TruncSeries.one(n - 1)
        for m in range(1, n + 1):
            upow = upow * u
            out[m] = upow.coefficient(m - 1) / m
        return TruncSeries(out)

    # -- transcendental maps (coefficient recursions, exact) ------------

    def exp(self) -> "TruncSeries":
        if self.coeffs[0] != 0:
            raise NonUnitBase("exp needs zero constant term")
        n = self.order
        out = [Fraction(1)] + [Fraction(0)] * n
        for m in range(1, n + 1):
            acc = Fraction(0)
            for i in range(m):
                f = self.coeffs[m - i]
                if f != 0:
                    acc += (m - i) * f * out[i]
            out[m] = acc / m
        return TruncSeries(out)

    def log(self) -> "TruncSeries":
        if self.coeffs[0] != 1:
            raise NonUnitBase("log needs constant term 1")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for m in range(1, n + 1):
            acc = m * self.coeffs[m]
            for i in range(1, m):
                h = out[m - i]
                if h != 0:
                    acc -= (m - i) * h * self.coeffs[i]
            out[m] = acc / m
        return TruncSeries(out)

    def pow_fraction(self, alpha) -> "TruncSeries":
        """f^alpha for rational alpha; requires f(0) = 1.

        Uses the first-order relation h' f = alpha f' h, which keeps every
        coefficient rational.
        """
        alpha = as_rat(alpha)
        if self.coeffs[0] != 1:
            raise NonUnitBase("fractional power needs constant term 1")
        n = self.order
        out = [Fraction(1)] + [Fraction(0)] * n
        for m in range(1, n + 1):
            acc = Fraction(0)
            for k in range(m):
                fk1 = self.coeffs[k + 1]
                if fk1 != 0:
                    acc += alpha * (k + 1) * fk1 * out[m - 1 - k]
            for k in range(m - 1):
                hk1 = out[k + 1]
                if hk1 != 0:
                    acc -= (k + 1) * hk1 * self.coeffs[m - 1 - k]
            out[m] = acc / m
        return TruncSeries(out)

    # -- coefficient transforms -----------------------------------------

    def weighted(self, weights: Sequence) -> "TruncSeries":
        """Multiply coefficient i by weights[i] (diagonal operator action)."""
        if len(weights) < self.order + 1:
            raise OrderExhausted("not enough diagonal values")
        return TruncSeries([self.coeffs[i] * as_rat(weights[i]) for i in range(self.order + 1)])

    def borel(self) -> "TruncSeries":
        """Divide coefficient i by i!."""
        out, f = [], 1
        for i, c in enumerate(self.coeffs):
            out.append(c / f)
            f *= i + 1
        return TruncSeries(out)

    def laplace(self) -> "TruncSeries":
        """Multiply coefficient i by i!."""
        out, f = [], 1
        for i, c in enumerate(self.coeffs):
            out.append(c * f)
            f *= i + 1
        return TruncSeries(out)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "TruncSeries":
        s = cls(data["coeffs"])
        if s.order != data["order"]:
            raise ValueError("order field disagrees with coefficient count")
        return s


# -- stock series ------------------------------------------------------


def exp_series(c, order: int) -> TruncSeries:
    """exp(c*y) truncated."""
    c = as_rat(c)
    out, acc = [], Fraction(1)
    for i in range(order + 1):
        out.append(acc)
        acc = acc * c / (i + 1)
    return TruncSeries(out)


def geometric_series(c, order: int) -> TruncSeries:
    """1/(1 - c*y) truncated."""
    c = as_rat(c)
    out, acc = [], Fraction(1)
    for _ in range(order + 1):
        out.append(acc)
        acc *= c
    return TruncSeries(out)


def log1p_series(c, order: int) -> TruncSeries:
    """log(1 + c*y) truncated."""
    c = as_rat(c)
    out = [Fraction(0)]
    p = c
    for i in range(1, order + 1):
        out.append(-p / i if i % 2 == 0 else p / i)
        p *= c
    return TruncSeries(out)


def solve_autonomous_ode(rhs_poly: Sequence, order: int) -> TruncSeries:
    """Unique series solution of f' = P(f) with f(0) = 0.

    `rhs_poly` holds the coefficients of the polynomial P.  Coefficient
    recursion: (k+1) f_{k+1} = [y^k] P(f).
    """
    p = [as_rat(c) for c in rhs_poly]
    f = TruncSeries.zero(order)
    coeffs = list(f.coeffs)
    for k in range(order):
        cur = TruncSeries(coeffs[: k + 1])
        acc = TruncSeries.constant(p[-1], k)
        for c in reversed(p[:-1]):
            acc = acc * cur + c
        coeffs[k + 1] = acc.coefficient(k) / (k + 1)
    return TruncSeries(coeffs)


def riccati_series(lam, a, b, order: int) -> TruncSeries:
    """Series solution of f' = 1 + lam*a*f + lam*b*f^2, f(0) = 0."""
    lam, a, b = as_rat(lam), as_rat(a), as_rat(b)
    return solve_autonomous_ode([Fraction(1), lam * a, lam * b], order)


def power_law_ode_series(n: int, lam, a, order: int) -> TruncSeries:
    """Series solution of f' = (1 + lam*a*f/n)^n, f(0) = 0."""
    lam, a = as_rat(lam), as_rat(a)
    c = lam * a / n
    poly = [math.comb(n, j) * c**j for j in range(n + 1)]
    return solve_autonomous_ode(poly, order)


def t_transform(f: TruncSeries) -> TruncSeries:
    """f / f' for f with f(0)=0, f'(0)=1; exact through the order of f."""
    if f.coeffs[0] != 0 or f.order < 1 or f.coeffs[1] != 1:
        raise NotReversible("transform needs f(0)=0 and f'(0)=1")
    fy = f.shift_down(1)           # f/y, constant 1, order-1 coefficients
    return (fy / f.derivative()).shift_up(1)


def t_and_omega(f: TruncSeries) -> tuple[TruncSeries, TruncSeries]:
    """Return (f/f', reverse(f/f')); the central pair of conjugation series."""
    tf = t_transform(f)
    return tf, tf.reverse()
