"""Named pass/fail records for verified identities.

Construction functions verify the displays they are built from; with
strict=True any failure raises immediately, otherwise the records are
collected for reporting.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import IdentityFailure
from .opalg import OpMatrix
from .series import TruncSeries


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "witness": self.witness}


def op_check(name: str, lhs: OpMatrix, rhs: OpMatrix, through=None) -> Check:
    diff = lhs.first_difference(rhs, through)
    if diff is None:
        return Check(name, True)
    m, n, a, b = diff
    return Check(name, False, f"entry ({m},{n}): {a} != {b}")


def series_check(name: str, lhs: TruncSeries, rhs: TruncSeries, through=None) -> Check:
    n = min(lhs.order, rhs.order)
    if through is not None:
        n = min(n, through)
    for i in range(n + 1):
        if lhs.coeffs[i] != rhs.coeffs[i]:
            return Check(name, False, f"coefficient {i}: {lhs.coeffs[i]} != {rhs.coeffs[i]}")
    return Check(name, True)


def value_check(name: str, lhs, rhs) -> Check:
    if lhs == rhs:
        return Check(name, True)
    return Check(name, False, f"{lhs} != {rhs}")


def flag_check(name: str, ok: bool, witness: str = "") -> Check:
    return Check(name, bool(ok), "" if ok else witness)


def ensure(checks: list, strict: bool):
    if strict:
        for c in checks:
            if not c.passed:
                raise IdentityFailure(f"{c.name}: {c.witness}")
    return checks
