"""Tri-state window-certified verdicts and their witness families.

A CERTIFIED verdict always carries a witness together with the data series
it must dominate, so it can be re-validated by direct substitution without
rerunning the search.  FALSIFIED is reserved for claims with pointwise
finite content and always carries a counterexample.  Everything else is
INCONCLUSIVE, with trend diagnostics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .space import Rational, Window, as_rational, rational_to_json


class Status(enum.Enum):
    CERTIFIED = "certified-on-window"
    FALSIFIED = "falsified"
    INCONCLUSIVE = "inconclusive"


class Witness:
    kind = "abstract"

    def bound(self, n: Rational) -> Rational:
        raise NotImplementedError

    def dominates(self, series) -> bool:
        """series: iterable of (n, value); true iff value <= bound(n) for all."""
        return all(v <= self.bound(n) for n, v in series)

    def to_json(self):
        raise NotImplementedError


@dataclass(frozen=True)
class AffineWitness(Witness):
    """n -> beta*n + alpha with alpha >= 0, beta >= 1."""

    alpha: Rational
    beta: Rational
    kind = "affine"

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 1:
            raise DomainError("affine witness needs alpha >= 0, beta >= 1")

    def bound(self, n):
        return self.beta * n + self.alpha

    def to_json(self):
        return {"kind": "affine", "alpha": rational_to_json(self.alpha),
                "beta": rational_to_json(self.beta)}


@dataclass(frozen=True)
class TabulatedWitness(Witness):
    """Finite monotone table extended beyond its domain by the last slope."""

    table: tuple  # sorted tuple of (n, value)
    kind = "tabulated"

    def __post_init__(self):
        t = tuple(sorted(self.table))
        object.__setattr__(self, "table", t)
        vals = [v for _, v in t]
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise DomainError("tabulated witness must be monotone non-decreasing")

    def last_slope(self) -> Rational:
        t = self.table
        if len(t) < 2:
            return 1
        (n0, v0), (n1, v1) = t[-2], t[-1]
        if n1 == n0:
            return 1
        return max(0, Fraction(v1 - v0, n1 - n0))

    def bound(self, n):
        t = self.table
        if not t:
            raise DomainError("empty tabulated witness")
        if n <= t[0][0]:
            return t[0][1]
        for nn, vv in reversed(t):
            if nn <= n:
                if nn == n:
                    return vv
                return vv + self.last_slope() * (n - nn)
        return t[-1][1]

    def to_json(self):
        return {"kind": "tabulated",
                "table": [[rational_to_json(n), rational_to_json(v)] for n, v in self.table]}


@dataclass(frozen=True)
class PowerLawWitness(Witness):
    """n -> scale * n^exponent (exponent a nonnegative rational p/q, ceil value)."""

    scale: Rational
    exponent: Fraction
    kind = "power"

    def bound(self, n):
        # exact rational bound: scale * ceil(n^exponent) via integer root bound
        if n <= 0:
            return self.scale
        p, q = self.exponent.numerator, self.exponent.denominator
        v = n ** p
        root = _iroot_ceil(v, q)
        return self.scale * root

    def to_json(self):
        return {"kind": "power", "scale": rational_to_json(self.scale),
                "exponent": rational_to_json(Fraction(self.exponent))}


@dataclass(frozen=True)
class LogWitness(Witness):
    """n -> scale * (1 + floor(log2(n)))."""

    scale: Rational
    kind = "log"

    def bound(self, n):
        if n < 1:
            return self.scale
        return self.scale * (1 + int(n).bit_length() - 1)

    def to_json(self):
        return {"kind": "log", "scale": rational_to_json(self.scale)}


def _iroot_ceil(v: int, q: int) -> int:
    if q == 1:
        return v
    lo, hi = 0, 1
    while hi ** q < v:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** q >= v:
            hi = mid
        else:
            lo = mid + 1
    return hi


def witness_from_json(doc) -> Witness:
    kind = doc["kind"]
    if kind == "affine":
        return AffineWitness(as_rational(doc["alpha"]), as_rational(doc["beta"]))
    if kind == "tabulated":
        return TabulatedWitness(tuple((as_rational(n), as_rational(v))
                                      for n, v in doc["table"]))
    if kind == "power":
        return PowerLawWitness(as_rational(doc["scale"]),
                               Fraction(as_rational(doc["exponent"])))
    if kind == "log":
        return LogWitness(as_rational(doc["scale"]))
    raise DomainError(f"unknown witness kind {kind!r}")


# check kinds understood by the independent re-validator
CHECK_DOMINATES = "dominates"       # series values <= witness bound
CHECK_STRICT_GROWTH = "strict-growth"  # series values strictly increase
CHECK_STABLE = "stable"             # series values are all equal


@dataclass
class Verdict:
    """Window-certified answer to an asymptotic claim."""

    status: Status
    claim: str
    window: Optional[Window] = None
    value: Optional[object] = None          # e.g. "zero", "nonzero", "type-I", 0, 1
    witness: Optional[Witness] = None
    counterexample: Optional[dict] = None
    diagnostics: dict = field(default_factory=dict)
    check_kind: str = CHECK_DOMINATES

    def __post_init__(self):
        if self.status is Status.CERTIFIED and self.witness is None:
            raise DomainError("a certified verdict must carry a witness")
        if self.status is Status.FALSIFIED and self.counterexample is None:
            raise DomainError("a falsified verdict must carry a counterexample")

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED

    def series(self):
        return [(as_rational(n), as_rational(v))
                for n, v in self.diagnostics.get("series", [])]

    def to_json(self):
        doc = {"status": self.status.value, "claim": self.claim,
               "check": self.check_kind}
        if self.window is not None:
            doc["window"] = self.window.to_json()
        if self.value is not None:
            doc["value"] = self.value
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample
        if self.diagnostics:
            doc["diagnostics"] = _json_safe(self.diagnostics)
        return doc


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, Fraction):
        return rational_to_json(obj)
    if isinstance(obj, Status):
        return obj.value
    if isinstance(obj, Witness):
        return obj.to_json()
    if isinstance(obj, Window):
        return obj.to_json()
    return obj


def revalidate(verdict: Verdict) -> bool:
    """Re-check a certified verdict by direct substitution.

    Shares no code with the searchers: it only replays the witness
    inequality (or growth/stability predicate) against the frozen series.
    """
    if verdict.status is not Status.CERTIFIED:
        return True
    series = verdict.series()
    if verdict.check_kind == CHECK_DOMINATES:
        if verdict.witness is None:
            return False
        return all(v <= verdict.witness.bound(n) for n, v in series)
    if verdict.check_kind == CHECK_STRICT_GROWTH:
        vals = [v for _, v in series]
        return len(vals) >= 3 and all(b > a for a, b in zip(vals, vals[1:]))
    if verdict.check_kind == CHECK_STABLE:
        vals = [v for _, v in series]
        return len(vals) >= 1 and all(v == vals[0] for v in vals)
    return False
