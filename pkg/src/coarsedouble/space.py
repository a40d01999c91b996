"""Discrete proper metric spaces with exact windows.

Points are small integer tuples.  Every space knows how to enumerate the
points of any ball exactly, so all minimizations over "the whole space"
reduce to certified finite scans.  All distances are exact (int or
Fraction); nothing here touches floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import DomainError, IncompleteEnumeration, SearchInconclusive

Point = tuple
Rational = Union[int, Fraction]


def as_rational(v) -> Rational:
    if isinstance(v, (int, Fraction)):
        return v
    if isinstance(v, str):
        if "/" in v:
            num, den = v.split("/", 1)
            return Fraction(int(num), int(den))
        return int(v)
    raise DomainError(f"not an exact rational: {v!r}")


def rational_to_json(v: Rational):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v)
        return f"{v.numerator}/{v.denominator}"
    return int(v)


def ceil_rational(v: Rational) -> int:
    return math.ceil(v)


def ruler(n: int) -> int:
    """1 + (2-adic valuation of n); takes each value infinitely often, <= n."""
    if n <= 0:
        raise DomainError("ruler function is defined on positive integers")
    return 1 + (n & -n).bit_length() - 1


@dataclass(frozen=True)
class Window:
    """Ball of a given radius around a basepoint (space basepoint if None)."""

    radius: Rational
    basepoint: Optional[Point] = None

    def __post_init__(self):
        if self.radius < 0:
            raise DomainError("window radius must be nonnegative")

    def resolve_base(self, space: "MetricSpace") -> Point:
        return self.basepoint if self.basepoint is not None else space.basepoint

    def scaled(self, factor: Rational) -> "Window":
        return Window(self.radius * factor, self.basepoint)

    def to_json(self):
        doc = {"radius": rational_to_json(self.radius)}
        if self.basepoint is not None:
            doc["basepoint"] = list(self.basepoint)
        return doc


class MetricSpace:
    """Base class: exact distance plus certified ball enumeration."""

    name: str = "abstract"
    basepoint: Point = ()

    def contains(self, p: Point) -> bool:
        raise NotImplementedError

    def __contains__(self, p: Point) -> bool:
        return self.contains(p)

    def distance(self, x: Point, y: Point) -> Rational:
        """Exact distance; raises DomainError off the space."""
        if not self.contains(x):
            raise DomainError(f"{x} is not a point of {self.name}")
        if not self.contains(y):
            raise DomainError(f"{y} is not a point of {self.name}")
        return self._dist(x, y)

    def _dist(self, x: Point, y: Point) -> Rational:
        raise NotImplementedError

    def points_within(self, center: Point, radius: Rational) -> list:
        """All points at distance <= radius from center, sorted lexicographically.

        The enumeration is complete: no point of the space outside the
        returned list lies within the radius.
        """
        raise NotImplementedError

    def to_json(self):
        return {"space": self.name}

    def __repr__(self):
        return f"<{self.name}>"

    def __eq__(self, other):
        return isinstance(other, MetricSpace) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))


class NatLine(MetricSpace):
    """{0, 1, 2, ...} with |x - y|."""

    name = "NatLine"
    basepoint = (0,)

    def contains(self, p):
        return isinstance(p, tuple) and len(p) == 1 and isinstance(p[0], int) and p[0] >= 0

    def _dist(self, x, y):
        return abs(x[0] - y[0])

    def points_within(self, center, radius):
        c = center[0]
        lo = max(0, ceil_rational(c - radius) if isinstance(radius, Fraction) else c - radius)
        hi = c + radius
        hi = math.floor(hi)
        return [(i,) for i in range(lo, hi + 1)]


class IntLine(MetricSpace):
    """All integers with |x - y|."""

    name = "IntLine"
    basepoint = (0,)

    def contains(self, p):
        return isinstance(p, tuple) and len(p) == 1 and isinstance(p[0], int)

    def _dist(self, x, y):
        return abs(x[0] - y[0])

    def points_within(self, center, radius):
        c = center[0]
        lo = math.ceil(c - radius)
        hi = math.floor(c + radius)
        return [(i,) for i in range(lo, hi + 1)]


class GeomLine(MetricSpace):
    """{2^n : n >= 1} with |x - y|.  Windows are small even at huge radii."""

    name = "GeomLine"
    basepoint = (2,)

    def contains(self, p):
        if not (isinstance(p, tuple) and len(p) == 1 and isinstance(p[0], int)):
            return False
        v = p[0]
        return v >= 2 and (v & (v - 1)) == 0

    def _dist(self, x, y):
        return abs(x[0] - y[0])

    def points_within(self, center, radius):
        c = center[0]
        out = []
        v = 2
        hi = c + radius
        while v <= hi:
            if abs(v - c) <= radius:
                out.append((v,))
            v *= 2
        return out


class TwoTails(MetricSpace):
    """{(n^2, +phi(n)), (n^2, -phi(n)) : n >= 1} with the Manhattan metric.

    phi defaults to the ruler function, which takes each value infinitely
    many times and satisfies phi(n) <= n.
    """

    name = "TwoTails"
    basepoint = (1, 1)

    def __init__(self, phi: Callable[[int], int] = ruler, phi_name: str = "ruler"):
        self.phi = phi
        self.phi_name = phi_name

    def contains(self, p):
        if not (isinstance(p, tuple) and len(p) == 2 and all(isinstance(c, int) for c in p)):
            return False
        a, b = p
        if a < 1:
            return False
        n = math.isqrt(a)
        if n * n != a:
            return False
        return abs(b) == self.phi(n) and b != 0

    def _dist(self, x, y):
        return abs(x[0] - y[0]) + abs(x[1] - y[1])

    def tail_point(self, n: int, sign: int) -> Point:
        return (n * n, sign * self.phi(n))

    def points_within(self, center, radius):
        a0 = center[0]
        out = []
        n = 1
        while True:
            sq = n * n
            if sq - a0 > radius:
                break
            # |sq - a0| <= radius is necessary since the second coordinate
            # contributes nonnegatively to the Manhattan distance.
            if abs(sq - a0) <= radius:
                for sign in (-1, 1):
                    p = (sq, sign * self.phi(n))
                    if self._dist(p, center) <= radius:
                        out.append(p)
            n += 1
        out.sort()
        return out

    def to_json(self):
        return {"space": self.name, "phi": self.phi_name}


class CustomSpace(MetricSpace):
    """Explicit finite point list with a Manhattan, rounded-Euclidean or table metric.

    The table metric is validated exhaustively (symmetry, zero diagonal,
    triangle inequality) at construction.  Enumeration is complete for any
    radius since the point list is exhaustive.
    """

    name = "Custom"

    def __init__(self, points: Sequence[Point], metric: str = "manhattan",
                 table=None, name: str = "Custom", basepoint: Optional[Point] = None):
        pts = sorted(tuple(p) for p in points)
        if len(set(pts)) != len(pts):
            raise DomainError("duplicate points in custom space")
        if not pts:
            raise DomainError("custom space needs at least one point")
        self._points = pts
        self._index = {p: i for i, p in enumerate(pts)}
        self.metric = metric
        self.name = name
        self.basepoint = tuple(basepoint) if basepoint is not None else pts[0]
        if metric == "table":
            if table is None:
                raise DomainError("table metric requires a table")
            self._table = [[as_rational(v) for v in row] for row in table]
            self._validate_table()
        elif metric not in ("manhattan", "euclidean-rounded"):
            raise DomainError(f"unknown custom metric {metric!r}")

    def _validate_table(self):
        n = len(self._points)
        t = self._table
        if len(t) != n or any(len(row) != n for row in t):
            raise DomainError("distance table has wrong shape")
        for i in range(n):
            if t[i][i] != 0:
                raise DomainError("distance table: nonzero diagonal")
            for j in range(n):
                if t[i][j] != t[j][i]:
                    raise DomainError("distance table: not symmetric")
                if i != j and t[i][j] <= 0:
                    raise DomainError("distance table: nonpositive off-diagonal entry")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if t[i][j] > t[i][k] + t[k][j]:
                        raise DomainError("distance table: triangle inequality fails")

    def contains(self, p):
        return tuple(p) in self._index

    def _dist(self, x, y):
        if self.metric == "manhattan":
            return sum(abs(a - b) for a, b in zip(x, y))
        if self.metric == "euclidean-rounded":
            if x == y:
                return 0
            sq = sum((a - b) ** 2 for a, b in zip(x, y))
            r = math.isqrt(sq)
            return r if r * r == sq else r + 1
        return self._table[self._index[tuple(x)]][self._index[tuple(y)]]

    def points_within(self, center, radius):
        return [p for p in self._points if self.distance(center, p) <= radius]

    def to_json(self):
        doc = {"space": self.name, "points": [list(p) for p in self._points],
               "metric": self.metric}
        if self.metric == "table":
            doc["table"] = [[rational_to_json(v) for v in row] for row in self._table]
        return doc


class PredicateSpace(MetricSpace):
    """Custom space given by a coordinate predicate on a bounded integer box.

    Enumeration is certified only up to ``coverage_radius``; asking for a
    larger ball raises IncompleteEnumeration.
    """

    name = "CustomPredicate"

    def __init__(self, predicate: Callable[[Point], bool], dim: int,
                 coverage_radius: int, basepoint: Point, metric: str = "manhattan",
                 name: str = "CustomPredicate"):
        self.predicate = predicate
        self.dim = dim
        self.coverage_radius = coverage_radius
        self.basepoint = tuple(basepoint)
        self.metric = metric
        self.name = name
        if not predicate(self.basepoint):
            raise DomainError("basepoint fails the predicate")

    def contains(self, p):
        return (isinstance(p, tuple) and len(p) == self.dim
                and all(isinstance(c, int) for c in p) and self.predicate(p))

    def _dist(self, x, y):
        if self.metric == "manhattan":
            return sum(abs(a - b) for a, b in zip(x, y))
        raise DomainError(f"unsupported predicate-space metric {self.metric!r}")

    def points_within(self, center, radius):
        if self.distance(self.basepoint, center) + radius > self.coverage_radius:
            raise IncompleteEnumeration(
                f"incomplete enumeration: ball({center}, {radius}) exceeds "
                f"coverage radius {self.coverage_radius}")
        r = math.floor(radius)
        out = []
        if self.dim == 1:
            rng = range(center[0] - r, center[0] + r + 1)
            out = [(i,) for i in rng if self.predicate((i,))]
        elif self.dim == 2:
            for a in range(center[0] - r, center[0] + r + 1):
                rem = r - abs(a - center[0])
                for b in range(center[1] - rem, center[1] + rem + 1):
                    p = (a, b)
                    if self.predicate(p):
                        out.append(p)
        else:
            raise DomainError("predicate spaces support 1 or 2 coordinates")
        return [p for p in sorted(out) if self._dist(p, center) <= radius]


_BUILTINS = None


def builtin_spaces() -> dict:
    global _BUILTINS
    if _BUILTINS is None:
        _BUILTINS = {
            "NatLine": NatLine(),
            "IntLine": IntLine(),
            "GeomLine": GeomLine(),
            "TwoTails": TwoTails(),
        }
    return _BUILTINS


def space_by_name(name: str) -> MetricSpace:
    spaces = builtin_spaces()
    if name not in spaces:
        raise DomainError(f"unknown space {name!r} (builtins: {sorted(spaces)})")
    return spaces[name]


def space_from_json(doc) -> MetricSpace:
    if isinstance(doc, str):
        return space_by_name(doc)
    name = doc.get("space", "Custom")
    if name in builtin_spaces():
        return space_by_name(name)
    return CustomSpace(points=[tuple(p) for p in doc["points"]],
                       metric=doc.get("metric", "manhattan"),
                       table=doc.get("table"), name=name,
                       basepoint=tuple(doc["basepoint"]) if "basepoint" in doc else None)


# ---------------------------------------------------------------------------
# Point sets


class PointSet:
    """A decidable subset of a space: explicit points or a named predicate."""

    def __init__(self, name: str, contains: Callable[[Point], bool],
                 points: Optional[frozenset] = None, family: Optional[dict] = None):
        self.name = name
        self._contains = contains
        self.points = points
        self.family = family  # serializable description, when available

    @classmethod
    def from_points(cls, points: Iterable[Point], name: Optional[str] = None) -> "PointSet":
        pts = frozenset(tuple(p) for p in points)
        label = name or ("{" + ",".join(str(p) for p in sorted(pts)[:4])
                         + (",..." if len(pts) > 4 else "") + "}")
        return cls(label, pts.__contains__, points=pts,
                   family={"family": "explicit", "points": [list(p) for p in sorted(pts)]})

    @classmethod
    def from_predicate(cls, name: str, fn: Callable[[Point], bool],
                       family: Optional[dict] = None) -> "PointSet":
        return cls(name, fn, family=family)

    def contains(self, p: Point) -> bool:
        return self._contains(tuple(p))

    def __contains__(self, p):
        return self.contains(p)

    def complement(self) -> "PointSet":
        fam = None
        if self.family is not None:
            fam = {"family": "complement", "of": self.family}
        return PointSet(f"~{self.name}", lambda p: not self._contains(p), family=fam)

    def members_in(self, space: MetricSpace, window: Window) -> list:
        return [p for p in window_points(space, window) if self.contains(p)]

    def to_json(self):
        if self.family is not None:
            return self.family
        raise DomainError(f"point set {self.name!r} carries no serializable description")

    def __repr__(self):
        return f"PointSet({self.name})"


def _is_square(v: int) -> bool:
    if v < 0:
        return False
    r = math.isqrt(v)
    return r * r == v


def _is_scaled_power(v: int, base: int, scale: int) -> bool:
    if v < scale * base or v % scale:
        return False
    q = v // scale
    while q % base == 0:
        q //= base
    return q == 1


def set_family(family: str, **args) -> PointSet:
    """Named one-dimensional set families used throughout the reports."""
    if family == "multiples":
        k, r = args["k"], args.get("r", 0)
        return PointSet.from_predicate(
            f"{k}Z+{r}" if r else f"{k}Z",
            lambda p: (p[0] - r) % k == 0,
            family={"family": "multiples", "k": k, "r": r})
    if family == "evens":
        return set_family("multiples", k=2, r=0)
    if family == "odds":
        return set_family("multiples", k=2, r=1)
    if family == "squares":
        return PointSet.from_predicate("squares", lambda p: _is_square(p[0]),
                                       family={"family": "squares"})
    if family == "powers":
        base, scale = args["base"], args.get("scale", 1)
        label = f"{{{scale}*{base}^k}}" if scale != 1 else f"{{{base}^k}}"
        return PointSet.from_predicate(
            label, lambda p: _is_scaled_power(p[0], base, scale),
            family={"family": "powers", "base": base, "scale": scale})
    if family == "powers_tail":
        base, scale, k0 = args["base"], args.get("scale", 1), args["k0"]
        label = f"{{{scale}*{base}^k : k>={k0}}}"
        return PointSet.from_predicate(
            label,
            lambda p: _is_scaled_power(p[0], base, scale) and p[0] >= scale * base ** k0,
            family={"family": "powers_tail", "base": base, "scale": scale, "k0": k0})
    if family == "half_line":
        # {x <= bound} for sign=-1, {x >= bound} for sign=+1
        sign, bound = args["sign"], args.get("bound", 0)
        if sign not in (-1, 1):
            raise DomainError("half_line sign must be +-1")
        label = f"{{x{'<=' if sign < 0 else '>='}{bound}}}"
        return PointSet.from_predicate(
            label,
            (lambda p: p[0] <= bound) if sign < 0 else (lambda p: p[0] >= bound),
            family={"family": "half_line", "sign": sign, "bound": bound})
    if family == "tail_plus":
        return PointSet.from_predicate("A+", lambda p: p[1] > 0, family={"family": "tail_plus"})
    if family == "tail_minus":
        return PointSet.from_predicate("A-", lambda p: p[1] < 0, family={"family": "tail_minus"})
    if family == "explicit":
        return PointSet.from_points([tuple(p) for p in args["points"]])
    if family == "complement":
        return set_from_json(args["of"]).complement()
    raise DomainError(f"unknown set family {family!r}")


def set_from_json(doc) -> PointSet:
    args = {k: v for k, v in doc.items() if k != "family"}
    return set_family(doc["family"], **args)


# ---------------------------------------------------------------------------
# Operations


def window_points(space: MetricSpace, window: Window) -> list:
    """All space points of the window, lexicographically sorted."""
    base = window.resolve_base(space)
    if not space.contains(base):
        raise DomainError(f"window basepoint {base} is not in {space.name}")
    return space.points_within(base, window.radius)


def base_distance(space: MetricSpace, x: Point, y: Point) -> Rational:
    return space.distance(x, y)


@dataclass(frozen=True)
class Evaluation:
    """An exact value plus the certificate status of the bounded search."""

    value: Rational
    exact: bool
    required_radius: Optional[Rational] = None
    witness: Optional[Point] = None

    def to_json(self):
        doc = {"value": rational_to_json(self.value), "exact": self.exact}
        if self.required_radius is not None:
            doc["required_radius"] = rational_to_json(self.required_radius)
        if self.witness is not None:
            doc["witness"] = list(self.witness)
        return doc


def dist_to_set(space: MetricSpace, x: Point, A: PointSet, window: Window) -> Evaluation:
    """Exact d_X(x, A), searched within radius window.radius around x.

    Once a member is found at distance D <= r with the ball of radius r fully
    enumerated, no point outside the ball can be closer, so the minimum is
    certified.  If no member lies within the budget the search is
    inconclusive and raises.
    """
    if not space.contains(x):
        raise DomainError(f"{x} is not a point of {space.name}")
    if A.points is not None:
        members = [p for p in A.points if space.contains(p)]
        if not members:
            raise SearchInconclusive("set has no members in the space",
                                     window_radius=window.radius)
        best = min(members, key=lambda a: (space.distance(x, a), a))
        return Evaluation(space.distance(x, best), True, witness=best)
    budget = window.radius
    if A.contains(x):
        return Evaluation(0, True, witness=tuple(x))
    r = 1
    while True:
        r = min(r, budget)
        candidates = [p for p in space.points_within(x, r) if A.contains(p)]
        if candidates:
            best = min(candidates, key=lambda a: (space.distance(x, a), a))
            return Evaluation(space.distance(x, best), True, witness=best)
        if r >= budget:
            raise SearchInconclusive(
                f"no member of {A.name} within {budget} of {x}",
                window_radius=budget)
        r *= 2


def neighborhood(space: MetricSpace, A: PointSet, r: Rational, window: Window) -> PointSet:
    """N_r(A) restricted to the window, as an explicit set.

    Exact: a window point x belongs iff some member lies in ball(x, r), and
    that ball is enumerated completely.
    """
    if r < 0:
        raise DomainError("neighborhood radius must be nonnegative")
    out = []
    for x in window_points(space, window):
        if any(A.contains(p) for p in space.points_within(x, r)):
            out.append(x)
    return PointSet.from_points(out, name=f"N_{rational_to_json(r)}({A.name})")
