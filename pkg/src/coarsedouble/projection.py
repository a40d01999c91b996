"""Idempotents of the double-metric semigroup as expanding level functions.

An expanding sequence A_1 <= A_2 <= ... is stored as its level function
lambda(x) = min{n : x in A_n}; sublevel sets recover the sequence with O(1)
membership.  The module connects the three presentations: level functions,
delta-generated kernels, and the function lattice of copy-gap functions
x -> d(x, x').
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .asymptotics import equivalent, sweep_radii
from .double import (DeltaFunction, DeltaMetric, DoubleMetric, MaxMetric,
                     MinGlueMetric, SubsetMetric, _expanding_dist_to_set,
                     evaluate_exact)
from .errors import DomainError, SearchInconclusive
from .space import (Evaluation, MetricSpace, Point, PointSet, Rational, Window,
                    rational_to_json, window_points)
from .verdicts import (CHECK_DOMINATES, AffineWitness, Status, TabulatedWitness,
                       Verdict)


class LevelFunction:
    """lambda: X -> {1, 2, ...} with lambda(x) = min{n : x in A_n}.

    Invariants (checked by ``validate``): some window point has a finite
    level (e1); a half-step neighbor can raise the level by at most one
    (e2); every window point has a finite level, so the sublevels exhaust
    the space (e3).
    """

    def __init__(self, space: MetricSpace, fn: Callable[[Point], int],
                 name: str, kind: str, payload: Optional[dict] = None):
        self.space = space
        self.fn = fn
        self.name = name
        self.kind = kind
        self.payload = payload
        self._cache = {}

    def level(self, x: Point) -> int:
        v = self._cache.get(x)
        if v is None:
            v = self.fn(x)
            if v < 1:
                raise DomainError(f"level function {self.name} gave {v} < 1 at {x}")
            self._cache[x] = v
        return v

    def sublevel(self, n: int) -> PointSet:
        """A_n = {x : level(x) <= n} as a decidable set."""
        return PointSet.from_predicate(
            f"[{self.name}<={n}]", lambda p, n=n: self.space.contains(p) and self.level(p) <= n)

    def validate(self, window: Window) -> dict:
        pts = window_points(self.space, window)
        levels = {x: self.level(x) for x in pts}
        checks = {"e1_nonempty": bool(levels), "e3_all_finite": True}
        bad = None
        half = Fraction(1, 2)
        for x in pts:
            for y in self.space.points_within(x, half):
                if levels.get(y, self.level(y)) > levels[x] + 1:
                    bad = {"x": list(x), "y": list(y)}
                    break
            if bad:
                break
        checks["e2_expanding"] = bad is None
        if bad:
            checks["violation"] = bad
        checks["passed"] = checks["e1_nonempty"] and checks["e2_expanding"]
        return checks

    def to_json(self):
        if self.payload is not None:
            return dict(self.payload, name=self.name)
        raise DomainError(f"level function {self.name!r} has no serializable form")

    def tabulate(self, window: Window) -> dict:
        return {x: self.level(x) for x in window_points(self.space, window)}

    def serialize_window(self, window: Window, tail: str = "") -> dict:
        """Tabulated form: explicit window levels plus a tail description."""
        return {"space": self.space.to_json(),
                "levels": [[list(x), v] for x, v in sorted(self.tabulate(window).items())],
                "tail": tail}

    def __repr__(self):
        return f"LevelFunction({self.name})"


# -- constructors -----------------------------------------------------------


def unit_levels(space: MetricSpace) -> LevelFunction:
    return LevelFunction(space, lambda x: 1, "1", "unit", payload={"kind": "unit"})


def zero_levels(space: MetricSpace, x0: Optional[Point] = None) -> LevelFunction:
    base = tuple(x0) if x0 is not None else space.basepoint
    single = PointSet.from_points([base])
    lf = levels_from_subset(space, single)
    lf.name = f"0@{base}"
    lf.kind = "zero"
    lf.payload = {"kind": "zero", "x0": list(base)}
    return lf


def levels_from_subset(space: MetricSpace, A: PointSet) -> LevelFunction:
    """Levels of the expanding sequence A_n = N_{n/2}(A): max(1, ceil(2 d(x,A)))."""

    def fn(x):
        return max(1, math.ceil(2 * _expanding_dist_to_set(space, x, A)))

    payload = None
    try:
        payload = {"kind": "subset", "set": A.to_json()}
    except DomainError:
        pass
    return LevelFunction(space, fn, f"E[{A.name}]", "from-subset", payload)


def levels_from_expression(space: MetricSpace, name: str,
                           fn: Callable[[Point], int],
                           payload: Optional[dict] = None) -> LevelFunction:
    return LevelFunction(space, fn, name, "expression", payload)


def levels_from_metric(d: DoubleMetric, window: Optional[Window] = None,
                       on_inexact: str = "raise") -> LevelFunction:
    """lambda(x) = min{n : d(x,x') <= n} from certified diagonal values."""

    def fn(x):
        if on_inexact == "window":
            if window is None:
                raise DomainError("window mode needs a window")
            ev = d.cross(x, x, window)
        else:
            ev = evaluate_exact(d, x, x)
        return max(1, math.ceil(ev.value))

    kind = "from-metric" if on_inexact != "window" else "from-metric-window"
    return LevelFunction(d.space, fn, f"lv[{d.kind}]", kind)


def delta_from_levels(L: LevelFunction) -> DeltaFunction:
    """Copy-gap function of an expanding sequence: 1 on A_1, n+1 on A_{n+1} \\ A_n."""
    payload = None
    try:
        payload = {"kind": "levels", "levels": L.to_json()}
    except DomainError:
        pass
    return DeltaFunction(L.space, lambda u: max(L.level(u), 1),
                         f"delta[{L.name}]", payload)


def metric_from_levels(L: LevelFunction) -> DeltaMetric:
    return DeltaMetric(L.space, delta_from_levels(L))


def subset_metric(space: MetricSpace, A: PointSet) -> SubsetMetric:
    """The closed-form subset kernel d_X(x,A) + 1 + d_X(y,A)."""
    if A.points is not None and not any(space.contains(p) for p in A.points):
        raise DomainError(f"set {A.name} is empty in {space.name}")
    return SubsetMetric(space, A)


# -- projection criterion ----------------------------------------------------


def _dist_to_copy_exact(d: DoubleMetric, x: Point,
                        start_radius: Rational = 8, max_doublings: int = 80) -> Evaluation:
    base = d.space.basepoint
    r = max(start_radius, d.space.distance(x, base))
    for _ in range(max_doublings):
        ev = d.dist_to_copy(x, Window(r))
        if ev.exact:
            return ev
        if d.coercive_c is None and not isinstance(d, SubsetMetric):
            break
        r = max(2 * r, ev.required_radius if ev.required_radius is not None else 0)
    raise SearchInconclusive(f"dist-to-copy at {x} not certifiable", window_radius=r)


def projection_criterion(d: DoubleMetric, window: Window,
                         grid: Optional[list] = None) -> Verdict:
    """Search for (alpha, beta) with -alpha + d(x,x')/beta <= d(x,X') on the window.

    The returned affine witness is in the normalized form
    d(x,x') <= beta*d(x,X') + c with c = alpha*beta, checked per point.
    """
    if not d.is_selfadjoint():
        raise DomainError("projection criterion needs a selfadjoint kernel")
    if grid is None:
        grid = [(a, b) for b in range(1, 9) for a in range(0, 9)]
    pts = window_points(d.space, window)
    rows = []
    certifiable = True
    for x in pts:
        try:
            diag = evaluate_exact(d, x, x)
            copy = _dist_to_copy_exact(d, x)
        except SearchInconclusive:
            certifiable = False
            diag = d.cross(x, x, window)
            copy = d.dist_to_copy(x, window)
        rows.append((x, diag.value, copy.value))
    claim = f"projection-criterion({d.kind})"
    series = [[copy, diag] for _, diag, copy in rows]
    diagnostics = {
        "points": [[list(x), rational_to_json(dg), rational_to_json(cp)]
                   for x, dg, cp in rows],
        "series": series,
        "exact": certifiable,
    }
    if certifiable:
        for alpha, beta in grid:
            if all(diag <= beta * copy + alpha * beta for _, diag, copy in rows):
                return Verdict(Status.CERTIFIED, claim, window=window,
                               value="projection",
                               witness=AffineWitness(alpha * beta, beta),
                               diagnostics=dict(diagnostics, grid_alpha=alpha,
                                                grid_beta=beta),
                               check_kind=CHECK_DOMINATES)
    reason = "no witness in grid" if certifiable else "window-limited evaluation"
    return Verdict(Status.INCONCLUSIVE, claim, window=window,
                   diagnostics=dict(diagnostics, reason=reason))


# -- the function lattice ----------------------------------------------------


class CmFunction:
    """Copy-gap style function: positive, with slope at most 2."""

    def __init__(self, space: MetricSpace, fn: Callable[[Point], Rational], name: str):
        self.space = space
        self.fn = fn
        self.name = name
        self._cache = {}

    def value(self, x: Point) -> Rational:
        v = self._cache.get(x)
        if v is None:
            v = self.fn(x)
            self._cache[x] = v
        return v

    def __repr__(self):
        return f"CmFunction({self.name})"


def f_map(d: DoubleMetric, window: Window) -> CmFunction:
    """F(d): x -> d(x, x'), the copy-gap function of a kernel."""

    def fn(x):
        return evaluate_exact(d, x, x).value

    return CmFunction(d.space, fn, f"F({d.kind})")


def cm_meet(f: CmFunction, g: CmFunction) -> CmFunction:
    return CmFunction(f.space, lambda x: max(f.value(x), g.value(x)),
                      f"({f.name} ^ {g.name})")


def cm_join(f: CmFunction, g: CmFunction) -> CmFunction:
    return CmFunction(f.space, lambda x: min(f.value(x), g.value(x)),
                      f"({f.name} v {g.name})")


def check_cm(f: CmFunction, window: Window) -> dict:
    """Verify (f1) a positive floor and (f2) slope <= 2, exhaustively."""
    pts = window_points(f.space, window)
    vals = {x: f.value(x) for x in pts}
    floor = min(vals.values()) if vals else None
    report = {"f1_floor": rational_to_json(floor) if floor is not None else None,
              "f1_positive": floor is not None and floor > 0}
    bad = None
    for i, x in enumerate(pts):
        vx = vals[x]
        for y in pts[i + 1:]:
            gap = vx - vals[y]
            if gap < 0:
                gap = -gap
            if gap > 2 * f.space.distance(x, y):
                bad = {"x": list(x), "y": list(y),
                       "gap": rational_to_json(gap),
                       "allowed": rational_to_json(2 * f.space.distance(x, y))}
                break
        if bad:
            break
    report["f2_slope"] = bad is None
    if bad:
        report["violation"] = bad
    report["passed"] = report["f1_positive"] and report["f2_slope"]
    return report


# -- lattice operations ------------------------------------------------------


def meet(e: LevelFunction, f: LevelFunction) -> LevelFunction:
    """Intersection of expanding sequences: levels combine by max."""
    _same_space(e, f)
    payload = _combined_payload("meet", e, f)
    return LevelFunction(e.space, lambda x: max(e.level(x), f.level(x)),
                         f"({e.name} ^ {f.name})", "combined", payload)


def join(e: LevelFunction, f: LevelFunction) -> LevelFunction:
    """Union of expanding sequences: levels combine by min."""
    _same_space(e, f)
    payload = _combined_payload("join", e, f)
    return LevelFunction(e.space, lambda x: min(e.level(x), f.level(x)),
                         f"({e.name} v {f.name})", "combined", payload)


def _same_space(e, f):
    if e.space != f.space:
        raise DomainError("level functions live on different spaces")


def _combined_payload(op, e, f):
    try:
        return {"kind": op, "of": [e.to_json(), f.to_json()]}
    except DomainError:
        return None


def metric_meet(d1: DoubleMetric, d2: DoubleMetric, window: Window) -> MaxMetric:
    """Pointwise max kernel; operands must be certified projections."""
    _require_projection(d1, window)
    _require_projection(d2, window)
    return MaxMetric(d1, d2)


def metric_join(d1: DoubleMetric, d2: DoubleMetric, window: Window) -> MinGlueMetric:
    """Infimum glue kernel over min(d1(u,u'), d2(u,u'))."""
    _require_projection(d1, window)
    _require_projection(d2, window)
    return MinGlueMetric(d1, d2)


def _require_projection(d, window):
    v = projection_criterion(d, window)
    if not v.certified:
        raise DomainError(f"{d.kind} kernel is not a certified projection on this window")


def source_projection(d: DoubleMetric, window: Window,
                      on_inexact: str = "raise") -> LevelFunction:
    """Levels of A_n = {x : d(x, X') <= n}."""

    def fn(x):
        if on_inexact == "window":
            ev = d.dist_to_copy(x, window)
        else:
            ev = _dist_to_copy_exact(d, x)
        return max(1, math.ceil(ev.value))

    return LevelFunction(d.space, fn, f"src[{d.kind}]", "from-metric")


def range_projection(d: DoubleMetric, window: Window,
                     on_inexact: str = "raise") -> LevelFunction:
    adj = d.adjoint()
    lf = source_projection(adj, window, on_inexact)
    lf.name = f"rng[{d.kind}]"
    return lf


# -- type classification ----------------------------------------------------


@dataclass(frozen=True)
class TypeSearchParams:
    n_max: int = 8
    k_max: int = 64
    m_max: int = 24


def classify_type(e: LevelFunction, window: Window,
                  params: TypeSearchParams = TypeSearchParams(),
                  radii: Optional[list] = None) -> Verdict:
    """Type I: e is equivalent to the neighborhood sequence of one of its own
    sublevel sets (stable across the radius sweep), reported with the
    containment table k(m).  Type II is never certified, only evidenced by
    required neighborhood radii that grow at every window enlargement.
    """
    space = e.space
    if radii is None:
        radii = sweep_radii(window)
    big_tab = e.tabulate(window)
    if not big_tab:
        return Verdict(Status.INCONCLUSIVE, f"classify({e.name})", window=window,
                       diagnostics={"reason": "empty window"})
    usable = [n for n in range(1, params.n_max + 1)
              if any(v <= n for v in big_tab.values())]
    claim = f"classify({e.name})"
    growth = {}
    for n in usable:
        core = e.sublevel(n)
        ecore = levels_from_subset(space, core)
        v = equivalent(e, ecore, "coarse", window, radii=radii)
        if v.certified:
            k_table, realized = [], []
            ok = True
            for m in range(1, params.m_max + 1):
                pts_m = [x for x, lv in big_tab.items() if lv <= m]
                if not pts_m:
                    continue
                dmax = max(_expanding_dist_to_set(space, x, core) for x in pts_m)
                k = math.ceil(dmax)
                if k > params.k_max:
                    ok = False
                    break
                k_table.append((m, k))
                realized.append([m, rational_to_json(dmax)])
            if ok and k_table:
                return Verdict(
                    Status.CERTIFIED, claim, window=window, value="type-I",
                    witness=TabulatedWitness(tuple(k_table)),
                    diagnostics={"n": n, "k_table": [[m, k] for m, k in k_table],
                                 "series": realized,
                                 "equivalence": v.to_json()},
                    check_kind=CHECK_DOMINATES)
        growth[n] = _required_k_series(e, n, radii, window, params)
    all_grow = usable and all(
        len(g) >= 3 and all(b > a for a, b in zip(g, g[1:]))
        for g in (tuple(v for _, v in growth[n]) for n in usable))
    if all_grow:
        return Verdict(Status.INCONCLUSIVE, claim, window=window,
                       value="type-II-evidence",
                       diagnostics={"growth": {str(n): [[rational_to_json(r),
                                                         rational_to_json(k)]
                                                        for r, k in growth[n]]
                                               for n in usable},
                                    "radii": [rational_to_json(r) for r in radii]})
    return Verdict(Status.INCONCLUSIVE, claim, window=window, value="unclassified",
                   diagnostics={"growth": {str(n): [[rational_to_json(r),
                                                     rational_to_json(k)]
                                                    for r, k in growth[n]]
                                           for n in usable}})


def _required_k_series(e, n, radii, window, params):
    """Minimal k with A_m cap W subset N_k(A_n), per radius, at the deepest
    sublevel m realized within that radius."""
    space = e.space
    core = e.sublevel(n)
    out = []
    for r in radii:
        tab = e.tabulate(Window(r, window.basepoint))
        if not tab:
            continue
        m_star = min(max(tab.values()), params.m_max)
        pts_m = [x for x, lv in tab.items() if lv <= m_star]
        if not pts_m:
            continue
        dmax = max(_expanding_dist_to_set(space, x, core) for x in pts_m)
        out.append((r, math.ceil(dmax)))
    return out
