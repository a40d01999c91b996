"""Admissible measures as exact density functionals with interval answers.

A density measure reports, per radius R of a growing schedule, the exact
rational mass ratio of a set inside the ball B_R.  Limits are never taken:
an interval collects the tail of the schedule.  The admissibility axiom
"bounded sets have measure zero" is enforced structurally: when a set's
window trace provably stopped growing along the schedule tail, its
per-radius value is reported as exactly 0 (raw counts stay in the report).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .boolalg import FormalSum
from .errors import DomainError
from .projection import (LevelFunction, join, levels_from_subset, meet,
                         unit_levels)
from .space import (MetricSpace, Point, PointSet, Rational, Window,
                    rational_to_json, window_points)

DEFAULT_SCHEDULE_BASE = 32
DEFAULT_SCHEDULE_STEPS = 6


def default_schedule(base: int = DEFAULT_SCHEDULE_BASE,
                     steps: int = DEFAULT_SCHEDULE_STEPS) -> List[int]:
    """Geometric radius schedule R, 2R, ..., 2^(steps-1) R."""
    return [base * 2 ** i for i in range(steps)]


@dataclass(frozen=True)
class DensityInterval:
    """Finitary liminf/limsup surrogate: min and max over the schedule tail."""

    lo: Rational
    hi: Rational
    series: tuple  # ((radius, value), ...)

    @classmethod
    def from_series(cls, series: Sequence) -> "DensityInterval":
        if not series:
            raise DomainError("empty density series")
        tail = list(series)[-math.ceil(len(series) / 2):]
        vals = [v for _, v in tail]
        return cls(min(vals), max(vals), tuple(series))

    def width(self) -> Rational:
        return self.hi - self.lo

    def contains(self, v: Rational) -> bool:
        return self.lo <= v <= self.hi

    def to_json(self):
        return {"lo": rational_to_json(self.lo), "hi": rational_to_json(self.hi),
                "series": [[rational_to_json(r), rational_to_json(v)]
                           for r, v in self.series]}


class DensityMeasure:
    """Counting (or weighted) density within balls around the basepoint."""

    def __init__(self, space: MetricSpace,
                 weight: Optional[Callable[[Point], Rational]] = None,
                 name: str = "natural"):
        self.space = space
        self.weight = weight
        self.name = name
        self._ball_cache = {}

    @classmethod
    def natural(cls, space: MetricSpace) -> "DensityMeasure":
        return cls(space)

    @classmethod
    def weighted(cls, space: MetricSpace, weight: Callable[[Point], Rational],
                 name: str) -> "DensityMeasure":
        return cls(space, weight=weight, name=name)

    def ball(self, radius: Rational) -> list:
        pts = self._ball_cache.get(radius)
        if pts is None:
            pts = window_points(self.space, Window(radius))
            self._ball_cache[radius] = pts
        return pts

    def mass(self, pts: Sequence[Point]) -> Rational:
        if self.weight is None:
            return len(pts)
        total = Fraction(0)
        for p in pts:
            w = self.weight(p)
            if w <= 0:
                raise DomainError("weights must be positive")
            total += w
        return total

    def ratio_series(self, members: Callable[[Point], bool],
                     schedule: Sequence[Rational]):
        """Per-radius (radius, ratio, member_mass) triples, exact."""
        out = []
        for r in schedule:
            ball = self.ball(r)
            inside = [p for p in ball if members(p)]
            m_in, m_all = self.mass(inside), self.mass(ball)
            ratio = Fraction(m_in, m_all) if self.weight is None else m_in / m_all
            out.append((r, ratio, m_in))
        return out

    def to_json(self):
        return {"measure": self.name, "space": self.space.to_json()}


def _bounded_evidence(masses: Sequence[Rational]) -> bool:
    """True when the member mass stopped growing along the schedule tail."""
    if len(masses) < 3:
        return False
    return masses[-3] == masses[-2] == masses[-1]


def density(mu: DensityMeasure, A: PointSet,
            schedule: Optional[Sequence[Rational]] = None) -> DensityInterval:
    """Exact per-radius density of A with a tail interval."""
    if schedule is None:
        schedule = default_schedule()
    if len(schedule) < 3:
        raise DomainError("schedule needs at least 3 radii")
    rows = mu.ratio_series(A.contains, schedule)
    return DensityInterval.from_series([(r, v) for r, v, _ in rows])


@dataclass
class NuHatReport:
    """Density limit surrogate of a projection along its sublevel sets."""

    interval: DensityInterval
    per_n: list
    am2_applied: list            # levels whose sublevel trace stopped growing
    monotone_exact: bool
    bounded_masses: list = field(default_factory=list)  # last masses they hid

    def to_json(self):
        return {"interval": self.interval.to_json(),
                "per_n": self.per_n,
                "am2_applied": self.am2_applied,
                "monotone_exact": self.monotone_exact}


def nu_hat(mu: DensityMeasure, e: LevelFunction, n_max: int = 8,
           schedule: Optional[Sequence[Rational]] = None) -> NuHatReport:
    """sup over n <= n_max of the (admissibility-adjusted) density of A_n.

    Per fixed radius the raw ratios are exactly monotone in n, so the sup is
    realized by the deepest sublevel; its adjusted series is the value.
    """
    if schedule is None:
        schedule = default_schedule()
    if len(schedule) < 3:
        raise DomainError("schedule needs at least 3 radii")
    per_n, am2, hidden = [], [], []
    monotone = True
    prev_raw = None
    final_values = None
    for n in range(1, n_max + 1):
        rows = mu.ratio_series(lambda p, n=n: e.level(p) <= n, schedule)
        raws = [v for _, v, _ in rows]
        masses = [m for _, _, m in rows]
        bounded = _bounded_evidence(masses)
        if bounded:
            am2.append(n)
            hidden.append(masses[-1])
        if prev_raw is not None and any(a < b for a, b in zip(raws, prev_raw)):
            monotone = False
        prev_raw = raws
        final_values = [0 if bounded else v for v in raws]
        per_n.append({"n": n, "bounded": bounded,
                      "series": [[rational_to_json(r), rational_to_json(v)]
                                 for r, v, _ in rows],
                      "masses": [rational_to_json(m) for m in masses]})
    series = list(zip(schedule, final_values))
    return NuHatReport(DensityInterval.from_series(series), per_n, am2,
                       monotone, bounded_masses=hidden)


def nu_bar(mu: DensityMeasure, s: FormalSum, n_max: int = 8,
           schedule: Optional[Sequence[Rational]] = None) -> dict:
    """Inclusion-exclusion extension to mod-2 sums of projections.

    nu_bar(e_1 + ... + e_n) = sum_i (-2)^(i-1) sigma_i, where sigma_i sums
    nu_hat over the meets of all properly monotone i-tuples.  Everything is
    computed per radius as an exact rational before the interval is taken.
    """
    if schedule is None:
        schedule = default_schedule()
    entries = list(s.terms)
    if not entries:
        zero = [(r, 0) for r in schedule]
        return {"interval": DensityInterval.from_series(zero).to_json(),
                "sigma": [], "sum": s.label(),
                "series": [[rational_to_json(r), 0] for r in schedule]}
    gens = s.generators
    totals = [Fraction(0)] * len(schedule)
    sigma_report = []
    for size in range(1, len(entries) + 1):
        coeff = (-2) ** (size - 1)
        sigma_vals = [Fraction(0)] * len(schedule)
        for combo in itertools.combinations(range(len(entries)), size):
            m = gens[entries[combo[0]]]
            for pos in combo[1:]:
                m = meet(m, gens[entries[pos]])
            vals = [v for _, v in nu_hat(mu, m, n_max, schedule).interval.series]
            sigma_vals = [a + b for a, b in zip(sigma_vals, vals)]
        totals = [t + coeff * sv for t, sv in zip(totals, sigma_vals)]
        sigma_report.append({"i": size,
                             "sigma": [rational_to_json(v) for v in sigma_vals]})
    series = list(zip(schedule, totals))
    return {"interval": DensityInterval.from_series(series).to_json(),
            "sigma": sigma_report, "sum": s.label(),
            "series": [[rational_to_json(r), rational_to_json(v)]
                       for r, v in series]}


def _am2_slack(mu: DensityMeasure, reports: Sequence[NuHatReport],
               schedule: Sequence[Rational]) -> Rational:
    """Largest per-radius mass ratio hidden by the bounded-set adjustment."""
    tail_r = schedule[-math.ceil(len(schedule) / 2)]
    total = mu.mass(mu.ball(tail_r))
    slack = Fraction(0)
    for rep in reports:
        for m in rep.bounded_masses:
            if total:
                slack = max(slack, Fraction(m, total) if mu.weight is None
                            else m / total)
    return slack


def check_modularity(mu: DensityMeasure, e: LevelFunction, f: LevelFunction,
                     n_max: int = 8,
                     schedule: Optional[Sequence[Rational]] = None) -> dict:
    """(n3) modular law plus the (m2) complement law.

    Raw counts satisfy |meet| + |join| = |A| + |B| exactly per radius and
    level; the adjusted identity holds within the admissibility slack; (m2)
    is exact per radius through the mod-2 complement 1 + e.
    """
    if schedule is None:
        schedule = default_schedule()
    raw_exact = True
    for r in schedule:
        ball = mu.ball(r)
        for n in range(1, n_max + 1):
            in_e = [p for p in ball if e.level(p) <= n]
            in_f = [p for p in ball if f.level(p) <= n]
            in_meet = [p for p in in_e if f.level(p) <= n]
            in_join = [p for p in ball if min(e.level(p), f.level(p)) <= n]
            if mu.mass(in_meet) + mu.mass(in_join) != mu.mass(in_e) + mu.mass(in_f):
                raw_exact = False
    he = nu_hat(mu, e, n_max, schedule)
    hf = nu_hat(mu, f, n_max, schedule)
    hm = nu_hat(mu, meet(e, f), n_max, schedule)
    hj = nu_hat(mu, join(e, f), n_max, schedule)
    hidden = sum(m for rep in (he, hf, hm, hj) for m in rep.bounded_masses[-1:])
    worst = Fraction(0)
    adjusted_ok = True
    slack = Fraction(0)
    for i, r in enumerate(schedule):
        lhs = hm.interval.series[i][1] + hj.interval.series[i][1]
        rhs = he.interval.series[i][1] + hf.interval.series[i][1]
        gap = abs(lhs - rhs)
        total = mu.mass(mu.ball(r))
        slack_r = (Fraction(hidden, total) if mu.weight is None
                   else hidden / total) if total else Fraction(0)
        slack = max(slack, slack_r)
        worst = max(worst, gap)
        adjusted_ok = adjusted_ok and gap <= slack_r
    unit = unit_levels(mu.space)
    m2 = nu_bar(mu, FormalSum((unit, e), (0, 1)), n_max, schedule)
    m2_expected = [[rational_to_json(r), rational_to_json(1 - v)]
                   for r, v in he.interval.series]
    m2_ok = m2_expected == m2["series"]
    return {"raw_exact_per_radius": raw_exact,
            "adjusted_within_slack": adjusted_ok,
            "slack": rational_to_json(slack),
            "worst_gap": rational_to_json(worst),
            "m2_complement_exact": m2_ok,
            "passed": raw_exact and adjusted_ok and m2_ok}


def measure0_check(mu: DensityMeasure, e: LevelFunction, n_max: int = 8,
                   schedule: Optional[Sequence[Rational]] = None) -> dict:
    """Compare nu_hat(e) with the sup over n of nu_hat of the neighborhood
    sequences of its own sublevel sets."""
    if schedule is None:
        schedule = default_schedule()
    lhs = nu_hat(mu, e, n_max, schedule)
    rhs_intervals = []
    sup_lo, sup_hi = Fraction(0), Fraction(0)
    for n in range(1, n_max + 1):
        en = levels_from_subset(mu.space, e.sublevel(n))
        rep = nu_hat(mu, en, n_max, schedule)
        rhs_intervals.append({"n": n, "interval": rep.interval.to_json()})
        sup_lo = max(sup_lo, rep.interval.lo)
        sup_hi = max(sup_hi, rep.interval.hi)
    tol = max(lhs.interval.width(), sup_hi - sup_lo) \
        + _am2_slack(mu, [lhs], schedule) + _fattening_slack(mu, schedule, n_max)
    gap = max(abs(sup_lo - lhs.interval.lo), abs(sup_hi - lhs.interval.hi))
    return {"lhs": lhs.interval.to_json(),
            "rhs_sup": {"lo": rational_to_json(sup_lo), "hi": rational_to_json(sup_hi)},
            "rhs_per_n": rhs_intervals,
            "tolerance": rational_to_json(tol),
            "gap": rational_to_json(gap),
            "passed": gap <= tol}


def _fattening_slack(mu: DensityMeasure, schedule, n_max: int) -> Rational:
    """Mass of the n_max/2-step boundary fattening that separates a sublevel
    set from its own neighborhood sequence, at the smallest tail radius."""
    tail_r = schedule[-math.ceil(len(schedule) / 2)]
    ball = mu.ball(tail_r)
    total = mu.mass(ball)
    if not total or not ball:
        return Fraction(0)
    unit = 1 if mu.weight is None else max(mu.weight(p) for p in ball)
    width = n_max // 2 + 1
    return Fraction(width * unit, total) if mu.weight is None \
        else (width * unit) / total
