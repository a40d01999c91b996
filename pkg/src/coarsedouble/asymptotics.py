"""Window-certified verdicts for asymptotic comparisons of level functions.

Certification policy.  Every claim is evaluated at three nested radii
(R/4, R/2, R).  A transfer entry is *stable* when its value agrees at the
two largest radii; sublevel sets only gain points as the radius grows, so a
stable entry has stopped moving.  Equivalence is certified only when the
stable entries dominate the comparison (at least the fraction
STABLE_FRACTION of the common table, including its smallest entry);
quasi-equivalence additionally requires the minimal affine witness itself
to be stable.  Escape evidence means some fixed entry grew strictly at
every radius step.  None of this claims a limit: a certificate is always a
finite inequality system that re-validates by substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import DomainError
from .space import MetricSpace, Rational, Window, rational_to_json, window_points
from .verdicts import (CHECK_DOMINATES, AffineWitness, Status, TabulatedWitness,
                       Verdict)

STABLE_FRACTION = Fraction(2, 3)

DEFAULT_ALPHAS = tuple(range(0, 9))
DEFAULT_BETAS = tuple(range(1, 9))


def default_grid():
    """Affine witness grid, searched beta-major so minimal witnesses come first."""
    return [(a, b) for b in DEFAULT_BETAS for a in DEFAULT_ALPHAS]


def sweep_radii(window: Window) -> list:
    """Three nested radii R/16, R/4, R.  Factor-4 steps guarantee that even
    exponentially spaced spaces gain points at every step, so stability and
    strict growth are sampled meaningfully."""
    r = window.radius
    radii = sorted({_simplify(max(1, Fraction(r) / 16)),
                    _simplify(max(1, Fraction(r) / 4)),
                    _simplify(Fraction(r))})
    return radii


def _simplify(v: Fraction) -> Rational:
    return int(v) if v.denominator == 1 else v


@dataclass(frozen=True)
class TransferTable:
    """T(n) = max level of e2 over points with e1-level <= n, on a window.

    Entries are kept at realized source levels; T is the step extension.
    """

    entries: tuple  # sorted ((n, value), ...)

    @classmethod
    def from_levels(cls, pairs: Iterable) -> "TransferTable":
        by_source = sorted(pairs)
        entries = []
        running = None
        for n, v in by_source:
            if running is None or v > running:
                running = v if running is None else max(running, v)
            if entries and entries[-1][0] == n:
                entries[-1] = (n, running)
            else:
                entries.append((n, running))
        # drop interior entries that repeat the running maximum
        compact = []
        for n, v in entries:
            if not compact or v != compact[-1][1]:
                compact.append((n, v))
        return cls(tuple(compact))

    def value_at(self, n) -> Optional[Rational]:
        out = None
        for nn, vv in self.entries:
            if nn <= n:
                out = vv
            else:
                break
        return out

    def jumps(self):
        return [n for n, _ in self.entries]

    def max_n(self):
        return self.entries[-1][0] if self.entries else None

    def series(self):
        return list(self.entries)

    def to_json(self):
        return [[rational_to_json(n), rational_to_json(v)] for n, v in self.entries]


def level_table(e, space: MetricSpace, window: Window) -> dict:
    return {x: e.level(x) for x in window_points(space, window)}


def transfer(e1, e2, window: Window) -> TransferTable:
    """Transfer table of e1 against e2 on the window; exact."""
    space = _common_space(e1, e2)
    tab1 = level_table(e1, space, window)
    if not tab1:
        return TransferTable(())
    tab2 = {x: e2.level(x) for x in tab1}
    return TransferTable.from_levels((tab1[x], tab2[x]) for x in tab1)


def _common_space(e1, e2) -> MetricSpace:
    if e1.space != e2.space:
        raise DomainError("level functions live on different spaces")
    return e1.space


def _merged_samples(t12: TransferTable, t21: TransferTable) -> dict:
    """max of both step tables, sampled at the union of their jumps.

    Value runs are compacted to their first sample so that a single growing
    top entry is not counted once per plateau point.
    """
    ns = sorted(set(t12.jumps()) | set(t21.jumps()))
    out = {}
    prev = None
    for n in ns:
        vals = [v for v in (t12.value_at(n), t21.value_at(n)) if v is not None]
        if not vals:
            continue
        v = max(vals)
        if v != prev:
            out[n] = v
            prev = v
    return out


def _stability(mid: dict, last: dict):
    """Classify common samples as stable/unstable between the two largest radii."""
    caps = [m for m in (max(mid, default=None), max(last, default=None)) if m is not None]
    if not caps:
        return [], [], Fraction(0)
    cap = min(caps)
    common = sorted(n for n in set(mid) | set(last) if n <= cap)
    stable, unstable = [], []
    for n in common:
        if mid.get(n) is not None and mid.get(n) == last.get(n):
            stable.append(n)
        else:
            unstable.append(n)
    frac = Fraction(len(stable), len(common)) if common else Fraction(0)
    return stable, unstable, frac


def _escape_entries(samples_by_radius: Sequence[dict]):
    """Entries that grew strictly at every radius step."""
    if len(samples_by_radius) < 3:
        return []
    first = samples_by_radius[0]
    out = []
    common = set(first)
    for s in samples_by_radius[1:]:
        common &= set(s)
    for n in sorted(common):
        vals = [s[n] for s in samples_by_radius]
        if all(b > a for a, b in zip(vals, vals[1:])):
            out.append((n, vals))
    return out


def _direction_escapes(tables: Sequence[TransferTable]):
    """Fixed levels whose transfer value grows strictly at every radius step,
    evaluated directionwise on the step tables."""
    if len(tables) < 3:
        return []
    ns = sorted({n for t in tables for n in t.jumps()})
    out = []
    for n in ns:
        vals = [t.value_at(n) for t in tables]
        if any(v is None for v in vals):
            continue
        if all(b > a for a, b in zip(vals, vals[1:])):
            out.append((n, vals))
    return out


def _minimal_affine(series, grid) -> Optional[AffineWitness]:
    for alpha, beta in grid:
        if all(v <= beta * n + alpha for n, v in series):
            return AffineWitness(alpha, beta)
    return None


def equivalent(e1, e2, mode: str, window: Window,
               grid: Optional[list] = None,
               radii: Optional[list] = None) -> Verdict:
    """Certify [e1] == [e2] (quasi or coarse) from transfer tables.

    In quasi mode the certificate is a single affine witness dominating
    both transfer directions; in coarse mode it is the merged tabulated
    transfer function.  Both require the three-radius stability policy.
    """
    if mode not in ("quasi", "coarse"):
        raise DomainError(f"unknown equivalence mode {mode!r}")
    if grid is None:
        grid = default_grid()
    _common_space(e1, e2)
    if radii is None:
        radii = sweep_radii(window)
    per_radius = []
    for r in radii:
        w = Window(r, window.basepoint)
        t12 = transfer(e1, e2, w)
        t21 = transfer(e2, e1, w)
        per_radius.append({"radius": r, "t12": t12, "t21": t21,
                           "merged": _merged_samples(t12, t21)})
    merged_list = [p["merged"] for p in per_radius]
    mid, last = merged_list[-2] if len(merged_list) > 1 else {}, merged_list[-1]
    stable, unstable, frac = _stability(mid, last)
    escapes = (_direction_escapes([p["t12"] for p in per_radius])
               + _direction_escapes([p["t21"] for p in per_radius]))
    claim = f"equivalent[{mode}]({_name(e1)}, {_name(e2)})"
    series = sorted(last.items())
    diagnostics = {
        "radii": [rational_to_json(r) for r in radii],
        "tables": [{"radius": rational_to_json(p["radius"]),
                    "t12": p["t12"].to_json(), "t21": p["t21"].to_json()}
                   for p in per_radius],
        "series": [[n, v] for n, v in series],
        "stable_fraction": rational_to_json(frac) if series else 0,
        "unstable": [rational_to_json(n) for n in unstable],
        "escape": [{"n": rational_to_json(n),
                    "growth": [rational_to_json(v) for v in vals]}
                   for n, vals in escapes],
    }
    if not series:
        return Verdict(Status.INCONCLUSIVE, claim, window=window, value=mode,
                       diagnostics=dict(diagnostics, reason="empty window"))
    table_stable = bool(stable) and frac >= STABLE_FRACTION and min(series)[0] in stable
    if mode == "coarse":
        if table_stable:
            return Verdict(Status.CERTIFIED, claim, window=window, value=mode,
                           witness=TabulatedWitness(tuple(series)),
                           diagnostics=diagnostics, check_kind=CHECK_DOMINATES)
        reason = "escape" if escapes and not stable else "unstable transfer"
        return Verdict(Status.INCONCLUSIVE, claim, window=window, value=mode,
                       diagnostics=dict(diagnostics, reason=reason))
    witnesses = [_minimal_affine(sorted(m.items()), grid) for m in merged_list]
    diagnostics["minimal_witnesses"] = [w.to_json() if w else None for w in witnesses]
    w_mid, w_last = witnesses[-2] if len(witnesses) > 1 else None, witnesses[-1]
    if table_stable and w_last is not None and w_mid == w_last:
        return Verdict(Status.CERTIFIED, claim, window=window, value=mode,
                       witness=w_last, diagnostics=diagnostics,
                       check_kind=CHECK_DOMINATES)
    if w_last is None:
        reason = "no affine witness in grid"
    elif not table_stable:
        reason = "escape" if escapes and not stable else "unstable transfer"
    else:
        reason = "degrading affine witness"
    return Verdict(Status.INCONCLUSIVE, claim, window=window, value=mode,
                   diagnostics=dict(diagnostics, reason=reason))


def _name(e):
    return getattr(e, "name", repr(e))


def is_zero(e, mode: str, window: Window, n_max: int = 8,
            grid: Optional[list] = None,
            radii: Optional[list] = None) -> Verdict:
    """Certify that e is the zero class: every sublevel set stays bounded.

    The boundedness surrogate is the per-level radius sup around the space
    basepoint, required to be unchanged across the three-radius sweep.
    Escape (a sup that grows at every step) is reported as evidence, never
    as a hard falsification.
    """
    if mode not in ("quasi", "coarse"):
        raise DomainError(f"unknown zero-test mode {mode!r}")
    if grid is None:
        grid = default_grid()
    space = e.space
    x0 = space.basepoint
    if radii is None:
        radii = sweep_radii(window)
    sups_by_radius = []
    for r in radii:
        tab = level_table(e, space, Window(r, window.basepoint))
        sups = {}
        for n in range(1, n_max + 1):
            ds = [space.distance(x, x0) for x, lv in tab.items() if lv <= n]
            if ds:
                sups[n] = max(ds)
        sups_by_radius.append(sups)
    last = sups_by_radius[-1]
    claim = f"is-zero[{mode}]({_name(e)})"
    series = sorted(last.items())
    escapes = _escape_entries(sups_by_radius)
    stable_all = True
    for n in range(1, n_max + 1):
        vals = [s.get(n) for s in sups_by_radius]
        defined = [v for v in vals if v is not None]
        if not defined:
            continue
        if any(v != defined[0] for v in defined):
            stable_all = False
            break
        # a level visible at a smaller radius must stay visible later
        if vals[-1] is None:
            stable_all = False
            break
    diagnostics = {
        "radii": [rational_to_json(r) for r in radii],
        "sups": [{rational_to_json(n): rational_to_json(v) for n, v in s.items()}
                 for s in sups_by_radius],
        "series": [[n, v] for n, v in series],
        "escape": [{"n": rational_to_json(n),
                    "growth": [rational_to_json(v) for v in vals]}
                   for n, vals in escapes],
    }
    if not series:
        # no sublevel realized at all: vacuously bounded on this window
        return Verdict(Status.CERTIFIED, claim, window=window, value="zero",
                       witness=TabulatedWitness(((1, 0),)),
                       diagnostics=diagnostics, check_kind=CHECK_DOMINATES)
    if stable_all:
        if mode == "coarse":
            return Verdict(Status.CERTIFIED, claim, window=window, value="zero",
                           witness=TabulatedWitness(tuple(series)),
                           diagnostics=diagnostics, check_kind=CHECK_DOMINATES)
        witnesses = [_minimal_affine(sorted(s.items()), grid) for s in sups_by_radius]
        diagnostics["minimal_witnesses"] = [w.to_json() if w else None for w in witnesses]
        w_mid, w_last = witnesses[-2] if len(witnesses) > 1 else None, witnesses[-1]
        if w_last is not None and w_mid == w_last:
            return Verdict(Status.CERTIFIED, claim, window=window, value="zero",
                           witness=w_last, diagnostics=diagnostics,
                           check_kind=CHECK_DOMINATES)
        return Verdict(Status.INCONCLUSIVE, claim, window=window, value="zero?",
                       diagnostics=dict(diagnostics, reason="no stable affine bound"))
    reason = "escaping sublevel sets" if escapes else "unstable sublevel radii"
    return Verdict(Status.INCONCLUSIVE, claim, window=window,
                   value="not-zero-evidence" if escapes else "zero?",
                   diagnostics=dict(diagnostics, reason=reason))


def sweep(claim: Callable[[Rational], Verdict], radii: Sequence[Rational]) -> Verdict:
    """Run a verdict-producing claim at each radius and annotate the trend.

    The final verdict is the last radius's verdict with the sweep history in
    its diagnostics.
    """
    radii = list(radii)
    if len(radii) < 3:
        raise DomainError("sweep needs at least 3 radii")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise DomainError("sweep radii must be strictly increasing")
    verdicts = [claim(r) for r in radii]
    wjsons = [v.witness.to_json() if v.witness else None for v in verdicts]
    statuses = [v.status.value for v in verdicts]
    if all(w == wjsons[0] for w in wjsons) and all(s == statuses[0] for s in statuses):
        trend = "stable"
    elif statuses[-1] == Status.CERTIFIED.value and all(
            s == Status.CERTIFIED.value for s in statuses):
        trend = "witness-drift"
    else:
        trend = "mixed"
    final = verdicts[-1]
    final.diagnostics = dict(final.diagnostics)
    final.diagnostics["sweep"] = {
        "radii": [rational_to_json(r) for r in radii],
        "statuses": statuses,
        "witnesses": wjsons,
        "trend": trend,
    }
    return final
