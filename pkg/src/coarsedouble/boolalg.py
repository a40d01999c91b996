"""Finite Boolean fragment generated by projections, and its Stone-dual points.

Atoms of the subalgebra generated by e_1..e_k are meets of generators and
complements.  An atom pattern S is nonzero exactly when the meet over S is
not below the join over the complement of S, which the equivalence engine
decides with window certificates.  Two-valued homomorphisms correspond to
the certified-nonzero atoms.  Free ultrafilters are replaced by explicit
filter bases with tri-state decisions; nothing choice-dependent is ever
claimed to be constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .asymptotics import equivalent, sweep_radii
from .errors import DomainError, SearchInconclusive
from .projection import (LevelFunction, join, meet, unit_levels, zero_levels)
from .space import (MetricSpace, Point, PointSet, Window, rational_to_json,
                    window_points)
from .verdicts import (CHECK_DOMINATES, CHECK_STABLE, CHECK_STRICT_GROWTH,
                       Status, TabulatedWitness, Verdict)


@dataclass(frozen=True)
class FormalSum:
    """Mod-2 sum of generators; duplicate indices are kept so cancellation
    laws can be exercised, with mod-2 reduction applied at evaluation."""

    generators: tuple
    terms: tuple  # indices into generators, 0-based, duplicates allowed

    def __post_init__(self):
        for i in self.terms:
            if not (0 <= i < len(self.generators)):
                raise DomainError(f"term index {i} out of range")

    def reduced(self) -> frozenset:
        out = set()
        for i in self.terms:
            out.symmetric_difference_update({i})
        return frozenset(out)

    def label(self) -> str:
        return " + ".join(self.generators[i].name for i in self.terms) or "0"


@dataclass(frozen=True)
class AtomPattern:
    """Meet of the generators in S and the complements of the rest."""

    members: frozenset
    width: int

    def __post_init__(self):
        if any(not (1 <= i <= self.width) for i in self.members):
            raise DomainError("atom pattern indices must lie in 1..k")

    @classmethod
    def from_bits(cls, bits: str) -> "AtomPattern":
        return cls(frozenset(i + 1 for i, b in enumerate(bits) if b == "1"), len(bits))

    def bits(self) -> str:
        return "".join("1" if i in self.members else "0"
                       for i in range(1, self.width + 1))

    def __str__(self):
        return self.bits()


@dataclass(frozen=True)
class TwoValuedHom:
    """Assignment of 0/1 to the generators, arising from a nonzero atom."""

    names: tuple
    assignment: tuple

    def __post_init__(self):
        if len(self.names) != len(self.assignment):
            raise DomainError("assignment length mismatch")
        if any(v not in (0, 1) for v in self.assignment):
            raise DomainError("two-valued homs take values in {0, 1}")

    def value(self, index: int) -> int:
        return self.assignment[index]

    def to_json(self):
        return {"assignment": {n: v for n, v in zip(self.names, self.assignment)}}


def _meet_over(gens: Sequence[LevelFunction], indices, space: MetricSpace) -> LevelFunction:
    chosen = [gens[i - 1] for i in sorted(indices)]
    if not chosen:
        return unit_levels(space)
    out = chosen[0]
    for e in chosen[1:]:
        out = meet(out, e)
    return out


def _join_over(gens: Sequence[LevelFunction], indices, space: MetricSpace) -> LevelFunction:
    chosen = [gens[i - 1] for i in sorted(indices)]
    if not chosen:
        return zero_levels(space)
    out = chosen[0]
    for e in chosen[1:]:
        out = join(out, e)
    return out


def _below(e: LevelFunction, f: LevelFunction, window: Window,
           radii: Optional[list] = None) -> Verdict:
    """Order test e <= f via meet(e, f) ~ e (coarse)."""
    return equivalent(meet(e, f), e, "coarse", window, radii=radii)


def atom_nonzero(pattern: AtomPattern, gens: Sequence[LevelFunction],
                 window: Window, radii: Optional[list] = None) -> Verdict:
    """Decide whether the atom is nonzero: NOT (meet over S <= join over S^c).

    S empty tests join != 1; S full tests meet != 0.
    """
    if pattern.width != len(gens):
        raise DomainError("pattern width does not match generator count")
    space = gens[0].space
    M = _meet_over(gens, pattern.members, space)
    comp = set(range(1, pattern.width + 1)) - pattern.members
    J = _join_over(gens, comp, space)
    order = _below(M, J, window, radii=radii)
    claim = f"atom({pattern.bits()})"
    diagnostics = {"pattern": pattern.bits(), "order_test": order.to_json()}
    if order.certified:
        return Verdict(Status.CERTIFIED, claim, window=window, value="zero",
                       witness=order.witness,
                       diagnostics=dict(diagnostics, series=order.diagnostics["series"]),
                       check_kind=CHECK_DOMINATES)
    escapes = order.diagnostics.get("escape", [])
    if escapes:
        growth = escapes[0]
        series = [[i, v] for i, v in enumerate(growth["growth"])]
        return Verdict(Status.CERTIFIED, claim, window=window, value="nonzero",
                       witness=TabulatedWitness(tuple((i, v) for i, v in series)),
                       diagnostics=dict(diagnostics, series=series,
                                        escape_level=growth["n"]),
                       check_kind=CHECK_STRICT_GROWTH)
    return Verdict(Status.INCONCLUSIVE, claim, window=window, value="undetermined",
                   diagnostics=diagnostics)


def enumerate_atoms(gens: Sequence[LevelFunction], window: Window,
                    radii: Optional[list] = None) -> List[Tuple[AtomPattern, Verdict]]:
    """All 2^k atom patterns with verdicts, in binary order of the bit string."""
    k = len(gens)
    if k > 16:
        raise DomainError("atom enumeration is limited to 16 generators")
    if k == 0:
        raise DomainError("need at least one generator")
    out = []
    for s in range(2 ** k):
        bits = format(s, f"0{k}b")
        pattern = AtomPattern.from_bits(bits)
        out.append((pattern, atom_nonzero(pattern, gens, window, radii=radii)))
    return out


def homs(gens: Sequence[LevelFunction], window: Window,
         radii: Optional[list] = None) -> List[TwoValuedHom]:
    """One two-valued homomorphism per certified-nonzero atom."""
    names = tuple(e.name for e in gens)
    out = []
    for pattern, verdict in enumerate_atoms(gens, window, radii=radii):
        if verdict.certified and verdict.value == "nonzero":
            out.append(TwoValuedHom(
                names, tuple(1 if i in pattern.members else 0
                             for i in range(1, len(gens) + 1))))
    return out


def extend_hom(phi: TwoValuedHom, s: FormalSum) -> int:
    """Mod-2 extension: phi(e_1 + ... + e_n) = sum of phi(e_i) mod 2."""
    for e in s.generators:
        if e.name not in phi.names:
            raise DomainError(f"generator {e.name} is foreign to this hom")
    total = 0
    for i in s.terms:
        total ^= phi.value(phi.names.index(s.generators[i].name))
    return total


def check_hom(phi: TwoValuedHom, gens: Sequence[LevelFunction], window: Window,
              pairs: Optional[list] = None, radii: Optional[list] = None) -> dict:
    """Verify lattice-hom consistency of an assignment against window verdicts.

    Checks: meets certified zero force min(phi) = 0; joins certified full
    force max(phi) = 1 (unitality); certified order forces monotonicity.
    """
    if len(gens) != len(phi.assignment):
        raise DomainError("assignment does not match generators")
    space = gens[0].space
    unit = unit_levels(space)
    violations = []
    if pairs is None:
        pairs = [(i, j) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    for i, j in pairs:
        m = meet(gens[i], gens[j])
        zero_v = _below(m, zero_levels(space), window, radii=radii)
        if zero_v.certified and min(phi.value(i), phi.value(j)) == 1:
            violations.append({"pair": [gens[i].name, gens[j].name],
                               "check": "meet-zero", "min": 1, "expected": 0})
        jn = join(gens[i], gens[j])
        one_v = _below(unit, jn, window, radii=radii)
        if one_v.certified and max(phi.value(i), phi.value(j)) == 0:
            violations.append({"pair": [gens[i].name, gens[j].name],
                               "check": "join-one", "max": 0, "expected": 1})
        le = _below(gens[i], gens[j], window, radii=radii)
        if le.certified and phi.value(i) > phi.value(j):
            violations.append({"pair": [gens[i].name, gens[j].name],
                               "check": "order", "phi": [phi.value(i), phi.value(j)]})
    full_join = _join_over(gens, range(1, len(gens) + 1), space)
    if _below(unit, full_join, window, radii=radii).certified \
            and max(phi.assignment, default=0) == 0:
        violations.append({"check": "unitality", "expected": "phi(1) = 1"})
    full_meet = _meet_over(gens, range(1, len(gens) + 1), space)
    if _below(full_meet, zero_levels(space), window, radii=radii).certified \
            and min(phi.assignment, default=1) == 1:
        violations.append({"check": "full-meet-zero", "expected": "phi(0) = 0"})
    return {"passed": not violations, "violations": violations,
            "pairs_checked": len(pairs)}


# ---------------------------------------------------------------------------
# Filter bases and the limit functional


class FilterBase:
    """Decreasing chain F_1 >= F_2 >= ... of infinite sets; a computable
    surrogate for a free ultrafilter containing all F_k."""

    def __init__(self, name: str, member_set: Callable[[int], PointSet], depth: int = 8):
        self.name = name
        self.member_set = member_set
        self.depth = depth

    def level_set(self, k: int) -> PointSet:
        if not (1 <= k <= self.depth):
            raise DomainError(f"filter index {k} out of range 1..{self.depth}")
        return self.member_set(k)

    def validate(self, space: MetricSpace, window: Window) -> dict:
        """Window evidence for the chain conditions: decreasing and nonempty."""
        pts = window_points(space, window)
        traces = []
        for k in range(1, self.depth + 1):
            fk = self.level_set(k)
            traces.append({x for x in pts if fk.contains(x)})
        decreasing = all(b <= a for a, b in zip(traces, traces[1:]))
        return {"decreasing": decreasing,
                "trace_sizes": [len(t) for t in traces],
                "passed": decreasing}


def powers_tail_base(base: int, scale: int = 1, depth: int = 8) -> FilterBase:
    from .space import set_family
    return FilterBase(
        f"tails({scale}*{base}^j)",
        lambda k: set_family("powers_tail", base=base, scale=scale, k0=k),
        depth=depth)


def tau(F: FilterBase, e: LevelFunction, window: Window, n_max: int = 8,
        radii: Optional[list] = None) -> Verdict:
    """Limit of the base's membership decisions along the expanding sequence.

    1: some F_k is eventually inside some A_n (remainder count stable under
    the sweep).  0: for every n <= n_max some F_k meets A_n in a
    stable-finite set.  Otherwise undetermined, with the count matrix.
    """
    space = e.space
    if radii is None:
        radii = sweep_radii(window)
    base = window.basepoint

    def counts(k: int, n: int):
        rem, hits = [], []
        for r in radii:
            pts = window_points(space, Window(r, base))
            fk = F.level_set(k)
            members = [x for x in pts if fk.contains(x)]
            inside = [x for x in members if e.level(x) <= n]
            rem.append(len(members) - len(inside))
            hits.append(len(inside))
        return rem, hits

    matrix = {}
    for k in range(1, F.depth + 1):
        for n in range(1, n_max + 1):
            matrix[(k, n)] = counts(k, n)

    claim = f"tau({F.name}, {e.name})"
    diag_matrix = {f"k={k},n={n}": {"remainder": rem, "inside": hits}
                   for (k, n), (rem, hits) in sorted(matrix.items())}
    # value 1: remainder stabilizes (F_k eventually inside A_n plus a fixed
    # finite exceptional set)
    for n in range(1, n_max + 1):
        for k in range(1, F.depth + 1):
            rem, _ = matrix[(k, n)]
            if len(set(rem)) == 1 and any(h > 0 for h in matrix[(k, n)][1]):
                series = [[rational_to_json(r), c] for r, c in zip(radii, rem)]
                return Verdict(Status.CERTIFIED, claim, window=window, value=1,
                               witness=TabulatedWitness(((n, rem[0]),)),
                               diagnostics={"n": n, "k": k, "series": series,
                                            "matrix": diag_matrix},
                               check_kind=CHECK_STABLE)
    # value 0: every sublevel is eventually avoided up to a stable finite set
    chosen = {}
    for n in range(1, n_max + 1):
        got = None
        for k in range(1, F.depth + 1):
            _, hits = matrix[(k, n)]
            if len(set(hits)) == 1:
                got = (k, hits[0])
                break
        if got is None:
            chosen = None
            break
        chosen[n] = got
    if chosen is not None:
        series = [[rational_to_json(r),
                   sum(matrix[(chosen[n][0], n)][1][i] for n in chosen)]
                  for i, r in enumerate(radii)]
        return Verdict(Status.CERTIFIED, claim, window=window, value=0,
                       witness=TabulatedWitness(tuple((n, c) for n, (k, c)
                                                      in sorted(chosen.items()))),
                       diagnostics={"choices": {str(n): {"k": k, "count": c}
                                                for n, (k, c) in sorted(chosen.items())},
                                    "series": series, "matrix": diag_matrix},
                       check_kind=CHECK_STABLE)
    return Verdict(Status.INCONCLUSIVE, claim, window=window, value="undetermined",
                   diagnostics={"matrix": diag_matrix})


def separating_set(e: LevelFunction, window: Window,
                   n_cap: Optional[int] = None) -> Tuple[PointSet, dict]:
    """Greedy pick of window points far from successive sublevel sets.

    Picks x_n with d_X(x_n, A_n cap W) > n for n as far as the window allows;
    returns the set with achieved margins.  Fails when even n = 1 admits no
    separated point (e is close to the unit on this window).
    """
    space = e.space
    pts = window_points(space, window)
    levels = {x: e.level(x) for x in pts}
    if n_cap is None:
        n_cap = max(levels.values(), default=1)
    picked, margins = [], {}
    for n in range(1, n_cap + 1):
        members = [x for x in pts if levels[x] <= n]
        if not members:
            continue
        best_x, best_d = None, None
        for x in pts:
            dmin = min(space.distance(x, a) for a in members)
            if best_d is None or dmin > best_d or (dmin == best_d and x < best_x):
                best_x, best_d = x, dmin
        if best_d is not None and best_d > n:
            picked.append(best_x)
            margins[n] = best_d
        else:
            break
    if not picked:
        raise SearchInconclusive(
            "no separated points on this window (level function close to the unit)",
            window_radius=window.radius)
    return (PointSet.from_points(picked, name=f"sep({e.name})"),
            {n: rational_to_json(m) for n, m in margins.items()})
