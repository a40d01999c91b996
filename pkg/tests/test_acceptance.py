"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Everything is exact rational arithmetic; no tolerance is floating.
Certified verdicts produced anywhere in this module are collected and
re-validated through the independent substitution checker at the end.
"""

import random
from fractions import Fraction

from coarsedouble import (MinGlueMetric, PointMetric, check_axioms, compose,
                          evaluate, evaluate_exact, join, levels_from_metric,
                          levels_from_subset, meet, metric_from_levels,
                          metric_join, projection_criterion, subset_metric,
                          unit_levels, zero_levels)
from coarsedouble.boolalg import check_hom, enumerate_atoms, homs
from coarsedouble.ideals import ApproximateUnit, check_au, recovery_transfer
from coarsedouble.measure import (DensityMeasure, check_modularity,
                                  default_schedule, nu_bar, nu_hat)
from coarsedouble.boolalg import FormalSum
from coarsedouble.scenarios import run_scenario
from coarsedouble.serialize import expression_levels
from coarsedouble.space import Window, set_family, space_by_name, window_points
from coarsedouble.verdicts import revalidate
from conftest import brute_delta_cross

VERDICTS = []


def _report(num, ok, text):
    print(f"ACCEPTANCE {num:02d}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num} failed: {text}"


def _level_pool(space, rng):
    makers = [
        lambda: levels_from_subset(space, set_family("evens")),
        lambda: levels_from_subset(space, set_family("odds")),
        lambda: levels_from_subset(space, set_family("squares")),
        lambda: levels_from_subset(space, set_family("powers", base=2)),
        lambda: levels_from_subset(space, set_family(
            "multiples", k=rng.randrange(2, 6), r=rng.randrange(2))),
        lambda: zero_levels(space),
        lambda: expression_levels(space, "ceil-sqrt"),
        lambda: expression_levels(space, "log2"),
    ]
    return rng.choice(makers)()


def _tails_pool(space, rng):
    makers = [
        lambda: levels_from_subset(space, set_family("tail_plus")),
        lambda: levels_from_subset(space, set_family("tail_minus")),
        lambda: zero_levels(space),
        lambda: unit_levels(space),
    ]
    return rng.choice(makers)()


def _random_delta_kernels():
    rng = random.Random(20240817)
    jobs = []
    nat, intl = space_by_name("NatLine"), space_by_name("IntLine")
    geo, tails = space_by_name("GeomLine"), space_by_name("TwoTails")
    for _ in range(8):
        jobs.append((nat, metric_from_levels(_level_pool(nat, rng)), Window(200)))
    for _ in range(8):
        jobs.append((intl, metric_from_levels(_level_pool(intl, rng)), Window(100)))
    for _ in range(2):
        jobs.append((geo, metric_from_levels(levels_from_subset(
            geo, set_family("powers", base=rng.choice([2, 4])))), Window(1024)))
    for _ in range(2):
        jobs.append((tails, metric_from_levels(_tails_pool(tails, rng)), Window(500)))
    return jobs


def test_criterion_01_metric_axioms():
    jobs = _random_delta_kernels()
    assert len(jobs) == 20
    big_windows = 0
    ok = True
    for space, kernel, window in jobs:
        rep = check_axioms(kernel, window)
        ok = ok and rep.passed and rep.exact
        if rep.n_points >= 200:
            big_windows += 1
    # the line spaces provide the >= 200-point windows; the geometric and
    # two-tails spaces are checked exhaustively at their radius budget
    ok = ok and big_windows >= 16
    _report(1, ok, f"check_axioms exact on 20 randomized delta kernels "
                   f"({big_windows} windows with >= 200 points)")


def test_criterion_02_oracle_equivalence():
    rng = random.Random(99)
    nat, intl = space_by_name("NatLine"), space_by_name("IntLine")
    total = 0
    ok = True
    delta_kernels = [
        (nat, metric_from_levels(levels_from_subset(nat, set_family("evens")))),
        (nat, metric_from_levels(levels_from_subset(nat, set_family("squares")))),
        (nat, metric_from_levels(zero_levels(nat))),
        (intl, metric_from_levels(levels_from_subset(intl, set_family("odds")))),
        (intl, metric_from_levels(levels_from_subset(
            intl, set_family("powers", base=2)))),
        (intl, metric_from_levels(expression_levels(intl, "ceil-sqrt"))),
    ]
    w = Window(60)
    for space, d in delta_kernels:
        pts = window_points(space, w)
        for _ in range(1100):
            x, y = rng.choice(pts), rng.choice(pts)
            got = evaluate(d, x, y, w)
            want = brute_delta_cross(space, d.delta, x, y, pts)
            ok = ok and got.value == want
            total += 1
    comp_pairs = [
        (nat, metric_from_levels(zero_levels(nat)),
         metric_from_levels(levels_from_subset(nat, set_family("evens")))),
        (nat, metric_from_levels(levels_from_subset(nat, set_family("squares")))
         , PointMetric(nat, (0,))),
        (intl, PointMetric(intl, (0,)),
         metric_from_levels(levels_from_subset(intl, set_family("odds")))),
        (intl, metric_from_levels(levels_from_subset(intl, set_family("evens"))),
         metric_from_levels(levels_from_subset(intl, set_family("squares")))),
    ]
    for space, d, rho in comp_pairs:
        pts = window_points(space, w)
        comp = compose(d, rho)
        dmat = {(x, y): evaluate(d, x, y, w).value for x in pts for y in pts}
        rmat = {(x, y): evaluate(rho, x, y, w).value for x in pts for y in pts}
        for _ in range(900):
            x, z = rng.choice(pts), rng.choice(pts)
            got = evaluate(comp, x, z, w)
            want = min(dmat[(x, y)] + rmat[(y, z)] for y in pts)
            ok = ok and got.value == want
            total += 1
    ok = ok and total >= 10 ** 4
    _report(2, ok, f"pruned eval equals window brute force on {total} triples")


def test_criterion_03_sandwich():
    nat = space_by_name("NatLine")
    intl = space_by_name("IntLine")
    kernels = [
        metric_from_levels(levels_from_subset(nat, set_family("evens"))),
        metric_from_levels(levels_from_subset(nat, set_family("squares"))),
        metric_from_levels(levels_from_subset(nat, set_family("powers", base=2))),
        metric_from_levels(zero_levels(nat)),
        metric_from_levels(expression_levels(nat, "ceil-sqrt")),
        metric_from_levels(levels_from_subset(intl, set_family("odds"))),
        PointMetric(nat, (0,)),
        PointMetric(intl, (3,)),
        subset_metric(nat, set_family("evens")),
        subset_metric(intl, set_family("squares")),
    ]
    ok = True
    for d in kernels:
        e = levels_from_metric(d)
        da = metric_from_levels(e)
        for x in window_points(d.space, Window(40)):
            n = e.level(x)
            v = evaluate_exact(da, x, x).value
            ok = ok and (n - 1 <= v <= n)
    _report(3, ok, "reconstruction sandwich n-1 <= d_A(x,x') <= n on 10 kernels")


def test_criterion_04_projection_criterion():
    nat = space_by_name("NatLine")
    intl = space_by_name("IntLine")
    deltas = [
        metric_from_levels(levels_from_subset(nat, set_family("evens"))),
        metric_from_levels(levels_from_subset(nat, set_family("squares"))),
        metric_from_levels(zero_levels(nat)),
        metric_from_levels(expression_levels(nat, "log2")),
        metric_from_levels(levels_from_subset(intl, set_family("odds"))),
        metric_from_levels(levels_from_subset(intl, set_family("powers", base=2))),
    ]
    glue_pairs = [
        (metric_from_levels(levels_from_subset(nat, set_family("multiples", k=4))),
         metric_from_levels(levels_from_subset(nat, set_family("multiples", k=4, r=2)))),
        (deltas[0], deltas[1]),
        (deltas[4], deltas[5]),
    ]
    kernels = deltas + [MinGlueMetric(a, b) for a, b in glue_pairs]
    ok = True
    for d in kernels:
        v = projection_criterion(d, Window(24), grid=[(0, 2)])
        VERDICTS.append(v)
        ok = ok and v.certified
        ok = ok and v.witness.to_json() == {"kind": "affine", "alpha": 0, "beta": 2}
    _report(4, ok, f"witness (0,2) certifies all {len(kernels)} delta and "
                   f"min-glue kernels")


def test_criterion_05_join_diagonal_min():
    nat = space_by_name("NatLine")
    w = Window(48)
    pairs = [
        (metric_from_levels(levels_from_subset(nat, set_family("multiples", k=4))),
         metric_from_levels(levels_from_subset(nat, set_family("multiples", k=4, r=2)))),
        (metric_from_levels(levels_from_subset(nat, set_family("evens"))),
         metric_from_levels(zero_levels(nat))),
        (metric_from_levels(levels_from_subset(nat, set_family("squares"))),
         metric_from_levels(levels_from_subset(nat, set_family("powers", base=2)))),
    ]
    ok = True
    for d1, d2 in pairs:
        dj = metric_join(d1, d2, Window(24))
        for x in window_points(nat, Window(32)):
            want = min(evaluate(d1, x, x, w).value, evaluate(d2, x, x, w).value)
            ok = ok and evaluate(dj, x, x, w).value == want
    _report(5, ok, "join kernels realize the pointwise min on the diagonal")


def test_criterion_06_lattice_laws():
    rng = random.Random(4242)
    spaces = [space_by_name("NatLine"), space_by_name("IntLine")]
    pools = {s.name: [_level_pool(s, rng) for _ in range(10)] for s in spaces}
    checked = 0
    ok = True
    while checked < 10 ** 4:
        space = rng.choice(spaces)
        e, f, g = (rng.choice(pools[space.name]) for _ in range(3))
        x = (rng.randrange(0, 48),)
        le, lf, lg = e.level(x), f.level(x), g.level(x)
        ok = ok and meet(e, f).level(x) == max(le, lf) == meet(f, e).level(x)
        ok = ok and join(e, f).level(x) == min(le, lf) == join(f, e).level(x)
        ok = ok and meet(e, meet(f, g)).level(x) == meet(meet(e, f), g).level(x)
        ok = ok and join(e, join(f, g)).level(x) == join(join(e, f), g).level(x)
        ok = ok and meet(e, join(e, f)).level(x) == le
        ok = ok and join(e, meet(e, f)).level(x) == le
        ok = ok and meet(e, e).level(x) == le and join(e, e).level(x) == le
        ok = ok and meet(e, join(f, g)).level(x) == \
            join(meet(e, f), meet(e, g)).level(x)
        checked += 1
        if not ok:
            break
    _report(6, ok, f"lattice laws hold pointwise on {checked} random triples")


def test_criterion_07_example_type_one_product():
    rep = run_scenario("typeI")
    VERDICTS.extend(rep.verdicts)
    ok = rep.passed
    growth = rep.results["details"]["product"]["diagnostics"].get("growth", {})
    ok = ok and bool(growth)
    for series in growth.values():
        ks = [k for _, k in series]
        ok = ok and len(ks) >= 3 and all(b > a for a, b in zip(ks, ks[1:]))
    _report(7, ok, "two-tails product: closed form exact, factors type I, "
                   "k-requirement strictly grows across {30,110,420}")


def test_criterion_08_example_geometric_line():
    rep = run_scenario("ex2")
    VERDICTS.extend(rep.verdicts)
    s = rep.summary()
    ok = (rep.passed and s["neighborhood_stable_max_k"] == 8
          and s["complement_meet_zero"] and s["complement_join_one"]
          and s["tau_plus"] == 1 and s["tau_minus"] == 0
          and s["tau_restriction_matches"])
    _report(8, ok, "geometric line: N_k(A) finite-difference stable for k <= 8, "
                   "complement pair splits, tau = (1, 0)")


def test_criterion_09_boolean_atoms():
    # the scaled-power pair realized where all three escape families exist
    nat = space_by_name("NatLine")
    e1 = levels_from_subset(nat, set_family("powers", base=4))
    e2 = levels_from_subset(nat, set_family("powers", base=4, scale=2))
    w = Window(1024)
    atoms = enumerate_atoms([e1, e2], w)
    VERDICTS.extend(v for _, v in atoms)
    nonzero = [p.bits() for p, v in atoms if v.certified and v.value == "nonzero"]
    hs = homs([e1, e2], w)
    ok = (sorted(nonzero) == ["00", "01", "10"] and len(hs) == 3
          and all(check_hom(h, [e1, e2], w)["passed"] for h in hs))
    # companion fact: on the geometric line itself the two tails cover the
    # space, the join is the unit, and only two atoms survive
    geo = space_by_name("GeomLine")
    g1 = levels_from_subset(geo, set_family("powers", base=4))
    g2 = levels_from_subset(geo, set_family("powers", base=4, scale=2))
    gatoms = enumerate_atoms([g1, g2], w)
    VERDICTS.extend(v for _, v in gatoms)
    gnonzero = [p.bits() for p, v in gatoms if v.certified and v.value == "nonzero"]
    ok = ok and sorted(gnonzero) == ["01", "10"]
    _report(9, ok, "scaled-power pair: exactly 3 nonzero atoms and 3 verified "
                   "homs (2 on the geometric line, whose tails cover it)")


def test_criterion_10_measures():
    intl = space_by_name("IntLine")
    mu = DensityMeasure.natural(intl)
    schedule = default_schedule()
    ok = True
    unit_rep = nu_hat(mu, unit_levels(intl), 8, schedule)
    ok = ok and all(v == 1 for _, v in unit_rep.interval.series)
    zero_rep = nu_hat(mu, zero_levels(intl), 8, schedule)
    ok = ok and all(v == 0 for _, v in zero_rep.interval.series)
    a = levels_from_subset(intl, set_family("half_line", sign=-1))
    b = levels_from_subset(intl, set_family("half_line", sign=1))
    ha = nu_hat(mu, a, 8, schedule)
    half, tol = Fraction(1, 2), Fraction(1, 32)
    ok = ok and half - tol <= ha.interval.lo and ha.interval.hi <= half + tol
    modular = check_modularity(mu, a, b, 8, schedule)
    ok = ok and modular["raw_exact_per_radius"] and modular["passed"]
    dup = nu_bar(mu, FormalSum((a, a), (0, 1)), 8, schedule)
    ok = ok and all(v == 0 for _, v in dup["series"])
    ok = ok and modular["m2_complement_exact"]
    _report(10, ok, "nu-hat(1)=1 and nu-hat(0)=0 per radius, half-line within "
                    "1/32 of 1/2, modularity exact, duplicates cancel, "
                    "complement law holds")


def test_criterion_11_ideals():
    nat = space_by_name("NatLine")
    projections = [
        levels_from_subset(nat, set_family("evens")),
        levels_from_subset(nat, set_family("squares")),
        levels_from_subset(nat, set_family("powers", base=2)),
        levels_from_subset(nat, set_family("multiples", k=3)),
        zero_levels(nat),
    ]
    ok = True
    strict_total = 0
    for e in projections:
        unit = ApproximateUnit(e)
        rep = check_au(unit, Window(64), n_max=6)
        ok = ok and rep["au1_exact"] and rep["au2_relaxed"]
        strict_total += rep["au2_strict_failure_count"]
        rec = recovery_transfer(unit, Window(64))
        ok = ok and rec["passed"]
    # integer gaps make strict (au2) genuinely fail somewhere; it is listed
    ok = ok and strict_total >= 1
    _report(11, ok, f"(au1) exact, recovery transfer within 2n+2 on 5 "
                    f"projections, {strict_total} strict (au2) pairs listed")


def test_criterion_12_witness_revalidation():
    certified = [v for v in VERDICTS if v.certified]
    ok = bool(certified) and all(revalidate(v) for v in certified)
    _report(12, ok, f"all {len(certified)} certified verdicts re-validate by "
                    f"substitution")
