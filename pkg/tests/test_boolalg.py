import pytest

from coarsedouble import (levels_from_subset, meet, unit_levels, zero_levels)
from coarsedouble.boolalg import (AtomPattern, FormalSum, TwoValuedHom,
                                  atom_nonzero, check_hom, enumerate_atoms,
                                  extend_hom, homs, powers_tail_base,
                                  separating_set, tau)
from coarsedouble.errors import DomainError, SearchInconclusive
from coarsedouble.space import Window, set_family, window_points
from coarsedouble.verdicts import revalidate


@pytest.fixture
def nat_pair(natline):
    e1 = levels_from_subset(natline, set_family("powers", base=4))
    e2 = levels_from_subset(natline, set_family("powers", base=4, scale=2))
    return e1, e2


@pytest.fixture
def geom_pair(geomline):
    e1 = levels_from_subset(geomline, set_family("powers", base=4))
    e2 = levels_from_subset(geomline, set_family("powers", base=4, scale=2))
    return e1, e2


def test_formal_sum_reduction(natline):
    e = unit_levels(natline)
    f = zero_levels(natline)
    s = FormalSum((e, f), (0, 0, 1))
    assert s.reduced() == {1}
    assert FormalSum((e,), (0, 0)).reduced() == frozenset()
    with pytest.raises(DomainError):
        FormalSum((e,), (1,))


def test_atom_pattern_bits():
    p = AtomPattern.from_bits("10")
    assert p.members == {1} and p.bits() == "10"
    assert AtomPattern.from_bits("0110").members == {2, 3}


def test_atom_nonzero_single_generator(geomline):
    e = levels_from_subset(geomline, set_family("powers", base=4))
    v = atom_nonzero(AtomPattern.from_bits("1"), [e], Window(1024))
    assert v.certified and v.value == "nonzero"
    z = zero_levels(geomline)
    vz = atom_nonzero(AtomPattern.from_bits("1"), [z], Window(1024))
    assert vz.certified and vz.value == "zero"


def test_atoms_nat_pair(nat_pair):
    w = Window(1024)
    got = {p.bits(): v.value for p, v in enumerate_atoms(list(nat_pair), w)
           if v.certified}
    assert got == {"00": "nonzero", "01": "nonzero", "10": "nonzero", "11": "zero"}
    hs = homs(list(nat_pair), w)
    assert len(hs) == 3
    for h in hs:
        assert check_hom(h, list(nat_pair), w)["passed"]


def test_atoms_geom_pair(geom_pair):
    # on the geometric line the two tails cover all but finitely many points,
    # so the join is the unit and the 00 atom is certified zero
    w = Window(1024)
    got = {p.bits(): v.value for p, v in enumerate_atoms(list(geom_pair), w)
           if v.certified}
    assert got == {"00": "zero", "01": "nonzero", "10": "nonzero", "11": "zero"}


def test_atoms_duplicate_generator(natline):
    e = levels_from_subset(natline, set_family("powers", base=2))
    w = Window(1024)
    got = {p.bits(): v.value for p, v in enumerate_atoms([e, e], w)
           if v.certified}
    # e and its duplicate only realize the patterns 11 and 00
    assert got["10"] == "zero" and got["01"] == "zero"
    assert got["11"] == "nonzero" and got["00"] == "nonzero"


def test_extend_hom(natline):
    e = levels_from_subset(natline, set_family("evens"))
    f = levels_from_subset(natline, set_family("powers", base=2))
    unit = unit_levels(natline)
    phi = TwoValuedHom((unit.name, e.name, f.name), (1, 1, 0))
    gens = (unit, e, f)
    assert extend_hom(phi, FormalSum(gens, (1, 1))) == 0          # e + e
    assert extend_hom(phi, FormalSum(gens, (0, 1))) == 0          # 1 + e, phi(e)=1
    assert extend_hom(phi, FormalSum(gens, (0, 2))) == 1          # 1 + f, phi(f)=0
    # the lattice relation e + f + meet + join always cancels
    m, j = meet(e, f), levels_from_subset(natline, set_family("evens"))
    rel = FormalSum((e, f, m, j), (0, 1, 2, 3))
    psi = TwoValuedHom((e.name, f.name, m.name, j.name), (1, 0, 0, 1))
    assert extend_hom(psi, rel) == 0
    foreign = FormalSum((zero_levels(natline),), (0,))
    with pytest.raises(DomainError):
        extend_hom(phi, foreign)


def test_extend_hom_factors_through_ideal(natline):
    # substituting meet + join for a pair of summands never changes the value
    e = levels_from_subset(natline, set_family("evens"))
    f = levels_from_subset(natline, set_family("squares"))
    m, j = meet(e, f), levels_from_subset(natline, set_family("evens"))
    from coarsedouble.projection import join as join_op
    j = join_op(e, f)
    names = (e.name, f.name, m.name, j.name)
    for ve in (0, 1):
        for vf in (0, 1):
            phi = TwoValuedHom(names, (ve, vf, min(ve, vf), max(ve, vf)))
            gens = (e, f, m, j)
            direct = extend_hom(phi, FormalSum(gens, (0, 1)))
            substituted = extend_hom(phi, FormalSum(gens, (2, 3)))
            assert direct == substituted


def test_check_hom_failures(nat_pair, natline):
    e1, e2 = nat_pair
    w = Window(1024)
    # meet(e1, e2) is certified zero, so assigning 1 to both must fail
    bad = TwoValuedHom((e1.name, e2.name), (1, 1))
    rep = check_hom(bad, [e1, e2], w)
    assert not rep["passed"]
    assert any(v["check"] == "meet-zero" for v in rep["violations"])
    # the all-zero assignment fails unitality once the join is the unit
    f1 = levels_from_subset(natline, set_family("evens"))
    f2 = levels_from_subset(natline, set_family("odds"))
    zero_phi = TwoValuedHom((f1.name, f2.name), (0, 0))
    rep2 = check_hom(zero_phi, [f1, f2], w)
    assert not rep2["passed"]
    assert any(v["check"] == "unitality" for v in rep2["violations"])


def test_filter_base_validation(geomline):
    F = powers_tail_base(4, depth=5)
    rep = F.validate(geomline, Window(4096))
    assert rep["passed"]
    with pytest.raises(DomainError):
        F.level_set(9)


def test_tau_examples(geomline, geom_pair):
    e1, e2 = geom_pair
    F = powers_tail_base(4, depth=6)
    w = Window(4096)
    v1 = tau(F, e1, w)
    assert v1.certified and v1.value == 1
    v0 = tau(F, e2, w)
    assert v0.certified and v0.value == 0
    vu = tau(F, unit_levels(geomline), w)
    assert vu.certified and vu.value == 1
    for v in (v1, v0, vu):
        assert revalidate(v)


def test_tau_monotone_under_order(geomline, geom_pair):
    e1, _ = geom_pair
    F = powers_tail_base(4, depth=6)
    w = Window(4096)
    bigger = unit_levels(geomline)  # e1 <= 1 in the projection order
    if tau(F, e1, w).value == 1:
        assert tau(F, bigger, w).value == 1


def test_separating_set(geomline, natline):
    e = levels_from_subset(geomline, set_family("powers", base=4))
    B, margins = separating_set(e, Window(4 ** 6))
    assert B.points
    assert all(m > n for n, m in ((int(k), int(v)) for k, v in margins.items()))
    # zero projections separate easily: any far tail point qualifies
    z = zero_levels(natline)
    Bz, mz = separating_set(z, Window(64))
    assert mz
    # density-style verification: N_m(B) cap A_m stays small and stable
    from coarsedouble.space import neighborhood
    for r in (1024, 4096):
        w = Window(r)
        m = 4
        nm = neighborhood(geomline, B, m, w)
        inter = [x for x in window_points(geomline, w)
                 if nm.contains(x) and e.level(x) <= m]
        assert len(inter) <= 2
    unit = unit_levels(natline)
    with pytest.raises(SearchInconclusive):
        separating_set(unit, Window(32))
