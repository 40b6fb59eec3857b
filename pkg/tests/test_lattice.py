import pytest

import oracle
from cyclicdeg import build_spec
from cyclicdeg.config import OrderBoundError, settings
from cyclicdeg.lattice import (
    all_subgroups,
    conjugacy_classes,
    cyclic_subgroups,
    elements_of,
    gamma,
    generated_subgroup,
    is_normal,
    mask_of,
    normal_cyclic_count,
    subgroups_within,
)


def test_mask_round_trip():
    assert elements_of(mask_of([0, 3, 7])) == (0, 3, 7)
    assert elements_of(0) == ()


@pytest.mark.parametrize("n", range(2, 7))
def test_cyclic_counts_of_two_power_families(n):
    # dihedral/quasidihedral/quaternion counts over cyclic subgroups
    assert len(cyclic_subgroups(build_spec(f"D{2 ** n}"))) == n + 2 ** (n - 1)
    if n >= 3:
        assert len(cyclic_subgroups(build_spec(f"Q{2 ** n}"))) == n + 2 ** (n - 2)
    if n >= 4:
        assert len(cyclic_subgroups(build_spec(f"SD{2 ** n}"))) == n + 3 * 2 ** (n - 3)


@pytest.mark.parametrize("spec,count", [
    ("D8", 10), ("Q8", 6), ("A4", 10), ("D6", 6), ("Z12", 6), ("Z2xZ2", 5), ("Q16", 11), ("SD16", 15),
])
def test_lattice_sizes(spec, count):
    assert len(all_subgroups(build_spec(spec))) == count


@pytest.mark.parametrize("spec,raw", [
    ("D12", lambda: oracle.dihedral(12)),
    ("Q16", lambda: oracle.quaternion(16)),
    ("SD16", lambda: oracle.quasidihedral(16)),
    ("A4", oracle.alternating4),
    ("Zsd(7,3,2)", lambda: oracle.metacyclic(7, 3, 2)),
    ("D8 x Z3", lambda: oracle.direct(oracle.dihedral(8), oracle.cyclic(3))),
])
def test_lattice_agrees_with_oracle(spec, raw):
    G, R = build_spec(spec), raw()
    assert sorted(s.order for s in all_subgroups(G)) == sorted(len(s) for s in R.subgroups())
    assert sorted(s.order for s in cyclic_subgroups(G)) == sorted(len(s) for s in R.cyclic_subgroups())
    assert gamma(G) == oracle.gamma(R)


def test_lattice_contains_trivial_and_whole_group():
    G = build_spec("SD16")
    L = all_subgroups(G)
    assert L[0].order == 1 and L[len(L) - 1].order == 16
    assert all(L.normal[i] for i in (0, len(L) - 1))


def test_lattice_is_closed_under_join_and_meet():
    G = build_spec("D12")
    L = all_subgroups(G)
    masks = {s.mask for s in L}
    for a in L:
        for b in L:
            assert a.mask & b.mask in masks
            assert generated_subgroup(G, a.elements + b.elements).mask in masks


@pytest.mark.parametrize("spec,value", [("D8", 2), ("Q8", 0), ("A4", 2), ("D6", 1), ("Q16", 2), ("Z30", 0)])
def test_gamma(spec, value):
    assert gamma(build_spec(spec)) == value


@pytest.mark.parametrize("n", range(3, 7))
def test_normal_cyclic_count_dihedral(n):
    assert normal_cyclic_count(build_spec(f"D{2 ** n}")) == n


@pytest.mark.parametrize("spec,value", [("Q16", 4), ("SD16", 4), ("Q8", 5), ("Z12", 6)])
def test_normal_cyclic_count(spec, value):
    assert normal_cyclic_count(build_spec(spec)) == value


def test_class_partition_matches_conjugacy():
    G = build_spec("D8")
    L = all_subgroups(G)
    classes = conjugacy_classes(G, list(L))
    assert sorted(len(c) for c in classes) == [1] * 6 + [2, 2]
    for ids in L.classes:
        assert len({L.normal[i] for i in ids}) == 1
        if L.normal[ids[0]]:
            assert len(ids) == 1
    for s, flag in zip(L, L.normal):
        assert is_normal(G, s) == flag


def test_subgroups_within_keeps_flags():
    G = build_spec("Q16")
    L = all_subgroups(G)
    H = next(s for s in L if s.order == 8 and s.is_cyclic)
    inner = subgroups_within(L, H)
    assert [s.order for s in inner] == [1, 2, 4, 8]
    assert len(subgroups_within(cyclic_subgroups(G), H)) == 4


def test_lattice_bound(monkeypatch):
    monkeypatch.setattr(settings, "lattice_max_order", 10)
    with pytest.raises(OrderBoundError):
        all_subgroups(build_spec("D12"))
