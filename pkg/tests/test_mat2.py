import itertools

import pytest

from repzeta.mat2 import (
    GroupDesc,
    Mat2,
    TooLarge,
    conj_orbit,
    enumerate_group,
    generators,
    group_order,
    mat_from_json,
    mat_sort_key,
    matrix_cap,
    twist_orbit,
)
from repzeta.ring import ring_fqt, ring_unramified0

F2 = ring_fqt(2, 1, 1)
F3 = ring_fqt(3, 1, 1)
F4 = ring_fqt(2, 2, 1)
F2T2 = ring_fqt(2, 1, 2)
Z4 = ring_unramified0(2, 2)


def test_group_order_examples():
    assert group_order(GroupDesc(F2, "GL2")) == 6
    assert group_order(GroupDesc(F2T2, "GL2")) == 96
    assert group_order(GroupDesc(F3, "SL2")) == 24


@pytest.mark.parametrize("g", [
    GroupDesc(F2, "GL2"),
    GroupDesc(F2T2, "GL2"),
    GroupDesc(F2T2, "SL2"),
    GroupDesc(F3, "SL2"),
    GroupDesc(F3, "GL2"),
    GroupDesc(F4, "GL2"),
    GroupDesc(Z4, "GL2"),
    GroupDesc(Z4, "SL2"),
    GroupDesc(ring_fqt(2, 1, 3), "SL2"),
], ids=repr)
def test_enumeration_count_matches_closed_form(g):
    count = sum(1 for _ in enumerate_group(g))
    assert count == group_order(g)


def test_enumeration_is_deterministic_and_in_group():
    g = GroupDesc(F2T2, "SL2")
    elems = list(enumerate_group(g))
    assert elems == list(enumerate_group(g))
    assert len(elems) == 48
    assert all(m.det_code == 1 for m in elems)


def test_enumeration_cap():
    big = GroupDesc(ring_fqt(2, 1, 7), "GL2")  # 128^4 = 2^28 matrices
    with pytest.raises(TooLarge):
        next(enumerate_group(big))


def test_cap_env_override(monkeypatch):
    monkeypatch.setenv("REPZETA_CAP", "100")
    assert matrix_cap() == 100
    with pytest.raises(TooLarge):
        next(enumerate_group(GroupDesc(F2T2, "GL2")))
    monkeypatch.delenv("REPZETA_CAP")
    assert matrix_cap() == 1 << 24


def test_matrix_arithmetic():
    m = Mat2.of(F2T2, 1, 2, 0, 1)  # [[1, t], [0, 1]]
    assert (m * m.inverse()) == Mat2.identity(F2T2)
    assert m.det_code == 1
    assert m.trace_code == 0
    s = Mat2.scalar(F2T2, 2)
    assert (m + s).e == (3, 2, 0, 3)
    assert m.add_scalar(2) == m + s


def test_every_gl_element_invertible():
    for m in enumerate_group(GroupDesc(F2T2, "GL2")):
        assert m * m.inverse() == Mat2.identity(F2T2)


def test_conjugation_action_law_exhaustive_f2():
    G = list(enumerate_group(GroupDesc(F2, "GL2")))
    mats = [Mat2(F2, e) for e in itertools.product(range(2), repeat=4)]
    for g in G:
        for h in G:
            hg = h * g
            for m in mats:
                assert m.conj_by(g).conj_by(h) == m.conj_by(hg)


def test_nilpotent_orbit_over_f2():
    orb = conj_orbit(GroupDesc(F2, "GL2"), Mat2.of(F2, 0, 1, 0, 0))
    assert orb.size == 3
    assert orb.rep == Mat2.of(F2, 0, 0, 1, 0)
    assert orb.members == {Mat2.of(F2, 0, 1, 0, 0), Mat2.of(F2, 0, 0, 1, 0),
                           Mat2.of(F2, 1, 1, 1, 1)}


def test_scalar_orbit_is_singleton():
    m = Mat2.scalar(F2T2, 2)
    orb = conj_orbit(GroupDesc(F2T2, "GL2"), m)
    assert orb.size == 1 and orb.rep == m


def test_orbit_matches_full_group_sweep():
    # dual route: breadth-first closure under generators vs a sweep of the
    # entire group, on every matrix over F2[t]/(t^2) and Z/4
    for r in (F2T2, Z4, F3):
        g = GroupDesc(r, "GL2")
        full = list(enumerate_group(g))
        for e in itertools.product(range(r.size), repeat=4):
            beta = Mat2(r, e)
            via_sweep = {beta.conj_by(x) for x in full}
            orb = conj_orbit(g, beta)
            assert orb.members == via_sweep
            assert orb.rep == min(via_sweep, key=mat_sort_key)
            if r is F3:
                break  # one matrix is enough at the largest ring


@pytest.mark.parametrize("ring", [F2, F3, F4, F2T2, Z4], ids=repr)
def test_orbit_sizes_partition_matrix_space(ring):
    g = GroupDesc(ring, "GL2")
    n = ring.size
    covered = set()
    total = 0
    for e in itertools.product(range(n), repeat=4):
        if e in covered:
            continue
        orb = conj_orbit(g, Mat2(ring, e))
        covered.update(m.e for m in orb.members)
        total += orb.size
    assert total == n ** 4


def test_generator_closure_is_whole_group():
    for g in (GroupDesc(F2, "GL2"), GroupDesc(F2T2, "SL2"), GroupDesc(F2T2, "GL2"),
              GroupDesc(F3, "SL2"), GroupDesc(F4, "GL2"), GroupDesc(Z4, "GL2"),
              GroupDesc(Z4, "SL2")):
        gens = generators(g)
        assert all(g.contains(x) for x in gens)
        seen = {Mat2.identity(g.ring).e}
        frontier = list(seen)
        while frontier:
            nxt = []
            for e in frontier:
                m = Mat2(g.ring, e)
                for x in gens:
                    y = (m * x).e
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        assert len(seen) == group_order(g)


def test_twist_orbit_type3_over_f2_merges_two_classes():
    # the classes of [[0,1],[0,0]] and [[1,1],[0,1]] are distinct but fused
    # by scalar translation: one twist orbit holding 2 conjugacy classes
    reps = twist_orbit(GroupDesc(F2, "GL2"), Mat2.of(F2, 0, 1, 0, 0))
    assert len(reps) == 2


def test_twist_orbit_type1_over_f3_has_three_classes():
    reps = twist_orbit(GroupDesc(F3, "GL2"), Mat2.of(F3, 0, 0, 0, 1))
    assert len(reps) == 3


def test_twist_orbit_of_scalar_stays_scalar():
    reps = twist_orbit(GroupDesc(F2T2, "GL2"), Mat2.scalar(F2T2, 0))
    assert all(r.e[1] == 0 and r.e[2] == 0 and r.e[0] == r.e[3] for r in reps)
    assert len(reps) == F2T2.size


def test_sl_orbit_equals_gl_orbit_for_type2():
    beta = Mat2.of(F2, 0, 1, 1, 1)
    o_gl = conj_orbit(GroupDesc(F2, "GL2"), beta)
    o_sl = conj_orbit(GroupDesc(F2, "SL2"), beta)
    assert o_gl.members == o_sl.members


def test_matrix_json_roundtrip():
    m = Mat2.of(F2T2, 1, 2, 3, 0)
    assert mat_from_json(F2T2, m.to_json()) == m
    z = Mat2.of(Z4, 1, 2, 3, 0)
    blob = z.to_json()
    assert blob == [["1", "2"], ["3", "0"]]
    assert mat_from_json(Z4, blob) == z
    with pytest.raises(ValueError):
        mat_from_json(Z4, [["1", "2"], ["3"]])


def test_mat2_immutable():
    m = Mat2.identity(F2)
    with pytest.raises(AttributeError):
        m.e = (0, 0, 0, 0)
