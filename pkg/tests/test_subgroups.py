import itertools
import random

import pytest

from rfrskit.errors import ResourceLimitExceeded
from rfrskit.intlinalg import INFINITE, IntMatrix, hnf_basis, lattice_member
from rfrskit.pcgroups import (
    abelianization,
    direct_product,
    free_abelian,
    heisenberg,
    unitriangular,
)
from rfrskit.subgroups import (
    Subgroup,
    center,
    center_ab_report,
    chain_from_text,
    chain_to_text,
    enumerate_normal_subgroups,
    express_in_basis,
    hirsch_rank,
    induced_presentation,
    isolator,
    lower_central_series,
    map_into_ambient,
    subgroup_closure,
    verify_inclusion_homomorphism,
)

H = heisenberg()
X, Y, Z = H.generator(0), H.generator(1), H.generator(2)


def lat(p, rows):
    return Subgroup.from_lattice(p, rows)


# ----------------------------------------------------------------- closure


def test_closure_generates_commutator():
    s = subgroup_closure(H, [X, Y])
    assert s == Subgroup.whole_group(H)


def test_closure_index_two():
    s = subgroup_closure(H, [H.power(X, 2), Y, Z])
    assert s.basis.to_rows() == [[2, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_closure_empty():
    assert subgroup_closure(H, []) == Subgroup.trivial(H)


def test_closure_matches_word_enumeration():
    """Oracle: BFS over products of generator words of length <= 4."""
    gens = [H.power(X, 2), Y, Z]
    s = subgroup_closure(H, gens)
    seen = {H.identity()}
    frontier = [H.identity()]
    alphabet = gens + [H.inverse(g) for g in gens]
    for _ in range(4):
        nxt = []
        for u in frontier:
            for a in alphabet:
                w = H.multiply(u, a)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    for w in seen:
        assert s.contains(w)


def test_closure_of_nonlattice_generator_saturates():
    # the group generated by xy alone is not a coordinate lattice; the
    # closure is the smallest lattice subgroup containing it
    s = subgroup_closure(H, [(1, 1, 0)])
    assert s.contains((1, 1, 0))
    assert s.contains(H.multiply((1, 1, 0), (1, 1, 0)))
    assert s.basis.to_rows() == [[1, 1, 0], [0, 0, 1]]


def test_closure_rejects_class3():
    with pytest.raises(ValueError):
        subgroup_closure(unitriangular(4), [unitriangular(4).generator(0)])


def test_from_lattice_rejects_unclosed():
    with pytest.raises(ValueError):
        lat(H, [[1, 0, 0], [0, 1, 0]])  # missing z, products escape


# ----------------------------------------------------------------- index


def test_index_examples():
    assert Subgroup.whole_group(H).index() == 1
    assert subgroup_closure(H, [H.power(X, 2), Y, Z]).index() == 2
    assert subgroup_closure(H, [X, Z]).index() is INFINITE


def test_index_matches_coset_enumeration():
    """Oracle: BFS coset enumeration with pairwise membership tests."""
    s = subgroup_closure(H, [H.power(X, 2), Y, Z])

    def same_coset(u, v):
        return s.contains(H.multiply(H.inverse(u), v))

    reps = [H.identity()]
    frontier = [H.identity()]
    gens = [X, Y, Z]
    while frontier:
        cur = frontier.pop()
        for g in gens + [H.inverse(g) for g in gens]:
            w = H.multiply(cur, g)
            if not any(same_coset(w, r) for r in reps):
                reps.append(w)
                frontier.append(w)
        if len(reps) > 8:
            break
    assert len(reps) == s.index() == 2


def test_index_multiplicativity():
    s1 = subgroup_closure(H, [H.power(X, 2), Y, Z])
    s2 = subgroup_closure(H, [H.power(X, 2), H.power(Y, 2), Z])
    assert s1.contains_subgroup(s2)
    # relative lattice index of s2 inside s1
    rel = s1.index() and s2.index() // s1.index()
    assert s2.index() == s1.index() * rel


# ---------------------------------------------------------------- normality


def test_normality_examples():
    assert subgroup_closure(H, [H.power(X, 2), Y, Z]).is_normal()
    # <x, z^2>: infinite index, conjugation by y moves x off the lattice
    s = lat(H, [[1, 0, 0], [0, 0, 2]])
    assert not s.is_normal()


def test_normality_by_conjugation_oracle():
    s = subgroup_closure(H, [H.power(X, 2), Y, Z])
    for u in s.basis_elements():
        for g in (X, Y, Z):
            assert s.contains(H.conjugate(u, g))


def test_full_rank_subgroups_containing_derived_sub_are_normal():
    for rows in ([[1, 0, 0], [0, 2, 0], [0, 0, 1]], [[2, 1, 0], [0, 2, 0], [0, 0, 1]]):
        s = lat(H, rows)
        assert s.contains(Z)
        assert s.is_normal()


# ---------------------------------------------------------------- intersect


def test_intersect_examples():
    s = subgroup_closure(H, [H.power(X, 2), Y, Z])
    assert s.intersect(Subgroup.whole_group(H)) == s
    assert s.intersect(s) == s
    t = subgroup_closure(H, [X, H.power(Y, 2), Z])
    meet = s.intersect(t)
    assert meet.basis.to_rows() == [[2, 0, 0], [0, 2, 0], [0, 0, 1]]


def test_intersect_oracle():
    s = subgroup_closure(H, [H.power(X, 2), Y, Z])
    t = subgroup_closure(H, [X, H.power(Y, 2), Z])
    meet = s.intersect(t)
    for v in itertools.product(range(-4, 5), repeat=3):
        expected = s.contains(v) and t.contains(v)
        assert meet.contains(v) == expected


def test_intersect_ambient_mismatch():
    with pytest.raises(ValueError):
        Subgroup.whole_group(H).intersect(Subgroup.whole_group(free_abelian(3)))


# -------------------------------------------------------------- enumeration


def test_enumerate_free_abelian_rank1():
    p = free_abelian(1)
    subs = enumerate_normal_subgroups(p, 3)
    assert [s.basis.to_rows() for s in subs] == [[[1]], [[2]], [[3]]]


def test_enumerate_heisenberg_index2():
    subs = enumerate_normal_subgroups(H, 2)
    assert len(subs) == 4  # whole group + three index-2 subgroups
    assert [s.index() for s in subs] == [1, 2, 2, 2]
    for s in subs[1:]:
        assert s.contains(Z)


def test_enumerate_heisenberg_index1():
    subs = enumerate_normal_subgroups(H, 1)
    assert subs == [Subgroup.whole_group(H)]


def test_enumeration_matches_bruteforce():
    """Oracle: filter all Hermite sublattices by elementwise closure and
    normality over a coordinate box, independent of Subgroup internals."""
    bound = 8
    found = enumerate_normal_subgroups(H, bound)
    oracle = []
    for d1 in range(1, bound + 1):
        for d2 in range(1, bound // d1 + 1):
            for d3 in range(1, bound // (d1 * d2) + 1):
                for a in range(d2):
                    for b in range(d3):
                        for c in range(d3):
                            rows = [[d1, a, b], [0, d2, c], [0, 0, d3]]
                            mat = IntMatrix.from_rows(rows)
                            if hnf_basis(mat).to_rows() != rows:
                                continue
                            vecs = [tuple(r) for r in rows]
                            closed = all(
                                lattice_member(mat, H.multiply(u, v))
                                and lattice_member(mat, H.inverse(u))
                                for u in vecs
                                for v in vecs
                            )
                            if not closed:
                                continue
                            normal = all(
                                lattice_member(mat, H.conjugate(u, g))
                                and lattice_member(mat, H.conjugate(u, H.inverse(g)))
                                for u in vecs
                                for g in (X, Y, Z)
                            )
                            if normal:
                                oracle.append(rows)
    assert sorted(s.basis.to_rows() for s in found) == sorted(oracle)


def test_enumerated_heisenberg_subgroups_are_nonabelian():
    for s in enumerate_normal_subgroups(H, 8):
        ip = induced_presentation(s)
        assert ip.presentation.rules  # nonempty commutator table


def test_enumeration_resource_cap():
    with pytest.raises(ResourceLimitExceeded):
        enumerate_normal_subgroups(H, 64, candidate_cap=10)


# ------------------------------------------------------ induced presentations


def test_induced_whole_group():
    ip = induced_presentation(Subgroup.whole_group(H))
    assert ip.presentation == H


def test_induced_index_two():
    s = subgroup_closure(H, [H.power(X, 2), Y, Z])
    ip = induced_presentation(s)
    sub = ip.presentation
    assert sub.n == 3
    # [u, y] = z^2 on the new basis (u = x^2)
    assert sub.commutator(sub.generator(0), sub.generator(1)) == (0, 0, 2)
    q = abelianization(sub)
    assert q.structure.free_rank == 2
    assert q.structure.invariant_factors == (2,)


def test_induced_scaled_free_abelian():
    p = free_abelian(2)
    s = Subgroup.from_lattice(p, [[2, 0], [0, 2]])
    ip = induced_presentation(s)
    assert ip.presentation == free_abelian(2)


def test_induced_requires_full_rank():
    s = subgroup_closure(H, [X, Z])
    with pytest.raises(ValueError):
        induced_presentation(s)


def test_induced_inclusion_is_homomorphism():
    for s in enumerate_normal_subgroups(H, 8):
        ip = induced_presentation(s)
        assert verify_inclusion_homomorphism(ip)


def test_induced_preserves_hirsch_rank():
    for s in enumerate_normal_subgroups(H, 6):
        ip = induced_presentation(s)
        assert hirsch_rank(ip.presentation) == hirsch_rank(H)


def test_express_and_map_roundtrip():
    s = subgroup_closure(H, [H.power(X, 2), Y, Z])
    rng = random.Random(2)
    for _ in range(50):
        exps = tuple(rng.randint(-3, 3) for _ in range(3))
        u = map_into_ambient(s, exps)
        assert s.contains(u)
        assert express_in_basis(s, u) == exps
    assert express_in_basis(s, (1, 0, 0)) is None


# ------------------------------------------------------------ central series


def test_lcs_free_abelian():
    series = lower_central_series(free_abelian(2))
    assert len(series) == 2
    assert series[0].rank() == 2 and series[1].rank() == 0


def test_lcs_heisenberg():
    series = lower_central_series(H)
    assert len(series) == 3
    assert series[1].basis.to_rows() == [[0, 0, 1]]
    assert series[2].rank() == 0


def test_lcs_ut4():
    p = unitriangular(4)
    series = lower_central_series(p)
    assert len(series) == 4
    assert [s.rank() for s in series] == [6, 3, 1, 0]
    # gamma_2 = span of the two-step and corner transvections
    assert series[1].basis.to_rows() == [
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]
    assert series[2].basis.to_rows() == [[0, 0, 0, 0, 0, 1]]


def test_lcs_ut5_class4():
    p = unitriangular(5)
    series = lower_central_series(p)
    assert [s.rank() for s in series] == [10, 6, 3, 1, 0]
    assert hirsch_rank(p) == 10
    z = center(p)
    assert z.rank() == 1 and z.basis.to_rows()[0][-1] == 1


def test_lcs_with_scaled_commutator():
    # [y, x] = z^2: gamma_2 is the proper sublattice 2Z in the z-line
    p = __import__("rfrskit.pcgroups", fromlist=["PcPresentation"]).PcPresentation(
        3, {(0, 1): (0, 0, 2)}, nilpotency_class=2
    )
    series = lower_central_series(p)
    assert series[1].basis.to_rows() == [[0, 0, 2]]


def test_hirsch_rank_examples():
    assert hirsch_rank(free_abelian(4)) == 4
    assert hirsch_rank(H) == 3
    assert hirsch_rank(unitriangular(4)) == 6


def test_hirsch_rank_additive_on_products():
    p = direct_product(H, free_abelian(2))
    assert hirsch_rank(p) == hirsch_rank(H) + 2


# ------------------------------------------------------------------ center


def test_center_heisenberg():
    z = center(H)
    assert z.basis.to_rows() == [[0, 0, 1]]


def test_center_free_abelian():
    assert center(free_abelian(3)) == Subgroup.whole_group(free_abelian(3))


def test_center_direct_product():
    p = direct_product(H, free_abelian(1))
    z = center(p)
    assert z.rank() == 2
    assert z.basis.to_rows() == [[0, 0, 1, 0], [0, 0, 0, 1]]


def test_center_ut4():
    p = unitriangular(4)
    z = center(p)
    assert z.basis.to_rows() == [[0, 0, 0, 0, 0, 1]]


def test_center_with_offdiagonal_central_element():
    # [y, x] = w, [z, x] = w, [z, y] = 1: y z^-1 is central but is not a
    # flagged central generator
    from rfrskit.pcgroups import PcPresentation

    p = PcPresentation(
        4,
        {(0, 1): (0, 0, 0, 1), (0, 2): (0, 0, 0, 1)},
        nilpotency_class=2,
    )
    z = center(p)
    assert z.contains((0, 1, -1, 0))
    assert z.rank() == 2


def test_center_elements_commute():
    for p in (H, unitriangular(4), direct_product(H, free_abelian(1))):
        z = center(p)
        for v in z.basis_elements():
            for k in range(p.n):
                assert p.commutator(v, p.generator(k)) == p.identity()


# ----------------------------------------------------------------- isolator


def test_isolator_examples():
    s = lat(H, [[0, 0, 2]])
    assert isolator(H, s).basis.to_rows() == [[0, 0, 1]]
    p = free_abelian(2)
    s2 = Subgroup.from_lattice(p, [[2, 0]])
    assert isolator(p, s2).basis.to_rows() == [[1, 0]]
    derived = lat(H, [[0, 0, 1]])
    assert isolator(H, derived) == derived


def test_isolator_root_closed_oracle():
    s = lat(H, [[0, 0, 2]])
    iso = isolator(H, s)
    for v in itertools.product(range(-3, 4), repeat=3):
        for k in (2, 3):
            if iso.contains(H.power(v, k)):
                assert iso.contains(v)


# --------------------------------------------------------- center/ab report


def test_center_ab_report_abelian():
    r = center_ab_report(free_abelian(3))
    assert r.injective and r.kernel_witness is None


def test_center_ab_report_heisenberg():
    r = center_ab_report(H)
    assert not r.injective
    assert r.kernel_witness == (0, 0, 1)
    assert r.center_rank == 1


def test_center_ab_report_ut4():
    r = center_ab_report(unitriangular(4))
    assert not r.injective
    assert r.kernel_witness == (0, 0, 0, 0, 0, 1)


def test_injectivity_iff_abelian():
    cases = [
        free_abelian(1),
        free_abelian(4),
        H,
        unitriangular(4),
        direct_product(H, free_abelian(2)),
        direct_product(free_abelian(1), H),
    ]
    for p in cases:
        r = center_ab_report(p)
        assert r.injective == p.is_abelian()
        if r.kernel_witness is not None:
            from rfrskit.pcgroups import rational_ab_kernel_member

            assert rational_ab_kernel_member(p, r.kernel_witness)


# ------------------------------------------------------------- file format


def test_chain_roundtrip():
    chain = [
        Subgroup.whole_group(H),
        subgroup_closure(H, [H.power(X, 2), Y, Z]),
        subgroup_closure(H, [H.power(X, 2), H.power(Y, 2), Z]),
    ]
    text = chain_to_text(chain)
    parsed = chain_from_text(H, text)
    assert parsed == chain


def test_chain_requires_full_first_block():
    text = "2 0 0\n0 1 0\n0 0 1\n"
    with pytest.raises(ValueError):
        chain_from_text(H, text)
