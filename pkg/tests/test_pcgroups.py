import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfrskit.pcgroups import (
    PcPresentation,
    abelianization,
    build_standard,
    direct_product,
    free_abelian,
    heisenberg,
    presentation_from_text,
    presentation_to_text,
    rational_ab_kernel_member,
    unitriangular,
)


# ----------------------------------------------------------- matrix oracle
# Independent model: unitriangular integer matrices multiplied directly.


def mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def mat_eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def ut_positions(n):
    return [(i, i + d) for d in range(1, n) for i in range(n - d)]


def transvection_power(n, pos, e):
    t = mat_eye(n)
    t[pos[0]][pos[1]] = e
    return t


def coords_to_matrix(n, coords):
    """Ordered product of transvection powers along the standard basis."""
    m = mat_eye(n)
    for pos, e in zip(ut_positions(n), coords):
        m = mat_mul(m, transvection_power(n, pos, e))
    return m


def word_to_matrix(n, word):
    m = mat_eye(n)
    for idx, e in word:
        m = mat_mul(m, transvection_power(n, ut_positions(n)[idx], e))
    return m


# ---------------------------------------------------------------- builders


def test_heisenberg_shape():
    h = heisenberg()
    assert h.n == 3 and h.nilpotency_class == 2
    assert h.central == (False, False, True)
    assert h.commutator(h.generator(0), h.generator(1)) == (0, 0, 1)


def test_free_abelian_shape():
    p = free_abelian(2)
    assert p.n == 2 and p.nilpotency_class == 1 and not p.rules


def test_ut4_shape():
    p = unitriangular(4)
    assert p.n == 6 and p.nilpotency_class == 3


def test_ut3_matches_heisenberg():
    assert unitriangular(3).rules == heisenberg().rules


def test_build_standard_names():
    assert build_standard("heisenberg") == heisenberg()
    assert build_standard("free_abelian(2)") == free_abelian(2)
    assert build_standard("ut(4)") == unitriangular(4)
    combo = build_standard("direct_product(heisenberg,free_abelian(1))")
    assert combo.n == 4
    with pytest.raises(ValueError):
        build_standard("dihedral")


def test_validation_rejects_nontriangular():
    with pytest.raises(ValueError):
        PcPresentation(3, {(0, 1): (0, 1, 0)})


def test_validation_rejects_noncentral_class2_values():
    # [g2, g1] = g3 but g3 does not commute with g4: value is not central
    with pytest.raises(ValueError):
        PcPresentation(
            4,
            {(0, 1): (0, 0, 1, 0), (2, 3): (0, 0, 0, 2)},
            nilpotency_class=2,
        )


def test_inconsistent_table_detected():
    # g3 commutes with g1 and g2, hence with [g2, g1] = g4 in any group,
    # so demanding [g4, g3] = g5 is contradictory
    with pytest.raises(ValueError):
        PcPresentation(
            5,
            {
                (0, 1): (0, 0, 0, 1, 0),
                (2, 3): (0, 0, 0, 0, 1),
            },
            nilpotency_class=3,
        )


# ---------------------------------------------------------------- collection


def test_collect_examples():
    h = heisenberg()
    assert h.collect([(0, 1), (1, 1)]) == (1, 1, 0)
    assert h.collect([(1, 1), (0, 1)]) == (1, 1, -1)
    assert h.collect([]) == (0, 0, 0)


def test_heisenberg_product_formula():
    h = heisenberg()
    rng = random.Random(3)
    for _ in range(200):
        u = tuple(rng.randint(-5, 5) for _ in range(3))
        v = tuple(rng.randint(-5, 5) for _ in range(3))
        a1, b1, c1 = u
        a2, b2, c2 = v
        assert h.multiply(u, v) == (a1 + a2, b1 + b2, c1 + c2 - b1 * a2)


def test_commutator_examples():
    h = heisenberg()
    x, y = h.generator(0), h.generator(1)
    assert h.commutator(x, y) == (0, 0, 1)
    assert h.commutator(x, x) == h.identity()
    assert h.commutator(h.power(x, 2), y) == (0, 0, 2)


@pytest.mark.parametrize("n", [3, 4])
def test_collection_matches_matrix_model(n):
    p = unitriangular(n)
    m = p.n
    letters = [(i, e) for i in range(m) for e in (1, -1)]
    for length in (1, 2, 3):
        for word in itertools.product(letters, repeat=length):
            nf = p.collect(word)
            assert coords_to_matrix(n, nf) == word_to_matrix(n, word)


def test_collection_matches_matrix_model_longer_words():
    # heisenberg: exhaustive over words of length <= 4 with exponents in
    # [-2, 2]; ut(4): exhaustive at length 2 plus a seeded sample at 3-4
    p3 = unitriangular(3)
    letters3 = [(i, e) for i in range(3) for e in (-2, -1, 1, 2)]
    for length in (1, 2, 3, 4):
        for word in itertools.product(letters3, repeat=length):
            assert coords_to_matrix(3, p3.collect(word)) == word_to_matrix(3, word)
    p4 = unitriangular(4)
    letters4 = [(i, e) for i in range(6) for e in (-2, -1, 1, 2)]
    for word in itertools.product(letters4, repeat=2):
        assert coords_to_matrix(4, p4.collect(word)) == word_to_matrix(4, word)
    rng = random.Random(12)
    for _ in range(1500):
        word = [rng.choice(letters4) for _ in range(rng.choice([3, 4]))]
        assert coords_to_matrix(4, p4.collect(word)) == word_to_matrix(4, word)


def test_generic_path_matches_fast_path_class2():
    h = heisenberg()
    rng = random.Random(11)
    for _ in range(100):
        u = tuple(rng.randint(-3, 3) for _ in range(3))
        v = tuple(rng.randint(-3, 3) for _ in range(3))
        assert h._mul_generic(u, v) == h._mul2(u, v)
        assert h._inv_generic(u) == h._inv2(u)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_group_laws_random_class2(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    p = _random_class2(rng, n)
    u = tuple(rng.randint(-3, 3) for _ in range(n))
    v = tuple(rng.randint(-3, 3) for _ in range(n))
    w = tuple(rng.randint(-3, 3) for _ in range(n))
    assert p.multiply(p.multiply(u, v), w) == p.multiply(u, p.multiply(v, w))
    assert p.multiply(u, p.inverse(u)) == p.identity()
    assert p.power(u, 3) == p.multiply(u, p.multiply(u, u))
    assert p.power(u, -2) == p.inverse(p.multiply(u, u))


def _random_class2(rng, n):
    """Triangular class-<=2 table: a split into bulk + trailing central part."""
    n_central = rng.randint(1, n - 1)
    bulk = n - n_central
    rules = {}
    for i in range(bulk):
        for j in range(i + 1, bulk):
            vec = [0] * n
            for k in range(max(bulk, j + 1), n):
                vec[k] = rng.randint(-4, 4)
            if any(vec):
                rules[(i, j)] = tuple(vec)
    return PcPresentation(n, rules, nilpotency_class=2 if rules else 1)


def test_ut4_associativity_random_words():
    p = unitriangular(4)
    rng = random.Random(5)
    for _ in range(50):
        u = tuple(rng.randint(-2, 2) for _ in range(6))
        v = tuple(rng.randint(-2, 2) for _ in range(6))
        w = tuple(rng.randint(-2, 2) for _ in range(6))
        assert p.multiply(p.multiply(u, v), w) == p.multiply(u, p.multiply(v, w))
        assert p.multiply(u, p.inverse(u)) == p.identity()


# ------------------------------------------------------------ abelianization


def test_abelianization_heisenberg():
    q = abelianization(heisenberg())
    assert q.structure.free_rank == 2 and not q.structure.invariant_factors
    free, tors = q.project((0, 0, 1))
    assert not any(free) and not any(tors)


def test_abelianization_free_abelian_identity():
    q = abelianization(free_abelian(3))
    assert q.structure.free_rank == 3
    free, _ = q.project((1, 2, 3))
    assert sorted(abs(x) for x in free) == [1, 2, 3]


def test_abelianization_ut4():
    q = abelianization(unitriangular(4))
    assert q.structure.free_rank == 3 and not q.structure.invariant_factors


def test_rational_kernel_membership():
    h = heisenberg()
    assert rational_ab_kernel_member(h, (0, 0, 1))
    assert not rational_ab_kernel_member(h, (1, 0, 0))


def test_commutators_die_rationally():
    for p in (heisenberg(), unitriangular(4), direct_product(heisenberg(), free_abelian(2))):
        rng = random.Random(1)
        for _ in range(20):
            u = tuple(rng.randint(-2, 2) for _ in range(p.n))
            v = tuple(rng.randint(-2, 2) for _ in range(p.n))
            assert rational_ab_kernel_member(p, p.commutator(u, v))


# ------------------------------------------------------------ file format


def test_presentation_roundtrip():
    for p in (heisenberg(), free_abelian(2), unitriangular(4)):
        assert presentation_from_text(presentation_to_text(p)) == p


def test_presentation_text_shape():
    text = presentation_to_text(heisenberg())
    assert text.splitlines()[0] == "3 2"
    assert text.splitlines()[1] == "1 2 : -1"
