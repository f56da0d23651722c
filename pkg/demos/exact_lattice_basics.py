"""Tour of the exact integer lattice layer.

Hermite and Smith normal forms with their unimodular transforms, lattice
membership and index, and the structure of abelian groups presented by
relation matrices.  Everything is arbitrary-precision: no floats anywhere.
"""

from rfrskit import (
    IntMatrix,
    abelian_group_from_relations,
    finite_order_semisimple_check,
    hnf,
    is_unipotent,
    lattice_index,
    lattice_member,
    snf,
)

a = IntMatrix.from_rows([[2, 4], [6, 8]])
print("A =", a)

h, u = hnf(a)
print("Hermite form H =", h)
print("left transform U with H = U @ A:", u)
assert u @ a == h

dec = snf(a)
print("Smith diagonal:", dec.diagonal(), " (U A V = D, divisibility d1 | d2)")
assert dec.u @ a @ dec.v == dec.d

print()
print("lattice spanned by the rows of A:")
print("  index in Z^2:", lattice_index(a))
print("  contains (4, 8)?", lattice_member(a, (4, 8)))
print("  contains (1, 0)?", lattice_member(a, (1, 0)))

print()
print("abelian group Z^3 / <(0,0,2)>:")
s = abelian_group_from_relations(IntMatrix.from_rows([[0, 0, 2]]))
print(" ", s.describe())

print()
print("finite-order integer matrices are never unipotent (except I):")
for rows in ([[0, -1], [1, -1]], [[0, -1], [1, 0]], [[0, -1], [1, 1]]):
    m = IntMatrix.from_rows(rows)
    rep = finite_order_semisimple_check(m)
    print(f"  order {rep.order}: unipotent = {rep.unipotent}")
    assert not is_unipotent(m)
