"""Chains restrict to subgroups: the inheritance property in action.

Intersecting every term of a passing chain with a subgroup yields a chain
on that subgroup which passes the step conditions again.  Free abelian
groups, by contrast to the Heisenberg group, carry plenty of passing
chains with trivial intersection in the limit: the factorial congruence
chain is the standard positive control.
"""

from rfrskit import (
    Filtration,
    Subgroup,
    free_abelian,
    restrict_chain,
    verify_rfrs_chain,
)

p = free_abelian(3)


def scaled(k):
    return Subgroup.from_lattice(p, [[k if i == j else 0 for j in range(3)] for i in range(3)])


print("factorial congruence chain on Z^3:  Z^3 > 2Z^3 > 6Z^3 > 24Z^3")
chain = Filtration.from_subgroups(p, [Subgroup.whole_group(p), scaled(2), scaled(6), scaled(24)])
report = verify_rfrs_chain(chain)
print("  per-step indices:", [s.index for s in report.steps])
print("  overall:", report.overall)

print()
print("restrict to the rank-2 summand Z^2 x {0}:")
h = Subgroup.from_lattice(p, [[1, 0, 0], [0, 1, 0]])
restricted = restrict_chain(chain, h)
rep2 = verify_rfrs_chain(restricted)
print("  restricted ambient rank:", restricted.ambient.n)
print("  per-step indices:", [s.index for s in rep2.steps])
print("  overall:", rep2.overall)
for orig, restr in zip(report.steps, rep2.steps):
    assert orig.index % restr.index == 0
print("  restricted indices divide the original ones, as they must")
