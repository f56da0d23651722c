"""Verification of RFRS-style filtration conditions and obstruction
certificates for nonabelian class-2 groups.

A chain G = G_0 > G_1 > ... of finite-index subgroups satisfies the step
conditions when each term is normal in G and contains the kernel of the
previous term's rational abelianization map.  The kernel is computed
exactly as the isolator of the derived subgroup of the induced
presentation: an element has torsion abelianization image precisely when
some power of it is a product of commutators.

The obstruction certificate bounds the index and checks, for every
normal subgroup H up to the bound, the implication

    witness in H  =>  witness has torsion image in H^ab.

Together with the base fact that the witness has torsion image in G^ab,
this shows by induction that no chain whose terms have index within the
bound can ever exclude the witness, so the intersection of such a chain
is never trivial.  Subgroups that do not contain the witness cannot
occur in a conditioned chain at all, which is why the implication form
is the mathematically meaningful one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pcgroups import PcPresentation, Element, rational_ab_kernel_member
from .subgroups import (
    Subgroup,
    _induced_any_rank,
    center_ab_report,
    enumerate_normal_subgroups,
    express_in_basis,
    induced_presentation,
    isolator,
    subgroup_closure,
)


@dataclass(frozen=True)
class Filtration:
    """Descending chain of finite-index subgroups, chain[0] = whole group."""

    ambient: PcPresentation
    chain: tuple[Subgroup, ...]

    def __post_init__(self) -> None:
        if not self.chain:
            raise ValueError("a filtration needs at least the whole group")
        if self.chain[0] != Subgroup.whole_group(self.ambient):
            raise ValueError("chain must start with the whole group")
        for k, sub in enumerate(self.chain):
            if sub.ambient != self.ambient:
                raise ValueError("chain term lives in a different ambient group")
            if not sub.is_full_rank():
                raise ValueError(f"chain term {k} has infinite index")
            if k:
                prev = self.chain[k - 1]
                if not prev.contains_subgroup(sub):
                    raise ValueError(f"chain is not descending at step {k}")
                if prev == sub:
                    raise ValueError(f"chain repeats a term at step {k}")

    @staticmethod
    def from_subgroups(ambient: PcPresentation, subs) -> "Filtration":
        return Filtration(ambient, tuple(subs))


@dataclass(frozen=True)
class RfrsStep:
    index: int
    normal_in_g: bool
    kernel_contained: bool

    @property
    def passed(self) -> bool:
        return self.normal_in_g and self.kernel_contained


@dataclass(frozen=True)
class RfrsReport:
    steps: tuple[RfrsStep, ...]
    overall: bool
    intersection: Subgroup


def rational_kernel_subgroup(term: Subgroup) -> list[Element]:
    """Generators (ambient coordinates) of ker(T -> T^ab tensor Q): the
    isolator of the derived subgroup of the induced presentation."""
    ip = induced_presentation(term)
    sub = ip.presentation
    derived_rows = [vec for _, vec in sorted(sub.rules.items())]
    derived = Subgroup.from_lattice(sub, derived_rows, check=True)
    isolated = isolator(sub, derived)
    return [ip.to_ambient(v) for v in isolated.basis_elements()]


def verify_rfrs_chain(f: Filtration) -> RfrsReport:
    """Check normality, finite index, and kernel containment per step."""
    steps = []
    overall = True
    for k in range(len(f.chain) - 1):
        term, nxt = f.chain[k], f.chain[k + 1]
        normal = nxt.is_normal()
        idx = nxt.index()
        kernel_gens = rational_kernel_subgroup(term)
        contained = all(nxt.contains(v) for v in kernel_gens)
        steps.append(RfrsStep(index=idx, normal_in_g=normal, kernel_contained=contained))
        overall = overall and normal and contained
    meet = f.chain[0]
    for term in f.chain[1:]:
        meet = meet.intersect(term)
    return RfrsReport(steps=tuple(steps), overall=overall, intersection=meet)


def trapped_central_witness(f: Filtration) -> Element | None:
    """The central witness, verified to stay in every chain term with
    torsion abelianization image there.

    Returns None when the ambient group is abelian (no witness exists) or
    when some step fails the trap, which a conditioned chain on a
    nonabelian class-2 group can never do.  Raises when the chain itself
    violates the step conditions.
    """
    p = f.ambient
    report = center_ab_report(p)
    if report.kernel_witness is None:
        return None
    if p.nilpotency_class > 2:
        raise ValueError("trapped witnesses are certified for class <= 2 only")
    chain_report = verify_rfrs_chain(f)
    if not chain_report.overall:
        raise ValueError("chain fails the filtration step conditions; verify first")
    z = report.kernel_witness
    for term in f.chain:
        if not term.contains(z):
            return None
        ip = induced_presentation(term)
        local = ip.from_ambient(z)
        if local is None:
            return None
        if not rational_ab_kernel_member(ip.presentation, local):
            return None
    return z


@dataclass(frozen=True)
class SubgroupRecord:
    basis_rows: tuple[tuple[int, ...], ...]
    index: int
    contains_witness: bool
    witness_torsion_in_ab: bool | None


@dataclass(frozen=True)
class ObstructionCertificate:
    """Bounded-index certificate that the witness is trapped.

    `all_pass` means: the witness has torsion image in the whole group's
    abelianization, and every enumerated normal subgroup containing it
    gives it torsion image again.  Any chain of normal subgroups with
    indices within the bound that satisfies the step conditions then
    keeps the witness in every term, so its intersection is nontrivial.
    """

    witness: Element
    index_bound: int
    depth_note: str
    checked_subgroups: int
    all_pass: bool
    records: tuple[SubgroupRecord, ...]


def obstruction_certificate(
    p: PcPresentation, max_index: int, candidate_cap: int = 1_000_000
) -> ObstructionCertificate:
    if p.nilpotency_class != 2 or p.is_abelian():
        raise ValueError("obstruction certificates apply to nonabelian class-2 groups")
    report = center_ab_report(p)
    z = report.kernel_witness
    assert z is not None
    base_ok = rational_ab_kernel_member(p, z)
    subs = enumerate_normal_subgroups(p, max_index, candidate_cap=candidate_cap)
    records = []
    all_pass = base_ok
    for s in subs:
        contains = s.contains(z)
        torsion: bool | None = None
        if contains:
            ip = induced_presentation(s)
            local = ip.from_ambient(z)
            torsion = local is not None and rational_ab_kernel_member(ip.presentation, local)
            if not torsion:
                all_pass = False
        records.append(
            SubgroupRecord(
                basis_rows=tuple(tuple(r) for r in s.basis.to_rows()),
                index=int(s.index()),
                contains_witness=contains,
                witness_torsion_in_ab=torsion,
            )
        )
    note = (
        f"any chain of normal subgroups with indices <= {max_index} satisfying the "
        "step conditions keeps the witness in every term; its intersection is nontrivial"
    )
    return ObstructionCertificate(
        witness=z,
        index_bound=max_index,
        depth_note=note,
        checked_subgroups=len(subs),
        all_pass=all_pass,
        records=tuple(records),
    )


def restrict_chain(f: Filtration, h: Subgroup) -> Filtration:
    """Restriction {G_i intersect H} as a filtration of H.

    The ambient of the result is the induced presentation of H; equal
    consecutive intersections collapse to one term.  When the original
    chain satisfies the step conditions, so does the restriction.
    """
    if h.ambient != f.ambient:
        raise ValueError("subgroup belongs to a different ambient group")
    if h.basis.rows == 0:
        raise ValueError("cannot restrict to the trivial subgroup")
    ip = _induced_any_rank(h)
    local_terms: list[Subgroup] = []
    for term in f.chain:
        inter = term.intersect(h)
        local_rows = []
        for v in inter.basis_elements():
            exps = express_in_basis(h, v)
            if exps is None:  # pragma: no cover - intersections stay inside h
                raise RuntimeError("intersection element escaped the subgroup basis")
            local_rows.append(exps)
        local = subgroup_closure(ip.presentation, local_rows)
        if not local_terms or local_terms[-1] != local:
            local_terms.append(local)
    return Filtration(ip.presentation, tuple(local_terms))
