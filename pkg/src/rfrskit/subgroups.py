"""Subgroups of power-commutator groups as integer lattices, and the
structural invariants built on them: lower central series, center, Hirsch
rank, isolators, induced presentations, and normal-subgroup enumeration.

For class <= 2 the Mal'cev coordinates of a normal or closure-generated
subgroup form a sublattice of Z^n, so subgroups are stored as canonical
Hermite bases and all subgroup algebra reduces to exact lattice algebra.
Class >= 3 groups (the unitriangular families) keep element arithmetic,
lower central series, center, rank, and whole-group abelianization; the
general subgroup operations refuse them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceLimitExceeded
from .intlinalg import (
    IntMatrix,
    abelian_quotient,
    hnf_basis,
    lattice_index,
    lattice_member,
    left_kernel,
    saturate,
    xgcd,
)
from .pcgroups import Element, PcPresentation, abelianization

_CLOSURE_ROUNDS_CAP = 64


def _require_class2(p: PcPresentation, what: str) -> None:
    if p.nilpotency_class > 2:
        raise ValueError(f"{what} supports nilpotency class <= 2 only")


@dataclass(frozen=True)
class Subgroup:
    """Subgroup whose Mal'cev coordinate set is an integer lattice.

    `basis` is the canonical Hermite basis (zero rows dropped), so equal
    subgroups compare equal as values.
    """

    ambient: PcPresentation
    basis: IntMatrix

    @staticmethod
    def from_lattice(p: PcPresentation, rows, check: bool = True) -> "Subgroup":
        mat = IntMatrix.from_rows([list(r) for r in rows]) if rows else IntMatrix(0, p.n, ())
        if mat.cols != p.n:
            raise ValueError("row length must equal the generator count")
        basis = hnf_basis(mat)
        s = Subgroup(p, basis)
        if check and not s._is_closed():
            raise ValueError("lattice is not closed under the group operations")
        return s

    @staticmethod
    def whole_group(p: PcPresentation) -> "Subgroup":
        return Subgroup(p, IntMatrix.identity(p.n))

    @staticmethod
    def trivial(p: PcPresentation) -> "Subgroup":
        return Subgroup(p, IntMatrix(0, p.n, ()))

    # ------------------------------------------------------------- queries

    def rank(self) -> int:
        return self.basis.rows

    def is_full_rank(self) -> bool:
        return self.basis.rows == self.ambient.n

    def basis_elements(self) -> list[Element]:
        return [tuple(self.basis.row(i)) for i in range(self.basis.rows)]

    def contains(self, u: Element) -> bool:
        return lattice_member(self.basis, u)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.contains(v) for v in other.basis_elements())

    def index(self):
        """Index in the ambient group: coordinates biject the group with
        Z^n, so this is the lattice index ([Z^n : L]); INFINITE when the
        basis is rank deficient."""
        return lattice_index(IntMatrix(self.basis.rows, self.ambient.n, self.basis.entries))

    def _is_closed(self) -> bool:
        p = self.ambient
        vecs = self.basis_elements()
        for u in vecs:
            if not self.contains(p.inverse(u)):
                return False
            for v in vecs:
                if not self.contains(p.multiply(u, v)):
                    return False
                if not self.contains(p.commutator(u, v)):
                    return False
        if p.nilpotency_class > 2:
            # basis-pair closure is only conclusive together with exact
            # expressibility of every basis row as an ordered product
            for u in vecs:
                if express_in_basis(self, u) is None:
                    return False
        return True

    def is_normal(self) -> bool:
        p = self.ambient
        for u in self.basis_elements():
            for k in range(p.n):
                g = p.generator(k)
                if not self.contains(p.conjugate(u, g)):
                    return False
                if not self.contains(p.conjugate(u, p.inverse(g))):
                    return False
        return True

    def intersect(self, other: "Subgroup") -> "Subgroup":
        if self.ambient != other.ambient:
            raise ValueError("subgroups live in different ambient groups")
        b1, b2 = self.basis, other.basis
        if b1.rows == 0 or b2.rows == 0:
            return Subgroup.trivial(self.ambient)
        stacked = IntMatrix.from_rows(b1.to_rows() + [[-x for x in row] for row in b2.to_rows()])
        ker = left_kernel(stacked)
        rows = []
        for i in range(ker.rows):
            coeff = ker.row(i)[: b1.rows]
            rows.append(
                [sum(coeff[t] * b1.entry(t, j) for t in range(b1.rows)) for j in range(b1.cols)]
            )
        # intersection of closed lattices is closed; re-check guards it
        return Subgroup.from_lattice(self.ambient, rows, check=True)


def subgroup_closure(p: PcPresentation, gens) -> Subgroup:
    """Smallest lattice-closed subgroup containing the given elements.

    Saturates the coordinate lattice under products, inverses, and
    pairwise commutators of basis vectors until the Hermite basis is
    stable.  Class <= 2 only: there the stabilized lattice is exactly a
    subgroup (the correction form is bilinear).
    """
    _require_class2(p, "subgroup closure")
    rows = [list(p.element(g)) for g in gens if any(g)]
    lattice = hnf_basis(IntMatrix.from_rows(rows)) if rows else IntMatrix(0, p.n, ())
    for _ in range(_CLOSURE_ROUNDS_CAP):
        vecs = [tuple(lattice.row(i)) for i in range(lattice.rows)]
        fresh = []
        for u in vecs:
            w = p.inverse(u)
            if not lattice_member(lattice, w):
                fresh.append(list(w))
            for v in vecs:
                for w in (p.multiply(u, v), p.commutator(u, v)):
                    if not lattice_member(lattice, w):
                        fresh.append(list(w))
        if not fresh:
            return Subgroup(p, lattice)
        lattice = hnf_basis(IntMatrix.from_rows(lattice.to_rows() + fresh))
    raise RuntimeError("subgroup closure failed to stabilize")  # pragma: no cover


def express_in_basis(s: Subgroup, u: Element) -> tuple[int, ...] | None:
    """Exponents a with u = b_1^a1 * ... * b_r^ar over the Hermite basis,
    or None when u is not an ordered product of the basis elements."""
    p = s.ambient
    h = s.basis
    w = u
    exps = []
    for i in range(h.rows):
        row = h.row(i)
        j = next(k for k in range(h.cols) if row[k] != 0)
        q, rem = divmod(w[j], row[j])
        if rem:
            return None
        exps.append(q)
        if q:
            w = p.multiply(p.inverse(p.power(tuple(row), q)), w)
        if any(w[t] for t in range(j + 1)):
            return None
    if any(w):
        return None
    return tuple(exps)


def map_into_ambient(s: Subgroup, exps) -> Element:
    """Ordered product of basis elements with the given exponents."""
    p = s.ambient
    out = p.identity()
    for row, e in zip(s.basis_elements(), exps):
        if e:
            out = p.multiply(out, p.power(row, e))
    return out


@dataclass(frozen=True)
class InducedPresentation:
    """A subgroup presented on its own Hermite basis.

    `inclusion` rows are the ambient coordinates of the new generators;
    `to_ambient` / `from_ambient` move elements across the inclusion.
    """

    presentation: PcPresentation
    subgroup: Subgroup

    @property
    def inclusion(self) -> IntMatrix:
        return self.subgroup.basis

    def to_ambient(self, exps) -> Element:
        return map_into_ambient(self.subgroup, exps)

    def from_ambient(self, u: Element) -> tuple[int, ...] | None:
        return express_in_basis(self.subgroup, u)


def _induced_any_rank(s: Subgroup) -> InducedPresentation:
    p = s.ambient
    _require_class2(p, "induced presentations")
    vecs = s.basis_elements()
    r = len(vecs)
    rules: dict[tuple[int, int], tuple[int, ...]] = {}
    for a in range(r):
        for b in range(a + 1, r):
            w = p.commutator(vecs[b], vecs[a])
            exps = express_in_basis(s, w)
            if exps is None:  # pragma: no cover - guarded by closure checks
                raise ValueError("commutator left the subgroup lattice")
            if any(exps[: b + 1]):  # pragma: no cover - theory guarantees this
                raise ValueError("induced commutator table is not triangular")
            if any(exps):
                rules[(a, b)] = exps
    cls = 2 if rules else 1
    induced = PcPresentation(r, rules, nilpotency_class=cls)
    return InducedPresentation(presentation=induced, subgroup=s)


def induced_presentation(s: Subgroup) -> InducedPresentation:
    """Presentation of a full-rank subgroup on its Hermite basis."""
    if not s.is_full_rank():
        raise ValueError("induced presentations require a full-rank subgroup")
    return _induced_any_rank(s)


def verify_inclusion_homomorphism(ip: InducedPresentation) -> bool:
    """Check the inclusion on all generator pairs: products computed in
    the induced presentation match ambient products of the images."""
    sub = ip.presentation
    for a in range(sub.n):
        for b in range(sub.n):
            prod = sub.multiply(sub.generator(a), sub.generator(b))
            ambient_prod = ip.subgroup.ambient.multiply(
                ip.to_ambient(sub.generator(a)), ip.to_ambient(sub.generator(b))
            )
            if ip.to_ambient(prod) != ambient_prod:
                return False
    return True


# ----------------------------------------------------- normal subgroup census


def _diagonals(n: int, bound: int):
    """All positive diagonal tuples with product <= bound."""
    if n == 0:
        yield ()
        return
    for d in range(1, bound + 1):
        for rest in _diagonals(n - 1, bound // d):
            yield (d,) + rest


def enumerate_normal_subgroups(
    p: PcPresentation, max_index: int, candidate_cap: int = 1_000_000
) -> list[Subgroup]:
    """All normal full-rank subgroups of index <= max_index.

    Candidates are the Hermite forms with bounded diagonal product, kept
    when the lattice is closed under the group operations and normal.
    The bound is a parameter of the census, not a completeness claim
    about larger indices.
    """
    _require_class2(p, "normal subgroup enumeration")
    if max_index < 1:
        raise ValueError("max_index must be positive")
    n = p.n
    total = 0
    diags = list(_diagonals(n, max_index))
    for diag in diags:
        count = 1
        for j in range(n):
            count *= diag[j] ** j
        total += count
    if total > candidate_cap:
        raise ResourceLimitExceeded(
            f"{total} Hermite candidates exceed the cap of {candidate_cap}"
        )

    found = []
    for diag in diags:
        rows_template = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]

        def fill(col: int, rows):
            if col == n:
                yield [row[:] for row in rows]
                return
            choices = [range(diag[col]) for _ in range(col)]

            def rec(i: int):
                if i == col:
                    yield from fill(col + 1, rows)
                    return
                for v in choices[i]:
                    rows[i][col] = v
                    yield from rec(i + 1)
                rows[i][col] = 0

            yield from rec(0)

        for rows in fill(0, rows_template):
            mat = IntMatrix.from_rows(rows)
            cand = Subgroup(p, hnf_basis(mat))
            if cand.basis.to_rows() != rows:
                continue  # not canonical; the canonical twin is generated too
            if not cand._is_closed():
                continue
            if not cand.is_normal():
                continue
            found.append(cand)
    found.sort(key=lambda s: (s.index(), s.basis.entries))
    return found


# ------------------------------------------------ induced bases (any class)


class _InducedBasis:
    """Triangular generating set of a subgroup, valid in any class.

    Keeps at most one basis vector per leading coordinate and reduces new
    vectors against it with group operations (a noncommutative Hermite
    sift).  Elements of the subgroup are exactly the ordered products of
    the slot vectors.
    """

    def __init__(self, p: PcPresentation):
        self.p = p
        self.slots: dict[int, Element] = {}

    def vectors(self) -> list[Element]:
        return [self.slots[k] for k in sorted(self.slots)]

    def reduce(self, w: Element) -> Element:
        """Divide w by the slot vectors from the top; the residue is the
        identity exactly when w is an ordered product of the slots."""
        p = self.p
        while True:
            lead = next((k for k in range(p.n) if w[k]), None)
            if lead is None or lead not in self.slots:
                return w
            b = self.slots[lead]
            q, rem = divmod(w[lead], b[lead])
            if rem:
                return w
            if q == 0:
                return w
            w = p.multiply(p.inverse(p.power(b, q)), w)

    def contains(self, w: Element) -> bool:
        return not any(self.reduce(w))

    def sift(self, w: Element) -> bool:
        """Insert w; returns True when the generated subgroup grew."""
        p = self.p
        changed = False
        queue = [w]
        while queue:
            v = self.reduce(queue.pop())
            lead = next((k for k in range(p.n) if v[k]), None)
            if lead is None:
                continue
            cur = self.slots.get(lead)
            if cur is None:
                self.slots[lead] = v
                changed = True
                continue
            a, b = cur[lead], v[lead]
            if b % a == 0:  # reduce() already handled this unless signs differ
                q = b // a
                rest = p.multiply(p.inverse(p.power(cur, q)), v)
                queue.append(rest)
                continue
            g, x, y = xgcd(a, b)
            comb = p.multiply(p.power(cur, x), p.power(v, y))
            self.slots[lead] = comb
            changed = True
            queue.append(cur)
            queue.append(v)
        return changed

    def close(self) -> None:
        """Stabilize under products, inverses, and pairwise commutators."""
        p = self.p
        for _ in range(_CLOSURE_ROUNDS_CAP):
            changed = False
            vecs = self.vectors()
            for u in vecs:
                if not self.contains(p.inverse(u)):
                    changed |= self.sift(p.inverse(u))
                for v in vecs:
                    for w in (p.multiply(u, v), p.commutator(u, v)):
                        if not self.contains(w):
                            changed |= self.sift(w)
            if not changed:
                return
        raise RuntimeError("induced basis failed to stabilize")  # pragma: no cover

    def close_under_commutators_with(self, gens: list[Element]) -> None:
        p = self.p
        for _ in range(_CLOSURE_ROUNDS_CAP):
            changed = False
            for u in self.vectors():
                for g in gens:
                    c = p.commutator(u, g)
                    if not self.contains(c):
                        changed |= self.sift(c)
            if changed:
                self.close()
            else:
                return
        raise RuntimeError("commutator closure failed to stabilize")  # pragma: no cover


def _subgroup_from_induced(p: PcPresentation, basis: _InducedBasis) -> Subgroup:
    vecs = basis.vectors()
    if not vecs:
        return Subgroup.trivial(p)
    lattice = hnf_basis(IntMatrix.from_rows([list(v) for v in vecs]))
    sub = Subgroup(p, lattice)
    if p.nilpotency_class > 2:
        # the lattice span is faithful only when every canonical basis row
        # is itself an ordered product of the sifted generators
        for i in range(lattice.rows):
            if not basis.contains(tuple(lattice.row(i))):  # pragma: no cover
                raise NotImplementedError(
                    "subgroup coordinates do not form a lattice; "
                    "only coordinate-graded class >= 3 groups are supported"
                )
    return sub


# --------------------------------------------------------- central series


def lower_central_series(p: PcPresentation) -> list[Subgroup]:
    """G = gamma_1 >= gamma_2 >= ... >= gamma_{c+1} = 1, each term the
    smallest subgroup containing [previous, G] and closed under further
    commutation with G."""
    gens = [p.generator(k) for k in range(p.n)]
    terms = [Subgroup.whole_group(p)]
    cur_vectors = gens
    while cur_vectors:
        nxt = _InducedBasis(p)
        for u in cur_vectors:
            for g in gens:
                c = p.commutator(u, g)
                if any(c):
                    nxt.sift(c)
        nxt.close()
        nxt.close_under_commutators_with(gens)
        terms.append(_subgroup_from_induced(p, nxt))
        cur_vectors = nxt.vectors()
        if len(terms) > p.n + 2:  # pragma: no cover - inconsistent data
            raise RuntimeError("lower central series failed to terminate")
    return terms


def hirsch_rank(p: PcPresentation) -> int:
    """Sum of free ranks of the lower-central-series quotients."""
    series = lower_central_series(p)
    total = 0
    for k in range(len(series) - 1):
        total += series[k].rank() - series[k + 1].rank()
    total += series[-1].rank()
    return total


# ------------------------------------------------------------------ center


def _center_class2(p: PcPresentation) -> Subgroup:
    # u is central iff the commutator map c(u, g_k) vanishes for all k;
    # in class <= 2 that map is linear in u
    n = p.n
    columns = []
    for k in range(n):
        g = p.generator(k)
        for t in range(n):
            e_t = p.generator(t)
            columns.append(p.commutator(e_t, g))
    # build n x (n*n) matrix: row t lists c(e_t, g_k) stacked over k
    rows = []
    for t in range(n):
        row = []
        for k in range(n):
            row.extend(columns[k * n + t])
        rows.append(row)
    ker = left_kernel(IntMatrix.from_rows(rows))
    return Subgroup(p, hnf_basis(ker)) if ker.rows else Subgroup.trivial(p)


def _solve_with_torsion(values, free_len, torsion_moduli):
    """Integer solutions c of sum_s c_s * values[s] = 0 where each value is
    (free coords, torsion residues); returns rows of a kernel basis."""
    r = len(values)
    t = len(torsion_moduli)
    rows = []
    for free, tors in values:
        rows.append(list(free) + list(tors))
    for j, d in enumerate(torsion_moduli):
        rows.append([0] * free_len + [d if jj == j else 0 for jj in range(t)])
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(r)) for i in range(r)]
    mat = IntMatrix.from_rows(rows) if rows else IntMatrix(0, free_len + t, ())
    ker = left_kernel(mat)
    return [tuple(ker.row(i)[:r]) for i in range(ker.rows)]


def center(p: PcPresentation) -> Subgroup:
    """Center as a lattice subgroup.

    Class <= 2 solves the linear commutation system exactly.  Higher
    class walks down the lower central series: at stage k the map
    h -> [h, g] into gamma_k / gamma_{k+1} is a homomorphism, linear in
    the ordered-product coordinates of the current candidate subgroup, so
    each refinement is an integer kernel with torsion congruences.
    """
    if p.nilpotency_class <= 2:
        return _center_class2(p)
    series = lower_central_series(p)
    gens = [p.generator(k) for k in range(p.n)]
    candidates: list[Element] = list(gens)
    for k in range(1, len(series) - 1):
        gamma_k, gamma_next = series[k], series[k + 1]
        base = _InducedBasis(p)
        for v in gamma_k.basis_elements():
            base.sift(v)
        base.close()
        slot_vecs = base.vectors()
        # structure of gamma_k / gamma_{k+1} on the slot coordinates
        rel_rows = []
        for v in gamma_next.basis_elements():
            exps = _express_in_slots(p, base, v)
            rel_rows.append(list(exps))
        rel = (
            IntMatrix.from_rows(rel_rows)
            if rel_rows
            else IntMatrix(0, len(slot_vecs), ())
        )
        quot = abelian_quotient(rel)
        values = []
        for b in candidates:
            free_all: list[int] = []
            tors_all: list[int] = []
            for g in gens:
                w = p.commutator(b, g)
                exps = _express_in_slots(p, base, w)
                free, tors = quot.project(exps)
                free_all.extend(free)
                tors_all.extend(tors)
            values.append((tuple(free_all), tuple(tors_all)))
        free_len = len(gens) * quot.structure.free_rank
        moduli = list(quot.structure.invariant_factors) * len(gens)
        # reshape torsion residues: project() returned per-generator pieces
        sols = _solve_with_torsion(values, free_len, moduli)
        new_basis = _InducedBasis(p)
        for c in sols:
            elt = p.identity()
            for coeff, b in zip(c, candidates):
                if coeff:
                    elt = p.multiply(elt, p.power(b, coeff))
            if any(elt):
                new_basis.sift(elt)
        new_basis.close()
        candidates = new_basis.vectors()
        if not candidates:
            return Subgroup.trivial(p)
    final = _InducedBasis(p)
    for v in candidates:
        if not all(p.commutator(v, g) == p.identity() for g in gens):  # pragma: no cover
            raise NotImplementedError("central candidate failed verification")
        final.sift(v)
    final.close()
    sub = _subgroup_from_induced(p, final)
    for v in sub.basis_elements():
        if not all(p.commutator(v, g) == p.identity() for g in gens):  # pragma: no cover
            raise NotImplementedError("center is not a coordinate lattice here")
    return sub


def _express_in_slots(p: PcPresentation, base: _InducedBasis, w: Element) -> tuple[int, ...]:
    slots = base.vectors()
    exps = []
    for b in slots:
        lead = next(k for k in range(p.n) if b[k])
        q, rem = divmod(w[lead], b[lead])
        if rem:
            raise ValueError("element is not in the subgroup spanned by the slots")
        exps.append(q)
        if q:
            w = p.multiply(p.inverse(p.power(b, q)), w)
    if any(w):
        raise ValueError("element is not in the subgroup spanned by the slots")
    return tuple(exps)


# ----------------------------------------------------------------- isolator


def isolator(p: PcPresentation, s: Subgroup) -> Subgroup:
    """Smallest root-closed subgroup containing s (class <= 2).

    In class <= 2 this is exactly the saturation of the coordinate
    lattice, which is automatically closed under the group operations.
    """
    _require_class2(p, "isolators")
    if s.ambient != p:
        raise ValueError("subgroup belongs to a different presentation")
    if s.basis.rows == 0:
        return s
    return Subgroup(p, saturate(s.basis))


# --------------------------------------------------------- center/ab report


@dataclass(frozen=True)
class CenterAbReport:
    """Does the center inject into the abelianization?

    For a nonabelian presentation `kernel_witness` is a central element
    generating an infinite cyclic subgroup whose abelianization image is
    torsion; for abelian presentations the map is injective and there is
    no witness.
    """

    center_basis: tuple[Element, ...]
    injective: bool
    kernel_witness: Element | None

    @property
    def center_rank(self) -> int:
        return len(self.center_basis)


def center_ab_report(p: PcPresentation) -> CenterAbReport:
    z = center(p)
    quot = abelianization(p)
    basis = z.basis_elements()
    if not basis:
        return CenterAbReport(center_basis=(), injective=True, kernel_witness=None)
    # the projection is linear in Mal'cev coordinates, so restrict its free
    # part to the center lattice and take the integer kernel
    free_images = [list(quot.project(v)[0]) for v in basis]
    ker = left_kernel(IntMatrix.from_rows(free_images))
    if ker.rows == 0:
        return CenterAbReport(center_basis=tuple(basis), injective=True, kernel_witness=None)
    coeff = ker.row(0)
    witness = [0] * p.n
    for c, v in zip(coeff, basis):
        for t in range(p.n):
            witness[t] += c * v[t]
    w = tuple(witness)
    lead = next(k for k in range(p.n) if w[k])
    if w[lead] < 0:
        w = tuple(-x for x in w)
    return CenterAbReport(center_basis=tuple(basis), injective=False, kernel_witness=w)


# ------------------------------------------------------------- file format


def chain_to_text(subgroups: list[Subgroup]) -> str:
    """Blocks of basis rows separated by blank lines; first block is the
    whole group."""
    blocks = []
    for s in subgroups:
        rows = s.basis.to_rows()
        blocks.append("\n".join(" ".join(str(x) for x in row) for row in rows))
    return "\n\n".join(blocks) + "\n"


def chain_from_text(p: PcPresentation, text: str) -> list[Subgroup]:
    blocks: list[list[list[int]]] = []
    cur: list[list[int]] = []
    for ln in text.splitlines():
        ln = ln.strip()
        if ln.startswith("#"):
            continue
        if not ln:
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append([int(t) for t in ln.split()])
    if cur:
        blocks.append(cur)
    if not blocks:
        raise ValueError("empty chain file")
    subs = [subgroup_closure(p, [tuple(r) for r in rows]) for rows in blocks]
    if subs[0] != Subgroup.whole_group(p):
        raise ValueError("first block of a chain file must generate the whole group")
    return subs
