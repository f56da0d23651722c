"""Exact integer matrix algebra.

Everything here runs on arbitrary-precision Python integers: Hermite and
Smith normal forms with unimodular transforms, lattice membership and
index, structure of finitely generated abelian groups presented by
relation matrices, and unipotence / finite-order tests for integer
matrices.  All functions are pure; `IntMatrix` values are immutable, so
concurrent use needs no locking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd, lcm

INFINITE = math.inf


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == x*a + y*b."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries in row-major order."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @staticmethod
    def from_rows(rows_data) -> "IntMatrix":
        rows_data = [list(r) for r in rows_data]
        m = len(rows_data)
        n = len(rows_data[0]) if m else 0
        if any(len(r) != n for r in rows_data):
            raise ValueError("ragged rows")
        flat = tuple(int(x) for r in rows_data for x in r)
        return IntMatrix(m, n, flat)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            base = i * k
            for t in range(k):
                ait = a[base + t]
                if ait:
                    brow = t * m
                    orow = i * m
                    for j in range(m):
                        out[orow + j] += ait * b[brow + j]
        return IntMatrix(n, m, tuple(out))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "IntMatrix(" + "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows)) + ")"


def matrix_to_text(a: IntMatrix) -> str:
    """Serialize as 'rows cols' header plus one line per row."""
    lines = [f"{a.rows} {a.cols}"]
    lines += [" ".join(str(x) for x in a.row(i)) for i in range(a.rows)]
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> IntMatrix:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix text needs a 'rows cols' header")
    rows, cols = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(body)}")
    return IntMatrix(rows, cols, tuple(int(t) for t in body))


def _negate_row(work: list[list[int]], i: int) -> None:
    work[i] = [-x for x in work[i]]


def _gcd_row_op(work: list[list[int]], aux: list[list[int]], r: int, i: int, j: int) -> None:
    # Unimodular 2x2 transform on rows (r, i) making work[i][j] == 0.
    a, b = work[r][j], work[i][j]
    if b == 0:
        return
    if a != 0 and b % a == 0:
        q = b // a
        work[i] = [x - q * y for x, y in zip(work[i], work[r])]
        aux[i] = [x - q * y for x, y in zip(aux[i], aux[r])]
        return
    g, x, y = xgcd(a, b)
    ag, bg = a // g, b // g
    new_r = [x * p + y * q for p, q in zip(work[r], work[i])]
    new_i = [-bg * p + ag * q for p, q in zip(work[r], work[i])]
    work[r], work[i] = new_r, new_i
    new_r = [x * p + y * q for p, q in zip(aux[r], aux[i])]
    new_i = [-bg * p + ag * q for p, q in zip(aux[r], aux[i])]
    aux[r], aux[i] = new_r, new_i


def hnf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U @ a, U unimodular, H in row echelon form
    with positive pivots and entries above each pivot reduced into
    [0, pivot).  Rows of zeros sink to the bottom.
    """
    m, n = a.rows, a.cols
    work = a.to_rows()
    trans = IntMatrix.identity(m).to_rows()
    r = 0
    for j in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if work[i][j] != 0), None)
        if piv is None:
            continue
        if piv != r:
            work[r], work[piv] = work[piv], work[r]
            trans[r], trans[piv] = trans[piv], trans[r]
        for i in range(r + 1, m):
            _gcd_row_op(work, trans, r, i, j)
        if work[r][j] < 0:
            _negate_row(work, r)
            _negate_row(trans, r)
        p = work[r][j]
        for i in range(r):
            q = work[i][j] // p
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
                trans[i] = [x - q * y for x, y in zip(trans[i], trans[r])]
        r += 1
    if m == 0:
        return a, IntMatrix.identity(0)
    return IntMatrix.from_rows(work), IntMatrix.from_rows(trans)


def hnf_basis(a: IntMatrix) -> IntMatrix:
    """Nonzero rows of the Hermite form: a canonical lattice basis."""
    h, _ = hnf(a)
    rows = [list(h.row(i)) for i in range(h.rows) if any(h.row(i))]
    if not rows:
        return IntMatrix(0, a.cols, ())
    return IntMatrix.from_rows(rows)


def left_kernel(a: IntMatrix) -> IntMatrix:
    """Canonical basis of {x : x @ a == 0}."""
    h, u = hnf(a)
    rows = [list(u.row(i)) for i in range(a.rows) if not any(h.row(i))]
    if not rows:
        return IntMatrix(0, a.rows, ())
    return hnf_basis(IntMatrix.from_rows(rows))


def saturate(a: IntMatrix) -> IntMatrix:
    """Basis of (Q-rowspace of a) intersected with Z^n.

    Computed as the left kernel of the transpose of the right kernel, so
    no matrix inversion is needed; the result is a saturated lattice
    containing the row space with finite index.
    """
    right_null = left_kernel(a.transpose())
    return left_kernel(right_null.transpose())


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    def diagonal(self) -> list[int]:
        return [self.d.entry(i, i) for i in range(min(self.d.rows, self.d.cols))]

    def rank(self) -> int:
        return sum(1 for x in self.diagonal() if x != 0)


def snf(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form by elementary row/column operations."""
    m, n = a.rows, a.cols
    d = a.to_rows()
    u = IntMatrix.identity(m).to_rows()
    v = IntMatrix.identity(n).to_rows()

    def swap_cols(j1: int, j2: int) -> None:
        for row in d:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    def gcd_col_op(t: int, j: int) -> None:
        a0, b0 = d[t][t], d[t][j]
        if b0 == 0:
            return
        if a0 != 0 and b0 % a0 == 0:
            q = b0 // a0
            for row in d:
                row[j] -= q * row[t]
            for row in v:
                row[j] -= q * row[t]
            return
        g, x, y = xgcd(a0, b0)
        ag, bg = a0 // g, b0 // g
        for row in d:
            ct, cj = row[t], row[j]
            row[t] = x * ct + y * cj
            row[j] = -bg * ct + ag * cj
        for row in v:
            ct, cj = row[t], row[j]
            row[t] = x * ct + y * cj
            row[j] = -bg * ct + ag * cj

    t = 0
    limit = min(m, n)
    while t < limit:
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = abs(d[i][j])
                if x and (best is None or x < best):
                    best, piv = x, (i, j)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            d[t], d[pi] = d[pi], d[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            swap_cols(t, pj)
        while True:
            for i in range(t + 1, m):
                _gcd_row_op(d, u, t, i, t)
            for j in range(t + 1, n):
                gcd_col_op(t, j)
            if any(d[i][t] for i in range(t + 1, m)) or any(d[t][j] for j in range(t + 1, n)):
                continue
            p = d[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p), None
            )
            if bad is None:
                break
            bi = bad[0]
            d[t] = [x + y for x, y in zip(d[t], d[bi])]
            u[t] = [x + y for x, y in zip(u[t], u[bi])]
        if d[t][t] < 0:
            _negate_row(d, t)
            _negate_row(u, t)
        t += 1
    return SmithDecomposition(
        IntMatrix.from_rows(u) if m else IntMatrix.identity(0),
        IntMatrix(m, n, tuple(x for row in d for x in row)),
        IntMatrix.from_rows(v) if n else IntMatrix.identity(0),
    )


def det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not a.is_square():
        raise ValueError("determinant requires a square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_unimodular(a: IntMatrix) -> bool:
    return a.is_square() and abs(det(a)) == 1


def lattice_member(basis: IntMatrix, vec) -> bool:
    """True iff vec lies in the integer row span of basis."""
    vec = [int(x) for x in vec]
    if len(vec) != basis.cols:
        raise ValueError("vector length does not match lattice dimension")
    h = hnf_basis(basis)
    pivot_of_col = {}
    for i in range(h.rows):
        j = next(k for k in range(h.cols) if h.entry(i, k) != 0)
        pivot_of_col[j] = i
    w = vec[:]
    for j in range(len(w)):
        if w[j] == 0:
            continue
        i = pivot_of_col.get(j)
        if i is None:
            return False
        p = h.entry(i, j)
        if w[j] % p:
            return False
        q = w[j] // p
        row = h.row(i)
        w = [x - q * y for x, y in zip(w, row)]
    return True


def lattice_index(basis: IntMatrix):
    """Index of the row lattice in Z^n: |det| if full rank, else INFINITE."""
    h = hnf_basis(basis)
    if h.rows < basis.cols:
        return INFINITE
    idx = 1
    for i in range(h.rows):
        j = next(k for k in range(h.cols) if h.entry(i, k) != 0)
        idx *= h.entry(i, j)
    return idx


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Z^free_rank plus cyclic factors Z/d_1 x ... with d_1 | d_2 | ..."""

    free_rank: int
    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        prev = None
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
            if prev is not None and d % prev:
                raise ValueError("invariant factors must form a divisibility chain")
            prev = d

    @property
    def torsion_order(self) -> int:
        return math.prod(self.invariant_factors) if self.invariant_factors else 1

    def describe(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " x ".join(parts) if parts else "1"


class AbelianQuotient:
    """Structure of Z^n modulo the row span of a relation matrix.

    Carries the coordinate change needed to project vectors: `project`
    splits the image of a vector into free coordinates and torsion
    residues, and `is_torsion` tests whether the image dies rationally.
    """

    def __init__(self, relations: IntMatrix):
        n = relations.cols
        dec = snf(relations)
        diag = dec.diagonal()
        rank = sum(1 for x in diag if x)
        self.n = n
        self.relations = relations
        self._v = dec.v
        self._free_cols = [j for j in range(n) if j >= len(diag) or diag[j] == 0]
        self._torsion = [(j, diag[j]) for j in range(rank) if diag[j] >= 2]
        self.structure = AbelianGroupStructure(
            free_rank=n - rank,
            invariant_factors=tuple(d for _, d in self._torsion),
        )

    def _transform(self, vec) -> list[int]:
        vec = [int(x) for x in vec]
        if len(vec) != self.n:
            raise ValueError("vector length does not match generator count")
        v = self._v
        return [sum(vec[i] * v.entry(i, j) for i in range(self.n)) for j in range(self.n)]

    def project(self, vec) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Image of vec as (free coordinates, torsion residues)."""
        w = self._transform(vec)
        free = tuple(w[j] for j in self._free_cols)
        tors = tuple(w[j] % d for j, d in self._torsion)
        return free, tors

    def is_torsion(self, vec) -> bool:
        """True iff the image of vec has finite order in the quotient."""
        free, _ = self.project(vec)
        return all(x == 0 for x in free)

    def image_order(self, vec):
        """Order of the image of vec, or INFINITE."""
        free, _ = self.project(vec)
        if any(free):
            return INFINITE
        w = self._transform(vec)
        result = 1
        for j, d in self._torsion:
            r = w[j] % d
            if r:
                result = lcm(result, d // gcd(d, r))
        return result


def abelian_quotient(relations: IntMatrix) -> AbelianQuotient:
    return AbelianQuotient(relations)


def abelian_group_from_relations(relations: IntMatrix) -> AbelianGroupStructure:
    """Structure of Z^n / rowspace(relations), n = relations.cols."""
    return AbelianQuotient(relations).structure


def is_unipotent(a: IntMatrix) -> bool:
    """True iff (a - I)^n == 0 for the n x n matrix a."""
    if not a.is_square():
        raise ValueError("unipotence requires a square matrix")
    n = a.rows
    nil = IntMatrix(n, n, tuple(a.entry(i, j) - (1 if i == j else 0) for i in range(n) for j in range(n)))
    power = IntMatrix.identity(n)
    for _ in range(n):
        power = power @ nil
    return power.is_zero()


def _totient(m: int) -> int:
    result = m
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _order_bound(n: int) -> int:
    # Orders of finite-order elements of GL_n(Z) divide the lcm of all m
    # with totient(m) <= n; for n <= 4 the sharp bound is 12.
    if n <= 4:
        return 12
    candidates = [m for m in range(1, 3 * n * n + 2) if _totient(m) <= n]
    return lcm(*candidates)


@dataclass(frozen=True)
class MatrixOrderReport:
    order: int | None
    unipotent: bool


def finite_order_semisimple_check(a: IntMatrix) -> MatrixOrderReport:
    """Detect finite multiplicative order of an integer matrix.

    Requires a to be invertible over the integers.  Iterates powers up to
    the order bound for the ambient dimension; `order` is None when no
    power up to the bound is the identity.  A finite-order matrix other
    than the identity is semisimple, never unipotent, which the paired
    `unipotent` flag lets callers confirm.
    """
    if not a.is_square():
        raise ValueError("order check requires a square matrix")
    if abs(det(a)) != 1:
        raise ValueError("matrix is not invertible over the integers")
    n = a.rows
    ident = IntMatrix.identity(n)
    bound = _order_bound(n)
    power = a
    order = None
    for k in range(1, bound + 1):
        if power == ident:
            order = k
            break
        power = power @ a
    return MatrixOrderReport(order=order, unipotent=is_unipotent(a))
