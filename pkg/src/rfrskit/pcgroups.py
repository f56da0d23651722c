"""Finitely generated torsion-free nilpotent groups via power-commutator data.

A presentation lists generators g_1 .. g_n and, for each pair i < j, the
normal form of the commutator [g_j, g_i] = g_j^-1 g_i^-1 g_j g_i as a word
in the generators with index strictly greater than j.  That triangularity
makes the group nilpotent and identifies it with Z^n as a set: every
element has a unique normal form g_1^e1 ... g_n^en, and elements are
plain exponent tuples here.

Multiplication is collection: to append g_k^e to a normal form, the tail
of higher generators is conjugated through g_k^e, which stays inside the
subgroup they generate.  That recursion is structurally terminating, so
no rewriting strategy or termination heuristics are needed.  Class <= 2
presentations get a closed-form fast path: products are

    u * v = u + v + B(u, v),   B(u, v) = sum_{i<k} u_k v_i [g_k, g_i]

with all correction terms central.
"""

from __future__ import annotations

from .intlinalg import AbelianQuotient, IntMatrix, abelian_quotient

Element = tuple[int, ...]


def _pair_key(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise ValueError("commutator table is indexed by distinct generators")
    return (i, j) if i < j else (j, i)


class PcPresentation:
    """Power-commutator presentation with triangular integer data.

    `rules` maps 0-based pairs (i, j) with i < j to the exponent vector of
    [g_j, g_i]; absent pairs commute.  Instances are immutable.
    """

    def __init__(self, n: int, rules: dict[tuple[int, int], tuple[int, ...]] | None = None,
                 nilpotency_class: int | None = None, check: bool = True):
        if n < 0:
            raise ValueError("generator count must be nonnegative")
        clean: dict[tuple[int, int], tuple[int, ...]] = {}
        for (i, j), vec in (rules or {}).items():
            if not (0 <= i < j < n):
                raise ValueError(f"bad generator pair ({i}, {j})")
            vec = tuple(int(x) for x in vec)
            if len(vec) != n:
                raise ValueError("rule vectors must have one entry per generator")
            if any(vec[k] for k in range(j + 1)):
                raise ValueError(
                    f"commutator [g{j}, g{i}] must involve only generators above {j}"
                )
            if any(vec):
                clean[(i, j)] = vec
        self.n = n
        self.rules = clean
        # g_k is central exactly when every pair containing k commutes
        self.central = tuple(all(k not in pair for pair in clean) for k in range(n))
        if nilpotency_class is None:
            nilpotency_class = 2 if clean else 1
        if nilpotency_class < 1 and n > 0:
            raise ValueError("nilpotency class must be at least 1")
        self.nilpotency_class = nilpotency_class
        if nilpotency_class <= 2:
            for (i, j), vec in clean.items():
                bad = next((k for k in range(n) if vec[k] and not self.central[k]), None)
                if bad is not None:
                    raise ValueError(
                        "class-2 presentations need central commutator values; "
                        f"[g{j}, g{i}] hits non-central generator g{bad}"
                    )
        # nonzero bilinear correction data for the fast path
        self._beta_items = tuple((i, j, vec) for (i, j), vec in sorted(clean.items()))
        self._conj_cache: dict[tuple[int, int, int], Element] = {}
        if check and n <= 8:
            self.check_consistency()

    # -------------------------------------------------------------- basics

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PcPresentation)
            and self.n == other.n
            and self.nilpotency_class == other.nilpotency_class
            and self.rules == other.rules
        )

    def __hash__(self) -> int:
        return hash((self.n, self.nilpotency_class, tuple(sorted(self.rules.items()))))

    def __repr__(self) -> str:  # pragma: no cover
        return f"PcPresentation(n={self.n}, class={self.nilpotency_class}, rules={len(self.rules)})"

    def identity(self) -> Element:
        return (0,) * self.n

    def generator(self, k: int) -> Element:
        if not 0 <= k < self.n:
            raise ValueError(f"generator index {k} out of range")
        return tuple(1 if t == k else 0 for t in range(self.n))

    def element(self, exps) -> Element:
        exps = tuple(int(x) for x in exps)
        if len(exps) != self.n:
            raise ValueError("exponent vector length must equal generator count")
        return exps

    def commutator_rule(self, i: int, j: int) -> Element:
        """Normal form of [g_max, g_min] for the pair {i, j}."""
        key = _pair_key(i, j)
        return self.rules.get(key, self.identity())

    def is_abelian(self) -> bool:
        return not self.rules

    # -------------------------------------------------------- class-2 path

    def _beta(self, u: Element, v: Element) -> list[int]:
        out = [0] * self.n
        for i, k, vec in self._beta_items:
            c = u[k] * v[i]
            if c:
                for t in range(k + 1, self.n):
                    if vec[t]:
                        out[t] += c * vec[t]
        return out

    def _mul2(self, u: Element, v: Element) -> Element:
        b = self._beta(u, v)
        return tuple(x + y + z for x, y, z in zip(u, v, b))

    def _inv2(self, u: Element) -> Element:
        b = self._beta(u, u)
        return tuple(-x + z for x, z in zip(u, b))

    # ------------------------------------------------------ generic path

    def _conj_gen(self, m: int, k: int, sign: int) -> Element:
        """Conjugate g_m by g_k^sign, for k < m and sign = +-1."""
        key = (m, k, sign)
        cached = self._conj_cache.get(key)
        if cached is not None:
            return cached
        gm = self.generator(m)
        if sign == 1:
            rule = self.commutator_rule(k, m)
            result = self._mul_generic(gm, rule) if any(rule) else gm
        else:
            # solve conj(x, k, +1) == g_m by unipotent fixed-point iteration
            x = gm
            for _ in range(self.n + 2):
                defect = self._mul_generic(self._inv_generic(self._conj_tail(x, k, 1)), gm)
                if not any(defect):
                    break
                x = self._mul_generic(x, defect)
            else:  # pragma: no cover - inconsistent table
                raise RuntimeError("conjugation inversion failed to converge")
            result = x
        self._conj_cache[key] = result
        return result

    def _conj_tail(self, t: Element, k: int, e: int) -> Element:
        """Conjugate an element supported above k by g_k^e."""
        if e == 0 or not any(t):
            return t
        sign = 1 if e > 0 else -1
        for _ in range(abs(e)):
            acc = self.identity()
            for m in range(k + 1, self.n):
                if t[m]:
                    acc = self._mul_generic(acc, self._pow_generic(self._conj_gen(m, k, sign), t[m]))
            t = acc
        return t

    def _mul_gen_power(self, u: Element, k: int, e: int) -> Element:
        if e == 0:
            return u
        tail = tuple(0 if t <= k else u[t] for t in range(self.n))
        new_tail = self._conj_tail(tail, k, e)
        return tuple(
            u[t] if t < k else (u[t] + e if t == k else new_tail[t]) for t in range(self.n)
        )

    def _mul_generic(self, u: Element, v: Element) -> Element:
        res = u
        for k in range(self.n):
            if v[k]:
                res = self._mul_gen_power(res, k, v[k])
        return res

    def _inv_generic(self, u: Element) -> Element:
        lead = next((k for k in range(self.n) if u[k]), None)
        if lead is None:
            return u
        tail = tuple(0 if t <= lead else u[t] for t in range(self.n))
        return self._mul_gen_power(self._inv_generic(tail), lead, -u[lead])

    def _pow_generic(self, u: Element, e: int) -> Element:
        if e < 0:
            return self._pow_generic(self._inv_generic(u), -e)
        result = self.identity()
        base = u
        while e:
            if e & 1:
                result = self._mul_generic(result, base)
            base = self._mul_generic(base, base)
            e >>= 1
        return result

    # ------------------------------------------------------------ public

    def multiply(self, u: Element, v: Element) -> Element:
        if self.nilpotency_class <= 2:
            return self._mul2(u, v)
        return self._mul_generic(u, v)

    def inverse(self, u: Element) -> Element:
        if self.nilpotency_class <= 2:
            return self._inv2(u)
        return self._inv_generic(u)

    def power(self, u: Element, e: int) -> Element:
        if self.nilpotency_class <= 2:
            # u^e = e*u + (e choose 2) * B(u, u), valid for every integer e
            b = self._beta(u, u)
            c = e * (e - 1) // 2
            return tuple(e * x + c * z for x, z in zip(u, b))
        return self._pow_generic(u, e)

    def conjugate(self, u: Element, g: Element) -> Element:
        """g^-1 u g."""
        return self.multiply(self.multiply(self.inverse(g), u), g)

    def commutator(self, u: Element, v: Element) -> Element:
        """u^-1 v^-1 u v."""
        if self.nilpotency_class <= 2:
            b1 = self._beta(u, v)
            b2 = self._beta(v, u)
            return tuple(x - y for x, y in zip(b1, b2))
        return self.multiply(
            self.multiply(self._inv_generic(u), self._inv_generic(v)), self.multiply(u, v)
        )

    def collect(self, word) -> Element:
        """Normal form of a word given as (generator index, exponent) pairs."""
        res = self.identity()
        for idx, e in word:
            if not 0 <= idx < self.n:
                raise ValueError(f"generator index {idx} out of range")
            if e:
                res = self.multiply(res, self.power(self.generator(idx), e))
        return res

    def check_consistency(self) -> None:
        """Associativity on descending generator triples, plus inverses.

        A triangular table can still present an inconsistent group; this
        catches it by checking the collected products (g_c g_b) g_a and
        g_c (g_b g_a) for all c > b > a, which are the critical overlaps.
        """
        gens = [self.generator(k) for k in range(self.n)]
        for c in range(self.n):
            for b in range(c):
                for a in range(b):
                    left = self.multiply(self.multiply(gens[c], gens[b]), gens[a])
                    right = self.multiply(gens[c], self.multiply(gens[b], gens[a]))
                    if left != right:
                        raise ValueError(
                            f"inconsistent presentation: associativity fails on ({c}, {b}, {a})"
                        )
        for k in range(self.n):
            if self.multiply(self.inverse(gens[k]), gens[k]) != self.identity():
                raise ValueError(f"inverse of generator {k} is broken")


# ------------------------------------------------------------------ builders


def heisenberg() -> PcPresentation:
    """<x, y, z | [x, y] = z, z central>, coordinates (a, b, c)."""
    return PcPresentation(3, {(0, 1): (0, 0, -1)}, nilpotency_class=2)


def free_abelian(n: int) -> PcPresentation:
    if n < 1:
        raise ValueError("free abelian rank must be positive")
    return PcPresentation(n, {}, nilpotency_class=1)


def _ut_positions(n: int) -> list[tuple[int, int]]:
    # strictly-upper positions ordered by diagonal, then row
    return [(i, i + d) for d in range(1, n) for i in range(n - d)]


def _mat_mul(a, b, n):
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _mat_eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _ut_inverse(a, n):
    # inverse of a unitriangular matrix: I - N + N^2 - ... with N = a - I
    nil = [[a[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    out = _mat_eye(n)
    term = _mat_eye(n)
    sign = 1
    for _ in range(1, n):
        term = _mat_mul(term, nil, n)
        sign = -sign
        for i in range(n):
            for j in range(n):
                out[i][j] += sign * term[i][j]
    return out


def _ut_peel(mat, positions, n) -> tuple[int, ...]:
    # express a unitriangular matrix as an ordered product of transvections
    exps = []
    cur = [row[:] for row in mat]
    for (r, c) in positions:
        e = cur[r][c]
        exps.append(e)
        if e:
            inv_t = _mat_eye(n)
            inv_t[r][c] = -e
            cur = _mat_mul(inv_t, cur, n)
    assert cur == _mat_eye(n), "peeling did not reach the identity"
    return tuple(exps)


def unitriangular(n: int) -> PcPresentation:
    """Upper unitriangular n x n integer matrices on the transvection basis.

    Generators are I + E_(i,j) ordered along successive superdiagonals;
    the commutator table is extracted from actual matrix arithmetic, which
    keeps the presentation honest for every n.
    """
    if n < 2:
        raise ValueError("unitriangular groups need size at least 2")
    positions = _ut_positions(n)
    m = len(positions)
    rules: dict[tuple[int, int], tuple[int, ...]] = {}
    mats = []
    for (r, c) in positions:
        t = _mat_eye(n)
        t[r][c] = 1
        mats.append(t)
    for a in range(m):
        for b in range(a + 1, m):
            # [g_b, g_a] = g_b^-1 g_a^-1 g_b g_a
            prod = _mat_mul(
                _mat_mul(_ut_inverse(mats[b], n), _ut_inverse(mats[a], n), n),
                _mat_mul(mats[b], mats[a], n),
                n,
            )
            vec = _ut_peel(prod, positions, n)
            if any(vec):
                rules[(a, b)] = vec
    return PcPresentation(m, rules, nilpotency_class=n - 1)


def direct_product(p: PcPresentation, q: PcPresentation) -> PcPresentation:
    n = p.n + q.n
    rules: dict[tuple[int, int], tuple[int, ...]] = {}
    for (i, j), vec in p.rules.items():
        rules[(i, j)] = vec + (0,) * q.n
    for (i, j), vec in q.rules.items():
        rules[(i + p.n, j + p.n)] = (0,) * p.n + vec
    return PcPresentation(n, rules, nilpotency_class=max(p.nilpotency_class, q.nilpotency_class))


def build_standard(name: str) -> PcPresentation:
    """Builders by name: heisenberg, ut(n), free_abelian(n), direct_product(a,b)."""
    name = name.strip()
    if name == "heisenberg":
        return heisenberg()
    for prefix, fn in (("ut", unitriangular), ("free_abelian", free_abelian)):
        if name.startswith(prefix + "(") and name.endswith(")"):
            arg = name[len(prefix) + 1 : -1].strip()
            if not arg.lstrip("-").isdigit():
                raise ValueError(f"bad argument in builder name {name!r}")
            return fn(int(arg))
    if name.startswith("direct_product(") and name.endswith(")"):
        inner = name[len("direct_product(") : -1]
        depth = 0
        split = None
        for t, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                split = t
                break
        if split is None:
            raise ValueError(f"direct_product needs two arguments: {name!r}")
        return direct_product(build_standard(inner[:split]), build_standard(inner[split + 1 :]))
    raise ValueError(f"unknown group builder {name!r}")


# ------------------------------------------------------------ abelianization


def abelianization(p: PcPresentation) -> AbelianQuotient:
    """Quotient by the normal closure of all commutators.

    The relation matrix stacks the commutator-table values; the returned
    quotient carries both the abelian group structure and the projection
    splitting images into free and torsion coordinates.
    """
    rows = [vec for _, vec in sorted(p.rules.items())]
    rel = IntMatrix.from_rows(rows) if rows else IntMatrix(0, p.n, ())
    return abelian_quotient(rel)


def rational_ab_kernel_member(p: PcPresentation, u: Element) -> bool:
    """True iff u dies in the rational abelianization (torsion image)."""
    return abelianization(p).is_torsion(u)


# ------------------------------------------------------------ file format


def presentation_to_text(p: PcPresentation) -> str:
    """Lines: 'n class' then '<i> <j> : e_(j+1) .. e_n' per nontrivial pair (1-based)."""
    lines = [f"{p.n} {p.nilpotency_class}"]
    for (i, j), vec in sorted(p.rules.items()):
        tail = " ".join(str(x) for x in vec[j + 1 :])
        lines.append(f"{i + 1} {j + 1} : {tail}")
    return "\n".join(lines) + "\n"


def presentation_from_text(text: str) -> PcPresentation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty presentation file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'n class'")
    n, cls = int(head[0]), int(head[1])
    rules: dict[tuple[int, int], tuple[int, ...]] = {}
    for ln in lines[1:]:
        if ":" not in ln:
            raise ValueError(f"bad rule line {ln!r}")
        left, right = ln.split(":", 1)
        parts = left.split()
        if len(parts) != 2:
            raise ValueError(f"bad rule line {ln!r}")
        i, j = int(parts[0]) - 1, int(parts[1]) - 1
        tail = [int(t) for t in right.split()]
        if len(tail) != n - j - 1:
            raise ValueError(
                f"rule for pair ({i + 1}, {j + 1}) needs {n - j - 1} exponents, got {len(tail)}"
            )
        rules[(i, j)] = (0,) * (j + 1) + tuple(tail)
    return PcPresentation(n, rules, nilpotency_class=cls)
