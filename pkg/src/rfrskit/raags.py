"""Graph groups: piling normal forms and truncated power-series embeddings.

A finite simple graph presents a group with one generator per vertex and
commutation relations exactly on edges.  Words are put in normal form by
the piling construction: letters fall through per-vertex stacks, inverse
pairs cancel when nothing blocks them, and unpiling greedily by least
vertex yields the lexicographically least reduced representative.

Generators also embed into the free partially-commutative power-series
algebra by v -> 1 + X_v.  Truncating at a degree bound gives nilpotent
quotients whose elements separate short nontrivial words, which is what
`rtfn_witness` certifies exhaustively up to a length bound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import ResourceLimitExceeded

_LETTER_NAMES = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class Graph:
    """Finite simple graph on vertices 0 .. vertex_count-1."""

    vertex_count: int
    edges: frozenset[tuple[int, int]]

    @staticmethod
    def build(vertex_count: int, edges) -> "Graph":
        if vertex_count < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            norm.add((min(u, v), max(u, v)))
        return Graph(vertex_count, frozenset(norm))

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph.build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @staticmethod
    def edgeless(n: int) -> "Graph":
        return Graph.build(n, [])

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph.build(n, [(i, i + 1) for i in range(n - 1)])

    def commutes(self, u: int, v: int) -> bool:
        return u == v or (min(u, v), max(u, v)) in self.edges

    def noncommuters(self, v: int) -> list[int]:
        return [u for u in range(self.vertex_count) if u != v and not self.commutes(u, v)]


@dataclass(frozen=True)
class RaagWord:
    """Word in the graph group: (vertex, exponent) syllables, adjacent
    same-vertex syllables merged, no zero exponents."""

    letters: tuple[tuple[int, int], ...]

    @staticmethod
    def build(letters) -> "RaagWord":
        merged: list[list[int]] = []
        for v, e in letters:
            v, e = int(v), int(e)
            if not e:
                continue
            if merged and merged[-1][0] == v:
                merged[-1][1] += e
                if not merged[-1][1]:
                    merged.pop()
            else:
                merged.append([v, e])
        return RaagWord(tuple((v, e) for v, e in merged))

    def units(self) -> list[tuple[int, int]]:
        out = []
        for v, e in self.letters:
            step = 1 if e > 0 else -1
            out.extend([(v, step)] * abs(e))
        return out

    def is_identity_word(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        parts = []
        for v, e in self.letters:
            name = _LETTER_NAMES[v] if v < len(_LETTER_NAMES) else f"v{v}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return ",".join(parts) if parts else "1"


@dataclass(frozen=True)
class RaagPresentation:
    """Graph plus generator naming; the graph carries all the structure."""

    graph: Graph

    def generator_names(self) -> list[str]:
        if self.graph.vertex_count > len(_LETTER_NAMES):
            raise ValueError("letter names support at most 26 vertices")
        return list(_LETTER_NAMES[: self.graph.vertex_count])

    def commuting_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.graph.edges)


def raag_from_graph(g: Graph) -> RaagPresentation:
    return RaagPresentation(graph=g)


# -------------------------------------------------------------- normal form


def _pile_units(g: Graph, units) -> list[tuple[int, int]]:
    piles: list[deque] = [deque() for _ in range(g.vertex_count)]
    noncomm = [g.noncommuters(v) for v in range(g.vertex_count)]
    for v, eps in units:
        pile = piles[v]
        if pile and pile[-1] == -eps:
            pile.pop()
            for u in noncomm[v]:
                piles[u].pop()
        else:
            pile.append(eps)
            for u in noncomm[v]:
                piles[u].append(0)
    out = []
    while True:
        ready = [v for v in range(g.vertex_count) if piles[v] and piles[v][0] != 0]
        if not ready:
            break
        v = min(ready)
        eps = piles[v].popleft()
        out.append((v, eps))
        for u in noncomm[v]:
            marker = piles[u].popleft()
            assert marker == 0
    assert all(not p for p in piles)
    return out


def normal_form(g: Graph, w: RaagWord) -> RaagWord:
    """Lexicographically least reduced representative; empty iff trivial."""
    return RaagWord.build(_pile_units(g, w.units()))


def words_equal(g: Graph, w1: RaagWord, w2: RaagWord) -> bool:
    return normal_form(g, w1) == normal_form(g, w2)


# ---------------------------------------------------------- truncated series


def _canonical_monomial(g: Graph, mono: tuple[int, ...]) -> tuple[int, ...]:
    # lex-least representative by greedy extraction: repeatedly pull out the
    # least symbol whose earlier neighbors all commute with it.  (A bubble
    # pass of improving adjacent swaps can stall in a local minimum, e.g.
    # x2 x0 x1 on the path graph 0-1-2, so greedy it is.)
    letters = list(mono)
    out = []
    while letters:
        best = None
        for p, s in enumerate(letters):
            if all(g.commutes(s, letters[q]) for q in range(p)):
                if best is None or s < letters[best]:
                    best = p
        out.append(letters.pop(best))
    return tuple(out)


@dataclass
class TruncatedSeries:
    """Element of the partially-commutative power-series algebra modulo
    terms of degree above `degree_bound`; keys are canonical monomials."""

    degree_bound: int
    coefficients: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    @staticmethod
    def one(d: int) -> "TruncatedSeries":
        return TruncatedSeries(d, {(): Fraction(1)})

    def is_one(self) -> bool:
        return self.coefficients == {(): Fraction(1)}

    def coefficient(self, mono: tuple[int, ...]) -> Fraction:
        return self.coefficients.get(mono, Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.coefficients.items(), key=lambda kv: (len(kv[0]), kv[0]))


def series_multiply(g: Graph, s1: TruncatedSeries, s2: TruncatedSeries) -> TruncatedSeries:
    if s1.degree_bound != s2.degree_bound:
        raise ValueError("degree bounds differ")
    d = s1.degree_bound
    out: dict[tuple[int, ...], Fraction] = {}
    for m1, c1 in s1.coefficients.items():
        for m2, c2 in s2.coefficients.items():
            if len(m1) + len(m2) > d:
                continue
            key = _canonical_monomial(g, m1 + m2)
            val = out.get(key, Fraction(0)) + c1 * c2
            if val:
                out[key] = val
            elif key in out:
                del out[key]
    return TruncatedSeries(d, out)


def _letter_series(g: Graph, v: int, e: int, d: int) -> TruncatedSeries:
    coeffs: dict[tuple[int, ...], Fraction] = {}
    if e >= 0:
        top = min(e, d)
        for k in range(top + 1):
            coeffs[(v,) * k] = Fraction(comb(e, k))
    else:
        a = -e
        for k in range(d + 1):
            c = comb(a + k - 1, k) * (-1) ** k
            coeffs[(v,) * k] = Fraction(c)
    return TruncatedSeries(d, coeffs)


def magnus_image(g: Graph, w: RaagWord, d: int) -> TruncatedSeries:
    """Image of w under v -> 1 + X_v, truncated beyond degree d."""
    if d < 1:
        raise ValueError("degree bound must be at least 1")
    out = TruncatedSeries.one(d)
    for v, e in w.letters:
        out = series_multiply(g, out, _letter_series(g, v, e, d))
    return out


# ------------------------------------------------------- separation witness


@dataclass(frozen=True)
class RtfnWitnessReport:
    """Exhaustive check that nontrivial words up to a length bound have
    nontrivial truncated-series image, i.e. are separated by the degree
    filtration's torsion-free nilpotent quotients."""

    max_len: int
    degree: int
    elements_checked: int
    separated: bool
    failures: tuple[tuple[tuple[int, int], ...], ...]


def rtfn_witness(g: Graph, max_len: int) -> RtfnWitnessReport:
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if g.vertex_count > 4 or max_len > 6:
        raise ResourceLimitExceeded(
            "separation witness is bounded to at most 4 vertices and length 6"
        )
    alphabet = [(v, e) for v in range(g.vertex_count) for e in (1, -1)]
    failures: list[tuple[tuple[int, int], ...]] = []
    checked = 0

    def is_normal_units(units: list[tuple[int, int]]) -> bool:
        return _pile_units(g, units) == units

    def extend(units: list[tuple[int, int]], series: TruncatedSeries) -> None:
        nonlocal checked
        for letter in alphabet:
            cand = units + [letter]
            if not is_normal_units(cand):
                continue
            s2 = series_multiply(g, series, _letter_series(g, letter[0], letter[1], max_len))
            checked += 1
            if s2.is_one():
                failures.append(tuple(cand))
            if len(cand) < max_len:
                extend(cand, s2)

    extend([], TruncatedSeries.one(max_len))
    return RtfnWitnessReport(
        max_len=max_len,
        degree=max_len,
        elements_checked=checked,
        separated=not failures,
        failures=tuple(failures),
    )


# ------------------------------------------------------------- file formats


def graph_to_text(g: Graph) -> str:
    lines = [str(g.vertex_count)]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    n = int(lines[0])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.build(n, edges)


def word_from_tokens(g: Graph, text: str) -> RaagWord:
    """Parse comma-separated tokens like 'a', 'a^-1', 'b^2'."""
    letters = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if "^" in token:
            name, exp = token.split("^", 1)
            e = int(exp)
        else:
            name, e = token, 1
        name = name.strip()
        if len(name) == 1 and name in _LETTER_NAMES:
            v = _LETTER_NAMES.index(name)
        elif name.startswith("v") and name[1:].isdigit():
            v = int(name[1:])
        else:
            raise ValueError(f"bad word token {token!r}")
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"vertex {name!r} out of range for this graph")
        letters.append((v, e))
    return RaagWord.build(letters)
