"""State spaces of the universal construction.

An evaluation assigns scalars to canonical loops and interval classes; it
extends multiplicatively to closed diagrams.  The state space at an object
is spanned by the open diagrams from the unit into it; the pairing composes
one against the reflection of another and evaluates.  Over the rationals the
dimension is the Gram rank; over the Boolean semiring the states are the
distinct rows (residual languages), with the join-irreducible rows counted
separately.

Also here: exact weighted-automaton minimization (the Hankel pairing of the
non-monoidal construction) and the two-dimensional cobordism state spaces,
where spanning diagrams are partitions of the boundary circles with a genus
attached to each block and gluing is Euler-characteristic bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Mapping, Sequence

from .diagrams import BrauerMorphism, compose, transpose
from .errors import DomainError
from .fincat import IntervalClass, Loop
from .linalg import Matrix, distinct_rows, rank, rat, solve


class MissingValue(DomainError):
    """A loop or interval class outside the evaluation's domain."""


class SequenceTooShort(DomainError):
    """The genus value sequence does not reach a genus produced by gluing."""


class Evaluation:
    """Values on canonical loops and interval classes; multiplicative on disjoint union."""

    def __init__(self, loop_values: Mapping | None = None,
                 interval_values: Mapping | None = None):
        self.loop_values = dict(loop_values or {})
        self.interval_values = dict(interval_values or {})

    def loop(self, lp: Loop):
        try:
            return self.loop_values[lp]
        except KeyError:
            raise MissingValue(f"no value for loop {lp!r}") from None

    def interval(self, iv: IntervalClass):
        try:
            return self.interval_values[iv]
        except KeyError:
            raise MissingValue(f"no value for interval {iv!r}") from None


def evaluation_from_monoid(cat, values: Sequence) -> Evaluation:
    """Per-element values (must be constant on loop classes) over a MonoidCategory."""
    table = {}
    for g in range(cat.monoid.size):
        lp = cat.loop_class(0, [g])
        v = rat(values[g])
        if lp in table and table[lp] != v:
            raise ValueError(f"values not constant on the class of {g}")
        table[lp] = v
    return Evaluation(loop_values=table)


def evaluate_closed(d: BrauerMorphism, alpha: Evaluation):
    """Product of the values of the floating parts; empty diagram gives 1."""
    assert d.is_closed(), "evaluation needs a closed diagram"
    out = Fraction(1)
    for lp in d.loops:
        out = out * alpha.loop(lp)
    for iv in d.intervals:
        out = out * alpha.interval(iv)
    return out


# ---------------------------------------------------------------------------
# spanning sets


def _labels_for(cat, x, y, cap_words: int):
    words = getattr(cat, "words_up_to", None)
    if words is not None:
        return words(cap_words)
    return cat.hom(x, y)


def _boundary_elements(cat, boundary, x, side: str, cap_words: int):
    words = getattr(cat, "words_up_to", None)
    if words is not None:
        return words(cap_words)
    sets = boundary.gr_sets if side == "gr" else boundary.gl_sets
    return list(sets[x])


def enumerate_kets(cat, obj, boundary=None, cap_words: int = 4
                   ) -> list[BrauerMorphism]:
    """All diagrams from the unit to `obj`: matchings, labels, half-intervals.

    Floating components are excluded — they only rescale.  Enumeration order
    is deterministic: endpoints processed left to right, label lists in
    category order.
    """
    obj = tuple(obj)
    n = len(obj)
    effs = [s for _x, s in obj]  # kets: all endpoints are target entries

    matchings: list[tuple] = []

    def backtrack(unmatched: list[int], partial: list):
        if not unmatched:
            matchings.append(tuple(partial))
            return
        e = unmatched[0]
        rest = unmatched[1:]
        for other in rest:
            if effs[other] == effs[e]:
                continue
            t, h = (e, other) if effs[e] == -1 else (other, e)
            remaining = [u for u in rest if u != other]
            backtrack(remaining, partial + [("arc", t, h)])
        if boundary is not None:
            backtrack(rest, partial + [("half", e)])

    backtrack(list(range(n)), [])

    kets = []
    for matching in matchings:
        slots = []
        for item in matching:
            if item[0] == "arc":
                _, t, h = item
                slots.append(_labels_for(cat, obj[t][0], obj[h][0], cap_words))
            else:
                _, e = item
                side = "gr" if effs[e] == 1 else "gl"
                slots.append(_boundary_elements(cat, boundary, obj[e][0],
                                                side, cap_words))
        for choice in iproduct(*slots):
            arcs, halves = [], []
            for item, lab in zip(matching, choice):
                if item[0] == "arc":
                    arcs.append((item[1], item[2], lab))
                else:
                    halves.append((item[1], lab))
            kets.append(BrauerMorphism(cat, (), obj, arcs, halves,
                                       boundary=boundary))
    return kets


@dataclass
class StateSpace:
    object: tuple
    spanning: list
    gram: Matrix
    dimension: int
    cap_words: int


@dataclass
class BooleanStateSpace:
    object: tuple
    spanning: list
    rows: list
    states: list
    n_states: int
    n_join_irreducible: int
    cap_words: int


def state_space_field(cat, obj, alpha: Evaluation, boundary=None,
                      cap_words: int = 4) -> StateSpace:
    kets = enumerate_kets(cat, obj, boundary, cap_words)
    bras = [transpose(k) for k in kets]
    gram = Matrix([[evaluate_closed(compose(b, k), alpha) for b in bras]
                   for k in kets])
    dim = rank(gram) if kets else 0
    return StateSpace(tuple(obj), kets, gram, dim, cap_words)


def _join_irreducible_count(rows: list[tuple]) -> int:
    """Rows not recovered as the union of the strictly smaller distinct rows."""
    count = 0
    for r in rows:
        below = [s for s in rows if s != r and all(a <= b for a, b in zip(s, r))]
        join = tuple(max(vals) for vals in zip(*below)) if below else tuple(
            0 for _ in r)
        if join != r:
            count += 1
    return count


def state_space_boolean(cat, obj, alpha: Evaluation, boundary=None,
                        cap_words: int = 4) -> BooleanStateSpace:
    kets = enumerate_kets(cat, obj, boundary, cap_words)
    bras = [transpose(k) for k in kets]
    rows = [tuple(1 if evaluate_closed(compose(b, k), alpha) else 0
                  for b in bras) for k in kets]
    states = distinct_rows(rows)
    return BooleanStateSpace(tuple(obj), kets, rows, states, len(states),
                             _join_irreducible_count(states), cap_words)


# ---------------------------------------------------------------------------
# weighted automata (the Hankel pairing, reduced exactly)


class WeightedAutomaton:
    """initial (row) -> transitions per letter -> final (column), over Q."""

    def __init__(self, initial: Sequence, transitions: Mapping[str, Matrix],
                 final: Sequence):
        self.initial = tuple(rat(x) for x in initial)
        self.transitions = dict(transitions)
        self.final = tuple(rat(x) for x in final)
        self.dimension = len(self.initial)
        assert len(self.final) == self.dimension
        for a, m in self.transitions.items():
            assert m.rows == m.cols == self.dimension, f"bad shape at {a!r}"

    @property
    def alphabet(self) -> list[str]:
        return sorted(self.transitions)

    def weight(self, word: Sequence[str]) -> Fraction:
        v = self.initial
        for a in word:
            m = self.transitions[a]
            v = tuple(sum((v[i] * m[i, j] for i in range(m.rows)), Fraction(0))
                      for j in range(m.cols))
        return sum((x * y for x, y in zip(v, self.final)), Fraction(0))


def _row_reduce_basis(vectors: list[tuple]) -> list[tuple]:
    """Independent spanning subset, kept in echelon form for membership tests."""
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for v in vectors:
        v = [rat(x) for x in v]
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p]
                v = [x - f * y for x, y in zip(v, b)]
        piv = next((i for i, x in enumerate(v) if x != 0), None)
        if piv is None:
            continue
        inv = 1 / v[piv]
        v = [x * inv for x in v]
        basis.append(v)
        pivots.append(piv)
    return [tuple(b) for b in basis]


def _forward_reduce(a: WeightedAutomaton) -> WeightedAutomaton:
    """Restrict to the row space reachable from the initial vector."""
    span: list[tuple] = []
    frontier = [a.initial]
    while frontier:
        new_span = _row_reduce_basis(span + frontier)
        if len(new_span) == len(span):
            break
        added = frontier
        span = new_span
        frontier = []
        for v in added:
            for letter in a.alphabet:
                m = a.transitions[letter]
                w = tuple(sum((v[i] * m[i, j] for i in range(m.rows)),
                              Fraction(0)) for j in range(m.cols))
                frontier.append(w)
    basis = span
    if not basis:
        return WeightedAutomaton([], {letter: Matrix([]) for letter in a.alphabet}, [])
    bmat = Matrix(basis)  # k x n
    bt = bmat.transpose()

    def coords(v: tuple) -> tuple:
        x = solve(bt, v)
        assert x is not None, "vector escaped the reachable span"
        return x

    init = coords(a.initial)
    trans = {}
    for letter in a.alphabet:
        m = a.transitions[letter]
        rows = []
        for b in basis:
            vb = tuple(sum((b[i] * m[i, j] for i in range(m.rows)), Fraction(0))
                       for j in range(m.cols))
            rows.append(coords(vb))
        trans[letter] = Matrix(rows)
    final = tuple(sum((b[i] * a.final[i] for i in range(len(b))), Fraction(0))
                  for b in basis)
    return WeightedAutomaton(init, trans, final)


def _reverse(a: WeightedAutomaton) -> WeightedAutomaton:
    return WeightedAutomaton(
        a.final, {letter: m.transpose() for letter, m in a.transitions.items()},
        a.initial)


def hankel_minimize(a: WeightedAutomaton) -> WeightedAutomaton:
    """Exact minimization: forward reduction, then the same on the reversal."""
    return _reverse(_forward_reduce(_reverse(_forward_reduce(a))))


# ---------------------------------------------------------------------------
# 2d cobordism state spaces


@dataclass(frozen=True)
class PartitionDiagram:
    """Partition of circles {1..m} into blocks, each block carrying a genus."""

    m: int
    blocks: tuple  # tuple of sorted tuples
    genus: tuple  # one count per block

    @classmethod
    def make(cls, m: int, blocks, genus) -> "PartitionDiagram":
        normalized = [tuple(sorted(b)) for b in blocks]
        genus_in = list(genus)
        if len(genus_in) != len(normalized):
            raise ValueError("one genus per block required")
        pairs = sorted(zip(normalized, genus_in))
        seen = sorted(c for b in normalized for c in b)
        if seen != list(range(1, m + 1)):
            raise ValueError("blocks must partition 1..m")
        return cls(m, tuple(b for b, _ in pairs), tuple(g for _, g in pairs))


def _partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
        yield [[first]] + sub


def glue_partition_diagrams(d1: PartitionDiagram, d2: PartitionDiagram,
                            alpha_seq: Sequence) -> Fraction:
    """Glue along the m circles; product of genus values over components.

    Each connected component of the block-circle bipartite graph contributes
    alpha_seq[total genus], where total genus sums the blocks' genera plus
    the component's first Betti number E - V + 1.
    """
    if d1.m != d2.m:
        raise ValueError("circle counts differ")
    nodes = [(1, i) for i in range(len(d1.blocks))] + \
            [(2, j) for j in range(len(d2.blocks))]
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv

    def block_of(d, tag, c):
        for i, b in enumerate(d.blocks):
            if c in b:
                return (tag, i)
        raise AssertionError("circle missing from partition")

    edges = []
    for c in range(1, d1.m + 1):
        u = block_of(d1, 1, c)
        v = block_of(d2, 2, c)
        edges.append((u, v))
        union(u, v)

    comp_v: dict = {}
    comp_e: dict = {}
    comp_g: dict = {}
    for v in nodes:
        r = find(v)
        comp_v[r] = comp_v.get(r, 0) + 1
        tag, i = v
        comp_g[r] = comp_g.get(r, 0) + (d1 if tag == 1 else d2).genus[i]
    for u, _v in edges:
        r = find(u)
        comp_e[r] = comp_e.get(r, 0) + 1

    out = Fraction(1)
    for r in comp_v:
        g = comp_g.get(r, 0) + comp_e.get(r, 0) - comp_v[r] + 1
        if g >= len(alpha_seq):
            raise SequenceTooShort(
                f"need genus value {g}, have {len(alpha_seq)}")
        out = out * rat(alpha_seq[g])
    return out


def cob2_spanning(m: int, genus_cap: int) -> list[PartitionDiagram]:
    out = []
    for blocks in _partitions(list(range(1, m + 1))):
        blocks_t = tuple(sorted(tuple(sorted(b)) for b in blocks))
        for genus in iproduct(range(genus_cap + 1), repeat=len(blocks_t)):
            out.append(PartitionDiagram.make(m, blocks_t, genus))
    return out


def cob2_state_space(m: int, alpha_seq: Sequence, genus_cap: int
                     ) -> tuple[int, bool]:
    """Dimension of the circle-count-m state space, plus a stabilization flag."""

    def dim_at(cap: int) -> int:
        spanning = cob2_spanning(m, cap)
        gram = Matrix([[glue_partition_diagrams(a, b, alpha_seq)
                        for b in spanning] for a in spanning])
        return rank(gram)

    dim = dim_at(genus_cap)
    stabilized = genus_cap >= 1 and dim == dim_at(genus_cap - 1)
    return dim, stabilized
