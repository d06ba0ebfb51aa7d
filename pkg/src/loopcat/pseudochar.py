"""Pseudocharacters on finite monoids and their antisymmetrized traces.

A pseudocharacter is a class function that behaves like the trace of a
(possibly unknown) representation: the signed sum of cycle-products over
all permutations of d+1 arguments vanishes identically, with d minimal.
This module detects that degree, extracts the characteristic polynomial an
element satisfies relative to the class function, lifts class functions
against a supplied character table, extends the vanishing test to diagrams
with boundary decorations and to direct sums of objects, and evaluates the
holonomy pseudocharacter of an edge-labeled graph.

The cycle-product expansions here mirror the closed-diagram route in
`diagrams` (close up a labeled permutation diagram, one loop per cycle);
the test suite holds the two routes against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from .errors import DomainError
from .fincat import FiniteMonoid, conjugacy_classes, least_rotation
from .linalg import Matrix, Polynomial, det, rank, rat, rat_str, solve
from .diagrams import perm_sign


class NotPseudo(DomainError):
    """The class function has no admissible degree."""


class DegreeMismatch(DomainError):
    """alpha_charpoly called with a d other than degree(alpha)."""


class SingularTable(DomainError):
    """Supplied character table is linearly dependent."""


class Infeasible(DomainError):
    """No nonnegative-integer combination; carries the rational one."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class NonInvertibleEdge(DomainError):
    """A graph edge carries a singular matrix."""


# ---------------------------------------------------------------------------
# class functions


class PseudoCharacter:
    """Rational class function on a finite monoid, stored per class."""

    def __init__(self, monoid: FiniteMonoid, class_values, classes=None):
        self.monoid = monoid
        self.classes = tuple(tuple(c) for c in
                             (classes if classes is not None
                              else conjugacy_classes(monoid)))
        self.values = tuple(rat(v) for v in class_values)
        if len(self.values) != len(self.classes):
            raise ValueError("one value per conjugacy class required")
        self._class_of = {}
        for ci, cls in enumerate(self.classes):
            for e in cls:
                self._class_of[e] = ci
        if len(self._class_of) != monoid.size:
            raise ValueError("classes do not cover the monoid")

    @classmethod
    def from_element_values(cls, monoid: FiniteMonoid, values):
        values = [rat(v) for v in values]
        if len(values) != monoid.size:
            raise ValueError("one value per element required")
        classes = conjugacy_classes(monoid)
        for c in classes:
            if len({values[e] for e in c}) != 1:
                raise ValueError(f"values not constant on class {c}")
        return cls(monoid, [values[c[0]] for c in classes], classes)

    def __call__(self, element: int) -> Fraction:
        return self.values[self._class_of[element]]


class RepData:
    """Matrix representation of a finite monoid, one matrix per element.

    Multiplication is checked in reading order: r(a then b) = r(a)·r(b),
    the convention that makes row-indexed permutation matrices work.
    """

    def __init__(self, monoid: FiniteMonoid, matrices):
        self.monoid = monoid
        self.matrices = tuple(matrices)
        if len(self.matrices) != monoid.size:
            raise ValueError("one matrix per element required")
        dim = self.matrices[0].rows
        for m in self.matrices:
            if m.rows != dim or m.cols != dim:
                raise ValueError("matrices must be square of equal size")
        self.dimension = dim
        if self.matrices[monoid.identity] != Matrix.identity(dim):
            raise ValueError("identity element must map to the identity matrix")
        for a in range(monoid.size):
            for b in range(monoid.size):
                if self.matrices[monoid.mul(a, b)] != \
                        self.matrices[a] * self.matrices[b]:
                    raise ValueError(f"not multiplicative at ({a}, {b})")


def char_of_rep(r: RepData) -> PseudoCharacter:
    return PseudoCharacter.from_element_values(
        r.monoid, [m.trace() for m in r.matrices])


# ---------------------------------------------------------------------------
# antisymmetrized traces


@lru_cache(maxsize=None)
def _signed_cycle_decompositions(n: int):
    """All permutations of n slots as (sign, cycles), cycles in traversal
    order starting from each orbit's least slot."""
    out = []
    for sigma in permutations(range(n)):
        seen = [False] * n
        cycles = []
        for i in range(n):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = sigma[j]
            cycles.append(tuple(cyc))
        out.append((perm_sign(sigma), tuple(cycles)))
    return tuple(out)


def antisym_trace(alpha: PseudoCharacter, g) -> Fraction:
    """Signed sum over permutations of products of cycle values.

    Each permutation contributes its sign times the product, over its
    cycles, of alpha evaluated on the product of the tuple entries read
    along the cycle.  Equals the closed-diagram evaluation of the tuple
    composed with the antisymmetrizer.
    """
    m = alpha.monoid
    total = Fraction(0)
    for sign, cycles in _signed_cycle_decompositions(len(g)):
        term = Fraction(sign)
        for cyc in cycles:
            prod = g[cyc[0]]
            for i in cyc[1:]:
                prod = m.mul(prod, g[i])
            term *= alpha(prod)
            if term == 0:
                break
        total += term
    return total


@dataclass(frozen=True)
class DegreeResult:
    d: int
    witness: tuple
    tuples_checked: int


def degree(alpha: PseudoCharacter, max_d: int) -> DegreeResult:
    """Smallest d with every (d+1)-fold antisymmetrized trace zero.

    The vanishing check runs over unordered tuples (antisym_trace is
    symmetric in its arguments); the nonvanishing witness at level d is the
    lexicographically first ordered tuple.  Cross-checked against the
    characteristic-zero identity d = alpha(identity); disagreement, a
    fractional or negative identity value, or exhaustion of max_d all
    reject the class function.
    """
    e_val = alpha(alpha.monoid.identity)
    if e_val.denominator != 1 or e_val < 0:
        raise NotPseudo(f"identity value {e_val} is not a nonnegative integer")
    elements = range(alpha.monoid.size)
    checked = 0
    for d in range(max_d + 1):
        level_clean = True
        for tup in combinations_with_replacement(elements, d + 1):
            checked += 1
            if antisym_trace(alpha, tup) != 0:
                level_clean = False
                break
        if not level_clean:
            continue
        witness = None
        for tup in product(elements, repeat=d):
            if antisym_trace(alpha, tup) != 0:
                witness = tup
                break
        if witness is None:
            raise NotPseudo(
                f"level {d + 1} vanishes but no level-{d} witness exists")
        if e_val != d:
            raise NotPseudo(
                f"vanishing degree {d} disagrees with identity value {e_val}")
        return DegreeResult(d, witness, checked)
    raise NotPseudo(f"no degree up to {max_d}")


def alpha_charpoly(alpha: PseudoCharacter, x: int, d: int) -> Polynomial:
    """Monic degree-d polynomial killed by x relative to alpha.

    Expand the (d+1)-slot antisymmetrized trace with d copies of x and one
    free slot y; the result is a combination sum_k gamma_k(x) alpha(x^k y),
    and the polynomial is sum_k (gamma_k / gamma_d) t^k.  For alpha a
    character this is the ordinary characteristic polynomial of the matrix
    of x.
    """
    try:
        found = degree(alpha, d)
    except NotPseudo as exc:
        raise DegreeMismatch(str(exc)) from exc
    if found.d != d:
        raise DegreeMismatch(f"degree is {found.d}, not {d}")
    m = alpha.monoid
    powers = [m.identity]
    for _ in range(d + 1):
        powers.append(m.mul(powers[-1], x))
    gamma = [Fraction(0)] * (d + 1)
    free = d  # slot index of y
    for sign, cycles in _signed_cycle_decompositions(d + 1):
        coeff = Fraction(sign)
        k = None
        for cyc in cycles:
            if free in cyc:
                k = len(cyc) - 1
            else:
                coeff *= alpha(powers[len(cyc)])
        gamma[k] += coeff
    lead = gamma[d]  # (-1)^d d!, counts full cycles through the free slot
    return Polynomial([c / lead for c in gamma])


def antisym_trace_boundary(cat, boundary, alpha, x_labels, boundary_pairs,
                           base=0) -> Fraction:
    """Antisymmetrized trace where some slots are boundary-cut strands.

    An x slot is a strand labeled by an endomorphism; a pair slot (y, z) is
    a strand cut in the middle, restarting at a right element y and ending
    at a left element z.  A permutation cycle through x slots only closes
    into a loop; a cycle through k pair slots breaks into k interval
    classes, each absorbing the x labels between consecutive cuts.
    """
    slots = [("x", lab) for lab in x_labels]
    slots += [("p", yz) for yz in boundary_pairs]
    n = len(slots)
    total = Fraction(0)
    for sign, cycles in _signed_cycle_decompositions(n):
        term = Fraction(sign)
        for cyc in cycles:
            cuts = [pos for pos, i in enumerate(cyc) if slots[i][0] == "p"]
            if not cuts:
                labels = [slots[i][1] for i in cyc]
                term *= alpha.loop(cat.loop_class(base, labels))
                continue
            for a, pos in enumerate(cuts):
                nxt = cuts[(a + 1) % len(cuts)]
                g = slots[cyc[pos]][1][0]  # start at this pair's y
                step = (pos + 1) % len(cyc)
                while step != nxt:
                    g = boundary.gr(slots[cyc[step]][1], g)
                    step = (step + 1) % len(cyc)
                z = slots[cyc[nxt]][1][1]
                term *= alpha.interval(boundary.interval_class(base, z, g))
        total += term
    return total


# ---------------------------------------------------------------------------
# lifting against a character table


def lift_with_table(alpha: PseudoCharacter, table):
    """Solve alpha = sum n_i chi_i over the supplied characters.

    Returns the tuple of multiplicities when they are nonnegative integers;
    raises Infeasible carrying the exact rational solution (or None when
    alpha is outside the span) otherwise.
    """
    n_classes = len(alpha.classes)
    for chi in table:
        if len(chi.classes) != n_classes:
            raise ValueError("table characters live on a different monoid")
    a = Matrix([[chi.values[ci] for chi in table] for ci in range(n_classes)])
    if rank(a) != len(table):
        raise SingularTable("table characters are linearly dependent")
    sol = solve(a, alpha.values)
    if sol is None:
        raise Infeasible("alpha is not in the span of the table", None)
    if all(s.denominator == 1 and s >= 0 for s in sol):
        return tuple(int(s) for s in sol)
    raise Infeasible("multiplicities are not nonnegative integers", sol)


# ---------------------------------------------------------------------------
# degree additivity on a formal direct sum


@dataclass(frozen=True)
class AdditivityReport:
    degrees: tuple
    sum_degree: int
    additive: bool


def _end_monoid(cat, obj):
    """End(obj) of a finite category as a FiniteMonoid plus element list."""
    elems = list(cat.hom(obj, obj))
    index = {m: i for i, m in enumerate(elems)}
    table = [[index[cat.compose(b, a)] for b in elems] for a in elems]
    return FiniteMonoid(table, index[cat.identity(obj)]), elems


def degree_additivity_check(cat, alpha, objects=None, max_d=6):
    """Degree of a formal direct sum versus the sum of part degrees.

    Endomorphisms of the sum are matrix units (i, j, f) with f a morphism
    from objects[i] to objects[j]; by multilinearity it is enough to run
    the antisymmetrized-trace tests on tuples of matrix units, evaluating
    a permutation cycle as a loop when its unit chain closes and as zero
    when it breaks.
    """
    objs = tuple(objects if objects is not None else cat.objects)
    part_degrees = []
    for obj in objs:
        monoid, elems = _end_monoid(cat, obj)
        values = [alpha.loop(cat.loop_class(obj, [f])) for f in elems]
        part = PseudoCharacter.from_element_values(monoid, values)
        part_degrees.append(degree(part, max_d).d)

    units = [(i, j, f)
             for i in range(len(objs)) for j in range(len(objs))
             for f in cat.hom(objs[i], objs[j])]

    def cycle_value(slot_units):
        i0, j, f = slot_units[0]
        for i2, j2, f2 in slot_units[1:]:
            if j != i2:
                return Fraction(0)
            f, j = cat.compose(f2, f), j2
        if j != i0:
            return Fraction(0)
        return alpha.loop(cat.loop_class(objs[i0], [f]))

    def antisym(tup):
        total = Fraction(0)
        for sign, cycles in _signed_cycle_decompositions(len(tup)):
            term = Fraction(sign)
            for cyc in cycles:
                term *= cycle_value([tup[i] for i in cyc])
                if term == 0:
                    break
            total += term
        return total

    sum_degree = None
    for d in range(max_d + 1):
        if all(antisym(tup) == 0
               for tup in combinations_with_replacement(units, d + 1)):
            sum_degree = d
            break
    if sum_degree is None:
        raise NotPseudo(f"direct sum has no degree up to {max_d}")
    return AdditivityReport(tuple(part_degrees), sum_degree,
                            sum_degree == sum(part_degrees))


# ---------------------------------------------------------------------------
# graph holonomy


class GraphHolonomy:
    """Directed graph with an invertible square matrix on each edge."""

    def __init__(self, n_vertices: int, edges):
        self.n_vertices = n_vertices
        self.edges = tuple((src, tgt, m) for src, tgt, m in edges)
        self.vertex_dim = {}
        for src, tgt, m in self.edges:
            if m.rows != m.cols:
                raise ValueError("edge matrices must be square")
            if det(m) == 0:
                raise NonInvertibleEdge(f"edge {src}->{tgt} is singular")
            for v in (src, tgt):
                if self.vertex_dim.setdefault(v, m.rows) != m.rows:
                    raise ValueError(f"inconsistent dimension at vertex {v}")


@dataclass(frozen=True)
class HolonomyReport:
    table: dict
    base: int
    dimension: int
    degree: DegreeResult


def _matrix_antisym(mats) -> Fraction:
    total = Fraction(0)
    for sign, cycles in _signed_cycle_decompositions(len(mats)):
        term = Fraction(sign)
        for cyc in cycles:
            prod = mats[cyc[0]]
            for i in cyc[1:]:
                prod = prod * mats[i]
            term *= prod.trace()
            if term == 0:
                break
        total += term
    return total


def graph_pseudoholonomy(gh: GraphHolonomy, max_len: int,
                         base=0) -> HolonomyReport:
    """Traces of edge-matrix products around closed walks.

    The table keys closed walks (as edge-index tuples) by their least
    cyclic rotation; the value is the trace of the ordered product, so
    rotations agree by trace cyclicity.  The degree report reruns the
    vanishing search over the walks based at `base`, truncated at max_len
    — the honest certificate is relative to that truncation.
    """
    out_edges = {}
    for ei, (src, _tgt, _m) in enumerate(gh.edges):
        out_edges.setdefault(src, []).append(ei)

    table = {}
    based = {}  # matrix of each closed walk at base, keyed by the matrix

    def extend(walk, vertex, mat, start):
        if gh.edges[walk[-1]][1] == start and len(walk) >= 1:
            table.setdefault(least_rotation(tuple(walk)), mat.trace())
            if start == base:
                based.setdefault(tuple(walk), mat)
        if len(walk) == max_len:
            return
        for ei in out_edges.get(vertex, []):
            _s, t, m = gh.edges[ei]
            extend(walk + [ei], t, mat * m, start)

    for ei, (src, tgt, m) in enumerate(gh.edges):
        extend([ei], tgt, m, src)

    dim = gh.vertex_dim.get(base)
    if dim is None:
        raise ValueError(f"vertex {base} has no incident edge")
    mats = [Matrix.identity(dim)]
    for m in based.values():
        if m not in mats:
            mats.append(m)

    checked = 0
    deg = None
    for d in range(dim + 2):
        level_clean = True
        for tup in combinations_with_replacement(mats, d + 1):
            checked += 1
            if _matrix_antisym(tup) != 0:
                level_clean = False
                break
        if level_clean:
            deg = d
            break
    if deg is None or deg != dim:
        raise NotPseudo(
            f"holonomy at vertex {base} has degree {deg}, dimension {dim}")
    witness = None
    for tup in product(mats, repeat=deg):
        if _matrix_antisym(tup) != 0:
            witness = tup
            break
    return HolonomyReport(table, base, dim,
                          DegreeResult(deg, witness, checked))


# ---------------------------------------------------------------------------
# JSON


def pseudochar_to_json(alpha: PseudoCharacter) -> dict:
    return {"pseudocharacter": {
        "classes": [list(c) for c in alpha.classes],
        "values": [rat_str(v) for v in alpha.values],
    }}


def pseudochar_from_json(monoid: FiniteMonoid, doc: dict) -> PseudoCharacter:
    body = doc["pseudocharacter"]
    return PseudoCharacter(monoid, [rat(v) for v in body["values"]],
                           classes=[tuple(c) for c in body["classes"]])


def rep_from_json(monoid: FiniteMonoid, doc: dict) -> RepData:
    body = doc["rep"]
    mats = [Matrix([[rat(x) for x in row] for row in m])
            for m in body["matrices"]]
    return RepData(monoid, mats)
