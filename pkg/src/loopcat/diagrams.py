"""Decorated oriented matchings: the free rigid symmetric envelope of a category.

Objects are signed sequences ((X, +1), (Y, -1), ...) of objects of a base
category C.  A morphism from one signed sequence to another is drawn as a
diagram, but since every crossing is virtual the whole isotopy class is
captured by combinatorial data:

  * endpoints are indexed 0..(|source| + |target| - 1), source entries first;
  * each endpoint has an *effective* sign: a target entry keeps its sign, a
    source entry flips it (reading the diagram bottom-to-top, a positive
    source strand leaves the boundary, a positive target strand arrives);
  * strand segments are arcs (tail, head, label) with the tail at an
    effective minus, the head at an effective plus, and label a morphism of
    C from the tail's object to the head's object;
  * with boundary data attached, an endpoint may instead carry a
    half-interval: a strand with a free inner end decorated by a right-set
    element (at effective plus) or a left-set element (at effective minus);
  * components without endpoints float freely: loops (canonical closed
    chains of C-morphisms) and interval classes (left/right element pairs).

Cups, caps, curls, and orientation reversals are all just matchings here, so
the rigid-category identities hold by construction; composition is splicing
of matchings, which composes labels along each chain, closes some chains
into loops, and absorbs morphisms into boundary elements.

Formal rational combinations of diagrams with common source and target make
the enveloping linear category; the antisymmetrizer lives there.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .errors import DomainError
from .fincat import compose_path
from .linalg import rat

PLUS = 1
MINUS = -1


class ObjectMismatch(DomainError):
    """Composition interface disagrees."""


def _float_key(x):
    return repr(x)


class BrauerMorphism:
    """One decorated matching.  Immutable; equality/hash are structural.

    `cat` (and `boundary`, when present) ride along for operations but are
    not part of the identity of the diagram.
    """

    __slots__ = ("cat", "boundary", "source", "target", "arcs",
                 "half_intervals", "loops", "intervals", "_hash")

    def __init__(self, cat, source, target, arcs, half_intervals=(),
                 loops=(), intervals=(), boundary=None):
        self.cat = cat
        self.boundary = boundary
        self.source = tuple((x, s) for x, s in source)
        self.target = tuple((x, s) for x, s in target)
        self.arcs = tuple(sorted(((t, h, lab) for t, h, lab in arcs),
                                 key=lambda a: (a[0], a[1])))
        self.half_intervals = tuple(sorted(half_intervals))
        self.loops = tuple(sorted(loops, key=_float_key))
        self.intervals = tuple(sorted(intervals, key=_float_key))
        self._validate()
        self._hash = hash((self.source, self.target, self.arcs,
                           self.half_intervals, self.loops, self.intervals))

    @property
    def n_endpoints(self) -> int:
        return len(self.source) + len(self.target)

    def endpoint_object(self, e: int):
        if e < len(self.source):
            return self.source[e][0]
        return self.target[e - len(self.source)][0]

    def endpoint_eff(self, e: int) -> int:
        """Effective sign: target keeps its sign, source flips it."""
        if e < len(self.source):
            return -self.source[e][1]
        return self.target[e - len(self.source)][1]

    def _validate(self):
        seen = [0] * self.n_endpoints
        for t, h, lab in self.arcs:
            seen[t] += 1
            seen[h] += 1
            assert self.endpoint_eff(t) == MINUS, f"arc tail at {t} is not eff -"
            assert self.endpoint_eff(h) == PLUS, f"arc head at {h} is not eff +"
            assert self.cat.source(lab) == self.endpoint_object(t), (
                f"label {lab!r} does not start at endpoint {t}'s object")
            assert self.cat.target(lab) == self.endpoint_object(h), (
                f"label {lab!r} does not end at endpoint {h}'s object")
        for e, _elem in self.half_intervals:
            seen[e] += 1
            assert self.boundary is not None, "half-interval without boundary data"
        assert all(c == 1 for c in seen), "endpoints not covered exactly once"
        for lp in self.loops:
            assert lp.base in self.cat.objects

    def __eq__(self, other):
        if isinstance(other, BrauerMorphism):
            return (self.source == other.source and self.target == other.target
                    and self.arcs == other.arcs
                    and self.half_intervals == other.half_intervals
                    and self.loops == other.loops
                    and self.intervals == other.intervals)
        return NotImplemented

    def __hash__(self):
        return self._hash

    def is_closed(self) -> bool:
        return self.n_endpoints == 0

    def __repr__(self):
        return (f"BrauerMorphism(src={self.source}, tgt={self.target}, "
                f"arcs={self.arcs}, half={self.half_intervals}, "
                f"loops={self.loops}, intervals={self.intervals})")


# ---------------------------------------------------------------------------
# constructors


def identity_diagram(cat, seq, boundary=None) -> BrauerMorphism:
    seq = tuple(seq)
    n = len(seq)
    arcs = []
    for k, (x, s) in enumerate(seq):
        i = cat.identity(x)
        if s == PLUS:
            arcs.append((k, n + k, i))
        else:
            arcs.append((n + k, k, i))
    return BrauerMorphism(cat, seq, seq, arcs, boundary=boundary)


def cup(cat, label, boundary=None) -> BrauerMorphism:
    """From the empty sequence to ((target(label), +), (source(label), -))."""
    tgt = ((cat.target(label), PLUS), (cat.source(label), MINUS))
    return BrauerMorphism(cat, (), tgt, [(1, 0, label)], boundary=boundary)


def cap(cat, label, boundary=None) -> BrauerMorphism:
    """From ((source(label), +), (target(label), -)) to the empty sequence."""
    src = ((cat.source(label), PLUS), (cat.target(label), MINUS))
    return BrauerMorphism(cat, src, (), [(0, 1, label)], boundary=boundary)


def perm_diagram(cat, x, sigma, labels=None, boundary=None) -> BrauerMorphism:
    """(g_1 tensor ... tensor g_n) after the permutation sigma on (x,+)^n.

    sigma is one-line notation (source strand i ends at target sigma[i]);
    labels[j] decorates the strand arriving at target j, so the arc from
    source i carries labels[sigma[i]] (identity labels if omitted).
    """
    n = len(sigma)
    assert sorted(sigma) == list(range(n)), "not a permutation"
    if labels is None:
        labels = [cat.identity(x)] * n
    seq = ((x, PLUS),) * n
    arcs = [(i, n + sigma[i], labels[sigma[i]]) for i in range(n)]
    return BrauerMorphism(cat, seq, seq, arcs, boundary=boundary)


def ket(cat, boundary, x, gr_elem) -> BrauerMorphism:
    """Half-interval from the empty sequence to ((x,+)); inner end decorated."""
    return BrauerMorphism(cat, (), ((x, PLUS),), [], [(0, gr_elem)],
                          boundary=boundary)


def closed_diagram(cat, loops=(), intervals=(), boundary=None) -> BrauerMorphism:
    return BrauerMorphism(cat, (), (), [], [], loops, intervals,
                          boundary=boundary)


def tensor(d1: BrauerMorphism, d2: BrauerMorphism) -> BrauerMorphism:
    """Place d2 to the right of d1; endpoint indices of d2 shift accordingly."""
    assert d1.cat is d2.cat, "tensor across different categories"
    assert d1.boundary is d2.boundary, "tensor across different boundary data"
    ns1, ns2, nt1 = len(d1.source), len(d2.source), len(d1.target)

    def remap1(e: int) -> int:
        return e if e < ns1 else e + ns2

    def remap2(e: int) -> int:
        return ns1 + e if e < ns2 else ns1 + nt1 + e

    arcs = [(remap1(t), remap1(h), lab) for t, h, lab in d1.arcs]
    arcs += [(remap2(t), remap2(h), lab) for t, h, lab in d2.arcs]
    half = [(remap1(e), g) for e, g in d1.half_intervals]
    half += [(remap2(e), g) for e, g in d2.half_intervals]
    return BrauerMorphism(
        d1.cat, d1.source + d2.source, d1.target + d2.target, arcs, half,
        d1.loops + d2.loops, d1.intervals + d2.intervals, boundary=d1.boundary)


# ---------------------------------------------------------------------------
# splicing


def _splice_run(cat, boundary, arcs, half, wire, outer, obj_of, eff_of):
    """Trace chains through a wired-up node graph.

    arcs: tail node -> (head node, label); half: node -> boundary element;
    wire: interface node <-> partner node; outer: node -> composite endpoint
    index.  Chains run tail-to-head through arcs and across wires; they start
    at outer effective-minus endpoints or at right-element inner ends, and
    finish at outer effective-plus endpoints or left-element inner ends.
    Whatever remains is a closed loop.  Returns composite
    (arcs, half_intervals, loops, intervals).
    """
    out_arcs, out_half, loops, intervals = [], [], [], []
    used: set = set()

    def run_from_head(h, labels):
        """Arrived at effective-plus node h; walk until the chain ends."""
        while True:
            if h in outer:
                return ("out", h, labels)
            p = wire[h]
            if p in half:
                return ("gl", p, labels)
            h2, lab = arcs[p]
            used.add(p)
            labels.append(lab)
            h = h2

    # chains starting at an outer endpoint
    for n in sorted(outer):
        if n in half:
            out_half.append((outer[n], half[n]))  # untouched half-interval
            continue
        if n not in arcs:
            continue  # head side; reached from the other end
        h, lab = arcs[n]
        used.add(n)
        kind, end, labels = run_from_head(h, [lab])
        beta = compose_path(cat, labels, at=obj_of(n))
        if kind == "out":
            out_arcs.append((outer[n], outer[end], beta))
        else:
            out_half.append((outer[n], boundary.gl(beta, half[end])))

    # chains starting at a right-element inner end on an interface node
    for n in sorted(k for k in half if k not in outer):
        if eff_of(n) == MINUS:
            continue  # left element; consumed as some chain's end
        kind, end, labels = run_from_head(n, [])
        beta = compose_path(cat, labels, at=obj_of(n))
        g = boundary.gr(beta, half[n])
        if kind == "out":
            out_half.append((outer[end], g))
        else:
            intervals.append(boundary.interval_class(obj_of(end), half[end], g))

    # remaining chains are closed loops
    for n in sorted(arcs):
        if n in used:
            continue
        labels = []
        cur = n
        while True:
            h, lab = arcs[cur]
            used.add(cur)
            labels.append(lab)
            nxt = wire[h]
            if nxt == n:
                break
            cur = nxt
        loops.append(cat.loop_class(obj_of(n), labels))

    return out_arcs, out_half, loops, intervals


def compose(d2: BrauerMorphism, d1: BrauerMorphism) -> BrauerMorphism:
    """Splice d1's target onto d2's source (d1 is traversed first)."""
    assert d1.cat is d2.cat, "compose across different categories"
    if d1.target != d2.source:
        raise ObjectMismatch(f"interface mismatch: {d1.target} vs {d2.source}")
    cat, boundary = d1.cat, d1.boundary
    ns1, nt1, ns2 = len(d1.source), len(d1.target), len(d2.source)

    arcs = {(1, t): ((1, h), lab) for t, h, lab in d1.arcs}
    arcs.update({(2, t): ((2, h), lab) for t, h, lab in d2.arcs})
    half = {(1, e): g for e, g in d1.half_intervals}
    half.update({(2, e): g for e, g in d2.half_intervals})
    wire = {}
    for k in range(nt1):
        a, b = (1, ns1 + k), (2, k)
        wire[a], wire[b] = b, a
    outer = {(1, i): i for i in range(ns1)}
    outer.update({(2, ns2 + j): ns1 + j for j in range(len(d2.target))})

    def obj_of(n):
        owner, e = n
        return (d1 if owner == 1 else d2).endpoint_object(e)

    def eff_of(n):
        owner, e = n
        return (d1 if owner == 1 else d2).endpoint_eff(e)

    out_arcs, out_half, loops, intervals = _splice_run(
        cat, boundary, arcs, half, wire, outer, obj_of, eff_of)
    return BrauerMorphism(
        cat, d1.source, d2.target, out_arcs, out_half,
        d1.loops + d2.loops + tuple(loops),
        d1.intervals + d2.intervals + tuple(intervals), boundary=boundary)


def close_up(d: BrauerMorphism) -> BrauerMorphism:
    """Join target strand k back onto source strand k for every k.

    Requires source = target (an endomorphism diagram); the result is closed.
    Equivalent to sandwiching between nested identity cups and caps — in the
    matching representation that is exactly this wiring.
    """
    if d.source != d.target:
        raise ObjectMismatch("close_up needs an endomorphism diagram")
    ns = len(d.source)
    arcs = {(0, t): ((0, h), lab) for t, h, lab in d.arcs}
    half = {(0, e): g for e, g in d.half_intervals}
    wire = {}
    for k in range(ns):
        a, b = (0, ns + k), (0, k)
        wire[a], wire[b] = b, a

    out_arcs, out_half, loops, intervals = _splice_run(
        d.cat, d.boundary, arcs, half, wire, {},
        lambda n: d.endpoint_object(n[1]), lambda n: d.endpoint_eff(n[1]))
    assert not out_arcs and not out_half
    return BrauerMorphism(d.cat, (), (), [], [],
                          d.loops + tuple(loops),
                          d.intervals + tuple(intervals), boundary=d.boundary)


def transpose(d: BrauerMorphism) -> BrauerMorphism:
    """Duality flip: swap source and target, reversing every strand.

    Arc labels are kept, so each arc must connect an object to itself
    (automatic in one-object categories, which is where pairings live).
    Boundary elements are carried across by the datum's flip (identity for
    the free self-action).
    """
    ns, nt = len(d.source), len(d.target)

    def remap(e: int) -> int:
        return e + nt if e < ns else e - ns

    arcs = []
    for t, h, lab in d.arcs:
        if d.endpoint_object(t) != d.endpoint_object(h):
            raise DomainError("transpose needs same-object strands")
        arcs.append((remap(h), remap(t), lab))
    flip = getattr(d.boundary, "flip", lambda e, elem: elem)
    half = [(remap(e), flip(e, g)) for e, g in d.half_intervals]
    return BrauerMorphism(d.cat, d.target, d.source, arcs, half,
                          d.loops, d.intervals, boundary=d.boundary)


def rotate(d: BrauerMorphism) -> BrauerMorphism:
    """Half-turn rotation: the rigid dual Hom(A, B) -> Hom(B*, A*).

    The dual of a signed sequence reverses the order and flips every sign.
    Rotating preserves each strand's orientation relative to its endpoints
    (tails stay tails), so labels keep their typing in any base category.
    Contravariant: rotate(compose(a, b)) == compose(rotate(b), rotate(a)).
    Unlike `transpose` this is the honest adjoint for the pairing, but it
    lands on the dual sequence, so only alternating-sign objects are fixed.
    """
    ns, nt = len(d.source), len(d.target)
    dual = lambda seq: tuple((x, -s) for x, s in reversed(seq))

    def remap(e: int) -> int:
        if e < ns:
            return nt + (ns - 1 - e)
        return nt - 1 - (e - ns)

    arcs = [(remap(t), remap(h), lab) for t, h, lab in d.arcs]
    half = [(remap(e), g) for e, g in d.half_intervals]
    return BrauerMorphism(d.cat, dual(d.target), dual(d.source), arcs, half,
                          d.loops, d.intervals, boundary=d.boundary)


# ---------------------------------------------------------------------------
# formal sums


class FormalSum:
    """Rational combination of diagrams sharing source and target."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict[BrauerMorphism, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        shape = None
        for d, c in items:
            c = rat(c)
            if shape is None:
                shape = (d.source, d.target)
            assert (d.source, d.target) == shape, "mixed shapes in a sum"
            acc[d] = acc.get(d, Fraction(0)) + c
        self.terms = {d: c for d, c in acc.items() if c != 0}

    @classmethod
    def lift(cls, d: BrauerMorphism) -> "FormalSum":
        return cls([(d, 1)])

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(list(self.terms.items()) + list(other.terms.items()))

    def scale(self, c) -> "FormalSum":
        c = rat(c)
        return FormalSum([(d, c * v) for d, v in self.terms.items()])

    def __eq__(self, other):
        if isinstance(other, FormalSum):
            return self.terms == other.terms
        return NotImplemented

    def __len__(self):
        return len(self.terms)

    def map_diagrams(self, f) -> "FormalSum":
        return FormalSum([(f(d), c) for d, c in self.terms.items()])


def sum_compose(s2: FormalSum, s1: FormalSum) -> FormalSum:
    out = []
    for d1, c1 in s1.terms.items():
        for d2, c2 in s2.terms.items():
            out.append((compose(d2, d1), c1 * c2))
    return FormalSum(out)


def perm_sign(sigma) -> int:
    inv = sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma))
              if sigma[i] > sigma[j])
    return -1 if inv % 2 else 1


def antisymmetrizer(cat, x, n: int) -> FormalSum:
    """Signed sum over all n! permutation diagrams on (x,+)^n, id labels."""
    assert n >= 0
    return FormalSum([(perm_diagram(cat, x, sigma), perm_sign(sigma))
                      for sigma in permutations(range(n))])


# ---------------------------------------------------------------------------
# JSON round-trip


def _obj_name(cat, x) -> str:
    alphabet = getattr(cat, "alphabet", None)
    if alphabet is not None or isinstance(x, int):
        return str(x)
    return str(x)


def _morphism_name(cat, m) -> str:
    alphabet = getattr(cat, "alphabet", None)
    if alphabet is not None:
        return "".join(alphabet[i] for i in m)
    return str(m)


def _morphism_by_name(cat, s: str):
    alphabet = getattr(cat, "alphabet", None)
    if alphabet is not None:
        return cat.word(s)
    monoid = getattr(cat, "monoid", None)
    if monoid is not None:
        return int(s)
    for m in cat.morphisms:
        if str(m) == s:
            return m
    raise ValueError(f"unknown morphism name {s!r}")


def _obj_by_name(cat, s: str):
    for x in cat.objects:
        if str(x) == s:
            return x
    raise ValueError(f"unknown object name {s!r}")


def diagram_to_json(d: BrauerMorphism) -> dict:
    cat = d.cat
    return {
        "diagram": {
            "source": [[_obj_name(cat, x), "+" if s == PLUS else "-"]
                       for x, s in d.source],
            "target": [[_obj_name(cat, x), "+" if s == PLUS else "-"]
                       for x, s in d.target],
            "arcs": [[t, h, _morphism_name(cat, lab)] for t, h, lab in d.arcs],
            "half_intervals": [[e, str(g) if not isinstance(g, tuple)
                                else _morphism_name(cat, g)]
                               for e, g in d.half_intervals],
            "loops": [{"base": _obj_name(cat, lp.base),
                       "cycle": [_morphism_name(cat, m) for m in lp.cycle]}
                      for lp in d.loops],
            "intervals": [{"base": _obj_name(cat, iv.base),
                           "gl": str(iv.gl) if not isinstance(iv.gl, tuple)
                           else _morphism_name(cat, iv.gl),
                           "gr": str(iv.gr) if not isinstance(iv.gr, tuple)
                           else _morphism_name(cat, iv.gr)}
                          for iv in d.intervals],
        }
    }


def diagram_from_json(cat, doc: dict, boundary=None) -> BrauerMorphism:
    from .fincat import IntervalClass, Loop

    body = doc["diagram"]

    def seq(entries):
        return tuple((_obj_by_name(cat, x), PLUS if s == "+" else MINUS)
                     for x, s in entries)

    def elem(s):
        if getattr(cat, "alphabet", None) is not None:
            return cat.word(s)
        return s

    loops = tuple(Loop(_obj_by_name(cat, lp["base"]),
                       tuple(_morphism_by_name(cat, m) for m in lp["cycle"]))
                  for lp in body.get("loops", []))
    intervals = tuple(IntervalClass(_obj_by_name(cat, iv["base"]),
                                    elem(iv["gl"]), elem(iv["gr"]))
                      for iv in body.get("intervals", []))
    return BrauerMorphism(
        cat, seq(body["source"]), seq(body["target"]),
        [(t, h, _morphism_by_name(cat, m)) for t, h, m in body["arcs"]],
        [(e, elem(g)) for e, g in body.get("half_intervals", [])],
        loops, intervals, boundary=boundary)
